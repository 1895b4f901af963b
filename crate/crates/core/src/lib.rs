//! Expected position of a random walk on the nonnegative integers that moves
//! ±1 with equal probability away from the origin and jumps to site `k` with
//! probability `p_k` from the origin.
//!
//! Four independent routes compute `E(X_n | X_0 = j)`:
//!
//! * [`dp`]: exact forward evolution of the distribution,
//! * [`series`]: exact coefficient extraction from the generating function,
//! * [`asymptotics`]: the three-term expansion in `sqrt(n)`, `1`, `1/sqrt(n)`,
//! * [`montecarlo`]: direct simulation.
//!
//! [`darboux`] holds the singularity-analysis tools used to check the expansion.
//!
//! [`spectral`] classifies the roots of `phi(x) = x^2 + 1 - 2x h(x)` into
//! eigenvalues and resonances of the transition operator.

pub mod error;
pub mod jump_model;
pub mod poly;
pub mod dp;
pub mod series;
pub mod roots;
pub mod spectral;
pub mod darboux;
pub mod asymptotics;
pub mod montecarlo;

pub use error::{Result, WalkError};
pub use jump_model::{parse_rational, CaseTag, CaseVariant, JumpDistribution};
pub use poly::RationalPoly;
pub use spectral::{SpectralClass, SpectrumReport};
pub use asymptotics::{asymptotic_expectation, AsymptoticBreakdown, AsymptoticModel, Constants};
pub use montecarlo::{estimate_expectation, MCEstimate};
