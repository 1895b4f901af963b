//! Three-term large-`n` expansion of `E(X_n | X_0 = j)` and the constants behind it.
//!
//! `E(X_n | X_0 = j) = (2/sqrt(2 pi)) sqrt(n) + c2 + t3(n) / sqrt(n) + O(n^{-3/2})`
//! with `c2 = (E(Y^2) - 1) / (2 E(Y))`. Jump laws supported on odd sites add an
//! oscillating `(1/2)(-1)^{n+j+1}` inside `t3`, and `p_0 = 1` freezes the walk.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::darboux::k_alpha;
use crate::error::{Result, WalkError};
use crate::jump_model::{CaseTag, CaseVariant, JumpDistribution};
use crate::spectral::{spectrum_report_with, SpectralOptions, SpectrumReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: Option<f64>,
}

/// The closed-form constants before conversion to binary64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactConstants {
    pub c1: BigRational,
    pub c2: BigRational,
    pub c3: BigRational,
}

impl ExactConstants {
    pub fn to_f64(&self) -> Constants {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        Constants {
            c1: f(&self.c1),
            c2: f(&self.c2),
            c3: f(&self.c3),
            c4: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBreakdown {
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub total: f64,
    pub case: CaseVariant,
    /// `(-1)^{n+j+1}` for parity laws, otherwise 0.
    pub parity_sign: i8,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn moments(d: &JumpDistribution) -> (BigRational, BigRational, BigRational) {
    (d.moment(1), d.moment(2), d.moment(3))
}

pub fn constants_closed_form_exact(d: &JumpDistribution) -> Result<ExactConstants> {
    let (e1, e2, e3) = moments(d);
    if e1.is_zero() {
        return Err(WalkError::ZeroMeanJump);
    }
    let spread = &e2 - ratio(1, 1);
    let c1 = ratio(-1, 12) - &e3 / (ratio(6, 1) * &e1) + &spread * &spread / (ratio(4, 1) * &e1 * &e1);
    let c2 = &spread / (ratio(2, 1) * &e1);
    Ok(ExactConstants { c1, c2, c3: ratio(1, 2) })
}

pub fn constants_closed_form(d: &JumpDistribution) -> Result<Constants> {
    constants_closed_form_exact(d).map(|c| c.to_f64())
}

/// `[C1, C2, C3, C4]` as complex sums over the roots of `psi`.
pub fn constants_root_sum_complex(d: &JumpDistribution, report: &SpectrumReport) -> Result<[Complex64; 4]> {
    if d.classify_case().variant == CaseVariant::SpecialHalfHalf || report.psi_roots().is_empty() {
        return Err(WalkError::NoPsiRoots);
    }
    if !report.squarefree {
        return Err(WalkError::A4Violated {
            separation: report.separation,
        });
    }
    let mean = d.mean().to_f64().unwrap_or(f64::NAN);
    let dpsi = report.psi.derivative();
    let mut sums = [Complex64::new(0.0, 0.0); 4];
    for &alpha in report.psi_roots() {
        let w = dpsi.eval_complex(alpha).inv();
        let am1 = alpha - 1.0;
        sums[0] += w * alpha / (am1 * am1 * am1);
        sums[1] += w * (alpha + 1.0) / (am1 * am1);
        sums[2] += w / am1;
        sums[3] += w * alpha / (am1 * am1);
    }
    Ok([
        2.0 * mean * sums[0],
        -mean * sums[1],
        mean * sums[2],
        2.0 * mean * sums[3],
    ])
}

pub fn constants_root_sum(d: &JumpDistribution, report: &SpectrumReport) -> Result<Constants> {
    let c = constants_root_sum_complex(d, report)?;
    Ok(Constants {
        c1: c[0].re,
        c2: c[1].re,
        c3: c[2].re,
        c4: Some(c[3].re),
    })
}

/// Everything about a jump law that the expansion needs, computed once.
#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    case: CaseTag,
    separation: f64,
    e1: f64,
    spread: f64,
    skew_part: f64,
}

impl AsymptoticModel {
    pub fn new(d: &JumpDistribution) -> Result<Self> {
        Self::with_options(d, &SpectralOptions::default())
    }

    pub fn with_options(d: &JumpDistribution, opts: &SpectralOptions) -> Result<Self> {
        let mut case = d.classify_case();
        let (e1, e2, e3) = moments(d);
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        if case.variant == CaseVariant::P0One {
            case.a4 = Some(false);
            return Ok(AsymptoticModel {
                case,
                separation: 0.0,
                e1: 0.0,
                spread: -1.0,
                skew_part: 0.0,
            });
        }
        let report = spectrum_report_with(d, opts)?;
        case.a4 = Some(report.squarefree);
        // 1/3 - E3/(3 E1) + (E2 - 1)^2 / (2 E1^2), kept exact until the end
        let spread = &e2 - ratio(1, 1);
        let skew = ratio(1, 3) - &e3 / (ratio(3, 1) * &e1) + &spread * &spread / (ratio(2, 1) * &e1 * &e1);
        Ok(AsymptoticModel {
            case,
            separation: report.separation,
            e1: f(&e1),
            spread: f(&spread),
            skew_part: f(&skew),
        })
    }

    pub fn case(&self) -> CaseTag {
        self.case
    }

    pub fn expectation(&self, j: usize, n: u64) -> Result<AsymptoticBreakdown> {
        self.terms(j, n, true)
    }

    /// As [`expectation`](Self::expectation); `include_parity = false` drops the
    /// oscillating contribution so its effect can be measured.
    pub fn terms(&self, j: usize, n: u64, include_parity: bool) -> Result<AsymptoticBreakdown> {
        if n == 0 {
            return Err(WalkError::NotAsymptotic);
        }
        let variant = self.case.variant;
        if variant == CaseVariant::P0One {
            let jf = j as f64;
            return Ok(AsymptoticBreakdown {
                term1: 0.0,
                term2: jf,
                term3: 0.0,
                total: jf,
                case: variant,
                parity_sign: 0,
            });
        }
        if self.case.a4 != Some(true) {
            return Err(WalkError::A4Violated {
                separation: self.separation,
            });
        }
        let norm = 1.0 / (2.0 * PI).sqrt();
        let nf = n as f64;
        let jf = j as f64;
        let parity_sign: i8 = if variant == CaseVariant::Parity {
            if (n + j as u64 + 1).is_multiple_of(2) { 1 } else { -1 }
        } else {
            0
        };
        let parity = if include_parity { 0.5 * parity_sign as f64 } else { 0.0 };
        let bracket = self.skew_part - jf * self.spread / self.e1 + jf * jf + parity;
        let term1 = 2.0 * norm * nf.sqrt();
        let term2 = self.spread / (2.0 * self.e1);
        let term3 = norm * bracket / nf.sqrt();
        Ok(AsymptoticBreakdown {
            term1,
            term2,
            term3,
            total: term1 + term2 + term3,
            case: variant,
            parity_sign,
        })
    }
}

pub fn asymptotic_expectation(d: &JumpDistribution, j: usize, n: u64) -> Result<AsymptoticBreakdown> {
    AsymptoticModel::new(d)?.expectation(j, n)
}

/// Right-hand side of the decomposition of `H_0(z)` into the four boundary
/// shapes plus the `K_alpha` corrections, principal square roots throughout.
pub fn decomposition_eval(d: &JumpDistribution, report: &SpectrumReport, z: Complex64) -> Result<Complex64> {
    let [c1, c2, c3, c4] = constants_root_sum_complex(d, report)?;
    let mean = d.mean().to_f64().unwrap_or(f64::NAN);
    let dpsi = report.psi.derivative();
    let one = Complex64::new(1.0, 0.0);
    let plus = (one + z).sqrt();
    let minus = (one - z).sqrt();
    let mut total = c1 * plus / minus + c2 / (one - z) + c3 * plus / (minus * minus * minus) + c4;
    for &alpha in report.psi_roots() {
        let am1 = alpha - 1.0;
        let weight = 2.0 * mean * alpha / (dpsi.eval_complex(alpha) * am1 * am1 * am1);
        total += weight * k_alpha(alpha, z);
    }
    Ok(total)
}
