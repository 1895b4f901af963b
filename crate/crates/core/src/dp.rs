//! Exact forward evolution of the walk's distribution.
//!
//! Masses are kept as big-integer numerators over one shared denominator.
//! Every step multiplies the denominator by `2D`, where `D` is the common
//! denominator of the jump law, so a step is pure integer arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::jump_model::JumpDistribution;

/// Distribution of `X_n` given `X_0 = start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbVector {
    numer: Vec<BigInt>,
    denom: BigInt,
    time: usize,
    start: usize,
}

impl ProbVector {
    pub fn point_mass(start: usize) -> Self {
        let mut numer = vec![BigInt::zero(); start + 1];
        numer[start] = BigInt::from(1);
        ProbVector {
            numer,
            denom: BigInt::from(1),
            time: 0,
            start,
        }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Number of stored sites; every site at or beyond this has zero mass.
    pub fn support_len(&self) -> usize {
        self.numer.len()
    }

    pub fn mass(&self, k: usize) -> BigRational {
        match self.numer.get(k) {
            Some(m) => BigRational::new(m.clone(), self.denom.clone()),
            None => BigRational::zero(),
        }
    }

    pub fn masses(&self) -> Vec<BigRational> {
        (0..self.numer.len()).map(|k| self.mass(k)).collect()
    }

    pub fn total_mass(&self) -> BigRational {
        BigRational::new(self.numer.iter().sum(), self.denom.clone())
    }

    /// `sum_k k P(X_n = k)`.
    pub fn expected_position(&self) -> BigRational {
        let weighted: BigInt = self
            .numer
            .iter()
            .enumerate()
            .map(|(k, m)| m * BigInt::from(k))
            .sum();
        BigRational::new(weighted, self.denom.clone())
    }

    /// Lossy view used by the floating-point diagnostics.
    pub fn masses_f64(&self) -> Vec<f64> {
        self.masses()
            .iter()
            .map(|m| m.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// One transition: interior sites split their mass evenly between the two
    /// neighbours (site 1 feeds the origin), the origin redistributes by `p_k`.
    pub fn step(&self, d: &JumpDistribution) -> ProbVector {
        let scale = d.common_denominator();
        let jump: Vec<BigInt> = d
            .probs()
            .iter()
            .map(|p| p.numer() * (&scale / p.denom()))
            .collect();
        self.step_scaled(&scale, &jump)
    }

    fn step_scaled(&self, scale: &BigInt, jump: &[BigInt]) -> ProbVector {
        let len = (self.numer.len() + 1).max(jump.len());
        let mut next = vec![BigInt::zero(); len];
        for (k, m) in self.numer.iter().enumerate().skip(1) {
            if m.is_zero() {
                continue;
            }
            let half = m * scale;
            next[k - 1] += &half;
            next[k + 1] += half;
        }
        let origin = &self.numer[0];
        if !origin.is_zero() {
            let twice = origin * 2;
            for (k, pk) in jump.iter().enumerate() {
                next[k] += &twice * pk;
            }
        }
        while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        ProbVector {
            numer: next,
            denom: &self.denom * scale * 2,
            time: self.time + 1,
            start: self.start,
        }
    }
}

/// Iterator over the distributions at times `0, 1, 2, ...`.
pub struct Evolution<'a> {
    current: Option<ProbVector>,
    scale: BigInt,
    jump: Vec<BigInt>,
    _dist: &'a JumpDistribution,
}

impl Iterator for Evolution<'_> {
    type Item = ProbVector;

    fn next(&mut self) -> Option<ProbVector> {
        let current = self.current.take()?;
        self.current = Some(current.step_scaled(&self.scale, &self.jump));
        Some(current)
    }
}

pub fn evolve(d: &JumpDistribution, start: usize) -> Evolution<'_> {
    let scale = d.common_denominator();
    let jump = d
        .probs()
        .iter()
        .map(|p| p.numer() * (&scale / p.denom()))
        .collect();
    Evolution {
        current: Some(ProbVector::point_mass(start)),
        scale,
        jump,
        _dist: d,
    }
}

/// Exact `E(X_n | X_0 = j)`.
pub fn expected_position_dp(d: &JumpDistribution, j: usize, n: usize) -> BigRational {
    evolve(d, j)
        .nth(n)
        .expect("evolution is infinite")
        .expected_position()
}

/// Exact `E(X_t | X_0 = j)` for every `t` in `0..=n_max`.
pub fn expected_positions_dp(d: &JumpDistribution, j: usize, n_max: usize) -> Vec<BigRational> {
    evolve(d, j)
        .take(n_max + 1)
        .map(|v| v.expected_position())
        .collect()
}

/// `rho(z)`: the root of `z(w^2 + 1) = 2w` inside the unit disk, for real `|z| < 1`.
pub fn rho_real(z: f64) -> f64 {
    // z / (1 + sqrt(1 - z^2)) avoids the cancellation in (1 - sqrt(1 - z^2)) / z.
    z / (1.0 + (1.0 - z * z).sqrt())
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Closed form of `F_j(w, z) = sum_n sum_k P(X_n = k | X_0 = j) w^k z^n` for
/// real `w` in `[0, 1]` and real `|z| < 1`.
pub fn bivariate_closed_form(d: &JumpDistribution, j: usize, w: f64, z: f64) -> f64 {
    if z == 0.0 {
        return w.powi(j as i32);
    }
    let phi = d.phi_polynomial();
    let phi_c = phi.to_f64();
    let dphi_c = phi.derivative().to_f64();
    let r = rho_real(z);
    let phi_r = horner(&phi_c, r);
    let prefactor = 2.0 / phi_r;
    let rj1 = r.powi(j as i32 + 1);
    let denom = z * (w * w + 1.0) - 2.0 * w;
    if denom.abs() > 1e-12 {
        let numer = rj1 * horner(&phi_c, w) - phi_r * w.powi(j as i32 + 1);
        prefactor * numer / denom
    } else {
        // w coincides with rho(z): the singularity is removable, take the limit.
        let numer = rj1 * horner(&dphi_c, w) - phi_r * (j as f64 + 1.0) * w.powi(j as i32);
        prefactor * numer / (2.0 * z * w - 2.0)
    }
}

/// `|F_j(w, z) - sum_{n <= n_max} z^n f_{j,n}(w)|` where the partial sum comes
/// from the exact distributions. Bounded by `|z|^{n_max + 1} / (1 - |z|)` up to
/// rounding.
pub fn f_bivariate_residual(d: &JumpDistribution, j: usize, w: f64, z: f64, n_max: usize) -> f64 {
    let closed = bivariate_closed_form(d, j, w, z);
    let mut partial = 0.0;
    let mut zn = 1.0;
    for v in evolve(d, j).take(n_max + 1) {
        partial += zn * horner(&v.masses_f64(), w);
        zn *= z;
    }
    (closed - partial).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn reference_law() -> JumpDistribution {
        JumpDistribution::from_ratios(&[(3, 10), (1, 10), (1, 10), (1, 2)]).unwrap()
    }

    #[test]
    fn one_step_from_site_one() {
        let v = ProbVector::point_mass(1).step(&reference_law());
        assert_eq!(v.masses(), vec![q(1, 2), q(0, 1), q(1, 2)]);
        assert_eq!(v.time(), 1);
    }

    #[test]
    fn one_step_from_origin_is_the_jump_law() {
        let v = ProbVector::point_mass(0).step(&reference_law());
        assert_eq!(v.masses(), vec![q(3, 10), q(1, 10), q(1, 10), q(1, 2)]);
    }

    #[test]
    fn expectation_examples() {
        let d = reference_law();
        assert_eq!(expected_position_dp(&d, 0, 1), q(9, 5));
        assert_eq!(expected_position_dp(&d, 0, 2), q(117, 50));
        let e100 = expected_position_dp(&d, 5, 100).to_f64().unwrap();
        assert!((e100 - 9.64614).abs() < 1e-5, "{e100}");
    }

    #[test]
    fn mass_and_support_invariants() {
        let d = reference_law();
        for v in evolve(&d, 2).take(40) {
            assert!(v.total_mass().is_one());
            assert!(v.support_len() <= 3 + v.time() + 1);
        }
    }

    #[test]
    fn stuck_walk_keeps_its_mean() {
        let d = JumpDistribution::from_ratios(&[(1, 1)]).unwrap();
        for j in 0..6 {
            let traj = expected_positions_dp(&d, j, 50);
            assert!(traj.iter().all(|e| *e == BigRational::from_integer(j.into())));
        }
    }

    #[test]
    fn interior_walk_is_a_martingale() {
        let d = reference_law();
        let v = ProbVector::point_mass(4);
        // Site 0 is empty for the first few steps from 4.
        let mut cur = v;
        for _ in 0..3 {
            assert!(cur.mass(0).is_zero());
            let next = cur.step(&d);
            assert_eq!(next.expected_position(), cur.expected_position());
            cur = next;
        }
    }

    #[test]
    fn bivariate_normalization_at_w_one() {
        let d = reference_law();
        for &z in &[0.1, 0.5, 0.9] {
            let closed = bivariate_closed_form(&d, 3, 1.0, z);
            assert!((closed - 1.0 / (1.0 - z)).abs() < 1e-12 / (1.0 - z));
            let r = f_bivariate_residual(&d, 3, 1.0, z, 40);
            assert!(r <= z.powi(41) / (1.0 - z) + 1e-12);
        }
    }

    #[test]
    fn bivariate_residual_examples() {
        let d = reference_law();
        assert_eq!(f_bivariate_residual(&d, 3, 0.4, 0.0, 0), 0.0);
        assert!(f_bivariate_residual(&d, 0, 0.0, 0.5, 60) < 1e-15);
        let z: f64 = 0.5;
        let r = f_bivariate_residual(&d, 2, 0.999_999, z, 30);
        assert!(r <= z.powi(31) / (1.0 - z) + 1e-12, "{r}");
    }

    #[test]
    fn removable_point_w_equals_rho() {
        let d = reference_law();
        let z = 0.6;
        let w = rho_real(z);
        let at = bivariate_closed_form(&d, 1, w, z);
        let near = bivariate_closed_form(&d, 1, w + 1e-7, z);
        assert!((at - near).abs() < 1e-5, "{at} vs {near}");
    }
}
