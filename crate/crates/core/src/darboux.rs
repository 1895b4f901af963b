//! Leading-order coefficient asymptotics from boundary singularities.
//!
//! For `f(z) = (1 - z/xi)^omega A(z) + B(z)` near each singular point `xi` of
//! the unit circle, `[z^n] f ~ (1/Gamma(-omega)) sum_i A_i(xi_i) xi_i^{-n} n^{-omega-1}`
//! where only the singularities of minimal weight contribute.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// `omega = twice / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(pub i32);

impl HalfInteger {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub xi: Complex64,
    pub weight: HalfInteger,
    pub amplitude: Complex64,
}

/// `Gamma(twice / 2)`, built from `Gamma(1/2) = sqrt(pi)` and `Gamma(1) = 1`
/// by the recurrence `Gamma(x + 1) = x Gamma(x)`. Poles give infinity.
pub fn gamma_half(twice: i32) -> f64 {
    if twice <= 0 && twice % 2 == 0 {
        return f64::INFINITY;
    }
    let (mut x, mut g) = if twice % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = twice as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    while x > target {
        x -= 1.0;
        g /= x;
    }
    g
}

/// `1 / Gamma(twice / 2)`, zero at the poles.
pub fn recip_gamma_half(twice: i32) -> f64 {
    if twice <= 0 && twice % 2 == 0 {
        0.0
    } else {
        1.0 / gamma_half(twice)
    }
}

/// `[z^n](1 - z)^omega` to second order: `(1 + omega(omega+1)/(2n)) n^{-omega-1} / Gamma(-omega)`.
pub fn binomial_asymptotic(weight: HalfInteger, n: u64) -> f64 {
    let w = weight.value();
    let n = n as f64;
    recip_gamma_half(-weight.0) * (1.0 + w * (w + 1.0) / (2.0 * n)) * n.powf(-w - 1.0)
}

/// Leading Darboux term. Every weight must be a half-integer that is not a
/// nonnegative integer, and every `xi` must lie on the unit circle.
pub fn darboux_predict(singularities: &[Singularity], n: u64) -> Result<f64> {
    if let Some(s) = singularities
        .iter()
        .find(|s| s.weight.is_integer() && s.weight.0 >= 0)
    {
        return Err(WalkError::IntegerWeight {
            weight: s.weight.value(),
        });
    }
    debug_assert!(singularities.iter().all(|s| (s.xi.norm() - 1.0).abs() < 1e-12));
    let Some(min_weight) = singularities.iter().map(|s| s.weight).min() else {
        return Ok(0.0);
    };
    let sum: Complex64 = singularities
        .iter()
        .filter(|s| s.weight == min_weight)
        .map(|s| s.amplitude * s.xi.powi(-(n as i32)))
        .sum();
    let nf = n as f64;
    Ok(recip_gamma_half(-min_weight.0) * sum.re * nf.powf(-min_weight.value() - 1.0))
}

/// `(1 + z)^{a/2} (1 - z)^{b/2}`, the shape of every component of the
/// decomposed generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialProduct {
    pub a: i32,
    pub b: i32,
}

impl BinomialProduct {
    /// `sqrt((1+z)/(1-z)) (1-z^2)^{l/2}`.
    pub fn sqrt_ratio(l: i32) -> Self {
        BinomialProduct { a: l + 1, b: l - 1 }
    }

    /// `(1-z^2)^{l/2} / (1-z)`.
    pub fn over_one_minus(l: i32) -> Self {
        BinomialProduct { a: l, b: l - 2 }
    }

    /// `sqrt(1+z) / (1-z)^{3/2} (1-z^2)^{l/2}`.
    pub fn three_halves(l: i32) -> Self {
        BinomialProduct { a: l + 1, b: l - 3 }
    }

    /// `(1-z^2)^{l/2}`.
    pub fn circle_power(l: i32) -> Self {
        BinomialProduct { a: l, b: l }
    }

    /// Boundary singularities: `z = 1` unless `b` is a nonnegative even
    /// number, `z = -1` unless `a` is.
    pub fn singularities(&self) -> Vec<Singularity> {
        let mut out = Vec::new();
        let singular = |e: i32| !(e >= 0 && e % 2 == 0);
        if singular(self.b) {
            out.push(Singularity {
                xi: Complex64::new(1.0, 0.0),
                weight: HalfInteger(self.b),
                amplitude: Complex64::new(2f64.powf(self.a as f64 / 2.0), 0.0),
            });
        }
        if singular(self.a) {
            out.push(Singularity {
                xi: Complex64::new(-1.0, 0.0),
                weight: HalfInteger(self.a),
                amplitude: Complex64::new(2f64.powf(self.b as f64 / 2.0), 0.0),
            });
        }
        out
    }

    /// A polynomial has no boundary singularities at all.
    pub fn is_polynomial(&self) -> bool {
        self.singularities().is_empty()
    }

    pub fn predict(&self, n: u64) -> Result<f64> {
        darboux_predict(&self.singularities(), n)
    }
}

/// `K_alpha(z) = ((alpha-1)^2 + (alpha^2+1)((1-alpha) z + sqrt(1-z^2))) / ((alpha^2+1) z - 2 alpha)`,
/// principal square root.
///
/// Evaluated after multiplying through by `A - B sqrt(1-z^2)` (with `A`, `B`
/// the rational and radical parts of the numerator): the quadratic
/// `A^2 - B^2 (1 - z^2)` always vanishes at the zero of the denominator, so
/// that factor cancels exactly and the removable point inside the disk for
/// `|alpha| > 1` causes no loss of precision.
pub fn k_alpha(alpha: Complex64, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let b = alpha * alpha + one;
    let am1 = alpha - one;
    let root = (one - z * z).sqrt();
    let a_z = am1 * am1 - b * am1 * z;
    if b.norm() < 1e-300 {
        return (a_z + b * root) / (-2.0 * alpha);
    }
    let z0 = 2.0 * alpha / b;
    let c2 = b * b * (am1 * am1 + one);
    let c1 = -2.0 * b * am1 * am1 * am1;
    let quotient = c2 * z + (c1 + c2 * z0);
    quotient / (b * (a_z - b * root))
}

/// `(1 - z^2)^{m/2}` coefficients through `z^n_max`, binary64.
fn circle_power_coeffs(m: i32, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    let half = m as f64 / 2.0;
    let mut c = 1.0;
    let mut k = 0usize;
    while 2 * k <= n_max {
        out[2 * k] = c;
        c *= -(half - k as f64) / (k as f64 + 1.0);
        k += 1;
        if c == 0.0 {
            break;
        }
    }
    out
}

/// Taylor coefficients of `K_alpha(z) (1 - z^2)^{l/2}` through `z^n_max`, binary64.
///
/// With `z0 = 2 alpha / (alpha^2 + 1)`: for `|z0| >= 1` the division by the
/// linear denominator runs forward (contracting by `|1/z0|`); for `|z0| < 1`
/// and `|alpha| > 1` the numerator vanishes at `z0` and the quotient is formed
/// from backward tail sums, which contract by `|z0|`.
pub fn k_alpha_coefficients(alpha: Complex64, l: i32, n_max: usize) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let b = alpha * alpha + one;
    let am1 = alpha - one;
    let z0 = if b.norm() > 0.0 { 2.0 * alpha / b } else { Complex64::new(f64::INFINITY, 0.0) };
    let backward = z0.norm() < 1.0 && alpha.norm() > 1.0;
    let extra = if backward {
        ((1e-20f64).ln() / z0.norm().ln()).ceil().clamp(0.0, 2.0e6) as usize
    } else {
        0
    };
    let len = n_max + extra + 1;

    let lower = circle_power_coeffs(l, len);
    let upper = circle_power_coeffs(l + 1, len);
    let c0 = am1 * am1;
    let c1 = -b * am1;
    let numer: Vec<Complex64> = (0..=len)
        .map(|i| {
            let prev = if i > 0 { lower[i - 1] } else { 0.0 };
            c0 * lower[i] + c1 * prev + b * upper[i]
        })
        .collect();

    if b.norm() == 0.0 {
        return numer[..=n_max].iter().map(|&c| c / (-2.0 * alpha)).collect();
    }
    if backward {
        // K = (N(z) - N(z0)) / (b (z - z0)), N(z0) = 0
        let mut tail = Complex64::new(0.0, 0.0);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for m in (0..len).rev() {
            tail = numer[m + 1] + z0 * tail;
            out[m] = tail / b;
        }
        out.truncate(n_max + 1);
        out
    } else {
        // K_n (-2 alpha) + b K_{n-1} = N_n
        let mut out = Vec::with_capacity(n_max + 1);
        let mut prev = Complex64::new(0.0, 0.0);
        for &nc in &numer[..=n_max] {
            let k = (nc - b * prev) / (-2.0 * alpha);
            out.push(k);
            prev = k;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::binomial_coefficient_at;
    use num_traits::ToPrimitive;

    #[test]
    fn gamma_at_half_integers() {
        let sqrt_pi = PI.sqrt();
        assert!((gamma_half(1) - sqrt_pi).abs() < 1e-15);
        assert!((gamma_half(3) - sqrt_pi / 2.0).abs() < 1e-15);
        assert!((gamma_half(-1) + 2.0 * sqrt_pi).abs() < 1e-14);
        assert!((gamma_half(-3) - 4.0 * sqrt_pi / 3.0).abs() < 1e-14);
        assert_eq!(gamma_half(8), 6.0);
        assert!(gamma_half(0).is_infinite());
        assert_eq!(recip_gamma_half(-4), 0.0);
    }

    #[test]
    fn central_binomial_leading_term() {
        let s = Singularity {
            xi: Complex64::new(1.0, 0.0),
            weight: HalfInteger(-1),
            amplitude: Complex64::new(1.0, 0.0),
        };
        let predicted = darboux_predict(&[s], 100).unwrap();
        assert!((predicted - 0.0564190).abs() < 5e-8);
        let exact = binomial_coefficient_at(0, -1, 100).to_f64().unwrap();
        assert!((exact - 0.0563485).abs() < 5e-8);
        let rel = (predicted - exact) / exact;
        assert!((rel - 1.0 / 800.0).abs() < 1e-5, "{rel}");
        // the second-order expansion closes most of that gap
        let second = binomial_asymptotic(HalfInteger(-1), 100);
        assert!(((second - exact) / exact).abs() < 1e-5);
    }

    #[test]
    fn integer_weight_is_rejected() {
        let s = Singularity {
            xi: Complex64::new(1.0, 0.0),
            weight: HalfInteger(2),
            amplitude: Complex64::new(1.0, 0.0),
        };
        assert_eq!(
            darboux_predict(&[s], 10),
            Err(WalkError::IntegerWeight { weight: 1.0 })
        );
    }

    #[test]
    fn leading_constants_of_binomial_products() {
        let c = 2.0 / (2.0 * PI).sqrt();
        let n = 400u64;
        let nf = n as f64;
        let l2 = BinomialProduct::sqrt_ratio(0).predict(n).unwrap();
        assert!((l2 - c / nf.sqrt()).abs() < 1e-15);
        let l3 = BinomialProduct::three_halves(0).predict(n).unwrap();
        assert!((l3 - 2.0 * c * nf.sqrt()).abs() < 1e-12);
        let l3_1 = BinomialProduct::three_halves(1).predict(n).unwrap();
        assert!((l3_1 - 2.0).abs() < 1e-15);
        let l3_2 = BinomialProduct::three_halves(2).predict(n).unwrap();
        assert!((l3_2 - 2.0 * c / nf.sqrt()).abs() < 1e-15);
        let l5_0 = BinomialProduct::over_one_minus(0).predict(n).unwrap();
        assert!((l5_0 - 1.0).abs() < 1e-15);
        assert!(BinomialProduct::circle_power(4).is_polynomial());
        assert!(BinomialProduct::sqrt_ratio(1).is_polynomial());
    }

    #[test]
    fn k_alpha_at_origin() {
        for alpha in [
            Complex64::new(-1.4, 0.0),
            Complex64::new(0.1, 0.8),
            Complex64::new(3.0, -2.0),
            Complex64::new(-1.0, 0.0),
        ] {
            let expected = -(alpha * alpha - alpha + 1.0) / alpha;
            assert!((k_alpha(alpha, Complex64::new(0.0, 0.0)) - expected).norm() < 1e-13);
            assert!((k_alpha_coefficients(alpha, 0, 3)[0] - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn k_alpha_matches_direct_formula_away_from_z0() {
        let one = Complex64::new(1.0, 0.0);
        for alpha in [Complex64::new(-1.4, 0.2), Complex64::new(0.3, 0.5), Complex64::new(2.5, 0.0)] {
            for z in [Complex64::new(0.2, 0.1), Complex64::new(-0.45, 0.0), Complex64::new(0.0, -0.3)] {
                let b = alpha * alpha + one;
                let direct = ((alpha - one).powi(2) + b * ((one - alpha) * z + (one - z * z).sqrt()))
                    / (b * z - 2.0 * alpha);
                assert!((k_alpha(alpha, z) - direct).norm() < 1e-12, "{alpha} {z}");
            }
        }
    }

    #[test]
    fn k_alpha_series_sums_to_closed_form() {
        for alpha in [
            Complex64::new(-1.416, 0.0),
            Complex64::new(0.108, 0.833),
            Complex64::new(5.0, 0.0),
            Complex64::new(1.2, 1.1),
        ] {
            for l in 0..3 {
                let coeffs = k_alpha_coefficients(alpha, l, 200);
                let z = Complex64::new(0.3, -0.2);
                let sum = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
                let closed = k_alpha(alpha, z) * (1.0 - z * z).powf(l as f64 / 2.0);
                assert!((sum - closed).norm() < 1e-12, "alpha={alpha} l={l}: {sum} vs {closed}");
            }
        }
    }

    #[test]
    fn k_minus_one_is_two_plus_sqrt_ratio() {
        let coeffs = k_alpha_coefficients(Complex64::new(-1.0, 0.0), 0, 40);
        assert!((coeffs[0].re - 3.0).abs() < 1e-14);
        for (n, c) in coeffs.iter().enumerate().skip(1) {
            let exact = binomial_coefficient_at(-1, 1, n).to_f64().unwrap();
            assert!((c.re - exact).abs() < 1e-13);
        }
    }
}
