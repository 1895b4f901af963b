//! Exact truncated power series over the rationals.
//!
//! Products are formed over a common denominator so the quadratic inner loop
//! is big-integer multiply-accumulate; only the `M + 1` output coefficients are
//! reduced. Reciprocals use Newton iteration on top of that product.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, WalkError};
use crate::jump_model::JumpDistribution;
use crate::poly::RationalPoly;

/// Coefficients `c_0..=c_M` of a power series known exactly through order `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series of `z`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()], order)
    }

    /// `1 / (1 - z)`.
    pub fn geometric(order: usize) -> Self {
        Self::new(vec![BigRational::one(); order + 1], order)
    }

    pub fn from_poly(p: &RationalPoly, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplication by `1 / (1 - z)`.
    pub fn partial_sums(&self) -> Self {
        let mut acc = BigRational::zero();
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    acc += c;
                    acc.clone()
                })
                .collect(),
        }
    }

    pub fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        let (a_num, a_den) = common_denominator(&self.coeffs[..=order.min(self.order())]);
        let (b_num, b_den) = common_denominator(&other.coeffs[..=order.min(other.order())]);
        let den = a_den * b_den;
        let coeffs = (0..=order)
            .map(|n| {
                let lo = n.saturating_sub(b_num.len() - 1);
                let hi = n.min(a_num.len() - 1);
                let mut acc = BigInt::zero();
                for i in lo..=hi {
                    let (x, y) = (&a_num[i], &b_num[n - i]);
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                BigRational::new(acc, den.clone())
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let order = self.order();
        let mut base = self.clone();
        let mut acc = Self::one(order);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(WalkError::ZeroConstantTerm);
        }
        let order = self.order();
        let mut inv = Self::constant(self.coeffs[0].recip(), 0);
        let mut known = 0;
        while known < order {
            let next = (2 * known + 1).min(order);
            // inv <- inv + inv * (1 - a * inv), each doubling the correct prefix.
            let residual = Self::one(next) - self.mul_truncated(&inv, next);
            let correction = inv.mul_truncated(&residual, next);
            inv = inv.truncate(next) + correction;
            known = next;
        }
        Ok(inv)
    }

    /// `p(self)` by Horner's rule.
    pub fn compose_poly(&self, p: &RationalPoly) -> Self {
        let order = self.order();
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(order), |acc, c| {
                &acc * self + Self::constant(c.clone(), order)
            })
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }
}

/// Writes `coeffs[i] = numer[i] / den` with `den` the lcm of all denominators.
fn common_denominator(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| {
            if c.denom().is_one() || (&acc % c.denom()).is_zero() {
                acc
            } else {
                acc.lcm(c.denom())
            }
        });
    let numer = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                BigInt::zero()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (numer, den)
}

fn check_same_order(a: &TruncatedSeries, b: &TruncatedSeries) -> usize {
    assert_eq!(a.order(), b.order(), "series orders differ");
    a.order()
}

impl Add for TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self + &rhs
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_same_order(self, rhs);
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self - &rhs
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_same_order(self, rhs);
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = check_same_order(self, rhs);
        self.mul_truncated(rhs, order)
    }
}

impl Mul for TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self * &rhs
    }
}

/// `4^k * binom(m/2, k)`, `k = 0..=order`. These are integers for every `m`:
/// the only primes dividing the denominator of `binom(m/2, k)` are 2, to a
/// power at most `2k`.
fn scaled_half_binomials(m: i64, order: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(order + 1);
    let mut cur = BigInt::one();
    out.push(cur.clone());
    for k in 0..order as i64 {
        cur *= 2 * (m - 2 * k);
        let (q, r) = cur.div_rem(&BigInt::from(k + 1));
        debug_assert!(r.is_zero());
        cur = q;
        out.push(cur.clone());
    }
    out
}

fn half_power_series(m: i64, sign: i64, order: usize) -> TruncatedSeries {
    let scaled = scaled_half_binomials(m, order);
    let mut four_k = BigInt::one();
    let coeffs = scaled
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let signed = if sign < 0 && k % 2 == 1 { -c } else { c };
            let value = BigRational::new(signed, four_k.clone());
            four_k <<= 2;
            value
        })
        .collect();
    TruncatedSeries { coeffs }
}

/// Exact coefficients of `(1 + z)^{a/2} (1 - z)^{b/2}` through order `order`.
pub fn binomial_series(a: i64, b: i64, order: usize) -> TruncatedSeries {
    &half_power_series(a, 1, order) * &half_power_series(b, -1, order)
}

/// Single coefficient `[z^n] (1 + z)^{a/2} (1 - z)^{b/2}`, computed as one
/// integer convolution over a `4^n` denominator. Linear in `n`, so it reaches
/// `n = 10^4` without building the whole series.
pub fn binomial_coefficient_at(a: i64, b: i64, n: usize) -> BigRational {
    let u = scaled_half_binomials(a, n);
    let mut v = scaled_half_binomials(b, n);
    for (k, c) in v.iter_mut().enumerate() {
        if k % 2 == 1 {
            *c = -c.clone();
        }
    }
    let acc: BigInt = (0..=n)
        .filter(|&k| !u[k].is_zero() && !v[n - k].is_zero())
        .map(|k| &u[k] * &v[n - k])
        .sum();
    BigRational::new(acc, BigInt::one() << (2 * n))
}

/// `rho(z) = (1 - sqrt(1 - z^2)) / z`, odd, with `rho(0) = 0`.
pub fn rho_series(order: usize) -> TruncatedSeries {
    // sqrt(1 - z^2) = (1 + z)^{1/2} (1 - z)^{1/2}
    let root = binomial_series(1, 1, order + 1);
    let mut coeffs: Vec<BigRational> = root.coeffs[1..].iter().map(|c| -c).collect();
    coeffs.truncate(order + 1);
    TruncatedSeries::new(coeffs, order)
}

/// `H_j(z) = sum_n E(X_n | X_0 = j) z^n` through order `order`:
/// `2 E(Y) rho^{j+1} / ((1 - z) phi(rho)) + j / (1 - z)`.
pub fn h_series(d: &JumpDistribution, j: usize, order: usize) -> TruncatedSeries {
    let jq = BigRational::from_integer(j.into());
    let shift = TruncatedSeries::geometric(order).scale(&jq);
    let mean = d.mean();
    if mean.is_zero() {
        return shift;
    }
    let rho = rho_series(order);
    let phi_rho = rho.compose_poly(&d.phi_polynomial());
    let inv = phi_rho
        .reciprocal()
        .expect("phi(rho(0)) = phi(0) = 1 is never zero");
    let two_mean = mean * BigRational::from_integer(2.into());
    let core = (&rho.pow(j as u32 + 1) * &inv).partial_sums().scale(&two_mean);
    core + shift
}

/// Exact `E(X_n | X_0 = j)` as the `n`-th coefficient of `H_j`.
pub fn expected_position_series(d: &JumpDistribution, j: usize, n: usize) -> BigRational {
    h_series(d, j, n).coeffs.swap_remove(n)
}

/// `E(X_t | X_0 = j)` for `t = 0..=n_max` from one series expansion.
pub fn expected_positions_series(d: &JumpDistribution, j: usize, n_max: usize) -> Vec<BigRational> {
    h_series(d, j, n_max).into_coeffs()
}

/// True when every coefficient is nonnegative.
pub fn all_nonnegative(s: &TruncatedSeries) -> bool {
    s.coeffs.iter().all(|c| !c.is_negative())
}
