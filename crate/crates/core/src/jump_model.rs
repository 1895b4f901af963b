//! Jump distributions at the origin and the polynomials built from them.
//!
//! A distribution is a finite vector `p_0..p_N` of exact rationals. From it we
//! build the probability generating function `h(x) = sum p_k x^k` and
//! `phi(x) = x^2 + 1 - 2x h(x)`, whose roots drive everything downstream.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Result, WalkError};
use crate::poly::RationalPoly;

/// Validated jump law: nonnegative, sums to exactly one, last entry nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpDistribution {
    probs: Vec<BigRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseVariant {
    /// `probs = [1]`: the walk sticks at the origin once it gets there.
    P0One,
    /// `probs = [1/2, 1/2]`: `phi(x) = 1 - x` and `psi` is constant.
    SpecialHalfHalf,
    /// All jump mass on odd sites; the `1/sqrt(n)` term picks up a sign oscillation.
    Parity,
    Generic,
}

impl fmt::Display for CaseVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseVariant::P0One => "P0_ONE",
            CaseVariant::SpecialHalfHalf => "SPECIAL_HALF_HALF",
            CaseVariant::Parity => "PARITY",
            CaseVariant::Generic => "GENERIC",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseTag {
    pub variant: CaseVariant,
    /// `p_0 < 1`.
    pub a1: bool,
    /// Some even site carries positive mass.
    pub a2: bool,
    /// Squarefree `phi`; filled in by the spectral module.
    pub a4: Option<bool>,
}

impl JumpDistribution {
    pub fn validate(raw: Vec<BigRational>) -> Result<Self> {
        if raw.is_empty() {
            return Err(WalkError::EmptyInput);
        }
        if let Some((index, value)) = raw.iter().enumerate().find(|(_, p)| p.is_negative()) {
            return Err(WalkError::NegativeProbability {
                index,
                value: value.to_string(),
            });
        }
        let sum: BigRational = raw.iter().sum();
        if !sum.is_one() {
            return Err(WalkError::SumNotOne {
                sum: sum.to_string(),
            });
        }
        let mut probs = raw;
        while probs.last().is_some_and(Zero::is_zero) {
            probs.pop();
        }
        Ok(JumpDistribution { probs })
    }

    /// Parses each entry with [`parse_rational`] and validates the result.
    pub fn from_strs<S: AsRef<str>>(raw: &[S]) -> Result<Self> {
        let probs = raw
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::validate(probs)
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(raw: &[(i64, i64)]) -> Result<Self> {
        Self::validate(
            raw.iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, k: usize) -> BigRational {
        self.probs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest jump `N`.
    pub fn max_jump(&self) -> usize {
        self.probs.len() - 1
    }

    /// Least common multiple of the denominators of all `p_k`.
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.probs
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }

    /// `E(Y^m) = sum_k p_k k^m`, with `E(Y^0) = 1`.
    pub fn moment(&self, m: u32) -> BigRational {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let km: BigInt = Pow::pow(BigInt::from(k), m);
                p * BigRational::from_integer(km)
            })
            .sum()
    }

    pub fn mean(&self) -> BigRational {
        self.moment(1)
    }

    /// `h(x) = sum_k p_k x^k`.
    pub fn h_polynomial(&self) -> RationalPoly {
        RationalPoly::new(self.probs.clone())
    }

    /// `phi(x) = x^2 + 1 - 2x h(x)`.
    pub fn phi_polynomial(&self) -> RationalPoly {
        let two = BigRational::from_integer(2.into());
        let mut coeffs = vec![BigRational::zero(); (self.probs.len() + 1).max(3)];
        coeffs[0] = BigRational::one();
        coeffs[2] = BigRational::one();
        for (k, p) in self.probs.iter().enumerate() {
            coeffs[k + 1] -= &two * p;
        }
        RationalPoly::new(coeffs)
    }

    pub fn classify_case(&self) -> CaseTag {
        let half = BigRational::new(1.into(), 2.into());
        let a1 = self.probs[0] < BigRational::one();
        let a2 = self.probs.iter().step_by(2).any(|p| !p.is_zero());
        let variant = if !a1 {
            CaseVariant::P0One
        } else if self.probs == [half.clone(), half] {
            CaseVariant::SpecialHalfHalf
        } else if !a2 {
            CaseVariant::Parity
        } else {
            CaseVariant::Generic
        };
        CaseTag {
            variant,
            a1,
            a2,
            a4: None,
        }
    }
}

impl fmt::Display for JumpDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Exact parse of `"a/b"`, integers, and decimals such as `"0.125"` or `"2.5e-1"`.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let bad = |reason: &str| WalkError::InvalidRational {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad("bad exponent"))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad("unexpected character"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad("bad digits"))?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    if shift >= 0 {
        value *= Pow::pow(&ten, shift as u32);
    } else {
        value /= Pow::pow(&ten, (-shift) as u32);
    }
    Ok(if negative { -value } else { value })
}
