//! Roots of `phi` as eigenvalues and resonances of the transition operator.
//!
//! A root `alpha` of `phi` maps to the spectral value `lambda = (alpha^2 + 1) / (2 alpha)`.
//! Roots inside the unit disk give discrete eigenvalues, roots outside give
//! resonances (poles of the continued resolvent), and roots on the circle give
//! resonances embedded in the essential spectrum `[-1, 1]`.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Result, WalkError};
use crate::jump_model::JumpDistribution;
use crate::poly::RationalPoly;
use crate::roots::{cluster_roots, min_separation, poly_roots, DEFAULT_ROOT_TOL};

pub const DEFAULT_EPS_CIRCLE: f64 = 1e-9;
pub const DEFAULT_SEP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralClass {
    Eigenvalue,
    Resonance,
    EmbeddedResonance,
}

impl fmt::Display for SpectralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralClass::Eigenvalue => "EIGENVALUE",
            SpectralClass::Resonance => "RESONANCE",
            SpectralClass::EmbeddedResonance => "EMBEDDED_RESONANCE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Half-width of the dead band around `|alpha| = 1`.
    pub eps_circle: f64,
    /// Root-finder update tolerance.
    pub tol: f64,
    /// Minimum root separation for `phi` to count as squarefree.
    pub sep_tol: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            eps_circle: DEFAULT_EPS_CIRCLE,
            tol: DEFAULT_ROOT_TOL,
            sep_tol: DEFAULT_SEP_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub phi: RationalPoly,
    pub psi: RationalPoly,
    /// Roots of `phi`; the first entry is always the exact root `1`.
    pub roots: Vec<Complex64>,
    pub classes: Vec<SpectralClass>,
    pub lambdas: Vec<Complex64>,
    /// Verdict on assumption A4 (no repeated roots of `phi`).
    pub squarefree: bool,
    pub separation: f64,
}

impl SpectrumReport {
    /// Roots of `psi = phi / (x - 1)`.
    pub fn psi_roots(&self) -> &[Complex64] {
        &self.roots[1..]
    }

    pub fn count(&self, class: SpectralClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Complex64, SpectralClass, Complex64)> + '_ {
        self.roots
            .iter()
            .zip(&self.classes)
            .zip(&self.lambdas)
            .map(|((&a, &c), &l)| (a, c, l))
    }
}

/// `psi` with `phi(x) = (x - 1) psi(x)`, by exact synthetic division.
pub fn psi_polynomial(d: &JumpDistribution) -> Result<RationalPoly> {
    let (psi, rem) = d.phi_polynomial().deflate(&BigRational::one());
    if !rem.is_zero() {
        return Err(WalkError::NonzeroRemainder {
            remainder: rem.to_string(),
        });
    }
    Ok(psi)
}

/// `(min separation > sep_tol, min separation)` over the computed roots of `p`.
pub fn squarefree_check(p: &RationalPoly, sep_tol: f64) -> Result<(bool, f64)> {
    let roots = poly_roots(p, DEFAULT_ROOT_TOL)?;
    let sep = min_separation(&roots);
    Ok((sep > sep_tol, sep))
}

/// `(alpha^2 + 1) / (2 alpha)`.
pub fn spectral_image(alpha: Complex64) -> Complex64 {
    (alpha * alpha + 1.0) / (2.0 * alpha)
}

pub fn classify_root(alpha: Complex64, eps_circle: f64) -> SpectralClass {
    let r = alpha.norm();
    if r < 1.0 - eps_circle {
        SpectralClass::Eigenvalue
    } else if r > 1.0 + eps_circle {
        SpectralClass::Resonance
    } else {
        SpectralClass::EmbeddedResonance
    }
}

pub fn spectrum_report(d: &JumpDistribution, eps_circle: f64, tol: f64) -> Result<SpectrumReport> {
    spectrum_report_with(
        d,
        &SpectralOptions {
            eps_circle,
            tol,
            ..SpectralOptions::default()
        },
    )
}

pub fn spectrum_report_with(d: &JumpDistribution, opts: &SpectralOptions) -> Result<SpectrumReport> {
    let phi = d.phi_polynomial();
    let psi = psi_polynomial(d)?;
    let phi_c = phi.to_f64();
    let dphi = phi.derivative();
    let dphi_c = dphi.to_f64();

    let mut roots = vec![Complex64::new(1.0, 0.0)];
    if psi.degree() >= 1 {
        for alpha in poly_roots(&psi, opts.tol)? {
            roots.push(newton_polish(&phi_c, &dphi_c, alpha));
        }
    }
    if let Some(tiny) = roots.iter().find(|a| a.norm() < opts.tol) {
        return Err(WalkError::ZeroRoot { modulus: tiny.norm() });
    }

    let classes = roots.iter().map(|&a| classify_root(a, opts.eps_circle)).collect();
    let lambdas = roots.iter().map(|&a| spectral_image(a)).collect();
    let separation = min_separation(&roots);
    Ok(SpectrumReport {
        phi,
        psi,
        roots,
        classes,
        lambdas,
        squarefree: separation > opts.sep_tol,
        separation,
    })
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// One Newton step on `phi`; leaves the point alone where `phi` or `phi'` vanishes.
fn newton_polish(phi: &[f64], dphi: &[f64], z: Complex64) -> Complex64 {
    let p = horner(phi, z);
    let dp = horner(dphi, z);
    if p.norm() == 0.0 || dp.norm() == 0.0 {
        return z;
    }
    let next = z - p / dp;
    if next.is_finite() && horner(phi, next).norm() <= p.norm() {
        next
    } else {
        z
    }
}

/// Multiplicity of the computed root cluster containing `alpha = 1`.
pub fn multiplicity_at_one(report: &SpectrumReport, radius: f64) -> usize {
    cluster_roots(&report.roots, radius)
        .into_iter()
        .find(|c| (c.center - 1.0).norm() <= radius)
        .map_or(0, |c| c.multiplicity)
}

/// `|h(alpha) - lambda|` for each root; zero in exact arithmetic since `phi(alpha) = 0`.
pub fn lambda_consistency(d: &JumpDistribution, report: &SpectrumReport) -> Vec<f64> {
    let h = d.h_polynomial().to_f64();
    report
        .entries()
        .map(|(a, _, l)| (horner(&h, a) - l).norm())
        .collect()
}

/// Spectral data in the `p_0 = 1` case: `phi = (x - 1)^2`.
pub fn is_double_at_one(report: &SpectrumReport) -> bool {
    report.psi.degree() == 1 && report.psi.eval(&BigRational::one()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn reference_law() -> JumpDistribution {
        JumpDistribution::from_ratios(&[(3, 10), (1, 10), (1, 10), (1, 2)]).unwrap()
    }

    fn default_report(d: &JumpDistribution) -> SpectrumReport {
        spectrum_report(d, DEFAULT_EPS_CIRCLE, DEFAULT_ROOT_TOL).unwrap()
    }

    #[test]
    fn psi_examples() {
        let psi = psi_polynomial(&reference_law()).unwrap();
        assert_eq!(psi.coeffs(), &[q(-1, 1), q(-2, 5), q(-6, 5), q(-1, 1)]);
        assert_eq!(psi.eval(&q(1, 1)), q(-18, 5));
        let odd = JumpDistribution::from_ratios(&[(0, 1), (1, 1)]).unwrap();
        assert_eq!(psi_polynomial(&odd).unwrap(), RationalPoly::from_integers(&[-1, -1]));
    }

    #[test]
    fn squarefree_examples() {
        let stuck = JumpDistribution::from_ratios(&[(1, 1)]).unwrap();
        assert!(!squarefree_check(&stuck.phi_polynomial(), DEFAULT_SEP_TOL).unwrap().0);
        assert!(squarefree_check(&reference_law().phi_polynomial(), DEFAULT_SEP_TOL).unwrap().0);
        let (ok, sep) = squarefree_check(&RationalPoly::from_integers(&[1, -1]), DEFAULT_SEP_TOL).unwrap();
        assert!(ok && sep.is_infinite());
    }

    #[test]
    fn n1_family_resonance() {
        let d = JumpDistribution::from_ratios(&[(3, 4), (1, 4)]).unwrap();
        let rep = default_report(&d);
        assert_eq!(rep.count(SpectralClass::Eigenvalue), 0);
        let mut lambdas: Vec<f64> = rep.lambdas.iter().map(|l| l.re).collect();
        lambdas.sort_by(f64::total_cmp);
        assert!((lambdas[0] - 1.0).abs() < 1e-14);
        assert!((lambdas[1] - 1.25).abs() < 1e-12);
        assert!(rep.lambdas.iter().all(|l| l.im.abs() < 1e-14));
    }

    #[test]
    fn parity_roots_are_embedded() {
        let d = JumpDistribution::from_ratios(&[(0, 1), (1, 1)]).unwrap();
        let rep = default_report(&d);
        assert_eq!(rep.roots.len(), 2);
        assert_eq!(rep.count(SpectralClass::EmbeddedResonance), 2);
        assert!((rep.roots[1] + 1.0).norm() < 1e-14);
        assert!((rep.lambdas[1] + 1.0).norm() < 1e-14);
    }

    #[test]
    fn reference_spectrum() {
        let d = reference_law();
        let rep = default_report(&d);
        assert_eq!(rep.roots.len(), 4);
        assert!(rep.squarefree);
        assert_eq!(rep.lambdas[0], Complex64::new(1.0, 0.0));
        for (a, c, l) in rep.entries() {
            if c == SpectralClass::Eigenvalue {
                assert!(a.norm() < 1.0 && l.norm() < 1.0);
            }
        }
        assert!(lambda_consistency(&d, &rep).iter().all(|&e| e < 1e-11));
        assert_eq!(multiplicity_at_one(&rep, DEFAULT_SEP_TOL), 1);
    }

    #[test]
    fn stuck_walk_has_double_resonance() {
        let d = JumpDistribution::from_ratios(&[(1, 1)]).unwrap();
        let rep = default_report(&d);
        assert!(!rep.squarefree);
        assert_eq!(rep.separation, 0.0);
        assert!(is_double_at_one(&rep));
        assert_eq!(multiplicity_at_one(&rep, DEFAULT_SEP_TOL), 2);
    }

    #[test]
    fn half_half_has_only_the_root_one() {
        let d = JumpDistribution::from_ratios(&[(1, 2), (1, 2)]).unwrap();
        let rep = default_report(&d);
        assert_eq!(rep.roots, vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(rep.classes, vec![SpectralClass::EmbeddedResonance]);
        assert!(rep.squarefree);
    }
}
