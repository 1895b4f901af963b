//! Simultaneous polynomial root finding (Aberth–Ehrlich) in binary64.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WalkError};
use crate::poly::RationalPoly;

pub const DEFAULT_MAX_ITER: usize = 1000;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const PHASE_SEED: u64 = 0x005e_ed0f_a6e7;

/// A group of computed roots lying within a clustering radius of each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// All complex roots of `p`, with multiplicity.
pub fn poly_roots(p: &RationalPoly, tol: f64) -> Result<Vec<Complex64>> {
    poly_roots_f64(&p.to_f64(), tol, DEFAULT_MAX_ITER)
}

/// `coeffs[i]` is the coefficient of `x^i`; trailing zeros are ignored.
pub fn poly_roots_f64(coeffs: &[f64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Err(WalkError::DegreeTooSmall { degree });
    }
    // Roots at the origin factor out exactly.
    let zeros = coeffs.iter().take_while(|&&c| c == 0.0).count();
    let reduced = &coeffs[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    match reduced.len() - 1 {
        0 => {}
        1 => roots.push(Complex64::new(-reduced[0] / reduced[1], 0.0)),
        2 => roots.extend(quadratic_roots(reduced[2], reduced[1], reduced[0])),
        _ => roots.extend(aberth(reduced, tol, max_iter)?),
    }
    Ok(roots)
}

/// Roots of `a x^2 + b x + c` without cancellation.
fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = Complex64::new(b * b - 4.0 * a * c, 0.0).sqrt();
    let bc = Complex64::new(b, 0.0);
    // pick the sign that avoids subtracting nearly equal quantities
    let q = if b >= 0.0 { -(bc + disc) / 2.0 } else { -(bc - disc) / 2.0 };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    let mut r = [q / a, Complex64::new(c, 0.0) / q];
    if r[0].re > r[1].re {
        r.swap(0, 1);
    }
    r
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let r = z.norm();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * r + c.abs();
    }
    (p, dp, bound)
}

fn aberth(coeffs: &[f64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let radius = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max((c / lead).abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(PHASE_SEED);
    let offset = TAU * unit_f64(&mut rng);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let jitter = 0.25 * unit_f64(&mut rng);
            Complex64::from_polar(radius, offset + TAU * (k as f64 + jitter) / n as f64)
        })
        .collect();
    let mut done = vec![false; n];

    for _ in 0..max_iter {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, bound) = eval_with_derivative(coeffs, z[i]);
            if p.norm() <= 8.0 * f64::EPSILON * bound {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&k| k != i)
                .map(|k| (z[i] - z[k]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            if step.norm() <= tol * z[i].norm().max(1.0) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(WalkError::NoConvergence { iterations: max_iter })
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Smallest pairwise distance; infinite for fewer than two roots.
pub fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Single-linkage grouping of roots closer than `radius`.
pub fn cluster_roots(roots: &[Complex64], radius: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for k in i + 1..n {
            if (roots[i] - roots[k]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, k));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        let root = find(&mut label, i);
        match clusters.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                c.1 += r;
                c.2 += 1;
            }
            None => clusters.push((root, r, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, m)| RootCluster {
            center: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// `|p(r)| <= tol * sum_k |a_k| max(1, |r|)^k` for every root.
pub fn residuals_within(coeffs: &[f64], roots: &[Complex64], tol: f64) -> bool {
    roots.iter().all(|&r| {
        let (p, _, _) = eval_with_derivative(coeffs, r);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * r.norm().max(1.0).powi(k as i32))
            .sum();
        p.norm() <= tol * scale
    })
}
