//! Numeric roots of square-free one-variable polynomials.
//!
//! Aberth iteration first; if it stalls, eigenvalues of the companion matrix
//! followed by a few Newton steps.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const MAX_ITERATIONS: usize = 200;
pub const CONVERGENCE: f64 = 1e-13;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Rounding-level bound for `|p(z)|`.
fn eval_bound(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm()) * 8.0 * f64::EPSILON
}

fn converged(coeffs: &[Complex64], z: Complex64, step: Complex64) -> bool {
    let (p, _) = horner(coeffs, z);
    step.norm() <= CONVERGENCE * z.norm().max(f64::MIN_POSITIVE) || p.norm() <= eval_bound(coeffs, z)
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let center = -coeffs[n - 1] / (lead * n as f64);
    // Fujiwara-type bound on the root modulus
    let radius = (1..=n)
        .map(|k| (coeffs[n - k] / lead).norm().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, angle)
        })
        .collect()
}

fn aberth(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let mut z = initial_guesses(coeffs);
    for _ in 0..MAX_ITERATIONS {
        let mut done = true;
        for k in 0..n {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.is_finite() {
                return None;
            }
            z[k] -= step;
            if !converged(coeffs, z[k], step) {
                done = false;
            }
        }
        if done {
            return Some(z);
        }
    }
    None
}

fn newton_polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        let next = z - step;
        if horner(coeffs, next).0.norm() >= p.norm() {
            break;
        }
        z = next;
        if step.norm() <= CONVERGENCE * z.norm() {
            break;
        }
    }
    z
}

fn companion(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for k in 1..n {
        m[(k, k - 1)] = Complex64::new(1.0, 0.0);
    }
    for k in 0..n {
        m[(k, n - 1)] = -coeffs[k] / lead;
    }
    let eig = m.schur().eigenvalues()?;
    let roots: Vec<Complex64> = eig.iter().map(|&z| newton_polish(coeffs, z)).collect();
    roots.iter().all(|z| z.is_finite()).then_some(roots)
}

/// All roots of the polynomial with ascending coefficients `coeffs`.
/// `None` when both methods fail.
pub fn find_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    match coeffs.len() {
        0 => return None,
        1 => return Some(Vec::new()),
        2 => return Some(vec![-coeffs[0] / coeffs[1]]),
        _ => {}
    }
    aberth(&coeffs).or_else(|| companion(&coeffs))
}
