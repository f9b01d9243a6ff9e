//! Largest singular value of a sparse complex matrix.
//!
//! Small matrices go through a dense SVD. Larger ones use Lanczos iteration
//! on `A†A` with full reorthogonalisation, started from the normalised
//! all-ones vector. The top Ritz value is the Rayleigh quotient of
//! a unit vector, so its square root never exceeds `σ_max(A)`. Iteration stops
//! once that Ritz value has stagnated and its residual is below `tol`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::NumericsError;
use crate::sparse::SparseMatrix;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Relative tolerance on the Ritz value of `A†A`.
    pub tol: f64,
    pub max_iter: usize,
    /// Matrices with fewer columns than this use a dense SVD instead.
    pub dense_below: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { tol: DEFAULT_TOL, max_iter: 5_000, dense_below: 256 }
    }
}

/// `σ_max(A)` within relative tolerance `tol`.
pub fn operator_norm(a: &SparseMatrix, tol: f64) -> Result<f64, NumericsError> {
    operator_norm_with(a, &NormOptions { tol, ..NormOptions::default() })
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for u in basis {
            let h = dot(u, w);
            for (x, b) in w.iter_mut().zip(u) {
                *x -= h * b;
            }
        }
    }
}

/// Largest eigenvalue of the Lanczos tridiagonal and the last component of
/// its eigenvector.
fn top_ritz(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    (theta, eig.eigenvectors[(k - 1, idx)])
}

/// A deterministic unit vector orthogonal to `basis`, or `None` if the basis
/// already spans the space.
fn fresh_direction(dim: usize, basis: &[Vec<Complex64>], rng: &mut ChaCha8Rng) -> Option<Vec<Complex64>> {
    if basis.len() >= dim {
        return None;
    }
    for _ in 0..16 {
        let mut v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        orthogonalize(&mut v, basis);
        let nv = norm2(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

pub fn operator_norm_with(a: &SparseMatrix, opts: &NormOptions) -> Result<f64, NumericsError> {
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(opts.tol));
    }
    let dim = a.cols();
    if a.nnz() == 0 || dim == 0 {
        return Ok(0.0);
    }
    if dim < opts.dense_below {
        return Ok(a.to_dense().singular_values().max());
    }
    let ah = a.adjoint();
    let scale = a.frobenius_sq();
    let breakdown = 1e-14 * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let inv = 1.0 / (dim as f64).sqrt();
    let mut v = vec![Complex64::new(inv, 0.0); dim];
    let mut prev_theta = f64::NAN;
    let mut since_restart = 0usize;

    for iteration in 1..=opts.max_iter {
        let mut w = ah.matvec(&a.matvec(&v));
        alpha.push(dot(&v, &w).re);
        basis.push(v);
        orthogonalize(&mut w, &basis);
        let b = norm2(&w);
        since_restart += 1;

        let k = basis.len();
        let check = k <= 64 || k.is_multiple_of(8) || b <= breakdown || k == dim;
        if check {
            let (theta, s_last) = top_ritz(&alpha, &beta);
            if k == dim {
                return Ok(theta.max(0.0).sqrt());
            }
            let residual = b * s_last.abs();
            let stagnated = (theta - prev_theta).abs() <= opts.tol * theta;
            if theta > 0.0 && since_restart >= 4.min(dim - k + 1) && stagnated && residual <= opts.tol * theta {
                return Ok(theta.sqrt());
            }
            prev_theta = theta;
            if iteration == opts.max_iter {
                return Err(NumericsError::NoConvergence { iterations: iteration, last: theta.max(0.0).sqrt() });
            }
        } else if iteration == opts.max_iter {
            let (theta, _) = top_ritz(&alpha, &beta);
            return Err(NumericsError::NoConvergence { iterations: iteration, last: theta.max(0.0).sqrt() });
        }

        if b <= breakdown {
            // invariant subspace found; continue in its orthogonal complement
            match fresh_direction(dim, &basis, &mut rng) {
                Some(next) => {
                    beta.push(0.0);
                    v = next;
                    since_restart = 0;
                }
                None => {
                    let (theta, _) = top_ritz(&alpha, &beta);
                    return Ok(theta.max(0.0).sqrt());
                }
            }
        } else {
            beta.push(b);
            v = w.into_iter().map(|x| x / b).collect();
        }
    }
    unreachable!("loop returns on its last iteration")
}
