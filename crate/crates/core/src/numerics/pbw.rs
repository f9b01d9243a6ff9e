use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraContext, Mode};
use crate::error::{NumericsError, ReprError};
use crate::repr::{
    boundary_generators, certify_compression, fock_generators, rep_apply, BoundaryConfig, FockConfig,
};
use crate::rewrite::CanonicalMonomial;

/// Numerical rank of the canonical monomials under a truncated representation.
#[derive(Debug, Clone, PartialEq)]
pub struct PbwRank {
    pub monomials: usize,
    pub rank: usize,
    /// Smallest singular value of the Gram matrix of the normalised images.
    pub min_singular_value: f64,
}

/// Maps every canonical monomial of degree `≤ max_degree` to its certified
/// representation matrix (Fock for the ball, boundary for the sphere),
/// normalises the images and inspects their Gram matrix.
pub fn pbw_rank(
    ctx: &AlgebraContext,
    max_degree: usize,
    truncation: usize,
    theta: Option<usize>,
    q: f64,
) -> Result<PbwRank, NumericsError> {
    if truncation < max_degree + 1 {
        return Err(ReprError::TruncationTooSmall { truncation, word_length: max_degree + 1 }.into());
    }
    let rep = match ctx.mode() {
        Mode::Ball => fock_generators(&FockConfig::new(ctx.n(), truncation, q)?)?,
        Mode::Sphere => {
            let m = theta.ok_or_else(|| NumericsError::InvalidSchedule("sphere mode needs a theta order".into()))?;
            boundary_generators(&BoundaryConfig::new(ctx.n(), truncation, m, q)?)?
        }
    };
    let cert = certify_compression(&rep, max_degree)?;
    let monomials = CanonicalMonomial::enumerate(ctx, max_degree);
    let rows = rep.dim();
    let mut images: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(monomials.len());
    for mono in &monomials {
        let a = cert.compress_columns(&rep_apply(&mono.to_poly(), &rep)?);
        let norm = a.frobenius_sq().sqrt();
        let v: Vec<(usize, Complex64)> = if norm > 0.0 {
            a.entries().map(|(r, c, x)| (c * rows + r, x / norm)).collect()
        } else {
            Vec::new()
        };
        images.push(v);
    }
    let k = images.len();
    let dense: Vec<Vec<(usize, Complex64)>> = images;
    let mut gram = DMatrix::from_element(k, k, Complex64::new(0.0, 0.0));
    let width = rows * cert.dim();
    let mut scratch = vec![Complex64::new(0.0, 0.0); width];
    for i in 0..k {
        for &(idx, x) in &dense[i] {
            scratch[idx] = x;
        }
        for j in i..k {
            let g: Complex64 = dense[j].iter().map(|&(idx, y)| scratch[idx].conj() * y).sum();
            gram[(i, j)] = g;
            gram[(j, i)] = g.conj();
        }
        for &(idx, _) in &dense[i] {
            scratch[idx] = Complex64::new(0.0, 0.0);
        }
    }
    let sv = gram.singular_values();
    let smax = sv.max();
    let min_singular_value = if k == 0 { 0.0 } else { sv.min() };
    let cutoff = smax * k as f64 * f64::EPSILON * 16.0;
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    Ok(PbwRank { monomials: k, rank, min_singular_value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_monomials_are_independent() {
        let ctx = AlgebraContext::ball(2).unwrap();
        let r = pbw_rank(&ctx, 3, 8, None, 0.5).unwrap();
        assert_eq!(r.monomials, 35);
        assert_eq!(r.rank, 35);
        assert!(r.min_singular_value > 1e-8);
    }

    #[test]
    fn sphere_n1_monomials_are_independent() {
        // z^a and z*^b on the circle: distinct characters
        let ctx = AlgebraContext::sphere(1).unwrap();
        let r = pbw_rank(&ctx, 3, 6, Some(16), 0.5).unwrap();
        assert_eq!(r.monomials, 7);
        assert_eq!(r.rank, 7);
    }

    #[test]
    fn truncation_must_exceed_degree() {
        let ctx = AlgebraContext::ball(2).unwrap();
        assert!(pbw_rank(&ctx, 3, 3, None, 0.5).is_err());
    }
}
