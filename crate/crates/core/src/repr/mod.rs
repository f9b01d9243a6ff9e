//! Truncated matrix realizations of the irreducible *-representations.
//!
//! The Fock representation acts on `ℓ²(ℤ_+^n)` by weighted raising operators
//!
//! ```text
//! T(z_j) e_m = q^{m_{j+1} + … + m_n} · sqrt(1 - q^{2(m_j + 1)}) · e_{m + δ_j}
//! ```
//!
//! and is truncated to `|m| ≤ N`. The boundary family acts on
//! `ℓ²({m ∈ ℤ_+^{n-1}}) ⊗ ℂ^M`, with `z_1 ↦ diag(q^{|m|}) ⊗ C_M` (the cyclic
//! shift realises all M-th roots of unity at once) and `z_j`, `j ≥ 2`, acting
//! by the Fock formula on `(m_2, …, m_n)`. These satisfy `Σ z_k z_k* = 1`.
//!
//! Every generator changes the level `|m|` by at most one, so a product of at
//! most `L` letters applied to a vector with `|m| ≤ N - L` never reaches the
//! cut. On that [`CertifiedSubspace`] the truncated matrices act exactly like
//! the untruncated operators.

mod basis;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{check_q, AlgebraContext, NCPoly};
use crate::error::{NumericsError, ReprError};
use crate::numerics::operator_norm;
use crate::rewrite::defining_relations;
use crate::sparse::SparseMatrix;

pub use basis::{simplex_count, SimplexBasis, MAX_BASIS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub n: usize,
    pub truncation: usize,
    pub q: f64,
}

impl FockConfig {
    pub fn new(n: usize, truncation: usize, q: f64) -> Result<Self, ReprError> {
        let cfg = FockConfig { n, truncation, q };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ReprError> {
        if self.n == 0 {
            return Err(ReprError::InvalidConfig("n must be at least 1".into()));
        }
        if self.truncation == 0 {
            return Err(ReprError::InvalidConfig("truncation bound must be at least 1".into()));
        }
        check_q(self.q)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConfig {
    pub n: usize,
    /// Bound on `|m|` for `m ∈ ℤ_+^{n-1}`; irrelevant when `n = 1`.
    pub truncation: usize,
    /// Number of roots of unity sampled by the cyclic shift.
    pub theta_order: usize,
    pub q: f64,
}

impl BoundaryConfig {
    pub fn new(n: usize, truncation: usize, theta_order: usize, q: f64) -> Result<Self, ReprError> {
        let cfg = BoundaryConfig { n, truncation, theta_order, q };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ReprError> {
        if self.n == 0 {
            return Err(ReprError::InvalidConfig("n must be at least 1".into()));
        }
        if self.theta_order == 0 {
            return Err(ReprError::InvalidConfig("theta order M must be at least 1".into()));
        }
        check_q(self.q)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Fock,
    /// The full boundary family with the M-cycle on the `ℂ^M` factor.
    Boundary { theta_order: usize },
    /// One character `z_1 ↦ e^{2πi k/M} q^{|m|}` of the boundary family.
    BoundaryCharacter { k: usize, theta_order: usize },
}

/// Generator matrices of a truncated representation.
#[derive(Debug, Clone)]
pub struct RepMatrices {
    n: usize,
    q: f64,
    truncation: usize,
    kind: RepKind,
    generators: Vec<SparseMatrix>,
    adjoints: Vec<SparseMatrix>,
    levels: Vec<usize>,
}

impl RepMatrices {
    /// Assembles a representation from raw generator matrices.
    ///
    /// `levels[i]` is the grading `|m|` of basis vector `i`; certified
    /// compressions are computed from it.
    pub fn from_parts(
        q: f64,
        truncation: usize,
        kind: RepKind,
        generators: Vec<SparseMatrix>,
        levels: Vec<usize>,
    ) -> Result<Self, ReprError> {
        check_q(q)?;
        if generators.is_empty() {
            return Err(ReprError::InvalidConfig("at least one generator matrix is required".into()));
        }
        let dim = levels.len();
        if generators.iter().any(|g| g.rows() != dim || g.cols() != dim) {
            return Err(ReprError::InvalidConfig(format!(
                "generator matrices must all be {dim}x{dim}"
            )));
        }
        let adjoints = generators.iter().map(SparseMatrix::adjoint).collect();
        Ok(RepMatrices { n: generators.len(), q, truncation, kind, generators, adjoints, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// The matrix of `z_j` (1-based).
    pub fn generator(&self, j: usize) -> &SparseMatrix {
        &self.generators[j - 1]
    }

    /// The matrix of `z_j*`, i.e. the conjugate transpose of [`Self::generator`].
    pub fn generator_adjoint(&self, j: usize) -> &SparseMatrix {
        &self.adjoints[j - 1]
    }

    pub fn identity(&self) -> SparseMatrix {
        SparseMatrix::identity(self.dim())
    }
}

/// Weight of `z_j` on `e_m` in the Fock formula (0-based `j` within `m`).
fn fock_weight(m: &[u32], j: usize, q: f64) -> f64 {
    let tail: u32 = m[j + 1..].iter().sum();
    q.powi(tail as i32) * (1.0 - q.powi(2 * (m[j] as i32 + 1))).sqrt()
}

/// Raising matrices on a simplex basis, one per variable, tensored with the
/// identity on a factor of size `mult` (basis index `i·mult + t`).
fn raising_matrices(basis: &SimplexBasis, q: f64, mult: usize) -> Vec<SparseMatrix> {
    let dim = basis.len() * mult;
    (0..basis.vars())
        .map(|j| {
            let mut triplets = Vec::new();
            let mut target = vec![0u32; basis.vars()];
            for (i, m) in basis.iter().enumerate() {
                if basis.level(i) >= basis.truncation() {
                    continue;
                }
                target.copy_from_slice(m);
                target[j] += 1;
                let dest = basis.index_of(&target).expect("target within truncation");
                let w = Complex64::new(fock_weight(m, j, q), 0.0);
                for t in 0..mult {
                    triplets.push((dest * mult + t, i * mult + t, w));
                }
            }
            SparseMatrix::from_triplets(dim, dim, triplets)
        })
        .collect()
}

/// Truncated Fock representation on `{e_m : |m| ≤ N}`.
pub fn fock_generators(cfg: &FockConfig) -> Result<RepMatrices, ReprError> {
    cfg.validate()?;
    let basis = SimplexBasis::new(cfg.n, cfg.truncation)?;
    let generators = raising_matrices(&basis, cfg.q, 1);
    let levels = (0..basis.len()).map(|i| basis.level(i)).collect();
    RepMatrices::from_parts(cfg.q, cfg.truncation, RepKind::Fock, generators, levels)
}

/// The boundary family with the cyclic shift on `ℂ^M`.
pub fn boundary_generators(cfg: &BoundaryConfig) -> Result<RepMatrices, ReprError> {
    cfg.validate()?;
    let m_count = cfg.theta_order;
    let basis = SimplexBasis::with_multiplicity(cfg.n - 1, cfg.truncation, m_count)?;
    let dim = basis.len() * m_count;
    let z1 = SparseMatrix::from_triplets(
        dim,
        dim,
        (0..basis.len()).flat_map(|i| {
            let w = Complex64::new(cfg.q.powi(basis.level(i) as i32), 0.0);
            (0..m_count).map(move |t| (i * m_count + (t + 1) % m_count, i * m_count + t, w))
        }),
    );
    let mut generators = vec![z1];
    generators.extend(raising_matrices(&basis, cfg.q, m_count));
    let levels = (0..dim).map(|idx| basis.level(idx / m_count)).collect();
    RepMatrices::from_parts(cfg.q, cfg.truncation, RepKind::Boundary { theta_order: m_count }, generators, levels)
}

/// `e^{2πi k/M}`, computed from the reduced fraction so that nested grids
/// produce bit-identical roots.
pub fn root_of_unity(k: usize, order: usize) -> Complex64 {
    let k = k % order;
    let g = gcd(k, order);
    let (k, order) = (k / g, order / g);
    let angle = 2.0 * PI * k as f64 / order as f64;
    Complex64::from_polar(1.0, angle)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a.max(1) } else { gcd(b, a % b) }
}

/// The `k`-th character block of the boundary family: `z_1 ↦ ω_k diag(q^{|m|})`
/// on the `m`-part alone. The M-cycle representation is unitarily equivalent
/// to the direct sum of these blocks over `k = 0..M`.
pub fn boundary_character(cfg: &BoundaryConfig, k: usize) -> Result<RepMatrices, ReprError> {
    cfg.validate()?;
    let basis = SimplexBasis::new(cfg.n - 1, cfg.truncation)?;
    let omega = root_of_unity(k, cfg.theta_order);
    let z1 = SparseMatrix::diagonal(
        &(0..basis.len()).map(|i| omega * cfg.q.powi(basis.level(i) as i32)).collect::<Vec<_>>(),
    );
    let mut generators = vec![z1];
    generators.extend(raising_matrices(&basis, cfg.q, 1));
    let levels = (0..basis.len()).map(|i| basis.level(i)).collect();
    RepMatrices::from_parts(
        cfg.q,
        cfg.truncation,
        RepKind::BoundaryCharacter { k, theta_order: cfg.theta_order },
        generators,
        levels,
    )
}

/// Evaluates `p` in `rep`: letters become generator matrices (starred letters
/// their adjoints) and coefficients are evaluated at the representation's `q`.
pub fn rep_apply(p: &NCPoly, rep: &RepMatrices) -> Result<SparseMatrix, ReprError> {
    if p.n() != rep.n() {
        return Err(ReprError::DimensionMismatch { poly: p.n(), rep: rep.n() });
    }
    let dim = rep.dim();
    let mut triplets = Vec::new();
    for (w, c) in p.terms() {
        let coeff = c.eval(rep.q())?;
        let letter_matrix = |i: usize| {
            let l = w.letters()[i];
            if l.starred { rep.generator_adjoint(l.index) } else { rep.generator(l.index) }
        };
        if w.is_empty() {
            triplets.extend((0..dim).map(|i| (i, i, coeff)));
            continue;
        }
        let mut acc = letter_matrix(w.len() - 1).clone();
        for i in (0..w.len() - 1).rev() {
            acc = letter_matrix(i).matmul(&acc);
        }
        triplets.extend(acc.entries().map(|(r, col, v)| (r, col, coeff * v)));
    }
    Ok(SparseMatrix::from_triplets(dim, dim, triplets))
}

/// Basis vectors on which words of length `≤ word_length` act exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedSubspace {
    pub word_length: usize,
    pub ambient_dim: usize,
    pub indices: Vec<usize>,
}

impl CertifiedSubspace {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// `A·P`: the columns of `A` indexed by the subspace.
    pub fn compress_columns(&self, a: &SparseMatrix) -> SparseMatrix {
        a.select_columns(&self.indices)
    }

    /// `P·A·P`.
    pub fn compress(&self, a: &SparseMatrix) -> SparseMatrix {
        a.principal(&self.indices)
    }
}

/// The projection onto basis vectors with `|m| ≤ N - word_length`.
pub fn certify_compression(rep: &RepMatrices, word_length: usize) -> Result<CertifiedSubspace, ReprError> {
    if word_length > rep.truncation() {
        return Err(ReprError::TruncationTooSmall { truncation: rep.truncation(), word_length });
    }
    let cut = rep.truncation() - word_length;
    let indices = rep.levels().iter().enumerate().filter(|(_, &l)| l <= cut).map(|(i, _)| i).collect();
    Ok(CertifiedSubspace { word_length, ambient_dim: rep.dim(), indices })
}

/// Operator norm of each defining relation (and, in sphere mode, of
/// `1 - Σ z_k z_k*`) on the subspace certified for words of length 2.
pub fn relation_residuals(rep: &RepMatrices, ctx: &AlgebraContext) -> Result<Vec<(String, f64)>, NumericsError> {
    if ctx.n() != rep.n() {
        return Err(ReprError::DimensionMismatch { poly: ctx.n(), rep: rep.n() }.into());
    }
    let cert = certify_compression(rep, 2)?;
    defining_relations(ctx)
        .into_iter()
        .map(|(label, rel)| {
            let m = cert.compress_columns(&rep_apply(&rel, rep)?);
            Ok((label, operator_norm(&m, 1e-10)?))
        })
        .collect()
}

/// The largest of [`relation_residuals`].
pub fn relation_residual(rep: &RepMatrices, ctx: &AlgebraContext) -> Result<f64, NumericsError> {
    Ok(relation_residuals(rep, ctx)?.into_iter().map(|(_, r)| r).fold(0.0, f64::max))
}
