//! Certified norm schedules and the maximum-principle experiments.
//!
//! Every value reported here is the operator norm of a representation matrix
//! restricted to a certified subspace, hence a lower bound on the true norm of
//! the element in that representation. Bounds along a schedule are nested.
//!
//! The ball norm is the supremum over the Fock representation and the
//! boundary family. When a schedule point carries no `theta` order only the
//! Fock part is used. The boundary norm uses the boundary family alone.

mod norm;
mod pbw;

use num_complex::Complex64;

use crate::algebra::{check_q, NCPoly};
use crate::error::{NumericsError, ReprError};
use crate::repr::{
    boundary_character, certify_compression, fock_generators, rep_apply, BoundaryConfig, FockConfig,
    RepMatrices,
};
use crate::rewrite::is_holomorphic;
use crate::sparse::SparseMatrix;

pub use norm::{operator_norm, operator_norm_with, NormOptions, DEFAULT_TOL};
pub use pbw::{pbw_rank, PbwRank};

/// Slack allowed when checking that bounds are nondecreasing.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// One truncation level: Fock cut `N` and, optionally, the number `M` of
/// sampled roots of unity for the boundary family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPoint {
    pub truncation: usize,
    pub theta: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule(Vec<TruncationPoint>);

impl Schedule {
    /// Truncations must strictly increase and each `theta` must be a multiple
    /// of the previous one, so that certified subspaces and root grids nest.
    pub fn new(points: Vec<TruncationPoint>) -> Result<Self, NumericsError> {
        if points.is_empty() {
            return Err(NumericsError::InvalidSchedule("schedule is empty".into()));
        }
        for p in &points {
            if p.truncation == 0 || p.theta == Some(0) {
                return Err(NumericsError::InvalidSchedule("truncation and theta must be positive".into()));
            }
        }
        for w in points.windows(2) {
            if w[1].truncation <= w[0].truncation {
                return Err(NumericsError::InvalidSchedule("truncations must strictly increase".into()));
            }
            match (w[0].theta, w[1].theta) {
                (Some(a), Some(b)) if b % a != 0 => {
                    return Err(NumericsError::InvalidSchedule(format!(
                        "theta orders must nest ({b} is not a multiple of {a})"
                    )))
                }
                (Some(_), None) | (None, Some(_)) => {
                    return Err(NumericsError::InvalidSchedule(
                        "theta must be given for all schedule points or none".into(),
                    ))
                }
                _ => {}
            }
        }
        Ok(Schedule(points))
    }

    /// Pairs each truncation with a theta order that doubles along the
    /// schedule and ends at `final_theta`.
    pub fn doubling(truncations: &[usize], final_theta: Option<usize>) -> Result<Self, NumericsError> {
        let len = truncations.len();
        let points = truncations
            .iter()
            .enumerate()
            .map(|(i, &truncation)| TruncationPoint {
                truncation,
                theta: final_theta.map(|m| {
                    let shift = (len - 1 - i).min(usize::BITS as usize - 1);
                    (m >> shift).max(1)
                }),
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[TruncationPoint] {
        &self.0
    }

    pub fn last(&self) -> TruncationPoint {
        *self.0.last().expect("schedule is nonempty")
    }

    pub fn has_theta(&self) -> bool {
        self.0[0].theta.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatePoint {
    pub truncation: usize,
    pub theta: Option<usize>,
    /// Certified bound from the Fock representation (ball side only).
    pub fock: Option<f64>,
    /// Certified bound from the boundary family.
    pub boundary: Option<f64>,
    /// The reported bound at this point.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub points: Vec<EstimatePoint>,
    pub value: f64,
    pub tol: f64,
    /// Whether the last two bounds differ by less than `tol` (relative).
    pub stabilized: bool,
}

impl NormEstimate {
    fn from_points(points: Vec<EstimatePoint>, tol: f64) -> Self {
        let value = points.last().map_or(0.0, |p| p.value);
        let stabilized = points.len() >= 2 && {
            let prev = points[points.len() - 2].value;
            (value - prev).abs() < tol * value.max(1.0)
        };
        NormEstimate { points, value, tol, stabilized }
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// Bounds never decrease by more than `slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.points.windows(2).all(|w| w[1].value >= w[0].value - slack)
    }
}

/// A square matrix over the algebra; `k = 1` is a plain element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatPoly {
    n: usize,
    size: usize,
    entries: Vec<NCPoly>,
}

impl MatPoly {
    pub fn new(rows: Vec<Vec<NCPoly>>) -> Result<Self, NumericsError> {
        let size = rows.len();
        if size == 0 {
            return Err(NumericsError::InvalidMatrix("matrix has no rows".into()));
        }
        if rows.iter().any(|r| r.len() != size) {
            return Err(NumericsError::InvalidMatrix("matrix must be square".into()));
        }
        let n = rows[0][0].n();
        let entries: Vec<NCPoly> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.n() != n) {
            return Err(NumericsError::InvalidMatrix("entries must share the number of generators".into()));
        }
        Ok(MatPoly { n, size, entries })
    }

    pub fn scalar(f: NCPoly) -> Self {
        MatPoly { n: f.n(), size: 1, entries: vec![f] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> &NCPoly {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[NCPoly] {
        &self.entries
    }

    /// Largest entry degree.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(NCPoly::degree).max().unwrap_or(0)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.entries.iter().all(is_holomorphic)
    }

    pub fn map(&self, f: impl FnMut(&NCPoly) -> NCPoly) -> MatPoly {
        MatPoly { n: self.n, size: self.size, entries: self.entries.iter().map(f).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Ball,
    Boundary,
}

fn check_inputs(f: &MatPoly, q: f64, schedule: &Schedule, tol: f64) -> Result<(), NumericsError> {
    check_q(q)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(tol));
    }
    let deg = f.degree();
    for p in schedule.points() {
        if p.truncation < deg + 1 {
            return Err(ReprError::TruncationTooSmall { truncation: p.truncation, word_length: deg + 1 }.into());
        }
    }
    Ok(())
}

/// Block matrix `[rep(f_ij)·P]` with the columns compressed to the subspace
/// certified for the largest entry degree.
fn block_matrix(f: &MatPoly, rep: &RepMatrices) -> Result<SparseMatrix, NumericsError> {
    let cert = certify_compression(rep, f.degree())?;
    let blocks = f
        .entries()
        .iter()
        .map(|e| Ok(cert.compress_columns(&rep_apply(e, rep)?)))
        .collect::<Result<Vec<_>, ReprError>>()?;
    Ok(assemble(&blocks, f.size()))
}

fn assemble(blocks: &[SparseMatrix], k: usize) -> SparseMatrix {
    if k == 1 {
        return blocks[0].clone();
    }
    let grid: Vec<Vec<Option<&SparseMatrix>>> =
        (0..k).map(|i| (0..k).map(|j| Some(&blocks[i * k + j])).collect()).collect();
    SparseMatrix::block(&grid)
}

/// Certified lower bound for the Fock representation at cut `N`.
pub fn fock_bound(f: &MatPoly, q: f64, truncation: usize, tol: f64) -> Result<f64, NumericsError> {
    let rep = fock_generators(&FockConfig::new(f.n(), truncation, q)?)?;
    operator_norm(&block_matrix(f, &rep)?, tol)
}

/// Certified lower bound for the boundary family at `(N, M)`: the maximum
/// over the `M` character blocks.
///
/// In a character block `z_1 = ω·D` with `D` real diagonal, so a word with
/// `a` letters `z_1` and `b` letters `z_1*` evaluates to `ω^{a-b}` times its
/// value at `ω = 1`. The blocks are therefore assembled from one evaluation
/// per z_1-charge.
pub fn boundary_bound(f: &MatPoly, q: f64, truncation: usize, theta: usize, tol: f64) -> Result<f64, NumericsError> {
    let cfg = BoundaryConfig::new(f.n(), truncation, theta, q)?;
    let base = boundary_character(&cfg, 0)?;
    let cert = certify_compression(&base, f.degree())?;
    let mut charged: Vec<Vec<(i64, SparseMatrix)>> = Vec::with_capacity(f.entries().len());
    for entry in f.entries() {
        let mut parts: Vec<(i64, NCPoly)> = Vec::new();
        for (w, c) in entry.terms() {
            let charge: i64 =
                w.letters().iter().filter(|l| l.index == 1).map(|l| if l.starred { -1 } else { 1 }).sum();
            let term = NCPoly::term(f.n(), w.clone(), c.clone()).map_err(ReprError::from)?;
            match parts.iter_mut().find(|(ch, _)| *ch == charge) {
                Some((_, p)) => *p = &*p + &term,
                None => parts.push((charge, term)),
            }
        }
        let mats = parts
            .into_iter()
            .map(|(ch, p)| Ok((ch, cert.compress_columns(&rep_apply(&p, &base)?))))
            .collect::<Result<Vec<_>, ReprError>>()?;
        charged.push(mats);
    }
    let rows = base.dim();
    let cols = cert.dim();
    let mut best = 0.0f64;
    for k in 0..theta {
        let omega = crate::repr::root_of_unity(k, theta);
        let blocks: Vec<SparseMatrix> = charged
            .iter()
            .map(|parts| {
                SparseMatrix::from_triplets(
                    rows,
                    cols,
                    parts.iter().flat_map(|(ch, m)| {
                        let phase = omega.powi(*ch as i32);
                        m.entries().map(move |(r, c, v)| (r, c, phase * v))
                    }),
                )
            })
            .collect();
        best = best.max(operator_norm(&assemble(&blocks, f.size()), tol)?);
    }
    Ok(best)
}

fn estimate(f: &MatPoly, side: Side, q: f64, schedule: &Schedule, tol: f64) -> Result<NormEstimate, NumericsError> {
    check_inputs(f, q, schedule, tol)?;
    if side == Side::Boundary && !schedule.has_theta() {
        return Err(NumericsError::InvalidSchedule("boundary norms need a theta order at every point".into()));
    }
    let mut points = Vec::with_capacity(schedule.points().len());
    for p in schedule.points() {
        let boundary = p.theta.map(|m| boundary_bound(f, q, p.truncation, m, tol)).transpose()?;
        let fock = match side {
            Side::Ball => Some(fock_bound(f, q, p.truncation, tol)?),
            Side::Boundary => None,
        };
        let value = fock.unwrap_or(0.0).max(boundary.unwrap_or(0.0));
        points.push(EstimatePoint { truncation: p.truncation, theta: p.theta, fock, boundary, value });
    }
    Ok(NormEstimate::from_points(points, tol))
}

/// Norm schedule of `f` in the ball algebra.
pub fn ball_norm(f: &NCPoly, q: f64, schedule: &Schedule, tol: f64) -> Result<NormEstimate, NumericsError> {
    estimate(&MatPoly::scalar(f.clone()), Side::Ball, q, schedule, tol)
}

/// Norm schedule of the image of `f` in the sphere quotient.
pub fn boundary_norm(f: &NCPoly, q: f64, schedule: &Schedule, tol: f64) -> Result<NormEstimate, NumericsError> {
    estimate(&MatPoly::scalar(f.clone()), Side::Boundary, q, schedule, tol)
}

/// Norm schedule of a `k×k` matrix over the algebra.
pub fn matrix_norm_level_k(
    f: &MatPoly,
    side: Side,
    q: f64,
    schedule: &Schedule,
    tol: f64,
) -> Result<NormEstimate, NumericsError> {
    estimate(f, side, q, schedule, tol)
}

/// Ball versus boundary comparison for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub expression: String,
    pub ball: NormEstimate,
    pub boundary: NormEstimate,
    /// `|ball - boundary|` at the last schedule point.
    pub gap: f64,
    /// The same difference at every schedule point.
    pub gaps: Vec<f64>,
    pub holomorphic: bool,
    pub schedule: Schedule,
}

impl GapReport {
    /// Gaps never increase by more than `slack` along the schedule.
    pub fn gaps_nonincreasing(&self, slack: f64) -> bool {
        self.gaps.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

/// Runs both sides on the same schedule. The boundary family is evaluated
/// once per point and shared by the two estimates.
pub fn max_principle_report(
    expression: impl Into<String>,
    f: &MatPoly,
    q: f64,
    schedule: &Schedule,
    tol: f64,
) -> Result<GapReport, NumericsError> {
    check_inputs(f, q, schedule, tol)?;
    if !schedule.has_theta() {
        return Err(NumericsError::InvalidSchedule("maximum-principle reports need theta orders".into()));
    }
    let mut ball_points = Vec::new();
    let mut boundary_points = Vec::new();
    for p in schedule.points() {
        let m = p.theta.expect("checked above");
        let b = boundary_bound(f, q, p.truncation, m, tol)?;
        let fk = fock_bound(f, q, p.truncation, tol)?;
        ball_points.push(EstimatePoint {
            truncation: p.truncation,
            theta: p.theta,
            fock: Some(fk),
            boundary: Some(b),
            value: fk.max(b),
        });
        boundary_points.push(EstimatePoint { truncation: p.truncation, theta: p.theta, fock: None, boundary: Some(b), value: b });
    }
    let gaps: Vec<f64> = ball_points.iter().zip(&boundary_points).map(|(a, b)| (a.value - b.value).abs()).collect();
    let ball = NormEstimate::from_points(ball_points, tol);
    let boundary = NormEstimate::from_points(boundary_points, tol);
    Ok(GapReport {
        expression: expression.into(),
        gap: *gaps.last().expect("nonempty schedule"),
        gaps,
        holomorphic: f.is_holomorphic(),
        ball,
        boundary,
        schedule: schedule.clone(),
    })
}

/// Evaluates a one-variable polynomial in `z_1` on the unit circle at
/// `e^{iθ}`, treating the letters as commuting. Only meaningful for `n = 1`
/// holomorphic inputs, where the boundary algebra is commutative.
pub fn circle_value(f: &NCPoly, q: f64, theta: f64) -> Result<Complex64, NumericsError> {
    let z = Complex64::from_polar(1.0, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, c) in f.terms() {
        let mut term = c.eval(q)?;
        for l in w.letters() {
            term *= if l.starred { z.conj() } else { z };
        }
        acc += term;
    }
    Ok(acc)
}
