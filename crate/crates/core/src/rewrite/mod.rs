//! Normal ordering.
//!
//! Every element of the ball algebra has a unique expansion in the monomials
//! `z_1^{α_1}···z_n^{α_n} (z_1*)^{β_1}···(z_n*)^{β_n}`; in sphere mode the
//! monomials are further restricted to `α_1·β_1 = 0`. [`normalize`] computes
//! that expansion, [`reduce_step`] exposes single rewriting steps so that
//! strategy independence can be checked directly.

mod rules;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraContext, Letter, Mode, NCPoly, Word};
use crate::error::AlgebraError;

pub use rules::{apply, defining_relations, is_canonical_word, redexes, Redex, Rule};

/// Which redex a single reduction step rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// First word (graded order) with a redex, its leftmost redex.
    Leftmost,
    /// Last word with a redex, its rightmost redex.
    Rightmost,
    /// Uniform over all redexes of all words, from a seeded stream.
    Random(u64),
}

/// Stateful driver for repeated single-step reduction.
pub struct Reducer {
    ctx: AlgebraContext,
    strategy: Strategy,
    rng: ChaCha8Rng,
}

impl Reducer {
    pub fn new(ctx: AlgebraContext, strategy: Strategy) -> Self {
        let seed = match strategy {
            Strategy::Random(s) => s,
            _ => 0,
        };
        Reducer { ctx, strategy, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Chooses a redex according to the strategy; `None` if `p` is irreducible.
    pub fn choose(&mut self, p: &NCPoly) -> Option<(Word, Redex)> {
        match self.strategy {
            Strategy::Leftmost => p.terms().find_map(|(w, _)| {
                redexes(w, &self.ctx).first().map(|r| (w.clone(), *r))
            }),
            Strategy::Rightmost => p.terms().rev().find_map(|(w, _)| {
                redexes(w, &self.ctx).last().map(|r| (w.clone(), *r))
            }),
            Strategy::Random(_) => {
                let all: Vec<(&Word, Redex)> = p
                    .terms()
                    .flat_map(|(w, _)| redexes(w, &self.ctx).into_iter().map(move |r| (w, r)))
                    .collect();
                if all.is_empty() {
                    return None;
                }
                let (w, r) = all[self.rng.random_range(0..all.len())];
                Some((w.clone(), r))
            }
        }
    }

    /// Applies one rule instance; `None` if `p` is already normal.
    pub fn step(&mut self, p: &NCPoly) -> Option<NCPoly> {
        let (w, redex) = self.choose(p)?;
        Some(rewrite_word_in(p, &w, redex, self.ctx.n()))
    }
}

fn rewrite_word_in(p: &NCPoly, w: &Word, redex: Redex, n: usize) -> NCPoly {
    let c = p.coefficient(w);
    let mut out = p.clone();
    out.add_term(w.clone(), -&c);
    for (nw, nc) in apply(w, redex, n) {
        out.add_term(nw, &nc * &c);
    }
    out
}

/// One rewriting step. Returns `p` unchanged if no rule applies.
pub fn reduce_step(p: &NCPoly, ctx: &AlgebraContext, strategy: Strategy) -> Result<NCPoly, AlgebraError> {
    ctx.check(p)?;
    Ok(Reducer::new(*ctx, strategy).step(p).unwrap_or_else(|| p.clone()))
}

/// Reduces to normal form by repeated single steps under `strategy`.
pub fn normalize_with(p: &NCPoly, ctx: &AlgebraContext, strategy: Strategy) -> Result<NCPoly, AlgebraError> {
    ctx.check(p)?;
    let mut reducer = Reducer::new(*ctx, strategy);
    let mut cur = p.clone();
    while let Some(next) = reducer.step(&cur) {
        cur = next;
    }
    Ok(cur)
}

/// Word-level normal forms with memoisation. Reuse one instance when
/// normalising many polynomials in the same context.
pub struct Normalizer {
    ctx: AlgebraContext,
    memo: HashMap<Word, NCPoly>,
}

impl Normalizer {
    pub fn new(ctx: AlgebraContext) -> Self {
        Normalizer { ctx, memo: HashMap::new() }
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn normalize(&mut self, p: &NCPoly) -> Result<NCPoly, AlgebraError> {
        self.ctx.check(p)?;
        let mut out = NCPoly::zero(self.ctx.n());
        for (w, c) in p.terms() {
            let nf = self.word(w);
            for (nw, nc) in nf.terms() {
                out.add_term(nw.clone(), nc * c);
            }
        }
        Ok(out)
    }

    fn word(&mut self, w: &Word) -> NCPoly {
        if let Some(hit) = self.memo.get(w) {
            return hit.clone();
        }
        let n = self.ctx.n();
        let result = match redexes(w, &self.ctx).first() {
            None => NCPoly::monomial(n, w.clone(), crate::algebra::Scalar::one()),
            Some(&redex) => {
                let mut acc = NCPoly::zero(n);
                for (nw, nc) in apply(w, redex, n) {
                    let sub = self.word(&nw);
                    for (sw, sc) in sub.terms() {
                        acc.add_term(sw.clone(), sc * &nc);
                    }
                }
                acc
            }
        };
        self.memo.insert(w.clone(), result.clone());
        result
    }
}

/// The normal form of `p` in `ctx`.
pub fn normalize(p: &NCPoly, ctx: &AlgebraContext) -> Result<NCPoly, AlgebraError> {
    Normalizer::new(*ctx).normalize(p)
}

/// True iff no word of `p` contains a starred letter.
pub fn is_holomorphic(p: &NCPoly) -> bool {
    p.terms().all(|(w, _)| !w.has_star())
}

/// The monomial `z^α z*^β`, exponents listed by ascending generator index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalMonomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

impl CanonicalMonomial {
    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn degree(&self) -> usize {
        self.alpha.iter().chain(&self.beta).map(|&e| e as usize).sum()
    }

    pub fn to_word(&self) -> Word {
        let mut v = Vec::with_capacity(self.degree());
        for (j, &a) in self.alpha.iter().enumerate() {
            v.extend(std::iter::repeat_n(Letter::z(j + 1), a as usize));
        }
        for (j, &b) in self.beta.iter().enumerate() {
            v.extend(std::iter::repeat_n(Letter::z_star(j + 1), b as usize));
        }
        Word(v)
    }

    pub fn to_poly(&self) -> NCPoly {
        NCPoly::monomial(self.n(), self.to_word(), crate::algebra::Scalar::one())
    }

    /// Reads back a canonical word; `None` if `w` is not normally ordered.
    pub fn from_word(w: &Word, n: usize) -> Option<Self> {
        if !is_canonical_word(w) || w.max_index() > n {
            return None;
        }
        let mut alpha = vec![0u32; n];
        let mut beta = vec![0u32; n];
        for l in w.letters() {
            if l.starred {
                beta[l.index - 1] += 1;
            } else {
                alpha[l.index - 1] += 1;
            }
        }
        Some(CanonicalMonomial { alpha, beta })
    }

    /// Whether the monomial is a normal word in `mode`.
    pub fn is_normal_in(&self, mode: Mode) -> bool {
        match mode {
            Mode::Ball => true,
            Mode::Sphere => self.alpha[0] == 0 || self.beta[0] == 0,
        }
    }

    /// All normal monomials of total degree `≤ max_degree`, by degree and
    /// then lexicographically.
    pub fn enumerate(ctx: &AlgebraContext, max_degree: usize) -> Vec<Self> {
        let n = ctx.n();
        let mut out = Vec::new();
        for total in 0..=max_degree {
            let mut parts = vec![0u32; 2 * n];
            compositions(total as u32, 0, &mut parts, &mut |e| {
                let m = CanonicalMonomial { alpha: e[..n].to_vec(), beta: e[n..].to_vec() };
                if m.is_normal_in(ctx.mode()) {
                    out.push(m);
                }
            });
        }
        out
    }
}

fn compositions(remaining: u32, slot: usize, parts: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if slot + 1 == parts.len() {
        parts[slot] = remaining;
        f(parts);
        return;
    }
    for v in (0..=remaining).rev() {
        parts[slot] = v;
        compositions(remaining - v, slot + 1, parts, f);
    }
    parts[slot] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussianRational, Scalar};
    use crate::sample::random_poly;

    fn ctx(n: usize, mode: Mode) -> AlgebraContext {
        AlgebraContext::new(n, mode).unwrap()
    }

    fn word_poly(n: usize, ls: &[Letter]) -> NCPoly {
        NCPoly::term(n, Word(ls.to_vec()), Scalar::one()).unwrap()
    }

    #[test]
    fn reduce_step_examples() {
        let c = ctx(2, Mode::Ball);
        let p = word_poly(2, &[Letter::z_star(1), Letter::z(2)]);
        let expected = word_poly(2, &[Letter::z(2), Letter::z_star(1)]).scale(&Scalar::q_pow(1));
        assert_eq!(reduce_step(&p, &c, Strategy::Leftmost).unwrap(), expected);

        let p = word_poly(2, &[Letter::z(2), Letter::z(1)]);
        let expected = word_poly(2, &[Letter::z(1), Letter::z(2)]).scale(&Scalar::q_pow(-1));
        assert_eq!(reduce_step(&p, &c, Strategy::Rightmost).unwrap(), expected);

        let p = word_poly(2, &[Letter::z(1), Letter::z(2), Letter::z_star(2)]);
        assert_eq!(reduce_step(&p, &c, Strategy::Random(3)).unwrap(), p);
    }

    #[test]
    fn same_index_relation_n1() {
        let c = ctx(1, Mode::Ball);
        let p = word_poly(1, &[Letter::z_star(1), Letter::z(1)]);
        let expected = &word_poly(1, &[Letter::z(1), Letter::z_star(1)]).scale(&Scalar::q_pow(2))
            + &NCPoly::constant(1, Scalar::one_minus_q2());
        assert_eq!(normalize(&p, &c).unwrap(), expected);
    }

    #[test]
    fn golden_double_pair_n1() {
        // z1' z1 z1' z1 = q^6 z1^2 z1'^2 + (1-q^2)(q^4+2q^2) z1 z1' + (1-q^2)^2
        let c = ctx(1, Mode::Ball);
        let z = Letter::z(1);
        let s = Letter::z_star(1);
        let p = word_poly(1, &[s, z, s, z]);
        let om = Scalar::one_minus_q2();
        let mid = &om * &(&Scalar::q_pow(4) + &Scalar::monomial(GaussianRational::from_integer(2), 2));
        let expected = NCPoly::from_terms(
            1,
            [
                (Word(vec![z, z, s, s]), Scalar::q_pow(6)),
                (Word(vec![z, s]), mid),
                (Word::empty(), &om * &om),
            ],
        )
        .unwrap();
        assert_eq!(normalize(&p, &c).unwrap(), expected);
    }

    #[test]
    fn sphere_examples() {
        let c = ctx(1, Mode::Sphere);
        let zz = word_poly(1, &[Letter::z(1), Letter::z_star(1)]);
        assert_eq!(normalize(&zz, &c).unwrap(), NCPoly::one(1));
        let zsz = word_poly(1, &[Letter::z_star(1), Letter::z(1)]);
        assert_eq!(normalize(&zsz, &c).unwrap(), NCPoly::one(1));
        let c2 = ctx(2, Mode::Sphere);
        assert!(normalize(&c2.defect(), &c2).unwrap().is_zero());
        // the defect is a nonzero normal form in the ball algebra
        assert_eq!(normalize(&c2.defect(), &ctx(2, Mode::Ball)).unwrap(), c2.defect());
    }

    #[test]
    fn holomorphic_classification() {
        let c = ctx(2, Mode::Ball);
        let p = &(&c.z(1).unwrap() * &c.z(2).unwrap()) + &(&c.z(2).unwrap() * &c.z(2).unwrap()).scale(&Scalar::q_pow(1));
        assert!(is_holomorphic(&p));
        assert!(!is_holomorphic(&c.z_star(1).unwrap()));
        assert!(is_holomorphic(&NCPoly::one(2)));
    }

    #[test]
    fn context_mismatch() {
        let c = ctx(2, Mode::Ball);
        assert!(normalize(&NCPoly::one(3), &c).is_err());
        assert!(reduce_step(&NCPoly::one(1), &c, Strategy::Leftmost).is_err());
    }

    #[test]
    fn enumerate_counts() {
        // 4-tuples of nonnegative integers with sum ≤ 3: C(7,4) = 35
        assert_eq!(CanonicalMonomial::enumerate(&ctx(2, Mode::Ball), 3).len(), 35);
        // n = 1 sphere: 1, z, z', z^2, z'^2, z^3, z'^3
        assert_eq!(CanonicalMonomial::enumerate(&ctx(1, Mode::Sphere), 3).len(), 7);
        for m in CanonicalMonomial::enumerate(&ctx(3, Mode::Ball), 2) {
            assert_eq!(CanonicalMonomial::from_word(&m.to_word(), 3), Some(m.clone()));
        }
    }

    fn charges(w: &Word, n: usize) -> Vec<(i64, i64)> {
        let mut c = vec![(0i64, 0i64); n + 1];
        for l in w.letters() {
            if l.starred {
                c[l.index].1 += 1;
            } else {
                c[l.index].0 += 1;
            }
        }
        c
    }

    #[test]
    fn charge_conservation_on_random_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            for mode in [Mode::Ball, Mode::Sphere] {
                let c = ctx(n, mode);
                for _ in 0..40 {
                    let p = random_poly(&mut rng, n, 4, false);
                    let mut reducer = Reducer::new(c, Strategy::Random(rng.random()));
                    let mut cur = p;
                    while let Some((w, redex)) = reducer.choose(&cur) {
                        let before = charges(&w, n);
                        for (nw, _) in apply(&w, redex, n) {
                            let after = charges(&nw, n);
                            for j in 1..=n {
                                let (bu, bs) = before[j];
                                let (au, as_) = after[j];
                                assert_eq!(bu - bs, au - as_, "charge of z{j} changed");
                                if redex.rule == Rule::SphereElimination && j == 1 {
                                    assert_eq!((bu - au, bs - as_), (1, 1));
                                }
                            }
                        }
                        cur = rewrite_word_in(&cur, &w, redex, n);
                    }
                    assert!(cur.terms().all(|(w, _)| redexes(w, &c).is_empty()));
                }
            }
        }
    }

    #[test]
    fn strategies_agree_and_normalize_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            for mode in [Mode::Ball, Mode::Sphere] {
                let c = ctx(n, mode);
                let mut norm = Normalizer::new(c);
                for _ in 0..25 {
                    let p = random_poly(&mut rng, n, 4, false);
                    let nf = norm.normalize(&p).unwrap();
                    assert_eq!(norm.normalize(&nf).unwrap(), nf);
                    for s in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(1), Strategy::Random(2)] {
                        assert_eq!(normalize_with(&p, &c, s).unwrap(), nf, "strategy {s:?} on {p}");
                    }
                    for (w, _) in nf.terms() {
                        let m = CanonicalMonomial::from_word(w, n).expect("canonical");
                        assert!(m.is_normal_in(mode));
                    }
                }
            }
        }
    }

    #[test]
    fn star_compatibility_and_holomorphic_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=3 {
            for mode in [Mode::Ball, Mode::Sphere] {
                let c = ctx(n, mode);
                let mut norm = Normalizer::new(c);
                for _ in 0..25 {
                    let p = random_poly(&mut rng, n, 4, false);
                    let lhs = norm.normalize(&p.adjoint()).unwrap();
                    let once = norm.normalize(&p).unwrap().adjoint();
                    let rhs = norm.normalize(&once).unwrap();
                    assert_eq!(lhs, rhs);
                    let h = random_poly(&mut rng, n, 4, true);
                    assert!(is_holomorphic(&norm.normalize(&h).unwrap()));
                }
            }
        }
    }
}
