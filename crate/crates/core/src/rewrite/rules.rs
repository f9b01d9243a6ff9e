//! The oriented commutation rules.
//!
//! Ball mode uses four pair rules that push starred letters to the right and
//! sort each block by ascending index:
//!
//! ```text
//! R1  z_k  z_j   -> q^-1 z_j z_k                                   (k > j)
//! R2  z_k* z_j*  -> q    z_j* z_k*                                 (k > j)
//! R3  z_j* z_k   -> q    z_k z_j*                                  (j != k)
//! R4  z_j* z_j   -> q^2 z_j z_j* + (1-q^2) - (1-q^2) Σ_{k>j} z_k z_k*
//! ```
//!
//! Sphere mode adds R5, which acts on whole canonical words containing both
//! `z_1` and `z_1*`: one `z_1*` is commuted left to meet the last `z_1` and
//! the pair is replaced using `z_1 z_1* = 1 - Σ_{k≥2} z_k z_k*`.

use crate::algebra::{AlgebraContext, Letter, Mode, NCPoly, Scalar, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// R1
    SortUnstarred,
    /// R2
    SortStarred,
    /// R3
    StarPastDistinct,
    /// R4
    StarMeetsSame,
    /// R5 (sphere only)
    SphereElimination,
}

/// A rule instance inside one word. For pair rules `position` is the index
/// of the left letter; R5 always reports position 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Redex {
    pub rule: Rule,
    pub position: usize,
}

fn pair_rule(a: Letter, b: Letter) -> Option<Rule> {
    match (a.starred, b.starred) {
        (false, false) if a.index > b.index => Some(Rule::SortUnstarred),
        (true, true) if a.index > b.index => Some(Rule::SortStarred),
        (true, false) if a.index != b.index => Some(Rule::StarPastDistinct),
        (true, false) => Some(Rule::StarMeetsSame),
        _ => None,
    }
}

/// All rule instances applicable to `w`, leftmost first.
pub fn redexes(w: &Word, ctx: &AlgebraContext) -> Vec<Redex> {
    let letters = w.letters();
    let mut out: Vec<Redex> = letters
        .windows(2)
        .enumerate()
        .filter_map(|(i, pair)| pair_rule(pair[0], pair[1]).map(|rule| Redex { rule, position: i }))
        .collect();
    if out.is_empty() && ctx.mode() == Mode::Sphere && sphere_eliminable(w) {
        out.push(Redex { rule: Rule::SphereElimination, position: 0 });
    }
    out
}

/// Whether a word has no pair redex (it spells `z^α z*^β`).
pub fn is_canonical_word(w: &Word) -> bool {
    w.letters().windows(2).all(|p| pair_rule(p[0], p[1]).is_none())
}

fn sphere_eliminable(w: &Word) -> bool {
    let letters = w.letters();
    letters.contains(&Letter::z(1)) && letters.contains(&Letter::z_star(1))
}

/// Rewrites `w` at `redex`, returning the replacement as a list of terms.
pub fn apply(w: &Word, redex: Redex, n: usize) -> Vec<(Word, Scalar)> {
    let letters = w.letters();
    if redex.rule == Rule::SphereElimination {
        return eliminate_z1_pair(w, n);
    }
    let i = redex.position;
    let (a, b) = (letters[i], letters[i + 1]);
    let prefix = &letters[..i];
    let suffix = &letters[i + 2..];
    let splice = |middle: &[Letter]| {
        let mut v = Vec::with_capacity(prefix.len() + middle.len() + suffix.len());
        v.extend_from_slice(prefix);
        v.extend_from_slice(middle);
        v.extend_from_slice(suffix);
        Word(v)
    };
    match redex.rule {
        Rule::SortUnstarred => vec![(splice(&[b, a]), Scalar::q_pow(-1))],
        Rule::SortStarred => vec![(splice(&[b, a]), Scalar::q_pow(1))],
        Rule::StarPastDistinct => vec![(splice(&[b, a]), Scalar::q_pow(1))],
        Rule::StarMeetsSame => {
            let j = a.index;
            let c = Scalar::one_minus_q2();
            let mut out = Vec::with_capacity(n - j + 2);
            out.push((splice(&[Letter::z(j), Letter::z_star(j)]), Scalar::q_pow(2)));
            out.push((splice(&[]), c.clone()));
            for k in j + 1..=n {
                out.push((splice(&[Letter::z(k), Letter::z_star(k)]), -&c));
            }
            out
        }
        Rule::SphereElimination => unreachable!(),
    }
}

/// R5 on a canonical word `z^α z*^β` with `α_1, β_1 ≥ 1`.
fn eliminate_z1_pair(w: &Word, n: usize) -> Vec<(Word, Scalar)> {
    let mut alpha = vec![0u32; n + 1];
    let mut beta = vec![0u32; n + 1];
    for l in w.letters() {
        if l.starred {
            beta[l.index] += 1;
        } else {
            alpha[l.index] += 1;
        }
    }
    debug_assert!(alpha[1] >= 1 && beta[1] >= 1);
    let shift: u32 = alpha[2..].iter().sum();
    let coeff = Scalar::q_pow(-(shift as i32));

    let prefix: Vec<Letter> = std::iter::repeat_n(Letter::z(1), alpha[1] as usize - 1).collect();
    let mut tail: Vec<Letter> = Vec::new();
    for (k, &a) in alpha.iter().enumerate().skip(2) {
        tail.extend(std::iter::repeat_n(Letter::z(k), a as usize));
    }
    tail.extend(std::iter::repeat_n(Letter::z_star(1), beta[1] as usize - 1));
    for (k, &b) in beta.iter().enumerate().skip(2) {
        tail.extend(std::iter::repeat_n(Letter::z_star(k), b as usize));
    }

    let mut out = Vec::with_capacity(n);
    out.push((Word(prefix.iter().chain(tail.iter()).copied().collect()), coeff.clone()));
    for k in 2..=n {
        let pair = [Letter::z(k), Letter::z_star(k)];
        let word = prefix.iter().chain(pair.iter()).chain(tail.iter()).copied().collect();
        out.push((Word(word), -&coeff));
    }
    out
}

/// The defining relations as `LHS - RHS`, each labelled; sphere mode adds
/// `1 - Σ z_k z_k*`.
pub fn defining_relations(ctx: &AlgebraContext) -> Vec<(String, NCPoly)> {
    let n = ctx.n();
    let word = |ls: &[Letter]| Word(ls.to_vec());
    let mut out = Vec::new();
    for j in 1..=n {
        for k in j + 1..=n {
            let mut p = NCPoly::zero(n);
            p.add_term(word(&[Letter::z(j), Letter::z(k)]), Scalar::one());
            p.add_term(word(&[Letter::z(k), Letter::z(j)]), -Scalar::q_pow(1));
            out.push((format!("z{j}*z{k} = q*z{k}*z{j}"), p));
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            if j == k {
                continue;
            }
            let mut p = NCPoly::zero(n);
            p.add_term(word(&[Letter::z_star(j), Letter::z(k)]), Scalar::one());
            p.add_term(word(&[Letter::z(k), Letter::z_star(j)]), -Scalar::q_pow(1));
            out.push((format!("z{j}'*z{k} = q*z{k}*z{j}'"), p));
        }
    }
    for j in 1..=n {
        let c = Scalar::one_minus_q2();
        let mut p = NCPoly::zero(n);
        p.add_term(word(&[Letter::z_star(j), Letter::z(j)]), Scalar::one());
        p.add_term(word(&[Letter::z(j), Letter::z_star(j)]), -Scalar::q_pow(2));
        p.add_term(Word::empty(), -&c);
        for k in j + 1..=n {
            p.add_term(word(&[Letter::z(k), Letter::z_star(k)]), c.clone());
        }
        out.push((format!("z{j}'*z{j} = q^2*z{j}*z{j}' + (1-q^2)*(1 - sum_(k>{j}) zk*zk')"), p));
    }
    if ctx.mode() == Mode::Sphere {
        out.push(("sum_k zk*zk' = 1".to_string(), ctx.defect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ls: &[Letter]) -> Word {
        Word(ls.to_vec())
    }

    #[test]
    fn pair_rule_classification() {
        let z = Letter::z;
        let s = Letter::z_star;
        assert_eq!(pair_rule(z(2), z(1)), Some(Rule::SortUnstarred));
        assert_eq!(pair_rule(z(1), z(2)), None);
        assert_eq!(pair_rule(s(3), s(1)), Some(Rule::SortStarred));
        assert_eq!(pair_rule(s(1), z(2)), Some(Rule::StarPastDistinct));
        assert_eq!(pair_rule(s(2), z(2)), Some(Rule::StarMeetsSame));
        assert_eq!(pair_rule(z(2), s(1)), None);
    }

    #[test]
    fn r4_expansion_for_middle_index() {
        let out = apply(&w(&[Letter::z_star(2), Letter::z(2)]), Redex { rule: Rule::StarMeetsSame, position: 0 }, 3);
        assert_eq!(out.len(), 3);
        assert_eq!(out[0], (w(&[Letter::z(2), Letter::z_star(2)]), Scalar::q_pow(2)));
        assert_eq!(out[1], (Word::empty(), Scalar::one_minus_q2()));
        assert_eq!(out[2], (w(&[Letter::z(3), Letter::z_star(3)]), -Scalar::one_minus_q2()));
    }

    #[test]
    fn r5_eliminates_one_pair() {
        // z1^2 z2 z1* z2*  ->  q^-1 (z1 z2 z2* - z1 z2 z2* z2 z2*) in unnormalised form
        let word = w(&[Letter::z(1), Letter::z(1), Letter::z(2), Letter::z_star(1), Letter::z_star(2)]);
        let ctx = AlgebraContext::sphere(2).unwrap();
        let rs = redexes(&word, &ctx);
        assert_eq!(rs, vec![Redex { rule: Rule::SphereElimination, position: 0 }]);
        let out = apply(&word, rs[0], 2);
        assert_eq!(out[0], (w(&[Letter::z(1), Letter::z(2), Letter::z_star(2)]), Scalar::q_pow(-1)));
        assert_eq!(
            out[1],
            (
                w(&[Letter::z(1), Letter::z(2), Letter::z_star(2), Letter::z(2), Letter::z_star(2)]),
                -Scalar::q_pow(-1)
            )
        );
        assert!(redexes(&word, &AlgebraContext::ball(2).unwrap()).is_empty());
    }

    #[test]
    fn relation_count() {
        let ball = defining_relations(&AlgebraContext::ball(3).unwrap());
        // 3 sorting + 6 cross + 3 same-index relations
        assert_eq!(ball.len(), 12);
        let sphere = defining_relations(&AlgebraContext::sphere(3).unwrap());
        assert_eq!(sphere.len(), 13);
    }
}
