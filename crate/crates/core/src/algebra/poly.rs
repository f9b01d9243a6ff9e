use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use super::word::{Letter, Word};
use crate::error::AlgebraError;

/// An element of the free *-algebra on `z_1, …, z_n`: a finite sum of words
/// with [`Scalar`] coefficients.
///
/// Zero coefficients are never stored. The std operator impls panic on a
/// context mismatch; use the `checked_*` methods for fallible arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NCPoly {
    n: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero(n: usize) -> Self {
        NCPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::monomial(n, Word::empty(), c)
    }

    /// `c·w` without validating letter indices.
    pub(crate) fn monomial(n: usize, w: Word, c: Scalar) -> Self {
        let mut p = NCPoly::zero(n);
        p.add_term(w, c);
        p
    }

    /// A single word with the given coefficient, validated against `n`.
    pub fn term(n: usize, w: Word, c: Scalar) -> Result<Self, AlgebraError> {
        check_word(n, &w)?;
        Ok(Self::monomial(n, w, c))
    }

    /// `z_index` (or its adjoint when `starred`).
    pub fn generator(n: usize, index: usize, starred: bool) -> Result<Self, AlgebraError> {
        Self::term(n, Word(vec![Letter { index, starred }]), Scalar::one())
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        if n == 0 {
            return Err(AlgebraError::EmptyContext);
        }
        let mut p = NCPoly::zero(n);
        for (w, c) in terms {
            check_word(n, &w)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    /// Accumulates `c·w`, dropping the entry if it cancels.
    pub(crate) fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Length of the longest word; 0 for constants and for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    fn check_same(&self, other: &NCPoly) -> Result<(), AlgebraError> {
        if self.n != other.n {
            Err(AlgebraError::ContextMismatch { left: self.n, right: other.n })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &NCPoly) -> Result<NCPoly, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NCPoly) -> Result<NCPoly, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    /// Free-algebra product: bilinear extension of word concatenation.
    pub fn checked_mul(&self, other: &NCPoly) -> Result<NCPoly, AlgebraError> {
        self.check_same(other)?;
        let mut out = NCPoly::zero(self.n);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        let mut out = NCPoly::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (w, s) in &self.terms {
            out.add_term(w.clone(), s * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        let mut acc = NCPoly::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The involution: reverse words, toggle stars, conjugate coefficients.
    pub fn adjoint(&self) -> NCPoly {
        NCPoly {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w.adjoint(), c.conj())).collect(),
        }
    }

    /// The scalar value if only the empty word occurs.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }
}

fn check_word(n: usize, w: &Word) -> Result<(), AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::EmptyContext);
    }
    for l in w.letters() {
        if l.index == 0 || l.index > n {
            return Err(AlgebraError::IndexOutOfRange { index: l.index, n });
        }
    }
    Ok(())
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        self.checked_add(rhs).expect("NCPoly addition across contexts")
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self.checked_sub(rhs).expect("NCPoly subtraction across contexts")
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.checked_mul(rhs).expect("NCPoly product across contexts")
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: NCPoly) -> NCPoly {
        &self + &rhs
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        &self * &rhs
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl fmt::Display for NCPoly {
    /// Longest words first, e.g. `q^2*z1*z1' + (1-q^2)`. The output parses
    /// back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        for (idx, (w, c)) in ordered.into_iter().enumerate() {
            let neg = c.displays_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = c.is_plus_minus_one();
            if w.is_empty() {
                c.fmt_magnitude(f)?;
            } else if unit {
                write!(f, "{w}")?;
            } else {
                c.fmt_magnitude(f)?;
                write!(f, "*{w}")?;
            }
        }
        Ok(())
    }
}
