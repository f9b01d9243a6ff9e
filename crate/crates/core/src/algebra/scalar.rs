//! Exact coefficients: Laurent polynomials in `q` over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// A complex number `re + i·im` with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(v)))
    }

    /// `num/den + i·0`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn imaginary_unit() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(GaussianRational { re: &self.re / &norm, im: -(&self.im / &norm) })
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> Self {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// A finite Laurent polynomial `Σ c_k q^k` with Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<i32, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn integer(v: i64) -> Self {
        Self::constant(GaussianRational::from_integer(v))
    }

    pub fn imaginary_unit() -> Self {
        Self::constant(GaussianRational::imaginary_unit())
    }

    /// `c·q^exp`.
    pub fn monomial(c: GaussianRational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Scalar { terms }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i32) -> Self {
        Self::monomial(GaussianRational::one(), exp)
    }

    /// `1 - q^2`, the recurring coefficient of the same-index relation.
    pub fn one_minus_q2() -> Self {
        &Self::one() - &Self::q_pow(2)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, GaussianRational)>>(iter: I) -> Self {
        let mut s = Scalar::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }

    fn add_term(&mut self, exp: i32, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(GaussianRational::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussianRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single `(exponent, coefficient)` pair if this is a nonzero monomial.
    pub fn as_monomial(&self) -> Option<(i32, &GaussianRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    /// Inverse of a nonzero monomial `c·q^k`; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<Scalar> {
        let (k, c) = self.as_monomial()?;
        Some(Scalar::monomial(c.inverse()?, -k))
    }

    /// Complex conjugation; `q` is real so exponents are fixed.
    pub fn conj(&self) -> Self {
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a numeric `q ∈ (0, 1)`, summing in ascending exponent order.
    pub fn eval(&self, q: f64) -> Result<Complex64, AlgebraError> {
        check_q(q)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            acc += c.to_complex() * q.powi(*k);
        }
        Ok(acc)
    }
}

/// Validates a numeric deformation parameter.
pub fn check_q(q: f64) -> Result<(), AlgebraError> {
    if q.is_finite() && q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(AlgebraError::QOutOfRange(q.to_string()))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

/// Whether a single term should be written with a leading minus sign.
fn term_is_negative(c: &GaussianRational) -> bool {
    (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative())
}

/// Writes `|c|·q^k` (sign handled by the caller) in the expression grammar.
fn fmt_term(exp: i32, c: &GaussianRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let c = if term_is_negative(c) { -c.clone() } else { c.clone() };
    let q_part = match exp {
        0 => None,
        1 => Some("q".to_string()),
        e => Some(format!("q^{e}")),
    };
    let coeff_is_one = c.is_one();
    if !coeff_is_one || q_part.is_none() {
        if c.im.is_zero() {
            fmt_rational(&c.re, f)?;
        } else if c.re.is_zero() {
            if !c.im.is_one() {
                fmt_rational(&c.im, f)?;
                write!(f, "*")?;
            }
            write!(f, "i")?;
        } else {
            write!(f, "(")?;
            fmt_rational(&c.re, f)?;
            if c.im.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let im = c.im.abs();
            if !im.is_one() {
                fmt_rational(&im, f)?;
                write!(f, "*")?;
            }
            write!(f, "i)")?;
        }
        if q_part.is_some() {
            write!(f, "*")?;
        }
    }
    if let Some(qp) = q_part {
        write!(f, "{qp}")?;
    }
    Ok(())
}

impl Scalar {
    /// Whether `Display` would put a leading minus on this scalar.
    pub(crate) fn displays_negative(&self) -> bool {
        self.as_monomial().is_some_and(|(_, c)| term_is_negative(c))
    }

    pub(crate) fn is_plus_minus_one(&self) -> bool {
        self.as_monomial()
            .is_some_and(|(k, c)| k == 0 && c.im.is_zero() && c.re.abs().is_one())
    }

    /// Writes the scalar without its sign when it is a negative monomial.
    pub(crate) fn fmt_magnitude(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_monomial() {
            Some((k, c)) => fmt_term(k, c, f),
            None => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Scalar {
    /// Monomials print bare (`q^2`, `-3/2*q^-1`); sums print parenthesised
    /// in ascending exponent order (`(1-q^2)`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let multi = self.terms.len() > 1;
        if multi {
            write!(f, "(")?;
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let neg = term_is_negative(c);
            if neg {
                write!(f, "-")?;
            } else if idx > 0 {
                write!(f, "+")?;
            }
            fmt_term(*k, c, f)?;
        }
        if multi {
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let s = Scalar::one_minus_q2();
        assert!((s.eval(0.5).unwrap() - Complex64::new(0.75, 0.0)).norm() < 1e-15);
        let inv = Scalar::q_pow(-1);
        assert!((inv.eval(0.5).unwrap() - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let iq = Scalar::monomial(GaussianRational::imaginary_unit(), 1).conj();
        assert!((iq.eval(0.5).unwrap() - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn eval_rejects_q_outside_unit_interval() {
        for q in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
            assert!(matches!(Scalar::one().eval(q), Err(AlgebraError::QOutOfRange(_))));
        }
    }

    #[test]
    fn cancellation_leaves_canonical_zero() {
        let s = &Scalar::q_pow(3) - &Scalar::q_pow(3);
        assert!(s.is_zero());
        assert_eq!(s, Scalar::zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn laurent_product() {
        // (q + q^-1)(q - q^-1) = q^2 - q^-2
        let a = &Scalar::q_pow(1) + &Scalar::q_pow(-1);
        let b = &Scalar::q_pow(1) - &Scalar::q_pow(-1);
        assert_eq!(&a * &b, &Scalar::q_pow(2) - &Scalar::q_pow(-2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::one_minus_q2().to_string(), "(1-q^2)");
        assert_eq!(Scalar::q_pow(-1).to_string(), "q^-1");
        let c = Scalar::monomial(GaussianRational::from_ratio(-3, 2), 2);
        assert_eq!(c.to_string(), "-3/2*q^2");
        let z = Scalar::constant(GaussianRational::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer((-2).into()),
        ));
        assert_eq!(z.to_string(), "(1-2*i)");
        assert_eq!(Scalar::monomial(-GaussianRational::imaginary_unit(), 0).to_string(), "-i");
    }

    #[test]
    fn monomial_inverse() {
        let s = Scalar::monomial(GaussianRational::from_ratio(2, 3), -2);
        let inv = s.monomial_inverse().unwrap();
        assert!((&s * &inv).is_one());
        assert!(Scalar::one_minus_q2().monomial_inverse().is_none());
    }
}
