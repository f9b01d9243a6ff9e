//! Exact arithmetic for coefficients and for the free *-algebra on
//! `z_1, …, z_n`.

mod poly;
mod scalar;
mod word;

use std::fmt;
use std::str::FromStr;

pub use poly::NCPoly;
pub use scalar::{check_q, GaussianRational, Scalar};
pub use word::{Letter, Word};

use crate::error::AlgebraError;

/// Which algebra the rewriting targets: the ball algebra itself, or its
/// quotient by the ideal generated by `1 - Σ z_k z_k*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ball,
    Sphere,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ball => "ball",
            Mode::Sphere => "sphere",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ball" => Ok(Mode::Ball),
            "sphere" => Ok(Mode::Sphere),
            other => Err(format!("unknown mode '{other}' (expected ball or sphere)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    n: usize,
    mode: Mode,
}

impl AlgebraContext {
    pub fn new(n: usize, mode: Mode) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::EmptyContext);
        }
        Ok(AlgebraContext { n, mode })
    }

    pub fn ball(n: usize) -> Result<Self, AlgebraError> {
        Self::new(n, Mode::Ball)
    }

    pub fn sphere(n: usize) -> Result<Self, AlgebraError> {
        Self::new(n, Mode::Sphere)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn check(&self, p: &NCPoly) -> Result<(), AlgebraError> {
        if p.n() != self.n {
            return Err(AlgebraError::ContextMismatch { left: p.n(), right: self.n });
        }
        Ok(())
    }

    pub fn z(&self, j: usize) -> Result<NCPoly, AlgebraError> {
        NCPoly::generator(self.n, j, false)
    }

    pub fn z_star(&self, j: usize) -> Result<NCPoly, AlgebraError> {
        NCPoly::generator(self.n, j, true)
    }

    /// `1 - Σ_k z_k z_k*`, the generator of the boundary ideal.
    pub fn defect(&self) -> NCPoly {
        let mut p = NCPoly::one(self.n);
        for k in 1..=self.n {
            p.add_term(Word(vec![Letter::z(k), Letter::z_star(k)]), -Scalar::one());
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-2i32..3, -3i64..4, -3i64..4, 1i64..4), 0..3).prop_map(|ts| {
            Scalar::from_terms(ts.into_iter().map(|(k, a, b, d)| {
                (
                    k,
                    GaussianRational::new(
                        num_rational::BigRational::new(a.into(), d.into()),
                        num_rational::BigRational::new(b.into(), d.into()),
                    ),
                )
            }))
        })
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = NCPoly> {
        let letter = (1..=n, any::<bool>()).prop_map(|(index, starred)| Letter { index, starred });
        let word = prop::collection::vec(letter, 0..4).prop_map(Word);
        prop::collection::vec((word, arb_scalar()), 0..4)
            .prop_map(move |ts| NCPoly::from_terms(n, ts).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }

        #[test]
        fn adjoint_is_involutive_antihomomorphism(a in arb_poly(3), b in arb_poly(3)) {
            prop_assert_eq!(a.adjoint().adjoint(), a.clone());
            prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        }

        #[test]
        fn scalar_eval_is_ring_homomorphism(s in arb_scalar(), t in arb_scalar(), q in 0.05f64..0.95) {
            let lhs = (&s * &t).eval(q).unwrap();
            let rhs = s.eval(q).unwrap() * t.eval(q).unwrap();
            let scale = 1.0f64.max(lhs.norm()).max(rhs.norm());
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }

        #[test]
        fn conjugation_commutes_with_eval(s in arb_scalar(), q in 0.05f64..0.95) {
            let a = s.conj().eval(q).unwrap();
            let b = s.eval(q).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * 1.0f64.max(a.norm()));
        }
    }

    #[test]
    fn defect_for_two_generators() {
        let ctx = AlgebraContext::ball(2).unwrap();
        assert_eq!(ctx.defect().to_string(), "-z1*z1' - z2*z2' + 1");
        assert!(AlgebraContext::ball(0).is_err());
    }
}
