//! Exact normal ordering for the q-deformed polynomial *-algebra of the
//! quantum unit ball and its sphere quotient, together with truncated
//! matrix realizations of its irreducible representations and certified
//! norm estimates built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: Laurent-polynomial coefficients and the free *-algebra.
//! - [`rewrite`]: the oriented commutation rules and normal forms.
//! - [`sparse`]: a small CSR complex matrix type.
//! - [`repr`]: Fock and boundary representations, certified compressions.
//! - [`numerics`]: operator norms, norm schedules and maximum-principle reports.
//! - [`sample`]: seeded random polynomials for fuzzing and experiments.

pub mod algebra;
pub mod error;
pub mod numerics;
pub mod repr;
pub mod rewrite;
pub mod sample;
pub mod sparse;

pub use algebra::{AlgebraContext, GaussianRational, Letter, Mode, NCPoly, Scalar, Word};
pub use error::{AlgebraError, NumericsError, ReprError};
