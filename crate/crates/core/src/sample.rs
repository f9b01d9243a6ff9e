//! Seeded random polynomials for fuzzing and the experiment catalog.

use num_rational::BigRational;
use rand::Rng;

use crate::algebra::{GaussianRational, Letter, NCPoly, Scalar, Word};

/// A small random coefficient `(a + b·i)·q^k` with `a, b ∈ [-3, 3]`, `k ∈ [0, 2]`.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let a: i64 = rng.random_range(-3..=3);
        let b: i64 = if rng.random_bool(0.25) { rng.random_range(-3..=3) } else { 0 };
        if a == 0 && b == 0 {
            continue;
        }
        let k: i32 = rng.random_range(0..=2);
        let c = GaussianRational::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        );
        return Scalar::monomial(c, k);
    }
}

/// A random polynomial with 1 to 4 terms and words of length `≤ max_degree`.
/// With `holomorphic` set only unstarred letters are used.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, max_degree: usize, holomorphic: bool) -> NCPoly {
    let terms = rng.random_range(1..=4);
    let mut p = NCPoly::zero(n);
    for _ in 0..terms {
        let len = rng.random_range(0..=max_degree);
        let word = Word(
            (0..len)
                .map(|_| Letter {
                    index: rng.random_range(1..=n),
                    starred: !holomorphic && rng.random_bool(0.5),
                })
                .collect(),
        );
        p.add_term(word, random_scalar(rng));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::is_holomorphic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_and_bounded() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let p = random_poly(&mut a, 3, 4, false);
            assert_eq!(p, random_poly(&mut b, 3, 4, false));
            assert!(p.degree() <= 4);
            let h = random_poly(&mut a, 2, 3, true);
            random_poly(&mut b, 2, 3, true);
            assert!(is_holomorphic(&h));
        }
    }
}
