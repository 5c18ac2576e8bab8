//! Seeded generators for test corpora.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GaussianRational, LaurentPoly, OmegaFunction};
use crate::geometry::ExtPoint2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// a/b + (c/d) i with small numerators; imaginary part present about a third of the time.
pub fn small_gaussian<R: Rng>(rng: &mut R) -> GaussianRational {
    loop {
        let re = GaussianRational::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let im = if rng.gen_bool(1.0 / 3.0) {
            GaussianRational::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3)) * GaussianRational::i()
        } else {
            GaussianRational::from_i64(0)
        };
        let c = re + im;
        if c != GaussianRational::from_i64(0) {
            return c;
        }
    }
}

/// Shape of a random class member.
#[derive(Clone, Copy, Debug)]
pub struct OmegaShape {
    pub max_support: usize,
    pub min_exp: i32,
    pub max_exp: i32,
    pub max_k: u32,
}

impl OmegaShape {
    /// Up to six monomials, exponents in [-3, 3], k ≤ 2.
    pub const CORPUS: OmegaShape = OmegaShape { max_support: 6, min_exp: -3, max_exp: 3, max_k: 2 };
    /// Low-degree members without negative powers.
    pub const LOW_DEGREE: OmegaShape = OmegaShape { max_support: 3, min_exp: 0, max_exp: 2, max_k: 1 };
}

pub fn random_omega<R: Rng>(rng: &mut R, shape: OmegaShape) -> OmegaFunction {
    loop {
        let support = rng.gen_range(1..=shape.max_support);
        let mut p = LaurentPoly::zero();
        for _ in 0..support {
            let i = rng.gen_range(shape.min_exp..=shape.max_exp);
            let j = rng.gen_range(shape.min_exp..=shape.max_exp);
            p.add_term(i, j, small_gaussian(rng));
        }
        let k = rng.gen_range(0..=shape.max_k);
        let f = OmegaFunction::new(p, k);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn corpus(seed: u64, count: usize) -> Vec<OmegaFunction> {
    let mut r = rng(seed);
    (0..count).map(|_| random_omega(&mut r, OmegaShape::CORPUS)).collect()
}

/// Gaussian rational with |re|, |im| ≤ bound, avoiding zero.
pub fn small_nonzero<R: Rng>(rng: &mut R, bound: i64, den: i64) -> GaussianRational {
    loop {
        let c = GaussianRational::complex(rng.gen_range(-bound..=bound), den, rng.gen_range(-bound..=bound), den);
        if c != GaussianRational::from_i64(0) {
            return c;
        }
    }
}

/// Finite point with nonzero coordinates, |z|,|w| < 1/2 per coordinate part.
pub fn random_point<R: Rng>(rng: &mut R) -> ExtPoint2<GaussianRational> {
    ExtPoint2::finite(small_nonzero(rng, 4, 9), small_nonzero(rng, 4, 9))
}

pub fn random_point_c64<R: Rng>(rng: &mut R) -> ExtPoint2<Complex64> {
    random_point(rng).to_c64()
}

/// Parameters (α, β) of Φ_{α,β} with αβ ≠ 1.
pub fn random_phi<R: Rng>(rng: &mut R) -> (GaussianRational, GaussianRational) {
    (small_nonzero(rng, 3, 8), small_nonzero(rng, 3, 8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_within_shape() {
        assert_eq!(corpus(7, 5), corpus(7, 5));
        for f in corpus(11, 40) {
            assert!(f.numerator().len() <= 6);
            assert!(f.k() <= 2);
            for (&(i, j), _) in f.numerator().terms() {
                assert!((-3..=3).contains(&i) && (-3..=3).contains(&j));
            }
        }
    }
}
