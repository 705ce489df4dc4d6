use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ratlin::{Rational, SparseVec, Subspace};

/// Deterministic source of small integer coefficients in `[-9, 9]`.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self) -> i64 {
        self.rng.gen_range(-9..=9)
    }

    pub fn rational(&mut self) -> Rational {
        Rational::from_int(self.int())
    }

    /// Random combination of the echelon basis of `s`.
    pub fn combo(&mut self, s: &Subspace) -> SparseVec {
        let mut v = SparseVec::new();
        for b in s.basis() {
            let c = self.rational();
            if !c.is_zero() {
                v = v.add_scaled(&c, b);
            }
        }
        v
    }

    /// Like [`Sampler::combo`] but retries until the result is nonzero.
    pub fn nonzero_combo(&mut self, s: &Subspace) -> SparseVec {
        assert!(!s.is_zero(), "zero subspace has no nonzero element");
        loop {
            let v = self.combo(s);
            if !v.is_zero() {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_bounded() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..200 {
            let x = a.int();
            assert_eq!(x, b.int());
            assert!((-9..=9).contains(&x));
        }
        let s = Subspace::coordinate(5, [1, 3]);
        let v = a.nonzero_combo(&s);
        assert!(s.contains(&v));
    }
}
