//! Seeded sampling of group elements and coefficients.
//!
//! Random elements of Γ are words of bounded length in the cached generators
//! and their inverses, so every randomized check is reproducible from a seed.

use num_bigint::BigInt;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{GroupElement, Rational};
use crate::congruence::CongruenceSubgroup;
use crate::error::Result;

pub const DEFAULT_WORD_LENGTH: usize = 6;

pub struct WordSampler {
    letters: Vec<GroupElement>,
    max_len: usize,
    rng: ChaCha8Rng,
}

impl WordSampler {
    pub fn new(group: &CongruenceSubgroup, seed: u64) -> Result<Self> {
        Self::with_length(group, seed, DEFAULT_WORD_LENGTH)
    }

    pub fn with_length(group: &CongruenceSubgroup, seed: u64, max_len: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for g in group.generators()? {
            letters.push(g.clone());
            letters.push(g.inverse());
        }
        Ok(WordSampler {
            letters,
            max_len,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A word of length in `0..=max_len`.
    pub fn element(&mut self) -> GroupElement {
        let len = self.rng.gen_range(0..=self.max_len);
        self.word(len)
    }

    /// A word of exactly `len` letters.
    pub fn word(&mut self, len: usize) -> GroupElement {
        (0..len).fold(GroupElement::identity(), |acc, _| {
            let k = self.rng.gen_range(0..self.letters.len());
            acc.mul(&self.letters[k])
        })
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn small_rational(&mut self) -> Rational {
        let num = self.rng.gen_range(-5i64..=5);
        let den = self.rng.gen_range(1i64..=4);
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn gaussian(&mut self) -> Complex<Rational> {
        Complex::new(self.small_rational(), self.small_rational())
    }
}
