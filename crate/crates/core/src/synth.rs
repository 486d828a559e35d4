//! Seeded synthetic inputs: random distributions, Zipf-like corpora, fair bits.
//!
//! All randomness flows through [`Rng`], a PCG-XSL-RR 128/64 generator
//! (`rand_pcg::Pcg64`) seeded with `seed_from_u64`. The same seed gives the
//! same stream on every platform.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng as _, SeedableRng};
use rand_pcg::Pcg64;

use crate::bits::BitStream;
use crate::rational::from_count;
use crate::source_model::{validate_and_sort, SymbolDistribution};

const ALPHABET: &str = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// The crate's single seeded generator.
#[derive(Debug, Clone)]
pub struct Rng(Pcg64);

impl Rng {
    pub fn seed(seed: u64) -> Self {
        Rng(Pcg64::seed_from_u64(seed))
    }

    pub fn inner(&mut self) -> &mut Pcg64 {
        &mut self.0
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.gen()
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.gen()
    }

    pub fn range(&mut self, lo: u64, hi_inclusive: u64) -> u64 {
        self.0.gen_range(lo..=hi_inclusive)
    }
}

/// Symbol `i` of the synthetic alphabet (62 symbols).
pub fn alphabet_symbol(i: usize) -> char {
    ALPHABET.chars().nth(i).expect("synthetic alphabet has 62 symbols")
}

/// Distribution over `n` symbols with integer weights uniform in `1..=max_weight`.
pub fn random_distribution(rng: &mut Rng, n: usize, max_weight: u64) -> SymbolDistribution {
    let raw = (0..n)
        .map(|i| (format!("s{i}"), from_count(rng.range(1, max_weight), 1)))
        .collect();
    validate_and_sort(raw).expect("positive weights with n >= 2")
}

/// `len` characters drawn iid from a Zipf(`exponent`) law over `n` symbols.
pub fn zipf_corpus(rng: &mut Rng, n: usize, exponent: f64, len: usize) -> String {
    assert!(n >= 2 && n <= ALPHABET.len());
    let weights: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-exponent)).collect();
    let dist = WeightedIndex::new(&weights).expect("positive weights");
    let symbols: Vec<char> = ALPHABET.chars().take(n).collect();
    (0..len).map(|_| symbols[dist.sample(rng.inner())]).collect()
}

/// `len` iid equiprobable bits.
pub fn fair_bits(rng: &mut Rng, len: usize) -> BitStream {
    let mut out = BitStream::with_capacity(len);
    let mut word = 0u64;
    for i in 0..len {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        out.push((word >> (i % 64)) & 1 == 1);
    }
    out
}

/// `len` symbols sampled iid from a distribution, as symbol indices.
pub fn sample_indices(rng: &mut Rng, dist: &SymbolDistribution, len: usize) -> Vec<usize> {
    let index = WeightedIndex::new(dist.probs_f64()).expect("valid distribution");
    (0..len).map(|_| index.sample(rng.inner())).collect()
}
