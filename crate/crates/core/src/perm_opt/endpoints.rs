use std::cmp::Reverse;

use super::Instance;
use crate::bits::Codeword;
use crate::error::{Error, Result};
use crate::huffman::{Codebook, LengthClassPartition};
use crate::rational::{self, Prob};

/// The two extreme arrangements of one length class. `plus[k]` is the
/// position (within the class) of the codeword given to member `k` under the
/// ones-maximizing arrangement; `minus[k]` likewise for the minimizing one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEndpoints {
    pub length: usize,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

/// Extreme expected ones-counts per class and the derived selection problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointProfile {
    pub classes: Vec<ClassEndpoints>,
    /// `N_j^+`
    pub n_plus: Vec<Prob>,
    /// `N_j^-`
    pub n_minus: Vec<Prob>,
    /// `N_j` under the arrangement the profile was computed from.
    pub n_current: Vec<Prob>,
    /// Class masses `r_j`.
    pub r: Vec<Prob>,
    /// Expected length `L`.
    pub expected_length: Prob,
    /// `a_j = r_j (N_j^- - N_j^+) / L`
    pub a: Vec<Prob>,
    /// `b = sum_j r_j N_j^+ / L - 1/2`
    pub b: Prob,
}

impl EndpointProfile {
    pub fn m(&self) -> usize {
        self.classes.len()
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(rational::to_f64).collect()
    }

    pub fn b_f64(&self) -> f64 {
        rational::to_f64(&self.b)
    }

    /// Exact `q(x) = a.x + b + 1/2`.
    pub fn q_for(&self, x: &[u8]) -> Prob {
        let mut q = &self.b + rational::from_count(1, 2);
        for (aj, &xj) in self.a.iter().zip(x) {
            if xj == 1 {
                q += aj;
            }
        }
        q
    }

    pub fn instance(&self, epsilon: Option<f64>) -> Instance {
        Instance { a: self.a_f64(), b: self.b_f64(), epsilon }
    }
}

/// Ones-maximizing and ones-minimizing assignment of a class's codewords to
/// its members (members listed most probable first).
///
/// The maximizing arrangement hands codewords out in decreasing ones-count,
/// the minimizing one in increasing ones-count; equal counts go
/// lexicographically smaller codeword first in both.
pub fn extreme_permutations(codewords: &[Codeword], conditional: &[Prob]) -> (Vec<usize>, Vec<usize>) {
    debug_assert_eq!(codewords.len(), conditional.len());
    debug_assert!(conditional.windows(2).all(|w| w[0] >= w[1]));
    let mut plus: Vec<usize> = (0..codewords.len()).collect();
    plus.sort_by(|&i, &k| {
        Reverse(codewords[i].ones()).cmp(&Reverse(codewords[k].ones())).then_with(|| codewords[i].cmp(&codewords[k]))
    });
    let mut minus: Vec<usize> = (0..codewords.len()).collect();
    minus.sort_by(|&i, &k| codewords[i].ones().cmp(&codewords[k].ones()).then_with(|| codewords[i].cmp(&codewords[k])));
    (plus, minus)
}

fn weighted_ones(conditional: &[Prob], words: &[&Codeword], arrangement: &[usize]) -> Prob {
    conditional
        .iter()
        .zip(arrangement)
        .map(|(p, &pos)| p * Prob::from_integer(words[pos].ones().into()))
        .sum()
}

/// `N_j^+`, `N_j^-` for every class and the coefficients `a`, `b`.
pub fn endpoint_counts(partition: &LengthClassPartition, codebook: &Codebook) -> Result<EndpointProfile> {
    let total: usize = partition.sizes().iter().sum();
    if total != codebook.len() {
        return Err(Error::SizeMismatch { what: "partition vs codebook", left: total, right: codebook.len() });
    }
    let mut classes = Vec::with_capacity(partition.len());
    let mut n_plus = Vec::with_capacity(partition.len());
    let mut n_minus = Vec::with_capacity(partition.len());
    let mut n_current = Vec::with_capacity(partition.len());
    for class in &partition.classes {
        let owned: Vec<Codeword> = class.members.iter().map(|&i| codebook.codewords()[i].clone()).collect();
        let words: Vec<&Codeword> = owned.iter().collect();
        let (plus, minus) = extreme_permutations(&owned, &class.conditional);
        let identity: Vec<usize> = (0..words.len()).collect();
        n_plus.push(weighted_ones(&class.conditional, &words, &plus));
        n_minus.push(weighted_ones(&class.conditional, &words, &minus));
        n_current.push(weighted_ones(&class.conditional, &words, &identity));
        classes.push(ClassEndpoints { length: class.length, plus, minus });
    }
    let r = partition.masses();
    let expected_length: Prob =
        partition.classes.iter().map(|c| &c.mass * Prob::from_integer(c.length.into())).sum();
    let a = r
        .iter()
        .zip(n_minus.iter().zip(&n_plus))
        .map(|(rj, (lo, hi))| rj * (lo - hi) / &expected_length)
        .collect();
    let b = r.iter().zip(&n_plus).map(|(rj, hi)| rj * hi).sum::<Prob>() / &expected_length - rational::from_count(1, 2);
    Ok(EndpointProfile { classes, n_plus, n_minus, n_current, r, expected_length, a, b })
}
