//! Frequency of 1s: expected under the source model, observed in a stream,
//! and the Wald confidence interval used to test for a fair bit stream.

use serde::Serialize;

use crate::bits::{BitStream, Codeword};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::huffman::{check_aligned, Codebook, LengthClassPartition};
use crate::rational::{self, Prob};
use crate::source_model::SymbolDistribution;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnesReport {
    pub expected_q: f64,
    pub empirical_q: f64,
    pub ones_count: u64,
    pub bit_count: u64,
    pub level: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// True when the interval excludes 0.5.
    pub fair_rejected: bool,
}

impl OnesReport {
    pub fn new(expected_q: f64, bits: &BitStream, level: f64) -> Result<Self> {
        let (ones, total, q) = empirical_ones_frequency(bits)?;
        let (lo, hi) = wald_interval(ones, total, level)?;
        Ok(OnesReport {
            expected_q,
            empirical_q: q,
            ones_count: ones,
            bit_count: total,
            level,
            ci_low: lo,
            ci_high: hi,
            fair_rejected: !(lo..=hi).contains(&0.5),
        })
    }

    pub fn verdict(&self) -> &'static str {
        if self.fair_rejected {
            "fair rejected"
        } else {
            "fair not rejected"
        }
    }
}

/// Number of 1s in a textual codeword such as `"10110"`.
pub fn ones_count(codeword: &str) -> Result<usize> {
    let cw: Codeword = codeword.parse()?;
    if cw.is_empty() {
        return Err(Error::EmptyCodeword);
    }
    Ok(cw.ones())
}

/// `q = sum_i p_i ones(c_i) / sum_i p_i l(i)`.
pub fn expected_ones_frequency(codebook: &Codebook, dist: &SymbolDistribution) -> Result<Prob> {
    check_aligned(codebook, dist)?;
    let mut ones = rational::zero();
    let mut length = rational::zero();
    for (p, c) in dist.probs().iter().zip(codebook.codewords()) {
        ones += p * Prob::from_integer(c.ones().into());
        length += p * Prob::from_integer(c.len().into());
    }
    Ok(ones / length)
}

/// The same quantity in class form, `sum_j r_j N_j / sum_j r_j l_j`.
pub fn expected_ones_frequency_by_class(partition: &LengthClassPartition) -> Prob {
    let ones: Prob = partition.classes.iter().map(|c| &c.mass * &c.expected_ones).sum();
    let length: Prob = partition.classes.iter().map(|c| &c.mass * Prob::from_integer(c.length.into())).sum();
    ones / length
}

/// `(ones, bits, ones / bits)` for a non-empty stream.
pub fn empirical_ones_frequency(bits: &BitStream) -> Result<(u64, u64, f64)> {
    empirical_ones_frequency_with(bits, Execution::default())
}

pub fn empirical_ones_frequency_with(bits: &BitStream, exec: Execution) -> Result<(u64, u64, f64)> {
    if bits.is_empty() {
        return Err(Error::EmptyStream);
    }
    let ones = bits.count_ones_with(exec);
    let total = bits.len() as u64;
    Ok((ones, total, ones as f64 / total as f64))
}

/// Wald interval `q +/- z sqrt(q (1 - q) / n)` clamped to `[0, 1]`.
pub fn wald_interval(ones: u64, bits: u64, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    if bits == 0 || ones > bits {
        return Err(Error::InvalidCount { ones, bits });
    }
    let q = ones as f64 / bits as f64;
    let z = normal_quantile((1.0 + level) / 2.0);
    let half = z * (q * (1.0 - q) / bits as f64).sqrt();
    Ok(((q - half).max(0.0), (q + half).min(1.0)))
}

/// Standard normal quantile.
///
/// Acklam's rational approximation: a central rational function on
/// `[0.02425, 0.97575]` and tail rational functions in `sqrt(-2 ln p)`
/// outside. Relative error below 1.15e-9 over the open unit interval.
pub fn normal_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];
    const P_LOW: f64 = 0.02425;

    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - P_LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}
