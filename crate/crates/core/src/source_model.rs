//! Symbol distributions.
//!
//! Probabilities are kept as exact rationals. Corpus estimates are
//! `count / total`, explicit weight tables are normalized by their exact sum,
//! so every downstream sum (Kraft, expected length, class masses) is exact.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;
use std::path::Path;

use num::Zero;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{self, Prob};

/// Source alphabet with probabilities sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDistribution {
    symbols: Vec<String>,
    probs: Vec<Prob>,
}

impl SymbolDistribution {
    /// Build from already-normalized, sorted entries, checking every invariant.
    pub fn new(symbols: Vec<String>, probs: Vec<Prob>) -> Result<Self> {
        if symbols.len() != probs.len() {
            return Err(Error::SizeMismatch { what: "symbols vs probabilities", left: symbols.len(), right: probs.len() });
        }
        if symbols.len() < 2 {
            return Err(Error::AlphabetTooSmall);
        }
        let mut seen = HashSet::new();
        for (s, p) in symbols.iter().zip(&probs) {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
            if !rational::is_positive(p) {
                return Err(Error::DegenerateProbability(s.clone()));
            }
        }
        if probs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPmf("probabilities are not sorted non-increasing".into()));
        }
        let total: Prob = probs.iter().sum();
        if total != rational::one() {
            return Err(Error::InvalidPmf(format!("probabilities sum to {total}")));
        }
        Ok(SymbolDistribution { symbols, probs })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn probs(&self) -> &[Prob] {
        &self.probs
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        self.probs.iter().map(rational::to_f64).collect()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.probs_f64().iter().map(|&p| -p * p.log2()).sum()
    }
}

/// Empirical per-character distribution of a text. Whitespace counts as a
/// symbol; frequency ties are ordered by codepoint.
pub fn estimate_distribution(corpus: &str) -> Result<SymbolDistribution> {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    for c in corpus.chars() {
        *counts.entry(c).or_default() += 1;
    }
    if counts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if counts.len() < 2 {
        return Err(Error::AlphabetTooSmall);
    }
    let total: u64 = counts.values().sum();
    let mut entries: Vec<(char, u64)> = counts.into_iter().collect();
    // BTreeMap iteration is codepoint-ascending, and the sort is stable.
    entries.sort_by_key(|e| std::cmp::Reverse(e.1));
    let (symbols, probs) = entries
        .into_iter()
        .map(|(c, k)| (c.to_string(), rational::from_count(k, total)))
        .unzip();
    SymbolDistribution::new(symbols, probs)
}

/// Normalize and sort explicit `(symbol, weight)` pairs. Ties keep input order.
pub fn validate_and_sort<S: Into<String>>(raw: Vec<(S, Prob)>) -> Result<SymbolDistribution> {
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(raw.len());
    for (s, w) in raw {
        let s: String = s.into();
        if !rational::is_positive(&w) {
            return Err(Error::DegenerateProbability(s));
        }
        if !seen.insert(s.clone()) {
            return Err(Error::DuplicateSymbol(s));
        }
        entries.push((s, w));
    }
    if entries.len() < 2 {
        return Err(Error::AlphabetTooSmall);
    }
    let total: Prob = entries.iter().map(|(_, w)| w).sum();
    debug_assert!(!total.is_zero());
    entries.sort_by(|a, b| b.1.cmp(&a.1));
    let (symbols, probs) = entries.into_iter().map(|(s, w)| (s, w / &total)).unzip();
    SymbolDistribution::new(symbols, probs)
}

/// Read a UTF-8 corpus file.
pub fn read_corpus(path: &Path) -> Result<SymbolDistribution> {
    let text = std::fs::read_to_string(path)?;
    estimate_distribution(&text)
}

#[derive(Deserialize)]
struct WeightRow {
    symbol: String,
    weight: String,
}

/// Read a `symbol,weight` CSV table. Weights are parsed as exact decimals.
pub fn read_weight_table<R: Read>(reader: R) -> Result<SymbolDistribution> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut raw = Vec::new();
    for row in rdr.deserialize::<WeightRow>() {
        let row = row?;
        raw.push((row.symbol, rational::parse_decimal(&row.weight)?));
    }
    validate_and_sort(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_count;
    use proptest::prelude::*;

    fn p(s: &str) -> Prob {
        rational::parse_decimal(s).unwrap()
    }

    #[test]
    fn balanced_text() {
        let d = estimate_distribution("abab").unwrap();
        assert_eq!(d.symbols(), ["a", "b"]);
        assert_eq!(d.probs(), [from_count(1, 2), from_count(1, 2)]);
    }

    #[test]
    fn skewed_text() {
        let d = estimate_distribution("aab").unwrap();
        assert_eq!(d.symbols(), ["a", "b"]);
        assert_eq!(d.probs(), [from_count(2, 3), from_count(1, 3)]);
    }

    #[test]
    fn ties_broken_by_codepoint_and_whitespace_counted() {
        let d = estimate_distribution("b a").unwrap();
        assert_eq!(d.symbols(), [" ", "a", "b"]);
    }

    #[test]
    fn corpus_errors() {
        assert!(matches!(estimate_distribution(""), Err(Error::EmptyCorpus)));
        let err = estimate_distribution("aaaa").unwrap_err();
        assert_eq!(err.to_string(), "alphabet size < 2");
    }

    #[test]
    fn equal_weights() {
        let d = validate_and_sort(vec![("x", p("1")), ("y", p("1"))]).unwrap();
        assert_eq!(d.symbols(), ["x", "y"]);
        assert_eq!(d.probs(), [from_count(1, 2), from_count(1, 2)]);
    }

    #[test]
    fn zero_weight_is_degenerate() {
        let err = validate_and_sort(vec![("x", p("3")), ("y", p("1")), ("z", p("0"))]).unwrap_err();
        assert!(err.to_string().starts_with("degenerate probability"));
        assert!(validate_and_sort(vec![("x", p("3")), ("y", p("-1"))]).is_err());
    }

    #[test]
    fn duplicate_symbol_rejected() {
        assert!(matches!(
            validate_and_sort(vec![("x", p("1")), ("x", p("2"))]),
            Err(Error::DuplicateSymbol(_))
        ));
    }

    #[test]
    fn sorted_by_weight() {
        let d = validate_and_sort(vec![("x", p("0.2")), ("y", p("0.5")), ("z", p("0.3"))]).unwrap();
        assert_eq!(d.symbols(), ["y", "z", "x"]);
        assert_eq!(d.probs(), [p("0.5"), p("0.3"), p("0.2")]);
    }

    #[test]
    fn weight_table_csv() {
        let csv = "symbol,weight\nx,0.2\ny,0.5\nz,0.3\n";
        let d = read_weight_table(csv.as_bytes()).unwrap();
        assert_eq!(d.symbols(), ["y", "z", "x"]);
        assert!(read_weight_table("symbol,weight\nx,abc\ny,1\n".as_bytes()).is_err());
    }

    #[test]
    fn zipf_corpus_matches_independent_count() {
        use crate::synth::{zipf_corpus, Rng};
        let mut rng = Rng::seed(7);
        let text = zipf_corpus(&mut rng, 12, 1.0, 1000);
        assert_eq!(text.chars().count(), 1000);
        let d = estimate_distribution(&text).unwrap();
        // Independent counting pass.
        for (s, prob) in d.symbols().iter().zip(d.probs()) {
            let c = s.chars().next().unwrap();
            let count = text.chars().filter(|&x| x == c).count() as u64;
            assert_eq!(*prob, from_count(count, 1000));
        }
        let total: Prob = d.probs().iter().sum();
        assert_eq!(total, rational::one());
    }

    proptest! {
        #[test]
        fn sorting_preserves_multiset(weights in proptest::collection::vec(1u64..1000, 2..20)) {
            let raw: Vec<(String, Prob)> = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (format!("s{i}"), from_count(w, 1)))
                .collect();
            let d = validate_and_sort(raw).unwrap();
            let total: u64 = weights.iter().sum();
            let mut expect: Vec<Prob> = weights.iter().map(|&w| from_count(w, total)).collect();
            let mut got = d.probs().to_vec();
            expect.sort();
            got.sort();
            prop_assert_eq!(got, expect);
            prop_assert!(d.probs().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
