//! Huffman construction, canonical codewords and length classes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::Write;

use serde::Serialize;

use crate::bits::{canonical_codewords, check_complete_prefix_code, Codeword};
use crate::error::{Error, Result};
use crate::rational::{self, Prob};
use crate::source_model::SymbolDistribution;

/// Codewords aligned with a distribution's symbol order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    symbols: Vec<String>,
    codewords: Vec<Codeword>,
}

impl Codebook {
    /// Accepts only complete prefix-free codes.
    pub fn new(symbols: Vec<String>, codewords: Vec<Codeword>) -> Result<Self> {
        if symbols.len() != codewords.len() {
            return Err(Error::SizeMismatch { what: "symbols vs codewords", left: symbols.len(), right: codewords.len() });
        }
        check_complete_prefix_code(&codewords)?;
        Ok(Codebook { symbols, codewords })
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.iter().map(Codeword::len).collect()
    }

    pub fn codeword_for(&self, symbol: &str) -> Option<&Codeword> {
        self.symbols.iter().position(|s| s == symbol).map(|i| &self.codewords[i])
    }

    /// Table rows in `symbol,probability,codeword,length` layout.
    pub fn rows(&self, dist: &SymbolDistribution) -> Result<Vec<CodeRow>> {
        check_aligned(self, dist)?;
        Ok(self
            .symbols
            .iter()
            .zip(&self.codewords)
            .zip(dist.probs())
            .map(|((s, c), p)| CodeRow {
                symbol: s.clone(),
                probability: rational::to_f64(p),
                codeword: c.to_string(),
                length: c.len(),
            })
            .collect())
    }

    /// CSV export with header `symbol,probability,codeword,length`.
    pub fn write_csv<W: Write>(&self, dist: &SymbolDistribution, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for row in self.rows(dist)? {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeRow {
    pub symbol: String,
    pub probability: f64,
    pub codeword: String,
    pub length: usize,
}

pub(crate) fn check_aligned(codebook: &Codebook, dist: &SymbolDistribution) -> Result<()> {
    if codebook.len() != dist.len() {
        return Err(Error::SizeMismatch { what: "codebook vs distribution", left: codebook.len(), right: dist.len() });
    }
    if codebook.symbols() != dist.symbols() {
        return Err(Error::InvalidPmf("codebook and distribution list different symbols".into()));
    }
    Ok(())
}

/// Huffman codeword lengths for non-increasing `probs`.
///
/// Nodes are merged smallest weight first; equal weights merge the
/// earliest-created node first, with leaves created in symbol order before
/// any internal node. The depth multiset is then assigned shortest-first in
/// symbol order, so lengths are non-decreasing.
pub fn huffman_lengths(probs: &[Prob]) -> Vec<usize> {
    let n = probs.len();
    if n == 1 {
        return vec![1];
    }
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut heap: BinaryHeap<Reverse<(Prob, usize)>> =
        probs.iter().cloned().enumerate().map(|(i, p)| Reverse((p, i))).collect();
    let mut next_id = n;
    while heap.len() > 1 {
        let Reverse((w1, a)) = heap.pop().expect("heap has two nodes");
        let Reverse((w2, b)) = heap.pop().expect("heap has two nodes");
        parent[a] = next_id;
        parent[b] = next_id;
        heap.push(Reverse((w1 + w2, next_id)));
        next_id += 1;
    }
    let root = next_id - 1;
    let mut depths: Vec<usize> = (0..n)
        .map(|leaf| {
            let mut d = 0;
            let mut node = leaf;
            while node != root {
                node = parent[node];
                d += 1;
            }
            d
        })
        .collect();
    depths.sort_unstable();
    depths
}

/// Huffman code with canonical bit patterns.
pub fn build_huffman(dist: &SymbolDistribution) -> Codebook {
    let lengths = huffman_lengths(dist.probs());
    let codewords = canonical_codewords(&lengths);
    Codebook::new(dist.symbols().to_vec(), codewords).expect("Huffman codes are complete and prefix-free")
}

/// Expected codeword length `L = sum p_i l(i)` in bits per symbol.
pub fn expected_length(codebook: &Codebook, dist: &SymbolDistribution) -> Result<Prob> {
    check_aligned(codebook, dist)?;
    Ok(dist
        .probs()
        .iter()
        .zip(codebook.codewords())
        .map(|(p, c)| p * Prob::from_integer(c.len().into()))
        .sum())
}

/// Codewords sharing one length.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthClass {
    pub length: usize,
    /// Symbol indices, ascending (so non-increasing probability).
    pub members: Vec<usize>,
    /// Class probability `r_j`.
    pub mass: Prob,
    /// `p_i / r_j` per member.
    pub conditional: Vec<Prob>,
    /// Conditional expected number of 1s `N_j` under the current arrangement.
    pub expected_ones: Prob,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthClassPartition {
    pub classes: Vec<LengthClass>,
}

impl LengthClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn masses(&self) -> Vec<Prob> {
        self.classes.iter().map(|c| c.mass.clone()).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.members.len()).collect()
    }
}

/// Group codewords by distinct length, ascending.
pub fn partition_by_length(codebook: &Codebook, dist: &SymbolDistribution) -> Result<LengthClassPartition> {
    check_aligned(codebook, dist)?;
    let mut lengths: Vec<usize> = codebook.lengths();
    lengths.sort_unstable();
    lengths.dedup();
    let classes = lengths
        .into_iter()
        .map(|length| {
            let members: Vec<usize> = (0..codebook.len()).filter(|&i| codebook.codewords()[i].len() == length).collect();
            let mass: Prob = members.iter().map(|&i| &dist.probs()[i]).sum();
            let conditional: Vec<Prob> = members.iter().map(|&i| &dist.probs()[i] / &mass).collect();
            let expected_ones = members
                .iter()
                .zip(&conditional)
                .map(|(&i, p)| p * Prob::from_integer(codebook.codewords()[i].ones().into()))
                .sum();
            LengthClass { length, members, mass, conditional, expected_ones }
        })
        .collect();
    Ok(LengthClassPartition { classes })
}
