//! Codewords and packed bit streams.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::exec::Execution;

/// A binary codeword, first bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Codeword(Vec<bool>);

impl Codeword {
    pub fn new(bits: Vec<bool>) -> Self {
        Codeword(bits)
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_value(value: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        Codeword((0..len).rev().map(|k| (value >> k) & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_prefix_of(&self, other: &Codeword) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Codeword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::NonBinary(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Codeword)
    }
}

impl serde::Serialize for Codeword {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Codeword {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

const FBIT_MAGIC: &[u8; 4] = b"FBIT";
const COUNT_CHUNK: usize = 1 << 16;

/// A growable bit stream, packed most-significant-bit first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitStream {
    bits: BitVec<u8, Msb0>,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitStream { bits: BitVec::with_capacity(bits) }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn push_codeword(&mut self, cw: &Codeword) {
        self.bits.extend(cw.bits().iter().copied());
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).map(|b| *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    /// Number of set bits. The parallel path counts fixed-size chunks and
    /// sums them, so the result is independent of how the work is split.
    pub fn count_ones_with(&self, exec: Execution) -> u64 {
        let n = self.bits.len();
        let chunks = n.div_ceil(COUNT_CHUNK);
        let chunk_count = |c: usize| {
            let lo = c * COUNT_CHUNK;
            let hi = (lo + COUNT_CHUNK).min(n);
            self.bits[lo..hi].count_ones() as u64
        };
        #[cfg(feature = "parallel")]
        if exec.is_parallel() {
            use rayon::prelude::*;
            return (0..chunks).into_par_iter().map(chunk_count).sum();
        }
        let _ = exec;
        (0..chunks).map(chunk_count).sum()
    }

    pub fn count_ones(&self) -> u64 {
        self.count_ones_with(Execution::default())
    }

    /// Write the `FBIT` container: magic, little-endian u64 bit count,
    /// then the payload with the final byte zero-padded.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let mut packed = self.bits.clone();
        packed.set_uninitialized(false);
        w.write_all(FBIT_MAGIC)?;
        w.write_all(&(self.bits.len() as u64).to_le_bytes())?;
        w.write_all(packed.as_raw_slice())?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)
            .map_err(|_| Error::BadBitFile("missing header".into()))?;
        if &magic != FBIT_MAGIC {
            return Err(Error::BadBitFile("bad magic".into()));
        }
        let mut len = [0u8; 8];
        r.read_exact(&mut len)
            .map_err(|_| Error::BadBitFile("missing bit count".into()))?;
        let bit_len = u64::from_le_bytes(len) as usize;
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.len() != bit_len.div_ceil(8) {
            return Err(Error::BadBitFile(format!(
                "payload has {} bytes, header declares {bit_len} bits",
                payload.len()
            )));
        }
        let mut bits = BitVec::<u8, Msb0>::from_vec(payload);
        bits.truncate(bit_len);
        Ok(BitStream { bits })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.bits.len().div_ceil(8));
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }
}

impl FromStr for BitStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cw: Codeword = s.parse()?;
        Ok(cw.bits().iter().copied().collect())
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitStream { bits: iter.into_iter().collect() }
    }
}

/// Binary trie over a prefix-free codeword set, used to parse bit streams.
#[derive(Debug, Clone)]
pub struct PrefixDecoder {
    children: Vec<[u32; 2]>,
    leaf: Vec<Option<usize>>,
}

/// Result of feeding one bit to a [`PrefixDecoder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Inside the trie; more bits needed.
    Pending,
    /// A codeword ended; value is its index.
    Emit(usize),
    /// No codeword continues with this bit.
    Dead,
}

const NONE: u32 = u32::MAX;

impl PrefixDecoder {
    /// Codewords must be prefix-free; index `i` is emitted for `codewords[i]`.
    pub fn new<'a, I: IntoIterator<Item = &'a Codeword>>(codewords: I) -> Self {
        let mut dec = PrefixDecoder { children: vec![[NONE; 2]], leaf: vec![None] };
        for (idx, cw) in codewords.into_iter().enumerate() {
            let mut node = 0usize;
            for &b in cw.bits() {
                let slot = b as usize;
                if dec.children[node][slot] == NONE {
                    dec.children.push([NONE; 2]);
                    dec.leaf.push(None);
                    dec.children[node][slot] = (dec.children.len() - 1) as u32;
                }
                node = dec.children[node][slot] as usize;
            }
            dec.leaf[node] = Some(idx);
        }
        dec
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Advance from `node` by `bit`. On `Emit` the caller restarts at the root.
    pub fn step(&self, node: &mut usize, bit: bool) -> Step {
        let next = self.children[*node][bit as usize];
        if next == NONE {
            return Step::Dead;
        }
        match self.leaf[next as usize] {
            Some(idx) => {
                *node = 0;
                Step::Emit(idx)
            }
            None => {
                *node = next as usize;
                Step::Pending
            }
        }
    }
}

/// Check that `codewords` form a complete prefix-free code (Kraft sum exactly 1).
pub fn check_complete_prefix_code(codewords: &[Codeword]) -> Result<()> {
    if codewords.iter().any(Codeword::is_empty) {
        return Err(Error::EmptyCodeword);
    }
    let mut sorted: Vec<&Codeword> = codewords.iter().collect();
    sorted.sort();
    // In lexicographic order every extension of a word directly follows it
    // or follows another extension of it, so adjacent pairs suffice.
    for w in sorted.windows(2) {
        if w[0].is_prefix_of(w[1]) {
            return Err(Error::NotPrefixFree(w[0].to_string(), w[1].to_string()));
        }
    }
    let kraft = kraft_sum(codewords);
    if kraft != crate::rational::one() {
        return Err(Error::NotComplete(kraft.to_string()));
    }
    Ok(())
}

/// Exact Kraft sum of a codeword set.
pub fn kraft_sum(codewords: &[Codeword]) -> crate::rational::Prob {
    codewords.iter().map(|c| crate::rational::dyadic(c.len())).sum()
}

/// Canonical codewords for non-decreasing `lengths`: the first word is all
/// zeros and each next word is the previous one plus one, left-shifted to
/// the new length.
pub fn canonical_codewords(lengths: &[usize]) -> Vec<Codeword> {
    debug_assert!(lengths.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::with_capacity(lengths.len());
    let mut current: Vec<bool> = Vec::new();
    for (i, &len) in lengths.iter().enumerate() {
        if i == 0 {
            current = vec![false; len];
        } else {
            // binary increment
            let mut k = current.len();
            while k > 0 {
                k -= 1;
                if current[k] {
                    current[k] = false;
                } else {
                    current[k] = true;
                    break;
                }
            }
            current.resize(len, false);
        }
        out.push(Codeword::new(current.clone()));
    }
    out
}
