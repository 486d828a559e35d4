//! The half Huffman construction and the codec built on it.
//!
//! 1. Huffman code with canonical patterns.
//! 2. Extreme ones-counts per length class.
//! 3. Selection `x` minimizing `|q - 0.5|` with one of the solvers.
//! 4. Reassign patterns within each class according to `x`.
//!
//! Only patterns within one length class move, so lengths per symbol and
//! therefore the expected length are untouched.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bits::{BitStream, Codeword, PrefixDecoder, Step};
use crate::error::{Error, Result};
use crate::huffman::{build_huffman, expected_length, partition_by_length, CodeRow, Codebook, LengthClassPartition};
use crate::ones_stats::expected_ones_frequency;
use crate::perm_opt::{endpoint_counts, solve, EndpointProfile, Selection, SolverKind, DEFAULT_EPSILON};
use crate::rational::{self, Prob};
use crate::source_model::SymbolDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodecChoice {
    Hc,
    #[default]
    HalfHc,
}

impl FromStr for CodecChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hc" => Ok(CodecChoice::Hc),
            "halfhc" => Ok(CodecChoice::HalfHc),
            other => Err(format!("unknown codec {other:?} (expected hc or halfhc)")),
        }
    }
}

impl fmt::Display for CodecChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodecChoice::Hc => "hc",
            CodecChoice::HalfHc => "halfhc",
        })
    }
}

/// Huffman code, its half Huffman rearrangement, and how it was chosen.
#[derive(Debug, Clone)]
pub struct CodecArtifact {
    pub distribution: SymbolDistribution,
    pub base: Codebook,
    pub permuted: Codebook,
    pub partition: LengthClassPartition,
    pub profile: EndpointProfile,
    pub selection: Selection,
    pub solver: SolverKind,
    pub expected_length: Prob,
    pub expected_q_base: Prob,
    pub expected_q_half: Prob,
}

impl CodecArtifact {
    pub fn codebook(&self, choice: CodecChoice) -> &Codebook {
        match choice {
            CodecChoice::Hc => &self.base,
            CodecChoice::HalfHc => &self.permuted,
        }
    }

    pub fn expected_q(&self, choice: CodecChoice) -> f64 {
        rational::to_f64(match choice {
            CodecChoice::Hc => &self.expected_q_base,
            CodecChoice::HalfHc => &self.expected_q_half,
        })
    }

    pub fn export(&self) -> ArtifactExport {
        ArtifactExport {
            base: self.base.rows(&self.distribution).expect("aligned"),
            permuted: self.permuted.rows(&self.distribution).expect("aligned"),
            class_lengths: self.profile.classes.iter().map(|c| c.length).collect(),
            class_sizes: self.partition.sizes(),
            solver: self.solver,
            selection: self.selection.x.clone(),
            objective: self.selection.objective,
            expected_length: rational::to_f64(&self.expected_length),
            expected_q_base: rational::to_f64(&self.expected_q_base),
            expected_q_half: rational::to_f64(&self.expected_q_half),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.export()).expect("artifact serializes")
    }
}

/// JSON form of a [`CodecArtifact`].
#[derive(Debug, Clone, Serialize)]
pub struct ArtifactExport {
    pub base: Vec<CodeRow>,
    pub permuted: Vec<CodeRow>,
    pub class_lengths: Vec<usize>,
    pub class_sizes: Vec<usize>,
    pub solver: SolverKind,
    pub selection: Vec<u8>,
    pub objective: f64,
    pub expected_length: f64,
    pub expected_q_base: f64,
    pub expected_q_half: f64,
}

/// Half Huffman code for `dist`.
pub fn half_huffman(dist: &SymbolDistribution, solver: SolverKind) -> Result<CodecArtifact> {
    half_huffman_with(dist, solver, DEFAULT_EPSILON)
}

/// As [`half_huffman`] with an explicit bisection tolerance.
pub fn half_huffman_with(dist: &SymbolDistribution, solver: SolverKind, epsilon: f64) -> Result<CodecArtifact> {
    let base = build_huffman(dist);
    let partition = partition_by_length(&base, dist)?;
    let profile = endpoint_counts(&partition, &base)?;
    let selection = solve(solver, &profile.a_f64(), profile.b_f64(), epsilon)?;
    let permuted = apply_selection(&base, &partition, &profile, &selection.x)?;
    Ok(CodecArtifact {
        expected_length: expected_length(&base, dist)?,
        expected_q_base: expected_ones_frequency(&base, dist)?,
        expected_q_half: expected_ones_frequency(&permuted, dist)?,
        distribution: dist.clone(),
        base,
        permuted,
        partition,
        profile,
        selection,
        solver,
    })
}

/// Rearrange each class: `x_j = 0` takes the ones-maximizing arrangement,
/// `x_j = 1` the ones-minimizing one.
pub fn apply_selection(
    base: &Codebook,
    partition: &LengthClassPartition,
    profile: &EndpointProfile,
    x: &[u8],
) -> Result<Codebook> {
    if x.len() != profile.m() || partition.len() != profile.m() {
        return Err(Error::SizeMismatch { what: "selection vs classes", left: x.len(), right: profile.m() });
    }
    let mut codewords = base.codewords().to_vec();
    for ((class, ends), &xj) in partition.classes.iter().zip(&profile.classes).zip(x) {
        let arrangement = if xj == 0 { &ends.plus } else { &ends.minus };
        for (k, &member) in class.members.iter().enumerate() {
            codewords[member] = base.codewords()[class.members[arrangement[k]]].clone();
        }
    }
    Codebook::new(base.symbols().to_vec(), codewords)
}

/// Best `|q - 0.5|` over all within-class permutations versus over the
/// endpoint selections only. `None` when the search space exceeds `max_states`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PermutationGap {
    pub full_optimum: f64,
    pub endpoint_optimum: f64,
}

pub fn permutation_gap(artifact: &CodecArtifact, max_states: usize) -> Option<PermutationGap> {
    let l = rational::to_f64(&artifact.expected_length);
    let mut per_class: Vec<Vec<f64>> = Vec::new();
    let mut states = 1usize;
    for class in &artifact.partition.classes {
        let k = class.members.len();
        let perms: usize = (1..=k).product();
        if perms > max_states {
            return None;
        }
        let words: Vec<&Codeword> = class.members.iter().map(|&i| &artifact.base.codewords()[i]).collect();
        let mut values = BTreeSet::new();
        for_each_permutation(k, &mut |perm| {
            let n: Prob = class
                .conditional
                .iter()
                .zip(perm)
                .map(|(p, &pos)| p * Prob::from_integer(words[pos].ones().into()))
                .sum();
            values.insert(&class.mass * n);
        });
        states = states.saturating_mul(values.len());
        if states > max_states {
            return None;
        }
        per_class.push(values.iter().map(|v| rational::to_f64(v) / l).collect());
    }
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; per_class.len()];
    'outer: loop {
        let q: f64 = idx.iter().zip(&per_class).map(|(&i, v)| v[i]).sum();
        best = best.min((q - 0.5).abs());
        for j in (0..idx.len()).rev() {
            idx[j] += 1;
            if idx[j] < per_class[j].len() {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    Some(PermutationGap { full_optimum: best, endpoint_optimum: (rational::to_f64(&artifact.expected_q_half) - 0.5).abs() })
}

fn for_each_permutation(k: usize, f: &mut dyn FnMut(&[usize])) {
    fn heap(n: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if n <= 1 {
            f(perm);
            return;
        }
        for i in 0..n - 1 {
            heap(n - 1, perm, f);
            if n.is_multiple_of(2) {
                perm.swap(i, n - 1);
            } else {
                perm.swap(0, n - 1);
            }
        }
        heap(n - 1, perm, f);
    }
    let mut perm: Vec<usize> = (0..k).collect();
    heap(k, &mut perm, f);
}

/// Concatenate the codewords of `symbols`.
pub fn encode<I, S>(symbols: I, codebook: &Codebook) -> Result<BitStream>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let table: HashMap<&str, &Codeword> =
        codebook.symbols().iter().map(String::as_str).zip(codebook.codewords()).collect();
    let mut out = BitStream::new();
    for s in symbols {
        let s = s.as_ref();
        let cw = table.get(s).ok_or_else(|| Error::UnknownSymbol(s.to_string()))?;
        out.push_codeword(cw);
    }
    Ok(out)
}

/// Encode a text one character per symbol.
pub fn encode_text(text: &str, codebook: &Codebook) -> Result<BitStream> {
    let mut buf = [0u8; 4];
    let table: HashMap<&str, &Codeword> =
        codebook.symbols().iter().map(String::as_str).zip(codebook.codewords()).collect();
    let mut out = BitStream::with_capacity(text.len() * 4);
    for c in text.chars() {
        let key: &str = c.encode_utf8(&mut buf);
        let cw = table.get(key).ok_or_else(|| Error::UnknownSymbol(c.to_string()))?;
        out.push_codeword(cw);
    }
    Ok(out)
}

/// Parse a concatenation of codewords back into symbols.
pub fn decode(bits: &BitStream, codebook: &Codebook) -> Result<Vec<String>> {
    let dec = PrefixDecoder::new(codebook.codewords());
    let mut out = Vec::new();
    let mut node = dec.root();
    let mut start = 0;
    for (pos, bit) in bits.iter().enumerate() {
        match dec.step(&mut node, bit) {
            Step::Pending => {}
            Step::Emit(i) => {
                out.push(codebook.symbols()[i].clone());
                start = pos + 1;
            }
            Step::Dead => return Err(Error::InvalidCodeword(start)),
        }
    }
    if node != dec.root() {
        return Err(Error::TruncatedStream);
    }
    Ok(out)
}

pub fn decode_text(bits: &BitStream, codebook: &Codebook) -> Result<String> {
    Ok(decode(bits, codebook)?.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::check_complete_prefix_code;
    use crate::rational::parse_decimal;
    use crate::source_model::{estimate_distribution, validate_and_sort};
    use crate::synth::{random_distribution, sample_indices, zipf_corpus, Rng};
    use proptest::prelude::*;

    fn dist(ps: &[&str]) -> SymbolDistribution {
        validate_and_sort(ps.iter().enumerate().map(|(i, p)| (format!("s{i}"), parse_decimal(p).unwrap())).collect())
            .unwrap()
    }

    fn codebook(symbols: &[&str], words: &[&str]) -> Codebook {
        Codebook::new(symbols.iter().map(|s| s.to_string()).collect(), words.iter().map(|w| w.parse().unwrap()).collect())
            .unwrap()
    }

    /// |q - 1/2| for every endpoint combination, recomputed from sorted class
    /// patterns without going through the solver or `apply_selection`.
    fn endpoint_minimum(d: &SymbolDistribution) -> Prob {
        let base = build_huffman(d);
        let mut lengths: Vec<usize> = base.lengths();
        lengths.dedup();
        let m = lengths.len();
        let mut best: Option<Prob> = None;
        for k in 0..1u64 << m {
            let mut ones = rational::zero();
            let mut len = rational::zero();
            for (j, &l) in lengths.iter().enumerate() {
                let members: Vec<usize> = (0..d.len()).filter(|&i| base.codewords()[i].len() == l).collect();
                let mut counts: Vec<usize> = members.iter().map(|&i| base.codewords()[i].ones()).collect();
                counts.sort_unstable();
                if (k >> j) & 1 == 0 {
                    counts.reverse();
                }
                for (&i, &c) in members.iter().zip(&counts) {
                    ones += &d.probs()[i] * Prob::from_integer(c.into());
                    len += &d.probs()[i] * Prob::from_integer(l.into());
                }
            }
            let dev = num::Signed::abs(&(ones / len - rational::from_count(1, 2)));
            if best.as_ref().is_none_or(|b| dev < *b) {
                best = Some(dev);
            }
        }
        best.unwrap()
    }

    #[test]
    fn two_symbols_are_already_fair() {
        let art = half_huffman(&dist(&["0.5", "0.5"]), SolverKind::Exhaustive).unwrap();
        assert_eq!(art.expected_q_half, rational::from_count(1, 2));
        let words: Vec<String> = art.permuted.codewords().iter().map(|c| c.to_string()).collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, ["0", "1"]);
    }

    #[test]
    fn four_symbol_endpoint_optimum() {
        let d = dist(&["0.4", "0.3", "0.2", "0.1"]);
        for solver in [SolverKind::Exhaustive, SolverKind::Bisection, SolverKind::BranchBound] {
            let art = half_huffman(&d, solver).unwrap();
            let dev = num::Signed::abs(&(&art.expected_q_half - rational::from_count(1, 2)));
            assert_eq!(dev, endpoint_minimum(&d));
        }
    }

    #[test]
    fn selection_convention_zero_is_plus() {
        let d = dist(&["0.4", "0.3", "0.2", "0.1"]);
        let art = half_huffman(&d, SolverKind::Exhaustive).unwrap();
        for x in [[0u8, 0, 0], [0, 0, 1]] {
            let cb = apply_selection(&art.base, &art.partition, &art.profile, &x).unwrap();
            // class of length 3 holds s2 (p 0.2) and s3 (p 0.1)
            let top = cb.codewords()[2].ones();
            let bottom = cb.codewords()[3].ones();
            if x[2] == 0 {
                assert!(top >= bottom);
            } else {
                assert!(top <= bottom);
            }
            assert_eq!(expected_ones_frequency(&cb, &d).unwrap(), art.profile.q_for(&x));
        }
    }

    #[test]
    fn encode_decode_basics() {
        let cb = codebook(&["a", "b"], &["0", "1"]);
        assert_eq!(encode(["a", "b"], &cb).unwrap().to_string(), "01");
        assert!(encode(Vec::<&str>::new(), &cb).unwrap().is_empty());
        assert_eq!(decode(&"01".parse().unwrap(), &cb).unwrap(), ["a", "b"]);
        let err = encode(["a", "z"], &cb).unwrap_err();
        assert!(err.to_string().contains("\"z\""));
    }

    #[test]
    fn truncated_stream() {
        let cb = codebook(&["a", "b", "c"], &["00", "01", "1"]);
        let err = decode(&"0".parse().unwrap(), &cb).unwrap_err();
        assert_eq!(err.to_string(), "truncated stream");
    }

    #[test]
    fn text_round_trip() {
        let mut rng = Rng::seed(21);
        let text = zipf_corpus(&mut rng, 20, 1.1, 10_000);
        let d = estimate_distribution(&text).unwrap();
        let art = half_huffman(&d, SolverKind::Exhaustive).unwrap();
        for choice in [CodecChoice::Hc, CodecChoice::HalfHc] {
            let bits = encode_text(&text, art.codebook(choice)).unwrap();
            assert_eq!(decode_text(&bits, art.codebook(choice)).unwrap(), text);
        }
    }

    #[test]
    fn gap_report_small_alphabet() {
        let d = dist(&["0.4", "0.3", "0.2", "0.1"]);
        let art = half_huffman(&d, SolverKind::Exhaustive).unwrap();
        let gap = permutation_gap(&art, 100_000).unwrap();
        assert!(gap.full_optimum <= gap.endpoint_optimum + 1e-15);
        let big = half_huffman(&random_distribution(&mut Rng::seed(3), 40, 1000), SolverKind::BranchBound).unwrap();
        assert!(permutation_gap(&big, 10).is_none());
    }

    #[test]
    fn artifact_json_fields() {
        let art = half_huffman(&dist(&["0.4", "0.3", "0.2", "0.1"]), SolverKind::Exhaustive).unwrap();
        let v: serde_json::Value = serde_json::from_str(&art.to_json()).unwrap();
        for key in ["base", "permuted", "selection", "expected_q_base", "expected_q_half", "solver"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["base"][2]["codeword"], "110");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn compression_and_code_validity_preserved(seed in any::<u64>(), n in 2usize..=24) {
            let mut rng = Rng::seed(seed);
            let d = random_distribution(&mut rng, n, 1000);
            let art = half_huffman(&d, SolverKind::BranchBound).unwrap();
            prop_assert_eq!(expected_length(&art.permuted, &d).unwrap(), expected_length(&art.base, &d).unwrap());
            prop_assert!(check_complete_prefix_code(art.permuted.codewords()).is_ok());
            prop_assert_eq!(art.permuted.lengths(), art.base.lengths());
            for class in &art.partition.classes {
                let mut a: Vec<&Codeword> = class.members.iter().map(|&i| &art.base.codewords()[i]).collect();
                let mut b: Vec<&Codeword> = class.members.iter().map(|&i| &art.permuted.codewords()[i]).collect();
                a.sort();
                b.sort();
                prop_assert_eq!(a, b);
            }
            let symbols: Vec<String> = sample_indices(&mut rng, &d, 300).into_iter().map(|i| d.symbols()[i].clone()).collect();
            for cb in [&art.base, &art.permuted] {
                let bits = encode(&symbols, cb).unwrap();
                prop_assert_eq!(&decode(&bits, cb).unwrap(), &symbols);
            }
        }
    }
}
