//! End-to-end evaluation: source code -> bit stream -> matcher -> channel symbols.
//!
//! A matcher code is a complete prefix-free code mapping binary codewords to
//! channel symbols. Parsing fair bits with it produces symbol `i` with the
//! dyadic probability `d_i = sum 2^-len` over the codewords of `i`. Feeding it
//! the output of a source encoder instead shows how far that output is from
//! fair, measured as KL distance to the target pmf and average cost.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bits::{canonical_codewords, check_complete_prefix_code, BitStream, Codeword, PrefixDecoder, Step};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::halfhc::{encode_text, half_huffman_with, CodecChoice};
use crate::ones_stats::OnesReport;
use crate::perm_opt::{SolverKind, DEFAULT_EPSILON};
use crate::rational::{self, Prob};
use crate::source_model::estimate_distribution;

/// Tolerance on the target pmf's sum; printed targets are often rounded.
pub const PMF_SUM_TOLERANCE: f64 = 1e-3;

/// Costed target channel: symbols, per-symbol cost `w`, budget `S`, target `p*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub symbols: Vec<String>,
    pub w: Vec<f64>,
    /// Average-cost budget; absent or null means unconstrained.
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    pub p_star: Vec<f64>,
}

impl ChannelSpec {
    pub fn new(symbols: Vec<String>, w: Vec<f64>, budget: Option<f64>, p_star: Vec<f64>) -> Result<Self> {
        let spec = ChannelSpec { symbols, w, budget, p_star };
        spec.validate()?;
        Ok(spec)
    }

    /// Three symbols `r, l, m` with costs (0.18, 0.18, 0.31), budget 0.2063
    /// and target (0.3988, 0.3988, 0.2023).
    pub fn reference() -> Self {
        ChannelSpec {
            symbols: vec!["r".into(), "l".into(), "m".into()],
            w: vec![0.18, 0.18, 0.31],
            budget: Some(0.2063),
            p_star: vec![0.3988, 0.3988, 0.2023],
        }
    }

    pub fn budget(&self) -> f64 {
        self.budget.unwrap_or(f64::INFINITY)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.symbols.len();
        if n < 2 {
            return Err(Error::InvalidChannel("need at least two channel symbols".into()));
        }
        if self.w.len() != n || self.p_star.len() != n {
            return Err(Error::InvalidChannel(format!(
                "{} symbols, {} costs, {} target probabilities",
                n,
                self.w.len(),
                self.p_star.len()
            )));
        }
        if self.p_star.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidChannel("target probabilities must lie in (0, 1]".into()));
        }
        let sum: f64 = self.p_star.iter().sum();
        if (sum - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(Error::InvalidChannel(format!("target probabilities sum to {sum}")));
        }
        if self.w.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidChannel("costs must be finite".into()));
        }
        let min_w = self.w.iter().copied().fold(f64::INFINITY, f64::min);
        if let Some(s) = self.budget {
            if s.is_nan() || s <= min_w {
                return Err(Error::InvalidChannel(format!("budget {s} does not exceed the cheapest symbol cost {min_w}")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatcherEntry {
    pub codeword: Codeword,
    pub symbol: String,
}

/// Complete prefix-free binary-to-symbol code. Serializes as a JSON list of
/// `{codeword, symbol}` objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MatcherCode {
    entries: Vec<MatcherEntry>,
}

impl MatcherCode {
    pub fn new(entries: Vec<MatcherEntry>) -> Result<Self> {
        let words: Vec<Codeword> = entries.iter().map(|e| e.codeword.clone()).collect();
        check_complete_prefix_code(&words)?;
        Ok(MatcherCode { entries })
    }

    pub fn entries(&self) -> &[MatcherEntry] {
        &self.entries
    }

    pub fn max_len(&self) -> usize {
        self.entries.iter().map(|e| e.codeword.len()).max().unwrap_or(0)
    }

    /// Pmf produced by parsing fair bits, over `symbols`.
    pub fn induced_pmf(&self, symbols: &[String]) -> Result<Vec<Prob>> {
        let mut d = vec![rational::zero(); symbols.len()];
        for e in &self.entries {
            let i = symbols
                .iter()
                .position(|s| *s == e.symbol)
                .ok_or_else(|| Error::UnknownSymbol(e.symbol.clone()))?;
            d[i] += rational::dyadic(e.codeword.len());
        }
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<MatcherEntry> = serde_json::from_str(text)?;
        MatcherCode::new(entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matcher serializes")
    }
}

/// Symbols emitted while parsing a stream, and their frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    /// Indices into the channel symbol list, in emission order.
    pub emitted: Vec<usize>,
    pub counts: Vec<u64>,
    pub d_eff: Vec<f64>,
    /// Bits after the last complete codeword.
    pub discarded_bits: usize,
}

/// Greedy prefix parse of `bits` with `matcher`; tail bits that do not
/// complete a codeword are dropped and counted.
pub fn parse_stream(bits: &BitStream, matcher: &MatcherCode, symbols: &[String]) -> Result<ParseOutcome> {
    let index: Vec<usize> = matcher
        .entries
        .iter()
        .map(|e| symbols.iter().position(|s| *s == e.symbol).ok_or_else(|| Error::UnknownSymbol(e.symbol.clone())))
        .collect::<Result<_>>()?;
    let dec = PrefixDecoder::new(matcher.entries.iter().map(|e| &e.codeword));
    let mut counts = vec![0u64; symbols.len()];
    let mut emitted = Vec::new();
    let mut node = dec.root();
    let mut pending = 0usize;
    for bit in bits.iter() {
        match dec.step(&mut node, bit) {
            Step::Pending => pending += 1,
            Step::Emit(e) => {
                emitted.push(index[e]);
                counts[index[e]] += 1;
                pending = 0;
            }
            Step::Dead => unreachable!("complete prefix codes have no dead branches"),
        }
    }
    if emitted.is_empty() {
        return Err(Error::EmptyParse);
    }
    let total = emitted.len() as f64;
    let d_eff = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(ParseOutcome { emitted, counts, d_eff, discarded_bits: pending })
}

/// `sum_i p_i ln(p_i / q_i)` in nats, with `0 ln 0 = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch { what: "pmf lengths", left: p.len(), right: q.len() });
    }
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi < 0.0 || qi < 0.0 {
            return Err(Error::InvalidPmf(format!("negative entry at index {i}")));
        }
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::SupportViolation(i));
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total)
}

/// `w . d`.
pub fn average_cost(w: &[f64], d: &[f64]) -> Result<f64> {
    if w.len() != d.len() {
        return Err(Error::SizeMismatch { what: "costs vs pmf", left: w.len(), right: d.len() });
    }
    Ok(w.iter().zip(d).map(|(a, b)| a * b).sum())
}

pub const DYADIC_MAX_SYMBOLS: usize = 4;
pub const DYADIC_MAX_DEPTH: u32 = 12;
pub const DEFAULT_DEPTH: u32 = 8;

/// Best dyadic pmf `k / 2^depth` found by [`dyadic_search`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyadicSolution {
    pub depth: u32,
    pub numerators: Vec<u64>,
    pub d: Vec<f64>,
    pub kl: f64,
    pub cost: f64,
}

/// Minimize `KL(d || p*)` over `d = k / 2^depth` with every `k_i >= 1` and
/// `w . d <= S`. Ties go to lower cost, then lexicographically smaller `k`.
pub fn dyadic_search(spec: &ChannelSpec, depth: u32) -> Result<DyadicSolution> {
    dyadic_search_with(spec, depth, Execution::default())
}

type Candidate = (f64, f64, Vec<u64>);

fn better(p: Candidate, q: Candidate) -> Candidate {
    let ord = p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)).then_with(|| p.2.cmp(&q.2));
    if ord.is_le() {
        p
    } else {
        q
    }
}

fn better_opt(p: Option<Candidate>, q: Option<Candidate>) -> Option<Candidate> {
    match (p, q) {
        (Some(p), Some(q)) => Some(better(p, q)),
        (p, None) => p,
        (None, q) => q,
    }
}

/// Dyadic search with an explicit execution mode. The parallel path splits
/// on the first numerator and reduces with the same total order.
pub fn dyadic_search_with(spec: &ChannelSpec, depth: u32, exec: Execution) -> Result<DyadicSolution> {
    spec.validate()?;
    let n = spec.len();
    if n > DYADIC_MAX_SYMBOLS {
        return Err(Error::DyadicTooManySymbols(n));
    }
    if !(1..=DYADIC_MAX_DEPTH).contains(&depth) {
        return Err(Error::DyadicDepth(depth));
    }
    let total = 1u64 << depth;
    if (n as u64) > total {
        return Err(Error::DyadicInfeasible(depth));
    }
    let scale = total as f64;
    let budget = spec.budget();

    // Best completion for a fixed first numerator.
    let search_from = |k1: u64| -> Option<Candidate> {
        let mut best: Option<Candidate> = None;
        let mut k = vec![0u64; n];
        k[0] = k1;
        fill(&mut k, 1, total - k1, &mut |k: &[u64]| {
            let d: Vec<f64> = k.iter().map(|&ki| ki as f64 / scale).collect();
            let cost: f64 = spec.w.iter().zip(&d).map(|(w, di)| w * di).sum();
            if cost > budget {
                return;
            }
            let kl: f64 = d.iter().zip(&spec.p_star).map(|(di, pi)| di * (di / pi).ln()).sum();
            best = better_opt(best.take(), Some((kl, cost, k.to_vec())));
        });
        best
    };

    let first = 1..=(total - (n as u64 - 1));
    let best = {
        #[cfg(feature = "parallel")]
        {
            if exec.is_parallel() {
                use rayon::prelude::*;
                first.into_par_iter().map(search_from).reduce(|| None, better_opt)
            } else {
                first.map(search_from).fold(None, better_opt)
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = exec;
            first.map(search_from).fold(None, better_opt)
        }
    };
    let (kl, cost, numerators) = best.ok_or(Error::DyadicInfeasible(depth))?;
    let d = numerators.iter().map(|&k| k as f64 / scale).collect();
    Ok(DyadicSolution { depth, numerators, d, kl, cost })
}

/// Visit every `k[pos..]` with entries >= 1 summing to `remaining`.
fn fill(k: &mut [u64], pos: usize, remaining: u64, visit: &mut dyn FnMut(&[u64])) {
    let left = (k.len() - pos) as u64;
    if left == 1 {
        k[pos] = remaining;
        visit(k);
        return;
    }
    for v in 1..=remaining - (left - 1) {
        k[pos] = v;
        fill(k, pos + 1, remaining - v, visit);
    }
}

/// Matcher whose fair-bit pmf is exactly `numerators / 2^depth`.
///
/// Each set bit of `k_i` at weight `2^(depth - l)` becomes one codeword of
/// length `l` for symbol `i`; the lengths satisfy Kraft with equality, so
/// canonical assignment yields a complete prefix code.
pub fn realize_matcher(numerators: &[u64], depth: u32, symbols: &[String]) -> Result<MatcherCode> {
    if numerators.len() != symbols.len() {
        return Err(Error::SizeMismatch { what: "numerators vs symbols", left: numerators.len(), right: symbols.len() });
    }
    if numerators.iter().sum::<u64>() != 1u64 << depth {
        return Err(Error::InvalidPmf(format!("numerators do not sum to 2^{depth}")));
    }
    let mut leaves: Vec<(usize, usize)> = Vec::new();
    for (i, &k) in numerators.iter().enumerate() {
        for len in 1..=depth as usize {
            if (k >> (depth as usize - len)) & 1 == 1 {
                leaves.push((len, i));
            }
        }
    }
    leaves.sort();
    let lengths: Vec<usize> = leaves.iter().map(|&(l, _)| l).collect();
    let entries = canonical_codewords(&lengths)
        .into_iter()
        .zip(&leaves)
        .map(|(codeword, &(_, i))| MatcherEntry { codeword, symbol: symbols[i].clone() })
        .collect();
    MatcherCode::new(entries)
}

/// One evaluated stream: frequency of 1s, the matcher output and its scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantReport {
    pub variant: String,
    pub ones: OnesReport,
    pub emitted: u64,
    pub discarded_bits: u64,
    pub d_eff: Vec<f64>,
    pub kl: f64,
    pub cost: f64,
    /// Percentage by which `cost` exceeds the budget (negative when under it).
    pub cost_excess_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineReport {
    pub d: Vec<f64>,
    pub kl: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub channel: ChannelSpec,
    pub solver: SolverKind,
    pub selection: Option<Vec<u8>>,
    pub baseline: BaselineReport,
    pub variants: Vec<VariantReport>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `variant,cost,kl` rows: the fair-bit baseline, every variant, and a
    /// `budget` row carrying `S` with an empty KL field.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["variant", "cost", "kl"])?;
        wtr.write_record(["dyadic", &self.baseline.cost.to_string(), &self.baseline.kl.to_string()])?;
        for v in &self.variants {
            wtr.write_record([v.variant.as_str(), &v.cost.to_string(), &v.kl.to_string()])?;
        }
        if let Some(s) = self.channel.budget {
            wtr.write_record(["budget", &s.to_string(), ""])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn variant(&self, name: &str) -> Option<&VariantReport> {
        self.variants.iter().find(|v| v.variant == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub solver: SolverKind,
    pub epsilon: f64,
    pub level: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { solver: SolverKind::Exhaustive, epsilon: DEFAULT_EPSILON, level: 0.95 }
    }
}

/// Parse `bits` with the matcher and score the result against the channel.
pub fn evaluate_bits(
    variant: &str,
    bits: &BitStream,
    expected_q: f64,
    matcher: &MatcherCode,
    spec: &ChannelSpec,
    level: f64,
) -> Result<VariantReport> {
    let ones = OnesReport::new(expected_q, bits, level)?;
    let parsed = parse_stream(bits, matcher, &spec.symbols)?;
    let kl = kl_divergence(&parsed.d_eff, &spec.p_star)?;
    let cost = average_cost(&spec.w, &parsed.d_eff)?;
    Ok(VariantReport {
        variant: variant.to_string(),
        ones,
        emitted: parsed.emitted.len() as u64,
        discarded_bits: parsed.discarded_bits as u64,
        d_eff: parsed.d_eff,
        kl,
        cost,
        cost_excess_percent: 100.0 * (cost - spec.budget()) / spec.budget(),
    })
}

/// KL and cost of the matcher's own dyadic pmf.
pub fn baseline(matcher: &MatcherCode, spec: &ChannelSpec) -> Result<BaselineReport> {
    let d: Vec<f64> = matcher.induced_pmf(&spec.symbols)?.iter().map(rational::to_f64).collect();
    Ok(BaselineReport { kl: kl_divergence(&d, &spec.p_star)?, cost: average_cost(&spec.w, &d)?, d })
}

/// Compress `corpus` with each codec in `codecs`, parse the bits with
/// `matcher`, and report against `spec`.
pub fn run_pipeline(
    corpus: &str,
    codecs: &[CodecChoice],
    matcher: &MatcherCode,
    spec: &ChannelSpec,
    options: &PipelineOptions,
) -> Result<PipelineReport> {
    spec.validate()?;
    let dist = estimate_distribution(corpus)?;
    let artifact = half_huffman_with(&dist, options.solver, options.epsilon)?;
    let variants = codecs
        .iter()
        .map(|&choice| {
            let bits = encode_text(corpus, artifact.codebook(choice))?;
            evaluate_bits(&choice.to_string(), &bits, artifact.expected_q(choice), matcher, spec, options.level)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PipelineReport {
        channel: spec.clone(),
        solver: options.solver,
        selection: Some(artifact.selection.x.clone()),
        baseline: baseline(matcher, spec)?,
        variants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{fair_bits, Rng};
    use proptest::prelude::*;

    fn symbols(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn matcher(pairs: &[(&str, &str)]) -> MatcherCode {
        MatcherCode::new(
            pairs.iter().map(|(c, s)| MatcherEntry { codeword: c.parse().unwrap(), symbol: s.to_string() }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn parse_two_symbols() {
        let m = matcher(&[("0", "A"), ("1", "B")]);
        let out = parse_stream(&"0110".parse().unwrap(), &m, &symbols(&["A", "B"])).unwrap();
        assert_eq!(out.emitted, [0, 1, 1, 0]);
        assert_eq!(out.d_eff, [0.5, 0.5]);
        assert_eq!(out.discarded_bits, 0);
    }

    #[test]
    fn parse_three_symbols_and_tail() {
        let m = matcher(&[("0", "A"), ("10", "B"), ("11", "C")]);
        let syms = symbols(&["A", "B", "C"]);
        let out = parse_stream(&"01011".parse().unwrap(), &m, &syms).unwrap();
        assert_eq!(out.emitted, [0, 1, 2]);
        assert_eq!(out.d_eff, [1.0 / 3.0; 3]);
        let out = parse_stream(&"010111".parse().unwrap(), &m, &syms).unwrap();
        assert_eq!(out.discarded_bits, 1);
        assert!(matches!(parse_stream(&"1".parse().unwrap(), &m, &syms), Err(Error::EmptyParse)));
    }

    #[test]
    fn matcher_validation() {
        let bad = vec![
            MatcherEntry { codeword: "0".parse().unwrap(), symbol: "A".into() },
            MatcherEntry { codeword: "10".parse().unwrap(), symbol: "B".into() },
        ];
        assert!(matches!(MatcherCode::new(bad), Err(Error::NotComplete(_))));
        let m = MatcherCode::from_json(r#"[{"codeword": "0", "symbol": "A"}, {"codeword": "1", "symbol": "B"}]"#).unwrap();
        assert_eq!(MatcherCode::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn kl_examples() {
        let p = [0.2, 0.3, 0.5];
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let v = kl_divergence(&[0.5, 0.5], &[0.25, 0.75]).unwrap();
        assert!((v - 0.143_841_036_225_890_4).abs() < 1e-12);
        assert!(matches!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]), Err(Error::SupportViolation(1))));
        assert_eq!(kl_divergence(&[0.0, 1.0], &[0.5, 0.5]).unwrap(), std::f64::consts::LN_2);
        assert!(kl_divergence(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn reported_vectors() {
        let spec = ChannelSpec::reference();
        let d_hc = [0.40663, 0.35761, 0.23576];
        assert!((kl_divergence(&d_hc, &spec.p_star).unwrap() - 0.0050066).abs() <= 1e-6);
        assert!((average_cost(&spec.w, &d_hc).unwrap() - 0.21065).abs() <= 1e-5);
        assert!((average_cost(&spec.w, &spec.p_star).unwrap() - 0.2063).abs() <= 1e-4);
        assert_eq!(average_cost(&[0.7; 3], &[0.2, 0.3, 0.5]).unwrap(), 0.7);
    }

    #[test]
    fn channel_validation() {
        assert!(ChannelSpec::reference().validate().is_ok());
        let mut low = ChannelSpec::reference();
        low.budget = Some(0.1);
        assert!(low.validate().is_err());
        let mut short = ChannelSpec::reference();
        short.w.pop();
        assert!(short.validate().is_err());
        let json = r#"{"symbols": ["r", "l", "m"], "w": [0.18, 0.18, 0.31], "S": 0.2063, "p_star": [0.3988, 0.3988, 0.2023]}"#;
        assert_eq!(ChannelSpec::from_json(json).unwrap(), ChannelSpec::reference());
        let unbounded = r#"{"symbols": ["a", "b"], "w": [1, 1], "p_star": [0.5, 0.5]}"#;
        assert_eq!(ChannelSpec::from_json(unbounded).unwrap().budget(), f64::INFINITY);
    }

    #[test]
    fn dyadic_trivial_target() {
        let spec = ChannelSpec::new(symbols(&["a", "b"]), vec![1.0, 1.0], Some(1.0 + 1e-12), vec![0.5, 0.5]).unwrap();
        let sol = dyadic_search(&spec, 1).unwrap();
        assert_eq!(sol.d, [0.5, 0.5]);
        assert_eq!(sol.kl, 0.0);
    }

    #[test]
    fn dyadic_depth_two_unconstrained() {
        let mut spec = ChannelSpec::reference();
        spec.budget = None;
        let sol = dyadic_search(&spec, 2).unwrap();
        assert!(sol.numerators == [2, 1, 1] || sol.numerators == [1, 2, 1], "{:?}", sol.numerators);
    }

    #[test]
    fn dyadic_guards() {
        let spec = ChannelSpec::reference();
        assert!(matches!(dyadic_search(&spec, 0), Err(Error::DyadicDepth(0))));
        assert!(matches!(dyadic_search(&spec, 13), Err(Error::DyadicDepth(13))));
        let five = ChannelSpec::new(symbols(&["a", "b", "c", "d", "e"]), vec![1.0; 5], None, vec![0.2; 5]).unwrap();
        assert!(matches!(dyadic_search(&five, 4), Err(Error::DyadicTooManySymbols(5))));
        // budget only reachable with fine resolution
        let tight = ChannelSpec::new(symbols(&["a", "b"]), vec![0.0, 1.0], Some(0.01), vec![0.5, 0.5]).unwrap();
        assert!(matches!(dyadic_search(&tight, 3), Err(Error::DyadicInfeasible(3))));
        assert!(dyadic_search(&tight, 7).is_ok());
    }

    #[test]
    fn dyadic_parallel_matches_sequential() {
        let spec = ChannelSpec::reference();
        let s = dyadic_search_with(&spec, 8, Execution::Sequential).unwrap();
        let p = dyadic_search_with(&spec, 8, Execution::Parallel).unwrap();
        assert_eq!(s, p);
        assert!(s.kl <= 0.005 && s.cost <= 0.2063);
    }

    #[test]
    fn realize_small_matchers() {
        let m = realize_matcher(&[1, 1], 1, &symbols(&["s1", "s2"])).unwrap();
        let words: Vec<(String, String)> = m.entries().iter().map(|e| (e.codeword.to_string(), e.symbol.clone())).collect();
        assert_eq!(words, [("0".into(), "s1".into()), ("1".into(), "s2".into())]);
        let syms = symbols(&["s1", "s2", "s3"]);
        let m = realize_matcher(&[2, 1, 1], 2, &syms).unwrap();
        assert_eq!(m.induced_pmf(&syms).unwrap(), [rational::from_count(1, 2), rational::from_count(1, 4), rational::from_count(1, 4)]);
        assert_eq!(m.entries().len(), 3);
        assert!(realize_matcher(&[2, 1], 2, &symbols(&["a", "b"])).is_err());
    }

    #[test]
    fn fair_bits_through_matcher() {
        let spec = ChannelSpec::reference();
        let sol = dyadic_search(&spec, 8).unwrap();
        let m = realize_matcher(&sol.numerators, 8, &spec.symbols).unwrap();
        let bits = fair_bits(&mut Rng::seed(31), 1_000_000);
        let out = parse_stream(&bits, &m, &spec.symbols).unwrap();
        let n = out.emitted.len() as f64;
        for (got, want) in out.d_eff.iter().zip(&sol.d) {
            assert!((got - want).abs() <= 3.0 * (want * (1.0 - want) / n).sqrt());
        }
        assert!(out.discarded_bits < m.max_len());
        assert_eq!(out.counts.iter().sum::<u64>(), out.emitted.len() as u64);
    }

    #[test]
    fn alternating_corpus_pipeline() {
        let spec = ChannelSpec::new(symbols(&["A", "B"]), vec![1.0, 2.0], None, vec![0.5, 0.5]).unwrap();
        let m = matcher(&[("0", "A"), ("1", "B")]);
        let corpus = "ab".repeat(500);
        let report = run_pipeline(&corpus, &[CodecChoice::Hc, CodecChoice::HalfHc], &m, &spec, &PipelineOptions::default()).unwrap();
        for v in &report.variants {
            assert_eq!(v.d_eff, [0.5, 0.5]);
            assert_eq!(v.ones.empirical_q, 0.5);
            assert_eq!(v.kl, 0.0);
        }
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("variant,cost,kl\ndyadic,"));
        assert_eq!(text.lines().count(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kl_nonnegative(raw_p in proptest::collection::vec(0.0f64..1.0, 2..8), raw_q in proptest::collection::vec(0.01f64..1.0, 8)) {
            let n = raw_p.len();
            let sp: f64 = raw_p.iter().sum::<f64>() + 1e-9;
            let sq: f64 = raw_q[..n].iter().sum();
            let p: Vec<f64> = raw_p.iter().map(|v| (v + 1e-9 / n as f64) / sp).collect();
            let q: Vec<f64> = raw_q[..n].iter().map(|v| v / sq).collect();
            prop_assert!(kl_divergence(&p, &q).unwrap() >= -1e-15);
            prop_assert!(kl_divergence(&p, &p).unwrap().abs() < 1e-15);
        }

        #[test]
        fn realized_matcher_is_exact(depth in 2u32..=10, cuts in proptest::collection::vec(any::<u64>(), 2)) {
            let total = 1u64 << depth;
            let mut c: Vec<u64> = cuts.iter().map(|v| 1 + v % (total - 3)).collect();
            c.sort_unstable();
            c.dedup();
            prop_assume!(c.len() == 2);
            let k = vec![c[0], c[1] - c[0], total - c[1]];
            let syms = symbols(&["a", "b", "c"]);
            let m = realize_matcher(&k, depth, &syms).unwrap();
            let want: Vec<Prob> = k.iter().map(|&ki| rational::from_count(ki, total)).collect();
            prop_assert_eq!(m.induced_pmf(&syms).unwrap(), want);
            prop_assert_eq!(m.entries().len() as u32, k.iter().map(|v| v.count_ones()).sum::<u32>());
        }
    }
}
