use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use halfhc_core::halfhc::{encode_text, half_huffman_with};
use halfhc_core::matcher::{baseline, evaluate_bits, DyadicSolution};
use halfhc_core::perm_opt::DEFAULT_EPSILON;
use halfhc_core::source_model::read_weight_table;
use halfhc_core::synth::{fair_bits, sample_indices, Rng};
use halfhc_core::{
    dyadic_search, encode, estimate_distribution, realize_matcher, run_pipeline, solve, ChannelSpec, CodecArtifact,
    CodecChoice, Instance, MatcherCode, OnesReport, PipelineOptions, PipelineReport, SymbolDistribution,
};
use serde::Serialize;

use crate::{AnalyzeArgs, Cli, Command, DyadicArgs, PipelineArgs, SolveArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Data(e) => write!(f, "{e:#}"),
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T = ()> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli, out: &mut impl Write) -> CliResult {
    match &cli.command {
        Command::Analyze(args) => analyze(args, cli.seed, out),
        Command::Solve(args) => solve_instance(args, out),
        Command::Pipeline(args) => pipeline(args, cli.seed, out),
        Command::DyadicSearch(args) => dyadic(args, out),
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn load_channel(path: Option<&Path>) -> anyhow::Result<ChannelSpec> {
    match path {
        None => Ok(ChannelSpec::reference()),
        Some(p) => {
            let spec = ChannelSpec::from_json(&read_text(p)?).with_context(|| format!("parsing {}", p.display()))?;
            spec.validate().with_context(|| format!("channel {}", p.display()))?;
            Ok(spec)
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_x(x: &[u8]) -> String {
    let parts: Vec<String> = x.iter().map(u8::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    seed: u64,
    artifact: halfhc_core::halfhc::ArtifactExport,
    hc: &'a OnesReport,
    halfhc: &'a OnesReport,
}

fn analyze(args: &AnalyzeArgs, seed: u64, out: &mut impl Write) -> CliResult {
    let level = args.level;
    if !(level > 0.0 && level < 1.0) {
        return Err(CliError::Usage(format!("--level must lie in (0, 1), got {level}")));
    }
    // Either the corpus itself or a seeded sample from the weight table is encoded.
    let (dist, source): (SymbolDistribution, Source) = match (&args.corpus, &args.weights) {
        (Some(path), _) => {
            let text = read_text(path)?;
            let dist = estimate_distribution(&text).with_context(|| format!("corpus {}", path.display()))?;
            (dist, Source::Text(text))
        }
        (None, Some(path)) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let dist = read_weight_table(file).with_context(|| format!("weight table {}", path.display()))?;
            let idx = sample_indices(&mut Rng::seed(seed), &dist, args.samples);
            (dist, Source::Sample(idx))
        }
        (None, None) => return Err(CliError::Usage("analyze needs a corpus or --weights".into())),
    };
    let art = half_huffman_with(&dist, args.solver.solver, args.solver.epsilon)?;
    let report_for = |choice: CodecChoice| -> CliResult<OnesReport> {
        let cb = art.codebook(choice);
        let bits = match &source {
            Source::Text(text) => encode_text(text, cb)?,
            Source::Sample(idx) => encode(idx.iter().map(|&i| &dist.symbols()[i]), cb)?,
        };
        Ok(OnesReport::new(art.expected_q(choice), &bits, level)?)
    };
    let hc = report_for(CodecChoice::Hc)?;
    let half = report_for(CodecChoice::HalfHc)?;

    print_artifact(&art, out)?;
    writeln!(out)?;
    writeln!(out, "{:<8} {:>11} {:>11} {:>11} {:>11} {:>11}  verdict", "codec", "expected_q", "empirical_q", "ci_low", "ci_high", "bits")?;
    for (name, r) in [("hc", &hc), ("halfhc", &half)] {
        writeln!(
            out,
            "{name:<8} {:>11.7} {:>11.7} {:>11.7} {:>11.7} {:>11}  {}",
            r.expected_q,
            r.empirical_q,
            r.ci_low,
            r.ci_high,
            r.bit_count,
            r.verdict()
        )?;
    }

    if let Some(path) = &args.out {
        write_json(path, &AnalyzeReport { seed, artifact: art.export(), hc: &hc, halfhc: &half })?;
    }
    if let Some(path) = &args.csv {
        let mut w = create(path)?;
        art.codebook(args.codec).write_csv(&dist, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

enum Source {
    Text(String),
    Sample(Vec<usize>),
}

fn print_artifact(art: &CodecArtifact, out: &mut impl Write) -> CliResult {
    let export = art.export();
    writeln!(out, "symbols: {}", art.distribution.len())?;
    writeln!(out, "length classes: {} (lengths {:?}, sizes {:?})", export.class_lengths.len(), export.class_lengths, export.class_sizes)?;
    writeln!(out, "expected length: {:.7}", export.expected_length)?;
    writeln!(out, "solver: {}, x = {}, |q - 0.5| = {:.3e}", art.solver, fmt_x(&export.selection), export.objective)?;
    for (title, rows) in [("hc", &export.base), ("halfhc", &export.permuted)] {
        writeln!(out)?;
        writeln!(out, "{title} code")?;
        writeln!(out, "{:<8} {:>12} {:>6}  codeword", "symbol", "probability", "length")?;
        for row in rows {
            writeln!(out, "{:<8} {:>12.7} {:>6}  {}", format!("{:?}", row.symbol), row.probability, row.length, row.codeword)?;
        }
    }
    Ok(())
}

fn solve_instance(args: &SolveArgs, out: &mut impl Write) -> CliResult {
    let text = read_text(&args.instance)?;
    let inst = Instance::from_json(&text).with_context(|| format!("parsing {}", args.instance.display()))?;
    let epsilon = args.epsilon.or(inst.epsilon).unwrap_or(DEFAULT_EPSILON);
    let sel = solve(args.solver, &inst.a, inst.b, epsilon)?;
    writeln!(out, "solver: {}", args.solver)?;
    writeln!(out, "m: {}", inst.a.len())?;
    writeln!(out, "x: {}", fmt_x(&sel.x))?;
    writeln!(out, "objective: {:.15e}", sel.objective)?;
    writeln!(out, "evaluations: {}", sel.stats.evaluations)?;
    writeln!(out, "iterations: {}", sel.stats.iterations)?;
    writeln!(out, "nodes: {}", sel.stats.nodes)?;
    if let Some(path) = &args.out {
        write_json(path, &sel)?;
    }
    Ok(())
}

fn matcher_from_search(spec: &ChannelSpec, depth: u32) -> anyhow::Result<(DyadicSolution, MatcherCode)> {
    let sol = dyadic_search(spec, depth)?;
    let matcher = realize_matcher(&sol.numerators, depth, &spec.symbols)?;
    Ok((sol, matcher))
}

fn pipeline(args: &PipelineArgs, seed: u64, out: &mut impl Write) -> CliResult {
    let spec = load_channel(args.channel.as_deref())?;
    let matcher = match (&args.matcher, args.depth) {
        (Some(path), _) => {
            MatcherCode::from_json(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(depth)) => matcher_from_search(&spec, depth)?.1,
        (None, None) => return Err(CliError::Usage("pipeline needs --matcher <path> or --depth <D>".into())),
    };
    let codecs = match args.codec {
        Some(c) => vec![c],
        None => vec![CodecChoice::Hc, CodecChoice::HalfHc],
    };
    let options = PipelineOptions { solver: args.solver.solver, epsilon: args.solver.epsilon, level: args.level };
    let mut report = match &args.corpus {
        Some(path) => {
            let text = read_text(path)?;
            run_pipeline(&text, &codecs, &matcher, &spec, &options).with_context(|| format!("corpus {}", path.display()))?
        }
        None => {
            spec.validate()?;
            PipelineReport {
                channel: spec.clone(),
                solver: options.solver,
                selection: None,
                baseline: baseline(&matcher, &spec)?,
                variants: Vec::new(),
            }
        }
    };
    if let Some(n) = args.fair_bits {
        let bits = fair_bits(&mut Rng::seed(seed), n);
        report.variants.push(evaluate_bits("fair", &bits, 0.5, &matcher, &spec, options.level)?);
    }

    writeln!(out, "channel symbols: {:?}", spec.symbols)?;
    writeln!(out, "p*: {}", fmt_vec(&spec.p_star))?;
    match spec.budget {
        Some(s) => writeln!(out, "budget S: {s}")?,
        None => writeln!(out, "budget S: none")?,
    }
    writeln!(out, "matcher:")?;
    for e in matcher.entries() {
        writeln!(out, "  {} -> {}", e.codeword, e.symbol)?;
    }
    if let Some(x) = &report.selection {
        writeln!(out, "selection x = {} ({})", fmt_x(x), report.solver)?;
    }
    writeln!(out)?;
    writeln!(out, "{:<8} {:>10} {:>12} {:>10} {:>11}  {:<18} d_eff", "variant", "cost", "kl", "emitted", "empirical_q", "verdict")?;
    let b = &report.baseline;
    writeln!(out, "{:<8} {:>10.6} {:>12.6e} {:>10} {:>11}  {:<18} {}", "dyadic", b.cost, b.kl, "-", "-", "-", fmt_vec(&b.d))?;
    for v in &report.variants {
        writeln!(
            out,
            "{:<8} {:>10.6} {:>12.6e} {:>10} {:>11.7}  {:<18} {}",
            v.variant,
            v.cost,
            v.kl,
            v.emitted,
            v.ones.empirical_q,
            v.ones.verdict(),
            fmt_vec(&v.d_eff)
        )?;
    }

    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    if let Some(path) = &args.csv {
        let mut w = create(path)?;
        report.write_csv(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn dyadic(args: &DyadicArgs, out: &mut impl Write) -> CliResult {
    let spec = load_channel(args.channel.as_deref())?;
    let (sol, matcher) = matcher_from_search(&spec, args.depth)?;
    writeln!(out, "depth: {}", sol.depth)?;
    writeln!(out, "numerators: {:?} / {}", sol.numerators, 1u64 << sol.depth)?;
    writeln!(out, "d: {}", fmt_vec(&sol.d))?;
    writeln!(out, "kl: {:.7e}", sol.kl)?;
    writeln!(out, "cost: {:.7}", sol.cost)?;
    writeln!(out, "matcher:")?;
    for e in matcher.entries() {
        writeln!(out, "  {} -> {}", e.codeword, e.symbol)?;
    }
    if let Some(path) = &args.out {
        let mut w = create(path)?;
        writeln!(w, "{}", matcher.to_json())?;
        w.flush()?;
    }
    Ok(())
}
