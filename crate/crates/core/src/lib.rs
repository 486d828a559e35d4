//! Half Huffman coding.
//!
//! A Huffman code is optimal in expected length but says nothing about the
//! statistics of the bits it emits. Permuting codewords among symbols of the
//! same codeword length keeps the expected length unchanged while moving the
//! expected frequency of 1s. This crate builds the Huffman code, computes the
//! ones-maximizing and ones-minimizing arrangement of every length class,
//! selects one arrangement per class so that the frequency of 1s lands as
//! close to 0.5 as possible, and evaluates the resulting bit stream after
//! parsing it with a matcher code into channel symbols.
//!
//! Module map:
//!
//! * [`source_model`]: symbol distributions from corpora or weight tables.
//! * [`huffman`]: Huffman construction, canonical codewords, length classes.
//! * [`ones_stats`]: expected and empirical frequency of 1s, Wald intervals.
//! * [`perm_opt`]: endpoint permutations and the binary selection solvers.
//! * [`halfhc`]: the full half Huffman construction plus encode/decode.
//! * [`matcher`]: matcher codes, KL distance, dyadic search, pipeline reports.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default); every such loop also has a sequential path selectable via
//! [`Execution`], and both paths return identical results.

pub mod bits;
pub mod error;
pub mod exec;
pub mod halfhc;
pub mod huffman;
pub mod matcher;
pub mod ones_stats;
pub mod perm_opt;
pub mod rational;
pub mod source_model;
pub mod synth;

pub use bits::{BitStream, Codeword};
pub use error::{Error, Result};
pub use exec::Execution;
pub use halfhc::{decode, encode, half_huffman, CodecArtifact, CodecChoice};
pub use matcher::{
    average_cost, dyadic_search, kl_divergence, parse_stream, realize_matcher, run_pipeline, ChannelSpec,
    DyadicSolution, MatcherCode, MatcherEntry, PipelineOptions, PipelineReport,
};
pub use huffman::{build_huffman, expected_length, partition_by_length, Codebook, LengthClass, LengthClassPartition};
pub use ones_stats::{empirical_ones_frequency, expected_ones_frequency, ones_count, wald_interval, OnesReport};
pub use perm_opt::{
    endpoint_counts, extreme_permutations, feasibility_search, solve, solve_bisection, solve_branch_bound,
    solve_exhaustive, EndpointProfile, Instance, Selection, SolverKind,
};
pub use rational::Prob;
pub use source_model::{estimate_distribution, validate_and_sort, SymbolDistribution};
