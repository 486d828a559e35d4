use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("alphabet size < 2")]
    AlphabetTooSmall,
    #[error("degenerate probability for symbol {0:?}")]
    DegenerateProbability(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("invalid weight {0:?}")]
    InvalidWeight(String),
    #[error("size mismatch: {what} ({left} vs {right})")]
    SizeMismatch { what: &'static str, left: usize, right: usize },
    #[error("non-binary character {0:?} in codeword")]
    NonBinary(char),
    #[error("empty codeword")]
    EmptyCodeword,
    #[error("empty bit stream")]
    EmptyStream,
    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidLevel(f64),
    #[error("invalid count: {ones} ones out of {bits} bits")]
    InvalidCount { ones: u64, bits: u64 },
    #[error("m = {0} exceeds the exhaustive search guard of 30; use bisection or branch-and-bound")]
    TooManyClasses(usize),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("invalid bisection bracket [{0}, {1}]")]
    InvalidBracket(f64, f64),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("truncated stream")]
    TruncatedStream,
    #[error("bit sequence at offset {0} matches no codeword")]
    InvalidCodeword(usize),
    #[error("code is not prefix-free: {0} is a prefix of {1}")]
    NotPrefixFree(String, String),
    #[error("code is not complete: Kraft sum is {0}")]
    NotComplete(String),
    #[error("stream shorter than every matcher codeword, nothing parsed")]
    EmptyParse,
    #[error("support violation at index {0}: p > 0 where q = 0")]
    SupportViolation(usize),
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("invalid channel spec: {0}")]
    InvalidChannel(String),
    #[error("dyadic search supports at most 4 symbols, got {0}")]
    DyadicTooManySymbols(usize),
    #[error("dyadic depth must lie in 1..=12, got {0}")]
    DyadicDepth(u32),
    #[error("no dyadic pmf at depth {0} satisfies the cost budget; try a larger depth")]
    DyadicInfeasible(u32),
    #[error("bad bit stream file: {0}")]
    BadBitFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
