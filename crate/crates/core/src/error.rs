use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol {symbol:?} at position {position}; expected one of A, C, G, T")]
    InvalidSymbol { symbol: char, position: usize },
    #[error("sequence must not be empty")]
    EmptySequence,
    #[error("haplotype lengths differ: {h0} vs {h1}")]
    LengthMismatch { h0: usize, h1: usize },
    #[error("operation requires at least one heterozygous locus")]
    EmptyLocusSet,
    #[error("read length {read_length} exceeds genome length {genome_length}")]
    ReadTooLong {
        read_length: usize,
        genome_length: usize,
    },
    #[error("read {index} has length {found}, expected {expected}")]
    InconsistentReadLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("greedy merging ended with {strings} strings")]
    Fragmented { strings: usize },
    #[error("spelled string has odd length {length}")]
    OddLength { length: usize },
    #[error("locus {locus} is not covered by any read on haplotype {haplotype}")]
    UncoveredLocus { locus: usize, haplotype: u8 },
    #[error("k = {k} must satisfy 1 < k < {read_length}")]
    InvalidK { k: usize, read_length: usize },
    #[error("graph is not Eulerian; imbalanced vertices {imbalanced:?}")]
    NotEulerian { imbalanced: Vec<usize> },
    #[error("graph has {components} connected components")]
    Disconnected { components: usize },
    #[error("overlap graph is not strongly connected")]
    NotStronglyConnected,
    #[error("{what} exceeds the search budget of {limit}")]
    BudgetExceeded { what: String, limit: usize },
    #[error("empty read set")]
    EmptyReadSet,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
