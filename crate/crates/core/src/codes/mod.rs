//! LDPC codes over byte-string symbols: ensembles, systematic encoding,
//! peeling decoding, stopping sets and error-plus-erasure attacks.

mod attack;
mod encode;
mod ensemble;
pub mod gf2;
mod matrix;
mod peel;
mod stopping;
mod symbol;

pub use attack::{consistency_check, mask_single_error, ConsistencyReport, ErrorPattern};
pub use encode::{
    check_syndrome, generate_encodable_code, row_sum, systematic_encode, EncodableCode, SyndromeReport,
    SystematicEncoder,
};
pub use ensemble::{generate_ensemble_code, EnsembleParams, Rate};
pub use matrix::SparseParityMatrix;
pub use peel::{is_stopping_set, peel_decode, peel_residual, peel_schedule, PeelOutcome, StoppingSetReport};
pub use stopping::{
    estimate_erasure_threshold, exhaustive_min_stopping_set, failure_crossing, find_small_stopping_set,
    ThresholdPoint, EXHAUSTIVE_MAX_N,
};
pub use symbol::{LayerWord, Symbol};

#[derive(Debug, thiserror::Error)]
pub enum CodeError {
    #[error("invalid matrix shape: {0}")]
    Shape(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("alist parse error: {0}")]
    Alist(String),
    #[error("expected length {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("symbol at position {position} has length {found}, expected {expected}")]
    SymbolLength {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("parity part of H is singular (rank {rank} < {r})")]
    SingularParityPart { rank: usize, r: usize },
    #[error("position {0} is erased")]
    ErasurePresent(usize),
    #[error("position set is empty")]
    EmptySet,
    #[error("index {0} out of range")]
    Index(usize),
    #[error("row {row} has a single member, so an error there cannot be masked")]
    Unmaskable { row: usize },
}
