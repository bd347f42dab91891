//! Hash-aware decoding of coded Merkle trees and incorrect-coding proofs.

mod decode;
mod proof;

pub use decode::{hash_aware_decode, DecodeOutcome, LayerStoppingSet};
pub use proof::{make_parity_fraud_proof, verify_fraud_proof, FraudKind, FraudMember, FraudProof};

use crate::cmt::CmtError;

#[derive(Debug, thiserror::Error)]
pub enum FraudError {
    #[error("row {row} of layer {layer} is satisfied; there is nothing to prove")]
    RowSatisfied { layer: usize, row: usize },
    #[error("row {row} of layer {layer} does not exist")]
    Index { layer: usize, row: usize },
    #[error("input shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Cmt(#[from] CmtError),
}
