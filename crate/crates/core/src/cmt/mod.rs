//! Coded Merkle trees: each layer above the base is the LDPC encoding of
//! the batched digests of the layer below, and the root is the list of
//! digests of the top layer.

mod hash;
pub(crate) mod io;
mod params;
mod plain;
mod tree;

pub use hash::{hash_symbol, sha256, Digest, DIGEST_BITS, DIGEST_BYTES};
pub use io::TreeFile;
pub use params::{CmtParams, CmtSpec, LayerCode, Partition};
pub use plain::{merkle_prove_plain, merkle_root_plain, merkle_verify_plain, PlainProof};
pub use tree::{
    batch_symbol, build_cmt, build_proof, cmt_root, cmt_verify, digest_slot, verify_digest, CmtProof,
    CodedMerkleTree, ProofLevel,
};

use crate::codes::CodeError;

#[derive(Debug, thiserror::Error)]
pub enum CmtError {
    #[error("invalid tree parameters: {0}")]
    Params(String),
    #[error("{what}: expected {expected}, found {found}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("position {index} of layer {layer} does not exist")]
    Index { layer: usize, index: usize },
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}
