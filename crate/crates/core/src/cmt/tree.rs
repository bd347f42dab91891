use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hash::{hash_symbol, Digest, DIGEST_BYTES};
use super::{CmtError, CmtParams};
use crate::codes::{LayerWord, Symbol};

/// A coded Merkle tree: every layer as a full codeword (base first), the
/// digest of every symbol, and the root digests of the top layer.
#[derive(Clone, Debug)]
pub struct CodedMerkleTree {
    params: Arc<CmtParams>,
    layers: Vec<Vec<Symbol>>,
    digests: Vec<Vec<Digest>>,
    root: Vec<Digest>,
}

/// Concatenated digests of batch `c` of `layer`, which forms the systematic
/// symbol `c` of the layer above.
pub fn batch_symbol(params: &CmtParams, layer: usize, c: usize, digests: &[Digest]) -> Symbol {
    let mut bytes = Vec::with_capacity(params.upper_symbol_len());
    for j in params.cell_members(layer, c) {
        bytes.extend_from_slice(digests[j].as_bytes());
    }
    Symbol(bytes)
}

/// The digest stored for `slot` inside an upper-layer symbol.
pub fn digest_slot(parent: &Symbol, slot: usize) -> Digest {
    Digest::from_slice(&parent.as_bytes()[slot * DIGEST_BYTES..(slot + 1) * DIGEST_BYTES])
        .expect("slot inside symbol")
}

fn layer_digests(layer: usize, symbols: &[Symbol]) -> Vec<Digest> {
    symbols.iter().map(|s| hash_symbol(layer, s.as_bytes())).collect()
}

impl CodedMerkleTree {
    /// Builds the layers above an arbitrary base word. The base need not be
    /// a codeword, which is how incorrectly coded blocks are produced.
    pub fn from_base_layer(base: Vec<Symbol>, params: Arc<CmtParams>) -> Result<Self, CmtError> {
        let n0 = params.layer(0).n;
        if base.len() != n0 {
            return Err(CmtError::Length {
                what: "base layer",
                expected: n0,
                found: base.len(),
            });
        }
        let len = base.first().map_or(0, Symbol::len);
        if base.iter().any(|s| s.len() != len) {
            return Err(CmtError::Params("base symbols differ in length".into()));
        }
        let mut layers = vec![base];
        let mut digests = vec![layer_digests(0, &layers[0])];
        for i in 1..params.layer_count() {
            let below = i - 1;
            let cells = params.layer(below).n / params.batch();
            let u: Vec<Symbol> = (0..cells)
                .map(|c| batch_symbol(&params, below, c, &digests[below]))
                .collect();
            let coded = params.layer(i).code.encoder.encode(&u)?;
            digests.push(layer_digests(i, &coded));
            layers.push(coded);
        }
        let root = digests.last().expect("at least one layer").clone();
        Ok(Self {
            params,
            layers,
            digests,
            root,
        })
    }

    /// Uses the given layers as-is (no re-encoding). Digests and root are
    /// recomputed from them, so upper layers may disagree with the batches
    /// below; this models a producer committing to inconsistent layers.
    pub fn from_layers(layers: Vec<Vec<Symbol>>, params: Arc<CmtParams>) -> Result<Self, CmtError> {
        if layers.len() != params.layer_count() {
            return Err(CmtError::Length {
                what: "layer count",
                expected: params.layer_count(),
                found: layers.len(),
            });
        }
        for (i, l) in layers.iter().enumerate() {
            if l.len() != params.layer(i).n {
                return Err(CmtError::Length {
                    what: "layer",
                    expected: params.layer(i).n,
                    found: l.len(),
                });
            }
            if i > 0 && l.iter().any(|s| s.len() != params.upper_symbol_len()) {
                return Err(CmtError::Params(format!("layer {i} symbols must be {} bytes", params.upper_symbol_len())));
            }
        }
        let digests: Vec<Vec<Digest>> = layers.iter().enumerate().map(|(i, l)| layer_digests(i, l)).collect();
        let root = digests.last().expect("at least one layer").clone();
        Ok(Self {
            params,
            layers,
            digests,
            root,
        })
    }

    pub fn params(&self) -> &Arc<CmtParams> {
        &self.params
    }

    pub fn root(&self) -> &[Digest] {
        &self.root
    }

    pub fn layers(&self) -> &[Vec<Symbol>] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &[Symbol] {
        &self.layers[i]
    }

    pub fn digest(&self, layer: usize, j: usize) -> Digest {
        self.digests[layer][j]
    }

    pub fn layer_words(&self) -> Vec<LayerWord> {
        self.layers
            .iter()
            .map(|l| LayerWord::from_symbols(l.clone()).expect("uniform lengths"))
            .collect()
    }

    /// Checks that batching each layer and re-encoding yields the next one.
    /// Returns the first layer index where this fails.
    pub fn first_inconsistent_layer(&self) -> Option<usize> {
        (1..self.layers.len()).find(|&i| {
            let below = i - 1;
            let cells = self.params.layer(below).n / self.params.batch();
            let u: Vec<Symbol> = (0..cells)
                .map(|c| batch_symbol(&self.params, below, c, &self.digests[below]))
                .collect();
            self.params.layer(i).code.encoder.encode(&u).ok().as_deref() != Some(&self.layers[i][..])
        })
    }

    pub fn prove(&self, layer: usize, index: usize) -> Result<CmtProof, CmtError> {
        if layer >= self.layers.len() || index >= self.layers[layer].len() {
            return Err(CmtError::Index { layer, index });
        }
        Ok(build_proof(&self.params, |l, j| Some(&self.layers[l][j]), layer, index)
            .expect("all symbols present"))
    }
}

/// Encodes `block` with the base code and builds the tree.
pub fn build_cmt(block: &[Symbol], params: Arc<CmtParams>) -> Result<CodedMerkleTree, CmtError> {
    let base = params.layer(0).code.encoder.encode(block)?;
    CodedMerkleTree::from_base_layer(base, params)
}

pub fn cmt_root(tree: &CodedMerkleTree) -> &[Digest] {
    tree.root()
}

/// One level of a membership proof: the other `b-1` digests of the batch,
/// then the digests of the batch's `b(1-R)` parity members.
///
/// The parity block repeats digests already present among the siblings and
/// the verifier requires them to agree; it makes the parity side of every
/// batch explicit and keeps the proof size at `y(b-1) + y·b(1-R)` per level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLevel {
    pub siblings: Vec<Digest>,
    pub parity_side: Vec<Digest>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmtProof {
    pub layer: usize,
    pub index: usize,
    pub levels: Vec<ProofLevel>,
}

impl CmtProof {
    /// Concatenation of all digests, level by level (siblings, then parity
    /// side). No framing: the length is fixed by the parameters.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.levels
            .iter()
            .flat_map(|l| l.siblings.iter().chain(&l.parity_side))
            .flat_map(|d| d.0)
            .collect()
    }

    pub fn from_bytes(params: &CmtParams, layer: usize, index: usize, bytes: &[u8]) -> Result<Self, CmtError> {
        let per = params.proof_bytes_per_level();
        let levels = params.top().checked_sub(layer).ok_or(CmtError::Index { layer, index })?;
        if bytes.len() != per * levels {
            return Err(CmtError::Length {
                what: "proof bytes",
                expected: per * levels,
                found: bytes.len(),
            });
        }
        let b = params.batch();
        let levels = bytes
            .chunks(per)
            .map(|chunk| {
                let ds: Vec<Digest> = chunk
                    .chunks(DIGEST_BYTES)
                    .map(|c| Digest::from_slice(c).expect("exact chunk"))
                    .collect();
                let (s, p) = ds.split_at(b - 1);
                ProofLevel {
                    siblings: s.to_vec(),
                    parity_side: p.to_vec(),
                }
            })
            .collect();
        Ok(Self { layer, index, levels })
    }

    pub fn byte_len(&self) -> usize {
        self.levels
            .iter()
            .map(|l| (l.siblings.len() + l.parity_side.len()) * DIGEST_BYTES)
            .sum()
    }
}

/// Builds a proof for position `index` of `layer` from the symbols of the
/// layers above it. `symbol(l, j)` must return the symbols on the path;
/// returns `None` if any is missing.
pub fn build_proof<'a, F>(params: &CmtParams, symbol: F, layer: usize, index: usize) -> Option<CmtProof>
where
    F: Fn(usize, usize) -> Option<&'a Symbol>,
{
    let mut levels = Vec::with_capacity(params.top() - layer);
    let mut j = index;
    for l in layer..params.top() {
        let (c, slot) = params.cell_of(l, j);
        let parent = symbol(l + 1, c)?;
        let b = params.batch();
        let a = params.systematic_per_cell();
        let siblings = (0..b).filter(|&s| s != slot).map(|s| digest_slot(parent, s)).collect();
        let parity_side = (a..b).map(|s| digest_slot(parent, s)).collect();
        levels.push(ProofLevel { siblings, parity_side });
        j = c;
    }
    Some(CmtProof { layer, index, levels })
}

/// Checks that `digest` sits at position `index` of `layer` under `root`.
pub fn verify_digest(params: &CmtParams, root: &[Digest], layer: usize, index: usize, digest: Digest, proof: &CmtProof) -> bool {
    if proof.layer != layer || proof.index != index || layer > params.top() || root.len() != params.layer(params.top()).n {
        return false;
    }
    if index >= params.layer(layer).n || proof.levels.len() != params.top() - layer {
        return false;
    }
    let (b, a) = (params.batch(), params.systematic_per_cell());
    let mut d = digest;
    let mut j = index;
    for (step, level) in proof.levels.iter().enumerate() {
        let l = layer + step;
        if level.siblings.len() != b - 1 || level.parity_side.len() != b - a {
            return false;
        }
        let (c, slot) = params.cell_of(l, j);
        let mut cell = level.siblings.clone();
        cell.insert(slot, d);
        if cell[a..] != level.parity_side[..] {
            return false;
        }
        let bytes: Vec<u8> = cell.iter().flat_map(|x| x.0).collect();
        d = hash_symbol(l + 1, &bytes);
        j = c;
    }
    root[j] == d
}

/// Checks a symbol's membership at position `index` of `layer`.
pub fn cmt_verify(params: &CmtParams, root: &[Digest], layer: usize, index: usize, symbol: &Symbol, proof: &CmtProof) -> bool {
    verify_digest(params, root, layer, index, hash_symbol(layer, symbol.as_bytes()), proof)
}
