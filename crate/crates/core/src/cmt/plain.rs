//! Standard binary Merkle tree over raw symbols.
//!
//! Leaves are `SHA-256(symbol)` and internal nodes `SHA-256(left || right)`.
//! A leaf count that is not a power of two is padded by repeating the last
//! leaf.

use serde::{Deserialize, Serialize};

use super::hash::{sha256, Digest};
use crate::codes::Symbol;

fn padded_leaves(data: &[Symbol]) -> Vec<Digest> {
    let mut leaves: Vec<Digest> = data.iter().map(|s| sha256(&[s.as_bytes()])).collect();
    if let Some(&last) = leaves.last() {
        leaves.resize(leaves.len().next_power_of_two(), last);
    }
    leaves
}

fn parent(l: &Digest, r: &Digest) -> Digest {
    sha256(&[&l.0, &r.0])
}

/// All levels, leaves first, root last.
fn levels(data: &[Symbol]) -> Vec<Vec<Digest>> {
    let mut out = vec![padded_leaves(data)];
    while out.last().unwrap().len() > 1 {
        let next = out.last().unwrap().chunks(2).map(|p| parent(&p[0], &p[1])).collect();
        out.push(next);
    }
    out
}

/// Root of the tree; `None` for empty input.
pub fn merkle_root_plain(data: &[Symbol]) -> Option<Digest> {
    if data.is_empty() {
        return None;
    }
    Some(levels(data).last().unwrap()[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlainProof {
    pub index: usize,
    pub siblings: Vec<Digest>,
}

pub fn merkle_prove_plain(data: &[Symbol], index: usize) -> Option<PlainProof> {
    if index >= data.len() {
        return None;
    }
    let lv = levels(data);
    let mut j = index;
    let siblings = lv[..lv.len() - 1]
        .iter()
        .map(|level| {
            let s = level[j ^ 1];
            j /= 2;
            s
        })
        .collect();
    Some(PlainProof { index, siblings })
}

pub fn merkle_verify_plain(root: &Digest, index: usize, symbol: &Symbol, proof: &PlainProof) -> bool {
    if proof.index != index {
        return false;
    }
    let mut d = sha256(&[symbol.as_bytes()]);
    let mut j = index;
    for s in &proof.siblings {
        d = if j.is_multiple_of(2) { parent(&d, s) } else { parent(s, &d) };
        j /= 2;
    }
    j == 0 && d == *root
}
