use serde::{Deserialize, Serialize};

use super::FraudError;
use crate::cmt::io::{put_u32, Reader};
use crate::cmt::{cmt_verify, hash_symbol, verify_digest, CmtError, CmtParams, CmtProof, CodedMerkleTree, Digest};
use crate::codes::Symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FraudKind {
    /// A parity check whose committed members do not XOR to zero. The
    /// highest-index member is the one left out.
    ParityCheck,
    /// A symbol recovered from a parity check whose hash differs from the
    /// digest committed for it in the layer above.
    HashInconsistency,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FraudMember {
    pub index: usize,
    pub symbol: Symbol,
    pub proof: CmtProof,
}

/// Evidence that a tree was incorrectly coded.
///
/// Both kinds carry all members of one parity check except `omitted`, each
/// with a membership proof, plus the committed digest of `omitted` with its
/// own proof. The XOR of the members is the only value the omitted position
/// could take for the check to hold; the proof is valid when that value
/// does not hash to the committed digest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FraudProof {
    pub kind: FraudKind,
    pub layer: usize,
    pub row: usize,
    pub members: Vec<FraudMember>,
    pub omitted: usize,
    pub omitted_digest: Digest,
    pub omitted_proof: CmtProof,
}

/// Builds a parity-check proof for `row` of `layer` in a committed tree.
/// Refuses if the row is satisfied.
pub fn make_parity_fraud_proof(tree: &CodedMerkleTree, layer: usize, row: usize) -> Result<FraudProof, FraudError> {
    let params = tree.params();
    if layer >= params.layer_count() || row >= params.layer(layer).matrix().n_rows() {
        return Err(FraudError::Index { layer, row });
    }
    let support = params.layer(layer).matrix().row(row);
    let symbols = tree.layer(layer);
    let mut sum = Symbol::zero(symbols[0].len());
    for &j in support {
        sum.xor_assign(&symbols[j]);
    }
    if sum.is_zero() {
        return Err(FraudError::RowSatisfied { layer, row });
    }
    let omitted = *support.last().expect("rows are nonempty");
    let members = support[..support.len() - 1]
        .iter()
        .map(|&j| {
            Ok(FraudMember {
                index: j,
                symbol: symbols[j].clone(),
                proof: tree.prove(layer, j)?,
            })
        })
        .collect::<Result<_, CmtError>>()?;
    Ok(FraudProof {
        kind: FraudKind::ParityCheck,
        layer,
        row,
        members,
        omitted,
        omitted_digest: tree.digest(layer, omitted),
        omitted_proof: tree.prove(layer, omitted)?,
    })
}

/// Checks a fraud proof against a root. Malformed proofs are rejected.
pub fn verify_fraud_proof(params: &CmtParams, root: &[Digest], proof: &FraudProof) -> bool {
    if proof.layer >= params.layer_count() {
        return false;
    }
    let h = params.layer(proof.layer).matrix();
    if proof.row >= h.n_rows() {
        return false;
    }
    let support = h.row(proof.row);
    if !support.contains(&proof.omitted) {
        return false;
    }
    if proof.kind == FraudKind::ParityCheck && support.last() != Some(&proof.omitted) {
        return false;
    }
    let expected: Vec<usize> = support.iter().copied().filter(|&j| j != proof.omitted).collect();
    if proof.members.len() != expected.len() || proof.members.iter().map(|m| m.index).ne(expected) {
        return false;
    }
    let Some(first) = proof.members.first() else {
        // a single-member check carries no symbols to fix the length
        return false;
    };
    let len = first.symbol.len();
    if proof.members.iter().any(|m| m.symbol.len() != len) {
        return false;
    }
    if !proof
        .members
        .iter()
        .all(|m| cmt_verify(params, root, proof.layer, m.index, &m.symbol, &m.proof))
    {
        return false;
    }
    if !verify_digest(params, root, proof.layer, proof.omitted, proof.omitted_digest, &proof.omitted_proof) {
        return false;
    }
    let mut forced = Symbol::zero(len);
    for m in &proof.members {
        forced.xor_assign(&m.symbol);
    }
    hash_symbol(proof.layer, forced.as_bytes()) != proof.omitted_digest
}

const MAGIC: &[u8; 8] = b"SPARFRD1";

impl FraudProof {
    /// Binary form, little-endian:
    ///
    /// ```text
    /// magic b"SPARFRD1", kind u8 (0 parity, 1 hash), layer u32, row u32,
    /// omitted u32, omitted digest [32], omitted proof (u32 length + bytes),
    /// member count u32, then per member:
    ///   index u32, symbol (u32 length + bytes), proof (u32 length + bytes)
    /// ```
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        out.push(match self.kind {
            FraudKind::ParityCheck => 0,
            FraudKind::HashInconsistency => 1,
        });
        put_u32(&mut out, self.layer);
        put_u32(&mut out, self.row);
        put_u32(&mut out, self.omitted);
        out.extend_from_slice(&self.omitted_digest.0);
        let p = self.omitted_proof.to_bytes();
        put_u32(&mut out, p.len());
        out.extend_from_slice(&p);
        put_u32(&mut out, self.members.len());
        for m in &self.members {
            put_u32(&mut out, m.index);
            put_u32(&mut out, m.symbol.len());
            out.extend_from_slice(m.symbol.as_bytes());
            let p = m.proof.to_bytes();
            put_u32(&mut out, p.len());
            out.extend_from_slice(&p);
        }
        out
    }

    pub fn from_bytes(params: &CmtParams, bytes: &[u8]) -> Result<Self, FraudError> {
        let mut r = Reader::new(bytes);
        if r.take(MAGIC.len())? != MAGIC {
            return Err(CmtError::Format("bad magic".into()).into());
        }
        let kind = match r.u8()? {
            0 => FraudKind::ParityCheck,
            1 => FraudKind::HashInconsistency,
            t => return Err(CmtError::Format(format!("bad kind tag {t}")).into()),
        };
        let layer = r.u32()? as usize;
        let row = r.u32()? as usize;
        let omitted = r.u32()? as usize;
        let omitted_digest = r.digest()?;
        let plen = r.u32()? as usize;
        let omitted_proof = CmtProof::from_bytes(params, layer, omitted, r.take(plen)?)?;
        let count = r.u32()? as usize;
        let mut members = Vec::with_capacity(count.min(1024));
        for _ in 0..count {
            let index = r.u32()? as usize;
            let slen = r.u32()? as usize;
            let symbol = Symbol(r.take(slen)?.to_vec());
            let plen = r.u32()? as usize;
            let proof = CmtProof::from_bytes(params, layer, index, r.take(plen)?)?;
            members.push(FraudMember { index, symbol, proof });
        }
        r.finish()?;
        Ok(Self {
            kind,
            layer,
            row,
            members,
            omitted,
            omitted_digest,
            omitted_proof,
        })
    }
}
