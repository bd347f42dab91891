//! Error-plus-erasure attacks: masking a symbol error with erasures, and
//! deciding whether the resulting linear system is consistent.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::gf2::BitMatrix;
use super::{CodeError, LayerWord, SparseParityMatrix, Symbol};

/// Erasures that hide a single error at `error_pos`: every check through the
/// error gets at least one other erased member, so no fully known row can
/// expose it. Picks positions greedily by how many uncovered checks they
/// hit, breaking ties by the lower index. The result has at most
/// `|cols[error_pos]|` elements.
pub fn mask_single_error(h: &SparseParityMatrix, error_pos: usize) -> Result<BTreeSet<usize>, CodeError> {
    if error_pos >= h.n_cols() {
        return Err(CodeError::Index(error_pos));
    }
    let checks = h.col(error_pos);
    if let Some(&i) = checks.iter().find(|&&i| h.row(i).len() < 2) {
        return Err(CodeError::Unmaskable { row: i });
    }
    let mut uncovered: BTreeSet<usize> = checks.iter().copied().collect();
    let mut chosen = BTreeSet::new();
    while !uncovered.is_empty() {
        let mut hits = BTreeMap::<usize, usize>::new();
        for &i in &uncovered {
            for &j in h.row(i) {
                if j != error_pos {
                    *hits.entry(j).or_default() += 1;
                }
            }
        }
        let (&best, _) = hits
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("rows have another member");
        for &i in h.col(best) {
            uncovered.remove(&i);
        }
        chosen.insert(best);
    }
    Ok(chosen)
}

/// Symbol errors (added to the codeword) and erasures on disjoint supports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPattern {
    errors: BTreeMap<usize, Symbol>,
    erasures: BTreeSet<usize>,
}

impl ErrorPattern {
    pub fn new(errors: BTreeMap<usize, Symbol>, erasures: BTreeSet<usize>) -> Result<Self, CodeError> {
        if let Some(&j) = errors.keys().find(|j| erasures.contains(j)) {
            return Err(CodeError::Params(format!("position {j} is both an error and an erasure")));
        }
        if let Some((&j, _)) = errors.iter().find(|(_, s)| s.is_zero()) {
            return Err(CodeError::Params(format!("error at {j} is zero")));
        }
        Ok(Self { errors, erasures })
    }

    pub fn errors(&self) -> &BTreeMap<usize, Symbol> {
        &self.errors
    }

    pub fn erasures(&self) -> &BTreeSet<usize> {
        &self.erasures
    }

    /// The received word `c + e` with the erasures applied.
    pub fn apply(&self, codeword: &LayerWord) -> LayerWord {
        let mut w = codeword.clone();
        for (&j, e) in &self.errors {
            if let Some(mut s) = w.get(j).cloned() {
                s.xor_assign(e);
                w.set(j, s);
            }
        }
        for &j in &self.erasures {
            w.erase(j);
        }
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub rank_lhs: usize,
    pub rank_aug: usize,
}

/// Decides whether the received word can be completed to a codeword, i.e.
/// whether `H_E·x_E = Σ_{j∉E} H_j·x_j` has a solution over every bit plane
/// of the symbols. `rank_aug` is the largest augmented rank over the planes.
pub fn consistency_check(
    h: &SparseParityMatrix,
    pattern: &ErrorPattern,
    codeword: &LayerWord,
) -> Result<ConsistencyReport, CodeError> {
    if codeword.len() != h.n_cols() {
        return Err(CodeError::Dimension {
            expected: h.n_cols(),
            found: codeword.len(),
        });
    }
    if let Some(&j) = pattern
        .errors
        .keys()
        .chain(&pattern.erasures)
        .find(|&&j| j >= h.n_cols())
    {
        return Err(CodeError::Index(j));
    }
    let received = pattern.apply(codeword);
    let erased: Vec<usize> = pattern.erasures.iter().copied().collect();
    let col_of: BTreeMap<usize, usize> = erased.iter().enumerate().map(|(c, &j)| (j, c)).collect();
    let bits = received.symbol_len() * 8;
    let e = erased.len();
    let mut m = BitMatrix::zeros(h.n_rows(), e + bits);
    for i in 0..h.n_rows() {
        for &j in h.row(i) {
            if let Some(&c) = col_of.get(&j) {
                m.set(i, c, true);
            } else {
                let s = received.get(j).ok_or(CodeError::ErasurePresent(j))?;
                for (byte_idx, &byte) in s.as_bytes().iter().enumerate() {
                    for bit in 0..8 {
                        if byte >> bit & 1 == 1 {
                            m.flip(i, e + byte_idx * 8 + bit);
                        }
                    }
                }
            }
        }
    }
    let rank_lhs = m.reduce(e).len();
    // rows below the pivots have an all-zero left block; a one in plane `b`
    // there means that plane's system has no solution
    let inconsistent_plane = (rank_lhs..h.n_rows()).any(|i| m.row_ones(i).next().is_some());
    let rank_aug = rank_lhs + usize::from(inconsistent_plane);
    Ok(ConsistencyReport {
        consistent: !inconsistent_plane,
        rank_lhs,
        rank_aug,
    })
}
