//! Systematic encoding through the parity part of H, and syndrome checks.

use serde::{Deserialize, Serialize};

use super::gf2::BitMatrix;
use super::{generate_ensemble_code, CodeError, EnsembleParams, LayerWord, SparseParityMatrix, Symbol};

/// Encoder for `H = [A | P]` with `P` square and invertible: the codeword is
/// `(d, P⁻¹·A·d)`.
#[derive(Clone, Debug)]
pub struct SystematicEncoder {
    k: usize,
    /// Row `i` lists the data positions whose XOR gives parity symbol `i`.
    parity_sources: Vec<Vec<usize>>,
}

impl SystematicEncoder {
    pub fn new(h: &SparseParityMatrix) -> Result<Self, CodeError> {
        let (r, n) = (h.n_rows(), h.n_cols());
        let k = n - r;
        // Columns [0, r) hold P, columns [r, n) hold A.
        let mut m = BitMatrix::zeros(r, n);
        for (i, row) in h.rows().iter().enumerate() {
            for &j in row {
                let c = if j >= k { j - k } else { r + j };
                m.set(i, c, true);
            }
        }
        let pivots = m.reduce(r);
        if pivots.len() < r {
            return Err(CodeError::SingularParityPart { rank: pivots.len(), r });
        }
        let parity_sources = (0..r)
            .map(|i| m.row_ones(i).filter(|&c| c >= r).map(|c| c - r).collect())
            .collect();
        Ok(Self { k, parity_sources })
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn length(&self) -> usize {
        self.k + self.parity_sources.len()
    }

    /// Encodes `k` data symbols of equal length into a full codeword.
    pub fn encode(&self, data: &[Symbol]) -> Result<Vec<Symbol>, CodeError> {
        if data.len() != self.k {
            return Err(CodeError::Dimension {
                expected: self.k,
                found: data.len(),
            });
        }
        let len = data.first().map_or(0, Symbol::len);
        if let Some(j) = data.iter().position(|s| s.len() != len) {
            return Err(CodeError::SymbolLength {
                position: j,
                expected: len,
                found: data[j].len(),
            });
        }
        let mut out = data.to_vec();
        for src in &self.parity_sources {
            let mut p = Symbol::zero(len);
            for &j in src {
                p.xor_assign(&data[j]);
            }
            out.push(p);
        }
        Ok(out)
    }
}

/// Systematic encoding of `data` under `H`.
pub fn systematic_encode(h: &SparseParityMatrix, data: &[Symbol]) -> Result<LayerWord, CodeError> {
    let enc = SystematicEncoder::new(h)?;
    LayerWord::from_symbols(enc.encode(data)?)
}

/// An ensemble code together with its encoder and the seed that produced it.
#[derive(Clone, Debug)]
pub struct EncodableCode {
    pub matrix: SparseParityMatrix,
    pub encoder: SystematicEncoder,
    pub seed_used: u64,
    pub retries: u32,
}

/// Samples ensemble codes starting at `params.seed`, incrementing the seed
/// until the parity part is invertible.
pub fn generate_encodable_code(params: &EnsembleParams, max_retries: u32) -> Result<EncodableCode, CodeError> {
    let mut p = *params;
    for retries in 0..=max_retries {
        let h = generate_ensemble_code(&p)?;
        match SystematicEncoder::new(&h) {
            Ok(encoder) => {
                return Ok(EncodableCode {
                    matrix: h,
                    encoder,
                    seed_used: p.seed,
                    retries,
                })
            }
            Err(CodeError::SingularParityPart { .. }) => p.seed = p.seed.wrapping_add(1),
            Err(e) => return Err(e),
        }
    }
    Err(CodeError::Params(format!(
        "no invertible parity part within {max_retries} retries from seed {}",
        params.seed
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeReport {
    pub all_satisfied: bool,
    pub failed_rows: Vec<usize>,
}

/// XOR of the symbols on row `i`, or `None` if any is erased.
pub fn row_sum(h: &SparseParityMatrix, word: &LayerWord, i: usize) -> Option<Symbol> {
    let mut acc = Symbol::zero(word.symbol_len());
    for &j in h.row(i) {
        acc.xor_assign(word.get(j)?);
    }
    Some(acc)
}

/// Checks every parity equation on a fully known word.
pub fn check_syndrome(h: &SparseParityMatrix, word: &LayerWord) -> Result<SyndromeReport, CodeError> {
    if word.len() != h.n_cols() {
        return Err(CodeError::Dimension {
            expected: h.n_cols(),
            found: word.len(),
        });
    }
    if let Some(j) = (0..word.len()).find(|&j| word.is_erased(j)) {
        return Err(CodeError::ErasurePresent(j));
    }
    let failed_rows: Vec<usize> = (0..h.n_rows())
        .filter(|&i| !row_sum(h, word, i).expect("no erasures").is_zero())
        .collect();
    Ok(SyndromeReport {
        all_satisfied: failed_rows.is_empty(),
        failed_rows,
    })
}
