use serde::{Deserialize, Serialize};

use super::hash::{DIGEST_BITS, DIGEST_BYTES};
use super::CmtError;
use crate::codes::{generate_encodable_code, EncodableCode, EnsembleParams, Rate, SparseParityMatrix};

/// How each coded layer is cut into batches of `b` symbols.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    /// Cell `c` holds systematic positions `[c·bR, (c+1)·bR)` and parity
    /// positions `k + [c·b(1-R), (c+1)·b(1-R))`, so every batch mixes
    /// `bR` systematic and `b(1-R)` parity symbols.
    #[default]
    Interleaved,
}

/// Everything needed to regenerate the per-layer codes of a tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmtSpec {
    /// Number of systematic symbols in the base layer.
    pub k: usize,
    pub rate: Rate,
    /// Batch size `b`.
    pub batch: usize,
    /// Number of root hashes `t`.
    pub root_size: usize,
    pub col_weight: usize,
    pub row_weight: usize,
    pub seed: u64,
    #[serde(default)]
    pub partition: Partition,
}

impl CmtSpec {
    /// Base layer of 4096 coded symbols, `b = 8`, `R = 1/4`, `t = 256`, with
    /// the (6,8) ensemble.
    pub fn standard(seed: u64) -> Self {
        Self {
            k: 1024,
            rate: Rate::new(1, 4).expect("valid rate"),
            batch: 8,
            root_size: 256,
            col_weight: 6,
            row_weight: 8,
            seed,
            partition: Partition::Interleaved,
        }
    }

    /// Layer lengths `n_1, n_2, …, n_ℓ = t`, base first.
    pub fn layer_lengths(&self) -> Result<Vec<usize>, CmtError> {
        let bad = |m: String| Err(CmtError::Params(m));
        let b = self.batch;
        if b < 2 {
            return bad("batch size must be at least 2".into());
        }
        if self.rate.scale(b).is_none_or(|a| a == 0 || a == b) {
            return bad(format!("b·R must be an integer in (0, b) for b={b}, R={}", self.rate));
        }
        if self.rate.scale(b).unwrap() < 2 {
            return bad("b·R must be at least 2 so each layer shrinks".into());
        }
        let mut k = self.k;
        let mut out = Vec::new();
        loop {
            let Some(n) = self.rate.inverse_scale(k) else {
                return bad(format!("k={k} is not a multiple of the rate numerator"));
            };
            if n < self.root_size {
                return bad(format!("layer length {n} skipped past root size {}", self.root_size));
            }
            if n % b != 0 {
                return bad(format!("layer length {n} is not divisible by b={b}"));
            }
            out.push(n);
            if n == self.root_size {
                return Ok(out);
            }
            k = n / b;
        }
    }

    pub fn layer_seed(&self, layer: usize) -> u64 {
        self.seed.wrapping_add((layer as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Clone, Debug)]
pub struct LayerCode {
    pub code: EncodableCode,
    pub n: usize,
    pub k: usize,
}

impl LayerCode {
    pub fn matrix(&self) -> &SparseParityMatrix {
        &self.code.matrix
    }
}

/// A tree spec together with its generated layer codes.
#[derive(Clone, Debug)]
pub struct CmtParams {
    spec: CmtSpec,
    layers: Vec<LayerCode>,
}

const MAX_ENCODABLE_RETRIES: u32 = 1000;

impl CmtParams {
    pub fn new(spec: CmtSpec) -> Result<Self, CmtError> {
        let lengths = spec.layer_lengths()?;
        let layers = lengths
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let ep = EnsembleParams {
                    n,
                    rate: spec.rate,
                    col_weight: spec.col_weight,
                    row_weight: spec.row_weight,
                    seed: spec.layer_seed(i),
                };
                let code = generate_encodable_code(&ep, MAX_ENCODABLE_RETRIES)?;
                Ok(LayerCode {
                    k: code.encoder.dimension(),
                    n,
                    code,
                })
            })
            .collect::<Result<Vec<_>, CmtError>>()?;
        Ok(Self { spec, layers })
    }

    pub fn spec(&self) -> &CmtSpec {
        &self.spec
    }

    pub fn layers(&self) -> &[LayerCode] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &LayerCode {
        &self.layers[i]
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn top(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn matrices(&self) -> Vec<&SparseParityMatrix> {
        self.layers.iter().map(LayerCode::matrix).collect()
    }

    pub fn batch(&self) -> usize {
        self.spec.batch
    }

    pub fn ell_hash(&self) -> usize {
        DIGEST_BITS
    }

    /// Systematic members per batch, `bR`.
    pub fn systematic_per_cell(&self) -> usize {
        self.spec.rate.scale(self.spec.batch).expect("checked at construction")
    }

    /// Parity members per batch, `b(1-R)`.
    pub fn parity_per_cell(&self) -> usize {
        self.spec.batch - self.systematic_per_cell()
    }

    /// Symbol size of every layer above the base: `b` concatenated digests.
    pub fn upper_symbol_len(&self) -> usize {
        self.spec.batch * DIGEST_BYTES
    }

    /// The batch containing position `j` of `layer` and its slot inside the
    /// batch (systematic members first, then parity members).
    pub fn cell_of(&self, layer: usize, j: usize) -> (usize, usize) {
        let (a, q) = (self.systematic_per_cell(), self.parity_per_cell());
        let k = self.layers[layer].k;
        if j < k {
            (j / a, j % a)
        } else {
            ((j - k) / q, a + (j - k) % q)
        }
    }

    /// Positions of batch `c` of `layer`, in slot order.
    pub fn cell_members(&self, layer: usize, c: usize) -> Vec<usize> {
        let (a, q) = (self.systematic_per_cell(), self.parity_per_cell());
        let k = self.layers[layer].k;
        (c * a..(c + 1) * a).chain(k + c * q..k + (c + 1) * q).collect()
    }

    /// Proof bytes per level: `y(b-1) + y·b(1-R)`.
    pub fn proof_bytes_per_level(&self) -> usize {
        DIGEST_BYTES * (self.spec.batch - 1) + DIGEST_BYTES * self.parity_per_cell()
    }

    /// Header size in bytes, `t·ℓ_H/8`.
    pub fn header_bytes(&self) -> usize {
        self.spec.root_size * DIGEST_BYTES
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_layer_lengths() {
        let s = CmtSpec::standard(0);
        assert_eq!(s.layer_lengths().unwrap(), vec![4096, 2048, 1024, 512, 256]);
    }

    #[test]
    fn rejects_unreachable_root() {
        let mut s = CmtSpec::standard(0);
        s.root_size = 300;
        assert!(s.layer_lengths().is_err());
        let mut s = CmtSpec::standard(0);
        s.batch = 4;
        // bR = 1 means layers never shrink
        assert!(s.layer_lengths().is_err());
    }

    #[test]
    fn cells_partition_each_layer() {
        let spec = CmtSpec {
            k: 16,
            rate: Rate::new(1, 2).unwrap(),
            batch: 4,
            root_size: 8,
            col_weight: 3,
            row_weight: 6,
            seed: 1,
            partition: Partition::Interleaved,
        };
        let p = CmtParams::new(spec).unwrap();
        for layer in 0..p.layer_count() {
            let n = p.layer(layer).n;
            let mut seen = vec![false; n];
            for c in 0..n / p.batch() {
                for (slot, j) in p.cell_members(layer, c).into_iter().enumerate() {
                    assert!(!seen[j]);
                    seen[j] = true;
                    assert_eq!(p.cell_of(layer, j), (c, slot));
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }
}
