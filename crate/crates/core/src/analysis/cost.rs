use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Byte-level parameters of a light node's download.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    /// Block size `B` in bytes.
    pub block_bytes: f64,
    /// Base-layer dimension `k` in symbols.
    pub k: u64,
    /// Digest size `y` in bytes.
    pub digest_bytes: f64,
    /// Batch size `b`.
    pub batch: u64,
    /// Code rate `R`.
    pub rate: f64,
    /// Root size `t` in hashes.
    pub root_hashes: u64,
    /// Digest length `ℓ_H` in bits.
    pub ell_hash: u64,
}

impl CostParams {
    /// 1 MB block, `k = 1024`, `y = 32`, `b = 8`, `R = 1/4`, `t = 256`.
    pub fn standard() -> Self {
        Self {
            block_bytes: 1e6,
            k: 1024,
            digest_bytes: 32.0,
            batch: 8,
            rate: 0.25,
            root_hashes: 256,
            ell_hash: 256,
        }
    }

    /// Same symbol size and root, with `k` scaled in proportion to `B`.
    pub fn scaled_to(&self, block_bytes: f64) -> Self {
        Self {
            block_bytes,
            k: (self.k as f64 * block_bytes / self.block_bytes).round() as u64,
            ..*self
        }
    }

    /// `log_{bR}(k/(R·t))`, the number of coded layers above the base.
    pub fn layer_count(&self) -> Result<f64, AnalysisError> {
        let base = self.batch as f64 * self.rate;
        if base <= 1.0 {
            return Err(AnalysisError::Domain(format!("b·R = {base} must exceed 1")));
        }
        let arg = self.k as f64 / (self.rate * self.root_hashes as f64);
        if arg.is_nan() || arg <= 0.0 || arg.is_infinite() {
            return Err(AnalysisError::Domain(format!("k/(R·t) = {arg} is not a positive number")));
        }
        Ok(arg.ln() / base.ln())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingCost {
    pub s: u64,
    /// `B/k`.
    pub symbol_bytes: f64,
    /// `y(b-1) + y·b(1-R)`.
    pub proof_bytes_per_layer: f64,
    pub layer_count: f64,
    pub per_sample_bytes: f64,
    pub total_bytes: f64,
}

/// `S = s·(B/k + [y(b-1) + y·b(1-R)]·log_{bR}(k/(R·t)))`.
pub fn sampling_cost(s: u64, c: &CostParams) -> Result<SamplingCost, AnalysisError> {
    let layer_count = c.layer_count()?;
    let symbol_bytes = c.block_bytes / c.k as f64;
    let b = c.batch as f64;
    let proof_bytes_per_layer = c.digest_bytes * (b - 1.0) + c.digest_bytes * b * (1.0 - c.rate);
    let per_sample_bytes = symbol_bytes + proof_bytes_per_layer * layer_count;
    Ok(SamplingCost {
        s,
        symbol_bytes,
        proof_bytes_per_layer,
        layer_count,
        per_sample_bytes,
        total_bytes: s as f64 * per_sample_bytes,
    })
}

/// `H = t·ℓ_H/8` bytes.
pub fn header_size(c: &CostParams) -> u64 {
    c.root_hashes * c.ell_hash / 8
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalDownload {
    pub sampling: SamplingCost,
    pub header_bytes: u64,
    pub total_bytes: f64,
    pub d_over_b: f64,
}

/// `D = S + H`, also normalized by the block size.
pub fn total_download(s: u64, c: &CostParams) -> Result<TotalDownload, AnalysisError> {
    let sampling = sampling_cost(s, c)?;
    let header_bytes = header_size(c);
    let total_bytes = sampling.total_bytes + header_bytes as f64;
    Ok(TotalDownload {
        sampling,
        header_bytes,
        total_bytes,
        d_over_b: total_bytes / c.block_bytes,
    })
}
