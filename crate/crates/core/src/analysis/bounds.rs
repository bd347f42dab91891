use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// `-p·log2(p) - (1-p)·log2(1-p)`, with `0·log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64, AnalysisError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(AnalysisError::Domain(format!("binary entropy of {p}")));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(1.0 - p))
}

/// Inputs of the success-probability bounds: per-layer undecodable ratios
/// and lengths, player count and samples per player.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alphas: Vec<f64>,
    pub n_layers: Vec<u64>,
    pub m: u64,
    pub s: u64,
}

impl BoundParams {
    pub fn single(alpha: f64, n: u64, m: u64, s: u64) -> Self {
        Self {
            alphas: vec![alpha],
            n_layers: vec![n],
            m,
            s,
        }
    }

    pub fn with_s(&self, s: u64) -> Self {
        Self { s, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.alphas.is_empty() || self.alphas.len() != self.n_layers.len() {
            return Err(AnalysisError::Domain("alphas and n_layers must be nonempty and of equal length".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(AnalysisError::Domain(format!("alpha={a} outside (0,1)")));
        }
        if self.m == 0 {
            return Err(AnalysisError::Domain("m must be positive".into()));
        }
        Ok(())
    }

    fn alpha_min(&self) -> f64 {
        self.alphas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `max_i [b(α_i)·n_i + m·s·log2(1-α_i)]`, the base-2 exponent of the
    /// second bound term.
    pub fn log2_second_term(&self) -> f64 {
        self.alphas
            .iter()
            .zip(&self.n_layers)
            .map(|(&a, &n)| {
                let h = binary_entropy(a).expect("validated alpha");
                h * n as f64 + (self.m as f64) * (self.s as f64) * (-a).ln_1p() / std::f64::consts::LN_2
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn second_term(&self) -> f64 {
        self.log2_second_term().exp2()
    }

    /// `(1-α_min)^s`: one player's chance of drawing only available symbols.
    pub fn single_player_acceptance(&self) -> f64 {
        if self.s == 0 {
            return 1.0;
        }
        (self.s as f64 * (-self.alpha_min()).ln_1p()).exp()
    }

    /// `1 - (1 - (1-α_min)^s)^m`: chance that at least one player accepts.
    pub fn any_player_acceptance(&self) -> f64 {
        let x = self.single_player_acceptance();
        let y = -(self.m as f64 * (-x).ln_1p()).exp_m1();
        // 1-(1-x)^m >= x for m >= 1; the max only absorbs rounding
        y.max(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Original,
    Recomputed,
}

/// `max{(1-α_min)^s, 2^{max_i[b(α_i)n_i + m·s·log2(1-α_i)]}}`, clamped to
/// `[0,1]`.
pub fn asp_bound_original(p: &BoundParams) -> Result<f64, AnalysisError> {
    p.validate()?;
    Ok(p.single_player_acceptance().max(p.second_term()).clamp(0.0, 1.0))
}

/// `min{1, max{1 - (1-(1-α_min)^s)^m, t2}}` with the same `t2` as the
/// original bound.
pub fn asp_bound_recomputed(p: &BoundParams) -> Result<f64, AnalysisError> {
    p.validate()?;
    Ok(p.any_player_acceptance().max(p.second_term()).min(1.0))
}

pub fn asp_bound(kind: BoundKind, p: &BoundParams) -> Result<f64, AnalysisError> {
    match kind {
        BoundKind::Original => asp_bound_original(p),
        BoundKind::Recomputed => asp_bound_recomputed(p),
    }
}

/// True when the recomputed bound is at least the original one, allowing
/// one unit in the last place.
pub fn dominance_check(p: &BoundParams) -> Result<bool, AnalysisError> {
    let o = asp_bound_original(p)?;
    let r = asp_bound_recomputed(p)?;
    Ok(r >= o || o - r <= f64::EPSILON * o)
}

const MAX_SAMPLES: u64 = 1 << 40;

/// Smallest `s` for which the bound is at most `gamma`. The value of `p.s`
/// is ignored.
pub fn min_samples(kind: BoundKind, gamma: f64, p: &BoundParams) -> Result<u64, AnalysisError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(AnalysisError::Domain(format!("gamma={gamma} outside (0,1)")));
    }
    p.validate()?;
    let ok = |s: u64| asp_bound(kind, &p.with_s(s)).map(|v| v <= gamma);
    let mut hi = 1;
    while !ok(hi)? {
        if hi >= MAX_SAMPLES {
            return Err(AnalysisError::Unreachable { gamma });
        }
        hi *= 2;
    }
    // bound(lo) > gamma >= bound(hi)
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(1);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let direct = -0.124 * 0.124f64.ln() / 2f64.ln() - 0.876 * 0.876f64.ln() / 2f64.ln();
        assert!((binary_entropy(0.124).unwrap() - direct).abs() < 1e-15);
        assert!((binary_entropy(0.124).unwrap() - 0.54076).abs() < 1e-4);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn single_player_terms_coincide() {
        // with m = 1 both first terms are (1-α)^s and t2 = 2^{b(α)n}·(1-α)^s
        let p = BoundParams::single(0.3, 16, 1, 10);
        assert!((p.single_player_acceptance() - 0.7f64.powi(10)).abs() < 1e-15);
        assert_eq!(p.any_player_acceptance(), p.single_player_acceptance());
        assert_eq!(asp_bound_original(&p).unwrap(), asp_bound_recomputed(&p).unwrap());
    }

    #[test]
    fn small_probabilities_keep_precision() {
        // x = (1-α)^s ≈ 1e-9 with m = 1000
        let alpha = 1.0 - 1e-9f64.powf(1.0 / 20.0);
        let p = BoundParams::single(alpha, 10, 1000, 20);
        let x = p.single_player_acceptance();
        let y = p.any_player_acceptance();
        assert!(((y - 1000.0 * x) / (1000.0 * x)).abs() < 1e-6);
    }

    #[test]
    fn min_samples_brackets_target() {
        let p = BoundParams::single(0.47, 4096, 1024, 0);
        for kind in [BoundKind::Original, BoundKind::Recomputed] {
            let s = min_samples(kind, 1e-5, &p).unwrap();
            assert!(asp_bound(kind, &p.with_s(s)).unwrap() <= 1e-5);
            assert!(asp_bound(kind, &p.with_s(s - 1)).unwrap() > 1e-5);
        }
        assert!(min_samples(BoundKind::Original, 1.0, &p).is_err());
    }
}
