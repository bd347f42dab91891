//! Stopping-set search and erasure-threshold estimation.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::peel::{peel_residual, StoppingSetReport};
use super::SparseParityMatrix;
use crate::rng::{point_stream, stream_rng};

/// Largest code length for which the minimum stopping set is found by
/// enumerating subsets.
pub const EXHAUSTIVE_MAX_N: usize = 24;

/// Minimum stopping set by enumerating subsets in order of size. Ties are
/// broken by the smallest bitmask. Returns `None` if no nonempty stopping
/// set exists.
pub fn exhaustive_min_stopping_set(h: &SparseParityMatrix) -> Option<Vec<usize>> {
    let n = h.n_cols();
    assert!(n <= EXHAUSTIVE_MAX_N, "exhaustive search limited to n <= {EXHAUSTIVE_MAX_N}");
    let masks: Vec<u32> = h
        .rows()
        .iter()
        .map(|row| row.iter().fold(0u32, |m, &j| m | 1 << j))
        .collect();
    let stopping = |s: u32| masks.iter().all(|&m| (m & s).count_ones() != 1);
    let limit = 1u64 << n;
    for size in 1..=n {
        let mut s: u64 = (1 << size) - 1;
        while s < limit {
            if stopping(s as u32) {
                return Some((0..n).filter(|&j| s >> j & 1 == 1).collect());
            }
            // next subset of the same size
            let c = s & s.wrapping_neg();
            let r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
    }
    None
}

/// Shrinks a stopping set by dropping members one at a time and keeping the
/// residual of peeling whenever it is still nonempty.
fn shrink(h: &SparseParityMatrix, set: Vec<usize>, rng: &mut impl rand::Rng) -> Vec<usize> {
    let mut s = set;
    let mut order = s.clone();
    order.shuffle(rng);
    for p in order {
        let Ok(idx) = s.binary_search(&p) else {
            continue;
        };
        let mut candidate = s.clone();
        candidate.remove(idx);
        if candidate.is_empty() {
            continue;
        }
        let res = peel_residual(h, &candidate);
        if !res.is_empty() {
            s = res;
        }
    }
    s
}

/// One randomized search: erase a random permutation's shortest prefix that
/// stalls the decoder, then shrink the residual.
fn random_stopping_set(h: &SparseParityMatrix, rng: &mut impl rand::Rng) -> Option<Vec<usize>> {
    let n = h.n_cols();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let residual_of = |len: usize| {
        let mut prefix = perm[..len].to_vec();
        prefix.sort_unstable();
        peel_residual(h, &prefix)
    };
    if residual_of(n).is_empty() {
        return None;
    }
    let (mut lo, mut hi) = (0, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if residual_of(mid).is_empty() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(shrink(h, residual_of(hi), rng))
}

/// Searches for a small stopping set. Exact for `n <= 24`; otherwise runs
/// `trials` randomized searches and returns the smallest set found.
pub fn find_small_stopping_set(h: &SparseParityMatrix, trials: usize, seed: u64) -> Option<StoppingSetReport> {
    if h.n_cols() <= EXHAUSTIVE_MAX_N {
        return exhaustive_min_stopping_set(h).map(|p| StoppingSetReport::new(h, p));
    }
    (0..trials.max(1))
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = stream_rng(seed, t as u64);
            random_stopping_set(h, &mut rng).map(|s| (s.len(), t, s))
        })
        .min()
        .map(|(_, _, s)| StoppingSetReport::new(h, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPoint {
    pub fraction: f64,
    pub erasures: usize,
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
}

/// For each fraction `f`, erases `⌊f·n⌋` uniformly chosen positions per
/// trial and records how often peeling fails.
pub fn estimate_erasure_threshold(
    h: &SparseParityMatrix,
    fractions: &[f64],
    trials_per_point: usize,
    seed: u64,
) -> Vec<ThresholdPoint> {
    let n = h.n_cols();
    fractions
        .iter()
        .enumerate()
        .map(|(pi, &f)| {
            let erasures = ((f * n as f64).floor() as usize).min(n);
            let failures = (0..trials_per_point)
                .into_par_iter()
                .filter(|&t| {
                    let mut rng = stream_rng(seed, point_stream(pi, t));
                    let mut e = rand::seq::index::sample(&mut rng, n, erasures).into_vec();
                    e.sort_unstable();
                    !peel_residual(h, &e).is_empty()
                })
                .count();
            ThresholdPoint {
                fraction: f,
                erasures,
                trials: trials_per_point,
                failures,
                failure_rate: if trials_per_point == 0 {
                    0.0
                } else {
                    failures as f64 / trials_per_point as f64
                },
            }
        })
        .collect()
}

/// The fraction where the failure curve first reaches 50%, by linear
/// interpolation between neighbouring points.
pub fn failure_crossing(curve: &[ThresholdPoint]) -> Option<f64> {
    let first = curve.first()?;
    if first.failure_rate >= 0.5 {
        return Some(first.fraction);
    }
    curve.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        (a.failure_rate < 0.5 && b.failure_rate >= 0.5).then(|| {
            a.fraction + (b.fraction - a.fraction) * (0.5 - a.failure_rate) / (b.failure_rate - a.failure_rate)
        })
    })
}
