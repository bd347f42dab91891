//! Peeling decoder over the erasure channel and stopping-set primitives.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::encode::row_sum;
use super::{CodeError, LayerWord, SparseParityMatrix, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoppingSetReport {
    pub positions: Vec<usize>,
    pub is_stopping: bool,
    pub size_ratio: f64,
}

impl StoppingSetReport {
    pub fn new(h: &SparseParityMatrix, mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        let is_stopping = !positions.is_empty() && stopping_mask(h, &positions);
        let size_ratio = positions.len() as f64 / h.n_cols() as f64;
        Self {
            positions,
            is_stopping,
            size_ratio,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PeelOutcome {
    Decoded(LayerWord),
    Stuck(StoppingSetReport),
    Inconsistent(Vec<usize>),
}

/// Runs the peeling schedule on the erasure pattern `erased`.
///
/// Rows with exactly one erased member are resolved in ascending row order
/// within a sweep; rows that become resolvable at a lower index than the
/// current one wait for the next sweep. `on_solve(row, position)` is called
/// for each recovery and may abort the schedule. On completion `erased`
/// holds the residual set.
pub fn peel_schedule<F>(h: &SparseParityMatrix, erased: &mut [bool], mut on_solve: F) -> ControlFlow<()>
where
    F: FnMut(usize, usize) -> ControlFlow<()>,
{
    let mut count = vec![0u32; h.n_rows()];
    for (j, _) in erased.iter().enumerate().filter(|(_, &e)| e) {
        for &i in h.col(j) {
            count[i] += 1;
        }
    }
    let mut current: BinaryHeap<Reverse<usize>> = (0..h.n_rows())
        .filter(|&i| count[i] == 1)
        .map(Reverse)
        .collect();
    let mut next = BinaryHeap::new();
    loop {
        let Some(Reverse(i)) = current.pop() else {
            if next.is_empty() {
                return ControlFlow::Continue(());
            }
            std::mem::swap(&mut current, &mut next);
            continue;
        };
        if count[i] != 1 {
            continue;
        }
        let j = *h
            .row(i)
            .iter()
            .find(|&&j| erased[j])
            .expect("row count says one erasure");
        on_solve(i, j)?;
        erased[j] = false;
        for &i2 in h.col(j) {
            count[i2] -= 1;
            if count[i2] == 1 {
                if i2 > i {
                    current.push(Reverse(i2));
                } else {
                    next.push(Reverse(i2));
                }
            }
        }
    }
}

/// Structural peeling: returns the residual erased positions (empty when
/// the pattern is recoverable).
pub fn peel_residual(h: &SparseParityMatrix, erased_positions: &[usize]) -> Vec<usize> {
    let mut erased = vec![false; h.n_cols()];
    for &j in erased_positions {
        erased[j] = true;
    }
    let _ = peel_schedule(h, &mut erased, |_, _| ControlFlow::Continue(()));
    erased_positions.iter().copied().filter(|&j| erased[j]).collect()
}

/// Peeling decoder on symbols. Rows that are fully known but unsatisfied
/// after peeling are reported as `Inconsistent`, which takes priority over
/// `Stuck`.
pub fn peel_decode(h: &SparseParityMatrix, word: &LayerWord) -> Result<PeelOutcome, CodeError> {
    if word.len() != h.n_cols() {
        return Err(CodeError::Dimension {
            expected: h.n_cols(),
            found: word.len(),
        });
    }
    let mut out = word.clone();
    let mut erased: Vec<bool> = (0..word.len()).map(|j| word.is_erased(j)).collect();
    let _ = peel_schedule(h, &mut erased, |i, j| {
        let mut v = Symbol::zero(out.symbol_len());
        for &j2 in h.row(i) {
            if j2 != j {
                v.xor_assign(out.get(j2).expect("other members known"));
            }
        }
        out.set(j, v);
        ControlFlow::Continue(())
    });
    let failed: Vec<usize> = (0..h.n_rows())
        .filter(|&i| row_sum(h, &out, i).is_some_and(|s| !s.is_zero()))
        .collect();
    if !failed.is_empty() {
        return Ok(PeelOutcome::Inconsistent(failed));
    }
    let residual: Vec<usize> = (0..out.len()).filter(|&j| erased[j]).collect();
    if residual.is_empty() {
        Ok(PeelOutcome::Decoded(out))
    } else {
        Ok(PeelOutcome::Stuck(StoppingSetReport::new(h, residual)))
    }
}

fn stopping_mask(h: &SparseParityMatrix, positions: &[usize]) -> bool {
    let mut hits = std::collections::HashMap::<usize, u32>::new();
    for &j in positions {
        for &i in h.col(j) {
            *hits.entry(i).or_default() += 1;
        }
    }
    hits.values().all(|&c| c != 1)
}

/// True iff no row meets `positions` exactly once.
pub fn is_stopping_set(h: &SparseParityMatrix, positions: &[usize]) -> Result<bool, CodeError> {
    if positions.is_empty() {
        return Err(CodeError::EmptySet);
    }
    if let Some(&j) = positions.iter().find(|&&j| j >= h.n_cols()) {
        return Err(CodeError::Index(j));
    }
    let mut p = positions.to_vec();
    p.sort_unstable();
    p.dedup();
    Ok(stopping_mask(h, &p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repetition() -> SparseParityMatrix {
        SparseParityMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    fn zeros(n: usize) -> LayerWord {
        LayerWord::from_symbols(vec![Symbol::zero(1); n]).unwrap()
    }

    #[test]
    fn no_erasures_is_identity() {
        let w = zeros(3);
        assert_eq!(peel_decode(&repetition(), &w).unwrap(), PeelOutcome::Decoded(w));
    }

    #[test]
    fn chain_peels_in_order() {
        let h = repetition();
        let w = zeros(3).with_erasures([1, 2]);
        let mut order = Vec::new();
        let mut erased = vec![false, true, true];
        let _ = peel_schedule(&h, &mut erased, |i, j| {
            order.push((i, j));
            ControlFlow::Continue(())
        });
        assert_eq!(order, vec![(0, 1), (1, 2)]);
        assert_eq!(peel_decode(&h, &w).unwrap(), PeelOutcome::Decoded(zeros(3)));
    }

    #[test]
    fn everything_erased_is_stuck() {
        let h = repetition();
        let w = zeros(3).with_erasures([0, 1, 2]);
        match peel_decode(&h, &w).unwrap() {
            PeelOutcome::Stuck(r) => {
                assert_eq!(r.positions, vec![0, 1, 2]);
                assert!(r.is_stopping);
                assert_eq!(r.size_ratio, 1.0);
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn later_row_waits_for_next_sweep() {
        // row 1 is resolvable first; it unlocks row 0, which runs in sweep two
        let h = SparseParityMatrix::from_rows(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        let mut erased = vec![false, true, true, false];
        let mut order = Vec::new();
        let _ = peel_schedule(&h, &mut erased, |i, j| {
            order.push((i, j));
            ControlFlow::Continue(())
        });
        assert_eq!(order, vec![(1, 2), (0, 1)]);
    }

    #[test]
    fn inconsistent_row_reported() {
        let h = repetition();
        let mut w = zeros(3);
        w.set(0, Symbol(vec![1]));
        w.erase(2);
        // row 1 solves position 2 from position 1; row 0 stays violated
        assert_eq!(peel_decode(&h, &w).unwrap(), PeelOutcome::Inconsistent(vec![0]));
    }

    #[test]
    fn stopping_set_predicate() {
        let h = repetition();
        assert!(is_stopping_set(&h, &[0, 1, 2]).unwrap());
        assert!(!is_stopping_set(&h, &[1, 2]).unwrap());
        assert!(!is_stopping_set(&h, &[1]).unwrap());
        assert!(matches!(is_stopping_set(&h, &[]), Err(CodeError::EmptySet)));
    }
}
