use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::proof::{FraudKind, FraudMember, FraudProof};
use super::FraudError;
use crate::cmt::{build_proof, digest_slot, hash_symbol, CmtParams, Digest};
use crate::codes::{peel_residual, peel_schedule, row_sum, LayerWord, StoppingSetReport, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerStoppingSet {
    pub layer: usize,
    pub report: StoppingSetReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DecodeOutcome {
    /// The systematic part of the base layer.
    FullyDecoded(Vec<Symbol>),
    Fraud(FraudProof),
    /// Residual erasures of every layer that could not be completed, top
    /// layer first.
    Unavailable(Vec<LayerStoppingSet>),
}

/// Decodes a tree from the root down.
///
/// For each layer the digest expected at every position comes from the root
/// (top layer) or from the already decoded layer above. Supplied symbols
/// that do not match are discarded as erasures. Each symbol recovered by
/// peeling is checked against its expected digest; a mismatch yields a
/// hash-inconsistency proof. A fully known check that fails yields a
/// parity-check proof (lowest such row). Fraud takes priority over
/// unavailability. Once a layer cannot be completed, the layers below are
/// peeled structurally only, to report their residual sets.
pub fn hash_aware_decode(params: &CmtParams, root: &[Digest], layer_words: &[LayerWord]) -> Result<DecodeOutcome, FraudError> {
    let top = params.top();
    if root.len() != params.layer(top).n {
        return Err(FraudError::Shape(format!("root has {} digests, expected {}", root.len(), params.layer(top).n)));
    }
    if layer_words.len() != params.layer_count() {
        return Err(FraudError::Shape(format!(
            "{} layers supplied, expected {}",
            layer_words.len(),
            params.layer_count()
        )));
    }
    for (i, w) in layer_words.iter().enumerate() {
        if w.len() != params.layer(i).n {
            return Err(FraudError::Shape(format!("layer {i} has length {}, expected {}", w.len(), params.layer(i).n)));
        }
        if i > 0 && w.symbol_len() != params.upper_symbol_len() {
            return Err(FraudError::Shape(format!(
                "layer {i} symbols are {} bytes, expected {}",
                w.symbol_len(),
                params.upper_symbol_len()
            )));
        }
    }

    let mut work = layer_words.to_vec();
    let mut stuck = Vec::new();
    for i in (0..=top).rev() {
        let h = params.layer(i).matrix();
        if !stuck.is_empty() {
            let residual = peel_residual(h, &work[i].erased_positions());
            if !residual.is_empty() {
                stuck.push(LayerStoppingSet {
                    layer: i,
                    report: StoppingSetReport::new(h, residual),
                });
            }
            continue;
        }
        let expected: Vec<Digest> = if i == top {
            root.to_vec()
        } else {
            (0..params.layer(i).n)
                .map(|j| {
                    let (c, slot) = params.cell_of(i, j);
                    digest_slot(work[i + 1].get(c).expect("layer above is complete"), slot)
                })
                .collect()
        };
        let word = &mut work[i];
        for (j, exp) in expected.iter().enumerate() {
            if word.get(j).is_some_and(|s| hash_symbol(i, s.as_bytes()) != *exp) {
                word.erase(j);
            }
        }

        let mut erased: Vec<bool> = (0..word.len()).map(|j| word.is_erased(j)).collect();
        let mut mismatch = None;
        let _ = peel_schedule(h, &mut erased, |row, j| {
            let mut v = Symbol::zero(word.symbol_len());
            for &j2 in h.row(row) {
                if j2 != j {
                    v.xor_assign(word.get(j2).expect("other members known"));
                }
            }
            if hash_symbol(i, v.as_bytes()) != expected[j] {
                mismatch = Some((row, j));
                return ControlFlow::Break(());
            }
            word.set(j, v);
            ControlFlow::Continue(())
        });
        if let Some((row, j)) = mismatch {
            return Ok(DecodeOutcome::Fraud(fraud_proof(
                params,
                &work,
                FraudKind::HashInconsistency,
                i,
                row,
                j,
                expected[j],
            )));
        }
        let word = &work[i];
        if let Some(row) = (0..h.n_rows()).find(|&r| row_sum(h, word, r).is_some_and(|s| !s.is_zero())) {
            let omitted = *h.row(row).last().expect("rows are nonempty");
            return Ok(DecodeOutcome::Fraud(fraud_proof(
                params,
                &work,
                FraudKind::ParityCheck,
                i,
                row,
                omitted,
                expected[omitted],
            )));
        }
        let residual: Vec<usize> = (0..erased.len()).filter(|&j| erased[j]).collect();
        if !residual.is_empty() {
            stuck.push(LayerStoppingSet {
                layer: i,
                report: StoppingSetReport::new(h, residual),
            });
        }
    }
    if !stuck.is_empty() {
        return Ok(DecodeOutcome::Unavailable(stuck));
    }
    let k = params.layer(0).k;
    let base = work.swap_remove(0).to_symbols().expect("base decoded");
    Ok(DecodeOutcome::FullyDecoded(base[..k].to_vec()))
}

fn fraud_proof(
    params: &CmtParams,
    work: &[LayerWord],
    kind: FraudKind,
    layer: usize,
    row: usize,
    omitted: usize,
    omitted_digest: Digest,
) -> FraudProof {
    let symbol_at = |l: usize, j: usize| work[l].get(j);
    let prove = |j| build_proof(params, symbol_at, layer, j).expect("layers above are complete");
    let members = params
        .layer(layer)
        .matrix()
        .row(row)
        .iter()
        .filter(|&&j| j != omitted)
        .map(|&j| FraudMember {
            index: j,
            symbol: work[layer].get(j).expect("member known").clone(),
            proof: prove(j),
        })
        .collect();
    FraudProof {
        kind,
        layer,
        row,
        members,
        omitted,
        omitted_digest,
        omitted_proof: prove(omitted),
    }
}
