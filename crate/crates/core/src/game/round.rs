use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AdversaryStrategy, GameConfig, GameError, GameResult, Sampling};
use crate::cmt::{merkle_root_plain, CodedMerkleTree, Digest};
use crate::codes::{find_small_stopping_set, peel_residual, LayerWord, SparseParityMatrix, Symbol};
use crate::fraud::{hash_aware_decode, DecodeOutcome};
use crate::rng::stream_rng;

/// Byte string whose presence makes a block invalid under the default
/// validity predicate.
pub const POISON_MARKER: &[u8] = b"POISON";

/// Default validity predicate: a block is valid unless some symbol contains
/// [`POISON_MARKER`].
pub fn poison_validity(block: &[Symbol]) -> bool {
    !block
        .iter()
        .any(|s| s.as_bytes().windows(POISON_MARKER.len()).any(|w| w == POISON_MARKER))
}

/// What the players are challenged with: the plain Merkle root of the
/// block, the coded tree root, and the validity verdict on the block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Challenge {
    pub h_u: Digest,
    pub h_c: Vec<Digest>,
    pub validity: bool,
}

/// A committed tree, possibly incorrectly coded, with the block it claims.
#[derive(Clone, Debug)]
pub struct TreeInstance {
    pub tree: CodedMerkleTree,
    pub challenge: Challenge,
}

impl TreeInstance {
    pub fn new(tree: CodedMerkleTree, block: &[Symbol]) -> Self {
        let challenge = Challenge {
            h_u: merkle_root_plain(block).unwrap_or(Digest([0; 32])),
            h_c: tree.root().to_vec(),
            validity: poison_validity(block),
        };
        Self { tree, challenge }
    }
}

/// How the oracle full node judges the revealed base symbols.
#[derive(Clone, Debug)]
pub enum Oracle {
    /// Erasure-only peeling of the base code on the unrevealed positions.
    Structural(Arc<SparseParityMatrix>),
    /// Hash-aware decoding of a committed tree. The layers above the base
    /// are given to the oracle in full; the base layer holds exactly the
    /// revealed symbols.
    Tree(Arc<TreeInstance>),
}

impl Oracle {
    pub fn n(&self) -> usize {
        match self {
            Oracle::Structural(h) => h.n_cols(),
            Oracle::Tree(t) => t.tree.params().layer(0).n,
        }
    }

    pub fn matrix(&self) -> &SparseParityMatrix {
        match self {
            Oracle::Structural(h) => h,
            Oracle::Tree(t) => t.tree.params().layer(0).matrix(),
        }
    }

    /// Returns `(decoded, fraud_proof_emitted)`.
    fn judge(&self, revealed: &[bool]) -> Result<(bool, bool), GameError> {
        match self {
            Oracle::Structural(h) => {
                let erased: Vec<usize> = (0..revealed.len()).filter(|&j| !revealed[j]).collect();
                Ok((peel_residual(h, &erased).is_empty(), false))
            }
            Oracle::Tree(inst) => {
                let tree = &inst.tree;
                let mut words = tree.layer_words();
                let base = &words[0];
                words[0] = LayerWord::new(
                    base.symbol_len(),
                    (0..base.len())
                        .map(|j| revealed[j].then(|| tree.layer(0)[j].clone()))
                        .collect(),
                )?;
                match hash_aware_decode(tree.params(), &inst.challenge.h_c, &words)? {
                    DecodeOutcome::FullyDecoded(_) => Ok((true, false)),
                    DecodeOutcome::Fraud(_) => Ok((false, true)),
                    DecodeOutcome::Unavailable(_) => Ok((false, false)),
                }
            }
        }
    }
}

fn hide_count(alpha: f64, n: usize) -> usize {
    ((alpha * n as f64).ceil() as usize).min(n)
}

/// Per-configuration hide-set recipe, prepared once.
enum HidePlan {
    Empty,
    Uniform(usize),
    Padded { core: Vec<usize>, size: usize },
    Fixed(Vec<usize>),
}

impl HidePlan {
    fn new(strategy: &AdversaryStrategy, h: Option<&SparseParityMatrix>, n: usize, seed: u64) -> Result<Self, GameError> {
        Ok(match strategy {
            AdversaryStrategy::HonestAvailable => HidePlan::Empty,
            AdversaryStrategy::WeakRandom { alpha } => HidePlan::Uniform(hide_count(*alpha, n)),
            AdversaryStrategy::StrongStoppingSet {
                alpha,
                assume_undecodable: true,
            } => HidePlan::Uniform(hide_count(*alpha, n)),
            AdversaryStrategy::StrongStoppingSet { alpha, .. } => {
                let size = hide_count(*alpha, n);
                if size == 0 {
                    return Ok(HidePlan::Empty);
                }
                let h = h.ok_or_else(|| GameError::Oracle("a stopping-set adversary needs the code".into()))?;
                let found = find_small_stopping_set(h, 16, seed);
                match found {
                    Some(r) if r.positions.len() <= size => HidePlan::Padded {
                        core: r.positions,
                        size,
                    },
                    other => {
                        return Err(GameError::NoStoppingSet {
                            wanted: size,
                            found: other.map(|r| r.positions.len()),
                        })
                    }
                }
            }
            AdversaryStrategy::ExplicitHideSet { positions } => {
                let mut p = positions.clone();
                p.sort_unstable();
                p.dedup();
                HidePlan::Fixed(p)
            }
        })
    }

    fn draw(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut out = match self {
            HidePlan::Empty => Vec::new(),
            HidePlan::Uniform(size) => rand::seq::index::sample(rng, n, *size).into_vec(),
            HidePlan::Fixed(p) => p.clone(),
            HidePlan::Padded { core, size } => {
                let mut taken = vec![false; n];
                for &j in core {
                    taken[j] = true;
                }
                let rest: Vec<usize> = (0..n).filter(|&j| !taken[j]).collect();
                let extra = rand::seq::index::sample(rng, rest.len(), size - core.len());
                core.iter().copied().chain(extra.into_iter().map(|i| rest[i])).collect()
            }
        };
        out.sort_unstable();
        out
    }
}

/// Draws the adversary's hide set for one round. Stopping-set strategies
/// (without `assume_undecodable`) need the code matrix.
pub fn adversary_hide_set(
    strategy: &AdversaryStrategy,
    h: Option<&SparseParityMatrix>,
    n: usize,
    seed: u64,
) -> Result<Vec<usize>, GameError> {
    let plan = HidePlan::new(strategy, h, n, seed)?;
    Ok(plan.draw(n, &mut stream_rng(seed, 0)))
}

/// A prepared game: configuration, oracle and hide-set recipe.
struct Game<'a> {
    config: &'a GameConfig,
    oracle: &'a Oracle,
    plan: HidePlan,
}

impl<'a> Game<'a> {
    fn new(config: &'a GameConfig, oracle: &'a Oracle) -> Result<Self, GameError> {
        config.validate()?;
        if oracle.n() != config.n {
            return Err(GameError::Oracle(format!("oracle code length {} != n={}", oracle.n(), config.n)));
        }
        let plan = HidePlan::new(&config.adversary, Some(oracle.matrix()), config.n, config.seed)?;
        Ok(Self { config, oracle, plan })
    }

    fn play(&self, trial: usize) -> Result<GameResult, GameError> {
        let c = self.config;
        let mut rng = stream_rng(c.seed, trial as u64);
        let mut hidden = vec![false; c.n];
        for j in self.plan.draw(c.n, &mut rng) {
            hidden[j] = true;
        }
        let mut revealed = vec![false; c.n];
        let mut accepted = 0;
        for _ in 0..c.m {
            let queries: Vec<usize> = match c.sampling {
                Sampling::WithReplacement => (0..c.s).map(|_| rng.random_range(0..c.n)).collect(),
                Sampling::WithoutReplacement => rand::seq::index::sample(&mut rng, c.n, c.s).into_vec(),
            };
            let mut all_answered = true;
            for j in queries {
                if hidden[j] {
                    all_answered = false;
                } else {
                    revealed[j] = true;
                }
            }
            accepted += usize::from(all_answered);
        }
        let (decoded, fraud) = match &c.adversary {
            AdversaryStrategy::HonestAvailable => (true, false),
            AdversaryStrategy::StrongStoppingSet {
                assume_undecodable: true,
                ..
            } => (false, false),
            _ => self.oracle.judge(&revealed)?,
        };
        let r = GameResult::adjudicate(accepted, decoded, fraud);
        assert_eq!(r.adversary_success, accepted >= 1 && !decoded && !fraud);
        assert_eq!(r.soundness_violated, r.adversary_success);
        Ok(r)
    }
}

/// Plays round number `trial` of the configured game.
pub fn play_round(config: &GameConfig, oracle: &Oracle, trial: usize) -> Result<GameResult, GameError> {
    Game::new(config, oracle)?.play(trial)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AspEstimate {
    pub gamma_hat: f64,
    pub stderr: f64,
    pub trials: usize,
    pub successes: usize,
}

/// Monte-Carlo estimate of the adversary's success probability.
pub fn estimate_asp(config: &GameConfig, oracle: &Oracle) -> Result<AspEstimate, GameError> {
    if config.trials < 100 {
        return Err(GameError::Config("estimate_asp needs at least 100 trials".into()));
    }
    let game = Game::new(config, oracle)?;
    let successes = (0..config.trials)
        .into_par_iter()
        .map(|t| game.play(t).map(|r| usize::from(r.adversary_success)))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p = successes as f64 / config.trials as f64;
    Ok(AspEstimate {
        gamma_hat: p,
        stderr: (p * (1.0 - p) / config.trials as f64).sqrt(),
        trials: config.trials,
        successes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repetition() -> Arc<SparseParityMatrix> {
        Arc::new(SparseParityMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2]]).unwrap())
    }

    fn config(adversary: AdversaryStrategy) -> GameConfig {
        GameConfig {
            m: 3,
            s: 2,
            n: 3,
            adversary,
            sampling: Sampling::WithReplacement,
            trials: 200,
            seed: 1,
        }
    }

    #[test]
    fn honest_adversary_never_wins() {
        let o = Oracle::Structural(repetition());
        let c = config(AdversaryStrategy::HonestAvailable);
        let r = play_round(&c, &o, 0).unwrap();
        assert_eq!(r.accepted_players, 3);
        assert!(r.oracle_decoded && !r.adversary_success);
        assert_eq!(estimate_asp(&c, &o).unwrap().gamma_hat, 0.0);
    }

    #[test]
    fn hiding_everything_gets_no_acceptance() {
        let o = Oracle::Structural(repetition());
        let c = config(AdversaryStrategy::ExplicitHideSet { positions: vec![0, 1, 2] });
        let r = play_round(&c, &o, 0).unwrap();
        assert_eq!(r.accepted_players, 0);
        assert!(!r.adversary_success);
    }

    #[test]
    fn strong_hide_set_on_repetition_code() {
        let h = repetition();
        let s = AdversaryStrategy::StrongStoppingSet {
            alpha: 1.0,
            assume_undecodable: false,
        };
        assert_eq!(adversary_hide_set(&s, Some(&h), 3, 0).unwrap(), vec![0, 1, 2]);
        let too_small = AdversaryStrategy::StrongStoppingSet {
            alpha: 0.5,
            assume_undecodable: false,
        };
        assert!(matches!(
            adversary_hide_set(&too_small, Some(&h), 3, 0),
            Err(GameError::NoStoppingSet { wanted: 2, found: Some(3) })
        ));
        assert!(adversary_hide_set(&AdversaryStrategy::WeakRandom { alpha: 0.0 }, None, 3, 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn poison_marker_is_detected() {
        assert!(poison_validity(&[Symbol(b"fine".to_vec())]));
        assert!(!poison_validity(&[Symbol(b"xxPOISONxx".to_vec())]));
    }

    #[test]
    fn too_few_trials_rejected() {
        let mut c = config(AdversaryStrategy::HonestAvailable);
        c.trials = 99;
        assert!(estimate_asp(&c, &Oracle::Structural(repetition())).is_err());
    }
}
