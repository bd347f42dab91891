//! The data availability attack game: an adversary commits to a block and
//! withholds part of it, `m` light nodes each sample `s` coded symbols, and
//! an oracle full node tries to decode what was revealed.

mod round;

pub use round::{
    adversary_hide_set, estimate_asp, play_round, poison_validity, AspEstimate, Challenge, Oracle, TreeInstance,
    POISON_MARKER,
};

use serde::{Deserialize, Serialize};

use crate::codes::CodeError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdversaryStrategy {
    /// Publishes everything.
    HonestAvailable,
    /// Hides a uniformly random `⌈αn⌉`-subset.
    WeakRandom { alpha: f64 },
    /// Hides `⌈αn⌉` positions containing a stopping set. With
    /// `assume_undecodable` the hide set is uniform and the oracle is
    /// decreed unable to decode, which models an adversary that always
    /// finds a stopping set of that size.
    StrongStoppingSet {
        alpha: f64,
        #[serde(default)]
        assume_undecodable: bool,
    },
    /// Hides exactly the given positions.
    ExplicitHideSet { positions: Vec<usize> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    #[default]
    WithReplacement,
    WithoutReplacement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub m: usize,
    pub s: usize,
    pub n: usize,
    pub adversary: AdversaryStrategy,
    #[serde(default)]
    pub sampling: Sampling,
    pub trials: usize,
    pub seed: u64,
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), GameError> {
        if self.m == 0 || self.s == 0 || self.n == 0 || self.trials == 0 {
            return Err(GameError::Config("m, s, n and trials must be positive".into()));
        }
        if self.sampling == Sampling::WithoutReplacement && self.s > self.n {
            return Err(GameError::Config(format!("s={} exceeds n={} without replacement", self.s, self.n)));
        }
        match &self.adversary {
            AdversaryStrategy::WeakRandom { alpha } | AdversaryStrategy::StrongStoppingSet { alpha, .. }
                if !(0.0..=1.0).contains(alpha) =>
            {
                Err(GameError::Config(format!("alpha={alpha} outside [0,1]")))
            }
            AdversaryStrategy::ExplicitHideSet { positions } if positions.iter().any(|&j| j >= self.n) => {
                Err(GameError::Config("hide set outside [0,n)".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub accepted_players: usize,
    pub oracle_decoded: bool,
    pub fraud_proof_emitted: bool,
    pub adversary_success: bool,
    pub soundness_violated: bool,
}

impl GameResult {
    /// The adversary wins when some player accepts while the oracle can
    /// neither decode nor prove fraud.
    pub fn adjudicate(accepted_players: usize, oracle_decoded: bool, fraud_proof_emitted: bool) -> Self {
        let adversary_success = accepted_players >= 1 && !oracle_decoded && !fraud_proof_emitted;
        Self {
            accepted_players,
            oracle_decoded,
            fraud_proof_emitted,
            adversary_success,
            soundness_violated: adversary_success,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("invalid game configuration: {0}")]
    Config(String),
    #[error("no stopping set of size at most {wanted} was found (smallest found: {found:?})")]
    NoStoppingSet { wanted: usize, found: Option<usize> },
    #[error("oracle does not match the configuration: {0}")]
    Oracle(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Fraud(#[from] crate::fraud::FraudError),
}
