use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use spar_core::codes::{
    estimate_erasure_threshold, failure_crossing, generate_ensemble_code, EnsembleParams, Rate, SparseParityMatrix,
};
use spar_core::game::{estimate_asp, AdversaryStrategy, GameConfig, Oracle, Sampling};

use crate::report::{artifact_json, Output};

#[derive(Args, Debug, Serialize)]
pub struct EnsembleArgs {
    /// Code length.
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// Code rate, as a fraction or decimal.
    #[arg(long, default_value = "1/4")]
    pub rate: Rate,
    #[arg(long, default_value_t = 6)]
    pub col_weight: usize,
    #[arg(long, default_value_t = 8)]
    pub row_weight: usize,
}

impl EnsembleArgs {
    fn params(&self, seed: u64) -> EnsembleParams {
        EnsembleParams {
            n: self.n,
            rate: self.rate,
            col_weight: self.col_weight,
            row_weight: self.row_weight,
            seed,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenCodeArgs {
    #[command(flatten)]
    pub code: EnsembleArgs,
    /// Alist output; metadata goes to the same path with `.json` appended.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct CodeSummary {
    n: usize,
    rows: usize,
    dimension: usize,
    edges: usize,
    max_row_weight: usize,
    max_col_weight: usize,
    alist: PathBuf,
}

fn summarize(h: &SparseParityMatrix, alist: PathBuf) -> CodeSummary {
    CodeSummary {
        n: h.n_cols(),
        rows: h.n_rows(),
        dimension: h.dimension(),
        edges: h.edge_count(),
        max_row_weight: h.max_row_weight(),
        max_col_weight: h.max_col_weight(),
        alist,
    }
}

pub fn gen_code(a: GenCodeArgs, seed: u64, out: &Output) -> Result<()> {
    let params = a.code.params(seed);
    let h = generate_ensemble_code(&params)?;
    fs::write(&a.out, h.to_alist()).with_context(|| format!("writing {}", a.out.display()))?;
    let summary = summarize(&h, a.out.clone());
    let meta = PathBuf::from(format!("{}.json", a.out.display()));
    fs::write(&meta, artifact_json("gen-code", &params, &summary)?)
        .with_context(|| format!("writing {}", meta.display()))?;
    out.emit("gen-code", &params, &summary, None)
}

/// Code used by the simulated oracle: an alist file, or an ensemble draw.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeChoice {
    #[serde(default = "quarter")]
    pub rate: Rate,
    #[serde(default = "six")]
    pub col_weight: usize,
    #[serde(default = "eight")]
    pub row_weight: usize,
    /// Defaults to the game seed.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alist: Option<PathBuf>,
}

fn quarter() -> Rate {
    Rate::new(1, 4).expect("valid rate")
}
fn six() -> usize {
    6
}
fn eight() -> usize {
    8
}

impl Default for CodeChoice {
    fn default() -> Self {
        Self {
            rate: quarter(),
            col_weight: 6,
            row_weight: 8,
            seed: None,
            alist: None,
        }
    }
}

/// Game configuration file: a `GameConfig` whose seed may be omitted, plus
/// an optional `code` section.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateFile {
    pub m: usize,
    pub s: usize,
    pub n: usize,
    pub adversary: AdversaryStrategy,
    #[serde(default)]
    pub sampling: Sampling,
    pub trials: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub code: CodeChoice,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Game configuration as JSON.
    #[arg(long)]
    pub config: PathBuf,
}

pub fn simulate(a: SimulateArgs, default_seed: u64, out: &Output) -> Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let mut file: SimulateFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.config.display()))?;
    let seed = *file.seed.get_or_insert(default_seed);
    let code_seed = *file.code.seed.get_or_insert(seed);
    let h = match &file.code.alist {
        Some(p) => SparseParityMatrix::from_alist(
            &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        )?,
        None => generate_ensemble_code(&EnsembleParams {
            n: file.n,
            rate: file.code.rate,
            col_weight: file.code.col_weight,
            row_weight: file.code.row_weight,
            seed: code_seed,
        })?,
    };
    let config = GameConfig {
        m: file.m,
        s: file.s,
        n: file.n,
        adversary: file.adversary.clone(),
        sampling: file.sampling,
        trials: file.trials,
        seed,
    };
    let est = estimate_asp(&config, &Oracle::Structural(Arc::new(h)))?;
    out.emit("simulate", &file, &est, None)
}

#[derive(Args, Debug, Serialize)]
pub struct ThresholdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub code: EnsembleArgs,
    /// Erasure trials per fraction.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.40)]
    pub from: f64,
    #[arg(long, default_value_t = 0.55)]
    pub to: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(skip)]
    pub seed: u64,
}

pub fn threshold(mut a: ThresholdArgs, seed: u64, out: &Output) -> Result<()> {
    a.seed = seed;
    anyhow::ensure!(a.step > 0.0 && a.from <= a.to, "need step > 0 and from <= to");
    let h = generate_ensemble_code(&a.code.params(seed))?;
    let points = ((a.to - a.from) / a.step + 1e-9).floor() as usize + 1;
    let fractions: Vec<f64> = (0..points).map(|i| ((a.from + i as f64 * a.step) * 1e9).round() / 1e9)
        .collect();
    let curve = estimate_erasure_threshold(&h, &fractions, a.trials, seed);
    let mut csv = String::from("fraction,erasures,trials,failures,failure_rate\n");
    for p in &curve {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.fraction, p.erasures, p.trials, p.failures, p.failure_rate
        ));
    }
    #[derive(Serialize)]
    struct Curve<'a> {
        crossing: Option<f64>,
        points: &'a [spar_core::codes::ThresholdPoint],
    }
    let r = Curve {
        crossing: failure_crossing(&curve),
        points: &curve,
    };
    out.emit("threshold", &a, &r, Some(csv))
}
