use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use spar_core::analysis::{
    asp_bound, min_samples, reference_data, reproduce_table, total_download, Adversary, BoundKind, BoundParams,
    CostParams, TableId, TableReport,
};

use crate::report::Output;

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BoundArg {
    Original,
    Recomputed,
}

impl From<BoundArg> for BoundKind {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Original => BoundKind::Original,
            BoundArg::Recomputed => BoundKind::Recomputed,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryArg {
    Weak,
    Strong,
}

impl From<AdversaryArg> for Adversary {
    fn from(a: AdversaryArg) -> Self {
        match a {
            AdversaryArg::Weak => Adversary::Weak,
            AdversaryArg::Strong => Adversary::Strong,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ScenarioArgs {
    #[arg(long, value_enum, default_value_t = BoundArg::Recomputed)]
    pub bound: BoundArg,
    #[arg(long, value_enum, default_value_t = AdversaryArg::Weak)]
    pub adversary: AdversaryArg,
    /// Undecodable ratio; defaults to 0.47 (weak) or 0.124 (strong).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of light nodes.
    #[arg(long, default_value_t = 1024)]
    pub m: u64,
    /// Base-layer length.
    #[arg(long, default_value_t = 4096)]
    pub n: u64,
}

impl ScenarioArgs {
    fn resolve(&mut self) -> BoundParams {
        let alpha = *self
            .alpha
            .get_or_insert_with(|| reference_data().scenario.alpha(self.adversary.into()));
        BoundParams::single(alpha, self.n, self.m, 0)
    }
}

#[derive(Args, Debug, Serialize)]
#[group(id = "target", required = true, multiple = false, args = ["s", "gamma"])]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scenario: ScenarioArgs,
    /// Evaluate the bound at this many samples per node.
    #[arg(long)]
    pub s: Option<u64>,
    /// Find the least s whose bound is at most this target.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Serialize)]
struct BoundValue {
    s: u64,
    bound: f64,
}

#[derive(Serialize)]
struct SampleCount {
    gamma: f64,
    s: u64,
    bound_at_s: f64,
}

fn csv_line(values: &[String]) -> String {
    values.join(",") + "\n"
}

pub fn bounds(mut a: BoundsArgs, out: &Output) -> Result<()> {
    let p = a.scenario.resolve();
    let kind = a.scenario.bound.into();
    match (a.s, a.gamma) {
        (Some(s), None) => {
            let r = BoundValue {
                s,
                bound: asp_bound(kind, &p.with_s(s))?,
            };
            let csv = format!("s,bound\n{},{:e}\n", r.s, r.bound);
            out.emit("bounds", &a, &r, Some(csv))
        }
        (None, Some(gamma)) => sample_count(gamma, kind, &p, "bounds", &a, out),
        _ => bail!("give exactly one of --s and --gamma"),
    }
}

fn sample_count<C: Serialize>(
    gamma: f64,
    kind: BoundKind,
    p: &BoundParams,
    command: &str,
    config: &C,
    out: &Output,
) -> Result<()> {
    let s = min_samples(kind, gamma, p)?;
    let r = SampleCount {
        gamma,
        s,
        bound_at_s: asp_bound(kind, &p.with_s(s))?,
    };
    let csv = format!("gamma,s,bound_at_s\n{:e},{},{:e}\n", r.gamma, r.s, r.bound_at_s);
    out.emit(command, config, &r, Some(csv))
}

#[derive(Args, Debug, Serialize)]
pub struct MinSamplesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub gamma: f64,
}

pub fn min_samples_cmd(mut a: MinSamplesArgs, out: &Output) -> Result<()> {
    let p = a.scenario.resolve();
    let kind = a.scenario.bound.into();
    sample_count(a.gamma, kind, &p, "min-samples", &a, out)
}

#[derive(Args, Debug, Serialize)]
#[group(id = "samples", required = true, multiple = false, args = ["s", "gamma"])]
pub struct CostArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub s: Option<u64>,
    /// Use the least s reaching this target under the chosen bound.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Block size in bytes.
    #[arg(long, default_value_t = 1e6)]
    pub block_bytes: f64,
    /// Base-layer dimension; defaults to 1024 symbols per MB.
    #[arg(long)]
    pub k: Option<u64>,
    /// Root size in hashes.
    #[arg(long, default_value_t = 256)]
    pub root_hashes: u64,
    #[arg(long, default_value_t = 8)]
    pub batch: u64,
    #[arg(long, default_value_t = 0.25)]
    pub rate: f64,
}

pub fn cost(mut a: CostArgs, out: &Output) -> Result<()> {
    let p = a.scenario.resolve();
    let mut c = CostParams {
        root_hashes: a.root_hashes,
        batch: a.batch,
        rate: a.rate,
        ..CostParams::standard()
    }
    .scaled_to(a.block_bytes);
    c.k = *a.k.get_or_insert(c.k);
    let s = match (a.s, a.gamma) {
        (Some(s), None) => s,
        (None, Some(g)) => min_samples(a.scenario.bound.into(), g, &p)?,
        _ => bail!("give exactly one of --s and --gamma"),
    };
    let r = total_download(s, &c)?;
    let csv = csv_line(&[
        "s", "per_sample_bytes", "sampling_bytes", "header_bytes", "total_bytes", "s_over_b", "d_over_b",
    ]
    .map(String::from))
        + &csv_line(&[
            s.to_string(),
            format!("{:e}", r.sampling.per_sample_bytes),
            format!("{:e}", r.sampling.total_bytes),
            r.header_bytes.to_string(),
            format!("{:e}", r.total_bytes),
            format!("{:e}", r.sampling.total_bytes / c.block_bytes),
            format!("{:e}", r.d_over_b),
        ]);
    #[derive(Serialize)]
    struct Config<'a> {
        #[serde(flatten)]
        args: &'a CostArgs,
        cost_params: CostParams,
    }
    out.emit("cost", &Config { args: &a, cost_params: c }, &r, Some(csv))
}

#[derive(Args, Debug, Serialize)]
pub struct TablesArgs {
    /// Table to reproduce: 1, 2, 3, 4, 5, sampling or all.
    #[arg(long, default_value = "all")]
    pub table: String,
}

pub fn tables(a: TablesArgs, out: &Output) -> Result<()> {
    let ids: Vec<TableId> = if a.table == "all" {
        TableId::all().to_vec()
    } else {
        vec![a.table.parse()?]
    };
    let reports = ids
        .into_iter()
        .map(reproduce_table)
        .collect::<Result<Vec<TableReport>, _>>()?;
    let mut csv = String::new();
    for (i, r) in reports.iter().enumerate() {
        let body = r.to_csv();
        csv.push_str(if i == 0 { &body } else { body.split_once('\n').map_or("", |x| x.1) });
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        all_within_tolerance: bool,
        tables: &'a [TableReport],
    }
    let summary = Summary {
        all_within_tolerance: reports.iter().all(TableReport::all_within_tolerance),
        tables: &reports,
    };
    out.emit("tables", &a, &summary, Some(csv))
}
