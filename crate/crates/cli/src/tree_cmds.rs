use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use spar_core::cmt::{build_cmt, CmtParams, CmtSpec, CodedMerkleTree, Digest, TreeFile};
use spar_core::codes::{mask_single_error, Rate, Symbol};
use spar_core::fraud::{hash_aware_decode, verify_fraud_proof, DecodeOutcome, FraudKind, FraudProof};
use spar_core::game::{adversary_hide_set, AdversaryStrategy};

use crate::report::Output;

pub const EXIT_FRAUD: u8 = 2;
pub const EXIT_UNAVAILABLE: u8 = 3;
pub const EXIT_PROOF_REJECTED: u8 = 4;

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn load_tree(path: &Path) -> Result<TreeFile> {
    TreeFile::from_bytes(&read(path)?).with_context(|| format!("decoding tree file {}", path.display()))
}

fn hex_root(root: &[Digest]) -> Vec<String> {
    root.iter().map(Digest::to_hex).collect()
}

/// Reads root digests from a JSON file: a bare list of hex strings, an
/// object with a `root` field, or a report whose `result` has one.
fn load_root(path: &Path) -> Result<Vec<Digest>> {
    let v: serde_json::Value = serde_json::from_slice(&read(path)?)?;
    let list = if v.is_array() {
        &v
    } else if let Some(r) = v.get("root") {
        r
    } else if let Some(r) = v.get("result").and_then(|r| r.get("root")) {
        r
    } else {
        bail!("{} holds no root digests", path.display());
    };
    Ok(serde_json::from_value(list.clone())?)
}

/// Splits raw bytes into `k` equal symbols after zero-padding to a multiple
/// of `k`. Returns the symbols and the pad length.
pub fn split_block(bytes: &[u8], k: usize) -> (Vec<Symbol>, usize) {
    let symbol_len = bytes.len().div_ceil(k).max(1);
    let pad = k * symbol_len - bytes.len();
    let mut padded = bytes.to_vec();
    padded.resize(k * symbol_len, 0);
    (padded.chunks(symbol_len).map(|c| Symbol(c.to_vec())).collect(), pad)
}

#[derive(Args, Debug, Serialize)]
pub struct CmtArgs {
    /// Raw block bytes.
    #[arg(long)]
    pub block_file: PathBuf,
    /// Tree parameters as JSON; flags below override single fields.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub rate: Option<Rate>,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub root_size: Option<usize>,
    #[arg(long)]
    pub col_weight: Option<usize>,
    #[arg(long)]
    pub row_weight: Option<usize>,
    /// Tree file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct TreeSummary {
    tree: PathBuf,
    pad_len: u64,
    symbol_len: usize,
    layer_lengths: Vec<usize>,
    header_bytes: usize,
    root: Vec<String>,
}

fn tree_summary(path: &Path, file: &TreeFile, params: &CmtParams) -> TreeSummary {
    TreeSummary {
        tree: path.to_path_buf(),
        pad_len: file.pad_len,
        symbol_len: file.layers[0].symbol_len(),
        layer_lengths: file.layers.iter().map(|l| l.len()).collect(),
        header_bytes: params.header_bytes(),
        root: hex_root(&file.root),
    }
}

fn tree_file(tree: &CodedMerkleTree, pad_len: u64) -> TreeFile {
    TreeFile {
        spec: tree.params().spec().clone(),
        pad_len,
        layers: tree.layer_words(),
        root: tree.root().to_vec(),
    }
}

pub fn cmt(a: CmtArgs, seed: u64, out: &Output) -> Result<()> {
    let mut spec = match &a.params {
        Some(p) => serde_json::from_slice(&read(p)?).with_context(|| format!("parsing {}", p.display()))?,
        None => CmtSpec::standard(seed),
    };
    if a.params.is_none() {
        spec.seed = seed;
    }
    spec.k = a.k.unwrap_or(spec.k);
    spec.rate = a.rate.unwrap_or(spec.rate);
    spec.batch = a.batch.unwrap_or(spec.batch);
    spec.root_size = a.root_size.unwrap_or(spec.root_size);
    spec.col_weight = a.col_weight.unwrap_or(spec.col_weight);
    spec.row_weight = a.row_weight.unwrap_or(spec.row_weight);
    let params = Arc::new(CmtParams::new(spec.clone())?);
    let (block, pad) = split_block(&read(&a.block_file)?, spec.k);
    let tree = build_cmt(&block, params.clone())?;
    let file = tree_file(&tree, pad as u64);
    write(&a.out, &file.to_bytes())?;
    out.emit("cmt", &spec, &tree_summary(&a.out, &file, &params), None)
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    /// Withhold a uniformly random ⌈αn⌉-subset of the base layer.
    Weak,
    /// Withhold ⌈αn⌉ base symbols containing a stopping set.
    Strong,
    /// Withhold the listed base positions.
    Explicit,
    /// Withhold the whole base layer.
    HideAll,
    /// Corrupt one base symbol and commit honestly to the corrupted layer.
    ParityFraud,
    /// Corrupt one base symbol and withhold a set masking it from every
    /// parity check.
    Mask,
}

#[derive(Args, Debug, Serialize)]
pub struct AttackArgs {
    /// Honest tree file to attack.
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long, value_enum)]
    pub strategy: AttackKind,
    #[arg(long, default_value_t = 0.47)]
    pub alpha: f64,
    /// Base positions for `explicit`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub positions: Vec<usize>,
    /// Base position to corrupt.
    #[arg(long, default_value_t = 0)]
    pub error_pos: usize,
    /// Tree file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(skip)]
    pub seed: u64,
}

#[derive(Serialize)]
struct AttackSummary {
    tree: PathBuf,
    hidden: Vec<usize>,
    corrupted: Option<usize>,
    root: Vec<String>,
}

pub fn attack(mut a: AttackArgs, seed: u64, out: &Output) -> Result<()> {
    a.seed = seed;
    let file = load_tree(&a.tree)?;
    let params = Arc::new(CmtParams::new(file.spec.clone())?);
    let h = params.layer(0).matrix();
    let n = params.layer(0).n;
    let strategy = match a.strategy {
        AttackKind::Weak => Some(AdversaryStrategy::WeakRandom { alpha: a.alpha }),
        AttackKind::Strong => Some(AdversaryStrategy::StrongStoppingSet {
            alpha: a.alpha,
            assume_undecodable: false,
        }),
        AttackKind::Explicit => Some(AdversaryStrategy::ExplicitHideSet {
            positions: a.positions.clone(),
        }),
        AttackKind::HideAll => Some(AdversaryStrategy::ExplicitHideSet {
            positions: (0..n).collect(),
        }),
        AttackKind::ParityFraud | AttackKind::Mask => None,
    };
    let (result, hidden, corrupted) = match strategy {
        Some(s) => {
            if let AdversaryStrategy::ExplicitHideSet { positions } = &s {
                ensure!(positions.iter().all(|&j| j < n), "positions must be below n={n}");
            }
            let hidden = adversary_hide_set(&s, Some(h), n, seed)?;
            let mut f = file.clone();
            f.layers[0] = f.layers[0].with_erasures(hidden.iter().copied());
            (f, hidden, None)
        }
        None => {
            ensure!(a.error_pos < n, "error position must be below n={n}");
            let mut base = file.layers[0]
                .to_symbols()
                .context("the base layer of the input tree has erasures")?;
            base[a.error_pos].0[0] ^= 1;
            let tree = CodedMerkleTree::from_base_layer(base, params.clone())?;
            let mut f = tree_file(&tree, file.pad_len);
            let hidden: Vec<usize> = match a.strategy {
                AttackKind::Mask => mask_single_error(h, a.error_pos)?.into_iter().collect(),
                _ => Vec::new(),
            };
            f.layers[0] = f.layers[0].with_erasures(hidden.iter().copied());
            (f, hidden, Some(a.error_pos))
        }
    };
    write(&a.out, &result.to_bytes())?;
    let summary = AttackSummary {
        tree: a.out.clone(),
        hidden,
        corrupted,
        root: hex_root(&result.root),
    };
    out.emit("attack", &a, &summary, None)
}

#[derive(Args, Debug, Serialize)]
pub struct DecodeArgs {
    #[arg(long)]
    pub tree: PathBuf,
    /// Trusted root digests (JSON); defaults to the root stored in the tree.
    #[arg(long)]
    pub root: Option<PathBuf>,
    /// Where to write the decoded block bytes.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write a fraud proof; defaults to the tree path with a
    /// `.fraud` suffix.
    #[arg(long)]
    pub proof_out: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum DecodeSummary {
    FullyDecoded {
        block_bytes: usize,
        out: Option<PathBuf>,
    },
    Fraud {
        kind: FraudKind,
        layer: usize,
        row: usize,
        proof: PathBuf,
    },
    Unavailable {
        stopping_sets: Vec<spar_core::fraud::LayerStoppingSet>,
    },
}

pub fn decode(a: DecodeArgs, out: &Output) -> Result<u8> {
    let file = load_tree(&a.tree)?;
    let params = CmtParams::new(file.spec.clone())?;
    let root = match &a.root {
        Some(p) => load_root(p)?,
        None => file.root.clone(),
    };
    let (summary, code) = match hash_aware_decode(&params, &root, &file.layers)? {
        DecodeOutcome::FullyDecoded(symbols) => {
            let mut bytes: Vec<u8> = symbols.iter().flat_map(|s| s.as_bytes().iter().copied()).collect();
            let keep = bytes.len().saturating_sub(file.pad_len as usize);
            bytes.truncate(keep);
            if let Some(p) = &a.out {
                write(p, &bytes)?;
            }
            (
                DecodeSummary::FullyDecoded {
                    block_bytes: bytes.len(),
                    out: a.out.clone(),
                },
                0,
            )
        }
        DecodeOutcome::Fraud(proof) => {
            let path = a
                .proof_out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}.fraud", a.tree.display())));
            write(&path, &proof.to_bytes())?;
            (
                DecodeSummary::Fraud {
                    kind: proof.kind,
                    layer: proof.layer,
                    row: proof.row,
                    proof: path,
                },
                EXIT_FRAUD,
            )
        }
        DecodeOutcome::Unavailable(stopping_sets) => (DecodeSummary::Unavailable { stopping_sets }, EXIT_UNAVAILABLE),
    };
    out.emit("decode", &a, &summary, None)?;
    Ok(code)
}

#[derive(Args, Debug, Serialize, Deserialize)]
pub struct FraudVerifyArgs {
    /// Serialized fraud proof.
    #[arg(long)]
    pub proof: PathBuf,
    /// Tree file supplying the parameters and, unless `--root` is given, the
    /// root.
    #[arg(long, required_unless_present = "spec")]
    pub tree: Option<PathBuf>,
    /// Tree parameters as JSON, instead of `--tree`.
    #[arg(long, requires = "root")]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub root: Option<PathBuf>,
}

pub fn fraud_verify(a: FraudVerifyArgs, out: &Output) -> Result<u8> {
    let tree = a.tree.as_deref().map(load_tree).transpose()?;
    let spec: CmtSpec = match (&a.spec, &tree) {
        (Some(p), _) => serde_json::from_slice(&read(p)?)?,
        (None, Some(t)) => t.spec.clone(),
        (None, None) => bail!("give --tree or --spec"),
    };
    let root = match (&a.root, &tree) {
        (Some(p), _) => load_root(p)?,
        (None, Some(t)) => t.root.clone(),
        (None, None) => bail!("give --root"),
    };
    let params = CmtParams::new(spec)?;
    let proof = FraudProof::from_bytes(&params, &read(&a.proof)?)?;
    let valid = verify_fraud_proof(&params, &root, &proof);
    #[derive(Serialize)]
    struct Verdict {
        valid: bool,
        kind: FraudKind,
        layer: usize,
        row: usize,
        members: usize,
    }
    let v = Verdict {
        valid,
        kind: proof.kind,
        layer: proof.layer,
        row: proof.row,
        members: proof.members.len(),
    };
    out.emit("fraud verify", &a, &v, None)?;
    Ok(if valid { 0 } else { EXIT_PROOF_REJECTED })
}
