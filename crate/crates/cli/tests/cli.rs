use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spar"))
        .args(args)
        .env_remove("SPAR_SEED")
        .output()
        .expect("spawn spar")
}

fn json(out: &Output) -> Value {
    assert!(
        out.stderr.is_empty(),
        "unexpected stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bound_value_and_inversion() {
    let out = spar(&["bounds", "--bound", "recomputed", "--adversary", "weak", "--s", "35"]);
    assert!(out.status.success());
    let v = json(&out);
    let b = v["result"]["bound"].as_f64().unwrap();
    assert!((b - 2.29e-7).abs() < 0.005e-7, "{b}");
    assert_eq!(v["tool"], "spar");
    assert_eq!(v["config"]["alpha"], 0.47);

    let out = spar(&["bounds", "--gamma", "1e-10", "--adversary", "weak", "--bound", "recomputed"]);
    assert_eq!(json(&out)["result"]["s"], 48);

    let out = spar(&["min-samples", "--gamma", "1e-2", "--adversary", "strong", "--bound", "original"]);
    assert_eq!(json(&out)["result"]["s"], 35);
}

#[test]
fn bounds_needs_exactly_one_target() {
    assert!(!spar(&["bounds"]).status.success());
    assert!(!spar(&["bounds", "--s", "3", "--gamma", "0.1"]).status.success());
}

#[test]
fn sample_count_table_matches_exactly() {
    let v = json(&spar(&["tables", "--table", "2"]));
    let cells = v["result"]["tables"][0]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 12);
    assert!(cells.iter().all(|c| c["within_tolerance"] == true));
}

#[test]
fn tables_csv_carries_version_and_config() {
    let out = spar(&["tables", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with(&format!("# spar {} tables config=", env!("CARGO_PKG_VERSION"))));
    assert!(lines.next().unwrap().starts_with("table,row,column"));
    // 16 + 12 + 15 + 3·11 cells
    assert_eq!(lines.count(), 16 + 12 + 15 + 33);
}

#[test]
fn cost_reports_header_and_download() {
    let v = json(&spar(&["cost", "--s", "1"]));
    assert_eq!(v["result"]["header_bytes"], 8192);
    let per = v["result"]["sampling"]["per_sample_bytes"].as_f64().unwrap();
    assert!((per - 2640.5625).abs() < 1e-9);
}

#[test]
fn gen_code_shapes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.alist");
    let b = dir.path().join("b.alist");
    let v = json(&spar(&["gen-code", "--seed", "9", "--out", p(&a)]));
    assert_eq!(v["result"]["rows"], 3072);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(fs::read_to_string(&a).unwrap().lines().next().unwrap(), "4096 3072");
    let meta: Value = serde_json::from_slice(&fs::read(dir.path().join("a.alist.json")).unwrap()).unwrap();
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));

    spar(&["gen-code", "--seed", "9", "--out", p(&b)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let out = Command::new(env!("CARGO_BIN_EXE_spar"))
        .args(["gen-code", "--out", p(&b)])
        .env("SPAR_SEED", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let small = dir.path().join("s.alist");
    let v = json(&spar(&["gen-code", "--n", "8", "--rate", "0.5", "--col-weight", "2", "--row-weight", "4", "--out", p(&small)]));
    assert_eq!((v["result"]["rows"].as_u64(), v["result"]["n"].as_u64()), (Some(4), Some(8)));
}

#[test]
fn invalid_code_parameters_fail_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = spar(&["gen-code", "--n", "10", "--out", p(&dir.path().join("x"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

fn small_tree(dir: &Path) -> std::path::PathBuf {
    let block = dir.join("block.bin");
    let bytes: Vec<u8> = (0..5000u32).map(|i| (i * 31 % 251) as u8).collect();
    fs::write(&block, bytes).unwrap();
    let tree = dir.join("tree.bin");
    let out = spar(&[
        "cmt", "--block-file", p(&block), "--k", "64", "--root-size", "32", "--seed", "4", "--out", p(&tree),
    ]);
    let v = json(&out);
    assert_eq!(v["result"]["layer_lengths"], serde_json::json!([256, 128, 64, 32]));
    assert_eq!(v["result"]["pad_len"], 64 * 79 - 5000);
    tree
}

#[test]
fn honest_tree_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let tree = small_tree(dir.path());
    let back = dir.path().join("back.bin");
    let out = spar(&["decode", "--tree", p(&tree), "--out", p(&back)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["outcome"], "fully_decoded");
    assert_eq!(fs::read(&back).unwrap(), fs::read(dir.path().join("block.bin")).unwrap());

    // withholding a tenth of the base still decodes
    let w = dir.path().join("w.bin");
    spar(&["attack", "--tree", p(&tree), "--strategy", "weak", "--alpha", "0.1", "--out", p(&w)]);
    let out = spar(&["decode", "--tree", p(&w), "--out", p(&back)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&back).unwrap(), fs::read(dir.path().join("block.bin")).unwrap());
}

#[test]
fn injected_fraud_is_proved_and_verified() {
    let dir = tempfile::tempdir().unwrap();
    let tree = small_tree(dir.path());
    let bad = dir.path().join("bad.bin");
    let proof = dir.path().join("proof.bin");
    let v = json(&spar(&["attack", "--tree", p(&tree), "--strategy", "parity-fraud", "--error-pos", "3", "--out", p(&bad)]));
    assert_eq!(v["result"]["corrupted"], 3);

    let out = spar(&["decode", "--tree", p(&bad), "--proof-out", p(&proof)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["kind"], "parity_check");

    let out = spar(&["fraud", "verify", "--proof", p(&proof), "--tree", p(&bad)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["valid"], true);

    // the same proof means nothing against the honest root
    let out = spar(&["fraud", "verify", "--proof", p(&proof), "--tree", p(&tree)]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn masked_error_is_caught_by_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let tree = small_tree(dir.path());
    let bad = dir.path().join("mask.bin");
    let v = json(&spar(&["attack", "--tree", p(&tree), "--strategy", "mask", "--error-pos", "10", "--out", p(&bad)]));
    assert!(!v["result"]["hidden"].as_array().unwrap().is_empty());
    let proof = dir.path().join("p.bin");
    let out = spar(&["decode", "--tree", p(&bad), "--proof-out", p(&proof)]);
    assert_eq!(out.status.code(), Some(2));
    let out = spar(&["fraud", "verify", "--proof", p(&proof), "--tree", p(&bad)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn hiding_everything_is_unavailable() {
    let dir = tempfile::tempdir().unwrap();
    let tree = small_tree(dir.path());
    let hidden = dir.path().join("hidden.bin");
    spar(&["attack", "--tree", p(&tree), "--strategy", "hide-all", "--out", p(&hidden)]);
    let out = spar(&["decode", "--tree", p(&hidden)]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["result"]["outcome"], "unavailable");
    assert_eq!(v["result"]["stopping_sets"][0]["layer"], 0);
}

#[test]
fn decode_honours_external_root() {
    let dir = tempfile::tempdir().unwrap();
    let tree = small_tree(dir.path());
    let honest = json(&spar(&["attack", "--tree", p(&tree), "--strategy", "explicit", "--out", p(&dir.path().join("copy.bin"))]));
    let bad = dir.path().join("bad.bin");
    let v = json(&spar(&["attack", "--tree", p(&tree), "--strategy", "parity-fraud", "--out", p(&bad)]));

    let root = dir.path().join("root.json");
    fs::write(&root, serde_json::to_vec(&v["result"]["root"]).unwrap()).unwrap();
    assert_eq!(spar(&["decode", "--tree", p(&bad), "--root", p(&root)]).status.code(), Some(2));

    // against the honest root no supplied top symbol matches its digest
    fs::write(&root, serde_json::to_vec(&honest).unwrap()).unwrap();
    assert_eq!(spar(&["decode", "--tree", p(&bad), "--root", p(&root)]).status.code(), Some(3));
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn honest_simulation_never_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "h.json",
        r#"{"m":4,"s":2,"n":64,"adversary":{"kind":"honest_available"},"trials":500}"#,
    );
    let v = json(&spar(&["simulate", "--config", &cfg, "--seed", "2"]));
    assert_eq!(v["result"]["gamma_hat"], 0.0);
    assert_eq!(v["config"]["seed"], 2);
    assert_eq!(v["config"]["code"]["col_weight"], 6);
    assert!(v.get("wall_time_s").is_none());
}

#[test]
fn weak_adversary_simulation_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "wa.json",
        r#"{"m":64,"s":8,"n":4096,"adversary":{"kind":"weak_random","alpha":0.47},"trials":100000,"seed":5}"#,
    );
    let v = json(&spar(&["simulate", "--config", &cfg]));
    let g = v["result"]["gamma_hat"].as_f64().unwrap();
    let se = v["result"]["stderr"].as_f64().unwrap();
    let expected = 1.0 - (1.0 - 0.53f64.powi(8)).powi(64);
    assert!((g - expected).abs() <= 3.0 * se, "{g} vs {expected} (se {se})");
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "g.json",
        r#"{"m":8,"s":4,"n":256,"adversary":{"kind":"weak_random","alpha":0.4},"trials":3000,"seed":1}"#,
    );
    let one = spar(&["simulate", "--config", &cfg, "--threads", "1"]);
    let four = spar(&["simulate", "--config", &cfg, "--threads", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);

    let a = spar(&["threshold", "--n", "512", "--trials", "50", "--from", "0.4", "--to", "0.5", "--threads", "1"]);
    let b = spar(&["threshold", "--n", "512", "--trials", "50", "--from", "0.4", "--to", "0.5", "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["points"].as_array().unwrap().len(), 11);
}

#[test]
fn simulate_rejects_csv_and_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "h.json",
        r#"{"m":4,"s":2,"n":64,"adversary":{"kind":"honest_available"},"trials":500}"#,
    );
    assert!(!spar(&["simulate", "--config", &cfg, "--format", "csv"]).status.success());
    let bad = write_config(dir.path(), "b.json", r#"{"m":0,"s":2,"n":64,"adversary":{"kind":"honest_available"},"trials":500}"#);
    assert!(!spar(&["simulate", "--config", &bad]).status.success());
}

#[test]
fn report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = spar(&["bounds", "--s", "8", "--output", p(&path)]);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&fs::read(path).unwrap()).unwrap();
    assert_eq!(v["command"], "bounds");
}
