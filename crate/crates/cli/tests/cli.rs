use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn treepack(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treepack"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn smoke_run_then_audit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = treepack(&["run", "smoke", "--out", "o", "--export"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("scenario,seed,n,r,kappa,coverage,hub_usage_max,failures\nsmoke,0,"));
    let o = dir.path().join("o");
    for f in ["smoke_0_report.json", "smoke_0.csv", "smoke_0_failures.jsonl"] {
        assert!(o.join(f).is_file(), "{f}");
    }
    let audit = treepack(
        &["audit", "o/smoke_0_host.graph", "o/smoke_0_packing.json", "--hub", "o/smoke_0_hub.graph"],
        dir.path(),
    );
    assert!(audit.status.success());
}

#[test]
fn corrupted_packing_fails_audit() {
    let dir = tempfile::tempdir().unwrap();
    assert!(treepack(&["run", "smoke", "--out", "o", "--export"], dir.path()).status.success());
    let path = dir.path().join("o/smoke_0_packing.json");
    let mut export: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    // Give the second tree the first tree's map: every edge is claimed twice.
    let trees = export["trees"].as_array_mut().unwrap();
    let first = trees[0].clone();
    trees[1]["edges"] = first["edges"].clone();
    trees[1]["map"] = first["map"].clone();
    fs::write(&path, serde_json::to_string(&export).unwrap()).unwrap();
    let audit = treepack(
        &["audit", "o/smoke_0_host.graph", "o/smoke_0_packing.json", "--hub", "o/smoke_0_hub.graph"],
        dir.path(),
    );
    assert!(!audit.status.success());
    let report: serde_json::Value = serde_json::from_slice(&audit.stdout).unwrap();
    assert_eq!(report["edge_disjoint"], false);
    assert!(!report["duplicated_edges"].as_array().unwrap().is_empty());
}

#[test]
fn missing_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = treepack(&["audit", "nope.graph", "nope.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.graph"));
}

#[test]
fn oversized_scenario_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("big.ini"),
        "name = big\npairs = 1\nn_bullet = 40\nhub_side = 16\ntree_size = 30\ntree_load = 0.95\n",
    )
    .unwrap();
    let out = treepack(&["run", "big.ini"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn gen_and_alpha_tilde() {
    let dir = tempfile::tempdir().unwrap();
    assert!(treepack(&["gen", "complete-bipartite", "3", "3", "--out", "k33.graph"], dir.path()).status.success());
    let out = treepack(&["alpha-tilde", "k33.graph", "--exact"], dir.path());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "3");
    let out = treepack(&["gen", "two-cliques", "3"], dir.path());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("6 6"));
    assert!(!treepack(&["gen", "nosuch", "3"], dir.path()).status.success());
}

#[test]
fn holes_scenario_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.ini"), "name = h\ngenerator = holes-gnp\nn = 300\nc = 8\nsamples = 10\nseeds = 3\n").unwrap();
    let out = treepack(&["run", "h.ini", "--seed", "5"], dir.path());
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("h_5.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("scenario,seed,n,c,s,t,samples,holes"));
}
