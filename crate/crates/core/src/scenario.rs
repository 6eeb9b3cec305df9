//! Scenario files: flat `key = value` text describing a generator, a tree
//! workload and pipeline overrides, plus the runner that turns one into
//! report artifacts.
//!
//! ```text
//! # comment
//! name = planted
//! seed = 3
//! generator = planted      # planted | gnp | holes-gnp
//! pairs = 3
//! tree_load = 0.6
//! piece_size = 100         # any PipelineConfig field
//! ```

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::generate::erdos_renyi;
use crate::graph::holes::{is_hole, sparsify_preserving_holes};
use crate::graph::io as graph_io;
use crate::graph::Graph;
use crate::packing::{pack_theorem, pack_with_structure, PackingExport, PipelineConfig};
use crate::planted::{planted_instance, tree_workload, PlantedSpec};
use crate::seed;
use crate::tree::{random_tree, RootedTree};
use crate::verify::{check_state, PackingReport};

pub const CSV_HEADER: &str = "scenario,seed,n,r,kappa,coverage,hub_usage_max,failures";
pub const HOLES_CSV_HEADER: &str = "scenario,seed,n,c,s,t,samples,holes";

const SCENARIO_KEYS: &[&str] = &[
    "name",
    "seed",
    "generator",
    "pairs",
    "n_bullet",
    "hub_side",
    "planted_d",
    "hub_p",
    "cross_p",
    "n",
    "p",
    "c",
    "hub_xi",
    "hub_eta",
    "tree_count",
    "tree_size",
    "tree_load",
    "tree_max_degree",
    "samples",
    "seeds",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    /// Every key of the file except `name` and `seed`, echoed into reports.
    pub params: BTreeMap<String, String>,
}

impl Scenario {
    /// Parses the flat key-value format. `[section]` headers are ignored so
    /// files may group keys for readability.
    pub fn parse(text: &str) -> Result<Self> {
        let mut params = BTreeMap::new();
        let mut name = None;
        let mut seed = 0;
        let config_keys = config_keys();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
                continue;
            }
            let err = |msg: String| Error::Parse { line: k + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => name = Some(value.to_string()),
                "seed" => seed = value.parse().map_err(|_| err(format!("bad seed {value:?}")))?,
                _ if SCENARIO_KEYS.contains(&key) || config_keys.iter().any(|c| c == key) => {
                    if params.insert(key.to_string(), value.to_string()).is_some() {
                        return Err(err(format!("duplicate key {key}")));
                    }
                }
                _ => return Err(err(format!("unknown key {key}"))),
            }
        }
        Ok(Self {
            name: name.unwrap_or_else(|| "unnamed".into()),
            seed,
            params,
        })
    }

    /// Built-in scenarios: `smoke`, `planted` and `holes-gnp`.
    pub fn builtin(name: &str) -> Option<Self> {
        let text = match name {
            "smoke" => SMOKE,
            "planted" => PLANTED,
            "holes-gnp" => HOLES_GNP,
            _ => return None,
        };
        Some(Self::parse(text).expect("built-in scenarios parse"))
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parameter(format!("{key} = {v:?} does not parse"))),
        }
    }

    /// The default pipeline configuration with every override from the file
    /// applied, and the scenario seed.
    pub fn config(&self) -> Result<PipelineConfig> {
        let mut value = serde_json::to_value(PipelineConfig::default()).expect("config serializes");
        let map = value.as_object_mut().expect("config is an object");
        for (k, v) in &self.params {
            if map.contains_key(k) {
                map.insert(k.clone(), scalar(v));
            }
        }
        map.insert("seed".into(), Value::from(self.seed));
        serde_json::from_value(value).map_err(|e| Error::Parameter(format!("config override: {e}")))
    }
}

const SMOKE: &str = "name = smoke
generator = planted
pairs = 1
n_bullet = 40
hub_side = 16
planted_d = 0.5
tree_count = 2
tree_size = 30
d = 0.5
";

const PLANTED: &str = "name = planted
generator = planted
pairs = 3
n_bullet = 150
hub_side = 30
planted_d = 0.5
tree_load = 0.6
d = 0.5
piece_size = 100
slot_tolerance = 40
";

const HOLES_GNP: &str = "name = holes-gnp
generator = holes-gnp
n = 3000
c = 64
samples = 200
seeds = 10
";

fn config_keys() -> Vec<String> {
    let value = serde_json::to_value(PipelineConfig::default()).expect("config serializes");
    value.as_object().expect("config is an object").keys().cloned().collect()
}

fn scalar(v: &str) -> Value {
    if v.eq_ignore_ascii_case("none") {
        Value::Null
    } else if let Ok(b) = v.parse::<bool>() {
        Value::Bool(b)
    } else if let Ok(u) = v.parse::<u64>() {
        Value::from(u)
    } else if let Ok(f) = v.parse::<f64>() {
        Value::from(f)
    } else {
        Value::String(v.to_string())
    }
}

/// Everything a run writes out.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub report_json: String,
    pub csv_header: &'static str,
    /// One row per run, or one per seed for hole statistics.
    pub csv_rows: Vec<String>,
    pub failures_jsonl: String,
    /// False when the packing audit failed.
    pub passed: bool,
    /// Host, hub reserve and packing in the formats `audit` reads; empty for
    /// hole statistics.
    pub host_graph: String,
    pub hub_graph: String,
    pub packing_json: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    scenario: &'a str,
    seed: u64,
    params: &'a BTreeMap<String, String>,
    config: &'a PipelineConfig,
    n: usize,
    r: usize,
    kappa: usize,
    host_edges: usize,
    trees: usize,
    tree_edges: usize,
    hub_bound: usize,
    passed: bool,
    structure: Value,
    state: Value,
    report: &'a PackingReport,
}

#[derive(Serialize)]
struct HoleRow {
    seed: u64,
    samples: usize,
    holes: usize,
    min_cross_edges: usize,
}

#[derive(Serialize)]
struct HoleReport<'a> {
    scenario: &'a str,
    seed: u64,
    params: &'a BTreeMap<String, String>,
    s: usize,
    t: usize,
    rows: Vec<HoleRow>,
}

/// Runs a scenario. Precondition and parameter errors come back as `Err`;
/// a packing that fails its audit comes back with `passed == false`.
pub fn run(s: &Scenario) -> Result<Artifacts> {
    match s.params.get("generator").map(String::as_str).unwrap_or("planted") {
        "planted" | "gnp" => run_packing(s),
        "holes-gnp" => run_holes(s),
        other => Err(Error::Parameter(format!("unknown generator {other:?}"))),
    }
}

fn run_packing(s: &Scenario) -> Result<Artifacts> {
    let cfg = s.config()?;
    let planted = s.params.get("generator").map(String::as_str) != Some("gnp");
    let (g, hub, structure, r) = if planted {
        let spec = PlantedSpec {
            pairs: s.get("pairs", 3)?,
            n_bullet: s.get("n_bullet", 150)?,
            hub_side: s.get("hub_side", 30)?,
            d: s.get("planted_d", 0.5)?,
            hub_p: s.get("hub_p", 0.8)?,
            cross_p: s.get("cross_p", 0.8)?,
            seed: seed::mix(s.seed, 1),
        };
        let inst = planted_instance(&spec)?;
        (inst.g, inst.hub, Some(inst.structure), spec.pairs)
    } else {
        let n: usize = s.get("n", 600)?;
        let full = erdos_renyi(n, s.get("p", 0.6)?, seed::mix(s.seed, 1))?;
        let hub = sparsify_preserving_holes(&full, s.get("hub_xi", 0.9)?, s.get("hub_eta", 0.01)?, seed::mix(s.seed, 2))?;
        let mut g = full;
        g.difference_with(&hub);
        (g, hub, None, cfg.r)
    };
    let trees = workload(s, &g, &cfg, planted)?;
    let state = match &structure {
        Some(st) => pack_with_structure(&g, &hub, st, &trees, &cfg)?,
        None => pack_theorem(&g, &hub, &trees, &cfg)?,
    };
    let report = check_state(&g, &hub, &state);
    let kappa = structure.as_ref().map_or(0, |st| st.kappa);
    let kappa = if kappa == 0 { state.hub_edges_by_round.len() } else { kappa };
    let hub_bound = cfg.hub_degree_bound(kappa.max(1));
    let passed = report.is_valid() && report.hub_usage_max <= hub_bound;
    let csv_row = format!(
        "{},{},{},{},{},{:.6},{},{}",
        s.name,
        s.seed,
        g.n(),
        r,
        kappa,
        report.coverage,
        report.hub_usage_max,
        state.failures.len()
    );
    let doc = RunReport {
        scenario: &s.name,
        seed: s.seed,
        params: &s.params,
        config: &cfg,
        n: g.n(),
        r,
        kappa,
        host_edges: g.edge_count(),
        trees: trees.len(),
        tree_edges: trees.iter().map(RootedTree::edge_count).sum(),
        hub_bound,
        passed,
        structure: structure.as_ref().map_or(Value::Null, |st| st.summary_json()),
        state: state.to_json(),
        report: &report,
    };
    Ok(Artifacts {
        report_json: serde_json::to_string_pretty(&doc).expect("report serializes") + "\n",
        csv_header: CSV_HEADER,
        csv_rows: vec![csv_row],
        failures_jsonl: state.failures_jsonl(),
        passed,
        host_graph: graph_io::to_string(&g),
        hub_graph: graph_io::to_string(&hub),
        packing_json: serde_json::to_string(&PackingExport {
            trees: state.trees.clone(),
            hub_vertices: state.hub_vertices.clone(),
        })
        .expect("packing serializes")
            + "\n",
    })
}

fn workload(s: &Scenario, g: &Graph, cfg: &PipelineConfig, planted: bool) -> Result<Vec<RootedTree>> {
    let default_size = if planted {
        let pairs: usize = s.get("pairs", 3)?;
        let n_bullet: usize = s.get("n_bullet", 150)?;
        (0.6 * (2 * pairs * n_bullet) as f64) as usize
    } else {
        g.n() / 3
    };
    let size: usize = s.get("tree_size", default_size)?;
    let max_degree: usize = s.get("tree_max_degree", cfg.max_degree)?;
    let tree_seed = seed::mix(s.seed, 3);
    if s.params.contains_key("tree_count") {
        let count: usize = s.get("tree_count", 0)?;
        return (0..count)
            .map(|k| random_tree(size, max_degree, seed::mix(tree_seed, k as u64)))
            .collect();
    }
    let load: f64 = s.get("tree_load", 0.6)?;
    tree_workload((load * g.edge_count() as f64) as usize, size, max_degree, tree_seed)
}

fn run_holes(s: &Scenario) -> Result<Artifacts> {
    let n: usize = s.get("n", 3000)?;
    let c: f64 = s.get("c", 64.0)?;
    let samples: usize = s.get("samples", 200)?;
    let seeds: u64 = s.get("seeds", 10)?;
    if c <= 0.0 || c > n as f64 {
        return Err(Error::Parameter(format!("c = {c} must lie in (0, n]")));
    }
    let side = (n as f64 / c.cbrt()).floor() as usize;
    if 2 * side > n {
        return Err(Error::Parameter(format!("two sides of {side} do not fit in {n} vertices")));
    }
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for k in 0..seeds {
        let run_seed = s.seed + k;
        let g = erdos_renyi(n, c / n as f64, seed::mix(run_seed, 1))?;
        let row = sample_holes(&g, side, samples, seed::mix(run_seed, 2));
        csv_rows.push(format!("{},{},{},{},{},{},{},{}", s.name, run_seed, n, c, side, side, samples, row.holes));
        rows.push(HoleRow { seed: run_seed, ..row });
    }
    let doc = HoleReport {
        scenario: &s.name,
        seed: s.seed,
        params: &s.params,
        s: side,
        t: side,
        rows,
    };
    Ok(Artifacts {
        report_json: serde_json::to_string_pretty(&doc).expect("report serializes") + "\n",
        csv_header: HOLES_CSV_HEADER,
        csv_rows,
        failures_jsonl: String::new(),
        passed: true,
        host_graph: String::new(),
        hub_graph: String::new(),
        packing_json: String::new(),
    })
}

/// Samples `samples` uniformly random disjoint pairs of `side`-sets and
/// counts how many are holes.
fn sample_holes(g: &Graph, side: usize, samples: usize, seed: u64) -> HoleRow {
    let mut rng = seed::rng(seed);
    let mut order: Vec<usize> = (0..g.n()).collect();
    let (mut holes, mut min_cross) = (0, usize::MAX);
    for _ in 0..samples {
        order.shuffle(&mut rng);
        let (a, b) = (&order[..side], &order[side..2 * side]);
        if is_hole(g, a, b) {
            holes += 1;
        }
        let cross = g.edges_between(&g.vertex_set(a.iter().copied()), &g.vertex_set(b.iter().copied()));
        min_cross = min_cross.min(cross);
    }
    HoleRow {
        seed,
        samples,
        holes,
        min_cross_edges: if samples == 0 { 0 } else { min_cross },
    }
}
