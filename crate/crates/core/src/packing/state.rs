use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{EmbeddingFailure, Error, Result};
use crate::graph::Graph;
use crate::tree::RootedTree;

/// Image of one input tree; `map` is empty for trees that were not packed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeImage {
    pub id: usize,
    /// Tree edges as `(child, parent)`.
    pub edges: Vec<(usize, usize)>,
    /// `(tree vertex, host vertex)` pairs.
    pub map: Vec<(usize, usize)>,
}

impl TreeImage {
    pub fn is_packed(&self) -> bool {
        !self.map.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub stage: String,
    pub tree: Option<usize>,
    pub piece: Option<usize>,
    pub case: Option<String>,
    pub candidate_sizes: Vec<usize>,
    pub message: String,
}

impl FailureRecord {
    pub fn from_error(stage: &str, tree: Option<usize>, err: &Error) -> Self {
        match err {
            Error::Embedding(EmbeddingFailure {
                tree: t,
                piece,
                case,
                candidate_sizes,
            }) => Self {
                stage: stage.into(),
                tree: tree.or(Some(*t)),
                piece: Some(*piece),
                case: Some(case.clone()),
                candidate_sizes: candidate_sizes.clone(),
                message: err.to_string(),
            },
            _ => Self {
                stage: stage.into(),
                tree,
                piece: None,
                case: None,
                candidate_sizes: Vec::new(),
                message: err.to_string(),
            },
        }
    }
}

/// Global bookkeeping of a packing in progress.
#[derive(Debug, Clone)]
pub struct PackingState {
    pub trees: Vec<TreeImage>,
    /// Union of all tree-edge images (`E`).
    pub used: Graph,
    pub hub_vertices: Vec<usize>,
    /// Number of trees with a connector vertex mapped to each host vertex.
    pub hub_usage: Vec<usize>,
    /// Hub-internal edges used in each round (`H_k`).
    pub hub_edges_by_round: Vec<Vec<(usize, usize)>>,
    pub failures: Vec<FailureRecord>,
}

impl PackingState {
    /// Empty state for `trees` on a host with `n` vertices.
    pub fn new(n: usize, trees: &[RootedTree]) -> Result<Self> {
        Ok(Self {
            trees: trees
                .iter()
                .enumerate()
                .map(|(id, t)| TreeImage {
                    id,
                    edges: t.edges().collect(),
                    map: Vec::new(),
                })
                .collect(),
            used: Graph::new(n)?,
            hub_vertices: Vec::new(),
            hub_usage: vec![0; n],
            hub_edges_by_round: Vec::new(),
            failures: Vec::new(),
        })
    }

    pub fn packed_count(&self) -> usize {
        self.trees.iter().filter(|t| t.is_packed()).count()
    }

    pub fn hub_usage_max(&self) -> usize {
        self.hub_vertices.iter().map(|&u| self.hub_usage[u]).max().unwrap_or(0)
    }

    /// Maximum degree of the union of all `H_k`.
    pub fn hub_round_degree(&self) -> usize {
        let mut deg = BTreeMap::new();
        for &(a, b) in self.hub_edges_by_round.iter().flatten() {
            *deg.entry(a).or_insert(0usize) += 1;
            *deg.entry(b).or_insert(0usize) += 1;
        }
        deg.values().copied().max().unwrap_or(0)
    }

    /// `{trees: [{id, edges, map}], used_edges, hub_vertices, hub_usage_histogram}`
    pub fn to_json(&self) -> serde_json::Value {
        let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
        for &u in &self.hub_vertices {
            *histogram.entry(self.hub_usage[u]).or_default() += 1;
        }
        serde_json::json!({
            "trees": self.trees,
            "used_edges": self.used.edge_count(),
            "hub_vertices": self.hub_vertices,
            "hub_usage_histogram": histogram,
        })
    }

    /// One JSON object per line.
    pub fn failures_jsonl(&self) -> String {
        self.failures
            .iter()
            .map(|f| serde_json::to_string(f).expect("failure records serialize") + "\n")
            .collect()
    }
}

/// The parts of an exported packing that an auditor needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingExport {
    pub trees: Vec<TreeImage>,
    #[serde(default)]
    pub hub_vertices: Vec<usize>,
}
