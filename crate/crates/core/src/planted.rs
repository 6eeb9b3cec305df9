//! Planted instances: a host made of dense random bipartite blocks with a
//! known matching structure, a hub reserve around it, and a random tree
//! workload sized against the host.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::graph::generate::{add_random_bipartite_edges, add_random_clique_edges};
use crate::graph::Graph;
use crate::seed;
use crate::structure::{audit_slot, MatchingBlock, MatchingStructure, SlotPair};
use crate::tree::{random_tree, RootedTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    /// Number of matched pairs.
    pub pairs: usize,
    /// Bulk slot size `n_•`.
    pub n_bullet: usize,
    /// Vertices per hub slot.
    pub hub_side: usize,
    /// Density of the bulk blocks.
    pub d: f64,
    /// Edge probability inside the hub.
    pub hub_p: f64,
    /// Edge probability between a hub slot and the opposite bulk slot.
    pub cross_p: f64,
    pub seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        Self {
            pairs: 3,
            n_bullet: 150,
            hub_side: 30,
            d: 0.5,
            hub_p: 0.8,
            cross_p: 0.8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedInstance {
    /// The bulk blocks `V_{s,0} × V_{s,1}`.
    pub g: Graph,
    /// Edges inside the hub and between hub and bulk slots.
    pub hub: Graph,
    pub structure: MatchingStructure,
}

/// Vertex layout per pair `s`: `V_{s,0}`, `V_{s,1}`, `U_{s,0}`, `U_{s,1}` in
/// consecutive blocks.
pub fn planted_instance(spec: &PlantedSpec) -> Result<PlantedInstance> {
    if spec.pairs == 0 || spec.n_bullet == 0 || spec.hub_side == 0 {
        return param("planted instance needs pairs, bulk and hub slots");
    }
    for p in [spec.d, spec.hub_p, spec.cross_p] {
        if !(0.0..=1.0).contains(&p) {
            return param(format!("probability {p} outside [0, 1]"));
        }
    }
    let (n, h) = (spec.n_bullet, spec.hub_side);
    let block = 2 * (n + h);
    let total = spec.pairs * block;
    let mut g = Graph::new(total)?;
    let mut hub = Graph::new(total)?;
    let mut rng = seed::rng(spec.seed);
    let mut slots = Vec::with_capacity(spec.pairs);
    let mut all_u = Vec::new();
    for s in 0..spec.pairs {
        let base = s * block;
        let v0: Vec<usize> = (base..base + n).collect();
        let v1: Vec<usize> = (base + n..base + 2 * n).collect();
        let u0: Vec<usize> = (base + 2 * n..base + 2 * n + h).collect();
        let u1: Vec<usize> = (base + 2 * n + h..base + block).collect();
        add_random_bipartite_edges(&mut g, &v0, &v1, spec.d, &mut rng);
        add_random_bipartite_edges(&mut hub, &u0, &v1, spec.cross_p, &mut rng);
        add_random_bipartite_edges(&mut hub, &u1, &v0, spec.cross_p, &mut rng);
        all_u.extend(u0.iter().chain(&u1).copied());
        slots.push(SlotPair {
            parts: (2 * s, 2 * s + 1),
            v: [v0, v1],
            u: [u0, u1],
            densities: [0.0; 4],
            super_regular: [false; 4],
        });
    }
    add_random_clique_edges(&mut hub, &all_u, spec.hub_p, &mut rng);
    let mut both = g.clone();
    both.union_with(&hub);
    let tol = (spec.d * (1.0 - spec.d) / n as f64).sqrt() * 4.0;
    for slot in &mut slots {
        audit_slot(&both, slot, spec.d, tol.max(0.05))?;
    }
    let structure = MatchingStructure {
        kappa: 1,
        blocks: vec![MatchingBlock {
            slots,
            carrier: g.clone(),
            n_bullet: n,
            d: spec.d,
        }],
        notes: vec!["planted structure".into()],
    };
    Ok(PlantedInstance { g, hub, structure })
}

/// Random trees of `size` vertices and maximum degree `max_degree` whose
/// edge total is as close as possible to `total_edges`.
pub fn tree_workload(total_edges: usize, size: usize, max_degree: usize, seed: u64) -> Result<Vec<RootedTree>> {
    if size < 2 {
        return param("trees need at least two vertices");
    }
    let count = ((total_edges as f64) / (size - 1) as f64).round().max(1.0) as usize;
    (0..count)
        .map(|k| random_tree(size, max_degree, seed::mix(seed, k as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_densities() {
        let spec = PlantedSpec {
            pairs: 2,
            n_bullet: 40,
            hub_side: 8,
            ..Default::default()
        };
        let inst = planted_instance(&spec).unwrap();
        assert_eq!(inst.g.n(), 2 * 96);
        assert!(inst.g.is_edge_disjoint(&inst.hub));
        let slot = &inst.structure.blocks[0].slots[1];
        assert_eq!(slot.v[0][0], 96);
        assert!((slot.densities[0] - 0.5).abs() < 0.1);
        assert!((slot.densities[1] - 0.8).abs() < 0.15);
        let trees = tree_workload(1000, 101, 3, 1).unwrap();
        assert_eq!(trees.len(), 10);
    }
}
