//! The outer loop: build (or accept) a matching structure, split the trees
//! into `κ` collections and pack them round by round.

use super::collection::pack_collection;
use super::config::PipelineConfig;
use super::state::{FailureRecord, PackingState};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::regularity::regular_partition_heuristic;
use crate::seed;
use crate::structure::{build_reduced, edge_color_matchings, select_and_carve, CarveParams, MatchingStructure};
use crate::tree::RootedTree;

/// Regularity partition of `g`, reduced multigraph, colouring and carving.
pub fn build_structure(g: &Graph, cfg: &PipelineConfig) -> Result<MatchingStructure> {
    let partition = regular_partition_heuristic(g, cfg.r, cfg.epsilon, seed::mix(cfg.seed, 0x51))?;
    let densities: Vec<(usize, usize, f64)> = partition.pairs.iter().map(|p| (p.i, p.j, p.density)).collect();
    let rm = build_reduced(g, &partition.parts, &densities, cfg.t, cfg.density_slack, seed::mix(cfg.seed, 0x52))?;
    let classes = edge_color_matchings(&rm);
    let params = CarveParams {
        alpha: cfg.alpha,
        t: cfg.t,
        epsilon: cfg.epsilon,
        hub_fraction: cfg.hub_fraction,
        kappa_override: cfg.kappa_override,
    };
    select_and_carve(g, &rm, &classes, params, seed::mix(cfg.seed, 0x53))
}

/// Greedy split into `kappa` collections (largest tree to the lightest
/// collection), each below `(1/κ)(1 - 2ν/3) e(G)` edges.
pub fn split_collections(trees: &[RootedTree], kappa: usize, host_edges: usize, nu: f64) -> Result<Vec<Vec<usize>>> {
    let kappa = kappa.max(1);
    let limit = (1.0 - 2.0 * nu / 3.0) * host_edges as f64 / kappa as f64;
    let mut order: Vec<usize> = (0..trees.len()).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(trees[k].edge_count()), k));
    let mut bins: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new()); kappa];
    for k in order {
        let lightest = (0..kappa).min_by_key(|&b| (bins[b].0, b)).expect("kappa >= 1");
        bins[lightest].0 += trees[k].edge_count();
        bins[lightest].1.push(k);
    }
    for (load, _) in &bins {
        if *load as f64 >= limit && *load > 0 {
            return Err(Error::Precondition(format!(
                "a collection needs {load} edges, the per-round limit is {limit:.0}"
            )));
        }
    }
    Ok(bins
        .into_iter()
        .map(|(_, mut v)| {
            v.sort_unstable();
            v
        })
        .collect())
}

/// Full pipeline with the structure built from `g`.
pub fn pack_theorem(g: &Graph, hub_reserve: &Graph, trees: &[RootedTree], cfg: &PipelineConfig) -> Result<PackingState> {
    check_inputs(g, hub_reserve, trees, cfg)?;
    let structure = build_structure(g, cfg)?;
    pack_with_structure(g, hub_reserve, &structure, trees, cfg)
}

/// Full pipeline on a given structure (for planted instances).
pub fn pack_with_structure(
    g: &Graph,
    hub_reserve: &Graph,
    structure: &MatchingStructure,
    trees: &[RootedTree],
    cfg: &PipelineConfig,
) -> Result<PackingState> {
    check_inputs(g, hub_reserve, trees, cfg)?;
    let mut state = PackingState::new(g.n(), trees)?;
    let collections = split_collections(trees, structure.kappa, g.edge_count(), cfg.nu)?;
    for (k, (block, members)) in structure.blocks.iter().zip(&collections).enumerate() {
        let bound = cfg.hub_degree_bound(k);
        if state.hub_round_degree() > bound {
            return Err(Error::Internal(format!(
                "hub edges of earlier rounds have degree {} above {bound}",
                state.hub_round_degree()
            )));
        }
        // G*_k: the matched pairs plus whatever hub edges are left.
        let mut host = block.carrier.clone();
        host.union_with(hub_reserve);
        let list: Vec<(usize, &RootedTree)> = members.iter().map(|&id| (id, &trees[id])).collect();
        if let Err(e) = pack_collection(&host, block, &list, &mut state, cfg, k) {
            match e {
                Error::Parameter(_) | Error::Precondition(_) | Error::Internal(_) => return Err(e),
                other => {
                    log::warn!("round {k} failed: {other}");
                    for &id in members {
                        state.failures.push(FailureRecord::from_error("round", Some(id), &other));
                    }
                }
            }
        }
    }
    Ok(state)
}

fn check_inputs(g: &Graph, hub_reserve: &Graph, trees: &[RootedTree], cfg: &PipelineConfig) -> Result<()> {
    if g.n() != hub_reserve.n() {
        return Err(Error::Precondition("host and hub reserve have different vertex sets".into()));
    }
    if !g.is_edge_disjoint(hub_reserve) {
        return Err(Error::Precondition("host and hub reserve share edges".into()));
    }
    let total: usize = trees.iter().map(RootedTree::edge_count).sum();
    let limit = (1.0 - cfg.nu) * g.edge_count() as f64;
    if total as f64 > limit {
        return Err(Error::Precondition(format!(
            "trees have {total} edges, more than (1-nu) e(G) = {limit:.0}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collections_respect_limit() {
        let trees: Vec<RootedTree> = (0..6).map(|k| RootedTree::path(10 + k).unwrap()).collect();
        let c = split_collections(&trees, 2, 200, 0.3).unwrap();
        assert_eq!(c.len(), 2);
        let loads: Vec<usize> = c.iter().map(|b| b.iter().map(|&k| trees[k].edge_count()).sum()).collect();
        assert!(loads.iter().all(|&l| (l as f64) < 0.8 * 100.0));
        assert!(split_collections(&trees, 2, 80, 0.3).is_err());
    }
}
