//! Reduced multigraph, its colouring into matchings, and the carved slot
//! system `{U_{s,i}, V_{s,i}}` handed to the packing engine.

pub mod coloring;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::regularity::{self, BipartitePairView};
use crate::seed;

pub use coloring::{color_classes, color_multigraph};

/// One parallel edge of the reduced multigraph with its host-edge payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedEdge {
    pub i: usize,
    pub j: usize,
    pub label: usize,
    pub payload: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct ReducedMultigraph {
    pub parts: Vec<Vec<usize>>,
    pub t: usize,
    pub densities: BTreeMap<(usize, usize), f64>,
    pub edges: Vec<ReducedEdge>,
    /// Pairs below density `1/t`.
    pub dropped: Vec<(usize, usize)>,
}

impl ReducedMultigraph {
    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// `t_{i,j}`
    pub fn multiplicity(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        self.edges.iter().filter(|e| e.i == i && e.j == j).count()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.i == i || e.j == i).count()
    }
}

/// `t_{i,j} = ⌊(d_{i,j} + slack) t⌋` parallel edges per pair with density at
/// least `1/t`; the crossing edges are split among them with probability
/// `min(1/(d t), 1/t_{i,j})` each.
pub fn build_reduced(
    g: &Graph,
    parts: &[Vec<usize>],
    pair_densities: &[(usize, usize, f64)],
    t: usize,
    density_slack: f64,
    seed: u64,
) -> Result<ReducedMultigraph> {
    if t == 0 {
        return param("t must be positive");
    }
    let mut rm = ReducedMultigraph {
        parts: parts.to_vec(),
        t,
        densities: BTreeMap::new(),
        edges: Vec::new(),
        dropped: Vec::new(),
    };
    for &(i, j, d) in pair_densities {
        if i == j || i >= parts.len() || j >= parts.len() {
            return param(format!("pair ({i},{j}) does not name two parts"));
        }
        let (i, j) = (i.min(j), i.max(j));
        if d * (t as f64) < 1.0 {
            log::warn!("pair ({i},{j}) with density {d:.3} below 1/t dropped");
            rm.dropped.push((i, j));
            continue;
        }
        rm.densities.insert((i, j), d);
        let tij = ((d + density_slack) * t as f64).floor() as usize;
        let p = (1.0 / (d * t as f64)).min(1.0 / tij as f64);
        let view = BipartitePairView::new(g, &parts[i], &parts[j])?;
        let split = regularity::split_edges(&view, &vec![p; tij], seed::mix(seed, (i * parts.len() + j) as u64))?;
        for (label, payload) in split.classes.into_iter().enumerate() {
            rm.edges.push(ReducedEdge { i, j, label, payload });
        }
    }
    Ok(rm)
}

/// Colour classes of the reduced multigraph as lists of indices into `rm.edges`.
pub fn edge_color_matchings(rm: &ReducedMultigraph) -> Vec<Vec<usize>> {
    let ends: Vec<(usize, usize)> = rm.edges.iter().map(|e| (e.i, e.j)).collect();
    color_classes(rm.part_count(), &ends)
}

/// `κ = ⌊(α - t^{-1/3}) t r⌋`, at least 1.
pub fn kappa(alpha: f64, t: usize, r: usize) -> usize {
    let k = (alpha - (t as f64).powf(-1.0 / 3.0)) * (t * r) as f64;
    (k.floor().max(1.0)) as usize
}

/// Minimum size `(1 - t^{-1/3}) r / 2` of a usable matching.
pub fn large_matching_threshold(t: usize, r: usize) -> f64 {
    (1.0 - (t as f64).powf(-1.0 / 3.0)) * r as f64 / 2.0
}

/// One matched pair carved into bulk slots `v` and hub slots `u`.
#[derive(Debug, Clone, Serialize)]
pub struct SlotPair {
    pub parts: (usize, usize),
    pub v: [Vec<usize>; 2],
    pub u: [Vec<usize>; 2],
    /// Densities of `(V1,V2)`, `(V1,U2)`, `(U1,V2)`, `(U1,U2)`.
    pub densities: [f64; 4],
    /// Whether each of those sub-pairs passed the super-regular degree check.
    pub super_regular: [bool; 4],
}

/// Everything one round of the main loop works with.
#[derive(Debug, Clone)]
pub struct MatchingBlock {
    pub slots: Vec<SlotPair>,
    /// Edges of the matched pairs (`G_k`).
    pub carrier: Graph,
    pub n_bullet: usize,
    /// Working density used in the degree thresholds.
    pub d: f64,
}

impl MatchingBlock {
    pub fn hub_vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.slots.iter().flat_map(|s| s.u.iter().flatten().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn v_vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.slots.iter().flat_map(|s| s.v.iter().flatten().copied()).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone)]
pub struct MatchingStructure {
    pub kappa: usize,
    pub blocks: Vec<MatchingBlock>,
    /// Reasons the structure differs from the requested one.
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct MatchingSummary<'a> {
    pairs: Vec<(usize, usize)>,
    slot_sizes: Vec<[usize; 4]>,
    densities: Vec<&'a [f64; 4]>,
}

impl MatchingStructure {
    /// `{kappa, matchings: [{pairs, slot_sizes, densities}]}`
    pub fn summary_json(&self) -> serde_json::Value {
        let matchings: Vec<MatchingSummary> = self
            .blocks
            .iter()
            .map(|b| MatchingSummary {
                pairs: b.slots.iter().map(|s| s.parts).collect(),
                slot_sizes: b
                    .slots
                    .iter()
                    .map(|s| [s.v[0].len(), s.v[1].len(), s.u[0].len(), s.u[1].len()])
                    .collect(),
                densities: b.slots.iter().map(|s| &s.densities).collect(),
            })
            .collect();
        serde_json::json!({ "kappa": self.kappa, "matchings": matchings })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CarveParams {
    pub alpha: f64,
    pub t: usize,
    pub epsilon: f64,
    /// Fraction of each trimmed part reserved for the hub; `None` means `ε^{1/20}`.
    pub hub_fraction: Option<f64>,
    /// Proceed with this many matchings instead of failing on a shortfall.
    pub kappa_override: Option<usize>,
}

/// Picks `κ` colour classes of size at least the large-matching threshold
/// (largest first) and carves every matched pair into `V`/`U` slots: trim to
/// super-regular, then split each side into a bulk part of `n_•` vertices and
/// a hub part.
pub fn select_and_carve(
    g: &Graph,
    rm: &ReducedMultigraph,
    classes: &[Vec<usize>],
    params: CarveParams,
    seed: u64,
) -> Result<MatchingStructure> {
    let r = rm.part_count();
    let wanted = kappa(params.alpha, params.t, r);
    let threshold = large_matching_threshold(params.t, r);
    let mut large: Vec<&Vec<usize>> = classes.iter().filter(|c| c.len() as f64 >= threshold).collect();
    large.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let kappa = match params.kappa_override {
        Some(k) if k <= large.len() => k,
        Some(k) => {
            return Err(Error::Structural {
                requested: k,
                achievable: large.len(),
            })
        }
        None if wanted <= large.len() => wanted,
        None => {
            return Err(Error::Structural {
                requested: wanted,
                achievable: large.len(),
            })
        }
    };
    let hub_fraction = params.hub_fraction.unwrap_or(params.epsilon.powf(1.0 / 20.0));
    if !(0.0..1.0).contains(&hub_fraction) {
        return param(format!("hub fraction {hub_fraction} must lie in [0,1)"));
    }
    let part_size = rm.parts.iter().map(Vec::len).min().unwrap_or(0);
    let n_bullet = ((1.0 - hub_fraction) * part_size as f64).floor() as usize;
    let mut blocks = Vec::with_capacity(kappa);
    let mut notes = Vec::new();
    if params.hub_fraction.is_some() {
        notes.push(format!("hub fraction set to {hub_fraction} instead of eps^(1/20)"));
    }
    for (k, class) in large.iter().take(kappa).enumerate() {
        let mut carrier = Graph::empty(g.n());
        for &e in class.iter() {
            for &(u, v) in &rm.edges[e].payload {
                carrier.add_edge(u, v);
            }
        }
        let mut slots = Vec::new();
        let mut dmin = f64::INFINITY;
        for &e in class.iter() {
            let re = &rm.edges[e];
            let view = BipartitePairView::new(&carrier, &rm.parts[re.i], &rm.parts[re.j])?;
            let d = regularity::density(&view)?.value();
            let (a, b) = regularity::super_regular_trim(&view, params.epsilon, d)?;
            if a.len() < n_bullet || b.len() < n_bullet {
                return Err(Error::RegularityViolation(format!(
                    "trimmed pair ({},{}) has sides {}, {} below n_bullet = {n_bullet}",
                    re.i,
                    re.j,
                    a.len(),
                    b.len()
                )));
            }
            let trimmed = BipartitePairView::new(&carrier, &a, &b)?;
            let [v1, u1, v2, u2] = regularity::partition_super_regular(
                &trimmed,
                params.epsilon,
                d,
                n_bullet,
                a.len() - n_bullet,
                n_bullet,
                b.len() - n_bullet,
                seed::mix(seed, (k * 1_000_003 + e) as u64),
            )?;
            let mut slot = SlotPair {
                parts: (re.i, re.j),
                v: [v1, v2],
                u: [u1, u2],
                densities: [0.0; 4],
                super_regular: [false; 4],
            };
            audit_slot(&carrier, &mut slot, d, params.epsilon.sqrt())?;
            dmin = dmin.min(slot.densities[0]);
            slots.push(slot);
        }
        blocks.push(MatchingBlock {
            slots,
            carrier,
            n_bullet,
            d: if dmin.is_finite() { dmin } else { 0.0 },
        });
    }
    Ok(MatchingStructure { kappa, blocks, notes })
}

/// Fills in the four sub-pair densities and degree-check outcomes.
pub fn audit_slot(g: &Graph, slot: &mut SlotPair, d: f64, tol: f64) -> Result<()> {
    let combos = [
        (&slot.v[0], &slot.v[1]),
        (&slot.v[0], &slot.u[1]),
        (&slot.u[0], &slot.v[1]),
        (&slot.u[0], &slot.u[1]),
    ];
    for (idx, (a, b)) in combos.into_iter().enumerate() {
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let view = BipartitePairView::new(g, a, b)?;
        slot.densities[idx] = regularity::density(&view)?.value();
        slot.super_regular[idx] = regularity::degrees_within(&view, d, tol);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::complete_bipartite;

    #[test]
    fn kappa_formula() {
        assert_eq!(kappa(0.5, 64, 100), 1600);
        assert_eq!(kappa(0.1, 8, 3), 1);
        assert!((large_matching_threshold(8, 4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_multiplicities() {
        let g = complete_bipartite(20, 20).unwrap();
        let parts = vec![(0..20).collect(), (20..40).collect()];
        let rm = build_reduced(&g, &parts, &[(0, 1, 1.0)], 4, 0.0, 1).unwrap();
        assert_eq!(rm.multiplicity(0, 1), 4);
        let total: usize = rm.edges.iter().map(|e| e.payload.len()).sum();
        assert_eq!(total, 400);
        let empty = build_reduced(&g, &parts, &[(0, 1, 0.1)], 4, 0.0, 1).unwrap();
        assert!(empty.edges.is_empty());
        assert_eq!(empty.dropped, vec![(0, 1)]);
    }

    #[test]
    fn single_complete_pair_carves() {
        let g = complete_bipartite(40, 40).unwrap();
        let parts = vec![(0..40).collect(), (40..80).collect()];
        let rm = build_reduced(&g, &parts, &[(0, 1, 1.0)], 2, 0.0, 3).unwrap();
        let classes = edge_color_matchings(&rm);
        assert_eq!(classes.len(), 2);
        let params = CarveParams {
            alpha: 1.0,
            t: 2,
            epsilon: 0.2,
            hub_fraction: Some(0.25),
            kappa_override: None,
        };
        let ms = select_and_carve(&g, &rm, &classes, params, 5).unwrap();
        assert_eq!(ms.kappa, 1);
        let slot = &ms.blocks[0].slots[0];
        assert_eq!(slot.v[0].len(), 30);
        assert!(slot.densities.iter().all(|&d| d > 0.3));
        let too_many = CarveParams {
            kappa_override: Some(3),
            ..params
        };
        match select_and_carve(&g, &rm, &classes, too_many, 5) {
            Err(Error::Structural { achievable, .. }) => assert_eq!(achievable, 2),
            other => panic!("{other:?}"),
        }
    }
}
