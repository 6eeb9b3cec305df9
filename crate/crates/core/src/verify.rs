//! Auditors. Everything here recomputes from the raw maps with its own edge
//! bookkeeping; nothing is taken from the packing engine.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::packing::{PackingState, TreeImage};
use crate::seed;
use crate::tree::RootedTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvalidImage {
    pub tree: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStatus {
    pub id: usize,
    pub status: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingReport {
    pub edge_disjoint: bool,
    /// Host edges claimed by more than one tree edge.
    pub duplicated_edges: Vec<(usize, usize)>,
    pub invalid_images: Vec<InvalidImage>,
    /// Covered edges of `g` over `e(g)`.
    pub coverage: f64,
    pub covered_edges: usize,
    pub host_edges: usize,
    /// Largest number of image edges at a hub vertex.
    pub hub_usage_max: usize,
    pub packed: usize,
    pub per_tree_status: Vec<TreeStatus>,
}

impl PackingReport {
    pub fn is_valid(&self) -> bool {
        self.edge_disjoint && self.invalid_images.is_empty()
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Audits tree images against the host `g ∪ hub`.
pub fn check_packing(g: &Graph, hub: &Graph, trees: &[TreeImage], hub_vertices: &[usize]) -> PackingReport {
    let n = g.n();
    let mut claims: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut invalid = Vec::new();
    let mut statuses = Vec::with_capacity(trees.len());
    let mut packed = 0;
    for t in trees {
        if t.map.is_empty() {
            statuses.push(TreeStatus {
                id: t.id,
                status: "unpacked",
            });
            continue;
        }
        match audit_tree(g, hub, n, t) {
            Ok(images) => {
                packed += 1;
                for e in images {
                    *claims.entry(e).or_default() += 1;
                }
                statuses.push(TreeStatus { id: t.id, status: "packed" });
            }
            Err(reason) => {
                invalid.push(InvalidImage { tree: t.id, reason });
                statuses.push(TreeStatus {
                    id: t.id,
                    status: "invalid",
                });
            }
        }
    }
    let duplicated: Vec<(usize, usize)> = claims.iter().filter(|(_, &c)| c > 1).map(|(&e, _)| e).collect();
    let covered = claims.keys().filter(|&&(a, b)| g.has_edge(a, b)).count();
    let host_edges = g.edge_count();
    let mut hub_deg: BTreeMap<usize, usize> = hub_vertices.iter().map(|&u| (u, 0)).collect();
    for &(a, b) in claims.keys() {
        for v in [a, b] {
            if let Some(c) = hub_deg.get_mut(&v) {
                *c += 1;
            }
        }
    }
    PackingReport {
        edge_disjoint: duplicated.is_empty(),
        duplicated_edges: duplicated,
        invalid_images: invalid,
        coverage: if host_edges == 0 { 0.0 } else { covered as f64 / host_edges as f64 },
        covered_edges: covered,
        host_edges,
        hub_usage_max: hub_deg.values().copied().max().unwrap_or(0),
        packed,
        per_tree_status: statuses,
    }
}

/// [`check_packing`] on the trees and hub vertices recorded in a state.
pub fn check_state(g: &Graph, hub: &Graph, state: &PackingState) -> PackingReport {
    check_packing(g, hub, &state.trees, &state.hub_vertices)
}

fn audit_tree(g: &Graph, hub: &Graph, n: usize, t: &TreeImage) -> std::result::Result<Vec<(usize, usize)>, String> {
    let size = t.edges.len() + 1;
    let mut phi = vec![None; size];
    let mut seen = BTreeSet::new();
    for &(v, u) in &t.map {
        if v >= size || u >= n {
            return Err(format!("pair ({v}, {u}) out of range"));
        }
        if phi[v].replace(u).is_some() {
            return Err(format!("tree vertex {v} mapped twice"));
        }
        if !seen.insert(u) {
            return Err(format!("host vertex {u} is the image of two tree vertices"));
        }
    }
    if let Some(v) = phi.iter().position(Option::is_none) {
        return Err(format!("tree vertex {v} unmapped"));
    }
    let mut images = Vec::with_capacity(t.edges.len());
    for &(a, b) in &t.edges {
        let (x, y) = match (phi.get(a).copied().flatten(), phi.get(b).copied().flatten()) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(format!("tree edge {a}-{b} names a missing vertex")),
        };
        if !g.has_edge(x, y) && !hub.has_edge(x, y) {
            return Err(format!("tree edge {a}-{b} maps to non-edge {x}-{y}"));
        }
        images.push(key(x, y));
    }
    Ok(images)
}

/// Edges of a host path (given as its vertex sequence) with both ends in
/// `large`.
pub fn path_intra_part_count(host: &Graph, large: &VertexSet, path: &[usize]) -> Result<usize> {
    let mut seen = BTreeSet::new();
    for &v in path {
        if v >= host.n() || !seen.insert(v) {
            return Err(Error::Precondition(format!("path repeats or leaves the host at {v}")));
        }
    }
    let mut count = 0;
    for w in path.windows(2) {
        if !host.has_edge(w[0], w[1]) {
            return Err(Error::Precondition(format!("{}-{} is not a host edge", w[0], w[1])));
        }
        if large.contains(w[0]) && large.contains(w[1]) {
            count += 1;
        }
    }
    Ok(count)
}

/// Tree edges whose images lie inside `part` or inside its complement.
pub fn ternary_noncrossing_count(host: &Graph, part: &VertexSet, tree: &RootedTree, map: &[usize]) -> Result<usize> {
    if map.len() != tree.n() {
        return Err(Error::Precondition("map must cover every tree vertex".into()));
    }
    let mut seen = BTreeSet::new();
    if map.iter().any(|&u| u >= host.n() || !seen.insert(u)) {
        return Err(Error::Precondition("map is not injective into the host".into()));
    }
    let mut count = 0;
    for (c, p) in tree.edges() {
        let (a, b) = (map[c], map[p]);
        if !host.has_edge(a, b) {
            return Err(Error::Precondition(format!("tree edge {c}-{p} maps to non-edge {a}-{b}")));
        }
        if part.contains(a) == part.contains(b) {
            count += 1;
        }
    }
    Ok(count)
}

/// Calls `visit` on every Hamilton path of `g`, each once per direction.
/// Exponential; meant for graphs with a dozen vertices.
pub fn for_each_hamilton_path(g: &Graph, mut visit: impl FnMut(&[usize])) -> Result<()> {
    if g.n() > 16 {
        return Err(Error::Size {
            what: "exhaustive Hamilton path search",
            size: g.n(),
            limit: 16,
        });
    }
    fn extend(g: &Graph, path: &mut Vec<usize>, on: &mut [bool], visit: &mut dyn FnMut(&[usize])) {
        if path.len() == g.n() {
            visit(path);
            return;
        }
        let last = *path.last().expect("nonempty");
        for w in g.neighbors(last).iter() {
            if !on[w] {
                on[w] = true;
                path.push(w);
                extend(g, path, on, visit);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        on[s] = true;
        let mut path = vec![s];
        extend(g, &mut path, &mut on, &mut visit);
        on[s] = false;
    }
    Ok(())
}

/// Rotation–extension search for a Hamilton path: extend from the current
/// end when possible, otherwise rotate at a random neighbour of the end.
pub fn find_spanning_path(g: &Graph, seed: u64, max_steps: usize) -> Option<Vec<usize>> {
    let n = g.n();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut rng = seed::rng(seed);
    let mut path = vec![rng.gen_range(0..n)];
    let mut pos = vec![usize::MAX; n];
    pos[path[0]] = 0;
    for _ in 0..max_steps {
        if path.len() == n {
            return Some(path);
        }
        let end = *path.last().expect("nonempty");
        let mut fresh: Vec<usize> = g.neighbors(end).iter().filter(|&w| pos[w] == usize::MAX).collect();
        if !fresh.is_empty() {
            fresh.shuffle(&mut rng);
            pos[fresh[0]] = path.len();
            path.push(fresh[0]);
            continue;
        }
        let inner: Vec<usize> = g.neighbors(end).iter().filter(|&w| pos[w] + 1 < path.len()).collect();
        let Some(&w) = inner.choose(&mut rng) else {
            // Dead end: restart from the other end.
            path.reverse();
            for (k, &v) in path.iter().enumerate() {
                pos[v] = k;
            }
            continue;
        };
        let k = pos[w];
        path[k + 1..].reverse();
        for (j, &v) in path.iter().enumerate().skip(k + 1) {
            pos[v] = j;
        }
    }
    (path.len() == n).then_some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{complete_bipartite, erdos_renyi, ternary_tree};

    fn image(id: usize, edges: Vec<(usize, usize)>, map: Vec<(usize, usize)>) -> TreeImage {
        TreeImage { id, edges, map }
    }

    #[test]
    fn empty_and_path() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let hub = Graph::new(5).unwrap();
        let empty = check_packing(&g, &hub, &[], &[]);
        assert!(empty.is_valid() && empty.coverage == 0.0);
        let t = image(0, vec![(1, 0), (2, 1)], vec![(0, 1), (1, 2), (2, 3)]);
        let rep = check_packing(&g, &hub, std::slice::from_ref(&t), &[2]);
        assert!(rep.is_valid());
        assert!((rep.coverage - 2.0 / 4.0).abs() < 1e-12);
        assert_eq!(rep.hub_usage_max, 2);
        let rep = check_packing(&g, &hub, &[t.clone(), image(1, t.edges.clone(), t.map.clone())], &[]);
        assert!(!rep.edge_disjoint);
        assert_eq!(rep.duplicated_edges, vec![(1, 2), (2, 3)]);
        let bad = image(2, vec![(1, 0)], vec![(0, 0), (1, 4)]);
        assert_eq!(check_packing(&g, &hub, &[bad], &[]).invalid_images.len(), 1);
    }

    #[test]
    fn path_counts() {
        let g = complete_bipartite(3, 3).unwrap();
        let large = VertexSet::from_iter(6, 3..6);
        assert_eq!(path_intra_part_count(&g, &large, &[3, 0, 4]).unwrap(), 0);
        assert!(path_intra_part_count(&g, &large, &[3, 4]).is_err());
        let k = crate::graph::generate::complete(4).unwrap();
        assert_eq!(path_intra_part_count(&k, &VertexSet::full(4), &[0, 1, 2, 3]).unwrap(), 3);
    }

    #[test]
    fn ternary_by_layers() {
        let t = RootedTree::ternary(2).unwrap();
        let tg = ternary_tree(2).unwrap();
        // Even layers (1 + 9 vertices) vs odd layer (3): all edges cross.
        let parts = crate::tree::bipartition(&t, 0);
        let host = complete_bipartite(parts.0.len(), parts.1.len()).unwrap();
        let mut map = vec![0; 13];
        for (k, &v) in parts.0.iter().enumerate() {
            map[v] = k;
        }
        for (k, &v) in parts.1.iter().enumerate() {
            map[v] = parts.0.len() + k;
        }
        let side = VertexSet::from_iter(13, 0..parts.0.len());
        assert_eq!(ternary_noncrossing_count(&host, &side, &t, &map).unwrap(), 0);
        let ident: Vec<usize> = (0..13).collect();
        assert_eq!(ternary_noncrossing_count(&tg, &VertexSet::full(13), &t, &ident).unwrap(), 12);
    }

    #[test]
    fn hamilton_paths() {
        let k = crate::graph::generate::complete(4).unwrap();
        let mut count = 0;
        for_each_hamilton_path(&k, |_| count += 1).unwrap();
        assert_eq!(count, 24);
        let g = erdos_renyi(60, 0.2, 3).unwrap();
        let p = find_spanning_path(&g, 1, 100_000).unwrap();
        assert_eq!(p.len(), 60);
        assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
    }
}
