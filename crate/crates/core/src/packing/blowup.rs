//! Sequential randomized embedding of template batches into a bipartite host
//! pair, honouring target sets and a conflict graph between batches.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;

use crate::bitset::VertexSet;
use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::seed::{self, Rng};

/// One template graph to embed: vertex `v` must land on host side `side[v]`,
/// inside `targets[v]` when that is set.
#[derive(Debug, Clone, Default)]
pub struct BlowupBatch {
    pub side: Vec<u8>,
    pub edges: Vec<(usize, usize)>,
    pub targets: Vec<Option<VertexSet>>,
}

impl BlowupBatch {
    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }
}

/// `Γ` on nodes `(batch, template vertex)`; adjacent nodes need distinct images.
#[derive(Debug, Clone, Default)]
pub struct ConflictGraph {
    adj: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

impl ConflictGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Joins every two nodes of different batches whose anchor images
    /// intersect. `anchors[b]` lists `(template vertex, anchor images)`.
    pub fn from_anchors(anchors: &[Vec<(usize, Vec<usize>)>]) -> Self {
        let mut by_image: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (b, list) in anchors.iter().enumerate() {
            for (y, images) in list {
                for &u in images {
                    by_image.entry(u).or_default().push((b, *y));
                }
            }
        }
        let mut g = Self::new();
        for nodes in by_image.values() {
            for (k, &x) in nodes.iter().enumerate() {
                for &y in &nodes[k + 1..] {
                    if x.0 != y.0 {
                        g.add_edge(x, y);
                    }
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, x: (usize, usize), y: (usize, usize)) -> bool {
        if x.0 == y.0 || self.adj.get(&x).is_some_and(|n| n.contains(&y)) {
            return false;
        }
        self.adj.entry(x).or_default().push(y);
        self.adj.entry(y).or_default().push(x);
        true
    }

    pub fn neighbors(&self, x: (usize, usize)) -> &[(usize, usize)] {
        self.adj.get(&x).map_or(&[], Vec::as_slice)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Largest number of neighbours a node has inside one other batch.
    pub fn max_degree_into_batch(&self) -> usize {
        self.adj
            .values()
            .map(|ns| {
                let mut per: BTreeMap<usize, usize> = BTreeMap::new();
                for &(b, _) in ns {
                    *per.entry(b).or_default() += 1;
                }
                per.values().copied().max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Where a batch got stuck.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stuck {
    pub vertex: usize,
    pub candidates: usize,
}

/// Candidates sampled per vertex; the one with most free edges wins.
const SAMPLE: usize = 4;
const COMPONENT_RETRIES: usize = 3;

struct Embedder<'a> {
    host: &'a Graph,
    sides: [&'a VertexSet; 2],
    batch: &'a BlowupBatch,
    forbidden: &'a [VertexSet],
    adj: Vec<Vec<usize>>,
    phi: Vec<Option<usize>>,
    taken: VertexSet,
}

impl Embedder<'_> {
    fn free(&self, used: &Graph, u: usize) -> VertexSet {
        self.host.neighbors(u).difference(used.neighbors(u))
    }

    fn candidates(&self, used: &Graph, v: usize) -> VertexSet {
        let mut c = self.sides[self.batch.side[v] as usize].difference(&self.taken);
        if let Some(t) = &self.batch.targets[v] {
            c.intersect_with(t);
        }
        c.difference_with(&self.forbidden[v]);
        for &w in &self.adj[v] {
            if let Some(pw) = self.phi[w] {
                c.intersect_with(&self.free(used, pw));
            }
        }
        c
    }

    /// Whether every unplaced neighbour of `v` keeps a candidate if `v ↦ u`.
    fn lookahead(&self, used: &Graph, v: usize, u: usize) -> bool {
        let free = self.free(used, u);
        let mut open = 0;
        for &c in &self.adj[v] {
            if self.phi[c].is_some() {
                continue;
            }
            open += 1;
            if let Some(t) = &self.batch.targets[c] {
                let mut room = free.intersection(t);
                room.difference_with(&self.taken);
                room.difference_with(&self.forbidden[c]);
                if room.is_empty() {
                    return false;
                }
            }
        }
        free.intersection_len_without(self.sides[1 - self.batch.side[v] as usize], &self.taken) >= open
    }

    fn place(&mut self, used: &mut Graph, v: usize, u: usize, added: &mut Vec<(usize, usize)>) {
        self.phi[v] = Some(u);
        self.taken.insert(u);
        for &w in &self.adj[v] {
            if let Some(pw) = self.phi[w] {
                used.add_edge(u, pw);
                added.push((u, pw));
            }
        }
    }

    fn undo(&mut self, used: &mut Graph, verts: &[usize], added: &mut Vec<(usize, usize)>, mark: usize) {
        for &(a, b) in &added[mark..] {
            used.remove_edge(a, b);
        }
        added.truncate(mark);
        for &v in verts {
            if let Some(u) = self.phi[v].take() {
                self.taken.remove(u);
            }
        }
    }

    fn component_order(&self, start: usize, seen: &mut [bool]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    fn run_component(&mut self, used: &mut Graph, order: &[usize], added: &mut Vec<(usize, usize)>, rng: &mut Rng) -> std::result::Result<(), Stuck> {
        for &v in order {
            let cands = self.candidates(used, v).to_vec();
            let mut pool: Vec<usize> = cands.clone();
            pool.shuffle(rng);
            let mut best: Option<(usize, usize)> = None;
            let mut seen = 0;
            for &u in &pool {
                if !self.lookahead(used, v, u) {
                    continue;
                }
                let score = self.host.degree(u) - used.degree(u);
                if best.is_none_or(|(_, s)| score > s) {
                    best = Some((u, score));
                }
                seen += 1;
                if seen == SAMPLE {
                    break;
                }
            }
            let Some((u, _)) = best.or_else(|| pool.first().map(|&u| (u, 0))) else {
                return Err(Stuck {
                    vertex: v,
                    candidates: 0,
                });
            };
            self.place(used, v, u, added);
        }
        Ok(())
    }
}

/// Embeds one batch injectively; `forbidden[v]` are images excluded by
/// conflicts. On success the batch edges are added to `used` and their host
/// images returned alongside the map.
pub fn embed_batch(
    host: &Graph,
    sides: [&VertexSet; 2],
    used: &mut Graph,
    batch: &BlowupBatch,
    forbidden: &[VertexSet],
    retries: usize,
    rng: &mut Rng,
) -> std::result::Result<Vec<usize>, Stuck> {
    let k = batch.len();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &batch.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut worst = Stuck {
        vertex: 0,
        candidates: 0,
    };
    for _ in 0..retries.max(1) {
        let mut e = Embedder {
            host,
            sides,
            batch,
            forbidden,
            adj: adj.clone(),
            phi: vec![None; k],
            taken: VertexSet::new(host.n()),
        };
        // Components start at their most constrained anchored vertex.
        let mut starts: Vec<usize> = (0..k).collect();
        starts.sort_by_key(|&v| (batch.targets[v].as_ref().map_or(usize::MAX, VertexSet::len), v));
        let mut seen = vec![false; k];
        let mut comps = Vec::new();
        for v in starts {
            if !seen[v] {
                comps.push(e.component_order(v, &mut seen));
            }
        }
        let mut added = Vec::new();
        let mut ok = true;
        for comp in &comps {
            let mut done = false;
            for _ in 0..COMPONENT_RETRIES {
                let mark = added.len();
                match e.run_component(used, comp, &mut added, rng) {
                    Ok(()) => {
                        done = true;
                        break;
                    }
                    Err(s) => {
                        worst = s;
                        e.undo(used, comp, &mut added, mark);
                    }
                }
            }
            if !done {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(e.phi.into_iter().map(|u| u.expect("all placed")).collect());
        }
        let all: Vec<usize> = (0..k).collect();
        e.undo(used, &all, &mut added, 0);
    }
    Err(worst)
}

/// Images already given to the conflict neighbours of each vertex of batch `b`.
pub fn forbidden_images(n: usize, b: usize, batch: &BlowupBatch, conflicts: &ConflictGraph, maps: &[Option<Vec<usize>>]) -> Vec<VertexSet> {
    (0..batch.len())
        .map(|y| {
            let mut f = VertexSet::new(n);
            for &(b2, y2) in conflicts.neighbors((b, y)) {
                if let Some(Some(m)) = maps.get(b2) {
                    f.insert(m[y2]);
                }
            }
            f
        })
        .collect()
}

/// Embeds every batch in order into the pair `(sides[0], sides[1])` of `host`,
/// avoiding the edges in `used` and across batches; all-or-nothing.
pub fn blowup_pack(
    host: &Graph,
    sides: [&[usize]; 2],
    used: &mut Graph,
    batches: &[BlowupBatch],
    conflicts: &ConflictGraph,
    retries: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let n = host.n();
    let sets = [VertexSet::from_iter(n, sides[0].iter().copied()), VertexSet::from_iter(n, sides[1].iter().copied())];
    if !sets[0].is_disjoint(&sets[1]) {
        return param("host sides overlap");
    }
    for (b, batch) in batches.iter().enumerate() {
        if batch.targets.len() != batch.len() {
            return param(format!("batch {b} has {} targets for {} vertices", batch.targets.len(), batch.len()));
        }
        for i in 0..2 {
            let need = batch.side.iter().filter(|&&s| s as usize == i).count();
            if need > sets[i].len() {
                return param(format!("batch {b} needs {need} vertices on side {i}, host has {}", sets[i].len()));
            }
        }
        if batch.side.iter().any(|&s| s > 1) || batch.edges.iter().any(|&(x, y)| batch.side[x] == batch.side[y]) {
            return param(format!("batch {b} is not bipartite along its sides"));
        }
    }
    let before = used.clone();
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; batches.len()];
    for (b, batch) in batches.iter().enumerate() {
        let forbidden = forbidden_images(n, b, batch, conflicts, &maps);
        let mut rng = seed::stream(seed, b as u64);
        match embed_batch(host, [&sets[0], &sets[1]], used, batch, &forbidden, retries, &mut rng) {
            Ok(m) => maps[b] = Some(m),
            Err(stuck) => {
                *used = before;
                return Err(Error::ProbabilisticFailure {
                    what: "blow-up embedding",
                    attempts: retries.max(1),
                    detail: format!(
                        "batch {b} stuck at template vertex {} with {} candidates",
                        stuck.vertex, stuck.candidates
                    ),
                });
            }
        }
    }
    Ok(maps.into_iter().map(|m| m.expect("all batches embedded")).collect())
}

/// Post-hoc audit of (B1) sides, (B2) targets, (B3) conflicts, per-batch
/// injectivity, and edge-disjoint images avoiding `used_before`.
pub fn check_blowup_contract(
    host: &Graph,
    sides: [&[usize]; 2],
    used_before: &Graph,
    batches: &[BlowupBatch],
    conflicts: &ConflictGraph,
    maps: &[Vec<usize>],
) -> std::result::Result<(), String> {
    if maps.len() != batches.len() {
        return Err("one map per batch expected".into());
    }
    let mut seen_edges = std::collections::BTreeSet::new();
    for (b, (batch, map)) in batches.iter().zip(maps).enumerate() {
        if map.len() != batch.len() {
            return Err(format!("batch {b}: map has wrong length"));
        }
        let mut images = std::collections::BTreeSet::new();
        for (v, &u) in map.iter().enumerate() {
            if !sides[batch.side[v] as usize].contains(&u) {
                return Err(format!("(B1) batch {b} vertex {v} mapped to {u} outside its side"));
            }
            if let Some(t) = &batch.targets[v] {
                if !t.contains(u) {
                    return Err(format!("(B2) batch {b} vertex {v} mapped to {u} outside its target"));
                }
            }
            if !images.insert(u) {
                return Err(format!("batch {b}: image {u} used twice"));
            }
            for &(b2, y2) in conflicts.neighbors((b, v)) {
                if maps.get(b2).is_some_and(|m2| m2.get(y2) == Some(&u)) {
                    return Err(format!("(B3) conflict ({b},{v})-({b2},{y2}) share image {u}"));
                }
            }
        }
        for &(x, y) in &batch.edges {
            let (a, c) = (map[x].min(map[y]), map[x].max(map[y]));
            if !host.has_edge(a, c) || used_before.has_edge(a, c) || !seen_edges.insert((a, c)) {
                return Err(format!("batch {b}: edge {x}-{y} lands on unavailable host edge {a}-{c}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::complete_bipartite;

    fn regular_template(n: usize, k: usize) -> BlowupBatch {
        let edges = (0..n).flat_map(|a| (0..k).map(move |j| (a, n + (a + j) % n))).collect();
        BlowupBatch {
            side: (0..2 * n).map(|v| (v >= n) as u8).collect(),
            edges,
            targets: vec![None; 2 * n],
        }
    }

    #[test]
    fn three_regular_into_complete_pair() {
        let host = complete_bipartite(60, 60).unwrap();
        let a: Vec<usize> = (0..60).collect();
        let b: Vec<usize> = (60..120).collect();
        let batch = regular_template(50, 3);
        assert_eq!(batch.edges.len(), 150);
        let mut used = Graph::new(120).unwrap();
        let conflicts = ConflictGraph::new();
        let maps = blowup_pack(&host, [&a, &b], &mut used, std::slice::from_ref(&batch), &conflicts, 4, 3).unwrap();
        let empty = Graph::new(120).unwrap();
        check_blowup_contract(&host, [&a, &b], &empty, &[batch], &conflicts, &maps).unwrap();
        assert_eq!(used.edge_count(), 150);
    }

    #[test]
    fn forced_collision_fails() {
        let host = complete_bipartite(5, 5).unwrap();
        let a: Vec<usize> = (0..5).collect();
        let b: Vec<usize> = (5..10).collect();
        let target = VertexSet::from_iter(10, [2]);
        let batch = BlowupBatch {
            side: vec![0],
            edges: Vec::new(),
            targets: vec![Some(target)],
        };
        let mut conflicts = ConflictGraph::new();
        conflicts.add_edge((0, 0), (1, 0));
        let mut used = Graph::new(10).unwrap();
        let err = blowup_pack(&host, [&a, &b], &mut used, &[batch.clone(), batch], &conflicts, 3, 1).unwrap_err();
        assert!(matches!(err, Error::ProbabilisticFailure { .. }), "{err}");
    }

    #[test]
    fn conflicts_from_shared_anchors() {
        let anchors = vec![vec![(0, vec![7]), (1, vec![8])], vec![(3, vec![7, 9])], vec![(2, vec![9])]];
        let g = ConflictGraph::from_anchors(&anchors);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors((1, 3)).len(), 2);
        assert_eq!(g.max_degree_into_batch(), 1);
    }
}
