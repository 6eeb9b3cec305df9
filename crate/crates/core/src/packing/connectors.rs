//! Embedding of the connector forests `C_T` into the hub slots `U_{s,i}`.
//!
//! Pieces are handled in order. The root `x` of a piece with slot `(s, i)` goes
//! next to its parent's image: into `U_{s',1-j}` when the parent sits (or will
//! sit) in slot side `(s', j)`, or into `U_{s,i}` when `x` is the tree root.
//! Its children go into the opposite side `U_{s',j}`, restricted to vertices
//! with many free neighbours in `W′ = U_{s,i}` where the grandchildren go.
//! Hub vertices already carrying `M` images (`U′`) and vertices already used
//! by the same tree (`U″`) are never chosen.

use rand::seq::SliceRandom;

use super::prep::PreparedTree;
use crate::bitset::VertexSet;
use crate::error::{EmbeddingFailure, Error, Result};
use crate::graph::Graph;
use crate::seed::Rng;
use crate::structure::MatchingBlock;

/// Read-only view of the hub for one round.
pub struct HubContext<'a> {
    pub host: &'a Graph,
    pub m: usize,
    pub child_threshold: usize,
    /// `(d - √ε)`, the per-neighbour shrink factor of target sets.
    pub shrink: f64,
    pub n_bullet: usize,
    pub min_usage_tiebreak: bool,
    pub retries: usize,
    u_sets: Vec<VertexSet>,
    v_sets: Vec<VertexSet>,
    u_slot: Vec<Option<(usize, usize)>>,
}

impl<'a> HubContext<'a> {
    pub fn new(
        host: &'a Graph,
        block: &MatchingBlock,
        m: usize,
        child_threshold: usize,
        shrink: f64,
        min_usage_tiebreak: bool,
        retries: usize,
    ) -> Self {
        let n = host.n();
        let mut u_sets = Vec::new();
        let mut v_sets = Vec::new();
        let mut u_slot = vec![None; n];
        for (s, slot) in block.slots.iter().enumerate() {
            for i in 0..2 {
                u_sets.push(VertexSet::from_iter(n, slot.u[i].iter().copied()));
                v_sets.push(VertexSet::from_iter(n, slot.v[i].iter().copied()));
                for &u in &slot.u[i] {
                    u_slot[u] = Some((s, i));
                }
            }
        }
        Self {
            host,
            m,
            child_threshold,
            shrink: shrink.max(0.0),
            n_bullet: block.n_bullet,
            min_usage_tiebreak,
            retries: retries.max(1),
            u_sets,
            v_sets,
            u_slot,
        }
    }

    pub fn u_set(&self, s: usize, i: usize) -> &VertexSet {
        &self.u_sets[2 * s + i]
    }

    pub fn v_set(&self, s: usize, i: usize) -> &VertexSet {
        &self.v_sets[2 * s + i]
    }

    pub fn hub_slot(&self, u: usize) -> Option<(usize, usize)> {
        self.u_slot[u]
    }

    /// Minimum target-set size for a bulk vertex with `b` embedded connector
    /// neighbours.
    pub fn target_floor(&self, b: usize) -> usize {
        (self.shrink.powi(b as i32) * self.n_bullet as f64).floor() as usize
    }
}

/// Connector images of one tree and the hub edges they use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectorEmbedding {
    pub map: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize)>,
}

struct Work<'c, 'a> {
    ctx: &'c HubContext<'a>,
    used: &'c Graph,
    usage: &'c [usize],
    tree_id: usize,
    phi: Vec<Option<usize>>,
    own: VertexSet,
    edges: Vec<(usize, usize)>,
}

impl Work<'_, '_> {
    /// `N_{G′}(v)`, counting edges taken by this tree so far.
    fn free_neighbors(&self, v: usize) -> VertexSet {
        let mut out = self.ctx.host.neighbors(v).difference(self.used.neighbors(v));
        for &(x, y) in &self.edges {
            if x == v {
                out.remove(y);
            } else if y == v {
                out.remove(x);
            }
        }
        out
    }

    /// `U_{s,i} ∖ (U′ ∪ U″)`
    fn available(&self, s: usize, i: usize) -> VertexSet {
        let mut set = self.ctx.u_set(s, i).difference(&self.own);
        for u in self.ctx.u_set(s, i).iter() {
            if self.usage[u] >= self.ctx.m {
                set.remove(u);
            }
        }
        set
    }

    fn ordered(&self, set: &VertexSet, rng: &mut Rng) -> Vec<usize> {
        let mut v = set.to_vec();
        v.shuffle(rng);
        if self.ctx.min_usage_tiebreak {
            v.sort_by_key(|&u| self.usage[u]);
        }
        v
    }

    fn place(&mut self, v: usize, u: usize) {
        self.phi[v] = Some(u);
        self.own.insert(u);
    }

    fn unplace(&mut self, v: usize) {
        if let Some(u) = self.phi[v].take() {
            self.own.remove(u);
        }
    }

    fn fail(&self, piece: usize, case: &str, sizes: Vec<usize>) -> Error {
        Error::Embedding(EmbeddingFailure {
            tree: self.tree_id,
            piece,
            case: case.into(),
            candidate_sizes: sizes,
        })
    }
}

/// Embeds all connector vertices of one tree; on error nothing is committed.
pub fn embed_tree_connectors(
    ctx: &HubContext<'_>,
    tree_id: usize,
    pt: &PreparedTree,
    used: &Graph,
    usage: &[usize],
    rng: &mut Rng,
) -> Result<ConnectorEmbedding> {
    let tree = &pt.tree;
    let dec = &pt.decomposition;
    let split = &pt.split;
    let mut w = Work {
        ctx,
        used,
        usage,
        tree_id,
        phi: vec![None; tree.n()],
        own: VertexSet::new(ctx.host.n()),
        edges: Vec::new(),
    };
    let mut pieces: Vec<usize> = (0..dec.pieces.len()).collect();
    pieces.sort_by_key(|&p| (tree.depth(dec.pieces[p].root), dec.pieces[p].root));
    for p in pieces {
        let x = dec.pieces[p].root;
        let (s, i) = split.slot_of_piece[p].ok_or_else(|| Error::Internal(format!("piece {p} has no slot")))?;
        // (s*, i*): children go to U_{s*,i*}, x to U_{s*,1-i*}.
        let (case, star, cands, anchor) = match tree.parent(x) {
            None => ("case3", (s, 1 - i), w.available(s, i), None),
            Some(y) if split.is_connector(y) => {
                let py = w.phi[y].ok_or_else(|| Error::Internal(format!("parent {y} of piece root {x} not embedded")))?;
                let (s2, j) = ctx
                    .hub_slot(py)
                    .ok_or_else(|| Error::Internal(format!("image {py} is not a hub vertex")))?;
                let mut c = w.available(s2, 1 - j);
                c.intersect_with(&w.free_neighbors(py));
                ("case1", (s2, j), c, Some(py))
            }
            Some(y) => {
                let (s2, j) = split
                    .slot_of_vertex(dec, tree, y)
                    .ok_or_else(|| Error::Internal(format!("bulk vertex {y} has no slot")))?;
                let mut c = w.available(s2, 1 - j);
                // Keep the future target set of y large: common free
                // neighbourhood in V_{s2,j} of all embedded connector
                // neighbours of y together with the candidate.
                let mut base = ctx.v_set(s2, j).clone();
                let mut b = 1;
                for z in tree.neighbors(y) {
                    if split.is_connector(z) {
                        if let Some(pz) = w.phi[z] {
                            base.intersect_with(&w.free_neighbors(pz));
                            b += 1;
                        }
                    }
                }
                let floor = ctx.target_floor(b);
                for u in c.to_vec() {
                    if w.free_neighbors(u).intersection_len(&base) < floor.max(1) {
                        c.remove(u);
                    }
                }
                ("case2", (s2, j), c, None)
            }
        };
        let order = w.ordered(&cands, rng);
        let mut placed = false;
        let mut sizes = vec![cands.len()];
        for &u in order.iter().take(ctx.retries) {
            w.place(x, u);
            if let Some(a) = anchor {
                w.edges.push((a, u));
            }
            match place_children(&mut w, pt, p, x, star, (s, i), rng) {
                Ok(()) => {
                    placed = true;
                    break;
                }
                Err(inner) => {
                    sizes = vec![cands.len()];
                    sizes.extend(inner);
                    if anchor.is_some() {
                        w.edges.pop();
                    }
                    w.unplace(x);
                }
            }
        }
        if !placed {
            return Err(w.fail(p, case, sizes));
        }
    }
    let map = (0..tree.n()).filter_map(|v| w.phi[v].map(|u| (v, u))).collect();
    Ok(ConnectorEmbedding { map, edges: w.edges })
}

/// Children of `x` in the piece into `W`, grandchildren into `W′`. Returns the
/// candidate sizes of the step that failed.
fn place_children(
    w: &mut Work<'_, '_>,
    pt: &PreparedTree,
    p: usize,
    x: usize,
    star: (usize, usize),
    own_slot: (usize, usize),
    rng: &mut Rng,
) -> std::result::Result<(), Vec<usize>> {
    let tree = &pt.tree;
    let dec = &pt.decomposition;
    let in_piece = |v: usize| dec.piece_of[v] == p;
    let kids: Vec<usize> = tree.children(x).iter().copied().filter(|&c| in_piece(c)).collect();
    if kids.is_empty() {
        return Ok(());
    }
    let px = w.phi[x].expect("x placed");
    let edge_mark = w.edges.len();
    let (s, i) = own_slot;
    let mut ws = w.available(star.0, star.1);
    ws.intersect_with(&w.free_neighbors(px));
    let wide = w.available(s, i);
    let bulk_floor = w.ctx.target_floor(1).max(1);
    for c in ws.to_vec() {
        if w.free_neighbors(c).intersection_len(&wide) < w.ctx.child_threshold {
            ws.remove(c);
        }
    }
    let mut placed_kids: Vec<usize> = Vec::new();
    let mut placed_grand: Vec<usize> = Vec::new();
    let rollback = |w: &mut Work<'_, '_>, kids: &[usize], grand: &[usize]| {
        for &v in kids.iter().chain(grand) {
            w.unplace(v);
        }
        w.edges.truncate(edge_mark);
    };
    for &c in &kids {
        let mut ok = false;
        let cands = w.ordered(&ws.difference(&w.own), rng);
        let grand: Vec<usize> = tree.children(c).iter().copied().filter(|&g| in_piece(g)).collect();
        let mut last = vec![cands.len()];
        for &u in cands.iter().take(w.ctx.retries) {
            w.place(c, u);
            w.edges.push((px, u));
            let mark = w.edges.len();
            let mut done = Vec::new();
            let mut good = true;
            for &g in &grand {
                let mut gc = w.available(s, i);
                gc.intersect_with(&w.free_neighbors(u));
                // A grandchild with bulk children needs room in V_{s,1-i}.
                if tree.children(g).iter().any(|&b| in_piece(b)) {
                    let v_other = w.ctx.v_set(s, 1 - i);
                    for z in gc.to_vec() {
                        if w.free_neighbors(z).intersection_len(v_other) < bulk_floor {
                            gc.remove(z);
                        }
                    }
                }
                match w.ordered(&gc, rng).first() {
                    Some(&z) => {
                        w.place(g, z);
                        w.edges.push((u, z));
                        done.push(g);
                    }
                    None => {
                        last = vec![cands.len(), gc.len()];
                        good = false;
                        break;
                    }
                }
            }
            if good {
                placed_kids.push(c);
                placed_grand.extend(done);
                ok = true;
                break;
            }
            for g in done {
                w.unplace(g);
            }
            w.edges.truncate(mark - 1);
            w.unplace(c);
        }
        if !ok {
            rollback(w, &placed_kids, &placed_grand);
            return Err(last);
        }
    }
    Ok(())
}

/// Embeds the connectors of every tree in order and commits them to `used`
/// and `usage`; stops at the first failure.
pub fn embed_connectors(
    ctx: &HubContext<'_>,
    trees: &[PreparedTree],
    used: &mut Graph,
    usage: &mut [usize],
    rng: &mut Rng,
) -> Result<Vec<ConnectorEmbedding>> {
    let mut out = Vec::with_capacity(trees.len());
    for (k, pt) in trees.iter().enumerate() {
        let emb = embed_tree_connectors(ctx, k, pt, used, usage, rng)?;
        commit(&emb, used, usage, ctx.m)?;
        out.push(emb);
    }
    Ok(out)
}

/// Adds a connector embedding to the global bookkeeping, checking the usage
/// cap and edge-disjointness.
pub fn commit(emb: &ConnectorEmbedding, used: &mut Graph, usage: &mut [usize], m: usize) -> Result<()> {
    for &(a, b) in &emb.edges {
        if !used.add_edge(a, b) {
            return Err(Error::Internal(format!("hub edge {a}-{b} used twice")));
        }
    }
    for &(_, u) in &emb.map {
        usage[u] += 1;
        if usage[u] > m {
            return Err(Error::Internal(format!("hub vertex {u} exceeds {m} images")));
        }
    }
    Ok(())
}

/// Reverses [`commit`].
pub fn uncommit(emb: &ConnectorEmbedding, used: &mut Graph, usage: &mut [usize]) {
    for &(a, b) in &emb.edges {
        used.remove_edge(a, b);
    }
    for &(_, u) in &emb.map {
        usage[u] -= 1;
    }
}
