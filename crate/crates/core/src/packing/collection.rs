//! One round of the packing: a tree collection into one matching block.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::blowup::{check_blowup_contract, embed_batch, BlowupBatch, ConflictGraph, Stuck};
use super::config::PipelineConfig;
use super::connectors::{commit, embed_tree_connectors, uncommit, ConnectorEmbedding, HubContext};
use super::forests::{batch_forests, pack_batch_regular, Forest};
use super::prep::{merge_small_trees, prepare_tree, PreparedTree};
use super::state::{FailureRecord, PackingState};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;
use crate::structure::MatchingBlock;
use crate::tree::{RootedTree, SlotWindow};

/// Bulk result of one forest.
#[derive(Debug, Clone, Default)]
struct ForestImage {
    map: Vec<(usize, usize)>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Default)]
struct PairOutcome {
    images: BTreeMap<usize, ForestImage>,
    failed: Vec<(usize, Stuck)>,
}

/// Packs `trees` (with their input ids) into `host` using the slots of
/// `block`, updating `state`. Trees that cannot be embedded are left unpacked
/// and reported in `state.failures`; hard errors are parameter and
/// precondition violations.
pub fn pack_collection(
    host: &Graph,
    block: &MatchingBlock,
    trees: &[(usize, &RootedTree)],
    state: &mut PackingState,
    cfg: &PipelineConfig,
    round: usize,
) -> Result<()> {
    if trees.is_empty() {
        return Ok(());
    }
    let r = block.slots.len();
    let n = block.n_bullet;
    if r == 0 || n == 0 {
        return Err(Error::Precondition("matching block has no slots".into()));
    }
    for (s, slot) in block.slots.iter().enumerate() {
        if slot.v.iter().any(|v| v.len() != n) || slot.u.iter().any(Vec::is_empty) {
            return Err(Error::Precondition(format!("slot pair {s} is not carved to size {n} with a hub")));
        }
    }
    let hub_side = block.slots.iter().flat_map(|s| s.u.iter().map(Vec::len)).min().unwrap_or(0);
    let validated = cfg.validate(hub_side)?;
    let total: usize = trees.iter().map(|(_, t)| t.edge_count()).sum();
    let budget = (1.0 - cfg.nu) * r as f64 * working_d(block, cfg) * (n * n) as f64;
    if total as f64 > budget {
        return Err(Error::Precondition(format!(
            "collection has {total} edges, more than (1-nu) r d n^2 = {budget:.0}"
        )));
    }
    let size_cap = 2.0 * (1.0 - cfg.nu) * (r * n) as f64;
    for &(id, t) in trees {
        if t.n() as f64 > size_cap || t.max_degree() > cfg.max_degree {
            return Err(Error::Precondition(format!(
                "tree {id} has {} vertices and maximum degree {} (limits {size_cap:.0}, {})",
                t.n(),
                t.max_degree(),
                cfg.max_degree
            )));
        }
    }
    while state.hub_edges_by_round.len() <= round {
        state.hub_edges_by_round.push(Vec::new());
    }
    for u in block.hub_vertices() {
        if let Err(k) = state.hub_vertices.binary_search(&u) {
            state.hub_vertices.insert(k, u);
        }
    }
    let round_seed = seed::mix(cfg.seed, 1 + round as u64);

    // Tree preparation.
    let piece_size = cfg.piece_size_for(n);
    let window = SlotWindow {
        tolerance: cfg.slot_tolerance.unwrap_or(cfg.epsilon * n as f64),
        cap: Some((1.0 - 0.75 * cfg.nu) * n as f64),
    };
    let merged = merge_small_trees(trees, piece_size, cfg.max_degree)?;
    let mut loads = vec![0usize; 2 * r];
    let mut prepared: Vec<PreparedTree> = Vec::new();
    for (k, m) in merged.into_iter().enumerate() {
        let first = m.members[0].0;
        let ids: Vec<usize> = m.members.iter().map(|x| x.0).collect();
        // Large pieces can overflow a slot class; fall back to smaller ones.
        let mut attempt = Err(Error::Internal("no piece size tried".into()));
        for size in [piece_size, piece_size * 3 / 4, piece_size / 2, piece_size / 3] {
            if size == 0 {
                break;
            }
            attempt = prepare_tree(m.clone(), size, window, &mut loads, seed::mix(round_seed, k as u64));
            if attempt.is_ok() {
                break;
            }
        }
        match attempt {
            Ok(p) => prepared.push(p),
            Err(e) => {
                for id in ids {
                    state.failures.push(FailureRecord::from_error("prepare", Some(id), &e));
                }
                log::info!("tree {first} not prepared: {e}");
            }
        }
    }

    // Connectors, sequentially.
    let ctx = HubContext::new(
        host,
        block,
        cfg.m,
        validated.child_threshold,
        working_d(block, cfg) - cfg.epsilon.sqrt(),
        cfg.min_usage_tiebreak,
        cfg.connector_retries,
    );
    let mut rng = seed::stream(round_seed, 0xC0);
    let mut connectors: Vec<Option<ConnectorEmbedding>> = Vec::with_capacity(prepared.len());
    let mut failed = vec![None::<FailureRecord>; prepared.len()];
    for (k, pt) in prepared.iter().enumerate() {
        match embed_tree_connectors(&ctx, k, pt, &state.used, &state.hub_usage, &mut rng) {
            Ok(emb) => {
                commit(&emb, &mut state.used, &mut state.hub_usage, cfg.m)?;
                connectors.push(Some(emb));
            }
            Err(e) => {
                failed[k] = Some(FailureRecord::from_error("connectors", Some(pt.members[0].0), &e));
                connectors.push(None);
            }
        }
    }

    // Forests per slot pair; the target-set floor is checked here.
    let mut forests: Vec<Vec<Forest>> = vec![Vec::new(); r];
    for (k, pt) in prepared.iter().enumerate() {
        let Some(emb) = &connectors[k] else { continue };
        match build_forests(&ctx, k, pt, emb, &state.used, r) {
            Ok(fs) => {
                for (s, f) in fs.into_iter().enumerate() {
                    if f.vertex_count() > 0 {
                        forests[s].push(f);
                    }
                }
            }
            Err(e) => failed[k] = Some(FailureRecord::from_error("targets", Some(pt.members[0].0), &e)),
        }
    }
    for fs in forests.iter_mut() {
        fs.retain(|f| failed[f.owner].is_none());
    }

    // Bulk embedding, one worker per slot pair.
    let snapshot = &state.used;
    let outcomes: Vec<Result<PairOutcome>> = (0..r)
        .into_par_iter()
        .map(|s| {
            let slot = &block.slots[s];
            pack_pair(host, [&slot.v[0], &slot.v[1]], snapshot, &forests[s], cfg, seed::mix(round_seed, 0xB0 + s as u64))
        })
        .collect();

    // Merge.
    let mut bulk: Vec<Vec<ForestImage>> = vec![Vec::new(); prepared.len()];
    for (s, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        for (f, stuck) in outcome.failed {
            let owner = forests[s][f].owner;
            if failed[owner].is_none() {
                failed[owner] = Some(FailureRecord {
                    stage: "bulk".into(),
                    tree: Some(prepared[owner].members[0].0),
                    piece: None,
                    case: Some(format!("slot pair {s}")),
                    candidate_sizes: vec![stuck.candidates],
                    message: format!("bulk embedding stuck at tree vertex {}", stuck.vertex),
                });
            }
        }
        for (f, img) in outcome.images {
            bulk[forests[s][f].owner].push(img);
        }
    }
    for (k, pt) in prepared.iter().enumerate() {
        if let Some(record) = failed[k].take() {
            if let Some(emb) = &connectors[k] {
                uncommit(emb, &mut state.used, &mut state.hub_usage);
            }
            for &(id, _, _) in &pt.members {
                let mut rec = record.clone();
                rec.tree = Some(id);
                state.failures.push(rec);
            }
            continue;
        }
        let emb = connectors[k].as_ref().expect("connectors succeeded");
        let mut phi = vec![None; pt.tree.n()];
        for &(v, u) in emb.map.iter().chain(bulk[k].iter().flat_map(|b| b.map.iter())) {
            phi[v] = Some(u);
        }
        for img in &bulk[k] {
            for &(a, b) in &img.edges {
                if !state.used.add_edge(a, b) {
                    return Err(Error::Internal(format!("host edge {a}-{b} claimed twice")));
                }
            }
        }
        let hub_edges: Vec<(usize, usize)> = emb.edges.iter().copied().filter(|&(a, b)| {
            !pt.joins.iter().any(|&(x, y)| {
                let (px, py) = (phi[x], phi[y]);
                (px, py) == (Some(a), Some(b)) || (px, py) == (Some(b), Some(a))
            })
        }).collect();
        for &(x, y) in &pt.joins {
            if let (Some(a), Some(b)) = (phi[x], phi[y]) {
                state.used.remove_edge(a, b);
            }
        }
        state.hub_edges_by_round[round].extend(hub_edges);
        for &(id, start, len) in &pt.members {
            let mut map = Vec::with_capacity(len);
            for v in 0..len {
                let u = phi[start + v].ok_or_else(|| Error::Internal(format!("tree {id} vertex {v} left unmapped")))?;
                map.push((v, u));
            }
            state.trees[id].map = map;
        }
    }
    let cap = cfg.max_degree * cfg.m;
    for &u in &state.hub_vertices {
        if state.used.degree(u) > cap * (round + 1) {
            return Err(Error::Internal(format!("hub vertex {u} carries {} tree edges", state.used.degree(u))));
        }
    }
    Ok(())
}

/// The density used in thresholds: the configured `d`, lowered to the
/// block's measured density when that is smaller.
fn working_d(block: &MatchingBlock, cfg: &PipelineConfig) -> f64 {
    if block.d > 0.0 {
        cfg.d.min(block.d)
    } else {
        cfg.d
    }
}

/// Splits the bulk of one tree into per-pair forests and attaches the images
/// of connector neighbours; checks the target-set floor for each anchored
/// vertex.
fn build_forests(
    ctx: &HubContext<'_>,
    k: usize,
    pt: &PreparedTree,
    emb: &ConnectorEmbedding,
    used: &Graph,
    r: usize,
) -> Result<Vec<Forest>> {
    let tree = &pt.tree;
    let split = &pt.split;
    let mut phi = vec![None; tree.n()];
    for &(v, u) in &emb.map {
        phi[v] = Some(u);
    }
    let mut slot_of = vec![None; tree.n()];
    for s in 0..r {
        for i in 0..2 {
            for &v in split.class(s, i) {
                slot_of[v] = Some((s, i));
            }
        }
    }
    let mut out: Vec<Forest> = (0..r)
        .map(|s| Forest {
            owner: k,
            sides: [split.class(s, 0).to_vec(), split.class(s, 1).to_vec()],
            edges: Vec::new(),
            anchored: Vec::new(),
        })
        .collect();
    for (c, p) in tree.edges() {
        if let (Some((s, _)), Some(_)) = (slot_of[c], slot_of[p]) {
            out[s].edges.push((c, p));
        }
    }
    for v in 0..tree.n() {
        let Some((s, i)) = slot_of[v] else { continue };
        let anchors: Vec<usize> = tree.neighbors(v).filter_map(|z| phi[z]).collect();
        if anchors.is_empty() {
            continue;
        }
        let mut target = ctx.v_set(s, i).clone();
        for &u in &anchors {
            target.intersect_with(&ctx.host.neighbors(u).difference(used.neighbors(u)));
        }
        let floor = ctx.target_floor(anchors.len()).max(1);
        if target.len() < floor {
            return Err(Error::Embedding(crate::error::EmbeddingFailure {
                tree: k,
                piece: pt.decomposition.piece_of[v],
                case: "target".into(),
                candidate_sizes: vec![target.len(), floor],
            }));
        }
        out[s].anchored.push((v, anchors));
    }
    Ok(out)
}

/// Batches the forests of one pair and embeds them batch by batch; a failed
/// batch with several forests is split into single-forest batches.
fn pack_pair(
    host: &Graph,
    sides: [&[usize]; 2],
    snapshot: &Graph,
    forests: &[Forest],
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<PairOutcome> {
    let n = sides[0].len();
    let hn = host.n();
    let side_sets = [VertexSet::from_iter(hn, sides[0].iter().copied()), VertexSet::from_iter(hn, sides[1].iter().copied())];
    let plan = batch_forests(forests, n, cfg.q, cfg.zeta, cfg.m)?;
    let mut queue: Vec<Vec<usize>> = plan.batches;
    let mut used = snapshot.clone();
    let mut outcome = PairOutcome::default();
    let mut done_batches: Vec<BlowupBatch> = Vec::new();
    let mut done_maps: Vec<Vec<usize>> = Vec::new();
    let mut done_anchors: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    // Host images already taken by anchored vertices, per anchor image.
    let mut anchor_hits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let before = snapshot.clone();
    let mut qi = 0;
    while qi < queue.len() {
        let members = queue[qi].clone();
        qi += 1;
        let refs: Vec<&Forest> = members.iter().map(|&f| &forests[f]).collect();
        let batch_seed = seed::mix(seed, qi as u64);
        let regular = pack_batch_regular(&refs, n, cfg.q, cfg.zeta, batch_seed)?;
        // Compact template: vertices in placement order.
        let mut side = Vec::new();
        let mut owner = Vec::new();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (fi, place) in regular.placement.iter().enumerate() {
            for &(v, t) in place {
                index.insert((fi, v), side.len());
                side.push((t >= n) as u8);
                owner.push((fi, v));
            }
        }
        let mut edges = Vec::new();
        for (fi, f) in refs.iter().enumerate() {
            for &(a, b) in &f.edges {
                edges.push((index[&(fi, a)], index[&(fi, b)]));
            }
        }
        let mut targets = vec![None; side.len()];
        let mut forbidden = vec![VertexSet::new(hn); side.len()];
        let mut anchors_here = Vec::new();
        for (fi, f) in refs.iter().enumerate() {
            for (v, images) in &f.anchored {
                let y = index[&(fi, *v)];
                let mut t = side_sets[side[y] as usize].clone();
                for &u in images {
                    t.intersect_with(&host.neighbors(u).difference(used.neighbors(u)));
                    for &h in anchor_hits.get(&u).map_or(&[][..], Vec::as_slice) {
                        forbidden[y].insert(h);
                    }
                }
                targets[y] = Some(t);
                anchors_here.push((y, images.clone()));
            }
        }
        let batch = BlowupBatch { side, edges, targets };
        let mut rng = seed::stream(batch_seed, 0);
        match embed_batch(host, [&side_sets[0], &side_sets[1]], &mut used, &batch, &forbidden, cfg.batch_retries, &mut rng) {
            Ok(map) => {
                let mut images: Vec<ForestImage> = vec![ForestImage::default(); refs.len()];
                for (y, &(fi, v)) in owner.iter().enumerate() {
                    images[fi].map.push((v, map[y]));
                }
                for (fi, f) in refs.iter().enumerate() {
                    for &(a, b) in &f.edges {
                        images[fi].edges.push((map[index[&(fi, a)]], map[index[&(fi, b)]]));
                    }
                }
                for (y, list) in &anchors_here {
                    let h = map[*y];
                    let fi = owner[*y].0;
                    for &u in list {
                        if !host.has_edge(u, h) || !used.add_edge(u, h) {
                            return Err(Error::Internal(format!("anchor edge {u}-{h} unavailable")));
                        }
                        images[fi].edges.push((u, h));
                        anchor_hits.entry(u).or_default().push(h);
                    }
                }
                for (fi, img) in images.into_iter().enumerate() {
                    outcome.images.insert(members[fi], img);
                }
                done_batches.push(batch);
                done_maps.push(map);
                done_anchors.push(anchors_here);
            }
            Err(stuck) if members.len() > 1 => {
                log::debug!("batch of {} forests stuck at {stuck:?}; splitting", members.len());
                queue.extend(members.iter().map(|&f| vec![f]));
            }
            Err(stuck) => {
                let (_, v) = owner[stuck.vertex];
                outcome.failed.push((
                    members[0],
                    Stuck {
                        vertex: v,
                        candidates: stuck.candidates,
                    },
                ));
            }
        }
    }
    let conflicts = ConflictGraph::from_anchors(&done_anchors);
    check_blowup_contract(host, sides, &before, &done_batches, &conflicts, &done_maps)
        .map_err(|e| Error::Internal(format!("blow-up contract: {e}")))?;
    Ok(outcome)
}
