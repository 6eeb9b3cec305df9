//! Tree preparation: merging undersized trees, partitioning into pieces,
//! splitting off connectors and assigning slot classes.

use crate::error::{Error, Result};
use crate::seed;
use crate::tree::{
    assign_slots, partition_subtrees, split_connector, RootedTree, SlotWindow, SubtreeDecomposition, TreeSplit,
};

/// A tree as the engine sees it: possibly several input trees joined by
/// artificial edges.
#[derive(Debug, Clone)]
pub struct PreparedTree {
    /// `(input id, first vertex, vertex count)` of every member.
    pub members: Vec<(usize, usize, usize)>,
    /// Artificial joining edges, in merged-tree vertex ids.
    pub joins: Vec<(usize, usize)>,
    pub tree: RootedTree,
    pub decomposition: SubtreeDecomposition,
    pub split: TreeSplit,
}

impl PreparedTree {
    pub fn is_join(&self, a: usize, b: usize) -> bool {
        self.joins.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    }

    /// Input id and local vertex of a merged-tree vertex.
    pub fn member_of(&self, v: usize) -> (usize, usize) {
        self.members
            .iter()
            .find(|&&(_, start, len)| v >= start && v < start + len)
            .map(|&(id, start, _)| (id, v - start))
            .expect("every vertex belongs to a member")
    }
}

/// Merged tree before partitioning.
#[derive(Debug, Clone)]
pub struct MergedTree {
    pub members: Vec<(usize, usize, usize)>,
    pub joins: Vec<(usize, usize)>,
    pub tree: RootedTree,
}

/// Chains input trees with fewer than `min_size` vertices together until each
/// chain reaches `min_size`. Each join connects the two roots when both have
/// spare degree, otherwise the first vertices (in BFS order) with spare degree.
pub fn merge_small_trees(trees: &[(usize, &RootedTree)], min_size: usize, max_degree: usize) -> Result<Vec<MergedTree>> {
    let mut out = Vec::new();
    let mut group: Option<MergedTree> = None;
    for &(id, tree) in trees {
        if tree.n() >= min_size {
            out.push(MergedTree {
                members: vec![(id, 0, tree.n())],
                joins: Vec::new(),
                tree: tree.clone(),
            });
            continue;
        }
        group = Some(match group.take() {
            None => MergedTree {
                members: vec![(id, 0, tree.n())],
                joins: Vec::new(),
                tree: tree.clone(),
            },
            Some(g) => join(g, id, tree, max_degree)?,
        });
        if group.as_ref().is_some_and(|g| g.tree.n() >= min_size) {
            out.extend(group.take());
        }
    }
    out.extend(group);
    Ok(out)
}

fn join(g: MergedTree, id: usize, tree: &RootedTree, max_degree: usize) -> Result<MergedTree> {
    let offset = g.tree.n();
    let spare = |t: &RootedTree| t.bfs_order().iter().copied().find(|&v| t.degree(v) < max_degree);
    let (a, b) = if g.tree.degree(g.tree.root()) < max_degree && tree.degree(tree.root()) < max_degree {
        (g.tree.root(), tree.root())
    } else {
        match (spare(&g.tree), spare(tree)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Internal("no vertex with spare degree to join small trees".into())),
        }
    };
    let mut parent: Vec<Option<usize>> = (0..offset).map(|v| g.tree.parent(v)).collect();
    let moved = tree.rerooted(b)?;
    parent.extend((0..tree.n()).map(|v| Some(moved.parent(v).map_or(a, |p| p + offset))));
    let mut members = g.members;
    members.push((id, offset, tree.n()));
    let mut joins = g.joins;
    joins.push((b + offset, a));
    Ok(MergedTree {
        members,
        joins,
        tree: RootedTree::from_parents(parent)?,
    })
}

/// Pieces of every tree in processing order: trees stay contiguous and, within
/// a tree, ancestor pieces come first.
pub fn order_pieces(trees: &[(&RootedTree, &SubtreeDecomposition)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (ti, (tree, dec)) in trees.iter().enumerate() {
        let mut ps: Vec<usize> = (0..dec.pieces.len()).collect();
        ps.sort_by_key(|&p| (tree.depth(dec.pieces[p].root), dec.pieces[p].root));
        out.extend(ps.into_iter().map(|p| (ti, p)));
    }
    out
}

/// Partition, split and slot assignment of one merged tree. `loads` carries
/// the slot-class sizes of earlier trees so the collection is balanced as a
/// whole; it is updated on success.
pub fn prepare_tree(
    m: MergedTree,
    piece_size: usize,
    window: SlotWindow,
    loads: &mut [usize],
    seed: u64,
) -> Result<PreparedTree> {
    let r = loads.len() / 2;
    let decomposition = partition_subtrees(&m.tree, piece_size)?;
    let mut split = split_connector(&m.tree, &decomposition)?;
    assign_slots(&mut split, r, window, Some(loads), seed)?;
    for (l, c) in loads.iter_mut().zip(&split.classes) {
        *l += c.len();
    }
    Ok(PreparedTree {
        members: m.members,
        joins: m.joins,
        tree: m.tree,
        decomposition,
        split,
    })
}

/// [`prepare_tree`] for every merged tree; stops at the first failure.
pub fn prepare_trees(merged: Vec<MergedTree>, piece_size: usize, r: usize, window: SlotWindow, seed: u64) -> Result<Vec<PreparedTree>> {
    let mut loads = vec![0usize; 2 * r];
    merged
        .into_iter()
        .enumerate()
        .map(|(k, m)| prepare_tree(m, piece_size, window, &mut loads, seed::mix(seed, k as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trees_merge_until_large_enough() {
        let a = RootedTree::path(3).unwrap();
        let b = RootedTree::path(4).unwrap();
        let big = RootedTree::path(20).unwrap();
        let input = [(0, &a), (1, &big), (2, &b), (3, &a)];
        let merged = merge_small_trees(&input, 6, 3).unwrap();
        assert_eq!(merged.len(), 3);
        assert_eq!(merged[0].members, vec![(1, 0, 20)]);
        assert_eq!(merged[1].tree.n(), 7);
        assert_eq!(merged[1].joins, vec![(3, 0)]);
        assert_eq!(merged[1].tree.max_degree(), 2);
        assert_eq!(merged[2].members, vec![(3, 0, 3)]);
    }

    #[test]
    fn piece_order_is_topological() {
        let p = RootedTree::path(30).unwrap();
        let d = partition_subtrees(&p, 10).unwrap();
        let q = RootedTree::path(5).unwrap();
        let e = partition_subtrees(&q, 10).unwrap();
        let order = order_pieces(&[(&p, &d), (&q, &e)]);
        assert_eq!(order, vec![(0, 0), (0, 1), (0, 2), (1, 0)]);
        let roots: Vec<usize> = order[..3].iter().map(|&(_, x)| d.pieces[x].root).collect();
        assert!(roots.windows(2).all(|w| p.depth(w[0]) < p.depth(w[1])));
    }
}
