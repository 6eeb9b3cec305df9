//! Decomposition of a rooted tree into vertex-disjoint rooted subtrees whose
//! sizes lie in `[t, 2Δt]`.

use super::RootedTree;
use crate::error::{param, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub root: usize,
    /// Sorted vertex list; always contains `root`.
    pub vertices: Vec<usize>,
}

impl Piece {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeDecomposition {
    pub t: usize,
    pub pieces: Vec<Piece>,
    /// Index into `pieces` for every tree vertex.
    pub piece_of: Vec<usize>,
}

impl SubtreeDecomposition {
    /// `D_S^k(x)`: vertices of piece `p` exactly `k` levels below its root.
    pub fn layer(&self, tree: &RootedTree, p: usize, k: usize) -> Vec<usize> {
        let piece = &self.pieces[p];
        let target = tree.depth(piece.root) + k;
        piece.vertices.iter().copied().filter(|&v| tree.depth(v) == target).collect()
    }

    /// `(A_S(x), B_S(x))`: vertices of the piece at even and odd distance from its root.
    pub fn piece_sides(&self, tree: &RootedTree, p: usize) -> (Vec<usize>, Vec<usize>) {
        let piece = &self.pieces[p];
        let base = tree.depth(piece.root);
        piece
            .vertices
            .iter()
            .partition(|&&v| (tree.depth(v) - base).is_multiple_of(2))
    }
}

/// Bottom-up greedy cutting. Vertices are visited deepest first; once the
/// uncut weight hanging at `x` reaches `t`, that weight becomes the piece
/// rooted at `x`. An undersized remainder at the tree root is merged into the
/// smallest piece hanging directly below it. A tree with fewer than `t`
/// vertices is returned as one piece.
pub fn partition_subtrees(tree: &RootedTree, t: usize) -> Result<SubtreeDecomposition> {
    if t == 0 {
        return param("piece size t must be at least 1");
    }
    let n = tree.n();
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pieces: Vec<Piece> = Vec::new();
    for &x in tree.bfs_order().iter().rev() {
        let mut bag = vec![x];
        for &c in tree.children(x) {
            bag.append(&mut pending[c]);
        }
        if bag.len() >= t {
            bag.sort_unstable();
            pieces.push(Piece { root: x, vertices: bag });
        } else {
            pending[x] = bag;
        }
    }
    let root = tree.root();
    let remainder = std::mem::take(&mut pending[root]);
    if !remainder.is_empty() {
        let in_rem: std::collections::BTreeSet<usize> = remainder.iter().copied().collect();
        let target = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| tree.parent(p.root).is_some_and(|q| in_rem.contains(&q)))
            .min_by_key(|(i, p)| (p.len(), *i))
            .map(|(i, _)| i);
        match target {
            Some(i) => {
                let piece = &mut pieces[i];
                piece.vertices.extend(remainder);
                piece.vertices.sort_unstable();
                piece.root = root;
            }
            None => {
                let mut vertices = remainder;
                vertices.sort_unstable();
                pieces.push(Piece { root, vertices });
            }
        }
    }
    // Root-most pieces first.
    pieces.sort_by_key(|p| (tree.depth(p.root), p.root));
    let mut piece_of = vec![usize::MAX; n];
    for (i, p) in pieces.iter().enumerate() {
        for &v in &p.vertices {
            piece_of[v] = i;
        }
    }
    Ok(SubtreeDecomposition { t, pieces, piece_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn audit(tree: &RootedTree, d: &SubtreeDecomposition) {
        let mut seen = vec![false; tree.n()];
        let delta = tree.max_degree().max(1);
        for p in &d.pieces {
            assert!(p.len() >= d.t.min(tree.n()) && p.len() <= 2 * delta * d.t, "size {}", p.len());
            for &v in &p.vertices {
                assert!(!seen[v]);
                seen[v] = true;
                if v != p.root {
                    assert!(p.vertices.binary_search(&tree.parent(v).unwrap()).is_ok());
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn path_pieces() {
        let p = RootedTree::path(12).unwrap();
        let d = partition_subtrees(&p, 3).unwrap();
        audit(&p, &d);
        assert_eq!(d.pieces.len(), 4);
        assert_eq!(d.pieces[0].root, 0);
    }

    #[test]
    fn ternary_pieces() {
        let t = RootedTree::ternary(3).unwrap();
        let d = partition_subtrees(&t, 4).unwrap();
        audit(&t, &d);
        assert!(d.pieces.iter().all(|p| (4..=32).contains(&p.len())));
    }

    #[test]
    fn tiny_tree_is_one_piece() {
        let t = RootedTree::path(2).unwrap();
        let d = partition_subtrees(&t, 5).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert!(partition_subtrees(&t, 0).is_err());
    }

    #[test]
    fn sides_and_layers() {
        let p = RootedTree::path(7).unwrap();
        let d = partition_subtrees(&p, 7).unwrap();
        assert_eq!(d.layer(&p, 0, 2), vec![2]);
        let (a, b) = d.piece_sides(&p, 0);
        assert_eq!((a.len(), b.len()), (4, 3));
    }
}
