//! Rooted bounded-degree trees, their subtree decompositions and the
//! connector/bulk split used by the packing engine.

pub mod io;
pub mod partition;
pub mod random;
pub mod split;

use std::collections::VecDeque;

use crate::error::{param, Result};

pub use partition::{partition_subtrees, Piece, SubtreeDecomposition};
pub use random::random_tree;
pub use split::{assign_slots, split_connector, SlotWindow, TreeSplit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    /// Breadth-first order from the root.
    order: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from a parent array; exactly one entry must be `None`.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return param("a tree needs at least one vertex");
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return param(format!("expected one root, found {}", roots.len()));
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == v {
                    return param(format!("invalid parent {p} for vertex {v}"));
                }
                children[p].push(v);
            }
        }
        let root = roots[0];
        let mut depth = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        depth[root] = 0;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                queue.push_back(c);
            }
        }
        if order.len() != n {
            return param("parent array contains a cycle or is disconnected");
        }
        Ok(Self {
            root,
            parent,
            children,
            depth,
            order,
        })
    }

    /// Roots an undirected edge list at `root`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if n == 0 || root >= n {
            return param("root out of range");
        }
        if edges.len() + 1 != n {
            return param(format!("a tree on {n} vertices has {} edges, got {}", n - 1, edges.len()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return param(format!("invalid edge ({u},{v})"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return param("edge list is not connected");
        }
        Self::from_parents(parent)
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::from_parents((0..n).map(|v| v.checked_sub(1)).collect())
    }

    /// Complete 3-ary tree of the given height, children of `i` are `3i+1..=3i+3`.
    pub fn ternary(height: u32) -> Result<Self> {
        let n = (3usize.pow(height + 1) - 1) / 2;
        Self::from_parents((0..n).map(|v| v.checked_sub(1).map(|w| w / 3)).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn edge_count(&self) -> usize {
        self.n() - 1
    }

    #[inline]
    pub fn root(&self) -> usize {
        self.root
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    #[inline]
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    #[inline]
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + self.parent[v].is_some() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent[v].into_iter().chain(self.children[v].iter().copied())
    }

    /// Edges as `(child, parent)` in BFS order of the child.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.order.iter().filter_map(|&v| self.parent[v].map(|p| (v, p)))
    }

    pub fn is_ancestor(&self, x: usize, y: usize) -> bool {
        let mut cur = Some(y);
        while let Some(v) = cur {
            if v == x {
                return true;
            }
            if self.depth[v] <= self.depth[x] {
                return false;
            }
            cur = self.parent[v];
        }
        false
    }

    /// The same tree rooted at `root`.
    pub fn rerooted(&self, root: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = self.edges().collect();
        Self::from_edges(self.n(), &edges, root)
    }
}

/// The two colour classes of the tree, with `x` in the first.
pub fn bipartition(tree: &RootedTree, x: usize) -> (Vec<usize>, Vec<usize>) {
    let n = tree.n();
    let mut side = vec![u8::MAX; n];
    side[x] = 0;
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        for w in tree.neighbors(v) {
            if side[w] == u8::MAX {
                side[w] = 1 - side[v];
                queue.push_back(w);
            }
        }
    }
    let a = (0..n).filter(|&v| side[v] == 0).collect();
    let b = (0..n).filter(|&v| side[v] == 1).collect();
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_validation() {
        let t = RootedTree::ternary(2).unwrap();
        assert_eq!((t.n(), t.max_degree()), (13, 4));
        assert_eq!(t.children(0), &[1, 2, 3]);
        assert!(RootedTree::from_parents(vec![None, None]).is_err());
        assert!(RootedTree::from_parents(vec![Some(1), Some(0)]).is_err());
        assert!(RootedTree::from_parents(vec![None, Some(2), Some(1)]).is_err());
        let p = RootedTree::path(4).unwrap();
        assert!(p.is_ancestor(0, 3));
        assert!(!p.is_ancestor(3, 0));
        let r = p.rerooted(3).unwrap();
        assert_eq!(r.parent(0), Some(1));
    }

    #[test]
    fn bipartition_examples() {
        let single = RootedTree::path(1).unwrap();
        assert_eq!(bipartition(&single, 0), (vec![0], vec![]));
        let edge = RootedTree::path(2).unwrap();
        assert_eq!(bipartition(&edge, 0), (vec![0], vec![1]));
        let p5 = RootedTree::path(5).unwrap();
        assert_eq!(bipartition(&p5, 0), (vec![0, 2, 4], vec![1, 3]));
        assert_eq!(bipartition(&p5, 1), (vec![1, 3], vec![0, 2, 4]));
    }
}
