//! Simple undirected graphs with bitset adjacency rows.

pub mod generate;
pub mod holes;
pub mod io;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

pub use generate::PerturbSpec;
pub use holes::{HoleQuery, HoleStatus, SampleVerdict};

pub const MAX_VERTICES: usize = 1 << 16;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<VertexSet>,
    edges: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n(), self.edges)
    }
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Size {
                what: "vertex count",
                size: n,
                limit: MAX_VERTICES,
            });
        }
        Ok(Self::empty(n))
    }

    /// Like [`Graph::new`] for sizes the caller already validated.
    pub(crate) fn empty(n: usize) -> Self {
        Self {
            rows: vec![VertexSet::new(n); n],
            edges: 0,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::new(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Parameter(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Returns `true` if the edge was not present before.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert_ne!(u, v);
        if self.rows[u].insert(v) {
            self.rows[v].insert(u);
            self.edges += 1;
            true
        } else {
            false
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if self.rows[u].remove(v) {
            self.rows[v].remove(u);
            self.edges -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.rows[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `d_{G,X}(v)`
    #[inline]
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.rows[v].intersection_len(set)
    }

    /// Common neighbourhood of `vs` inside `within`. An empty `vs` yields `within`.
    pub fn common_neighbors(&self, vs: &[usize], within: &VertexSet) -> VertexSet {
        let mut out = within.clone();
        for &v in vs {
            out.intersect_with(&self.rows[v]);
        }
        out
    }

    /// `e_G(A,B)` for disjoint `A`, `B`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> usize {
        a.iter().map(|u| self.rows[u].intersection_len(b)).sum()
    }

    /// Edges in lexicographic order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_edge_disjoint(&self, other: &Graph) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_disjoint(b))
    }

    pub fn union_with(&mut self, other: &Graph) {
        for (u, v) in other.edges() {
            self.add_edge(u, v);
        }
    }

    pub fn difference_with(&mut self, other: &Graph) {
        for (u, v) in other.edges() {
            self.remove_edge(u, v);
        }
    }

    /// Edges with both ends in `set`.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let mut h = Graph::empty(self.n());
        for u in set.iter() {
            for v in self.rows[u].intersection(set).iter().filter(|&v| v > u) {
                h.add_edge(u, v);
            }
        }
        h
    }

    /// Edges with one end in `a` and the other in `b`.
    pub fn bipartite_part(&self, a: &VertexSet, b: &VertexSet) -> Graph {
        let mut h = Graph::empty(self.n());
        for u in a.iter() {
            for v in self.rows[u].intersection(b).iter() {
                h.add_edge(u, v);
            }
        }
        h
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut h = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    h.add_edge(u, v);
                }
            }
        }
        h
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn vertex_set<I: IntoIterator<Item = usize>>(&self, it: I) -> VertexSet {
        VertexSet::from_iter(self.n(), it)
    }
}
