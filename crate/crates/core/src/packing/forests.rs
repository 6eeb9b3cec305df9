//! Bulk forests per slot pair, their batching, and the regular completion of
//! each batch.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::seed;

/// The bulk part of one tree that lives in one slot pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Forest {
    /// Index of the owning tree in the collection.
    pub owner: usize,
    /// Tree vertices of `X_0^F` and `X_1^F`.
    pub sides: [Vec<usize>; 2],
    /// Edges between tree vertices.
    pub edges: Vec<(usize, usize)>,
    /// `W^F`: vertices with already-embedded connector neighbours, together
    /// with the host images of those neighbours.
    pub anchored: Vec<(usize, Vec<usize>)>,
}

impl Forest {
    pub fn vertex_count(&self) -> usize {
        self.sides[0].len() + self.sides[1].len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchPlan {
    /// Forest indices per batch.
    pub batches: Vec<Vec<usize>>,
    /// Largest `|W^F|` seen.
    pub max_anchored: usize,
}

impl BatchPlan {
    pub fn edge_sums(&self, forests: &[Forest]) -> Vec<usize> {
        self.batches
            .iter()
            .map(|b| b.iter().map(|&f| forests[f].edge_count()).sum())
            .collect()
    }
}

/// Edge budget `⌊(1 - 3ζ) q n⌋` of one batch.
pub fn batch_edge_cap(n: usize, q: usize, zeta: f64) -> usize {
    ((1.0 - 3.0 * zeta) * (q * n) as f64).floor() as usize
}

/// First-fit decreasing: forests in one batch are vertex-disjoint inside an
/// `n + n` template, so a batch holds at most `n` vertices per side and at
/// most the edge budget.
pub fn batch_forests(forests: &[Forest], n: usize, q: usize, zeta: f64, m: usize) -> Result<BatchPlan> {
    let cap = batch_edge_cap(n, q, zeta);
    for (k, f) in forests.iter().enumerate() {
        if f.edge_count() > cap {
            return param(format!("forest {k} has {} edges, batch budget is {cap}; raise q", f.edge_count()));
        }
        if f.sides[0].len() > n || f.sides[1].len() > n {
            return param(format!("forest {k} has a class larger than the slot size {n}"));
        }
    }
    let mut order: Vec<usize> = (0..forests.len()).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(forests[k].vertex_count()), k));
    let mut batches: Vec<Vec<usize>> = Vec::new();
    let mut fill: Vec<(usize, usize, usize)> = Vec::new();
    for k in order {
        let f = &forests[k];
        let (a, b, e) = (f.sides[0].len(), f.sides[1].len(), f.edge_count());
        match fill.iter().position(|&(x, y, z)| x + a <= n && y + b <= n && z + e <= cap) {
            Some(slot) => {
                batches[slot].push(k);
                let (x, y, z) = fill[slot];
                fill[slot] = (x + a, y + b, z + e);
            }
            None => {
                batches.push(vec![k]);
                fill.push((a, b, e));
            }
        }
    }
    let max_anchored = forests.iter().map(|f| f.anchored.len()).max().unwrap_or(0);
    if max_anchored > m {
        log::debug!("a forest has {max_anchored} anchored vertices, more than M = {m}");
    }
    Ok(BatchPlan { batches, max_anchored })
}

/// A batch placed into the template `X_0 = 0..n`, `X_1 = n..2n` and completed
/// to a `q`-regular bipartite graph.
#[derive(Debug, Clone)]
pub struct RegularBatch {
    pub n: usize,
    pub h: Graph,
    /// Per forest, `(tree vertex, template vertex)`.
    pub placement: Vec<Vec<(usize, usize)>>,
    /// Edges of `h` that carry no forest edge.
    pub padding: Vec<(usize, usize)>,
}

/// Random vertex-disjoint placement of the batch followed by a degree
/// completion: the neediest vertex on the left is joined to the neediest
/// non-adjacent vertex on the right; when none exists a padding edge is
/// switched to make room.
pub fn pack_batch_regular(forests: &[&Forest], n: usize, q: usize, zeta: f64, seed: u64) -> Result<RegularBatch> {
    let edges: usize = forests.iter().map(|f| f.edge_count()).sum();
    let cap = batch_edge_cap(n, q, zeta);
    if edges > cap {
        return param(format!("batch has {edges} edges, budget is {cap}"));
    }
    let a: usize = forests.iter().map(|f| f.sides[0].len()).sum();
    let b: usize = forests.iter().map(|f| f.sides[1].len()).sum();
    if a > n || b > n {
        return param(format!("batch needs {a} + {b} template vertices, only {n} + {n} exist"));
    }
    let mut last = String::new();
    for attempt in 0..seed::RETRY_BUDGET {
        let mut rng = seed::stream(seed, attempt as u64);
        let mut left: Vec<usize> = (0..n).collect();
        let mut right: Vec<usize> = (n..2 * n).collect();
        left.shuffle(&mut rng);
        right.shuffle(&mut rng);
        let (mut li, mut ri) = (0, 0);
        let mut h = Graph::new(2 * n)?;
        let mut placement = Vec::with_capacity(forests.len());
        for f in forests {
            let mut map = Vec::with_capacity(f.vertex_count());
            for &v in &f.sides[0] {
                map.push((v, left[li]));
                li += 1;
            }
            for &v in &f.sides[1] {
                map.push((v, right[ri]));
                ri += 1;
            }
            let lookup = |v: usize| map.iter().find(|&&(x, _)| x == v).map(|&(_, t)| t);
            for &(x, y) in &f.edges {
                let (tx, ty) = lookup(x)
                    .zip(lookup(y))
                    .ok_or_else(|| Error::Internal(format!("forest edge {x}-{y} leaves the forest")))?;
                if !h.add_edge(tx, ty) || (tx < n) == (ty < n) {
                    return Err(Error::Internal(format!("forest edge {x}-{y} is not bipartite")));
                }
            }
            placement.push(map);
        }
        if h.max_degree() > q {
            return param(format!("forest degree {} exceeds q = {q}", h.max_degree()));
        }
        match complete_regular(&mut h, n, q, &mut rng) {
            Ok(padding) => return Ok(RegularBatch { n, h, placement, padding }),
            Err(e) => last = e,
        }
    }
    Err(Error::ProbabilisticFailure {
        what: "regular completion",
        attempts: seed::RETRY_BUDGET,
        detail: last,
    })
}

fn complete_regular(h: &mut Graph, n: usize, q: usize, rng: &mut seed::Rng) -> std::result::Result<Vec<(usize, usize)>, String> {
    let mut padding: Vec<(usize, usize)> = Vec::new();
    loop {
        let need = |h: &Graph, v: usize| q - h.degree(v);
        let Some(a) = (0..n).filter(|&v| need(h, v) > 0).max_by_key(|&v| (need(h, v), rng.gen::<u32>())) else {
            break;
        };
        let right: Vec<usize> = (n..2 * n).filter(|&v| need(h, v) > 0).collect();
        let fresh = right
            .iter()
            .copied()
            .filter(|&v| !h.has_edge(a, v))
            .max_by_key(|&v| (need(h, v), rng.gen::<u32>()));
        if let Some(b) = fresh {
            h.add_edge(a, b);
            padding.push((a, b));
            continue;
        }
        let b = *right.first().ok_or("degree sums differ")?;
        // Switch: padding (c, e) becomes (c, b) and (a, e).
        let mut idx: Vec<usize> = (0..padding.len()).collect();
        idx.shuffle(rng);
        let pick = idx.into_iter().find(|&k| {
            let (c, e) = padding[k];
            e != b && c != a && !h.has_edge(c, b) && !h.has_edge(a, e)
        });
        let Some(k) = pick else {
            return Err(format!("left vertex {a} is stuck"));
        };
        let (c, e) = padding.swap_remove(k);
        h.remove_edge(c, e);
        h.add_edge(c, b);
        h.add_edge(a, e);
        padding.push((c, b));
        padding.push((a, e));
    }
    if (n..2 * n).any(|v| h.degree(v) != q) {
        return Err("right side not regular".into());
    }
    Ok(padding)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matching(n: usize) -> Forest {
        Forest {
            owner: 0,
            sides: [(0..n).collect(), (n..2 * n).collect()],
            edges: (0..n).map(|v| (v, v + n)).collect(),
            anchored: Vec::new(),
        }
    }

    #[test]
    fn empty_batch_completes() {
        let rb = pack_batch_regular(&[], 10, 3, 0.1, 1).unwrap();
        assert!((0..20).all(|v| rb.h.degree(v) == 3));
        assert_eq!(rb.padding.len(), 30);
    }

    #[test]
    fn matching_survives_completion() {
        let f = matching(12);
        let rb = pack_batch_regular(&[&f], 12, 2, 0.1, 7).unwrap();
        assert!((0..24).all(|v| rb.h.degree(v) == 2));
        let map = &rb.placement[0];
        let t = |v: usize| map.iter().find(|&&(x, _)| x == v).unwrap().1;
        for &(x, y) in &f.edges {
            assert!(rb.h.has_edge(t(x), t(y)));
        }
        assert_eq!(rb.padding.len(), 12);
    }

    #[test]
    fn over_budget_is_rejected() {
        let f = matching(10);
        assert!(matches!(pack_batch_regular(&[&f], 10, 1, 0.1, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn equal_forests_fill_three_batches() {
        let forests: Vec<Forest> = (0..12).map(|_| matching(25)).collect();
        let plan = batch_forests(&forests, 100, 8, 0.1, 20).unwrap();
        assert_eq!(plan.batches.len(), 3);
        assert!(plan.edge_sums(&forests).iter().all(|&e| e == 100));
    }
}
