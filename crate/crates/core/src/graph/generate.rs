//! Constructors for random and extremal host graphs.

use rand::Rng as _;

use super::Graph;
use crate::error::{param, Result};
use crate::seed::{self, Rng};

/// Base graph plus the edge probability of the binomial graph laid on top.
#[derive(Debug, Clone)]
pub struct PerturbSpec {
    pub base: Graph,
    pub edge_probability: f64,
    pub seed: u64,
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return param(format!("probability {p} outside [0,1]"));
    }
    Ok(())
}

/// Visits the index of every success in `count` Bernoulli(p) trials, skipping
/// geometrically so sparse graphs cost time proportional to their size.
fn bernoulli_hits(count: usize, p: f64, rng: &mut Rng, mut hit: impl FnMut(usize)) {
    if p <= 0.0 || count == 0 {
        return;
    }
    if p >= 1.0 {
        (0..count).for_each(hit);
        return;
    }
    if p > 0.2 {
        for i in 0..count {
            if rng.gen_bool(p) {
                hit(i);
            }
        }
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut i: usize = 0;
    loop {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let skip = (u.ln() / log_q).floor();
        if skip >= (count - i) as f64 {
            return;
        }
        i += skip as usize;
        hit(i);
        i += 1;
        if i >= count {
            return;
        }
    }
}

/// Adds each pair of distinct vertices of `verts` with probability `p`.
pub(crate) fn add_random_clique_edges(g: &mut Graph, verts: &[usize], p: f64, rng: &mut Rng) {
    let k = verts.len();
    if k < 2 {
        return;
    }
    // Pairs (a, b) with a < b enumerated row by row.
    let mut row_start = Vec::with_capacity(k);
    let mut acc = 0usize;
    for a in 0..k {
        row_start.push(acc);
        acc += k - 1 - a;
    }
    bernoulli_hits(acc, p, rng, |idx| {
        let a = row_start.partition_point(|&s| s <= idx) - 1;
        let b = a + 1 + (idx - row_start[a]);
        g.add_edge(verts[a], verts[b]);
    });
}

/// Adds each pair in `a × b` with probability `p`.
pub(crate) fn add_random_bipartite_edges(
    g: &mut Graph,
    a: &[usize],
    b: &[usize],
    p: f64,
    rng: &mut Rng,
) {
    let nb = b.len();
    bernoulli_hits(a.len() * nb, p, rng, |idx| {
        g.add_edge(a[idx / nb], b[idx % nb]);
    });
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_p(p)?;
    let mut g = Graph::new(n)?;
    let verts: Vec<usize> = (0..n).collect();
    add_random_clique_edges(&mut g, &verts, p, &mut seed::rng(seed));
    Ok(g)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Parts are `[0, a)` and `[a, a + b)`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let mut g = Graph::new(a + b)?;
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Two disjoint copies of `K_m` on `[0, m)` and `[m, 2m)`.
pub fn two_cliques(m: usize) -> Result<Graph> {
    let mut g = Graph::new(2 * m)?;
    for base in [0, m] {
        for u in base..base + m {
            for v in u + 1..base + m {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Part sizes `(round((1-xi) n / 2), rest)` used by [`unbalanced_noisy_bipartite`].
pub fn unbalanced_parts(n: usize, xi: f64) -> (usize, usize) {
    let small = ((1.0 - xi) * n as f64 / 2.0).round() as usize;
    (small, n - small)
}

/// Complete bipartite graph between `[0, x1)` and `[x1, n)` with an independent
/// `G(., xi/2)` inside each part.
pub fn unbalanced_noisy_bipartite(n: usize, xi: f64, seed: u64) -> Result<Graph> {
    if !(0.0..1.0).contains(&xi) {
        return param(format!("xi = {xi} must lie in [0,1)"));
    }
    let (x1, _) = unbalanced_parts(n, xi);
    let mut g = complete_bipartite(x1, n - x1)?;
    let mut rng = seed::rng(seed);
    let small: Vec<usize> = (0..x1).collect();
    let large: Vec<usize> = (x1..n).collect();
    add_random_clique_edges(&mut g, &small, xi / 2.0, &mut rng);
    add_random_clique_edges(&mut g, &large, xi / 2.0, &mut rng);
    Ok(g)
}

/// Edge union of `spec.base` and a fresh `G(n, p)`.
pub fn perturbed(spec: &PerturbSpec) -> Result<Graph> {
    let random = erdos_renyi(spec.base.n(), spec.edge_probability, spec.seed)?;
    let mut g = spec.base.clone();
    g.union_with(&random);
    Ok(g)
}

/// Complete rooted 3-ary tree of the given height in BFS numbering; the
/// children of `i` are `3i+1..=3i+3`.
pub fn ternary_tree(height: u32) -> Result<Graph> {
    let n = (3usize.pow(height + 1) - 1) / 2;
    let mut g = Graph::new(n)?;
    for v in 1..n {
        g.add_edge(v, (v - 1) / 3);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_sizes() {
        let g = two_cliques(3).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 6));
        let t = ternary_tree(2).unwrap();
        assert_eq!((t.n(), t.edge_count(), t.max_degree()), (13, 12, 4));
        assert_eq!(complete_bipartite(3, 4).unwrap().edge_count(), 12);
        assert_eq!(complete(5).unwrap().edge_count(), 10);
    }

    #[test]
    fn er_extremes() {
        assert_eq!(erdos_renyi(20, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(erdos_renyi(20, 1.0, 1).unwrap().edge_count(), 190);
        assert!(erdos_renyi(20, 1.5, 1).is_err());
        assert_eq!(erdos_renyi(50, 0.1, 9).unwrap(), erdos_renyi(50, 0.1, 9).unwrap());
    }

    #[test]
    fn sparse_density_is_right() {
        // 499500 trials at p = 0.02: mean 9990, sd ~ 99.
        let g = erdos_renyi(1000, 0.02, 3).unwrap();
        let m = g.edge_count() as f64;
        assert!((m - 9990.0).abs() < 500.0, "{m}");
    }

    #[test]
    fn unbalanced_sizes() {
        assert_eq!(unbalanced_parts(100, 0.1), (45, 55));
        assert_eq!(unbalanced_parts(120, 1.0 / 6.0), (50, 70));
    }
}
