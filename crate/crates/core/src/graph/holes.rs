//! Bipartite holes and the bi-independence number.
//!
//! An `(s,t)`-hole is a pair of disjoint sets `|S| = s`, `|T| = t` with no edge
//! between them. Splits with an empty side are vacuous holes, so `α̃(K_n) = 1`.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use super::Graph;
use crate::bitset::VertexSet;
use crate::error::{param, Error, Result};
use crate::seed::{self, Rng};

/// Largest vertex count on which hole questions are answered exactly.
pub const EXACT_THRESHOLD: usize = 14;

/// Trials used by [`bipartite_hole_exists`] above the exact threshold.
pub const DEFAULT_SEARCH_TRIALS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HoleStatus {
    Found,
    /// Exact search proved there is none.
    None,
    /// Randomized search gave up without a witness.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleQuery {
    pub s: usize,
    pub t: usize,
    pub status: HoleStatus,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

impl HoleQuery {
    pub fn found(&self) -> bool {
        self.status == HoleStatus::Found
    }
}

/// `true` if `(s_set, t_set)` is a genuine hole in `g`.
pub fn is_hole(g: &Graph, s_set: &[usize], t_set: &[usize]) -> bool {
    let t = g.vertex_set(t_set.iter().copied());
    let s = g.vertex_set(s_set.iter().copied());
    s.len() == s_set.len()
        && t.len() == t_set.len()
        && s.is_disjoint(&t)
        && s_set.iter().all(|&u| g.neighbors(u).is_disjoint(&t))
}

fn vacuous(g: &Graph, s: usize, t: usize) -> HoleQuery {
    let vs: Vec<usize> = (0..s.max(t)).collect();
    let (a, b) = if s >= t { (vs, vec![]) } else { (vec![], vs) };
    checked(
        g,
        HoleQuery {
            s,
            t,
            status: HoleStatus::Found,
            witness: Some((a, b)),
        },
    )
}

fn checked(g: &Graph, q: HoleQuery) -> HoleQuery {
    if let Some((a, b)) = &q.witness {
        debug_assert!(is_hole(g, a, b));
    }
    q
}

/// Exhaustive branch-and-bound over the `grow`-sized side: `S` is extended in
/// increasing vertex order and abandoned as soon as fewer than `need` vertices
/// remain free of it.
fn exact_search(g: &Graph, grow: usize, need: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    fn rec(
        g: &Graph,
        next: usize,
        chosen: &mut Vec<usize>,
        avail: &VertexSet,
        grow: usize,
        need: usize,
    ) -> Option<Vec<usize>> {
        if chosen.len() == grow {
            return Some(avail.iter().take(need).collect());
        }
        let n = g.n();
        if n - next < grow - chosen.len() {
            return None;
        }
        for v in next..n {
            if n - v < grow - chosen.len() {
                break;
            }
            let mut a = avail.clone();
            a.remove(v);
            a.difference_with(g.neighbors(v));
            if a.len() < need {
                continue;
            }
            chosen.push(v);
            if let Some(t) = rec(g, v + 1, chosen, &a, grow, need) {
                return Some(t);
            }
            chosen.pop();
        }
        None
    }
    let mut chosen = Vec::with_capacity(grow);
    let avail = VertexSet::full(g.n());
    rec(g, 0, &mut chosen, &avail, grow, need).map(|t| (chosen, t))
}

/// One randomized greedy attempt: grow `S` to size `grow`, each step taking the
/// best of a handful of random candidates by remaining free-vertex count.
fn greedy_trial(g: &Graph, grow: usize, need: usize, rng: &mut Rng) -> Option<(Vec<usize>, Vec<usize>)> {
    const CANDIDATES: usize = 8;
    let n = g.n();
    let mut chosen = Vec::with_capacity(grow);
    let mut in_s = VertexSet::new(n);
    let mut avail = VertexSet::full(n);
    let first = rng.gen_range(0..n);
    in_s.insert(first);
    chosen.push(first);
    avail.remove(first);
    avail.difference_with(g.neighbors(first));
    while chosen.len() < grow {
        if avail.len() < need {
            return None;
        }
        let mut best: Option<(usize, usize)> = None;
        for _ in 0..CANDIDATES {
            let v = rng.gen_range(0..n);
            if in_s.contains(v) {
                continue;
            }
            let keep = avail.len() - avail.contains(v) as usize - avail.intersection_len(g.neighbors(v));
            if best.is_none_or(|(_, k)| keep > k) {
                best = Some((v, keep));
            }
        }
        let (v, _) = best?;
        in_s.insert(v);
        chosen.push(v);
        avail.remove(v);
        avail.difference_with(g.neighbors(v));
    }
    if avail.len() < need {
        return None;
    }
    let mut pool = avail.to_vec();
    pool.shuffle(rng);
    pool.truncate(need);
    pool.sort_unstable();
    chosen.sort_unstable();
    Some((chosen, pool))
}

/// Randomized `(s,t)`-hole search with an explicit trial budget. Never answers
/// [`HoleStatus::None`].
pub fn bipartite_hole_search(g: &Graph, s: usize, t: usize, trials: usize, seed: u64) -> Result<HoleQuery> {
    if s + t > g.n() {
        return param(format!("s + t = {} exceeds vertex count {}", s + t, g.n()));
    }
    if s == 0 || t == 0 {
        return Ok(vacuous(g, s, t));
    }
    let (grow, need) = (s.max(t), s.min(t));
    let mut rng = seed::rng(seed);
    for _ in 0..trials {
        if let Some((a, b)) = greedy_trial(g, grow, need, &mut rng) {
            let witness = if s >= t { (a, b) } else { (b, a) };
            return Ok(checked(
                g,
                HoleQuery {
                    s,
                    t,
                    status: HoleStatus::Found,
                    witness: Some(witness),
                },
            ));
        }
    }
    Ok(HoleQuery {
        s,
        t,
        status: HoleStatus::Unknown,
        witness: None,
    })
}

/// Exact on graphs with at most [`EXACT_THRESHOLD`] vertices, randomized above.
pub fn bipartite_hole_exists(g: &Graph, s: usize, t: usize) -> Result<HoleQuery> {
    if s + t > g.n() {
        return param(format!("s + t = {} exceeds vertex count {}", s + t, g.n()));
    }
    if s == 0 || t == 0 {
        return Ok(vacuous(g, s, t));
    }
    if g.n() > EXACT_THRESHOLD {
        return bipartite_hole_search(g, s, t, DEFAULT_SEARCH_TRIALS, seed::mix(s as u64, t as u64));
    }
    let (grow, need) = (s.max(t), s.min(t));
    let witness = exact_search(g, grow, need).map(|(a, b)| if s >= t { (a, b) } else { (b, a) });
    let status = if witness.is_some() {
        HoleStatus::Found
    } else {
        HoleStatus::None
    };
    Ok(checked(
        g,
        HoleQuery {
            s,
            t,
            status,
            witness,
        },
    ))
}

/// `α̃(g)`: the largest `r` such that every split `s + t = r` admits a hole.
pub fn bi_independence_exact(g: &Graph) -> Result<usize> {
    if g.n() > EXACT_THRESHOLD {
        return Err(Error::Size {
            what: "exact bi-independence (use the sampled estimator)",
            size: g.n(),
            limit: EXACT_THRESHOLD,
        });
    }
    let mut best = 0;
    for r in 1..=g.n() {
        for s in 0..=r {
            if !bipartite_hole_exists(g, s, r - s)?.found() {
                return Ok(best);
            }
        }
        best = r;
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SampleVerdict {
    /// No trial produced a hole; evidence that `α̃ < r`.
    Refuted { trials: usize },
    HoleFound {
        trial: usize,
        s_side: Vec<usize>,
        t_side: Vec<usize>,
    },
}

/// Monte-Carlo evidence about `α̃(g) ≥ r` on graphs too large for the exact
/// oracle, searching for `(⌈r/2⌉, ⌊r/2⌋)`-holes.
pub fn bi_independence_upper_sample(g: &Graph, r: usize, trials: usize, seed: u64) -> Result<SampleVerdict> {
    if r > g.n() {
        return param(format!("r = {r} exceeds vertex count {}", g.n()));
    }
    if trials == 0 {
        return param("trials must be at least 1");
    }
    let (s, t) = (r.div_ceil(2), r / 2);
    if t == 0 {
        let q = vacuous(g, s, t);
        let (a, b) = q.witness.unwrap_or_default();
        return Ok(SampleVerdict::HoleFound {
            trial: 0,
            s_side: a,
            t_side: b,
        });
    }
    let mut rng = seed::rng(seed);
    for trial in 0..trials {
        if let Some((a, b)) = greedy_trial(g, s, t, &mut rng) {
            debug_assert!(is_hole(g, &a, &b));
            return Ok(SampleVerdict::HoleFound {
                trial,
                s_side: a,
                t_side: b,
            });
        }
    }
    Ok(SampleVerdict::Refuted { trials })
}

/// Vertices `w ∈ W` with fewer than `η^{-1/2}` neighbours in `W2`.
pub fn highly_connecting_check(g: &Graph, w: &VertexSet, w2: &VertexSet, eta: f64) -> Result<VertexSet> {
    if !(eta > 0.0 && eta < 1.0) {
        return param(format!("eta = {eta} must lie in (0,1)"));
    }
    let min_size = 2.0 * eta.powf(1.0 / 3.0) * g.n() as f64;
    if (w.len() as f64) < min_size || (w2.len() as f64) < min_size {
        return param(format!(
            "|W| = {}, |W2| = {} below 2 eta^(1/3) n = {min_size:.2}",
            w.len(),
            w2.len()
        ));
    }
    let threshold = eta.powf(-0.5);
    Ok(VertexSet::from_iter(
        g.n(),
        w.iter().filter(|&v| (g.degree_into(v, w2) as f64) < threshold),
    ))
}

/// Keeps each edge with probability `xi/2` until the maximum degree is at most
/// `xi n`, retrying with derived seeds.
pub fn sparsify_preserving_holes(g: &Graph, xi: f64, eta: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&xi) {
        return param(format!("xi = {xi} must lie in [0,1]"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return param(format!("eta = {eta} must lie in (0,1)"));
    }
    let cap = xi * g.n() as f64;
    let mut worst = 0;
    for attempt in 0..seed::RETRY_BUDGET {
        let mut rng = seed::stream(seed, attempt as u64);
        let mut h = Graph::empty(g.n());
        for (u, v) in g.edges() {
            if rng.gen_bool(xi / 2.0) {
                h.add_edge(u, v);
            }
        }
        let d = h.max_degree();
        if d as f64 <= cap {
            return Ok(h);
        }
        worst = worst.max(d);
    }
    Err(Error::ProbabilisticFailure {
        what: "sparsification",
        attempts: seed::RETRY_BUDGET,
        detail: format!("max degree reached {worst}, cap {cap:.1}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::*;

    #[test]
    fn small_examples() {
        let k4 = complete(4).unwrap();
        assert_eq!(bipartite_hole_exists(&k4, 1, 1).unwrap().status, HoleStatus::None);
        let k33 = complete_bipartite(3, 3).unwrap();
        assert!(bipartite_hole_exists(&k33, 1, 1).unwrap().found());
        let q = bipartite_hole_exists(&two_cliques(3).unwrap(), 3, 3).unwrap();
        let (a, b) = q.witness.unwrap();
        assert_eq!((a.len(), b.len()), (3, 3));
        assert!(bipartite_hole_exists(&k4, 3, 2).is_err());
    }

    #[test]
    fn alpha_tilde_values() {
        assert_eq!(bi_independence_exact(&complete(6).unwrap()).unwrap(), 1);
        assert_eq!(bi_independence_exact(&Graph::new(7).unwrap()).unwrap(), 7);
        assert_eq!(bi_independence_exact(&two_cliques(3).unwrap()).unwrap(), 4);
        assert_eq!(bi_independence_exact(&complete_bipartite(3, 3).unwrap()).unwrap(), 3);
        assert!(bi_independence_exact(&Graph::new(15).unwrap()).is_err());
    }

    #[test]
    fn asymmetric_witness_orientation() {
        let g = two_cliques(4).unwrap();
        let q = bipartite_hole_exists(&g, 2, 4).unwrap();
        let (a, b) = q.witness.unwrap();
        assert_eq!((a.len(), b.len()), (2, 4));
        assert!(is_hole(&g, &a, &b));
    }

    #[test]
    fn sampler_on_complete_bipartite() {
        let g = complete_bipartite(50, 50).unwrap();
        assert!(bi_independence_upper_sample(&g, 102, 5, 1).is_err());
        match bi_independence_upper_sample(&g, 40, 200, 1).unwrap() {
            SampleVerdict::HoleFound { s_side, t_side, .. } => assert!(is_hole(&g, &s_side, &t_side)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn highly_connecting() {
        let g = two_cliques(40).unwrap();
        let w = VertexSet::from_iter(80, 0..40);
        let w2 = VertexSet::from_iter(80, 40..80);
        assert_eq!(highly_connecting_check(&g, &w, &w2, 0.001).unwrap(), w);
        let k = complete(80).unwrap();
        assert!(highly_connecting_check(&k, &w, &w2, 0.001).unwrap().is_empty());
        assert!(highly_connecting_check(&k, &w, &VertexSet::new(80), 0.001).is_err());
    }

    #[test]
    fn sparsify_bounds() {
        let k = complete(200).unwrap();
        let h = sparsify_preserving_holes(&k, 0.2, 0.01, 7).unwrap();
        assert!(h.max_degree() <= 40);
        assert!(h.is_subgraph_of(&k));
        assert_eq!(sparsify_preserving_holes(&k, 0.0, 0.01, 7).unwrap().edge_count(), 0);
        let e = Graph::new(10).unwrap();
        assert_eq!(sparsify_preserving_holes(&e, 0.3, 0.01, 1).unwrap().edge_count(), 0);
    }
}
