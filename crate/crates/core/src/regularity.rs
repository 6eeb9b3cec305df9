//! Densities, `(ε,d)`-regularity tests and the regular-pair manipulations used
//! to carve super-regular structure out of a host.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{param, Error, Result};
use crate::graph::Graph;
use crate::seed::{self, Rng};

/// Largest side length accepted by the exhaustive test.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Number of subset pairs drawn by the default sampled test.
pub const DEFAULT_SAMPLES: usize = 500;

/// Two disjoint vertex sets of a graph.
#[derive(Clone)]
pub struct BipartitePairView<'g> {
    pub graph: &'g Graph,
    a: Vec<usize>,
    b: Vec<usize>,
    a_set: VertexSet,
    b_set: VertexSet,
}

impl<'g> BipartitePairView<'g> {
    pub fn new(graph: &'g Graph, a: &[usize], b: &[usize]) -> Result<Self> {
        let a_set = graph.vertex_set(a.iter().copied());
        let b_set = graph.vertex_set(b.iter().copied());
        if a_set.len() != a.len() || b_set.len() != b.len() {
            return param("pair sides contain repeated vertices");
        }
        if !a_set.is_disjoint(&b_set) {
            return param("pair sides intersect");
        }
        if a.iter().chain(b).any(|&v| v >= graph.n()) {
            return param("pair side vertex out of range");
        }
        Ok(Self {
            graph,
            a: a_set.to_vec(),
            b: b_set.to_vec(),
            a_set,
            b_set,
        })
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn a_set(&self) -> &VertexSet {
        &self.a_set
    }

    pub fn b_set(&self) -> &VertexSet {
        &self.b_set
    }

    pub fn crossing_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &u in &self.a {
            for v in self.graph.neighbors(u).intersection(&self.b_set).iter() {
                out.push((u, v));
            }
        }
        out
    }

    fn restricted(&self, a: &[usize], b: &[usize]) -> Self {
        Self::new(self.graph, a, b).expect("subsets of a valid pair")
    }
}

/// Exact density `edges / cells`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Density {
    pub edges: usize,
    pub cells: usize,
}

impl Density {
    pub fn value(&self) -> f64 {
        self.edges as f64 / self.cells as f64
    }
}

pub fn density(pair: &BipartitePairView) -> Result<Density> {
    if pair.a.is_empty() || pair.b.is_empty() {
        return param("density of a pair with an empty side");
    }
    Ok(Density {
        edges: pair.graph.edges_between(&pair.a_set, &pair.b_set),
        cells: pair.a.len() * pair.b.len(),
    })
}

/// `|e1/c1 - e0/c0| ≥ eps`, evaluated after cross-multiplying.
fn deviates(sub: Density, whole: Density, eps: f64) -> bool {
    let lhs = (sub.edges * whole.cells) as i128 - (whole.edges * sub.cells) as i128;
    lhs.unsigned_abs() as f64 >= eps * (sub.cells as f64) * (whole.cells as f64)
}

/// Smallest subset size that counts as a regularity witness for a side of `len`.
pub fn min_witness_size(len: usize, eps: f64) -> usize {
    ((eps * len as f64 - 1e-9).ceil() as usize).clamp(1, len.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityStatus {
    Regular,
    IrregularWithWitness,
    EstimatedRegular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityMode {
    /// Exact; both sides must have at most [`EXHAUSTIVE_LIMIT`] vertices.
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityVerdict {
    pub epsilon: f64,
    pub density: f64,
    pub status: RegularityStatus,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

impl RegularityVerdict {
    pub fn is_irregular(&self) -> bool {
        self.status == RegularityStatus::IrregularWithWitness
    }
}

pub fn regularity_test(pair: &BipartitePairView, eps: f64, mode: RegularityMode) -> Result<RegularityVerdict> {
    if !(eps > 0.0 && eps <= 1.0) {
        return param(format!("epsilon = {eps} must lie in (0,1]"));
    }
    let whole = density(pair)?;
    let witness = match mode {
        RegularityMode::Exhaustive => {
            let big = pair.a.len().max(pair.b.len());
            if big > EXHAUSTIVE_LIMIT {
                return Err(Error::Size {
                    what: "exhaustive regularity side",
                    size: big,
                    limit: EXHAUSTIVE_LIMIT,
                });
            }
            exhaustive_witness(pair, whole, eps)
        }
        RegularityMode::Sampled { trials, seed } => sampled_witness(pair, whole, eps, trials, &mut seed::rng(seed)),
    };
    let status = match (&witness, mode) {
        (Some(_), _) => RegularityStatus::IrregularWithWitness,
        (None, RegularityMode::Exhaustive) => RegularityStatus::Regular,
        (None, RegularityMode::Sampled { .. }) => RegularityStatus::EstimatedRegular,
    };
    Ok(RegularityVerdict {
        epsilon: eps,
        density: whole.value(),
        status,
        witness,
    })
}

/// Enumerates every qualifying `A'`; for each, the extreme `B'` of each size are
/// the top and bottom vertices of `B` by degree into `A'`, so checking those is
/// exact.
fn exhaustive_witness(pair: &BipartitePairView, whole: Density, eps: f64) -> Option<(Vec<usize>, Vec<usize>)> {
    let (a, b) = (&pair.a, &pair.b);
    let (amin, bmin) = (min_witness_size(a.len(), eps), min_witness_size(b.len(), eps));
    let b_rows: Vec<&VertexSet> = b.iter().map(|&v| pair.graph.neighbors(v)).collect();
    for mask in 1u32..(1u32 << a.len()) {
        let size = mask.count_ones() as usize;
        if size < amin {
            continue;
        }
        let sub_a: Vec<usize> = (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).collect();
        let sub_set = pair.graph.vertex_set(sub_a.iter().copied());
        let mut degs: Vec<(usize, usize)> = b_rows
            .iter()
            .enumerate()
            .map(|(j, row)| (row.intersection_len(&sub_set), b[j]))
            .collect();
        degs.sort_unstable();
        let mut low = 0;
        let mut high = 0;
        for k in 1..=b.len() {
            low += degs[k - 1].0;
            high += degs[b.len() - k].0;
            if k < bmin {
                continue;
            }
            let cells = size * k;
            if deviates(Density { edges: high, cells }, whole, eps) {
                let mut sub_b: Vec<usize> = degs[b.len() - k..].iter().map(|&(_, v)| v).collect();
                sub_b.sort_unstable();
                return Some((sub_a, sub_b));
            }
            if deviates(Density { edges: low, cells }, whole, eps) {
                let mut sub_b: Vec<usize> = degs[..k].iter().map(|&(_, v)| v).collect();
                sub_b.sort_unstable();
                return Some((sub_a, sub_b));
            }
        }
    }
    None
}

fn sampled_witness(
    pair: &BipartitePairView,
    whole: Density,
    eps: f64,
    trials: usize,
    rng: &mut Rng,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let (ka, kb) = (min_witness_size(pair.a.len(), eps), min_witness_size(pair.b.len(), eps));
    for _ in 0..trials {
        let mut sa: Vec<usize> = pair.a.choose_multiple(rng, ka).copied().collect();
        let mut sb: Vec<usize> = pair.b.choose_multiple(rng, kb).copied().collect();
        let sb_set = pair.graph.vertex_set(sb.iter().copied());
        let edges = sa.iter().map(|&u| pair.graph.degree_into(u, &sb_set)).sum();
        if deviates(Density { edges, cells: ka * kb }, whole, eps) {
            sa.sort_unstable();
            sb.sort_unstable();
            return Some((sa, sb));
        }
    }
    None
}

/// `{u ∈ A : d_{B_sub}(u) ≥ (d - ε^{1/2}) |B_sub|}`.
pub fn robust_degree_filter(pair: &BipartitePairView, eps: f64, d: f64, b_sub: &VertexSet) -> Result<VertexSet> {
    if !b_sub.is_subset(&pair.b_set) {
        return param("B_sub must be a subset of side B");
    }
    let need = eps.powf(1.0 / 3.0) * pair.b.len() as f64;
    if (b_sub.len() as f64) < need {
        return param(format!("|B_sub| = {} below eps^(1/3)|B| = {need:.2}", b_sub.len()));
    }
    let threshold = (d - eps.sqrt()) * b_sub.len() as f64;
    Ok(pair.graph.vertex_set(
        pair.a
            .iter()
            .copied()
            .filter(|&u| pair.graph.degree_into(u, b_sub) as f64 >= threshold),
    ))
}

/// Every vertex of each side has `(d ± tol)|other side|` neighbours across.
pub fn degrees_within(pair: &BipartitePairView, d: f64, tol: f64) -> bool {
    let ok = |side: &[usize], other: &VertexSet| {
        let len = other.len() as f64;
        side.iter().all(|&u| {
            let deg = pair.graph.degree_into(u, other) as f64;
            deg >= (d - tol) * len - 1e-9 && deg <= (d + tol) * len + 1e-9
        })
    };
    ok(&pair.a, &pair.b_set) && ok(&pair.b, &pair.a_set)
}

/// Iteratively drops vertices whose degree leaves `(d ± 2ε)|other side|`, then
/// checks the `(d ± 3ε)` super-regular degree window.
pub fn super_regular_trim(pair: &BipartitePairView, eps: f64, d: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut a = pair.a_set.clone();
    let mut b = pair.b_set.clone();
    let g = pair.graph;
    loop {
        let out_of_window = |side: &VertexSet, other: &VertexSet| -> Vec<usize> {
            let len = other.len() as f64;
            side.iter()
                .filter(|&u| {
                    let deg = g.degree_into(u, other) as f64;
                    deg < (d - 2.0 * eps) * len || deg > (d + 2.0 * eps) * len
                })
                .collect()
        };
        let drop_a = out_of_window(&a, &b);
        let drop_b = out_of_window(&b, &a);
        if drop_a.is_empty() && drop_b.is_empty() {
            break;
        }
        drop_a.iter().for_each(|&u| {
            a.remove(u);
        });
        drop_b.iter().for_each(|&u| {
            b.remove(u);
        });
        let lost_a = pair.a.len() - a.len();
        let lost_b = pair.b.len() - b.len();
        if lost_a as f64 > 2.0 * eps * pair.a.len() as f64 || lost_b as f64 > 2.0 * eps * pair.b.len() as f64 {
            return Err(Error::RegularityViolation(format!(
                "trimming removed {lost_a}/{} and {lost_b}/{} vertices (limit 2eps = {:.3})",
                pair.a.len(),
                pair.b.len(),
                2.0 * eps
            )));
        }
    }
    let (a, b) = (a.to_vec(), b.to_vec());
    let trimmed = pair.restricted(&a, &b);
    if !degrees_within(&trimmed, d, 3.0 * eps) {
        return Err(Error::RegularityViolation("trimmed pair misses the (d ± 3eps) degree window".into()));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSplit {
    pub classes: Vec<Vec<(usize, usize)>>,
    pub leftover: Vec<(usize, usize)>,
}

/// Sends each crossing edge to class `i` with probability `p_i`, or to the
/// leftover. Edges are oriented `(a, b)` with `a ∈ A`.
pub fn split_edges(pair: &BipartitePairView, probabilities: &[f64], seed: u64) -> Result<EdgeSplit> {
    if probabilities.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return param("class probability outside [0,1]");
    }
    let total: f64 = probabilities.iter().sum();
    if total > 1.0 + 1e-9 {
        return param(format!("class probabilities sum to {total} > 1"));
    }
    let mut rng = seed::rng(seed);
    let mut split = EdgeSplit {
        classes: vec![Vec::new(); probabilities.len()],
        leftover: Vec::new(),
    };
    for e in pair.crossing_edges() {
        let x: f64 = rng.gen();
        let mut acc = 0.0;
        let mut target = None;
        for (i, &p) in probabilities.iter().enumerate() {
            acc += p;
            if x < acc {
                target = Some(i);
                break;
            }
        }
        match target {
            Some(i) => split.classes[i].push(e),
            None => split.leftover.push(e),
        }
    }
    Ok(split)
}

/// Parts `(A1, A2, B1, B2)` of a random split.
pub type FourWay = [Vec<usize>; 4];

/// Random split of both sides, retried until all four cross pairs have every
/// degree inside `(d ± ε^{1/2})|other part|`.
#[allow(clippy::too_many_arguments)]
pub fn partition_super_regular(
    pair: &BipartitePairView,
    eps: f64,
    d: f64,
    a1: usize,
    a2: usize,
    b1: usize,
    b2: usize,
    seed: u64,
) -> Result<FourWay> {
    if a1 + a2 != pair.a.len() || b1 + b2 != pair.b.len() {
        return param(format!(
            "split sizes {a1}+{a2}, {b1}+{b2} do not match sides {}, {}",
            pair.a.len(),
            pair.b.len()
        ));
    }
    let n = pair.a.len().max(pair.b.len());
    let floor = eps * n as f64;
    if [a1, a2, b1, b2].iter().any(|&s| (s as f64) < floor || s == 0) {
        return param(format!("every part needs at least eps*n = {floor:.2} vertices"));
    }
    let tol = eps.sqrt();
    for attempt in 0..seed::RETRY_BUDGET {
        let mut rng = seed::stream(seed, attempt as u64);
        let mut a = pair.a.clone();
        let mut b = pair.b.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let mut parts: FourWay = [a[..a1].to_vec(), a[a1..].to_vec(), b[..b1].to_vec(), b[b1..].to_vec()];
        parts.iter_mut().for_each(|p| p.sort_unstable());
        let ok = (0..2).all(|i| {
            (2..4).all(|j| {
                let sub = pair.restricted(&parts[i], &parts[j]);
                degrees_within(&sub, d, tol)
            })
        });
        if ok {
            return Ok(parts);
        }
    }
    Err(Error::ProbabilisticFailure {
        what: "super-regular partition",
        attempts: seed::RETRY_BUDGET,
        detail: format!("no split met the (d ± {tol:.3}) degree window"),
    })
}

/// Re-tests the pair at `ε^{1/2}` after deleting `removed`, which may hold at
/// most `ε^{10}|A||B|` edges.
pub fn remove_edges_check(
    pair: &BipartitePairView,
    eps: f64,
    removed: &[(usize, usize)],
    mode: RegularityMode,
) -> Result<RegularityVerdict> {
    let budget = eps.powi(10) * (pair.a.len() * pair.b.len()) as f64;
    if removed.len() as f64 > budget {
        return param(format!(
            "removing {} edges exceeds eps^10 |A||B| = {budget:.4}",
            removed.len()
        ));
    }
    let mut g = pair.graph.clone();
    for &(u, v) in removed {
        g.remove_edge(u, v);
    }
    let view = BipartitePairView::new(&g, &pair.a, &pair.b)?;
    regularity_test(&view, eps.sqrt(), mode)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub density: f64,
    pub verdict: RegularityStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub parts: Vec<Vec<usize>>,
    pub exceptional: Vec<usize>,
    pub pairs: Vec<PairReport>,
}

impl PartitionReport {
    pub fn density(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = (i.min(j), i.max(j));
        self.pairs.iter().find(|p| p.i == i && p.j == j).map(|p| p.density)
    }
}

/// Best-effort equipartition: random start, then vertex swaps between parts that
/// reduce the number of edges inside parts. Each pair carries its sampled
/// regularity verdict; nothing is guaranteed.
pub fn regular_partition_heuristic(g: &Graph, target_parts: usize, eps: f64, seed: u64) -> Result<PartitionReport> {
    if target_parts < 2 && g.n() > 1 {
        return param("target_parts must be at least 2");
    }
    let n = g.n();
    let k = target_parts.min(n).max(1);
    let size = n / k;
    let mut rng = seed::stream(seed, 0);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let exceptional: Vec<usize> = {
        let mut e = order[size * k..].to_vec();
        e.sort_unstable();
        e
    };
    let mut label = vec![usize::MAX; n];
    let mut sets = vec![VertexSet::new(n); k];
    for (idx, &v) in order[..size * k].iter().enumerate() {
        label[v] = idx / size;
        sets[idx / size].insert(v);
    }
    if k >= 2 {
        refine_by_swaps(g, &mut label, &mut sets, &mut rng);
    }
    let parts: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let view = BipartitePairView::new(g, &parts[i], &parts[j])?;
            let verdict = regularity_test(
                &view,
                eps,
                RegularityMode::Sampled {
                    trials: DEFAULT_SAMPLES,
                    seed: seed::mix(seed, (i * k + j) as u64 + 1),
                },
            )?;
            pairs.push(PairReport {
                i,
                j,
                density: verdict.density,
                verdict: verdict.status,
            });
        }
    }
    Ok(PartitionReport {
        parts,
        exceptional,
        pairs,
    })
}

fn refine_by_swaps(g: &Graph, label: &mut [usize], sets: &mut [VertexSet], rng: &mut Rng) {
    const ROUNDS: usize = 20;
    let k = sets.len();
    let mut members: Vec<usize> = (0..g.n()).filter(|&v| label[v] != usize::MAX).collect();
    for _ in 0..ROUNDS {
        members.shuffle(rng);
        let mut improved = false;
        for &v in &members {
            let i = label[v];
            let inside = g.degree_into(v, &sets[i]) as i64;
            // Best target part for v, then best partner from that part.
            let Some((j, gain_v)) = (0..k)
                .filter(|&j| j != i)
                .map(|j| (j, inside - g.degree_into(v, &sets[j]) as i64))
                .max_by_key(|&(j, gain)| (gain, std::cmp::Reverse(j)))
            else {
                continue;
            };
            let best_w = sets[j]
                .iter()
                .map(|w| {
                    let gain_w = g.degree_into(w, &sets[j]) as i64 - g.degree_into(w, &sets[i]) as i64;
                    (gain_v + gain_w - 2 * g.has_edge(v, w) as i64, w)
                })
                .max_by_key(|&(gain, w)| (gain, std::cmp::Reverse(w)));
            if let Some((gain, w)) = best_w {
                if gain > 0 {
                    sets[i].remove(v);
                    sets[j].remove(w);
                    sets[i].insert(w);
                    sets[j].insert(v);
                    label[v] = j;
                    label[w] = i;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::*;

    fn halves(n: usize) -> (Vec<usize>, Vec<usize>) {
        ((0..n / 2).collect(), (n / 2..n).collect())
    }

    #[test]
    fn densities() {
        let k = complete_bipartite(4, 5).unwrap();
        let (a, b): (Vec<usize>, Vec<usize>) = ((0..4).collect(), (4..9).collect());
        let view = BipartitePairView::new(&k, &a, &b).unwrap();
        assert_eq!(density(&view).unwrap().value(), 1.0);
        let e = Graph::new(9).unwrap();
        assert_eq!(density(&BipartitePairView::new(&e, &a, &b).unwrap()).unwrap().value(), 0.0);
        let c4 = Graph::from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(density(&BipartitePairView::new(&c4, &[0, 1], &[2, 3]).unwrap()).unwrap().value(), 1.0);
        assert!(density(&BipartitePairView::new(&c4, &[], &[2]).unwrap()).is_err());
        assert!(BipartitePairView::new(&c4, &[0, 1], &[1, 2]).is_err());
    }

    #[test]
    fn matching_is_irregular() {
        let g = Graph::from_edges(16, (0..8).map(|i| (i, i + 8))).unwrap();
        let (a, b) = halves(16);
        let view = BipartitePairView::new(&g, &a, &b).unwrap();
        let v = regularity_test(&view, 0.25, RegularityMode::Exhaustive).unwrap();
        assert!(v.is_irregular());
        let (wa, wb) = v.witness.unwrap();
        let sub = BipartitePairView::new(&g, &wa, &wb).unwrap();
        assert!(wa.len() >= 2 && wb.len() >= 2);
        assert!((density(&sub).unwrap().value() - 0.125).abs() >= 0.25);
    }

    #[test]
    fn complete_is_regular() {
        let g = complete_bipartite(6, 6).unwrap();
        let (a, b) = halves(12);
        let view = BipartitePairView::new(&g, &a, &b).unwrap();
        let v = regularity_test(&view, 0.1, RegularityMode::Exhaustive).unwrap();
        assert_eq!(v.status, RegularityStatus::Regular);
        let big = complete_bipartite(20, 20).unwrap();
        let (a, b) = halves(40);
        let view = BipartitePairView::new(&big, &a, &b).unwrap();
        assert!(regularity_test(&view, 0.1, RegularityMode::Exhaustive).is_err());
    }

    #[test]
    fn split_edges_trivial_cases() {
        let g = complete_bipartite(5, 5).unwrap();
        let (a, b) = halves(10);
        let view = BipartitePairView::new(&g, &a, &b).unwrap();
        let one = split_edges(&view, &[1.0], 3).unwrap();
        assert_eq!(one.classes[0].len(), 25);
        let none = split_edges(&view, &[0.0, 0.0], 3).unwrap();
        assert!(none.classes.iter().all(|c| c.is_empty()));
        assert_eq!(none.leftover.len(), 25);
        assert!(split_edges(&view, &[0.7, 0.7], 3).is_err());
    }

    #[test]
    fn trim_drops_isolated_vertex() {
        let k = complete_bipartite(30, 30).unwrap();
        let g = Graph::from_edges(61, k.edges()).unwrap();
        let a: Vec<usize> = (0..30).chain([60]).collect();
        let b: Vec<usize> = (30..60).collect();
        let view = BipartitePairView::new(&g, &a, &b).unwrap();
        let (ta, tb) = super_regular_trim(&view, 0.05, 1.0).unwrap();
        assert_eq!(ta, (0..30).collect::<Vec<_>>());
        assert_eq!(tb, b);
    }

    #[test]
    fn partition_super_regular_params() {
        let g = complete_bipartite(20, 20).unwrap();
        let (a, b) = halves(40);
        let view = BipartitePairView::new(&g, &a, &b).unwrap();
        assert!(partition_super_regular(&view, 0.1, 1.0, 0, 20, 10, 10, 1).is_err());
        let parts = partition_super_regular(&view, 0.1, 1.0, 10, 10, 8, 12, 1).unwrap();
        assert_eq!(parts.iter().map(Vec::len).collect::<Vec<_>>(), vec![10, 10, 8, 12]);
    }

    #[test]
    fn removal_budget() {
        let g = complete_bipartite(10, 10).unwrap();
        let (a, b) = halves(20);
        let view = BipartitePairView::new(&g, &a, &b).unwrap();
        let base = remove_edges_check(&view, 0.3, &[], RegularityMode::Exhaustive).unwrap();
        assert_eq!(base.status, RegularityStatus::Regular);
        assert!(remove_edges_check(&view, 0.3, &[(0, 10)], RegularityMode::Exhaustive).is_err());
    }

    #[test]
    fn heuristic_trivial_and_bipartite() {
        let single = Graph::new(1).unwrap();
        let r = regular_partition_heuristic(&single, 2, 0.1, 1).unwrap();
        assert_eq!(r.parts, vec![vec![0]]);
        assert!(r.exceptional.is_empty());
        let k = complete_bipartite(40, 40).unwrap();
        let r = regular_partition_heuristic(&k, 2, 0.1, 5).unwrap();
        let first = &r.parts[0];
        assert!(first.iter().all(|&v| v < 40) || first.iter().all(|&v| v >= 40));
        assert_eq!(r.density(0, 1), Some(1.0));
    }
}
