//! Connector/bulk split of a decomposed tree and the assignment of bulk
//! vertices to slot classes `X_i^{T,s}`.

use rand::Rng as _;

use super::{RootedTree, SubtreeDecomposition};
use crate::error::{param, Error, Result};
use crate::seed;

/// Slot identifier `(s, i)` with `s < r` and `i ∈ {0, 1}`.
pub type Slot = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSplit {
    /// Connector layer (0, 1 or 2) of each vertex, `None` for bulk vertices.
    pub layer: Vec<Option<u8>>,
    /// `C_T^0, C_T^1, C_T^2`.
    pub layers: [Vec<usize>; 3],
    pub connector: Vec<usize>,
    pub bulk: Vec<usize>,
    /// Per piece, the vertices of `A_S(x)` and `B_S(x)` outside the connector.
    pub piece_bulk: Vec<(Vec<usize>, Vec<usize>)>,
    /// Filled in by [`assign_slots`].
    pub slot_of_piece: Vec<Option<Slot>>,
    /// `X_i^{T,s}` stored at index `2s + i`; empty until slots are assigned.
    pub classes: Vec<Vec<usize>>,
}

impl TreeSplit {
    pub fn is_connector(&self, v: usize) -> bool {
        self.layer[v].is_some()
    }

    pub fn class(&self, s: usize, i: usize) -> &[usize] {
        &self.classes[2 * s + i]
    }

    /// Slot class of a bulk vertex, once assigned.
    pub fn slot_of_vertex(&self, decomposition: &SubtreeDecomposition, tree: &RootedTree, v: usize) -> Option<Slot> {
        if self.is_connector(v) {
            return None;
        }
        let p = decomposition.piece_of[v];
        let (s, i) = self.slot_of_piece[p]?;
        let even = (tree.depth(v) - tree.depth(decomposition.pieces[p].root)).is_multiple_of(2);
        Some(if even { (s, i) } else { (s, 1 - i) })
    }
}

/// Layers `C_T^0` (piece roots), `C_T^1`, `C_T^2` (children and grandchildren
/// inside each piece); everything else is bulk.
pub fn split_connector(tree: &RootedTree, decomposition: &SubtreeDecomposition) -> Result<TreeSplit> {
    let n = tree.n();
    if decomposition.piece_of.len() != n {
        return Err(Error::Internal("decomposition does not match the tree".into()));
    }
    let mut layer = vec![None; n];
    let mut layers: [Vec<usize>; 3] = Default::default();
    for p in &decomposition.pieces {
        let base = tree.depth(p.root);
        for &v in &p.vertices {
            let k = tree.depth(v) - base;
            if k <= 2 {
                layer[v] = Some(k as u8);
                layers[k].push(v);
            }
        }
    }
    for l in layers.iter_mut() {
        l.sort_unstable();
    }
    for (child, parent) in tree.edges() {
        let (lc, lp) = (layer[child], layer[parent]);
        let ok = match (lc, lp) {
            (Some(_), Some(_)) | (None, None) => true,
            // A connector vertex below a bulk vertex must be a piece root.
            (Some(k), None) => k == 0,
            // A bulk vertex below a connector vertex hangs off layer 2.
            (None, Some(k)) => k == 2,
        };
        if !ok {
            return Err(Error::Internal(format!(
                "edge {child}-{parent} joins connector layer {lc:?} to bulk layer {lp:?}"
            )));
        }
    }
    let connector: Vec<usize> = (0..n).filter(|&v| layer[v].is_some()).collect();
    let bulk: Vec<usize> = (0..n).filter(|&v| layer[v].is_none()).collect();
    let piece_bulk = (0..decomposition.pieces.len())
        .map(|p| {
            let (a, b) = decomposition.piece_sides(tree, p);
            let keep = |v: &usize| layer[*v].is_none();
            (a.into_iter().filter(keep).collect(), b.into_iter().filter(keep).collect())
        })
        .collect();
    Ok(TreeSplit {
        layer,
        layers,
        connector,
        bulk,
        piece_bulk,
        slot_of_piece: vec![None; decomposition.pieces.len()],
        classes: Vec::new(),
    })
}

/// Acceptance window for class sizes: `centre ± tolerance`, never above `cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotWindow {
    pub tolerance: f64,
    pub cap: Option<f64>,
}

impl SlotWindow {
    /// `± ε n` with an optional hard cap.
    pub fn new(epsilon: f64, reference_n: usize, cap: Option<f64>) -> Self {
        Self {
            tolerance: epsilon * reference_n as f64,
            cap,
        }
    }

    fn excess(&self, size: usize, centre: f64) -> f64 {
        let s = size as f64;
        let mut e = ((s - centre).abs() - self.tolerance).max(0.0);
        if let Some(cap) = self.cap {
            e += (s - cap).max(0.0);
        }
        e
    }
}

const SLOT_RETRIES: usize = 50;

/// Draws `(s, i)` uniformly for every piece, then repairs by single-piece moves
/// until every class is inside `window` around `|V(F_T)|/(2r)`. When
/// `base_loads` is given (one entry per class) the repair also flattens
/// `base_loads + class sizes`, which lets a caller balance many trees at once.
pub fn assign_slots(
    split: &mut TreeSplit,
    r: usize,
    window: SlotWindow,
    base_loads: Option<&[usize]>,
    seed: u64,
) -> Result<()> {
    if r == 0 {
        return param("r must be at least 1");
    }
    if base_loads.is_some_and(|b| b.len() != 2 * r) {
        return param("base_loads must have 2r entries");
    }
    let pieces = split.piece_bulk.len();
    let sizes: Vec<(usize, usize)> = split.piece_bulk.iter().map(|(a, b)| (a.len(), b.len())).collect();
    let centre = split.bulk.len() as f64 / (2 * r) as f64;
    let zero = vec![0; 2 * r];
    let base = base_loads.unwrap_or(&zero);
    let score = |loads: &[usize]| -> (f64, usize) {
        let excess = loads.iter().map(|&l| window.excess(l, centre)).sum();
        let peak = loads.iter().zip(base).map(|(l, b)| l + b).max().unwrap_or(0);
        (excess, if base_loads.is_some() { peak } else { 0 })
    };
    let mut worst_spread = (0, 0);
    for attempt in 0..SLOT_RETRIES {
        let mut rng = seed::stream(seed, attempt as u64);
        let mut slots: Vec<Slot> = (0..pieces).map(|_| (rng.gen_range(0..r), rng.gen_range(0..2))).collect();
        let mut loads = vec![0usize; 2 * r];
        let apply = |loads: &mut Vec<usize>, p: usize, (s, i): Slot, sign: bool| {
            let (a, b) = sizes[p];
            let (x, y) = (2 * s + i, 2 * s + 1 - i);
            if sign {
                loads[x] += a;
                loads[y] += b;
            } else {
                loads[x] -= a;
                loads[y] -= b;
            }
        };
        for (p, &sl) in slots.iter().enumerate() {
            apply(&mut loads, p, sl, true);
        }
        let mut current = score(&loads);
        if current.0 > 0.0 || base_loads.is_some() {
            loop {
                let mut best: Option<(usize, Slot, (f64, usize))> = None;
                for p in 0..pieces {
                    if sizes[p] == (0, 0) {
                        continue;
                    }
                    let old = slots[p];
                    apply(&mut loads, p, old, false);
                    for s in 0..r {
                        for i in 0..2 {
                            if (s, i) == old {
                                continue;
                            }
                            apply(&mut loads, p, (s, i), true);
                            let sc = score(&loads);
                            apply(&mut loads, p, (s, i), false);
                            if sc < best.map_or(current, |b| b.2) {
                                best = Some((p, (s, i), sc));
                            }
                        }
                    }
                    apply(&mut loads, p, old, true);
                }
                match best {
                    Some((p, sl, sc)) if sc < current => {
                        apply(&mut loads, p, slots[p], false);
                        apply(&mut loads, p, sl, true);
                        slots[p] = sl;
                        current = sc;
                    }
                    _ => break,
                }
            }
        }
        if current.0 == 0.0 {
            split.slot_of_piece = slots.into_iter().map(Some).collect();
            split.classes = vec![Vec::new(); 2 * r];
            for (p, (a, b)) in split.piece_bulk.iter().enumerate() {
                let (s, i) = split.slot_of_piece[p].expect("just assigned");
                split.classes[2 * s + i].extend_from_slice(a);
                split.classes[2 * s + 1 - i].extend_from_slice(b);
            }
            split.classes.iter_mut().for_each(|c| c.sort_unstable());
            return Ok(());
        }
        let lo = *loads.iter().min().unwrap_or(&0);
        let hi = *loads.iter().max().unwrap_or(&0);
        worst_spread = (lo, hi);
    }
    Err(Error::ProbabilisticFailure {
        what: "slot assignment",
        attempts: SLOT_RETRIES,
        detail: format!(
            "class sizes spread over [{}, {}] around centre {centre:.1} ± {:.1}",
            worst_spread.0, worst_spread.1, window.tolerance
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::partition_subtrees;

    #[test]
    fn path_of_seven() {
        let p = RootedTree::path(7).unwrap();
        let d = partition_subtrees(&p, 7).unwrap();
        let s = split_connector(&p, &d).unwrap();
        assert_eq!(s.layers, [vec![0], vec![1], vec![2]]);
        assert_eq!(s.bulk, vec![3, 4, 5, 6]);
    }

    #[test]
    fn shallow_tree_is_all_connector() {
        // Star of stars, depth 2.
        let parents = vec![None, Some(0), Some(0), Some(1), Some(1), Some(2)];
        let t = RootedTree::from_parents(parents).unwrap();
        let d = partition_subtrees(&t, 10).unwrap();
        let s = split_connector(&t, &d).unwrap();
        assert!(s.bulk.is_empty());
        let mut s2 = s.clone();
        assign_slots(&mut s2, 3, SlotWindow::new(0.1, 10, None), None, 1).unwrap();
        assert!(s2.classes.iter().all(|c| c.is_empty()));
    }

    #[test]
    fn single_slot_gets_piece_sides() {
        let p = RootedTree::path(9).unwrap();
        let d = partition_subtrees(&p, 9).unwrap();
        let mut s = split_connector(&p, &d).unwrap();
        assign_slots(&mut s, 1, SlotWindow::new(1.0, 10, None), None, 4).unwrap();
        let (i_a, i_b) = if s.slot_of_piece[0] == Some((0, 0)) { (0, 1) } else { (1, 0) };
        assert_eq!(s.classes[i_a], vec![4, 6, 8]);
        assert_eq!(s.classes[i_b], vec![3, 5, 7]);
        assert_eq!(s.slot_of_vertex(&d, &p, 4), Some((0, i_a)));
    }

    #[test]
    fn long_path_balances() {
        let p = RootedTree::path(1000).unwrap();
        let d = partition_subtrees(&p, 10).unwrap();
        let mut s = split_connector(&p, &d).unwrap();
        assign_slots(&mut s, 4, SlotWindow::new(0.05, 125, None), None, 11).unwrap();
        let centre = s.bulk.len() as f64 / 8.0;
        for c in &s.classes {
            assert!((c.len() as f64 - centre).abs() <= 6.25, "{} vs {centre}", c.len());
        }
    }
}
