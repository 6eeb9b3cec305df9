use rand::Rng as _;

use super::RootedTree;
use crate::error::{param, Result};
use crate::seed;

/// Uniform attachment with a degree cap: vertex `v` picks a uniformly random
/// earlier vertex, resampling while the pick already has `max_degree`
/// neighbours. Rooted at vertex 0.
pub fn random_tree(n: usize, max_degree: usize, seed: u64) -> Result<RootedTree> {
    if n == 0 {
        return param("a tree needs at least one vertex");
    }
    if max_degree < 2 && n > 2 {
        return param("max_degree must be at least 2 for trees with more than two vertices");
    }
    if max_degree == 0 && n > 1 {
        return param("max_degree 0 only admits a single vertex");
    }
    let mut rng = seed::rng(seed);
    let mut parent = vec![None; n];
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    for v in 1..n {
        let idx = rng.gen_range(0..open.len());
        let p = open[idx];
        parent[v] = Some(p);
        degree[p] += 1;
        degree[v] = 1;
        if degree[p] >= max_degree {
            open.swap_remove(idx);
        }
        if max_degree > 1 {
            open.push(v);
        }
    }
    RootedTree::from_parents(parent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_cap_holds() {
        for seed in 0..20 {
            let t = random_tree(500, 3, seed).unwrap();
            assert_eq!(t.n(), 500);
            assert!(t.max_degree() <= 3);
        }
        assert_eq!(random_tree(2, 1, 0).unwrap().n(), 2);
        assert!(random_tree(5, 1, 0).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_tree(100, 4, 9).unwrap(), random_tree(100, 4, 9).unwrap());
    }
}
