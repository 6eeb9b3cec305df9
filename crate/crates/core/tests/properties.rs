use std::collections::BTreeSet;

use proptest::prelude::*;

use treepack::graph::generate::erdos_renyi;
use treepack::graph::holes::{bipartite_hole_exists, is_hole};
use treepack::graph::io::{read_graph, to_string};
use treepack::packing::{blowup_pack, check_blowup_contract, BlowupBatch, ConflictGraph};
use treepack::structure::coloring::color_multigraph;
use treepack::tree::io::{read_tree, write_tree};
use treepack::tree::{partition_subtrees, random_tree, split_connector};
use treepack::{Graph, VertexSet};

fn multigraph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..10).prop_flat_map(|n| {
        let edge = (0..n, 0..n).prop_filter("no loops", |(a, b)| a != b);
        (Just(n), prop::collection::vec(edge, 0..40))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coloring_is_proper_within_degree_plus_multiplicity((n, edges) in multigraph()) {
        let colors = color_multigraph(n, &edges);
        prop_assert_eq!(colors.len(), edges.len());
        let mut degree = vec![0usize; n];
        let mut mult = std::collections::BTreeMap::new();
        for &(a, b) in &edges {
            degree[a] += 1;
            degree[b] += 1;
            *mult.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
        }
        let bound = degree.iter().max().copied().unwrap_or(0) + mult.values().max().copied().unwrap_or(0);
        prop_assert!(colors.iter().all(|&c| c < bound.max(1)));
        let mut seen = BTreeSet::new();
        for (&(a, b), &c) in edges.iter().zip(&colors) {
            prop_assert!(seen.insert((a, c)), "vertex {} sees colour {} twice", a, c);
            prop_assert!(seen.insert((b, c)), "vertex {} sees colour {} twice", b, c);
        }
    }

    #[test]
    fn vertex_set_matches_btreeset(a in prop::collection::vec(0usize..200, 0..60), b in prop::collection::vec(0usize..200, 0..60)) {
        let (sa, sb) = (VertexSet::from_iter(200, a.iter().copied()), VertexSet::from_iter(200, b.iter().copied()));
        let (ma, mb): (BTreeSet<usize>, BTreeSet<usize>) = (a.into_iter().collect(), b.into_iter().collect());
        prop_assert_eq!(sa.to_vec(), ma.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection(&sb).to_vec(), ma.intersection(&mb).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.difference(&sb).to_vec(), ma.difference(&mb).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection_len(&sb), ma.intersection(&mb).count());
        prop_assert_eq!(sa.is_disjoint(&sb), ma.is_disjoint(&mb));
        prop_assert_eq!(sa.is_subset(&sb), ma.is_subset(&mb));
        let mut u = sa.clone();
        u.union_with(&sb);
        prop_assert_eq!(u.len(), ma.union(&mb).count());
    }

    #[test]
    fn graph_text_round_trips(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let back = read_graph(to_string(&g).as_bytes()).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn tree_text_round_trips(n in 1usize..200, delta in 2usize..6, seed in any::<u64>()) {
        let tree = random_tree(n, delta, seed).unwrap();
        prop_assert!(tree.max_degree() <= delta);
        let mut buf = Vec::new();
        write_tree(&tree, &mut buf).unwrap();
        let back = read_tree(buf.as_slice()).unwrap();
        prop_assert_eq!(back.root(), tree.root());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), tree.edges().collect::<Vec<_>>());
    }

    #[test]
    fn partition_and_split_invariants(n in 30usize..400, delta in 2usize..6, t in 2usize..20, seed in any::<u64>()) {
        let tree = random_tree(n, delta, seed).unwrap();
        let dec = partition_subtrees(&tree, t).unwrap();
        let mut covered = vec![false; n];
        for piece in &dec.pieces {
            if n >= t {
                prop_assert!(piece.len() >= t && piece.len() <= 2 * tree.max_degree() * t);
            }
            for &v in &piece.vertices {
                prop_assert!(!covered[v]);
                covered[v] = true;
            }
        }
        prop_assert!(covered.iter().all(|&c| c));
        let split = split_connector(&tree, &dec).unwrap();
        prop_assert_eq!(split.connector.len() + split.bulk.len(), n);
        for &v in &split.layers[1] {
            prop_assert!(tree.neighbors(v).all(|w| split.is_connector(w)));
        }
    }

    #[test]
    fn holes_are_monotone(n in 4usize..12, p in 0.1f64..0.9, seed in any::<u64>(), s in 1usize..4, t in 1usize..4) {
        let g = erdos_renyi(n, p, seed).unwrap();
        prop_assume!(s + t <= n);
        let q = bipartite_hole_exists(&g, s, t).unwrap();
        if let Some((a, b)) = &q.witness {
            prop_assert!(is_hole(&g, a, b));
            prop_assert!(bipartite_hole_exists(&g, s - 1, t).unwrap().found());
            prop_assert!(bipartite_hole_exists(&g, s, t - 1).unwrap().found());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blowup_successes_satisfy_contract(seed in any::<u64>(), k in 1usize..4, density in 0.6f64..1.0) {
        let n = 30;
        let host = {
            let full = erdos_renyi(2 * n, density, seed).unwrap();
            let (a, b) = (VertexSet::from_iter(2 * n, 0..n), VertexSet::from_iter(2 * n, n..2 * n));
            full.bipartite_part(&a, &b)
        };
        let a: Vec<usize> = (0..n).collect();
        let b: Vec<usize> = (n..2 * n).collect();
        let batches: Vec<BlowupBatch> = (0..k)
            .map(|j| {
                let size = 20;
                let tree = random_tree(size, 3, seed ^ j as u64).unwrap();
                let (even, _) = treepack::tree::bipartition(&tree, tree.root());
                let mut side = vec![1u8; size];
                for v in even {
                    side[v] = 0;
                }
                let mut targets = vec![None; size];
                targets[0] = Some(VertexSet::from_iter(2 * n, if side[0] == 0 { 0..n / 2 } else { n..n + n / 2 }));
                BlowupBatch { side, edges: tree.edges().collect(), targets }
            })
            .collect();
        let mut conflicts = ConflictGraph::new();
        for j in 1..k {
            conflicts.add_edge((j - 1, 0), (j, 0));
        }
        let mut used = Graph::new(2 * n).unwrap();
        let before = used.clone();
        if let Ok(maps) = blowup_pack(&host, [&a, &b], &mut used, &batches, &conflicts, 4, seed) {
            prop_assert!(check_blowup_contract(&host, [&a, &b], &before, &batches, &conflicts, &maps).is_ok());
            let images: usize = batches.iter().map(|bt| bt.edges.len()).sum();
            prop_assert_eq!(used.edge_count(), images);
        } else {
            prop_assert_eq!(used.edge_count(), 0);
        }
    }
}
