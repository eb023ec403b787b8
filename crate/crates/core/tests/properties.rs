use proptest::prelude::*;

use cliquetile_core::absorption::{
    build_h_path, complement_vector, gadget_exit_tiling, gadget_for, path_exit_tilings, sparse_template,
};
use cliquetile_core::constructions::{case_tag, h_det, h_det_complement, h_vectors, HVector};
use cliquetile_core::embed::count_labelled_embeddings;
use cliquetile_core::graph::{complement_within_kminus, union};
use cliquetile_core::phi::{phi, phi_anchored};
use cliquetile_core::tiling::{greedy_tiling, max_tiling, perfect_tiling, NoDeadline, TileOutcome};
use cliquetile_core::{DecoratedGraph, Graph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn same_size_pair(max_n: usize) -> impl Strategy<Value = (Graph, Graph, Graph)> {
    (1..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        let one = move || {
            proptest::collection::vec(any::<bool>(), m).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
            })
        };
        (one(), one(), one())
    })
}

/// Injective maps counted by trying every assignment.
fn count_by_enumeration(pattern: &Graph, host: &Graph, anchors: &[(usize, usize)]) -> u64 {
    fn go(pattern: &Graph, host: &Graph, anchors: &[(usize, usize)], img: &mut Vec<usize>) -> u64 {
        let i = img.len();
        if i == pattern.n() {
            let ok = pattern.edges().all(|(u, v)| host.has_edge(img[u], img[v]));
            return ok as u64;
        }
        let mut total = 0;
        for h in 0..host.n() {
            if img.contains(&h) || anchors.iter().any(|&(p, a)| p == i && a != h) {
                continue;
            }
            img.push(h);
            total += go(pattern, host, anchors, img);
            img.pop();
        }
        total
    }
    go(pattern, host, anchors, &mut Vec::new())
}

/// Minimum over vertex subsets and all nonempty edge subsets inside them.
fn full_brute_phi(g: &Graph, anchors: &[usize], n: f64, p: f64) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << g.n()) {
        let edges = g
            .edges()
            .filter(|&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
            .count();
        let free = (0..g.n())
            .filter(|v| mask >> v & 1 == 1 && !anchors.contains(v))
            .count() as f64;
        for e in 1..=edges {
            best = best.min(free * n.ln() + e as f64 * p.ln());
        }
    }
    best
}

fn valid_rk() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=9).prop_flat_map(|r| (Just(r), 2..=r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn union_commutes_and_associates((a, b, c) in same_size_pair(9)) {
        prop_assert_eq!(union(&a, &b).unwrap(), union(&b, &a).unwrap());
        let left = union(&union(&a, &b).unwrap(), &c).unwrap();
        let right = union(&a, &union(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn min_degree_at_most_average(g in graph_strategy(12)) {
        prop_assert!(g.min_degree() * g.n() <= 2 * g.edge_count());
    }

    #[test]
    fn kminus_complement_is_an_involution(r in 2usize..7, bits in proptest::collection::vec(any::<bool>(), 28)) {
        let km = DecoratedGraph::kminus(r);
        let edges: Vec<(usize, usize)> = km.graph.edges().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
        let f = DecoratedGraph::new(Graph::from_edges(r + 1, edges).unwrap(), km.w1, km.w2).unwrap();
        let back = complement_within_kminus(&complement_within_kminus(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn counts_match_enumeration(
        pattern in graph_strategy(4),
        host in graph_strategy(7),
        anchor in proptest::option::of((0usize..4, 0usize..7)),
    ) {
        let anchors: Vec<(usize, usize)> = anchor
            .filter(|&(p, h)| p < pattern.n() && h < host.n())
            .into_iter()
            .collect();
        let got = count_labelled_embeddings(&pattern, &host, &anchors, None).unwrap();
        prop_assert!(!got.truncated);
        prop_assert_eq!(got.count, count_by_enumeration(&pattern, &host, &anchors));
    }

    #[test]
    fn phi_restricts_to_induced_subgraphs(g in graph_strategy(6), x in 0.0f64..1.5, ln_n in 0.5f64..12.0, anchor in 0usize..6) {
        prop_assume!(g.edge_count() > 0);
        let n = ln_n.exp();
        let p = n.powf(-x).min(1.0);
        let got = phi(&g, n, p).unwrap();
        prop_assert!((got.log_value - full_brute_phi(&g, &[], n, p)).abs() < 1e-9);
        let sub = g.induced(&got.argmin_vertices);
        prop_assert_eq!(sub.edge_count(), got.argmin_edges);
        prop_assert!(got.argmin_edges >= 1);
        let w = [anchor % g.n()];
        let anchored = phi_anchored(&g, &w, n, p).unwrap();
        prop_assert!((anchored.log_value - full_brute_phi(&g, &w, n, p)).abs() < 1e-9);
        prop_assert!(anchored.log_value <= got.log_value + 1e-9);
    }

    #[test]
    fn phi_is_monotone(g in graph_strategy(6), p1 in 0.01f64..1.0, p2 in 0.01f64..1.0, n1 in 1.0f64..1e4, n2 in 1.0f64..1e4) {
        prop_assume!(g.edge_count() > 0);
        let (plo, phi_p) = (p1.min(p2), p1.max(p2));
        let (nlo, nhi) = (n1.min(n2), n1.max(n2));
        prop_assert!(phi(&g, nlo, plo).unwrap().log_value <= phi(&g, nlo, phi_p).unwrap().log_value + 1e-9);
        prop_assert!(phi(&g, nlo, plo).unwrap().log_value <= phi(&g, nhi, plo).unwrap().log_value + 1e-9);
    }

    #[test]
    fn case_tags_decompose_r((r, k) in valid_rk()) {
        let t = case_tag(r, k).unwrap();
        prop_assert_eq!(t.k * (t.r_star - 1) + t.q, r);
        prop_assert!(t.q > 0 && t.q <= k);
        let det = h_det(r, k).unwrap();
        let comp = h_det_complement(r, k).unwrap();
        prop_assert!(!det.shares_edge_with(&comp));
        prop_assert_eq!(union(&det, &comp).unwrap(), Graph::complete(r));
    }

    #[test]
    fn kminus_paths_exit_both_ways(r in 2usize..7, t in 1usize..5) {
        let p = build_h_path(&HVector::repeat(&DecoratedGraph::kminus(r), t).unwrap()).unwrap();
        let (ta, tb) = path_exit_tilings(&p).unwrap();
        let all: Vec<usize> = (0..p.graph.n()).collect();
        ta.validate(&p.graph, Some(&all.iter().copied().filter(|&v| v != p.a).collect::<Vec<_>>())).unwrap();
        tb.validate(&p.graph, Some(&all.iter().copied().filter(|&v| v != p.b).collect::<Vec<_>>())).unwrap();
    }

    #[test]
    fn gadget_halves_partition_and_exit((r, k) in valid_rk(), s in 1usize..4) {
        let v = h_vectors(r, k).unwrap().shortest();
        let g = gadget_for(r, k, s, &v).unwrap();
        let halves = g.split().unwrap();
        prop_assert!(!halves.det.shares_edge_with(&halves.rand));
        let host = union(&halves.det, &halves.rand).unwrap();
        prop_assert_eq!(&host, &g.kr_side().unwrap());
        for j in 0..s {
            let mut cover: Vec<usize> = (0..g.n()).filter(|v| !g.base().contains(v)).collect();
            cover.push(g.base()[j]);
            gadget_exit_tiling(&g, j).unwrap().validate(&host, Some(&cover)).unwrap();
        }
        // the complemented vector complements every entry inside K^-
        let c = complement_vector(&v).unwrap();
        for (a, b) in v.entries().iter().zip(c.entries()) {
            prop_assert!(!a.graph.shares_edge_with(&b.graph));
        }
    }

    #[test]
    fn sparse_templates_are_flexible(m in 1usize..7) {
        let t = sparse_template(m).unwrap();
        prop_assert_eq!(t.edge_count(), 2 * m + m * (m + 1));
        prop_assert!(t.verify_exhaustive().is_none());
    }

    #[test]
    fn tilings_validate_and_bound_greedy(g in graph_strategy(10), r in 2usize..4) {
        let best = max_tiling(&g, r, &NoDeadline).unwrap();
        prop_assert!(best.optimal);
        best.tiling.validate(&g, None).unwrap();
        let greedy = greedy_tiling(&g, r);
        greedy.validate(&g, None).unwrap();
        prop_assert!(best.tiling.len() >= greedy.len());
        match perfect_tiling(&g, r, &NoDeadline).unwrap() {
            TileOutcome::Found(t) => {
                t.validate_perfect(&g).unwrap();
                prop_assert_eq!(best.tiling.len() * r, g.n());
            }
            TileOutcome::None(_) => prop_assert!(best.tiling.len() * r < g.n()),
            TileOutcome::Timeout => prop_assert!(false, "timeout without deadline"),
        }
    }
}
