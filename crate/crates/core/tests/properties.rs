use proptest::prelude::*;
use proptest::sample::subsequence;

use surfrig::generator::MoveRegistry;
use surfrig::inverse::{
    find_inverse_edge_join, inverse_henneberg1_candidates, try_inverse_henneberg2,
};
use surfrig::moves::{edge_join, henneberg1, henneberg2};
use surfrig::{generate, is_sparse, is_sparse_bruteforce, reduce, replay, SimpleGraph};

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = all_pairs(n);
        let len = pairs.len();
        subsequence(pairs, 0..=len)
            .prop_map(move |edges| SimpleGraph::from_edges(n, &edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn pebble_game_matches_bruteforce(g in arb_graph(9), k in 0u8..=3) {
        let a = is_sparse(&g, k).unwrap();
        let b = is_sparse_bruteforce(&g, k).unwrap();
        prop_assert_eq!(a.sparse, b.sparse);
        prop_assert_eq!(a.tight, b.tight);
        if let Some(w) = a.witness {
            // the witness spans more than 2|W| - k edges
            let mut w = w;
            w.sort_unstable();
            prop_assert!(g.induced_edge_count(&w) as i64 > 2 * w.len() as i64 - k as i64);
        }
    }

    #[test]
    fn sparsity_is_monotone_in_k(g in arb_graph(9)) {
        for k in 1..=3u8 {
            if is_sparse(&g, k).unwrap().sparse {
                prop_assert!(is_sparse(&g, k - 1).unwrap().sparse);
            }
        }
    }

    #[test]
    fn verdict_ignores_edge_order(g in arb_graph(9), k in 0u8..=3, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut edges = g.edge_list();
        edges.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let flipped: Vec<_> = edges.iter().map(|&(u, v)| (v, u)).collect();
        let a = is_sparse(&g, k).unwrap();
        for es in [edges, flipped] {
            let h = SimpleGraph::from_edges(g.n(), &es).unwrap();
            let b = is_sparse(&h, k).unwrap();
            prop_assert_eq!((a.sparse, a.tight), (b.sparse, b.tight));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn generated_graphs_reduce_and_replay(n in 5usize..=14, k in 1u8..=3, seed in any::<u64>()) {
        let (g, cert) = generate(n, k, seed).unwrap();
        prop_assert!(is_sparse(&g, k).unwrap().tight);
        prop_assert_eq!(&replay(&cert).unwrap(), &g);
        let reduced = reduce(&g, k).unwrap();
        prop_assert_eq!(&replay(&reduced).unwrap(), &g);
    }

    #[test]
    fn henneberg_round_trips(n in 5usize..=10, seed in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let (g, _) = generate(n, 1, seed).unwrap();
        let (v1, v2) = (a.index(n), b.index(n));
        prop_assume!(v1 != v2);
        let (h, _) = henneberg1(&g, v1, v2).unwrap();
        let (_, red) = inverse_henneberg1_candidates(&h, 1)
            .into_iter()
            .find(|(v, _)| *v == n)
            .expect("new vertex has degree 2");
        prop_assert_eq!(&red.graph, &g);
        prop_assert_eq!(&red.step.apply(&red.graph).unwrap(), &h);

        let edges = g.edge_list();
        let (x, y) = edges[a.index(edges.len())];
        let z = b.index(n);
        prop_assume!(z != x && z != y);
        let (h, _) = henneberg2(&g, (x, y), z).unwrap();
        let red = try_inverse_henneberg2(&h, n, 1).unwrap().expect("admissible");
        prop_assert!(is_sparse(&red.graph, 1).unwrap().tight);
        prop_assert_eq!(&red.step.apply(&red.graph).unwrap(), &h);
    }

    #[test]
    fn edge_join_round_trips(n1 in 5usize..=8, n2 in 5usize..=8, s1 in any::<u64>(), s2 in any::<u64>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let (g, _) = generate(n1, 1, s1).unwrap();
        let (h, _) = generate(n2, 1, s2).unwrap();
        let (joined, _) = edge_join(&g, &h, a.index(n1), b.index(n2)).unwrap();
        prop_assert!(is_sparse(&joined, 1).unwrap().tight);
        let split = find_inverse_edge_join(&joined).expect("bridge");
        let cert = reduce(&joined, 1).unwrap();
        prop_assert_eq!(&replay(&cert).unwrap(), &joined);
        prop_assert_eq!(split.left_graph.n() + split.right_graph.n(), n1 + n2);
    }

    #[test]
    fn sampled_moves_keep_tightness(n in 5usize..=9, seed in any::<u64>()) {
        use rand::SeedableRng;
        let registry = MoveRegistry::default();
        let (g, _) = generate(n, 1, seed).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for name in registry.names() {
            let sampler = registry.get(name).unwrap();
            if let Some(mv) = sampler.sample(&g, 1, 6, &mut rng).unwrap() {
                let h = mv.apply(&g).unwrap();
                prop_assert!(h.n() > g.n());
                prop_assert_eq!(h.m() + 1, 2 * h.n());
            }
        }
    }
}

/// Every (2,1)-tight graph on up to seven labeled vertices reduces to the
/// base graph and replays to itself.
#[test]
fn all_small_tight_graphs_reduce() {
    let mut total = 0;
    for n in 5..=7usize {
        let pairs = all_pairs(n);
        let m = 2 * n - 1;
        let mut chosen: Vec<usize> = (0..m).collect();
        loop {
            let edges: Vec<_> = chosen.iter().map(|&i| pairs[i]).collect();
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            if is_sparse(&g, 1).unwrap().tight {
                let cert = reduce(&g, 1).unwrap_or_else(|e| panic!("{e}: {edges:?}"));
                assert_eq!(replay(&cert).unwrap(), g, "{edges:?}");
                total += 1;
            }
            // next m-subset in lexicographic order
            let Some(i) = (0..m).rev().find(|&i| chosen[i] < pairs.len() - m + i) else {
                break;
            };
            chosen[i] += 1;
            for j in i + 1..m {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
    }
    assert!(total > 1000, "{total}");
}
