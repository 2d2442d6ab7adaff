use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use layers_core::graph::{
    configuration_multigraph, generate_spherically_symmetric_tree, simple_graph_from_sequence, DegreeProfile,
    DegreeSequence, Graph, LatticePoint,
};
use layers_core::lattice::{check_lattice_a, sample_monotone_walk};
use layers_core::layers::{compute_layers, extract_tk, lattice_layer, AgeAssignment, LazyAgeSource};
use layers_core::oracle::rat_to_f64;
use layers_core::t2_forest::{analyze_t2, b_event, enumerate_gamma_prime, l_event};
use layers_core::tree_paths::{
    check_good, enumerate_root_paths, prob_agamma, prob_agamma_oracle, realized_zk, ZkEvaluator,
};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let e: Vec<_> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&p, _)| p).collect();
            Graph::from_edges(n, &e).unwrap()
        })
    })
}

fn ages_for(n: usize, seed: u64) -> AgeAssignment {
    let mut rank: Vec<u32> = (0..n as u32).collect();
    rank.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    AgeAssignment::from_ranks(rank).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn layer_bounds_and_edge_sum(g in arb_graph(), seed in any::<u64>()) {
        let ages = ages_for(g.n(), seed);
        let l = compute_layers(&g, &ages).unwrap();
        for v in 0..g.n() {
            prop_assert!(l.layer[v] >= 1);
            prop_assert!(l.layer[v] as usize <= g.degree(v) + 1);
        }
        let excess: usize = l.layer.iter().map(|&x| x as usize - 1).sum();
        prop_assert_eq!(excess, g.edge_count());
    }

    #[test]
    fn tk_is_nested(g in arb_graph(), seed in any::<u64>()) {
        let l = compute_layers(&g, &ages_for(g.n(), seed)).unwrap();
        for k in 1..6u32 {
            let a = extract_tk(&g, &l, k);
            let b = extract_tk(&g, &l, k + 1);
            prop_assert!(a.open.iter().zip(&b.open).all(|(&x, &y)| !x || y));
            prop_assert!(a.graph.edge_count() <= b.graph.edge_count());
        }
    }

    #[test]
    fn t2_is_monotone_forest(g in arb_graph(), seed in any::<u64>()) {
        let s = analyze_t2(&g, &ages_for(g.n(), seed)).unwrap();
        prop_assert!(s.forest, "cycle {:?}", s.violation);
        prop_assert!(s.monotone, "violation {:?}", s.violation);
    }

    #[test]
    fn l_event_implies_b_event(g in arb_graph(), seed in any::<u64>(), n in 1usize..4) {
        let ages = ages_for(g.n(), seed);
        let layer = compute_layers(&g, &ages).unwrap().layer;
        for v in 0..g.n() {
            for p in enumerate_gamma_prime(&g, v, n, 10_000).unwrap() {
                if l_event(&p, &ages, &layer) {
                    prop_assert!(b_event(&g, &p, &ages), "{:?}", p.vertices);
                }
            }
        }
    }

    #[test]
    fn good_paths_lie_in_t3(levels in proptest::collection::vec(2usize..5, 4), seed in any::<u64>()) {
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Levels(levels), 5).unwrap();
        let ages = ages_for(t.n(), seed);
        let layer = compute_layers(&t.graph, &ages).unwrap().layer;
        for g in enumerate_root_paths(&t, 3).unwrap() {
            if check_good(&t, &g, &ages).unwrap().good {
                prop_assert!(g.vertices.iter().all(|&v| layer[v] <= 3), "{:?}", g.vertices);
            }
        }
    }

    #[test]
    fn path_event_closed_form_matches_oracle(levels in proptest::collection::vec(2usize..5, 4)) {
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Levels(levels), 5).unwrap();
        let g = &enumerate_root_paths(&t, 3).unwrap()[0];
        prop_assert_eq!(prob_agamma(&t, g).unwrap(), prob_agamma_oracle(&t, g).unwrap());
    }

    #[test]
    fn zk_walk_matches_exact_sum(levels in proptest::collection::vec(2usize..4, 5), seed in any::<u64>()) {
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Levels(levels), 5).unwrap();
        let ages = ages_for(t.n(), seed);
        let fast = ZkEvaluator::new(&t, 2).unwrap().zk(&ages);
        let exact = rat_to_f64(&realized_zk(&t, &ages, 2).unwrap());
        prop_assert!((fast - exact).abs() <= 1e-9 * exact.max(1.0), "{} vs {}", fast, exact);
    }

    #[test]
    fn lattice_a_implies_t4(d in 2usize..6, blocks in 1usize..4, seed in any::<u64>(), walk in any::<u64>()) {
        let src = LazyAgeSource::new(seed);
        let path = sample_monotone_walk(d, 2 * blocks - 1, &mut ChaCha8Rng::seed_from_u64(walk));
        let out = check_lattice_a(&path, &src).unwrap();
        if out.all {
            for p in &path {
                prop_assert!(lattice_layer(&src, p).unwrap() <= 4);
            }
        }
    }

    #[test]
    fn lattice_layers_are_in_range(d in 1usize..6, seed in any::<u64>(), c in proptest::collection::vec(-50i64..50, 5)) {
        let p = LatticePoint(c[..d].to_vec());
        let l = lattice_layer(&LazyAgeSource::new(seed), &p).unwrap();
        prop_assert!((1..=2 * d + 1).contains(&l));
    }

    #[test]
    fn sampled_graphs_realize_the_sequence(half in proptest::collection::vec(1usize..4, 6..30), seed in any::<u64>()) {
        let mut degrees = half.clone();
        degrees.extend(half);
        let seq = DegreeSequence::new(degrees).unwrap();
        let degrees = seq.degrees().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(configuration_multigraph(&seq, &mut rng).degrees(), degrees.clone());
        if let Ok(g) = simple_graph_from_sequence(&seq, &mut rng, 10_000) {
            prop_assert!(g.check_invariants());
            prop_assert_eq!((0..g.n()).map(|v| g.degree(v)).collect::<Vec<_>>(), degrees);
        }
    }
}
