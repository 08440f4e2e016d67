mod common;

use common::*;
use proptest::prelude::*;
use regomax_core::*;

#[test]
fn power_iteration_matches_dense_solve() {
    let mut r = rng(0x5eed);
    for _ in 0..60 {
        let m = random_network(&mut r, 50);
        for dir in Direction::BOTH {
            let g = GoogleMatrix::from_money(&m, dir).unwrap();
            let p = power_iterate(&g, 1e-12, 10_000).unwrap();
            let oracle = dense_stationary(&dense_google(&m, dir, 0.5));
            let err = p.p.iter().zip(oracle.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err <= 1e-10, "N={} {dir:?}: {err:e}", m.n());
        }
    }
}

#[test]
fn four_node_fixture_against_eigen_solve() {
    let m = synthesize_network(2, 2, 7, 1.0).unwrap();
    let g = GoogleMatrix::from_money(&m, Direction::Import).unwrap();
    let p = power_iterate(&g, 1e-12, 10_000).unwrap();
    let oracle = dense_stationary(&dense_google(&m, Direction::Import, 0.5));
    for (a, b) in p.p.iter().zip(oracle.iter()) {
        assert!((a - b).abs() < 1e-10);
    }
    // the result satisfies the stated residual bound
    let mut gp = vec![0.0; 4];
    g.apply(&p.p, &mut gp);
    let res: f64 = gp.iter().zip(&p.p).map(|(a, b)| (a - b).abs()).sum();
    assert!(res <= 1e-12);
}

#[test]
fn cheirank_is_pagerank_of_transpose() {
    for seed in 0..10 {
        let m = synthesize_network(3, 3, seed, 0.4).unwrap();
        let chei = power_iterate(&GoogleMatrix::from_money(&m, Direction::Export).unwrap(), 1e-13, 10_000).unwrap();
        let page_t = power_iterate(&GoogleMatrix::from_money(&m.transpose(), Direction::Import).unwrap(), 1e-13, 10_000).unwrap();
        assert_eq!(chei.kind, RankKind::CheiRank);
        assert_eq!(page_t.kind, RankKind::PageRank);
        for (a, b) in chei.p.iter().zip(&page_t.p) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_vector_invariants(nc in 1usize..5, ns in 1usize..6, seed in any::<u64>(), density in 0.05f64..=1.0, alpha in 0.5f64..=0.9) {
        let m = synthesize_network(nc, ns, seed, density).unwrap();
        prop_assume!(m.total() > 0.0);
        let g = GoogleMatrix::from_money_with_alpha(&m, Direction::Import, alpha).unwrap();
        let mut trace = Vec::new();
        let p = regomax_core::rank::power_iterate_traced(&g, 1e-12, 10_000, |r| trace.push(r)).unwrap();
        prop_assert!((p.p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let vmin = g.personalization().as_slice().iter().cloned().fold(f64::INFINITY, f64::min);
        for &x in &p.p {
            prop_assert!(x > 0.0);
            prop_assert!(x >= (1.0 - alpha) * vmin * (1.0 - 1e-12));
        }
        for w in trace.windows(2).skip(1) {
            prop_assert!(w[1] <= w[0] * 1.01 + 1e-15, "residuals {:?}", trace);
        }
        prop_assert_eq!(trace.len(), p.iterations_used);
    }

    #[test]
    fn ordering_is_sorted(p in proptest::collection::vec(0.0f64..1.0, 1..60)) {
        let o = order_ranks(&p);
        for w in o.order.windows(2) {
            prop_assert!(p[w[0]] >= p[w[1]]);
            if p[w[0]] == p[w[1]] {
                prop_assert!(w[0] < w[1]);
            }
        }
        for (k, &i) in o.order.iter().enumerate() {
            prop_assert_eq!(o.rank[i], k + 1);
        }
    }
}

#[test]
fn aggregation_matches_direct_summation() {
    let m = synthesize_network(4, 5, 99, 0.5).unwrap();
    let dims = m.dims();
    let g = GoogleMatrix::from_money(&m, Direction::Import).unwrap();
    let p = power_iterate(&g, 1e-12, 10_000).unwrap().p;
    let by_country = aggregate_by_country(&p, dims);
    let by_sector = aggregate_by_sector(&p, dims);
    for c in 1..=dims.n_countries {
        let mut want = 0.0;
        for s in 1..=dims.n_sectors {
            want += p[flatten_index(c, s, dims.n_sectors).unwrap() - 1];
        }
        assert!((by_country[c - 1] - want).abs() < 1e-15);
    }
    for s in 1..=dims.n_sectors {
        let mut want = 0.0;
        for c in 1..=dims.n_countries {
            want += p[flatten_index(c, s, dims.n_sectors).unwrap() - 1];
        }
        assert!((by_sector[s - 1] - want).abs() < 1e-15);
    }
    assert!((by_country.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((by_sector.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}
