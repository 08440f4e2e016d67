mod common;

use common::*;
use proptest::prelude::*;
use regomax_core::*;

fn network() -> impl Strategy<Value = MoneyMatrix> {
    (1usize..5, 1usize..6, any::<u64>(), 0.05f64..=1.0).prop_map(|(nc, ns, seed, density)| {
        synthesize_network(nc, ns, seed, density).unwrap()
    })
}

proptest! {
    #[test]
    fn stochastic_columns_sum_to_one(m in network()) {
        for dir in Direction::BOTH {
            let s = build_stochastic(&m, dir);
            prop_assert!(s.max_column_deviation() <= 1e-12);
            prop_assert!(s.triplets().all(|(_, _, v)| v >= 0.0));
        }
    }

    #[test]
    fn import_of_m_is_export_of_transpose(m in network()) {
        let a = build_stochastic(&m, Direction::Import);
        let b = build_stochastic(&m.transpose(), Direction::Export);
        for j in 0..m.n() {
            prop_assert_eq!(a.column(j), b.column(j));
        }
    }

    #[test]
    fn google_preserves_probability(m in network(), alpha in 0.5f64..=0.9, seed in any::<u64>()) {
        prop_assume!(m.total() > 0.0);
        let g = GoogleMatrix::from_money_with_alpha(&m, Direction::Import, alpha).unwrap();
        let mut r = rng(seed);
        let mut x: Vec<f64> = (0..m.n()).map(|_| rand::Rng::random::<f64>(&mut r)).collect();
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        let mut y = vec![0.0; m.n()];
        g.apply(&x, &mut y);
        prop_assert!((y.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(y.iter().all(|&v| v >= 0.0));
        // sampled columns of G
        for j in [0, m.n() / 2, m.n() - 1] {
            prop_assert!((g.column(j).iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn personalization_is_positive_distribution(m in network()) {
        prop_assume!(m.total() > 0.0);
        for dir in Direction::BOTH {
            let v = build_personalization(&m, dir).unwrap();
            prop_assert!((v.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(v.as_slice().iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn synthetic_matrices_are_valid(nc in 1usize..6, ns in 1usize..6, seed in any::<u64>(), density in 0.01f64..=1.0) {
        let m = synthesize_network(nc, ns, seed, density).unwrap();
        prop_assert!(m.validate().is_ok());
        prop_assert!(m.iter().all(|f| f.dest != f.source && f.value > 0.0));
    }
}

#[test]
fn volumes_match_brute_force_summation() {
    let m = synthesize_network(2, 2, 7, 1.0).unwrap();
    let v = compute_volumes(&m);
    let d = dense_money(&m);
    for i in 0..m.n() {
        let mut row = 0.0;
        let mut col = 0.0;
        for k in 0..m.n() {
            row += d[(i, k)];
            col += d[(k, i)];
        }
        assert!((v.import[i] - row).abs() <= 1e-12 * row.max(1.0));
        assert!((v.export[i] - col).abs() <= 1e-12 * col.max(1.0));
    }
    let total_import: f64 = v.import.iter().sum();
    let total_export: f64 = v.export.iter().sum();
    assert!((total_import - total_export).abs() <= 1e-12 * total_import);
}

#[test]
fn columns_match_hand_normalization() {
    let m = synthesize_network(1, 3, 3, 1.0).unwrap();
    let s = build_stochastic(&m, Direction::Import);
    let d = dense_money(&m);
    for j in 0..3 {
        let total: f64 = (0..3).map(|i| d[(i, j)]).sum();
        for i in 0..3 {
            assert!((s.get(i, j) - d[(i, j)] / total).abs() < 1e-14);
        }
    }
}

#[test]
fn sparse_google_matches_dense_construction() {
    for seed in 0..20 {
        let m = synthesize_network(3, 4, seed, 0.3).unwrap();
        for dir in Direction::BOTH {
            let g = GoogleMatrix::from_money(&m, dir).unwrap();
            let d = dense_google(&m, dir, 0.5);
            for i in 0..m.n() {
                for j in 0..m.n() {
                    assert!((g.get(i, j) - d[(i, j)]).abs() < 1e-15);
                }
            }
        }
    }
}

#[test]
fn user_personalization_hook() {
    let m = synthesize_network(2, 2, 1, 1.0).unwrap();
    let v = PersonalizationVector::from_weights(vec![1.0, 1.0, 2.0, 4.0]).unwrap();
    assert_eq!(v.as_slice(), &[0.125, 0.125, 0.25, 0.5]);
    let g = build_google(build_stochastic(&m, Direction::Import), 0.85, v, Direction::Import).unwrap();
    assert_eq!(g.alpha(), 0.85);
    assert!(PersonalizationVector::from_weights(vec![1.0, 0.0]).is_err());
}
