mod common;

use common::*;
use regomax_core::sensitivity::{balance_derivative, pipeline_balance};
use regomax_core::*;

/// Balances from the dense oracle pipeline.
fn oracle_balance(m: &MoneyMatrix) -> (Vec<f64>, Vec<f64>) {
    let dims = m.dims();
    let p = dense_stationary(&dense_google(m, Direction::Import, 0.5));
    let ps = dense_stationary(&dense_google(m, Direction::Export, 0.5));
    let node = p.iter().zip(ps.iter()).map(|(a, b)| (b - a) / (b + a)).collect();
    let mut pc = vec![0.0; dims.n_countries];
    let mut psc = vec![0.0; dims.n_countries];
    for i in 0..m.n() {
        pc[i / dims.n_sectors] += p[i];
        psc[i / dims.n_sectors] += ps[i];
    }
    let country = pc.iter().zip(&psc).map(|(a, b)| (b - a) / (b + a)).collect();
    (country, node)
}

fn scaled_link(m: &MoneyMatrix, source: usize, target: usize, factor: f64) -> MoneyMatrix {
    m.map_flows(|d, s, v| if s == source && d == target { v * factor } else { v }).unwrap()
}

#[test]
fn balance_matches_recomputation() {
    let m = synthesize_network(3, 3, 31, 0.8).unwrap();
    let b = pipeline_balance(&m, &SensitivityOptions::default()).unwrap();
    let (country, node) = oracle_balance(&m);
    for (a, b) in b.country.iter().zip(&country) {
        assert!((a - b).abs() < 1e-10);
    }
    for (a, b) in b.node.iter().zip(&node) {
        assert!((a - b).abs() < 1e-10);
    }
    assert!(b.node.iter().chain(&b.country).all(|x| x.abs() < 1.0));
}

#[test]
fn global_rescaling_leaves_derivatives_unchanged() {
    let opts = SensitivityOptions::default();
    for seed in 0..4 {
        let m = synthesize_network(3, 3, seed, 0.7).unwrap();
        let shock = Shock::SectorOutflows { source: 4 };
        let base = balance_derivative(&m, shock, &opts).unwrap();
        for k in [1e-3, 7.0, 1e6] {
            let scaled = balance_derivative(&m.scaled(k).unwrap(), shock, &opts).unwrap();
            for (a, b) in base.node.iter().chain(&base.country).zip(scaled.node.iter().chain(&scaled.country)) {
                assert!((a - b).abs() <= 1e-9, "k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn global_shock_has_zero_derivative() {
    let m = synthesize_network(3, 4, 5, 0.6).unwrap();
    let d = balance_derivative(&m, Shock::Global, &SensitivityOptions::default()).unwrap();
    assert!(d.node.iter().chain(&d.country).all(|x| x.abs() <= 1e-9));
}

#[test]
fn central_difference_is_second_order() {
    let m = synthesize_network(1, 4, 3, 1.0).unwrap();
    let shock = Shock::SingleLink { source: 0, target: 2 };
    let target = BalanceTarget::Node(2);
    let d = |h: f64| {
        let opts = SensitivityOptions { step: h, ..Default::default() };
        sensitivity_derivative(&m, shock, target, &opts).unwrap()
    };
    let (d1, d2, d4) = (d(0.2), d(0.1), d(0.05));
    let ratio = (d1 - d2) / (d2 - d4);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");

    // half-step one-sided difference agrees to O(h)
    let opts = SensitivityOptions::default();
    let b0 = pipeline_balance(&m, &opts).unwrap().node[2];
    let b1 = pipeline_balance(&scaled_link(&m, 0, 2, 1.005), &opts).unwrap().node[2];
    let one_sided = (b1 - b0) / 0.005;
    assert!((one_sided - d(0.01)).abs() <= 10.0 * 0.005 * d(0.01).abs().max(1e-3));
}

#[test]
fn sector_map_matches_scripted_rerun() {
    let m = synthesize_network(3, 3, 8, 1.0).unwrap();
    let opts = SensitivityOptions::default();
    let h = opts.step;
    let map = sector_sensitivity_map(&m, &[2, 0, 1], 0, &opts).unwrap();
    let dims = m.dims();
    assert_eq!(map.rows.len(), 3);
    for (row, &c) in map.rows.iter().enumerate() {
        for s in 0..3 {
            let cell = map.values[row][s];
            if s == 0 {
                assert!(cell.is_none());
                continue;
            }
            let (src, dst) = (dims.node(c, 0), dims.node(c, s));
            let (_, up) = oracle_balance(&scaled_link(&m, src, dst, 1.0 + h));
            let (_, down) = oracle_balance(&scaled_link(&m, src, dst, 1.0 - h));
            let want = (up[dst] - down[dst]) / (2.0 * h);
            assert!((cell.unwrap() - want).abs() < 1e-9, "({c},{s}): {cell:?} vs {want}");
        }
    }
    // rows follow unperturbed country PageRank
    let p = power_iterate(&GoogleMatrix::from_money(&m, Direction::Import).unwrap(), 1e-13, 10_000).unwrap();
    let pc = aggregate_by_country(&p.p, dims);
    for w in map.rows.windows(2) {
        assert!(pc[w[0]] >= pc[w[1]]);
    }
}

#[test]
fn sector_without_inlinks_gives_zero_column() {
    let m = synthesize_network(3, 3, 9, 1.0).unwrap();
    let dims = m.dims();
    // sector 0 never sells to sector 2 in the same country
    let m = m
        .map_flows(|d, s, v| {
            let same = dims.country_of(d) == dims.country_of(s);
            if same && dims.sector_of(s) == 0 && dims.sector_of(d) == 2 { 0.0 } else { v }
        })
        .unwrap();
    let map = sector_sensitivity_map(&m, &[0, 1, 2], 0, &SensitivityOptions::default()).unwrap();
    assert!(map.values.iter().all(|row| row[2] == Some(0.0)));
}

#[test]
fn country_map_matches_scripted_rerun() {
    let m = synthesize_network(5, 2, 4, 0.9).unwrap();
    let opts = SensitivityOptions::default();
    let h = opts.step;
    let map = country_sensitivity_map(&m, &[0, 1, 2, 3, 4], 2, 1, false, &opts).unwrap();
    assert_eq!(map.rows.len(), 4);
    assert!(!map.rows.contains(&2));
    let src = m.dims().node(2, 1);
    let col = |f: f64| m.map_flows(|_, s, v| if s == src { v * f } else { v }).unwrap();
    let (up, _) = oracle_balance(&col(1.0 + h));
    let (down, _) = oracle_balance(&col(1.0 - h));
    for (row, &c) in map.rows.iter().enumerate() {
        let want = (up[c] - down[c]) / (2.0 * h);
        assert!((map.values[row][0].unwrap() - want).abs() < 1e-9);
    }

    let with_source = country_sensitivity_map(&m, &[0, 2], 2, 1, true, &opts).unwrap();
    assert!(with_source.rows.contains(&2));

    // zero-export source node
    let silent = m.map_flows(|_, s, v| if s == src { 0.0 } else { v }).unwrap();
    let map = country_sensitivity_map(&silent, &[0, 1, 3], 2, 1, false, &opts).unwrap();
    assert!(map.values.iter().all(|r| r[0] == Some(0.0)));
}

#[test]
fn dry_run_yields_zero_map() {
    let m = synthesize_network(2, 3, 1, 1.0).unwrap();
    let opts = SensitivityOptions { dry_run: true, ..Default::default() };
    let map = sector_sensitivity_map(&m, &[0, 1], 2, &opts).unwrap();
    for row in &map.values {
        for (s, v) in row.iter().enumerate() {
            assert_eq!(*v, if s == 2 { None } else { Some(0.0) });
        }
    }
}
