//! Dense reference computations used as test oracles.
//!
//! Everything here works from raw money-matrix entries with nalgebra and
//! shares no code path with the sparse operators under test.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regomax_core::{Direction, MoneyMatrix, SquareMatrix};

pub fn dense_money(m: &MoneyMatrix) -> DMatrix<f64> {
    let n = m.n();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d[(i, j)] = m.get(i, j);
        }
    }
    d
}

/// Column-normalized copy; zero columns become uniform `1/N`.
pub fn dense_stochastic(mm: &DMatrix<f64>) -> DMatrix<f64> {
    let n = mm.nrows();
    let mut s = mm.clone();
    for j in 0..n {
        let mut total = 0.0;
        for i in 0..n {
            total += mm[(i, j)];
        }
        for i in 0..n {
            s[(i, j)] = if total != 0.0 { mm[(i, j)] / total } else { 1.0 / n as f64 };
        }
    }
    s
}

/// Sector-share personalization computed from row sums of `mm`.
pub fn dense_personalization(mm: &DMatrix<f64>, n_countries: usize, n_sectors: usize) -> DVector<f64> {
    let n = mm.nrows();
    let mut shares = vec![0.0; n_sectors];
    let mut total = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| mm[(i, j)]).sum();
        shares[i % n_sectors] += row;
        total += row;
    }
    let mut v = DVector::from_fn(n, |i, _| shares[i % n_sectors] / total / n_countries as f64);
    for x in v.iter_mut() {
        if *x == 0.0 {
            *x = 1e-12;
        }
    }
    let s = v.sum();
    v / s
}

/// Dense G (import) or G* (export) built straight from the flows.
pub fn dense_google(m: &MoneyMatrix, direction: Direction, alpha: f64) -> DMatrix<f64> {
    let mut mm = dense_money(m);
    if direction == Direction::Export {
        mm = mm.transpose();
    }
    let dims = m.dims();
    let s = dense_stochastic(&mm);
    let v = dense_personalization(&mm, dims.n_countries, dims.n_sectors);
    let n = m.n();
    DMatrix::from_fn(n, n, |i, j| alpha * s[(i, j)] + (1.0 - alpha) * v[i])
}

/// Stationary vector: solve `(I - G) p = 0` with the last equation replaced
/// by `sum(p) = 1`.
pub fn dense_stationary(g: &DMatrix<f64>) -> DVector<f64> {
    let n = g.nrows();
    let mut a = DMatrix::identity(n, n) - g;
    let mut b = DVector::zeros(n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    b[n - 1] = 1.0;
    a.lu().solve(&b).expect("nonsingular stationary system")
}

pub fn complement(n: usize, nodes: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !nodes.contains(i)).collect()
}

pub fn sub(g: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| g[(rows[i], cols[j])])
}

/// `G_rr + G_rs (I - G_ss)^-1 G_sr` by a dense LU solve.
pub fn dense_reduced(g: &DMatrix<f64>, nodes: &[usize]) -> DMatrix<f64> {
    let s = complement(g.nrows(), nodes);
    let g_rr = sub(g, nodes, nodes);
    let g_rs = sub(g, nodes, &s);
    let g_sr = sub(g, &s, nodes);
    let g_ss = sub(g, &s, &s);
    let a = DMatrix::identity(s.len(), s.len()) - g_ss;
    let x = a.lu().solve(&g_sr).expect("I - G_ss invertible");
    g_rr + g_rs * x
}

/// Largest eigenvalue modulus from the real Schur form.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn to_dense(m: &SquareMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j))
}

/// Brute-force top-k: scan every ordered pair, keep the k heaviest positive
/// targets per source with ascending-index tie-break.
pub fn brute_top_k(composite: &DMatrix<f64>, k: usize) -> Vec<(usize, usize)> {
    let n = composite.nrows();
    let mut out = Vec::new();
    for j in 0..n {
        let mut chosen: Vec<usize> = Vec::new();
        for _ in 0..k {
            let mut best: Option<usize> = None;
            for i in 0..n {
                if i == j || chosen.contains(&i) || composite[(i, j)] <= 0.0 {
                    continue;
                }
                best = match best {
                    Some(b) if composite[(b, j)] >= composite[(i, j)] => Some(b),
                    _ => Some(i),
                };
            }
            match best {
                Some(b) => chosen.push(b),
                None => break,
            }
        }
        out.extend(chosen.into_iter().map(|i| (j, i)));
    }
    out
}

/// Random network shape with `2 <= N <= max_n`, plus a seed and density.
pub fn random_shape(rng: &mut ChaCha8Rng, max_n: usize) -> (usize, usize, u64, f64) {
    loop {
        let nc = rng.random_range(1..=6);
        let ns = rng.random_range(1..=10);
        if nc * ns >= 2 && nc * ns <= max_n {
            return (nc, ns, rng.random(), rng.random_range(0.05..=1.0));
        }
    }
}

/// Random synthetic network with `2 <= N <= max_n` and nonzero total flow.
pub fn random_network(rng: &mut ChaCha8Rng, max_n: usize) -> MoneyMatrix {
    loop {
        let (nc, ns, seed, density) = random_shape(rng, max_n);
        let m = regomax_core::synthesize_network(nc, ns, seed, density).unwrap();
        if m.total() > 0.0 {
            return m;
        }
    }
}

/// Random distinct subset of `0..n` with `1 <= len < n`, in random order.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let size = rng.random_range(1..n);
    let mut all: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        all.swap(i, j);
    }
    all.truncate(size);
    all
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
