//! PageRank and CheiRank by power iteration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::google::{Direction, GoogleMatrix};
use crate::index::Dims;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankKind {
    PageRank,
    CheiRank,
}

impl From<Direction> for RankKind {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Import => RankKind::PageRank,
            Direction::Export => RankKind::CheiRank,
        }
    }
}

/// Stationary probability vector of a Google matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub p: Vec<f64>,
    pub kind: RankKind,
    pub iterations_used: usize,
    /// L1 change of the final step.
    pub residual: f64,
}

impl RankVector {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Iterates `p <- G p` from the personalization vector until the L1 change
/// drops to `tol`.
pub fn power_iterate(g: &GoogleMatrix, tol: f64, max_iter: usize) -> Result<RankVector> {
    power_iterate_traced(g, tol, max_iter, |_| ())
}

/// [`power_iterate`], reporting each step's L1 change to `trace`.
pub fn power_iterate_traced(
    g: &GoogleMatrix,
    tol: f64,
    max_iter: usize,
    mut trace: impl FnMut(f64),
) -> Result<RankVector> {
    if !(tol > 0.0) {
        return Err(Error::range("tol", tol, "> 0"));
    }
    if max_iter == 0 {
        return Err(Error::range("max_iter", max_iter, ">= 1"));
    }
    let n = g.n();
    let mut p = g.personalization().as_slice().to_vec();
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        g.apply(&p, &mut next);
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= sum);
        residual = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        trace(residual);
        core::mem::swap(&mut p, &mut next);
        if residual <= tol {
            return Ok(RankVector {
                p,
                kind: g.direction().into(),
                iterations_used: it,
                residual,
            });
        }
    }
    Err(Error::Convergence {
        what: "power iteration",
        iterations: max_iter,
        residual,
    })
}

/// Rank positions from decreasing probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOrdering {
    /// `order[k]` is the 0-based node at rank position `k + 1`.
    pub order: Vec<usize>,
    /// `rank[i]` is the 1-based rank K of node `i`.
    pub rank: Vec<usize>,
}

/// Sorts nodes by decreasing probability; equal probabilities keep
/// ascending node order.
pub fn order_ranks(p: &[f64]) -> RankOrdering {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    let mut rank = vec![0; p.len()];
    for (k, &i) in order.iter().enumerate() {
        rank[i] = k + 1;
    }
    RankOrdering { order, rank }
}

/// `P_c = sum_s p(c, s)`.
pub fn aggregate_by_country(p: &[f64], dims: Dims) -> Vec<f64> {
    let mut out = vec![0.0; dims.n_countries];
    for (i, x) in p.iter().enumerate() {
        out[dims.country_of(i)] += x;
    }
    out
}

/// `P_s = sum_c p(c, s)`.
pub fn aggregate_by_sector(p: &[f64], dims: Dims) -> Vec<f64> {
    let mut out = vec![0.0; dims.n_sectors];
    for (i, x) in p.iter().enumerate() {
        out[dims.sector_of(i)] += x;
    }
    out
}
