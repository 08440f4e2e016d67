//! Stochastic matrices S and S*, personalization vectors, and the Google
//! matrices `G = alpha * S + (1 - alpha) * v * 1^T` built from them.
//!
//! `G` is never stored densely. It is an operator over the sparse part of
//! `S`, a uniform correction for dangling columns, and the rank-one
//! teleportation term.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::money::MoneyMatrix;
use crate::tolerances::{DEFAULT_ALPHA, PERSONALIZATION_FLOOR};

/// Flow orientation: `Import` yields S and G (PageRank), `Export` yields
/// S* and G* (CheiRank).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Import,
    Export,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Import, Direction::Export];

    pub fn name(self) -> &'static str {
        match self {
            Direction::Import => "import",
            Direction::Export => "export",
        }
    }
}

/// Import volumes `V` (row sums) and export volumes `V*` (column sums).
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeVectors {
    pub import: Vec<f64>,
    pub export: Vec<f64>,
}

impl VolumeVectors {
    pub fn get(&self, direction: Direction) -> &[f64] {
        match direction {
            Direction::Import => &self.import,
            Direction::Export => &self.export,
        }
    }
}

pub fn compute_volumes(m: &MoneyMatrix) -> VolumeVectors {
    let n = m.n();
    let mut import = vec![0.0; n];
    let mut export = vec![0.0; n];
    for f in m.iter() {
        import[f.dest] += f.value;
        export[f.source] += f.value;
    }
    VolumeVectors { import, export }
}

/// Column-stochastic matrix: sparse normalized columns plus uniform `1/N`
/// columns for nodes without outgoing volume.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
    dangling: Vec<usize>,
    is_dangling: Vec<bool>,
}

/// Builds S (`Import`) or S* (`Export`) from a money matrix.
///
/// Column `j` of S is column `j` of M divided by its sum `V*_j`; S* does the
/// same on the transposed flows, normalizing by `V_j`.
pub fn build_stochastic(m: &MoneyMatrix, direction: Direction) -> StochasticMatrix {
    match direction {
        Direction::Import => normalize_columns(m),
        Direction::Export => normalize_columns(&m.transpose()),
    }
}

fn normalize_columns(m: &MoneyMatrix) -> StochasticMatrix {
    let n = m.n();
    let mut col_ptr = Vec::with_capacity(n + 1);
    let mut row_idx = Vec::with_capacity(m.nnz());
    let mut values = Vec::with_capacity(m.nnz());
    let mut dangling = Vec::new();
    let mut is_dangling = vec![false; n];
    col_ptr.push(0);
    for j in 0..n {
        let volume: f64 = m.column(j).map(|(_, v)| v).sum();
        if volume > 0.0 {
            for (i, v) in m.column(j) {
                row_idx.push(i);
                values.push(v / volume);
            }
        } else {
            dangling.push(j);
            is_dangling[j] = true;
        }
        col_ptr.push(row_idx.len());
    }
    StochasticMatrix {
        n,
        col_ptr,
        row_idx,
        values,
        dangling,
        is_dangling,
    }
}

impl StochasticMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Columns replaced by the uniform vector, ascending.
    pub fn dangling_columns(&self) -> &[usize] {
        &self.dangling
    }

    pub fn is_dangling(&self, j: usize) -> bool {
        self.is_dangling[j]
    }

    /// Explicitly stored entries of a non-dangling column.
    pub fn sparse_column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// Every nonzero `(row, col, value)`, dangling columns expanded.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let uniform = 1.0 / self.n as f64;
        (0..self.n).flat_map(move |j| {
            let dense = self.is_dangling[j];
            let sparse = self.sparse_column(j).map(move |(i, v)| (i, j, v));
            let full = (0..if dense { self.n } else { 0 }).map(move |i| (i, j, uniform));
            sparse.chain(full)
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.is_dangling[j] {
            return 1.0 / self.n as f64;
        }
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        match self.row_idx[span.clone()].binary_search(&i) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    /// Dense copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        if self.is_dangling[j] {
            return vec![1.0 / self.n as f64; self.n];
        }
        let mut out = vec![0.0; self.n];
        for (i, v) in self.sparse_column(j) {
            out[i] = v;
        }
        out
    }

    /// `y = S x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        y.iter_mut().for_each(|v| *v = 0.0);
        let mut dangling_mass = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            if self.is_dangling[j] {
                dangling_mass += xj;
                continue;
            }
            if xj == 0.0 {
                continue;
            }
            for (i, v) in self.sparse_column(j) {
                y[i] += v * xj;
            }
        }
        if dangling_mass != 0.0 {
            let share = dangling_mass / self.n as f64;
            y.iter_mut().for_each(|v| *v += share);
        }
    }

    /// `y = S^T x`.
    pub fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        let total: f64 = x.iter().sum();
        let uniform = total / self.n as f64;
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = if self.is_dangling[j] {
                uniform
            } else {
                self.sparse_column(j).map(|(i, v)| v * x[i]).sum()
            };
        }
    }

    /// Largest `|column sum - 1|`.
    pub fn max_column_deviation(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                let sum: f64 = if self.is_dangling[j] {
                    self.n as f64 * (1.0 / self.n as f64)
                } else {
                    self.sparse_column(j).map(|(_, v)| v).sum()
                };
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Strictly positive probability vector used for teleportation.
#[derive(Debug, Clone, PartialEq)]
pub struct PersonalizationVector(Vec<f64>);

impl PersonalizationVector {
    /// Wraps user-supplied weights, rescaling them to sum to one.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Degenerate("empty personalization vector"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Validation(
                "personalization weights must be finite and strictly positive".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        Ok(PersonalizationVector(weights.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        PersonalizationVector(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Personalization that is democratic across countries and weighted by
/// each sector's global share of trade volume.
///
/// `v(c, s) = sigma_s / N_c` where `sigma_s` is the fraction of all import
/// (or export) volume carried by sector `s`. Zero entries are lifted to
/// [`PERSONALIZATION_FLOOR`] before renormalizing.
pub fn build_personalization(
    m: &MoneyMatrix,
    direction: Direction,
) -> Result<PersonalizationVector> {
    let dims = m.dims();
    let volumes = compute_volumes(m);
    let volume = volumes.get(direction);
    let total: f64 = volume.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("money matrix has zero total flow"));
    }
    let mut sector_volume = vec![0.0; dims.n_sectors];
    for (i, v) in volume.iter().enumerate() {
        sector_volume[dims.sector_of(i)] += v;
    }
    let nc = dims.n_countries as f64;
    let mut v: Vec<f64> = (0..dims.n())
        .map(|i| sector_volume[dims.sector_of(i)] / total / nc)
        .collect();
    let mut floored = false;
    for x in v.iter_mut().filter(|x| **x <= 0.0) {
        *x = PERSONALIZATION_FLOOR;
        floored = true;
    }
    let sum: f64 = v.iter().sum();
    if floored || sum != 1.0 {
        v.iter_mut().for_each(|x| *x /= sum);
    }
    Ok(PersonalizationVector(v))
}

/// `G = alpha * S + (1 - alpha) * v * 1^T`, applied lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct GoogleMatrix {
    stochastic: StochasticMatrix,
    alpha: f64,
    v: PersonalizationVector,
    direction: Direction,
}

pub fn build_google(
    s: StochasticMatrix,
    alpha: f64,
    v: PersonalizationVector,
    direction: Direction,
) -> Result<GoogleMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::range("alpha", alpha, "(0, 1)"));
    }
    if v.len() != s.n() {
        return Err(Error::Validation(alloc::format!(
            "personalization vector has length {}, matrix has {} nodes",
            v.len(),
            s.n()
        )));
    }
    Ok(GoogleMatrix {
        stochastic: s,
        alpha,
        v,
        direction,
    })
}

impl GoogleMatrix {
    /// G or G* of `m` with the default damping and sector-volume personalization.
    pub fn from_money(m: &MoneyMatrix, direction: Direction) -> Result<Self> {
        Self::from_money_with_alpha(m, direction, DEFAULT_ALPHA)
    }

    pub fn from_money_with_alpha(m: &MoneyMatrix, direction: Direction, alpha: f64) -> Result<Self> {
        let v = build_personalization(m, direction)?;
        build_google(build_stochastic(m, direction), alpha, v, direction)
    }

    pub fn n(&self) -> usize {
        self.stochastic.n()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn stochastic(&self) -> &StochasticMatrix {
        &self.stochastic
    }

    pub fn personalization(&self) -> &PersonalizationVector {
        &self.v
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.alpha * self.stochastic.get(i, j) + (1.0 - self.alpha) * self.v.0[i]
    }

    /// Dense copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        let mut col = self.stochastic.column(j);
        for (c, v) in col.iter_mut().zip(&self.v.0) {
            *c = self.alpha * *c + (1.0 - self.alpha) * v;
        }
        col
    }

    /// `y = G x = alpha * S x + (1 - alpha) * v * sum(x)`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.stochastic.apply(x, y);
        let teleport = (1.0 - self.alpha) * x.iter().sum::<f64>();
        for (yi, vi) in y.iter_mut().zip(&self.v.0) {
            *yi = self.alpha * *yi + teleport * vi;
        }
    }

    /// `y = G^T x = alpha * S^T x + (1 - alpha) * (v . x) * 1`.
    pub fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.stochastic.apply_transpose(x, y);
        let teleport = (1.0 - self.alpha) * self.v.0.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        for yi in y.iter_mut() {
            *yi = self.alpha * *yi + teleport;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::Dims;
    use crate::money::Flow;

    fn matrix(nc: usize, ns: usize, flows: &[(usize, usize, f64)]) -> MoneyMatrix {
        let dims = Dims::new(nc, ns).unwrap();
        MoneyMatrix::from_flows(
            dims,
            flows.iter().map(|&(dest, source, value)| Flow { dest, source, value }),
        )
        .unwrap()
        .0
    }

    #[test]
    fn volumes_single_edge() {
        // M(2,1) = 5 in 1-based terms.
        let m = matrix(1, 3, &[(1, 0, 5.0)]);
        let v = compute_volumes(&m);
        assert_eq!(v.import, vec![0.0, 5.0, 0.0]);
        assert_eq!(v.export, vec![5.0, 0.0, 0.0]);
        let z = compute_volumes(&MoneyMatrix::zeros(Dims::new(2, 2).unwrap()));
        assert!(z.import.iter().chain(&z.export).all(|&x| x == 0.0));
    }

    #[test]
    fn swap_matrix_and_dangling_column() {
        let m = matrix(1, 2, &[(1, 0, 3.0), (0, 1, 3.0)]);
        let s = build_stochastic(&m, Direction::Import);
        assert_eq!(s.get(0, 0), 0.0);
        assert_eq!(s.get(1, 0), 1.0);
        assert_eq!(s.get(0, 1), 1.0);

        let m = matrix(1, 3, &[(1, 0, 2.0), (2, 0, 2.0)]);
        let s = build_stochastic(&m, Direction::Import);
        assert_eq!(s.dangling_columns(), &[1, 2]);
        for i in 0..3 {
            assert_eq!(s.get(i, 1), 1.0 / 3.0);
        }
        assert!(s.max_column_deviation() < 1e-12);
    }

    #[test]
    fn personalization_sector_shares() {
        // Sector 0 carries 3/4 of import volume, sector 1 the rest.
        let m = matrix(2, 2, &[(0, 1, 3.0), (2, 1, 3.0), (1, 0, 1.0), (3, 0, 1.0)]);
        let v = build_personalization(&m, Direction::Import).unwrap();
        let want = [0.375, 0.125, 0.375, 0.125];
        for (a, b) in v.as_slice().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn personalization_floor_and_single_sector() {
        let m = matrix(3, 1, &[(1, 0, 1.0), (2, 1, 4.0)]);
        let v = build_personalization(&m, Direction::Import).unwrap();
        assert!(v.as_slice().iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));

        // Sector 1 never imports: its entries take the floor.
        let m = matrix(2, 2, &[(0, 1, 1.0), (2, 3, 1.0)]);
        let v = build_personalization(&m, Direction::Import).unwrap();
        assert!(v.as_slice().iter().all(|&x| x > 0.0));
        assert!((v.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(v.as_slice()[1] < 1e-11);

        let zero = MoneyMatrix::zeros(Dims::new(2, 2).unwrap());
        assert!(matches!(
            build_personalization(&zero, Direction::Import),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn google_column_of_swap() {
        let m = matrix(1, 2, &[(1, 0, 3.0), (0, 1, 3.0)]);
        let g = build_google(
            build_stochastic(&m, Direction::Import),
            0.5,
            PersonalizationVector::uniform(2),
            Direction::Import,
        )
        .unwrap();
        assert_eq!(g.column(0), vec![0.25, 0.75]);
        let mut y = vec![0.0; 2];
        g.apply(&[1.0, 0.0], &mut y);
        assert_eq!(y, vec![0.25, 0.75]);
    }

    #[test]
    fn alpha_range_and_default() {
        let m = matrix(1, 2, &[(1, 0, 3.0)]);
        let s = build_stochastic(&m, Direction::Import);
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(build_google(s.clone(), bad, PersonalizationVector::uniform(2), Direction::Import).is_err());
        }
        assert_eq!(GoogleMatrix::from_money(&m, Direction::Import).unwrap().alpha(), 0.5);
    }

    #[test]
    fn transpose_operator_matches_entries() {
        let m = matrix(1, 3, &[(1, 0, 3.0), (2, 0, 1.0), (0, 1, 2.0)]);
        let g = GoogleMatrix::from_money(&m, Direction::Import).unwrap();
        let x = [0.2, -0.5, 1.3];
        let mut y = vec![0.0; 3];
        g.apply_transpose(&x, &mut y);
        for j in 0..3 {
            let want: f64 = (0..3).map(|i| g.get(i, j) * x[i]).sum();
            assert!((y[j] - want).abs() < 1e-15);
        }
    }
}
