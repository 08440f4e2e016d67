//! Money-transfer matrices.
//!
//! Element `(dest, source)` is the amount node `source` transfers to node
//! `dest`, so column `source` holds everything that node sells. Storage is
//! compressed by column.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::Dims;

/// One nonzero transfer, 0-based node positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow {
    pub dest: usize,
    pub source: usize,
    pub value: f64,
}

/// What [`MoneyMatrix::from_flows`] silently discarded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    /// Positive self-loops `(i, i)`; these are excluded from the network.
    pub dropped_diagonal: usize,
    /// Explicit zero entries.
    pub dropped_zero: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoneyMatrix {
    dims: Dims,
    year: Option<i32>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl MoneyMatrix {
    /// Builds a matrix from a list of flows.
    ///
    /// Negative or non-finite values and repeated `(source, dest)` cells are
    /// rejected. Diagonal cells are dropped and counted.
    pub fn from_flows(
        dims: Dims,
        flows: impl IntoIterator<Item = Flow>,
    ) -> Result<(Self, BuildReport)> {
        let n = dims.n();
        let mut report = BuildReport::default();
        let mut kept = Vec::new();
        for f in flows {
            if f.dest >= n || f.source >= n {
                return Err(Error::Validation(format!(
                    "flow ({} -> {}) outside a {n}-node network",
                    f.source + 1,
                    f.dest + 1
                )));
            }
            if !f.value.is_finite() || f.value < 0.0 {
                return Err(Error::Validation(format!(
                    "flow {} -> {} has invalid value {}",
                    f.source + 1,
                    f.dest + 1,
                    f.value
                )));
            }
            kept.push(f);
        }
        kept.sort_by(|a, b| (a.source, a.dest).cmp(&(b.source, b.dest)));
        for w in kept.windows(2) {
            if (w[0].source, w[0].dest) == (w[1].source, w[1].dest) {
                return Err(Error::Validation(format!(
                    "duplicate cell {} -> {}",
                    w[0].source + 1,
                    w[0].dest + 1
                )));
            }
        }

        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::with_capacity(kept.len());
        let mut values = Vec::with_capacity(kept.len());
        col_ptr.push(0);
        let mut col = 0;
        for f in kept {
            if f.dest == f.source {
                if f.value > 0.0 {
                    report.dropped_diagonal += 1;
                }
                continue;
            }
            if f.value == 0.0 {
                report.dropped_zero += 1;
                continue;
            }
            while col < f.source {
                col_ptr.push(row_idx.len());
                col += 1;
            }
            row_idx.push(f.dest);
            values.push(f.value);
        }
        while col < n {
            col_ptr.push(row_idx.len());
            col += 1;
        }
        let m = MoneyMatrix {
            dims,
            year: None,
            col_ptr,
            row_idx,
            values,
        };
        debug_assert!(m.validate().is_ok());
        Ok((m, report))
    }

    /// An all-zero matrix.
    pub fn zeros(dims: Dims) -> Self {
        MoneyMatrix {
            dims,
            year: None,
            col_ptr: alloc::vec![0; dims.n() + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn with_year(mut self, year: Option<i32>) -> Self {
        self.year = year;
        self
    }

    pub fn year(&self) -> Option<i32> {
        self.year
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.n()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero `(dest, value)` entries of column `source`, ascending by `dest`.
    pub fn column(&self, source: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.col_ptr[source]..self.col_ptr[source + 1];
        self.row_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All nonzero flows in column-major order.
    pub fn iter(&self) -> impl Iterator<Item = Flow> + '_ {
        (0..self.n()).flat_map(move |source| {
            self.column(source)
                .map(move |(dest, value)| Flow { dest, source, value })
        })
    }

    pub fn get(&self, dest: usize, source: usize) -> f64 {
        let span = self.col_ptr[source]..self.col_ptr[source + 1];
        match self.row_idx[span.clone()].binary_search(&dest) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Matrix with every flow reversed: `T(dest, source) = M(source, dest)`.
    pub fn transpose(&self) -> Self {
        let flows = self.iter().map(|f| Flow {
            dest: f.source,
            source: f.dest,
            value: f.value,
        });
        let (m, _) = Self::from_flows(self.dims, flows).expect("transpose of a valid matrix");
        m.with_year(self.year)
    }

    /// Applies `f(dest, source, value)` to every stored flow.
    ///
    /// Entries mapped to zero are removed; the result is revalidated.
    pub fn map_flows(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Result<Self> {
        let flows: Vec<Flow> = self
            .iter()
            .map(|fl| Flow {
                value: f(fl.dest, fl.source, fl.value),
                ..fl
            })
            .collect();
        let (m, _) = Self::from_flows(self.dims, flows)?;
        Ok(m.with_year(self.year))
    }

    /// Every flow multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        self.map_flows(|_, _, v| v * k)
    }

    /// Checks the structural invariants: non-negative finite values, zero
    /// diagonal, sorted unique row indices per column.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.col_ptr.len() != n + 1 || self.col_ptr[n] != self.values.len() {
            return Err(Error::Validation("column pointer array is inconsistent".into()));
        }
        for source in 0..n {
            let mut last = None;
            for (dest, value) in self.column(source) {
                if dest >= n {
                    return Err(Error::Validation(format!("row {dest} out of range")));
                }
                if dest == source {
                    return Err(Error::Validation(format!("nonzero diagonal at node {}", dest + 1)));
                }
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::Validation(format!("invalid value {value}")));
                }
                if last.is_some_and(|l| l >= dest) {
                    return Err(Error::Validation("unsorted or repeated rows".into()));
                }
                last = Some(dest);
            }
        }
        Ok(())
    }
}
