//! Trade balances and their sensitivity to multiplicative price shocks.
//!
//! A shock multiplies selected flows by `1 + delta`. Every derivative
//! reruns the whole pipeline (S, v, G, P, P*, B) on the perturbed matrix
//! and takes a central difference in `delta`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::google::{Direction, GoogleMatrix};
use crate::index::Dims;
use crate::money::MoneyMatrix;
use crate::rank::{aggregate_by_country, order_ranks, power_iterate};
use crate::tolerances::DEFAULT_ALPHA;

/// `B = (P* - P) / (P* + P)` per country and per node.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceVector {
    pub country: Vec<f64>,
    pub node: Vec<f64>,
}

fn ratio(p: f64, p_star: f64) -> f64 {
    (p_star - p) / (p_star + p)
}

pub fn balance(p: &[f64], p_star: &[f64], dims: Dims) -> BalanceVector {
    let pc = aggregate_by_country(p, dims);
    let pc_star = aggregate_by_country(p_star, dims);
    BalanceVector {
        country: pc.iter().zip(&pc_star).map(|(a, b)| ratio(*a, *b)).collect(),
        node: p.iter().zip(p_star).map(|(a, b)| ratio(*a, *b)).collect(),
    }
}

/// Which flows a shock rescales. Node positions are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shock {
    /// Every flow leaving `source`.
    SectorOutflows { source: usize },
    /// The single flow `source -> target`.
    SingleLink { source: usize, target: usize },
    /// Every flow leaving the (country, sector) node.
    CountrySectorExports { country: usize, sector: usize },
    /// Every flow in the network; leaves all normalized quantities unchanged.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSpec {
    pub shock: Shock,
    pub delta: f64,
}

/// Copy of `m` with the shocked flows multiplied by `1 + delta`.
pub fn apply_shock(m: &MoneyMatrix, spec: &ShockSpec) -> Result<MoneyMatrix> {
    if !(spec.delta > -1.0) || !spec.delta.is_finite() {
        return Err(Error::range("delta", spec.delta, "> -1"));
    }
    let dims = m.dims();
    let n = dims.n();
    let check = |i: usize, name: &'static str| {
        if i < n {
            Ok(())
        } else {
            Err(Error::range(name, i + 1, "1..=N"))
        }
    };
    let source = match spec.shock {
        Shock::SectorOutflows { source } => {
            check(source, "source")?;
            Some(source)
        }
        Shock::SingleLink { source, target } => {
            check(source, "source")?;
            check(target, "target")?;
            Some(source)
        }
        Shock::CountrySectorExports { country, sector } => {
            if country >= dims.n_countries {
                return Err(Error::range("country", country + 1, "1..=N_c"));
            }
            if sector >= dims.n_sectors {
                return Err(Error::range("sector", sector + 1, "1..=N_s"));
            }
            Some(dims.node(country, sector))
        }
        Shock::Global => None,
    };
    if spec.delta == 0.0 {
        return Ok(m.clone());
    }
    let factor = 1.0 + spec.delta;
    m.map_flows(|dest, src, v| {
        let hit = match spec.shock {
            Shock::SingleLink { target, .. } => Some(src) == source && dest == target,
            Shock::Global => true,
            _ => Some(src) == source,
        };
        if hit {
            v * factor
        } else {
            v
        }
    })
}

/// Pipeline settings used when recomputing balances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityOptions {
    pub alpha: f64,
    pub rank_tol: f64,
    pub rank_max_iter: usize,
    /// Half-width of the central difference.
    pub step: f64,
    /// Evaluate both sides at `delta = 0`; every derivative is then zero.
    pub dry_run: bool,
}

impl Default for SensitivityOptions {
    fn default() -> Self {
        SensitivityOptions {
            alpha: DEFAULT_ALPHA,
            rank_tol: 1e-14,
            rank_max_iter: 10_000,
            step: 0.01,
            dry_run: false,
        }
    }
}

/// PageRank and CheiRank of `m`.
pub fn rank_pair(m: &MoneyMatrix, opts: &SensitivityOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut out = [Vec::new(), Vec::new()];
    for (slot, dir) in out.iter_mut().zip(Direction::BOTH) {
        let g = GoogleMatrix::from_money_with_alpha(m, dir, opts.alpha)?;
        *slot = power_iterate(&g, opts.rank_tol, opts.rank_max_iter)?.p;
    }
    let [p, p_star] = out;
    Ok((p, p_star))
}

/// Balances after rebuilding the whole pipeline on `m`.
pub fn pipeline_balance(m: &MoneyMatrix, opts: &SensitivityOptions) -> Result<BalanceVector> {
    let (p, p_star) = rank_pair(m, opts)?;
    Ok(balance(&p, &p_star, m.dims()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceTarget {
    Country(usize),
    Node(usize),
}

/// Central-difference derivatives of every balance.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceDerivative {
    pub country: Vec<f64>,
    pub node: Vec<f64>,
}

impl BalanceDerivative {
    pub fn get(&self, target: BalanceTarget) -> f64 {
        match target {
            BalanceTarget::Country(c) => self.country[c],
            BalanceTarget::Node(i) => self.node[i],
        }
    }
}

/// `[B(+h) - B(-h)] / 2h` for all balances at once.
pub fn balance_derivative(
    m: &MoneyMatrix,
    shock: Shock,
    opts: &SensitivityOptions,
) -> Result<BalanceDerivative> {
    let h = opts.step;
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::range("step", h, "(0, 1)"));
    }
    let delta = if opts.dry_run { 0.0 } else { h };
    let plus = apply_shock(m, &ShockSpec { shock, delta })?;
    let minus = apply_shock(m, &ShockSpec { shock, delta: -delta })?;
    let bp = pipeline_balance(&plus, opts)?;
    let bm = pipeline_balance(&minus, opts)?;
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| (x - y) / (2.0 * h)).collect()
    };
    Ok(BalanceDerivative {
        country: diff(&bp.country, &bm.country),
        node: diff(&bp.node, &bm.node),
    })
}

/// `dB_target / d delta` for one shock.
pub fn sensitivity_derivative(
    m: &MoneyMatrix,
    shock: Shock,
    target: BalanceTarget,
    opts: &SensitivityOptions,
) -> Result<f64> {
    let n = m.n();
    match target {
        BalanceTarget::Country(c) if c >= m.dims().n_countries => {
            return Err(Error::range("target country", c + 1, "1..=N_c"))
        }
        BalanceTarget::Node(i) if i >= n => return Err(Error::range("target node", i + 1, "1..=N")),
        _ => {}
    }
    Ok(balance_derivative(m, shock, opts)?.get(target))
}

/// What a [`SensitivityMap`] perturbs. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// Rows are countries `c`, columns target sectors `s`; each cell shocks
    /// the link `(c, source_sector) -> (c, s)` and reads `B(c, s)`.
    SectorLinks { source_sector: usize },
    /// Rows are countries, one column with `B_c` under a rescaling of all
    /// outgoing flows of the source node.
    CountryExports {
        source_country: usize,
        source_sector: usize,
    },
}

/// Grid of derivatives; masked (self-sensitivity) cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityMap {
    pub kind: MapKind,
    /// 0-based countries, in decreasing unperturbed PageRank.
    pub rows: Vec<usize>,
    /// `values[row][col]`; columns are sectors in data order, or the single
    /// country-balance column.
    pub values: Vec<Vec<Option<f64>>>,
    pub step: f64,
    pub self_cells_masked: bool,
}

impl SensitivityMap {
    pub fn n_columns(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

/// Orders `countries` by decreasing PageRank `P_c` of `m`; ties keep
/// ascending index. Duplicates and out-of-range entries are rejected.
pub fn order_countries_by_pagerank(
    m: &MoneyMatrix,
    countries: &[usize],
    opts: &SensitivityOptions,
) -> Result<Vec<usize>> {
    let dims = m.dims();
    let mut seen = vec![false; dims.n_countries];
    for &c in countries {
        if c >= dims.n_countries {
            return Err(Error::range("country", c + 1, "1..=N_c"));
        }
        if core::mem::replace(&mut seen[c], true) {
            return Err(Error::Validation(alloc::format!("country {} listed twice", c + 1)));
        }
    }
    let g = GoogleMatrix::from_money_with_alpha(m, Direction::Import, opts.alpha)?;
    let p = power_iterate(&g, opts.rank_tol, opts.rank_max_iter)?.p;
    let pc = aggregate_by_country(&p, dims);
    let ordering = order_ranks(&pc);
    Ok(ordering.order.into_iter().filter(|&c| seen[c]).collect())
}

/// One cell of the sector map: sensitivity of `B(c, target_sector)` to the
/// link `(c, source_sector) -> (c, target_sector)`.
pub fn sector_map_cell(
    m: &MoneyMatrix,
    country: usize,
    source_sector: usize,
    target_sector: usize,
    opts: &SensitivityOptions,
) -> Result<f64> {
    let dims = m.dims();
    let source = dims.node(country, source_sector);
    let target = dims.node(country, target_sector);
    sensitivity_derivative(
        m,
        Shock::SingleLink { source, target },
        BalanceTarget::Node(target),
        opts,
    )
}

fn check_sector(dims: Dims, sector: usize) -> Result<()> {
    if sector >= dims.n_sectors {
        return Err(Error::range("source sector", sector + 1, "1..=N_s"));
    }
    Ok(())
}

/// Empty sector-map skeleton (rows ordered, self column masked).
pub fn sector_map_layout(
    m: &MoneyMatrix,
    countries: &[usize],
    source_sector: usize,
    opts: &SensitivityOptions,
) -> Result<SensitivityMap> {
    let dims = m.dims();
    check_sector(dims, source_sector)?;
    let rows = order_countries_by_pagerank(m, countries, opts)?;
    let values = vec![vec![None; dims.n_sectors]; rows.len()];
    Ok(SensitivityMap {
        kind: MapKind::SectorLinks { source_sector },
        rows,
        values,
        step: opts.step,
        self_cells_masked: true,
    })
}

/// Sensitivity of each `(c, s)` balance to the link from `(c, source_sector)`
/// for every listed country `c` and every sector `s`; the `s = source_sector`
/// column is masked.
pub fn sector_sensitivity_map(
    m: &MoneyMatrix,
    countries: &[usize],
    source_sector: usize,
    opts: &SensitivityOptions,
) -> Result<SensitivityMap> {
    let mut map = sector_map_layout(m, countries, source_sector, opts)?;
    for (row, &c) in map.rows.iter().enumerate() {
        for s in 0..m.dims().n_sectors {
            if s != source_sector {
                map.values[row][s] = Some(sector_map_cell(m, c, source_sector, s, opts)?);
            }
        }
    }
    Ok(map)
}

/// Sensitivity of each target country's balance to a rescaling of all
/// outgoing flows of `(source_country, source_sector)`.
///
/// The source country is dropped from the targets unless `include_source`.
pub fn country_sensitivity_map(
    m: &MoneyMatrix,
    targets: &[usize],
    source_country: usize,
    source_sector: usize,
    include_source: bool,
    opts: &SensitivityOptions,
) -> Result<SensitivityMap> {
    let dims = m.dims();
    check_sector(dims, source_sector)?;
    if source_country >= dims.n_countries {
        return Err(Error::range("source country", source_country + 1, "1..=N_c"));
    }
    let targets: Vec<usize> = targets
        .iter()
        .copied()
        .filter(|&c| include_source || c != source_country)
        .collect();
    let rows = order_countries_by_pagerank(m, &targets, opts)?;
    let shock = Shock::CountrySectorExports {
        country: source_country,
        sector: source_sector,
    };
    let d = balance_derivative(m, shock, opts)?;
    let values = rows.iter().map(|&c| vec![Some(d.country[c])]).collect();
    Ok(SensitivityMap {
        kind: MapKind::CountryExports {
            source_country,
            source_sector,
        },
        rows,
        values,
        step: opts.step,
        self_cells_masked: !include_source,
    })
}
