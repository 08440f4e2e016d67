//! Reduced Google matrix.
//!
//! For a reduced set `r` with complement `s`, the full matrix splits into
//! blocks `G_rr`, `G_rs`, `G_sr`, `G_ss` and
//!
//! ```text
//! G_R = G_rr + G_rs (1 - G_ss)^-1 G_sr
//! ```
//!
//! With `lambda_c` the leading eigenvalue of `G_ss`, right/left eigenvectors
//! `psi_R`, `psi_L` (`psi_L . psi_R = 1`), projector `P_c = psi_R psi_L^T`
//! and `Q_c = 1 - P_c`, the inverse separates into
//!
//! ```text
//! G_pr = G_rs P_c G_sr / (1 - lambda_c)
//! G_qr = G_rs Q_c [ sum_l (Q_c G_ss Q_c)^l ] Q_c G_sr
//! ```
//!
//! so that `G_R = G_rr + G_pr + G_qr`. Only `N_r` dense columns of length
//! `N` are ever held; `G_ss` and `G_rs` are applied through the sparse
//! operator of the full matrix.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::dense::SquareMatrix;
use crate::error::{Error, Result};
use crate::google::{Direction, GoogleMatrix};
use crate::rank::power_iterate;
use crate::registry::Registries;
use crate::tolerances::Tolerances;

/// Ordered subset of nodes; its order fixes the reduced row/column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSet {
    nodes: Vec<usize>,
    labels: Vec<String>,
}

impl ReducedSet {
    /// `nodes` are 0-based positions in an `n`-node network.
    pub fn new(nodes: Vec<usize>, labels: Vec<String>, n: usize) -> Result<Self> {
        if nodes.is_empty() || nodes.len() >= n {
            return Err(Error::range("N_r", nodes.len(), "1 <= N_r < N"));
        }
        if labels.len() != nodes.len() {
            return Err(Error::Validation(format!(
                "{} labels for {} reduced nodes",
                labels.len(),
                nodes.len()
            )));
        }
        let mut seen = vec![false; n];
        for &i in &nodes {
            if i >= n {
                return Err(Error::range("reduced node", i + 1, "1..=N"));
            }
            if core::mem::replace(&mut seen[i], true) {
                return Err(Error::Validation(format!("node {} selected twice", i + 1)));
            }
        }
        Ok(ReducedSet { nodes, labels })
    }

    /// Labels each node by its 1-based index.
    pub fn unlabeled(nodes: Vec<usize>, n: usize) -> Result<Self> {
        let labels = nodes.iter().map(|i| format!("{}", i + 1)).collect();
        Self::new(nodes, labels, n)
    }

    /// Sectors `first..=last` (1-based, data order) of one country.
    pub fn country_sectors(
        registries: &Registries,
        country: &str,
        first: usize,
        last: usize,
    ) -> Result<Self> {
        let dims = registries.dims();
        let c = registries
            .countries
            .position(country)
            .ok_or_else(|| Error::Validation(format!("unknown country code {country:?}")))?;
        if first == 0 || last < first || last > dims.n_sectors {
            return Err(Error::range("sector range", format!("{first}-{last}"), "1 <= first <= last <= N_s"));
        }
        let nodes: Vec<usize> = (first - 1..last).map(|s| dims.node(c, s)).collect();
        let labels = nodes.iter().map(|&i| registries.node_label(i)).collect();
        Self::new(nodes, labels, dims.n())
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Reduced(usize),
    Complement(usize),
}

/// The four blocks of `G` for a reduced set.
///
/// `G_rr` and the `N_r` columns of `G_sr` are materialized; `G_rs` and
/// `G_ss` stay operators over the full matrix.
#[derive(Debug)]
pub struct Blocks<'a> {
    g: &'a GoogleMatrix,
    reduced: Vec<usize>,
    complement: Vec<usize>,
    slots: Vec<Slot>,
    pub g_rr: SquareMatrix,
    /// Column `j` is `G_sr[:, j]`, indexed by complement position.
    pub g_sr: Vec<Vec<f64>>,
}

pub fn partition_blocks<'a>(g: &'a GoogleMatrix, r: &ReducedSet) -> Result<Blocks<'a>> {
    let n = g.n();
    if r.len() >= n {
        return Err(Error::range("N_r", r.len(), "1 <= N_r < N"));
    }
    if let Some(&bad) = r.nodes().iter().find(|&&i| i >= n) {
        return Err(Error::range("reduced node", bad + 1, "1..=N"));
    }
    let mut slots = vec![Slot::Complement(0); n];
    for (k, &i) in r.nodes().iter().enumerate() {
        slots[i] = Slot::Reduced(k);
    }
    let mut complement = Vec::with_capacity(n - r.len());
    for (i, slot) in slots.iter_mut().enumerate() {
        if let Slot::Complement(_) = slot {
            *slot = Slot::Complement(complement.len());
            complement.push(i);
        }
    }
    let nr = r.len();
    let mut g_rr = SquareMatrix::zeros(nr);
    let mut g_sr = Vec::with_capacity(nr);
    for (j, &col) in r.nodes().iter().enumerate() {
        let full = g.column(col);
        for (i, &row) in r.nodes().iter().enumerate() {
            g_rr.set(i, j, full[row]);
        }
        g_sr.push(complement.iter().map(|&row| full[row]).collect());
    }
    Ok(Blocks {
        g,
        reduced: r.nodes().to_vec(),
        complement,
        slots,
        g_rr,
        g_sr,
    })
}

/// Scratch buffers for block operators.
struct Workspace {
    full_in: Vec<f64>,
    full_out: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            full_in: vec![0.0; n],
            full_out: vec![0.0; n],
        }
    }
}

impl Blocks<'_> {
    pub fn n_reduced(&self) -> usize {
        self.reduced.len()
    }

    pub fn n_complement(&self) -> usize {
        self.complement.len()
    }

    /// Full-network position of complement entry `k`.
    pub fn complement_node(&self, k: usize) -> usize {
        self.complement[k]
    }

    fn scatter_complement(&self, x: &[f64], ws: &mut Workspace) {
        ws.full_in.iter_mut().for_each(|v| *v = 0.0);
        for (k, &i) in self.complement.iter().enumerate() {
            ws.full_in[i] = x[k];
        }
    }

    fn apply_ss_ws(&self, x: &[f64], y: &mut [f64], ws: &mut Workspace) {
        self.scatter_complement(x, ws);
        self.g.apply(&ws.full_in, &mut ws.full_out);
        for (k, &i) in self.complement.iter().enumerate() {
            y[k] = ws.full_out[i];
        }
    }

    fn apply_ss_transpose_ws(&self, x: &[f64], y: &mut [f64], ws: &mut Workspace) {
        self.scatter_complement(x, ws);
        self.g.apply_transpose(&ws.full_in, &mut ws.full_out);
        for (k, &i) in self.complement.iter().enumerate() {
            y[k] = ws.full_out[i];
        }
    }

    fn apply_rs_ws(&self, x: &[f64], ws: &mut Workspace) -> Vec<f64> {
        self.scatter_complement(x, ws);
        self.g.apply(&ws.full_in, &mut ws.full_out);
        self.reduced.iter().map(|&i| ws.full_out[i]).collect()
    }

    /// `y = G_ss x` over complement positions.
    pub fn apply_ss(&self, x: &[f64], y: &mut [f64]) {
        self.apply_ss_ws(x, y, &mut Workspace::new(self.g.n()));
    }

    /// `y = G_ss^T x`.
    pub fn apply_ss_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.apply_ss_transpose_ws(x, y, &mut Workspace::new(self.g.n()));
    }

    /// `G_rs x`, length `N_r`.
    pub fn apply_rs(&self, x: &[f64]) -> Vec<f64> {
        self.apply_rs_ws(x, &mut Workspace::new(self.g.n()))
    }

    /// `G[reduced[i], complement[k]]`.
    pub fn g_rs(&self, i: usize, k: usize) -> f64 {
        self.g.get(self.reduced[i], self.complement[k])
    }

    /// `G[complement[k], complement[l]]`.
    pub fn g_ss(&self, k: usize, l: usize) -> f64 {
        self.g.get(self.complement[k], self.complement[l])
    }

    /// Whether full-network node `i` is in the reduced set.
    pub fn is_reduced(&self, i: usize) -> bool {
        matches!(self.slots[i], Slot::Reduced(_))
    }
}

/// Leading eigenpair of the complement block.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementMode {
    pub lambda_c: f64,
    /// Right eigenvector, sums to 1.
    pub psi_r: Vec<f64>,
    /// Left eigenvector scaled so that `psi_l . psi_r = 1`.
    pub psi_l: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// Shifted power iteration `x <- (A x + x) / (lambda + 1)` on a non-negative
/// operator `A`. The shift keeps the Perron root strictly dominant even when
/// `A` has other eigenvalues of the same modulus. Returns (eigenvalue,
/// eigenvector with unit sum, iterations).
fn perron_vector(
    n: usize,
    tol: f64,
    max_iter: usize,
    mut apply: impl FnMut(&[f64], &mut [f64]),
) -> Result<(f64, Vec<f64>, usize)> {
    const SHIFT: f64 = 1.0;
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        apply(&x, &mut y);
        let lambda: f64 = y.iter().sum();
        if !(lambda > 0.0) {
            return Err(Error::Spectral(lambda));
        }
        residual = y.iter().zip(&x).map(|(a, b)| (a - lambda * b).abs()).sum();
        if residual <= tol {
            return Ok((lambda, x, it));
        }
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi = (*yi + SHIFT * xi) / (lambda + SHIFT);
        }
        core::mem::swap(&mut x, &mut y);
    }
    Err(Error::Convergence {
        what: "leading complement mode",
        iterations: max_iter,
        residual,
    })
}

/// Leading eigenvalue and left/right eigenvectors of `G_ss`.
pub fn leading_complement_mode(
    blocks: &Blocks<'_>,
    tol: f64,
    max_iter: usize,
) -> Result<ComplementMode> {
    let ns = blocks.n_complement();
    if ns == 0 {
        return Err(Error::range("N - N_r", ns, ">= 1"));
    }
    let mut ws = Workspace::new(blocks.g.n());
    let (lambda_c, psi_r, it_r) =
        perron_vector(ns, tol, max_iter, |x, y| blocks.apply_ss_ws(x, y, &mut ws))?;
    let (_, mut psi_l, it_l) =
        perron_vector(ns, tol, max_iter, |x, y| blocks.apply_ss_transpose_ws(x, y, &mut ws))?;
    if lambda_c >= 1.0 {
        return Err(Error::Spectral(lambda_c));
    }
    let overlap = dot(&psi_l, &psi_r);
    psi_l.iter_mut().for_each(|v| *v /= overlap);
    Ok(ComplementMode {
        lambda_c,
        psi_r,
        psi_l,
        iterations: it_r.max(it_l),
    })
}

/// Component weights: sum of all entries divided by `N_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub pr: f64,
    pub rr: f64,
    pub qr: f64,
    pub qrnd: f64,
}

impl Weights {
    pub fn total(&self) -> f64 {
        self.pr + self.rr + self.qr
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegomaxResult {
    pub reduced: ReducedSet,
    pub direction: Direction,
    pub g_r: SquareMatrix,
    pub g_rr: SquareMatrix,
    pub g_pr: SquareMatrix,
    pub g_qr: SquareMatrix,
    pub g_qrd: SquareMatrix,
    pub g_qrnd: SquareMatrix,
    pub lambda_c: f64,
    pub weights: Weights,
    /// Largest number of series terms any column needed.
    pub series_terms_used: usize,
}

/// When to stop the `Q_c` Neumann series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesStop {
    /// Stop once a term's L1 norm drops below `tol`; fail after `max_terms`.
    Tolerance { tol: f64, max_terms: usize },
    /// Sum exactly terms `0..=l`. Result invariants are not enforced.
    Terms(usize),
}

/// Reduced Google matrix with default tolerances.
pub fn compute_regomax(g: &GoogleMatrix, r: &ReducedSet) -> Result<RegomaxResult> {
    compute_regomax_with(g, r, &Tolerances::default(), None)
}

/// Reduced Google matrix; `stop` overrides the series rule from `tol`.
pub fn compute_regomax_with(
    g: &GoogleMatrix,
    r: &ReducedSet,
    tol: &Tolerances,
    stop: Option<SeriesStop>,
) -> Result<RegomaxResult> {
    let stop = stop.unwrap_or(SeriesStop::Tolerance {
        tol: tol.series,
        max_terms: tol.series_max_terms,
    });
    let blocks = partition_blocks(g, r)?;
    let mode = leading_complement_mode(&blocks, tol.eigen, tol.eigen_max_iter)?;
    let nr = blocks.n_reduced();
    let ns = blocks.n_complement();
    let mut ws = Workspace::new(g.n());

    let project = |x: &mut [f64], psi_l: &[f64], psi_r: &[f64]| {
        let c = dot(psi_l, x);
        for (xi, pi) in x.iter_mut().zip(psi_r) {
            *xi -= c * pi;
        }
    };

    let rs_psi = blocks.apply_rs_ws(&mode.psi_r, &mut ws);
    let mut g_pr = SquareMatrix::zeros(nr);
    let mut g_qr = SquareMatrix::zeros(nr);
    let mut terms_used = 0;
    let mut term = vec![0.0; ns];
    let mut next = vec![0.0; ns];

    for j in 0..nr {
        let col = &blocks.g_sr[j];
        let coef = dot(&mode.psi_l, col) / (1.0 - mode.lambda_c);
        let pr_col: Vec<f64> = rs_psi.iter().map(|x| x * coef).collect();
        g_pr.set_column(j, &pr_col);

        term.copy_from_slice(col);
        project(&mut term, &mode.psi_l, &mode.psi_r);
        let mut acc = term.clone();
        let mut terms = 0usize;
        loop {
            let done = match stop {
                SeriesStop::Tolerance { tol, max_terms } => {
                    let norm = l1(&term);
                    if norm < tol {
                        true
                    } else if terms >= max_terms {
                        return Err(Error::Convergence {
                            what: "complement series",
                            iterations: max_terms,
                            residual: norm,
                        });
                    } else {
                        false
                    }
                }
                SeriesStop::Terms(l) => terms >= l,
            };
            if done {
                break;
            }
            blocks.apply_ss_ws(&term, &mut next, &mut ws);
            project(&mut next, &mode.psi_l, &mode.psi_r);
            core::mem::swap(&mut term, &mut next);
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            terms += 1;
        }
        terms_used = terms_used.max(terms + 1);
        project(&mut acc, &mode.psi_l, &mode.psi_r);
        g_qr.set_column(j, &blocks.apply_rs_ws(&acc, &mut ws));
    }

    let g_rr = blocks.g_rr.clone();
    let g_r = g_rr.add(&g_pr).add(&g_qr);
    let (g_qrd, g_qrnd) = g_qr.split_diagonal();
    let nrf = nr as f64;
    let weights = Weights {
        pr: g_pr.sum() / nrf,
        rr: g_rr.sum() / nrf,
        qr: g_qr.sum() / nrf,
        qrnd: g_qrnd.sum() / nrf,
    };
    let result = RegomaxResult {
        reduced: r.clone(),
        direction: g.direction(),
        g_r,
        g_rr,
        g_pr,
        g_qr,
        g_qrd,
        g_qrnd,
        lambda_c: mode.lambda_c,
        weights,
        series_terms_used: terms_used,
    };
    if matches!(stop, SeriesStop::Tolerance { .. }) {
        check_result(&result, tol)?;
    }
    Ok(result)
}

fn check_result(res: &RegomaxResult, tol: &Tolerances) -> Result<()> {
    let sum = res.g_rr.add(&res.g_pr).add(&res.g_qr);
    let dev = sum.max_abs_diff(&res.g_r);
    if dev > tol.decomposition {
        return Err(Error::Consistency(format!("G_R differs from its components by {dev:e}")));
    }
    for (j, s) in res.g_r.column_sums().iter().enumerate() {
        if (s - 1.0).abs() > tol.reduced_stochastic {
            return Err(Error::Consistency(format!("column {} of G_R sums to {s}", j + 1)));
        }
    }
    let w = res.weights.total();
    if (w - 1.0).abs() > tol.weights {
        return Err(Error::Consistency(format!("component weights sum to {w}")));
    }
    if !(res.lambda_c > 0.0 && res.lambda_c < 1.0) {
        return Err(Error::Spectral(res.lambda_c));
    }
    Ok(())
}

/// `(W_pr, W_rr, W_qr, W_qrnd)` recomputed from the result matrices.
pub fn matrix_weights(result: &RegomaxResult) -> Weights {
    let nr = result.g_r.n() as f64;
    Weights {
        pr: result.g_pr.sum() / nr,
        rr: result.g_rr.sum() / nr,
        qr: result.g_qr.sum() / nr,
        qrnd: result.g_qrnd.sum() / nr,
    }
}

/// Stationary vector of a dense column-stochastic matrix by power iteration
/// from the uniform vector.
pub fn dense_stationary(m: &SquareMatrix, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = m.n();
    let mut p = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let mut next = m.apply(&p);
        let sum: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= sum);
        residual = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if residual <= tol {
            return Ok(p);
        }
    }
    Err(Error::Convergence {
        what: "reduced stationary vector",
        iterations: max_iter,
        residual,
    })
}

/// L-infinity distance between the stationary vector of `G_R` and the
/// global PageRank restricted to the reduced set, renormalized.
pub fn reduced_pagerank_check(
    g: &GoogleMatrix,
    r: &ReducedSet,
    result: &RegomaxResult,
    tol: &Tolerances,
) -> Result<f64> {
    let reduced = dense_stationary(&result.g_r, tol.rank * 0.1, tol.rank_max_iter * 10)?;
    let global = power_iterate(g, tol.rank * 0.1, tol.rank_max_iter)?;
    let restricted: Vec<f64> = r.nodes().iter().map(|&i| global.p[i]).collect();
    let mass: f64 = restricted.iter().sum();
    Ok(restricted
        .iter()
        .zip(&reduced)
        .map(|(a, b)| (a / mass - b).abs())
        .fold(0.0, f64::max))
}
