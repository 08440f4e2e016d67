//! Numerical constants shared by the pipeline.

/// Damping factor used unless configured otherwise.
pub const DEFAULT_ALPHA: f64 = 0.5;

/// Mass given to zero entries of a personalization vector before renormalizing.
pub const PERSONALIZATION_FLOOR: f64 = 1e-12;

/// Tolerance and iteration limits for every stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Column sums of S, S* and G.
    pub stochastic: f64,
    /// Per-entry column normalization error.
    pub normalization: f64,
    /// L1 change between power-iteration steps for PageRank/CheiRank.
    pub rank: f64,
    pub rank_max_iter: usize,
    /// L1 eigen-residual of the leading complement mode.
    pub eigen: f64,
    pub eigen_max_iter: usize,
    /// L1 norm of a Neumann-series term below which the series stops.
    pub series: f64,
    pub series_max_terms: usize,
    /// `G_R = G_rr + G_pr + G_qr`, elementwise.
    pub decomposition: f64,
    /// Column sums of `G_R`.
    pub reduced_stochastic: f64,
    /// `W_pr + W_rr + W_qr = 1`.
    pub weights: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            stochastic: 1e-12,
            normalization: 1e-14,
            rank: 1e-12,
            rank_max_iter: 10_000,
            eigen: 1e-13,
            eigen_max_iter: 200_000,
            series: 1e-12,
            series_max_terms: 10_000,
            decomposition: 1e-10,
            reduced_stochastic: 1e-8,
            weights: 1e-8,
        }
    }
}
