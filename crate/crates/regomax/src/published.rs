//! Matrix weights printed in the figure captions for 2008, reduced set of
//! sectors 1 to 21 of one country.

use regomax_core::{Direction, Weights};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedWeights {
    pub country: &'static str,
    pub direction: Direction,
    pub pr: f64,
    pub rr: f64,
    pub qr: f64,
    pub qrnd: f64,
}

pub const PUBLISHED_YEAR: i32 = 2008;
/// Sectors `1..=21` of the selected country.
pub const PUBLISHED_SECTORS: (usize, usize) = (1, 21);
/// Accepted absolute deviation per weight.
pub const PUBLISHED_TOLERANCE: f64 = 0.02;

const fn entry(country: &'static str, direction: Direction, w: [f64; 4]) -> PublishedWeights {
    PublishedWeights {
        country,
        direction,
        pr: w[0],
        rr: w[1],
        qr: w[2],
        qrnd: w[3],
    }
}

pub const PUBLISHED: [PublishedWeights; 6] = [
    entry("USA", Direction::Import, [0.813817, 0.155258, 0.030925, 0.027383]),
    entry("USA", Direction::Export, [0.78968, 0.18289, 0.02743, 0.02554]),
    entry("RUS", Direction::Import, [0.851677, 0.112809, 0.035514, 0.033682]),
    entry("RUS", Direction::Export, [0.804255, 0.159634, 0.036111, 0.033377]),
    entry("CHN", Direction::Import, [0.698164, 0.263683, 0.038153, 0.035547]),
    entry("CHN", Direction::Export, [0.647087, 0.326402, 0.026511, 0.024648]),
];

pub fn lookup(country: &str, direction: Direction) -> Option<&'static PublishedWeights> {
    PUBLISHED
        .iter()
        .find(|p| p.country == country && p.direction == direction)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightDeltas {
    pub country: String,
    pub direction: String,
    pub published: [f64; 4],
    pub computed: [f64; 4],
    /// `computed - published` for `(W_pr, W_rr, W_qr, W_qrnd)`.
    pub delta: [f64; 4],
    pub max_abs_delta: f64,
    pub within_tolerance: bool,
}

pub fn compare(published: &PublishedWeights, computed: &Weights) -> WeightDeltas {
    let p = [published.pr, published.rr, published.qr, published.qrnd];
    let c = [computed.pr, computed.rr, computed.qr, computed.qrnd];
    let delta = [c[0] - p[0], c[1] - p[1], c[2] - p[2], c[3] - p[3]];
    let max_abs_delta = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    WeightDeltas {
        country: published.country.to_string(),
        direction: published.direction.name().to_string(),
        published: p,
        computed: c,
        delta,
        max_abs_delta,
        within_tolerance: max_abs_delta <= PUBLISHED_TOLERANCE,
    }
}
