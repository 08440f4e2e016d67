//! Deterministic synthetic flow networks for tests and benchmarks.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::index::Dims;
use crate::money::{Flow, MoneyMatrix};

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Random network with each off-diagonal cell present with probability
/// `density`.
///
/// Values span four orders of magnitude; flows inside one country are
/// boosted tenfold, which mimics the domestic dominance of real
/// input-output tables. Same seed, same matrix.
pub fn synthesize_network(
    n_countries: usize,
    n_sectors: usize,
    seed: u64,
    density: f64,
) -> Result<MoneyMatrix> {
    let dims = Dims::new(n_countries, n_sectors)?;
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::range("density", density, "(0, 1]"));
    }
    let n = dims.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flows = Vec::new();
    for source in 0..n {
        for dest in 0..n {
            if dest == source {
                continue;
            }
            let keep = unit(&mut rng) < density;
            let magnitude = unit(&mut rng);
            if !keep {
                continue;
            }
            // Roughly 10^(4u): whole decades times a linear mantissa.
            let decade = (magnitude * 4.0) as u32;
            let mantissa = 1.0 + 9.0 * (magnitude * 4.0 - decade as f64);
            let mut value = mantissa;
            for _ in 0..decade {
                value *= 10.0;
            }
            if dims.country_of(dest) == dims.country_of(source) {
                value *= 10.0;
            }
            flows.push(Flow { dest, source, value });
        }
    }
    let (m, _) = MoneyMatrix::from_flows(dims, flows)?;
    Ok(m)
}
