//! Sector sensitivity maps on a bounded worker pool.
//!
//! Every cell is an independent pipeline run. Workers pull cell numbers from
//! a shared counter and return `(cell, value)` pairs; values land in
//! pre-assigned slots, so the map is identical for any worker count.

use std::sync::atomic::{AtomicUsize, Ordering};

use regomax_core::sensitivity::{sector_map_cell, sector_map_layout};
use regomax_core::{MoneyMatrix, SensitivityMap, SensitivityOptions};

use crate::error::Result;

/// Same map as [`regomax_core::sector_sensitivity_map`], evaluated by
/// `workers` threads (at least one).
pub fn sector_sensitivity_map_parallel(
    m: &MoneyMatrix,
    countries: &[usize],
    source_sector: usize,
    opts: &SensitivityOptions,
    workers: usize,
) -> Result<SensitivityMap> {
    let mut map = sector_map_layout(m, countries, source_sector, opts)?;
    let n_sectors = m.dims().n_sectors;
    let cells: Vec<(usize, usize)> = (0..map.rows.len())
        .flat_map(|row| (0..n_sectors).map(move |s| (row, s)))
        .filter(|&(_, s)| s != source_sector)
        .collect();
    let next = AtomicUsize::new(0);
    let rows = &map.rows;
    let results: Vec<Vec<(usize, regomax_core::Result<f64>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers.max(1).min(cells.len().max(1)))
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&(row, s)) = cells.get(k) else { break };
                        out.push((k, sector_map_cell(m, rows[row], source_sector, s, opts)));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sensitivity worker panicked"))
            .collect()
    });
    let mut slots: Vec<Option<regomax_core::Result<f64>>> = vec![None; cells.len()];
    for (k, value) in results.into_iter().flatten() {
        slots[k] = Some(value);
    }
    // The first failing cell in map order decides the error.
    for (&(row, s), value) in cells.iter().zip(slots) {
        map.values[row][s] = Some(value.expect("every cell evaluated")?);
    }
    Ok(map)
}
