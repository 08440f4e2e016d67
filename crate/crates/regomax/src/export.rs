//! CSV and JSON writers for matrices, rank tables, REGOMAX results and
//! sensitivity maps. Node indices in files are 1-based; floats are written
//! as the shortest decimal that reads back to the same value.

use std::io::Write;

use regomax_core::{
    aggregate_by_country, balance, order_ranks, MapKind, Registries, RegomaxResult,
    SensitivityMap, SquareMatrix, StochasticMatrix,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn flush<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::Csv(e.into()))
}

fn num(x: f64) -> String {
    x.to_string()
}

/// Stored entries of a stochastic matrix as `row,col,value`. Dangling
/// columns are uniform and listed by [`dangling_json`] instead.
pub fn write_triplets(s: &StochasticMatrix, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["row", "col", "value"])?;
    for j in 0..s.n() {
        for (i, v) in s.sparse_column(j) {
            w.write_record([(i + 1).to_string(), (j + 1).to_string(), num(v)])?;
        }
    }
    flush(w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DanglingColumns {
    pub n: usize,
    /// Every entry of a dangling column.
    pub value: f64,
    pub columns: Vec<usize>,
}

pub fn dangling_json(s: &StochasticMatrix) -> DanglingColumns {
    DanglingColumns {
        n: s.n(),
        value: 1.0 / s.n() as f64,
        columns: s.dangling_columns().iter().map(|j| j + 1).collect(),
    }
}

/// `node,country,sector,P,K,Pstar,Kstar`; K and K* are 1-based ranks.
pub fn write_rank_table(
    registries: &Registries,
    p: &[f64],
    p_star: &[f64],
    writer: impl Write,
) -> Result<()> {
    let dims = registries.dims();
    let k = order_ranks(p).rank;
    let k_star = order_ranks(p_star).rank;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["node", "country", "sector", "P", "K", "Pstar", "Kstar"])?;
    for i in 0..dims.n() {
        w.write_record([
            (i + 1).to_string().as_str(),
            registries.countries.code(dims.country_of(i)),
            registries.sectors.code(dims.sector_of(i)),
            &num(p[i]),
            &k[i].to_string(),
            &num(p_star[i]),
            &k_star[i].to_string(),
        ])?;
    }
    flush(w)
}

/// `country,P,K,Pstar,Kstar,B` with country sums of the node probabilities.
pub fn write_country_table(
    registries: &Registries,
    p: &[f64],
    p_star: &[f64],
    writer: impl Write,
) -> Result<()> {
    let dims = registries.dims();
    let pc = aggregate_by_country(p, dims);
    let pc_star = aggregate_by_country(p_star, dims);
    let k = order_ranks(&pc).rank;
    let k_star = order_ranks(&pc_star).rank;
    let b = balance(p, p_star, dims).country;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["country", "P", "K", "Pstar", "Kstar", "B"])?;
    for c in 0..dims.n_countries {
        w.write_record([
            registries.countries.code(c),
            &num(pc[c]),
            &k[c].to_string(),
            &num(pc_star[c]),
            &k_star[c].to_string(),
            &num(b[c]),
        ])?;
    }
    flush(w)
}

/// Dense matrix with labelled rows and columns; the corner cell is empty.
pub fn write_dense_matrix(m: &SquareMatrix, labels: &[String], writer: impl Write) -> Result<()> {
    if labels.len() != m.n() {
        return Err(Error::usage(format!("{} labels for a {}x{0} matrix", labels.len(), m.n())));
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(std::iter::once("").chain(labels.iter().map(String::as_str)))?;
    for (i, label) in labels.iter().enumerate() {
        let row = m.row(i);
        w.write_record(std::iter::once(label.clone()).chain(row.iter().map(|&x| num(x))))?;
    }
    flush(w)
}

/// The six REGOMAX matrices keyed by their file stem.
pub fn regomax_components(r: &RegomaxResult) -> [(&'static str, &SquareMatrix); 6] {
    [
        ("G_R", &r.g_r),
        ("G_rr", &r.g_rr),
        ("G_pr", &r.g_pr),
        ("G_qr", &r.g_qr),
        ("G_qrd", &r.g_qrd),
        ("G_qrnd", &r.g_qrnd),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsDoc {
    pub pr: f64,
    pub rr: f64,
    pub qr: f64,
    pub qrnd: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegomaxDoc {
    pub direction: String,
    pub labels: Vec<String>,
    /// 1-based node indices of the reduced set.
    pub nodes: Vec<usize>,
    pub lambda_c: f64,
    pub series_terms_used: usize,
    pub weights: WeightsDoc,
    /// Row-major matrices keyed as in [`regomax_components`].
    pub matrices: std::collections::BTreeMap<String, Vec<Vec<f64>>>,
}

pub fn regomax_doc(r: &RegomaxResult) -> RegomaxDoc {
    let w = r.weights;
    RegomaxDoc {
        direction: r.direction.name().to_string(),
        labels: r.reduced.labels().to_vec(),
        nodes: r.reduced.nodes().iter().map(|i| i + 1).collect(),
        lambda_c: r.lambda_c,
        series_terms_used: r.series_terms_used,
        weights: WeightsDoc {
            pr: w.pr,
            rr: w.rr,
            qr: w.qr,
            qrnd: w.qrnd,
            sum: w.total(),
        },
        matrices: regomax_components(r)
            .into_iter()
            .map(|(name, m)| (name.to_string(), (0..m.n()).map(|i| m.row(i).to_vec()).collect()))
            .collect(),
    }
}

/// Column headers of a map: sector codes, or `D` for a country-balance map.
fn map_columns(map: &SensitivityMap, registries: &Registries) -> Vec<String> {
    match map.kind {
        MapKind::SectorLinks { .. } => registries
            .sectors
            .entries()
            .iter()
            .map(|e| e.code.clone())
            .collect(),
        MapKind::CountryExports { .. } => vec!["D".to_string()],
    }
}

/// Rows are countries (ISO3) in map order; masked cells are empty fields.
pub fn write_sensitivity_csv(
    map: &SensitivityMap,
    registries: &Registries,
    writer: impl Write,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let columns = map_columns(map, registries);
    w.write_record(std::iter::once("country").chain(columns.iter().map(String::as_str)))?;
    for (row, &c) in map.values.iter().zip(&map.rows) {
        let cells = row.iter().map(|v| v.map(num).unwrap_or_default());
        w.write_record(std::iter::once(registries.countries.code(c).to_string()).chain(cells))?;
    }
    flush(w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityDoc {
    pub kind: String,
    pub source_country: Option<String>,
    pub source_sector: String,
    pub step: f64,
    pub self_cells_masked: bool,
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// `null` marks a masked cell.
    pub values: Vec<Vec<Option<f64>>>,
}

pub fn sensitivity_doc(map: &SensitivityMap, registries: &Registries) -> SensitivityDoc {
    let (kind, source_country, source_sector) = match map.kind {
        MapKind::SectorLinks { source_sector } => ("sector_links", None, source_sector),
        MapKind::CountryExports {
            source_country,
            source_sector,
        } => (
            "country_exports",
            Some(registries.countries.code(source_country).to_string()),
            source_sector,
        ),
    };
    SensitivityDoc {
        kind: kind.to_string(),
        source_country,
        source_sector: registries.sectors.code(source_sector).to_string(),
        step: map.step,
        self_cells_masked: map.self_cells_masked,
        rows: map
            .rows
            .iter()
            .map(|&c| registries.countries.code(c).to_string())
            .collect(),
        columns: map_columns(map, registries),
        values: map.values.clone(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, mut writer: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer
        .write_all(b"\n")
        .map_err(|e| Error::Json(serde_json::Error::io(e)))
}
