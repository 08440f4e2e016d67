//! Flow-table readers and the native CSV writer.
//!
//! Native format, one row per flow with values in plain decimal:
//!
//! ```text
//! source_country,source_sector,dest_country,dest_sector,value
//! USA,C23 PET,FRA,C24 CHM,1520.25
//! ```
//!
//! The wide ICIO layout has a header row of column labels and one labelled
//! row per node, each label being `<iso3><separator><sector>`. Which axis
//! sells is configurable; see [`IcioLayout`].

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use regomax_core::{BuildReport, Flow, MoneyMatrix, Registries};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry_io::open;

pub const NATIVE_HEADER: [&str; 5] = [
    "source_country",
    "source_sector",
    "dest_country",
    "dest_sector",
    "value",
];

/// Which axis of a wide table holds the selling node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Row `a`, column `b` is a sale from `a` to `b` (the usual I/O layout).
    RowsSell,
    /// Row `a`, column `b` is a sale from `b` to `a`.
    ColumnsSell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IcioLayout {
    /// Between the country code and the sector code in a label.
    pub separator: String,
    pub orientation: Orientation,
    /// Skip rows and columns whose labels do not resolve (totals, value
    /// added, final demand) instead of failing.
    pub ignore_unknown: bool,
}

impl Default for IcioLayout {
    fn default() -> Self {
        IcioLayout {
            separator: "_".to_string(),
            orientation: Orientation::RowsSell,
            ignore_unknown: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowFormat {
    NativeCsv,
    IcioCsv(IcioLayout),
}

/// A parsed table with what was dropped on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub matrix: MoneyMatrix,
    pub report: BuildReport,
    /// Data rows read from the file.
    pub rows: usize,
    /// Wide-table labels skipped under `ignore_unknown`.
    pub skipped_labels: Vec<String>,
}

struct Collector<'a> {
    registries: &'a Registries,
    flows: Vec<Flow>,
    seen: HashMap<(usize, usize), u64>,
}

impl<'a> Collector<'a> {
    fn new(registries: &'a Registries) -> Self {
        Collector {
            registries,
            flows: Vec::new(),
            seen: HashMap::new(),
        }
    }

    fn push(&mut self, line: u64, source: usize, dest: usize, raw: &str) -> Result<()> {
        let value = parse_value(line, raw)?;
        if let Some(first) = self.seen.insert((source, dest), line) {
            return Err(Error::Ingest {
                line,
                message: format!(
                    "duplicate cell {} -> {} (first given on line {first})",
                    self.registries.node_label(source),
                    self.registries.node_label(dest)
                ),
            });
        }
        self.flows.push(Flow {
            dest,
            source,
            value,
        });
        Ok(())
    }

    fn finish(self, rows: usize, skipped_labels: Vec<String>) -> Result<Ingested> {
        let (matrix, report) = MoneyMatrix::from_flows(self.registries.dims(), self.flows)?;
        Ok(Ingested {
            matrix,
            report,
            rows,
            skipped_labels,
        })
    }
}

fn parse_value(line: u64, raw: &str) -> Result<f64> {
    let value: f64 = raw.trim().parse().map_err(|_| Error::Ingest {
        line,
        message: format!("value {raw:?} is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Ingest {
            line,
            message: format!("value {raw:?} is not finite"),
        });
    }
    if value < 0.0 {
        return Err(Error::Ingest {
            line,
            message: format!("negative flow {raw}"),
        });
    }
    Ok(value)
}

fn country(reg: &Registries, line: u64, code: &str) -> Result<usize> {
    reg.countries.position(code.trim()).ok_or_else(|| Error::Ingest {
        line,
        message: format!("unknown country code {:?}", code.trim()),
    })
}

fn sector(reg: &Registries, line: u64, code: &str) -> Result<usize> {
    reg.sectors.position(code).ok_or_else(|| Error::Ingest {
        line,
        message: format!("unknown sector code {:?}", code.trim()),
    })
}

pub fn parse_flow_table(
    reader: impl Read,
    format: &FlowFormat,
    registries: &Registries,
) -> Result<Ingested> {
    match format {
        FlowFormat::NativeCsv => parse_native_csv(reader, registries),
        FlowFormat::IcioCsv(layout) => parse_icio_csv(reader, layout, registries),
    }
}

pub fn read_flow_file(path: &Path, format: &FlowFormat, registries: &Registries) -> Result<Ingested> {
    parse_flow_table(std::io::BufReader::new(open(path)?), format, registries)
}

pub fn parse_native_csv(reader: impl Read, registries: &Registries) -> Result<Ingested> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let header = rdr.headers()?;
    if header.iter().map(str::trim).ne(NATIVE_HEADER) {
        return Err(Error::Ingest {
            line: 1,
            message: format!("expected header {:?}", NATIVE_HEADER.join(",")),
        });
    }
    let dims = registries.dims();
    let mut collector = Collector::new(registries);
    let mut rows = 0;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let src = dims.node(country(registries, line, &record[0])?, sector(registries, line, &record[1])?);
        let dst = dims.node(country(registries, line, &record[2])?, sector(registries, line, &record[3])?);
        collector.push(line, src, dst, &record[4])?;
        rows += 1;
    }
    collector.finish(rows, Vec::new())
}

fn parse_label(reg: &Registries, layout: &IcioLayout, line: u64, label: &str) -> Result<usize> {
    let label = label.trim();
    let Some((c, s)) = label.split_once(layout.separator.as_str()) else {
        return Err(Error::Ingest {
            line,
            message: format!("label {label:?} has no {:?} separator", layout.separator),
        });
    };
    Ok(reg.dims().node(country(reg, line, c)?, sector(reg, line, s)?))
}

pub fn parse_icio_csv(
    reader: impl Read,
    layout: &IcioLayout,
    registries: &Registries,
) -> Result<Ingested> {
    if layout.separator.is_empty() {
        return Err(Error::Config("ICIO label separator must not be empty".into()));
    }
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let mut skipped = Vec::new();
    let header = rdr.headers()?.clone();
    let mut columns = Vec::with_capacity(header.len().saturating_sub(1));
    for label in header.iter().skip(1) {
        match parse_label(registries, layout, 1, label) {
            Ok(node) => columns.push(Some(node)),
            Err(_) if layout.ignore_unknown => {
                skipped.push(label.trim().to_string());
                columns.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let mut collector = Collector::new(registries);
    let mut rows = 0;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        rows += 1;
        let row = match parse_label(registries, layout, line, &record[0]) {
            Ok(node) => node,
            Err(_) if layout.ignore_unknown => {
                skipped.push(record[0].trim().to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        for (cell, column) in record.iter().skip(1).zip(&columns) {
            let Some(column) = *column else { continue };
            if cell.trim().is_empty() {
                continue;
            }
            let (source, dest) = match layout.orientation {
                Orientation::RowsSell => (row, column),
                Orientation::ColumnsSell => (column, row),
            };
            collector.push(line, source, dest, cell)?;
        }
    }
    collector.finish(rows, skipped)
}

/// Writes every stored flow, by source node then destination. Values use
/// the shortest decimal that reads back to the same `f64`.
pub fn write_native_csv(m: &MoneyMatrix, registries: &Registries, writer: impl Write) -> Result<()> {
    let dims = registries.dims();
    if dims != m.dims() {
        return Err(Error::usage(format!(
            "registries describe {}x{} nodes but the matrix has {}x{}",
            dims.n_countries,
            dims.n_sectors,
            m.dims().n_countries,
            m.dims().n_sectors
        )));
    }
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(NATIVE_HEADER)?;
    for f in m.iter() {
        w.write_record([
            registries.countries.code(dims.country_of(f.source)),
            registries.sectors.code(dims.sector_of(f.source)),
            registries.countries.code(dims.country_of(f.dest)),
            registries.sectors.code(dims.sector_of(f.dest)),
            f.value.to_string().as_str(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
