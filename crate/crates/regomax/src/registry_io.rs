//! Registry files: CSV with a header row and either `index,code,name` or
//! `code,name` columns (the index is then the row position).

use std::io::{Read, Write};
use std::path::Path;

use regomax_core::{CountryEntry, CountryRegistry, Registries, SectorEntry, SectorRegistry};

use crate::error::{Error, Result};

pub const BUNDLED_SECTORS: &str = include_str!("../data/sectors.csv");
pub const BUNDLED_COUNTRIES: &str = include_str!("../data/countries.csv");

/// `(index, code, name)` rows of a registry file.
fn read_rows(reader: impl Read) -> Result<Vec<(usize, String, String)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let width = rdr.headers()?.len();
    if width != 2 && width != 3 {
        return Err(Error::Ingest {
            line: 1,
            message: format!("registry header has {width} columns, expected 2 or 3"),
        });
    }
    let mut rows = Vec::new();
    for (pos, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let (index, code, name) = if width == 3 {
            let index = record[0].parse::<usize>().map_err(|_| Error::Ingest {
                line,
                message: format!("registry index {:?} is not a positive integer", &record[0]),
            })?;
            (index, &record[1], &record[2])
        } else {
            (pos + 1, &record[0], &record[1])
        };
        rows.push((index, code.to_string(), name.to_string()));
    }
    Ok(rows)
}

pub fn read_sector_registry(reader: impl Read) -> Result<SectorRegistry> {
    let entries = read_rows(reader)?
        .into_iter()
        .map(|(index, code, description)| SectorEntry {
            index,
            code,
            description,
        })
        .collect();
    Ok(SectorRegistry::new(entries)?)
}

pub fn read_country_registry(reader: impl Read) -> Result<CountryRegistry> {
    let entries = read_rows(reader)?
        .into_iter()
        .map(|(index, iso3, name)| CountryEntry { index, iso3, name })
        .collect();
    Ok(CountryRegistry::new(entries)?)
}

pub fn write_sector_registry(reg: &SectorRegistry, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "code", "description"])?;
    for e in reg.entries() {
        w.write_record([e.index.to_string().as_str(), &e.code, &e.description])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_country_registry(reg: &CountryRegistry, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "iso3", "name"])?;
    for e in reg.entries() {
        w.write_record([e.index.to_string().as_str(), &e.iso3, &e.name])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// The 37 ICIO sectors and 58 countries shipped with the crate.
pub fn bundled_registries() -> Registries {
    let sectors = read_sector_registry(BUNDLED_SECTORS.as_bytes()).expect("bundled sectors.csv");
    let countries =
        read_country_registry(BUNDLED_COUNTRIES.as_bytes()).expect("bundled countries.csv");
    Registries::new(countries, sectors)
}

/// Loads registry files, falling back to the bundled ones.
pub fn load_registries(countries: Option<&Path>, sectors: Option<&Path>) -> Result<Registries> {
    let bundled = bundled_registries();
    let countries = match countries {
        Some(p) => read_country_registry(open(p)?)?,
        None => bundled.countries,
    };
    let sectors = match sectors {
        Some(p) => read_sector_registry(open(p)?)?,
        None => bundled.sectors,
    };
    Ok(Registries::new(countries, sectors))
}

pub(crate) fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}
