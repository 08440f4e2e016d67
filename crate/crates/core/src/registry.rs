//! Country and sector registries.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::index::Dims;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorEntry {
    /// 1-based position in data order.
    pub index: usize,
    /// ICIO category, e.g. `C23 PET`.
    pub code: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryEntry {
    pub index: usize,
    pub iso3: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorRegistry {
    entries: Vec<SectorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryRegistry {
    entries: Vec<CountryEntry>,
}

fn check_indices(indices: impl Iterator<Item = usize>, what: &str) -> Result<()> {
    for (pos, idx) in indices.enumerate() {
        if idx != pos + 1 {
            return Err(Error::Validation(format!(
                "{what} registry index {idx} at position {} (indices must be 1..n contiguous)",
                pos + 1
            )));
        }
    }
    Ok(())
}

fn check_unique<'a>(codes: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for code in codes {
        if code.is_empty() {
            return Err(Error::Validation(format!("empty {what} code")));
        }
        if !seen.insert(code) {
            return Err(Error::Validation(format!("duplicate {what} code {code:?}")));
        }
    }
    Ok(())
}

impl SectorRegistry {
    pub fn new(entries: Vec<SectorEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation("sector registry is empty".into()));
        }
        check_indices(entries.iter().map(|e| e.index), "sector")?;
        check_unique(entries.iter().map(|e| e.code.as_str()), "sector")?;
        Ok(SectorRegistry { entries })
    }

    /// Builds a registry from (code, description) pairs numbered in order.
    pub fn from_codes<S: Into<String>, D: Into<String>>(
        codes: impl IntoIterator<Item = (S, D)>,
    ) -> Result<Self> {
        Self::new(
            codes
                .into_iter()
                .enumerate()
                .map(|(i, (code, description))| SectorEntry {
                    index: i + 1,
                    code: code.into(),
                    description: description.into(),
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SectorEntry] {
        &self.entries
    }

    /// 0-based position of the sector with this code.
    ///
    /// Matches the full code (`C23 PET`) first, then the leading token
    /// (`C23`) when that is unambiguous.
    pub fn position(&self, code: &str) -> Option<usize> {
        let code = code.trim();
        if let Some(p) = self.entries.iter().position(|e| e.code == code) {
            return Some(p);
        }
        let mut hits = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.code.split_whitespace().next() == Some(code));
        match (hits.next(), hits.next()) {
            (Some((p, _)), None) => Some(p),
            _ => None,
        }
    }

    pub fn code(&self, position: usize) -> &str {
        &self.entries[position].code
    }
}

impl CountryRegistry {
    pub fn new(entries: Vec<CountryEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Validation("country registry is empty".into()));
        }
        check_indices(entries.iter().map(|e| e.index), "country")?;
        check_unique(entries.iter().map(|e| e.iso3.as_str()), "country")?;
        Ok(CountryRegistry { entries })
    }

    pub fn from_codes<S: Into<String>, D: Into<String>>(
        codes: impl IntoIterator<Item = (S, D)>,
    ) -> Result<Self> {
        Self::new(
            codes
                .into_iter()
                .enumerate()
                .map(|(i, (iso3, name))| CountryEntry {
                    index: i + 1,
                    iso3: iso3.into(),
                    name: name.into(),
                })
                .collect(),
        )
    }

    /// Registry with generated codes `C01`, `C02`, ... for synthetic networks.
    pub fn synthetic(n: usize) -> Result<Self> {
        Self::from_codes((1..=n).map(|i| (format!("C{i:02}"), format!("Country {i}"))))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CountryEntry] {
        &self.entries
    }

    pub fn position(&self, iso3: &str) -> Option<usize> {
        let iso3 = iso3.trim();
        self.entries.iter().position(|e| e.iso3 == iso3)
    }

    pub fn code(&self, position: usize) -> &str {
        &self.entries[position].iso3
    }
}

impl SectorRegistry {
    pub fn synthetic(n: usize) -> Result<Self> {
        Self::from_codes((1..=n).map(|i| (format!("S{i:02}"), format!("Sector {i}"))))
    }
}

/// A country registry paired with a sector registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registries {
    pub countries: CountryRegistry,
    pub sectors: SectorRegistry,
}

impl Registries {
    pub fn new(countries: CountryRegistry, sectors: SectorRegistry) -> Self {
        Registries { countries, sectors }
    }

    pub fn synthetic(n_countries: usize, n_sectors: usize) -> Result<Self> {
        Ok(Registries {
            countries: CountryRegistry::synthetic(n_countries)?,
            sectors: SectorRegistry::synthetic(n_sectors)?,
        })
    }

    pub fn dims(&self) -> Dims {
        Dims {
            n_countries: self.countries.len(),
            n_sectors: self.sectors.len(),
        }
    }

    /// `ISO3:CODE` label of a 0-based node.
    pub fn node_label(&self, node: usize) -> String {
        let d = self.dims();
        format!(
            "{}:{}",
            self.countries.code(d.country_of(node)),
            self.sectors.code(d.sector_of(node))
        )
    }
}
