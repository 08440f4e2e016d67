//! Node numbering.
//!
//! Nodes are (country, sector) pairs. Public indices are 1-based, matching
//! the usual `i = s + (c - 1) * N_s` convention; storage is 0-based.

use crate::error::{Error, Result};

/// Maps a 1-based (country, sector) pair to its 1-based node index.
pub fn flatten_index(country: usize, sector: usize, n_sectors: usize) -> Result<usize> {
    if n_sectors == 0 {
        return Err(Error::range("n_sectors", n_sectors, ">= 1"));
    }
    if country == 0 {
        return Err(Error::range("country_index", country, ">= 1"));
    }
    if sector == 0 || sector > n_sectors {
        return Err(Error::range("sector_index", sector, "1..=n_sectors"));
    }
    Ok(sector + (country - 1) * n_sectors)
}

/// Inverse of [`flatten_index`]: 1-based node index to 1-based (country, sector).
pub fn unflatten_index(node: usize, n_sectors: usize) -> Result<(usize, usize)> {
    if n_sectors == 0 {
        return Err(Error::range("n_sectors", n_sectors, ">= 1"));
    }
    if node == 0 {
        return Err(Error::range("node_index", node, ">= 1"));
    }
    Ok(((node - 1) / n_sectors + 1, (node - 1) % n_sectors + 1))
}

/// Network shape: number of countries and sectors per country.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n_countries: usize,
    pub n_sectors: usize,
}

impl Dims {
    pub fn new(n_countries: usize, n_sectors: usize) -> Result<Self> {
        if n_countries == 0 {
            return Err(Error::range("n_countries", n_countries, ">= 1"));
        }
        if n_sectors == 0 {
            return Err(Error::range("n_sectors", n_sectors, ">= 1"));
        }
        Ok(Dims {
            n_countries,
            n_sectors,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n_countries * self.n_sectors
    }

    /// 0-based storage position of the 0-based (country, sector) pair.
    #[inline]
    pub fn node(&self, country: usize, sector: usize) -> usize {
        debug_assert!(country < self.n_countries && sector < self.n_sectors);
        country * self.n_sectors + sector
    }

    /// Checked 1-based variant of [`Dims::node`]; returns the 0-based position.
    pub fn node_checked(&self, country: usize, sector: usize) -> Result<usize> {
        if country == 0 || country > self.n_countries {
            return Err(Error::range("country_index", country, "1..=n_countries"));
        }
        flatten_index(country, sector, self.n_sectors).map(|i| i - 1)
    }

    #[inline]
    pub fn country_of(&self, node: usize) -> usize {
        node / self.n_sectors
    }

    #[inline]
    pub fn sector_of(&self, node: usize) -> usize {
        node % self.n_sectors
    }
}
