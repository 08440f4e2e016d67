//! Google matrix analysis of inter-country, inter-sector money flows.
//!
//! The pipeline runs from a [`MoneyMatrix`] of transfers through the
//! column-stochastic matrices S and S*, the Google matrices G and G*, their
//! PageRank and CheiRank vectors, the reduced Google matrix of a node
//! subset with its `G_rr + G_pr + G_qr` decomposition, balance
//! sensitivities to price shocks, and reduced networks of strongest links.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! parallel map evaluation live in the `regomax` crate.

#![no_std]

extern crate alloc;

pub mod dense;
pub mod error;
pub mod google;
pub mod index;
pub mod money;
pub mod network;
pub mod rank;
pub mod regomax;
pub mod registry;
pub mod sensitivity;
pub mod synth;
pub mod tolerances;

pub use dense::SquareMatrix;
pub use error::{Error, Result};
pub use google::{
    build_google, build_personalization, build_stochastic, compute_volumes, Direction,
    GoogleMatrix, PersonalizationVector, StochasticMatrix, VolumeVectors,
};
pub use index::{flatten_index, unflatten_index, Dims};
pub use money::{BuildReport, Flow, MoneyMatrix};
pub use network::{build_reduced_network, LinkKind, NetworkEdge, NetworkNode, ReducedNetwork};
pub use rank::{
    aggregate_by_country, aggregate_by_sector, order_ranks, power_iterate, RankKind,
    RankOrdering, RankVector,
};
pub use regomax::{
    compute_regomax, compute_regomax_with, leading_complement_mode, matrix_weights,
    partition_blocks, reduced_pagerank_check, ReducedSet, RegomaxResult, SeriesStop, Weights,
};
pub use registry::{CountryEntry, CountryRegistry, Registries, SectorEntry, SectorRegistry};
pub use sensitivity::{
    apply_shock, balance, country_sensitivity_map, sector_sensitivity_map,
    sensitivity_derivative, BalanceTarget, BalanceVector, MapKind, SensitivityMap,
    SensitivityOptions, Shock, ShockSpec,
};
pub use synth::synthesize_network;
pub use tolerances::{Tolerances, DEFAULT_ALPHA};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
