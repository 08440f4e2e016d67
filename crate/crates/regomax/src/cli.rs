//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use regomax_core::{
    build_reduced_network, compute_regomax_with, compute_volumes, country_sensitivity_map,
    power_iterate, synthesize_network, Direction, GoogleMatrix, MoneyMatrix, ReducedSet,
    Registries, RegomaxResult, SensitivityOptions,
};
use serde_json::{json, Value};

use crate::config::{InputFormat, RunConfig, SensitivityMode};
use crate::error::{Error, Result};
use crate::export;
use crate::graph::export_graph;
use crate::ingest::{parse_flow_table, write_native_csv, Ingested};
use crate::manifest::{run_id, sha256_hex, InputFile, Inputs, Manifest, RunDir};
use crate::parallel::sector_sensitivity_map_parallel;
use crate::published;
use crate::registry_io::{
    bundled_registries, load_registries, write_country_registry, write_sector_registry,
    BUNDLED_COUNTRIES, BUNDLED_SECTORS,
};

#[derive(Debug, Parser)]
#[command(
    name = "regomax",
    version,
    about = "Google matrix and reduced Google matrix analysis of inter-country, inter-sector flow tables"
)]
pub struct Cli {
    /// TOML run configuration (default: $REGOMAX_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a flow table and report what was read.
    IngestValidate(CommonArgs),
    /// PageRank and CheiRank tables for nodes and countries.
    Rank {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write S and S* as triplet CSV plus their dangling columns.
        #[arg(long)]
        export_matrices: bool,
    },
    /// Reduced Google matrices of one country's sectors, both directions.
    Regomax {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        selection: SelectionArgs,
        /// Record deviations from the weights printed for 2008.
        #[arg(long)]
        compare_published: bool,
    },
    /// Balance sensitivity maps.
    Sensitivity {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Shocked sector, by code or 1-based index.
        #[arg(long)]
        source_sector: Option<String>,
        /// Exporting country of a country map.
        #[arg(long)]
        source_country: Option<String>,
        /// Countries to report, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<String>>,
        /// Keep the source country among the targets of a country map.
        #[arg(long)]
        include_source: bool,
        /// Half-width of the central difference.
        #[arg(long)]
        step: Option<f64>,
        /// Evaluate with zero shock; every derivative is then zero.
        #[arg(long)]
        dry_run: bool,
    },
    /// Strongest-link reduced networks, both directions.
    Network {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        selection: SelectionArgs,
        /// Outgoing links per node.
        #[arg(long)]
        k: Option<usize>,
        /// dot, json_graph or edge_csv; repeatable (default: all three).
        #[arg(long = "graph-format")]
        graph_formats: Vec<String>,
    },
    /// Write a random network with its registries as native CSV.
    Synthesize {
        #[arg(long)]
        countries: usize,
        #[arg(long)]
        sectors: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Directory receiving flows.csv, countries.csv and sectors.csv.
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    NativeCsv,
    IcioCsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    SectorMap,
    CountryMap,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flow table.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub input_format: Option<FormatArg>,
    #[arg(long)]
    pub country_registry: Option<PathBuf>,
    #[arg(long)]
    pub sector_registry: Option<PathBuf>,
    /// Root directory for run directories.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub year: Option<i32>,
    /// Worker threads for sensitivity maps (0: one per core).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Replace an existing run directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SelectionArgs {
    /// ISO3 code of the country whose sectors form the reduced set.
    #[arg(long)]
    pub country: Option<String>,
    /// Inclusive 1-based sector range, e.g. 1-21.
    #[arg(long)]
    pub sectors: Option<String>,
}

impl CommonArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(p) = &self.input {
            cfg.input.path = Some(p.clone());
        }
        if let Some(f) = self.input_format {
            cfg.input.format = match f {
                FormatArg::NativeCsv => InputFormat::NativeCsv,
                FormatArg::IcioCsv => InputFormat::IcioCsv,
            };
        }
        if let Some(p) = &self.country_registry {
            cfg.registries.countries = Some(p.clone());
        }
        if let Some(p) = &self.sector_registry {
            cfg.registries.sectors = Some(p.clone());
        }
        if let Some(p) = &self.out {
            cfg.output.dir = p.clone();
        }
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if self.year.is_some() {
            cfg.year = self.year;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
    }
}

impl SelectionArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(c) = &self.country {
            cfg.selection.country = Some(c.clone());
        }
        if let Some(s) = &self.sectors {
            cfg.selection.sectors = s.clone();
        }
    }
}

/// What a finished command produced.
#[derive(Debug)]
pub struct Outcome {
    pub dir: PathBuf,
    pub manifest: Option<Manifest>,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::IngestValidate(common) => {
            common.apply(&mut cfg);
            cmd_ingest_validate(cfg, common.force)
        }
        Command::Rank {
            common,
            export_matrices,
        } => {
            common.apply(&mut cfg);
            cmd_rank(cfg, export_matrices, common.force)
        }
        Command::Regomax {
            common,
            selection,
            compare_published,
        } => {
            common.apply(&mut cfg);
            selection.apply(&mut cfg);
            cfg.regomax.compare_published |= compare_published;
            cmd_regomax(cfg, common.force)
        }
        Command::Sensitivity {
            common,
            mode,
            source_sector,
            source_country,
            targets,
            include_source,
            step,
            dry_run,
        } => {
            common.apply(&mut cfg);
            let s = &mut cfg.sensitivity;
            if let Some(m) = mode {
                s.mode = match m {
                    ModeArg::SectorMap => SensitivityMode::SectorMap,
                    ModeArg::CountryMap => SensitivityMode::CountryMap,
                };
            }
            if let Some(v) = source_sector {
                s.source_sector = v;
            }
            if source_country.is_some() {
                s.source_country = source_country;
            }
            if let Some(t) = targets {
                s.countries = t;
            }
            s.include_source |= include_source;
            if let Some(h) = step {
                s.step = h;
            }
            s.dry_run |= dry_run;
            cmd_sensitivity(cfg, common.force)
        }
        Command::Network {
            common,
            selection,
            k,
            graph_formats,
        } => {
            common.apply(&mut cfg);
            selection.apply(&mut cfg);
            if let Some(k) = k {
                cfg.network.k = k;
            }
            if !graph_formats.is_empty() {
                cfg.network.formats = graph_formats
                    .iter()
                    .map(|f| f.parse())
                    .collect::<Result<_>>()?;
            }
            cmd_network(cfg, common.force)
        }
        Command::Synthesize {
            countries,
            sectors,
            seed,
            density,
            out,
        } => cmd_synthesize(countries, sectors, seed, density, &out),
    }
}

/// Input data shared by every analysis command.
struct Loaded {
    registries: Registries,
    ingested: Ingested,
    inputs: Inputs,
}

impl Loaded {
    fn matrix(&self) -> &MoneyMatrix {
        &self.ingested.matrix
    }
}

fn registry_input(path: Option<&Path>, bundled: &str) -> Result<InputFile> {
    Ok(match path {
        Some(p) => InputFile {
            path: p.display().to_string(),
            sha256: sha256_hex(&std::fs::read(p).map_err(|e| Error::io(p, e))?),
        },
        None => InputFile {
            path: "bundled".to_string(),
            sha256: sha256_hex(bundled.as_bytes()),
        },
    })
}

fn load(cfg: &RunConfig) -> Result<Loaded> {
    cfg.validate()?;
    let path = cfg
        .input
        .path
        .as_deref()
        .ok_or_else(|| Error::usage("no flow table given (--input or [input] path)"))?;
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let countries = cfg.registries.countries.as_deref();
    let sectors = cfg.registries.sectors.as_deref();
    let registries = load_registries(countries, sectors)?;
    let mut ingested = parse_flow_table(bytes.as_slice(), &cfg.input.flow_format(), &registries)?;
    ingested.matrix = ingested.matrix.clone().with_year(cfg.year);
    if ingested.report.dropped_diagonal > 0 {
        eprintln!(
            "warning: dropped {} positive diagonal cells",
            ingested.report.dropped_diagonal
        );
    }
    let inputs = Inputs {
        flows: InputFile {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        },
        countries: registry_input(countries, BUNDLED_COUNTRIES)?,
        sectors: registry_input(sectors, BUNDLED_SECTORS)?,
    };
    Ok(Loaded {
        registries,
        ingested,
        inputs,
    })
}

fn open_run(cfg: &RunConfig, command: &str, loaded: &Loaded, force: bool) -> Result<RunDir> {
    let id = run_id(command, &loaded.inputs, cfg)?;
    RunDir::create(&cfg.output.dir, command, id, force)
}

fn finish(
    run: RunDir,
    loaded: Loaded,
    cfg: RunConfig,
    params: Value,
    results: Value,
) -> Result<Outcome> {
    let (dir, manifest) = run.finish(loaded.inputs, cfg, params, results)?;
    Ok(Outcome {
        dir,
        manifest: Some(manifest),
    })
}

fn cmd_ingest_validate(cfg: RunConfig, force: bool) -> Result<Outcome> {
    let loaded = load(&cfg)?;
    let m = loaded.matrix();
    let dims = m.dims();
    let volumes = compute_volumes(m);
    let zero = |v: &[f64]| v.iter().filter(|&&x| x == 0.0).count();
    let summary = json!({
        "countries": dims.n_countries,
        "sectors": dims.n_sectors,
        "nodes": dims.n(),
        "rows": loaded.ingested.rows,
        "nonzero_flows": m.nnz(),
        "dropped_diagonal": loaded.ingested.report.dropped_diagonal,
        "dropped_zero": loaded.ingested.report.dropped_zero,
        "skipped_labels": loaded.ingested.skipped_labels,
        "total_flow": m.total(),
        "zero_import_volume_nodes": zero(&volumes.import),
        "zero_export_volume_nodes": zero(&volumes.export),
        "year": m.year(),
    });
    let mut run = open_run(&cfg, "ingest-validate", &loaded, force)?;
    run.write("summary.json", |w| export::write_json(&summary, w))?;
    finish(run, loaded, cfg, json!({}), summary)
}

fn google(cfg: &RunConfig, m: &MoneyMatrix, dir: Direction) -> Result<GoogleMatrix> {
    Ok(GoogleMatrix::from_money_with_alpha(m, dir, cfg.alpha)?)
}

fn cmd_rank(cfg: RunConfig, export_matrices: bool, force: bool) -> Result<Outcome> {
    let loaded = load(&cfg)?;
    let tol = cfg.tolerances.to_core();
    let mut vectors = Vec::new();
    let mut results = serde_json::Map::new();
    let mut run = open_run(&cfg, "rank", &loaded, force)?;
    for dir in Direction::BOTH {
        let g = google(&cfg, loaded.matrix(), dir)?;
        let rv = power_iterate(&g, tol.rank, tol.rank_max_iter)?;
        results.insert(
            dir.name().to_string(),
            json!({ "iterations": rv.iterations_used, "residual": rv.residual }),
        );
        if export_matrices {
            let s = g.stochastic();
            run.write(&format!("S_{}.csv", dir.name()), |w| export::write_triplets(s, w))?;
            run.write(&format!("dangling_{}.json", dir.name()), |w| {
                export::write_json(&export::dangling_json(s), w)
            })?;
        }
        vectors.push(rv.p);
    }
    let (p, p_star) = (&vectors[0], &vectors[1]);
    run.write("ranks.csv", |w| export::write_rank_table(&loaded.registries, p, p_star, w))?;
    run.write("country_ranks.csv", |w| {
        export::write_country_table(&loaded.registries, p, p_star, w)
    })?;
    let params = json!({ "export_matrices": export_matrices });
    finish(run, loaded, cfg, params, Value::Object(results))
}

/// Parses `first-last` or a single index, 1-based and inclusive.
pub fn parse_sector_range(text: &str, n_sectors: usize) -> Result<(usize, usize)> {
    let bad = || Error::usage(format!("sector range {text:?} is not of the form first-last"));
    let (a, b) = match text.split_once('-') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), text.trim()),
    };
    let first: usize = a.parse().map_err(|_| bad())?;
    let last: usize = b.parse().map_err(|_| bad())?;
    if first == 0 || last < first || last > n_sectors {
        return Err(Error::usage(format!(
            "sector range {text:?} must satisfy 1 <= first <= last <= {n_sectors}"
        )));
    }
    Ok((first, last))
}

fn resolve_country(registries: &Registries, code: &str) -> Result<usize> {
    registries
        .countries
        .position(code.trim())
        .ok_or_else(|| Error::usage(format!("unknown country code {code:?}")))
}

fn resolve_sector(registries: &Registries, code: &str) -> Result<usize> {
    if let Ok(i) = code.trim().parse::<usize>() {
        if (1..=registries.sectors.len()).contains(&i) {
            return Ok(i - 1);
        }
    }
    registries
        .sectors
        .position(code)
        .ok_or_else(|| Error::usage(format!("unknown sector {code:?}")))
}

struct Selection {
    country: String,
    first: usize,
    last: usize,
    reduced: ReducedSet,
}

fn selection(cfg: &RunConfig, registries: &Registries) -> Result<Selection> {
    let country = cfg
        .selection
        .country
        .clone()
        .ok_or_else(|| Error::usage("no country selected (--country or [selection] country)"))?;
    resolve_country(registries, &country)?;
    let (first, last) = parse_sector_range(&cfg.selection.sectors, registries.sectors.len())?;
    let reduced = ReducedSet::country_sectors(registries, country.trim(), first, last)?;
    Ok(Selection {
        country: country.trim().to_string(),
        first,
        last,
        reduced,
    })
}

fn regomax_both(cfg: &RunConfig, m: &MoneyMatrix, sel: &Selection) -> Result<Vec<RegomaxResult>> {
    let tol = cfg.tolerances.to_core();
    Direction::BOTH
        .into_iter()
        .map(|dir| Ok(compute_regomax_with(&google(cfg, m, dir)?, &sel.reduced, &tol, None)?))
        .collect()
}

/// Writes the six matrices and the JSON document of one direction.
pub fn write_regomax_files(run: &mut RunDir, r: &RegomaxResult) -> Result<()> {
    let dir = r.direction.name();
    let labels = r.reduced.labels();
    for (name, m) in export::regomax_components(r) {
        run.write(&format!("{dir}/{name}.csv"), |w| export::write_dense_matrix(m, labels, w))?;
    }
    run.write(&format!("{dir}/regomax.json"), |w| {
        export::write_json(&export::regomax_doc(r), w)
    })
}

fn cmd_regomax(cfg: RunConfig, force: bool) -> Result<Outcome> {
    let loaded = load(&cfg)?;
    let sel = selection(&cfg, &loaded.registries)?;
    let results = regomax_both(&cfg, loaded.matrix(), &sel)?;
    let mut run = open_run(&cfg, "regomax", &loaded, force)?;
    let mut weights = serde_json::Map::new();
    for r in &results {
        write_regomax_files(&mut run, r)?;
        let doc = export::regomax_doc(r);
        weights.insert(
            r.direction.name().to_string(),
            json!({ "weights": doc.weights, "lambda_c": r.lambda_c, "series_terms_used": r.series_terms_used }),
        );
    }
    run.write("weights.json", |w| export::write_json(&weights, w))?;

    let mut summary = weights.clone();
    if cfg.regomax.compare_published {
        summary.insert("published_comparison".into(), compare_published(&cfg, &sel, &results));
    }
    let params = json!({
        "country": sel.country,
        "sectors": [sel.first, sel.last],
        "n_r": sel.reduced.len(),
        "directions": ["import", "export"],
        "compare_published": cfg.regomax.compare_published,
    });
    finish(run, loaded, cfg, params, Value::Object(summary))
}

fn compare_published(cfg: &RunConfig, sel: &Selection, results: &[RegomaxResult]) -> Value {
    let mut notes = Vec::new();
    if (sel.first, sel.last) != published::PUBLISHED_SECTORS {
        notes.push(format!(
            "published weights use sectors {}-{}",
            published::PUBLISHED_SECTORS.0,
            published::PUBLISHED_SECTORS.1
        ));
    }
    match cfg.year {
        Some(y) if y == published::PUBLISHED_YEAR => {}
        Some(y) => notes.push(format!("published weights are for {}, data is {y}", published::PUBLISHED_YEAR)),
        None => notes.push(format!(
            "data year not given; published weights are for {}",
            published::PUBLISHED_YEAR
        )),
    }
    let deltas: Vec<_> = results
        .iter()
        .filter_map(|r| {
            published::lookup(&sel.country, r.direction).map(|p| published::compare(p, &r.weights))
        })
        .collect();
    if deltas.is_empty() {
        notes.push(format!("no published weights for {}", sel.country));
    }
    json!({ "tolerance": published::PUBLISHED_TOLERANCE, "deltas": deltas, "notes": notes })
}

fn cmd_sensitivity(cfg: RunConfig, force: bool) -> Result<Outcome> {
    let loaded = load(&cfg)?;
    let reg = &loaded.registries;
    let s = &cfg.sensitivity;
    let tol = cfg.tolerances.to_core();
    let opts = SensitivityOptions {
        alpha: cfg.alpha,
        rank_tol: s.rank_tol,
        rank_max_iter: tol.rank_max_iter,
        step: s.step,
        dry_run: s.dry_run,
    };
    let source_sector = resolve_sector(reg, &s.source_sector)?;
    let countries: Vec<usize> = if s.countries.is_empty() {
        (0..reg.countries.len()).collect()
    } else {
        s.countries
            .iter()
            .map(|c| resolve_country(reg, c))
            .collect::<Result<_>>()?
    };
    let m = loaded.matrix();
    let (map, source_country) = match s.mode {
        SensitivityMode::SectorMap => (
            sector_sensitivity_map_parallel(m, &countries, source_sector, &opts, cfg.worker_count())?,
            None,
        ),
        SensitivityMode::CountryMap => {
            let code = s.source_country.as_deref().ok_or_else(|| {
                Error::usage("country map needs a source country (--source-country)")
            })?;
            let c = resolve_country(reg, code)?;
            let map = country_sensitivity_map(m, &countries, c, source_sector, s.include_source, &opts)?;
            (map, Some(reg.countries.code(c).to_string()))
        }
    };
    let mut run = open_run(&cfg, "sensitivity", &loaded, force)?;
    run.write("sensitivity.csv", |w| export::write_sensitivity_csv(&map, reg, w))?;
    run.write("sensitivity.json", |w| {
        export::write_json(&export::sensitivity_doc(&map, reg), w)
    })?;
    let params = json!({
        "mode": s.mode,
        "source_sector": reg.sectors.code(source_sector),
        "source_country": source_country,
        "step": s.step,
        "rank_tol": s.rank_tol,
        "dry_run": s.dry_run,
        "rows": map.rows.len(),
        "columns": map.n_columns(),
    });
    let results = json!({
        "max_abs_d": map.values.iter().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs())),
    });
    finish(run, loaded, cfg, params, results)
}

fn cmd_network(cfg: RunConfig, force: bool) -> Result<Outcome> {
    if cfg.network.k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    let loaded = load(&cfg)?;
    let sel = selection(&cfg, &loaded.registries)?;
    let results = regomax_both(&cfg, loaded.matrix(), &sel)?;
    let mut run = open_run(&cfg, "network", &loaded, force)?;
    let mut summary = serde_json::Map::new();
    let mut used = (cfg.network.k, None);
    for r in &results {
        let net = build_reduced_network(r, cfg.network.k)?;
        used = (net.k, net.clamped_from);
        for &format in &cfg.network.formats {
            let bytes = export_graph(&net, format)?;
            let name = format!("{}/network.{}", r.direction.name(), format.extension());
            run.write(&name, |w| {
                w.extend_from_slice(&bytes);
                Ok(())
            })?;
        }
        let hidden = net
            .edges
            .iter()
            .filter(|e| e.kind == regomax_core::LinkKind::Hidden)
            .count();
        summary.insert(
            r.direction.name().to_string(),
            json!({ "edges": net.edges.len(), "hidden_edges": hidden }),
        );
    }
    if let Some(requested) = used.1 {
        eprintln!("warning: k = {requested} exceeds N_r - 1, using {}", used.0);
    }
    let params = json!({
        "country": sel.country,
        "sectors": [sel.first, sel.last],
        "k": cfg.network.k,
        "k_used": used.0,
        "clamped_from": used.1,
        "formats": cfg.network.formats.iter().map(|f| f.name()).collect::<Vec<_>>(),
    });
    finish(run, loaded, cfg, params, Value::Object(summary))
}

fn cmd_synthesize(nc: usize, ns: usize, seed: u64, density: f64, out: &Path) -> Result<Outcome> {
    let m = synthesize_network(nc, ns, seed, density)?;
    let bundled = bundled_registries();
    let registries = if bundled.dims() == m.dims() {
        bundled
    } else {
        Registries::synthetic(nc, ns)?
    };
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let write = |name: &str, render: &dyn Fn(&mut Vec<u8>) -> Result<()>| -> Result<()> {
        let mut bytes = Vec::new();
        render(&mut bytes)?;
        let path = out.join(name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
    };
    write("flows.csv", &|w| write_native_csv(&m, &registries, w))?;
    write("countries.csv", &|w| write_country_registry(&registries.countries, w))?;
    write("sectors.csv", &|w| write_sector_registry(&registries.sectors, w))?;
    Ok(Outcome {
        dir: out.to_path_buf(),
        manifest: None,
    })
}
