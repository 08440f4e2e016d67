//! Fixtures and helpers for tests that drive the `regomax` binary.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regomax::ingest::write_native_csv;
use regomax::registry_io::{write_country_registry, write_sector_registry};
use regomax_core::{CountryRegistry, Dims, Flow, MoneyMatrix, Registries, SectorRegistry};

pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub registries: Registries,
    pub matrix: MoneyMatrix,
}

impl Fixture {
    pub fn new(registries: Registries, matrix: MoneyMatrix) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, render: &dyn Fn(&mut Vec<u8>)| {
            let mut buf = Vec::new();
            render(&mut buf);
            std::fs::write(dir.path().join(name), buf).unwrap();
        };
        write("flows.csv", &|w| write_native_csv(&matrix, &registries, w).unwrap());
        write("countries.csv", &|w| write_country_registry(&registries.countries, w).unwrap());
        write("sectors.csv", &|w| write_sector_registry(&registries.sectors, w).unwrap());
        Fixture {
            dir,
            registries,
            matrix,
        }
    }

    /// Two countries of two sectors; every node trades 1 with its two
    /// neighbours on the ring 1-2-3-4-1, so all ranks are exactly 1/4.
    pub fn cycle() -> Self {
        let registries = Registries::new(
            CountryRegistry::from_codes([("AAA", "Aland"), ("BBB", "Bland")]).unwrap(),
            SectorRegistry::from_codes([("S1 ONE", "first"), ("S2 TWO", "second")]).unwrap(),
        );
        let flows = (0..4).flat_map(|i| {
            [(i + 1) % 4, (i + 3) % 4].map(|dest| Flow {
                dest,
                source: i,
                value: 1.0,
            })
        });
        let (m, _) = MoneyMatrix::from_flows(Dims::new(2, 2).unwrap(), flows).unwrap();
        Fixture::new(registries, m)
    }

    pub fn synthetic(nc: usize, ns: usize, seed: u64, density: f64) -> Self {
        let m = regomax_core::synthesize_network(nc, ns, seed, density).unwrap();
        Fixture::new(Registries::synthetic(nc, ns).unwrap(), m)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Input and registry flags followed by `--out <dir>/<out>`.
    pub fn args(&self, command: &str, out: &str) -> Vec<String> {
        let p = |n: &str| self.path(n).display().to_string();
        vec![
            command.to_string(),
            "--input".into(),
            p("flows.csv"),
            "--country-registry".into(),
            p("countries.csv"),
            "--sector-registry".into(),
            p("sectors.csv"),
            "--out".into(),
            p(out),
        ]
    }
}

pub fn regomax_cmd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_regomax"));
    cmd.env_remove("REGOMAX_CONFIG");
    cmd
}

pub fn run<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    regomax_cmd().args(args).output().unwrap()
}

/// Runs to success and returns the run directory printed on stdout.
pub fn run_ok<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> PathBuf {
    let out = run(args);
    assert!(
        out.status.success(),
        "status {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    PathBuf::from(String::from_utf8(out.stdout).unwrap().trim())
}

pub fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&read(dir, "manifest.json")).unwrap()
}

/// Every file under `dir` as (relative path, bytes), sorted by path.
pub fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

pub fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}
