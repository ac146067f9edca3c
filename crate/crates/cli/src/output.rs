//! Report and plot-data files. Every CSV `<name>.csv` is paired with a
//! `<name>.columns.txt` sidecar carrying the config hash and the column
//! meanings; `report.json` lists all of them.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub solver: serde_json::Value,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config_hash: String,
    pub results: serde_json::Value,
    pub artifacts: Vec<String>,
    pub provenance: Provenance,
}

/// A CSV table and the description of its columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&'static str, &'static str)]) -> Self {
        Self { name: name.to_string(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.0))?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn sidecar(&self, hash: &str) -> String {
        let mut s = format!("config_hash: {hash}\n");
        for (name, meaning) in &self.columns {
            s.push_str(&format!("{name}: {meaning}\n"));
        }
        s
    }
}

pub fn num(v: f64) -> String {
    format!("{v:.17e}")
}

/// Writes the tables and `report.json` into `dir`, then checks that every
/// artifact carries the same config hash.
pub fn write_run(dir: &Path, report: &mut Report, tables: &[Table]) -> anyhow::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for t in tables {
        let csv = dir.join(format!("{}.csv", t.name));
        let side = dir.join(format!("{}.columns.txt", t.name));
        std::fs::write(&csv, t.csv()?).with_context(|| format!("writing {}", csv.display()))?;
        std::fs::write(&side, t.sidecar(&report.config_hash)).with_context(|| format!("writing {}", side.display()))?;
        report.artifacts.push(format!("{}.csv", t.name));
        written.push(csv);
        written.push(side);
    }
    let path = dir.join("report.json");
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
    written.push(path);
    verify_run(dir)?;
    Ok(written)
}

/// Checks that the sidecar of every artifact listed in `report.json` records
/// the report's config hash.
pub fn verify_run(dir: &Path) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(dir.join("report.json")).context("reading report.json")?;
    let report: serde_json::Value = serde_json::from_str(&text)?;
    let hash = report["config_hash"].as_str().context("report.json has no config_hash")?;
    for a in report["artifacts"].as_array().context("report.json has no artifact list")? {
        let name = a.as_str().context("artifact names are strings")?;
        let stem = name.strip_suffix(".csv").unwrap_or(name);
        let side = dir.join(format!("{stem}.columns.txt"));
        let text = std::fs::read_to_string(&side).with_context(|| format!("reading {}", side.display()))?;
        let found = text.lines().find_map(|l| l.strip_prefix("config_hash: ")).unwrap_or("");
        if found != hash {
            bail!("{} records config hash {found:?} but report.json has {hash}", side.display());
        }
        if !dir.join(name).exists() {
            bail!("artifact {name} is missing");
        }
    }
    Ok(())
}
