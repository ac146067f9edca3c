//! Run configuration: a TOML file with one table per concern.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use twisted_waveguide::cross_section::{CrossSectionSpec, ModeMethod};
use twisted_waveguide::grid::GridFunction;
use twisted_waveguide::longitudinal::{PotentialSpec, ResolventEngine, ResolventOptions};
use twisted_waveguide::scaled_spectrum::ScaledOptions;
use twisted_waveguide::width::{TwistProfile, WidthOptions};
use twisted_waveguide::Execution;

/// Marks failures caused by the configuration rather than the numerics.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub cross_section: CrossSectionBlock,
    #[serde(default)]
    pub potential: PotentialBlock,
    #[serde(default)]
    pub twist: TwistBlock,
    #[serde(default)]
    pub target: TargetBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub scan: ScanBlock,
    #[serde(default)]
    pub surface: SurfaceBlock,
    #[serde(default)]
    pub limit: LimitBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Rectangle,
    Disk,
    Polygon,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossSectionBlock {
    pub shape: ShapeKind,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub radius: Option<f64>,
    pub vertices: Option<Vec<[f64; 2]>>,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    #[serde(default)]
    pub axis_offset: [f64; 2],
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default)]
    pub method: ModeMethod,
}

fn default_grid_n() -> usize {
    64
}

fn default_modes() -> usize {
    6
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Free,
    PoschlTeller,
    #[default]
    DeltaLimit,
    Sampled,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialBlock {
    #[serde(default)]
    pub kind: PotentialKind,
    pub nu: Option<f64>,
    /// Two-column CSV `x,V`.
    pub file: Option<PathBuf>,
    pub decay_radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistKind {
    #[default]
    Linear,
    Compact,
    Sampled,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistBlock {
    #[serde(default)]
    pub kind: TwistKind,
    pub x: Option<f64>,
    /// Two-column CSVs `x,rate` and `x,accel`.
    pub rate_file: Option<PathBuf>,
    pub accel_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetBlock {
    pub n: usize,
    pub j: usize,
}

impl Default for TargetBlock {
    fn default() -> Self {
        Self { n: 2, j: 1 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverBlock {
    pub engine: ResolventEngine,
    /// Mesh bound of the 1D resolvent engines.
    pub resolvent_h_max: f64,
    pub threshold_guard: f64,
    pub parallel: bool,
    pub channels: usize,
    pub theta: f64,
    pub theta_max: f64,
    pub h_max: f64,
    pub level: u32,
    pub scaling_radius: Option<f64>,
    pub exterior_length: Option<f64>,
    pub tolerance: f64,
    pub arnoldi_steps: usize,
    pub track_radius: f64,
    /// Eigenvalues dumped around the target by `eps-scan`.
    pub spectrum_points: usize,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let s = ScaledOptions::default();
        let r = ResolventOptions::default();
        Self {
            engine: r.engine,
            resolvent_h_max: r.h_max,
            threshold_guard: WidthOptions::default().threshold_guard,
            parallel: true,
            channels: s.channels,
            theta: s.theta,
            theta_max: s.theta_max,
            h_max: s.h_max,
            level: s.level,
            scaling_radius: s.scaling_radius,
            exterior_length: s.exterior_length,
            tolerance: s.tolerance,
            arnoldi_steps: s.arnoldi_steps,
            track_radius: s.track_radius,
            spectrum_points: 40,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanBlock {
    pub epsilons: Option<Vec<f64>>,
    pub nus: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceBlock {
    pub epsilon: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub ns: usize,
}

impl Default for SurfaceBlock {
    fn default() -> Self {
        Self { epsilon: 0.3, x_min: -5.0, x_max: 5.0, nx: 60, ns: 48 }
    }
}

/// Overrides for `limit`; missing values come from the cross-section.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitBlock {
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    pub c1: Option<f64>,
}

/// A parsed configuration with its hash and resolved inputs.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub hash: String,
    pub spec: CrossSectionSpec,
    pub potential: PotentialSpec,
    pub twist: TwistProfile,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read_grid(base: &Path, file: &Path) -> anyhow::Result<GridFunction> {
    let path = base.join(file);
    let text = std::fs::read_to_string(&path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    GridFunction::from_csv(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

fn need(v: Option<f64>, what: &str) -> anyhow::Result<f64> {
    v.ok_or_else(|| config_error(format!("missing {what}")))
}

impl LoadedConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| config_error("config is not UTF-8"))?;
        let config: RunConfig = toml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::resolve(config, sha256_hex(&bytes), base)
    }

    fn resolve(config: RunConfig, hash: String, base: &Path) -> anyhow::Result<Self> {
        let cs = &config.cross_section;
        let spec = match cs.shape {
            ShapeKind::Rectangle => {
                CrossSectionSpec::rectangle(need(cs.a, "cross_section.a")?, need(cs.b, "cross_section.b")?, cs.grid_n)
            }
            ShapeKind::Disk => CrossSectionSpec::disk(need(cs.radius, "cross_section.radius")?, cs.grid_n),
            ShapeKind::Polygon => CrossSectionSpec::polygon(
                cs.vertices.clone().ok_or_else(|| config_error("missing cross_section.vertices"))?,
                cs.grid_n,
            ),
        }
        .and_then(|s| s.with_axis_offset(cs.axis_offset))
        .map_err(|e| config_error(e.to_string()))?;
        if cs.modes == 0 {
            bail!(config_error("cross_section.modes must be positive"));
        }

        let p = &config.potential;
        let potential = match p.kind {
            PotentialKind::Free => PotentialSpec::Free,
            PotentialKind::DeltaLimit => PotentialSpec::DeltaLimit,
            PotentialKind::PoschlTeller => PotentialSpec::poschl_teller(need(p.nu, "potential.nu")?)
                .map_err(|e| config_error(e.to_string()))?,
            PotentialKind::Sampled => {
                let file = p.file.as_ref().ok_or_else(|| config_error("missing potential.file"))?;
                PotentialSpec::sampled(read_grid(base, file)?, need(p.decay_radius, "potential.decay_radius")?)
                    .map_err(|e| config_error(e.to_string()))?
            }
        };

        let t = &config.twist;
        let twist = match t.kind {
            TwistKind::Linear => TwistProfile::Linear,
            TwistKind::Compact => TwistProfile::compact(need(t.x, "twist.x")?).map_err(|e| config_error(e.to_string()))?,
            TwistKind::Sampled => {
                let rate = t.rate_file.as_ref().ok_or_else(|| config_error("missing twist.rate_file"))?;
                let accel = t.accel_file.as_ref().ok_or_else(|| config_error("missing twist.accel_file"))?;
                let twist = TwistProfile::Sampled { rate: read_grid(base, rate)?, accel: read_grid(base, accel)? };
                twist.validate().map_err(|e| config_error(e.to_string()))?;
                twist
            }
        };

        if config.target.n == 0 || config.target.j == 0 {
            bail!(config_error("target.n and target.j are 1-based"));
        }
        let loaded = Self { config, hash, spec, potential, twist };
        loaded.scaled_options().validate().map_err(|e| config_error(e.to_string()))?;
        let s = &loaded.config.solver;
        if !(s.resolvent_h_max > 0.0) || !(s.threshold_guard > 0.0) {
            bail!(config_error("solver.resolvent_h_max and solver.threshold_guard must be positive"));
        }
        Ok(loaded)
    }

    pub fn exec(&self) -> Execution {
        if self.config.solver.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }

    pub fn width_options(&self) -> WidthOptions {
        let s = &self.config.solver;
        WidthOptions {
            resolvent: ResolventOptions { engine: s.engine, h_max: s.resolvent_h_max, ..Default::default() },
            exec: self.exec(),
            threshold_guard: s.threshold_guard,
        }
    }

    pub fn scaled_options(&self) -> ScaledOptions {
        let s = &self.config.solver;
        ScaledOptions {
            channels: s.channels,
            theta: s.theta,
            theta_max: s.theta_max,
            h_max: s.h_max,
            level: s.level,
            scaling_radius: s.scaling_radius,
            exterior_length: s.exterior_length,
            tolerance: s.tolerance,
            arnoldi_steps: s.arnoldi_steps,
            track_radius: s.track_radius,
            exec: self.exec(),
        }
    }

    pub fn epsilons(&self) -> anyhow::Result<Vec<f64>> {
        let e = self.config.scan.epsilons.clone().ok_or_else(|| config_error("missing scan.epsilons"))?;
        if e.is_empty() {
            bail!(config_error("scan.epsilons is empty"));
        }
        if e.iter().any(|v| !v.is_finite()) {
            bail!(config_error("scan.epsilons must be finite"));
        }
        Ok(e)
    }

    pub fn nus(&self) -> anyhow::Result<Vec<f64>> {
        let n = self.config.scan.nus.clone().ok_or_else(|| config_error("missing scan.nus"))?;
        if n.is_empty() {
            bail!(config_error("scan.nus is empty"));
        }
        if n.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            bail!(config_error("scan.nus must be positive"));
        }
        Ok(n)
    }
}

/// Reads a config from a path, attaching the path to errors.
pub fn load(path: &Path) -> anyhow::Result<LoadedConfig> {
    LoadedConfig::load(path).with_context(|| format!("loading {}", path.display()))
}
