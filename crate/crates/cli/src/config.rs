use std::collections::BTreeMap;
use std::path::PathBuf;

use nkcurves::nk::{BackgroundSpec, TrigPoly};
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Tolerance names accepted by `--tol.<name>` and their defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("structure", 1e-10),
    ("type", 1e-6),
    ("lambda", 1e-5),
    ("structure-equation", 1e-5),
    ("nk-metric", 1e-8),
    ("cr", 1e-8),
    ("budget", 1e-7),
    ("step", 0.1),
    ("drift", 1e-8),
    ("stokes", 1e-5),
];

/// Everything a run depends on. Reports echo the resolved config, and
/// `--config <report.json>` replays it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    pub background: BackgroundSpec,
    /// Icosphere level on S⁶, grid size on the torus.
    pub resolution: Option<u32>,
    /// Time steps of a family.
    pub steps: Option<usize>,
    pub seed: u64,
    /// Sample points for structure checks.
    pub points: usize,
    pub tolerances: BTreeMap<String, f64>,
    /// Output directory; `NKCURVES_OUT` or the working directory when unset.
    pub out: Option<PathBuf>,
    pub curve: CurveConfig,
    pub family: FamilyConfig,
    pub search: SearchConfig,
    pub hausdorff: HausdorffConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            background: BackgroundSpec::S6,
            resolution: None,
            steps: None,
            seed: 0,
            points: 100,
            tolerances: BTreeMap::new(),
            out: None,
            curve: CurveConfig::default(),
            family: FamilyConfig::default(),
            search: SearchConfig::default(),
            hausdorff: HausdorffConfig::default(),
        }
    }
}

/// Seed curve: a great sphere through `e_i, e_j, e_k` on S⁶, or the subtorus
/// at time `t` along `shift` on the torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    pub triple: [usize; 3],
    pub t: f64,
    pub shift: [f64; 4],
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self {
            triple: [1, 2, 3],
            t: 0.0,
            shift: [0.0, 0.0, 0.25, 0.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DriveKind {
    /// A random path in `G₂` (S⁶).
    G2,
    /// Random normal perturbations plus Gauss–Newton projection (S⁶).
    Random,
    /// Translation of the subtorus along `shift` (torus).
    Translate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    pub drive: Option<DriveKind>,
    pub magnitude: f64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self {
            drive: None,
            magnitude: 1e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub lo: f64,
    pub hi: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            lo: -0.95,
            hi: 0.95,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HausdorffConfig {
    pub first: [usize; 3],
    pub second: [usize; 3],
}

impl Default for HausdorffConfig {
    fn default() -> Self {
        Self {
            first: [1, 2, 3],
            second: [1, 4, 5],
        }
    }
}

impl ExperimentConfig {
    /// Loads a config, or the config echoed inside a report.
    pub fn load(text: &str) -> Result<Self, UsageError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| UsageError(format!("config: {e}")))?;
        let value = match value.get("config") {
            Some(inner) => inner.clone(),
            None => value,
        };
        serde_json::from_value(value).map_err(|e| UsageError(format!("config: {e}")))
    }

    /// Fills background-dependent defaults so the echo is explicit.
    pub fn resolve(&mut self) -> Result<(), UsageError> {
        for name in self.tolerances.keys() {
            if !TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(UsageError(format!("unknown tolerance `{name}`")));
            }
        }
        let torus = matches!(self.background, BackgroundSpec::Torus { .. });
        self.resolution.get_or_insert(if torus { 8 } else { 3 });
        self.steps.get_or_insert(if torus { 128 } else { 20 });
        if self.command == "family" || self.command == "stokes-check" {
            let drive = *self.family.drive.get_or_insert(if torus {
                DriveKind::Translate
            } else {
                DriveKind::G2
            });
            if drive == DriveKind::Random && !self.tolerances.contains_key("drift") {
                self.tolerances.insert("drift".into(), 1e-4);
            }
        }
        for (name, default) in TOLERANCES {
            self.tolerances.entry(name.to_string()).or_insert(*default);
        }
        Ok(())
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn resolution(&self) -> u32 {
        self.resolution.expect("resolved")
    }

    pub fn steps(&self) -> usize {
        self.steps.expect("resolved")
    }
}

/// Builds a background from `--background` and its parameters.
pub fn background_from_flags(
    name: &str,
    b: Option<f64>,
    swap_factors: bool,
    field: Option<&str>,
) -> Result<BackgroundSpec, UsageError> {
    match name {
        "s6" => Ok(BackgroundSpec::S6),
        "s3s3" => Ok(BackgroundSpec::S3s3 {
            a: 1.0,
            b: b.unwrap_or(-0.5),
            swap_factors,
        }),
        "torus" => {
            let field = field.unwrap_or("sin(x5)");
            let field = TrigPoly::parse(field).map_err(|e| UsageError(e.to_string()))?;
            Ok(BackgroundSpec::Torus { field })
        }
        other => Err(UsageError(format!(
            "unknown background `{other}` (expected s6, s3s3 or torus)"
        ))),
    }
}
