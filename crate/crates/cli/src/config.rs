//! Scenario configuration files.
//!
//! A scenario is a JSON document. Sections not needed by a command may be
//! omitted; `simulate` and `check` need `initial` and `integrator`, `hj`
//! needs `hj`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use rotorsim_core::hamjac::{CandidateValues, GridPoint, HjSystem};
use rotorsim_core::integrate::{IntegratorSpec, Method};
use rotorsim_core::systems::{derive_effective_inertia, RawInertias};
use rotorsim_core::{ControlLaw, Error as CoreError, ReducedState, Variant, Vec2, Vec3, VehicleParams};

/// A configuration problem, anchored to a line of the source file when the
/// offending key can be located.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(line: Option<usize>, message: impl Into<String>) -> Self {
        ConfigError {
            path: None,
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(path) = &self.path {
            write!(f, "{path}:")?;
        }
        if let Some(line) = self.line {
            write!(f, "{line}:")?;
        }
        if self.path.is_some() || self.line.is_some() {
            f.write_str(" ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ibar: Option<Vec3>,
    /// Body inertias and rotor inertia tables, reduced to `ibar` on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawInertias>,
    pub mass: Vec3,
    pub jrot: Vec2,
    #[serde(default)]
    pub mgh: f64,
    #[serde(default = "default_chi")]
    pub chi: Vec3,
}

fn default_chi() -> Vec3 {
    Vec3::E3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub pi: Vec3,
    pub p: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec2>,
}

fn default_tolerance() -> f64 {
    1e-12
}

fn default_max_iterations() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "one")]
    pub decimation: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { decimation: 1 }
    }
}

/// Tolerances of the `check` audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    /// Bound on `max |H(t) − H(0)| / max(1, |H(0)|)`.
    pub energy_rel_tol: f64,
    /// Bound on `max |C(t) − C(0)|` for every Casimir.
    pub casimir_tol: f64,
    pub legendre_tol: f64,
    pub gradient_tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            energy_rel_tol: 1e-8,
            casimir_tol: 1e-9,
            legendre_tol: 1e-14,
            gradient_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub pi: Vec3,
    pub p: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec3>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CandidateConfig {
    Constant { one_form: [f64; 10], lift: Vec<f64> },
    /// One entry per grid point, in grid order.
    Table { entries: Vec<CandidateValues> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HjConfig {
    #[serde(default)]
    pub grid: Vec<GridEntry>,
    pub candidate: CandidateConfig,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub variant: Variant,
    pub params: ParamsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConfig>,
    #[serde(default)]
    pub control: ControlLaw,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hj: Option<HjConfig>,
}

/// Candidate for the HJ checker, resolved against the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Candidate {
    Constant(CandidateValues),
    Table(Vec<CandidateValues>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HjSetup {
    pub system: HjSystem,
    pub grid: Vec<GridPoint>,
    pub candidate: Candidate,
    pub tolerance: f64,
}

/// A fully validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub params: VehicleParams,
    pub initial: Option<ReducedState>,
    pub spec: Option<IntegratorSpec>,
    source: Option<String>,
}

impl Scenario {
    pub fn initial(&self) -> Result<ReducedState, ConfigError> {
        self.initial.ok_or_else(|| missing("initial"))
    }

    pub fn spec(&self) -> Result<IntegratorSpec, ConfigError> {
        self.spec.ok_or_else(|| missing("integrator"))
    }

    pub fn hj(&self) -> Result<HjSetup, ConfigError> {
        let source = self.config.hj.as_ref().ok_or_else(|| missing("hj"))?;
        hj_setup(self.config.variant, source).map_err(|message| ConfigError::new(self.locate("hj"), message))
    }

    fn locate(&self, key: &str) -> Option<usize> {
        self.source.as_deref().and_then(|text| key_line(text, key))
    }
}

fn missing(section: &str) -> ConfigError {
    ConfigError::new(None, format!("missing section `{section}`"))
}

/// First line of `text` holding the JSON key `key`.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// JSON key that a core validation error refers to.
fn error_key(err: &CoreError) -> Option<&'static str> {
    match err {
        CoreError::InvalidParam { field, .. } => {
            Some(["ibar", "mass", "jrot", "mgh", "chi", "inertia", "rotor"]
                .into_iter()
                .find(|k| field.starts_with(k))
                .unwrap_or("params"))
        }
        _ => None,
    }
}

fn build_params(c: &ParamsConfig) -> Result<VehicleParams, CoreError> {
    let ibar = match (c.ibar, &c.raw) {
        (Some(ibar), None) => ibar,
        (None, Some(raw)) => derive_effective_inertia(raw)?,
        (Some(_), Some(_)) => {
            return Err(CoreError::InvalidInput(
                "params: give either `ibar` or `raw`, not both".into(),
            ))
        }
        (None, None) => return Err(CoreError::InvalidInput("params: missing `ibar` or `raw`".into())),
    };
    VehicleParams::new(ibar, c.mass, c.jrot)?.with_gravity(c.mgh, c.chi)
}

fn build_spec(c: &IntegratorConfig, out: &OutputConfig) -> Result<IntegratorSpec, CoreError> {
    let spec = IntegratorSpec {
        method: c.method,
        dt: c.dt,
        t_end: c.t_end,
        tolerance: c.tolerance,
        max_iterations: c.max_iterations,
        decimation: out.decimation,
    };
    spec.validate()?;
    Ok(spec)
}

fn hj_setup(variant: Variant, c: &HjConfig) -> Result<HjSetup, String> {
    let system = match variant {
        Variant::Coincident => HjSystem::Coincident,
        Variant::NonCoincident => HjSystem::NonCoincident,
        other => return Err(format!("the Hamilton-Jacobi check needs a rotor variant, got {other}")),
    };
    if c.grid.is_empty() {
        return Err("hj: grid is missing or empty".into());
    }
    let mut grid = Vec::with_capacity(c.grid.len());
    for (index, e) in c.grid.iter().enumerate() {
        if e.gamma.is_some() != (system == HjSystem::NonCoincident) {
            return Err(format!(
                "hj: grid point {index} must {}carry gamma for variant {variant}",
                if system == HjSystem::NonCoincident { "" } else { "not " }
            ));
        }
        grid.push(GridPoint {
            index,
            pi: e.pi,
            p: e.p,
            gamma: e.gamma,
        });
    }
    let check_lift = |v: &CandidateValues, what: String| {
        if v.lift.len() == system.rows() {
            Ok(())
        } else {
            Err(format!("hj: {what} needs {} lift values, got {}", system.rows(), v.lift.len()))
        }
    };
    let candidate = match &c.candidate {
        CandidateConfig::Constant { one_form, lift } => {
            let v = CandidateValues {
                one_form: *one_form,
                lift: lift.clone(),
            };
            check_lift(&v, "candidate".into())?;
            Candidate::Constant(v)
        }
        CandidateConfig::Table { entries } => {
            if entries.len() != grid.len() {
                return Err(format!(
                    "hj: candidate table has {} entries for {} grid points",
                    entries.len(),
                    grid.len()
                ));
            }
            for (i, v) in entries.iter().enumerate() {
                check_lift(v, format!("candidate entry {i}"))?;
            }
            Candidate::Table(entries.clone())
        }
    };
    if !(c.tolerance > 0.0 && c.tolerance.is_finite()) {
        return Err(format!("hj: tolerance must be positive, got {}", c.tolerance));
    }
    Ok(HjSetup {
        system,
        grid,
        candidate,
        tolerance: c.tolerance,
    })
}

/// Parses and validates a scenario from JSON text.
pub fn parse(text: &str) -> Result<Scenario, ConfigError> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| {
        // serde_json appends its own position; the line is reported separately
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_owned(),
            None => message,
        };
        ConfigError::new((e.line() > 0).then_some(e.line()), message)
    })?;
    let anchored = |key: Option<&str>, err: CoreError| ConfigError::new(key.and_then(|k| key_line(text, k)), err.to_string());

    let params = build_params(&config.params).map_err(|e| {
        let key = error_key(&e).or(Some("params"));
        anchored(key, e)
    })?;
    config
        .control
        .validate()
        .map_err(|e| anchored(Some("control"), e))?;
    let initial = config
        .initial
        .as_ref()
        .map(|s| ReducedState::new(config.variant, s.pi, s.p, s.gamma, s.theta, s.l))
        .transpose()
        .map_err(|e| anchored(Some("initial"), e))?;
    let spec = config
        .integrator
        .as_ref()
        .map(|c| build_spec(c, &config.output))
        .transpose()
        .map_err(|e| {
            let key = match &e {
                CoreError::InvalidParam { field: "decimation", .. } => "decimation",
                CoreError::InvalidParam { field, .. } => field,
                _ => "integrator",
            };
            anchored(Some(key), e)
        })?;
    if let Some(hj) = &config.hj {
        hj_setup(config.variant, hj).map_err(|message| ConfigError::new(key_line(text, "hj"), message))?;
    }
    Ok(Scenario {
        config,
        params,
        initial,
        spec,
        source: Some(text.to_owned()),
    })
}

pub fn load(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(None, format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| ConfigError {
        path: Some(path.display().to_string()),
        ..e
    })
}

/// Canonical JSON rendering of a loaded scenario, with every default filled
/// in.
pub fn normalized(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&scenario.config).expect("config types serialize")
}
