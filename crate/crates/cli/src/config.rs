//! JSON run configuration: schema-checked key by key (with did-you-mean
//! suggestions), then deserialized, then domain-validated. All problems are
//! reported together rather than one at a time.

use serde::Deserialize;
use serde_json::Value;

use crate::CliError;
use rotovort_core::{LatticeKind, PairPotential, TrapPotential3D};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: Option<u32>,
    pub seed: Option<u64>,
    pub pair_potential: Option<PairPotentialCfg>,
    pub scatter: Option<ScatterCfg>,
    pub gas: Option<GasCfg>,
    pub microscopic: Option<MicroscopicCfg>,
    pub trap3d: Option<TrapCfg>,
    pub tf3d: Option<Tf3dCfg>,
    pub grid: Option<GridCfg>,
    pub solver: Option<SolverCfg>,
    pub lattice: Option<LatticeCfg>,
    pub harmonic: Option<HarmonicCfg>,
    pub sweep: Option<SweepCfg>,
    pub output: Option<OutputCfg>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairPotentialCfg {
    HardCore { radius: f64 },
    SquareBarrier { height: f64, range: f64 },
    Tabulated { samples: Vec<(f64, f64)> },
}

impl PairPotentialCfg {
    pub fn to_core(&self) -> PairPotential {
        match self {
            PairPotentialCfg::HardCore { radius } => PairPotential::HardCore { radius: *radius },
            PairPotentialCfg::SquareBarrier { height, range } => PairPotential::SquareBarrier {
                height: *height,
                range: *range,
            },
            PairPotentialCfg::Tabulated { samples } => PairPotential::Tabulated {
                samples: samples.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterCfg {
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_r_max() -> f64 {
    10.0
}
fn default_steps() -> usize {
    20_000
}

impl Default for ScatterCfg {
    fn default() -> Self {
        ScatterCfg {
            r_max: default_r_max(),
            steps: default_steps(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasCfg {
    pub epsilon: f64,
    #[serde(default)]
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicroscopicCfg {
    pub scattering_length: f64,
    pub particle_count: f64,
    pub trap_scale: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrapCfg {
    RadialZ { c_r: f64, c_z: f64, s: f64 },
    Anisotropic { c_x: f64, c_y: f64, c_z: f64, s: f64 },
}

impl TrapCfg {
    pub fn to_core(&self) -> TrapPotential3D {
        match *self {
            TrapCfg::RadialZ { c_r, c_z, s } => TrapPotential3D::RadialZ { c_r, c_z, s },
            TrapCfg::Anisotropic { c_x, c_y, c_z, s } => {
                TrapPotential3D::Anisotropic { c_x, c_y, c_z, s }
            }
        }
    }
}

impl Default for TrapCfg {
    fn default() -> Self {
        TrapCfg::RadialZ { c_r: 1.0, c_z: 1.0, s: 4.0 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tf3dCfg {
    pub coupling: f64,
    #[serde(default)]
    pub omega: f64,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    #[serde(default = "default_n_r")]
    pub n_r: usize,
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
}

fn default_n_r() -> usize {
    256
}
fn default_n_theta() -> usize {
    512
}

impl Default for GridCfg {
    fn default() -> Self {
        GridCfg {
            n_r: default_n_r(),
            n_theta: default_n_theta(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverCfg {
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub init: InitCfg,
}

fn default_tau() -> f64 {
    0.1
}
fn default_tol() -> f64 {
    1e-9
}
fn default_max_iters() -> usize {
    20_000
}

impl Default for SolverCfg {
    fn default() -> Self {
        SolverCfg {
            tau: default_tau(),
            tol: default_tol(),
            max_iters: default_max_iters(),
            init: InitCfg::TfPhaseNoise,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum InitCfg {
    Constant,
    #[default]
    TfPhaseNoise,
    LatticeTrial,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeCfg {
    #[serde(default)]
    pub kind: LatticeKindCfg,
    pub core_radius: Option<f64>,
}

impl Default for LatticeCfg {
    fn default() -> Self {
        LatticeCfg {
            kind: LatticeKindCfg::Triangular,
            core_radius: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKindCfg {
    #[default]
    Triangular,
    Square,
}

impl LatticeKindCfg {
    pub fn to_core(self) -> LatticeKind {
        match self {
            LatticeKindCfg::Triangular => LatticeKind::Triangular,
            LatticeKindCfg::Square => LatticeKind::Square,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicCfg {
    pub omega_osc: f64,
    pub omega: f64,
    pub particle_count: f64,
    pub scattering_length: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCfg {
    pub epsilon: Vec<f64>,
    pub omega: Vec<f64>,
    #[serde(default = "default_sweep_command")]
    pub command: String,
}

fn default_sweep_command() -> String {
    "gp".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputCfg {
    pub dir: Option<String>,
    #[serde(default)]
    pub format: FormatCfg,
    /// Wall times are excluded from emitted records by default so reruns are
    /// byte-identical; opt in here.
    #[serde(default)]
    pub timings: bool,
}

impl Default for OutputCfg {
    fn default() -> Self {
        OutputCfg {
            dir: None,
            format: FormatCfg::Csv,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FormatCfg {
    #[default]
    Csv,
    Json,
}

/// Allowed keys per block, used for the pre-deserialization key check with
/// suggestions.
fn schema() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        (
            "",
            vec![
                "schema_version",
                "seed",
                "pair_potential",
                "scatter",
                "gas",
                "microscopic",
                "trap3d",
                "tf3d",
                "grid",
                "solver",
                "lattice",
                "harmonic",
                "sweep",
                "output",
            ],
        ),
        ("pair_potential", vec!["kind", "radius", "height", "range", "samples"]),
        ("scatter", vec!["r_max", "steps"]),
        ("gas", vec!["epsilon", "omega"]),
        ("microscopic", vec!["scattering_length", "particle_count", "trap_scale"]),
        ("trap3d", vec!["form", "c_r", "c_z", "c_x", "c_y", "s"]),
        ("tf3d", vec!["coupling", "omega", "resolution"]),
        ("grid", vec!["n_r", "n_theta"]),
        ("solver", vec!["tau", "tol", "max_iters", "init"]),
        ("lattice", vec!["kind", "core_radius"]),
        (
            "harmonic",
            vec!["omega_osc", "omega", "particle_count", "scattering_length"],
        ),
        ("sweep", vec!["epsilon", "omega", "command"]),
        ("output", vec!["dir", "format", "timings"]),
    ]
}

fn levenshtein(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn check_keys(value: &Value, errors: &mut Vec<String>) {
    let Some(root) = value.as_object() else {
        errors.push("top level must be a JSON object".into());
        return;
    };
    let schema = schema();
    let known_blocks = &schema[0].1;
    for (key, sub) in root {
        if !known_blocks.contains(&key.as_str()) {
            errors.push(unknown_key_message(key, known_blocks));
            continue;
        }
        if let Some(allowed) = schema
            .iter()
            .find(|(block, _)| *block == key.as_str())
            .map(|(_, keys)| keys)
        {
            if let Some(obj) = sub.as_object() {
                for sub_key in obj.keys() {
                    if !allowed.contains(&sub_key.as_str()) {
                        errors.push(format!(
                            "in \"{key}\": {}",
                            unknown_key_message(sub_key, allowed)
                        ));
                    }
                }
            }
        }
    }
}

fn unknown_key_message(key: &str, allowed: &[&str]) -> String {
    let best = allowed
        .iter()
        .map(|cand| (levenshtein(key, cand), *cand))
        .min()
        .filter(|(d, _)| *d <= 3);
    match best {
        Some((_, cand)) => format!("unknown key \"{key}\" (did you mean \"{cand}\"?)"),
        None => format!("unknown key \"{key}\""),
    }
}

fn domain_errors(cfg: &RunConfig) -> Vec<String> {
    let mut errors = Vec::new();
    if let Some(v) = cfg.schema_version {
        if v != SCHEMA_VERSION {
            errors.push(format!(
                "schema_version {v} unsupported (expected {SCHEMA_VERSION})"
            ));
        }
    }
    if let Some(gas) = &cfg.gas {
        if !(gas.epsilon > 0.0) {
            errors.push(format!("gas.epsilon must be positive (got {})", gas.epsilon));
        }
        if gas.omega < 0.0 {
            errors.push(format!("gas.omega must be nonnegative (got {})", gas.omega));
        }
    }
    if let Some(m) = &cfg.microscopic {
        if !(m.scattering_length > 0.0) {
            errors.push("microscopic.scattering_length must be positive".into());
        }
        if !(m.particle_count > 0.0) {
            errors.push("microscopic.particle_count must be positive".into());
        }
        if !(m.trap_scale > 0.0) {
            errors.push("microscopic.trap_scale must be positive".into());
        }
    }
    if let Some(p) = &cfg.pair_potential {
        match p {
            PairPotentialCfg::HardCore { radius } if !(radius > &0.0) => {
                errors.push("pair_potential.radius must be positive".into());
            }
            PairPotentialCfg::SquareBarrier { height, range } => {
                if *height < 0.0 {
                    errors.push("pair_potential.height must be nonnegative".into());
                }
                if !(range > &0.0) {
                    errors.push("pair_potential.range must be positive".into());
                }
            }
            PairPotentialCfg::Tabulated { samples } if samples.is_empty() => {
                errors.push("pair_potential.samples must be nonempty".into());
            }
            _ => {}
        }
    }
    if let Some(s) = &cfg.scatter {
        if s.steps < 1000 {
            errors.push(format!("scatter.steps must be at least 1000 (got {})", s.steps));
        }
        if !(s.r_max > 0.0) {
            errors.push("scatter.r_max must be positive".into());
        }
    }
    if let Some(t) = &cfg.trap3d {
        let core = t.to_core();
        if let Err(e) = core.validate() {
            errors.push(format!("trap3d: {e}"));
        }
    }
    if let Some(t) = &cfg.tf3d {
        if !(t.coupling > 0.0) {
            errors.push("tf3d.coupling must be positive".into());
        }
        if t.omega < 0.0 {
            errors.push("tf3d.omega must be nonnegative".into());
        }
    }
    if let Some(g) = &cfg.grid {
        if g.n_r < 16 {
            errors.push(format!("grid.n_r must be at least 16 (got {})", g.n_r));
        }
        if g.n_theta < 8 || g.n_theta % 2 != 0 {
            errors.push(format!("grid.n_theta must be even and >= 8 (got {})", g.n_theta));
        }
    }
    if let Some(s) = &cfg.solver {
        if !(s.tau > 0.0) {
            errors.push("solver.tau must be positive".into());
        }
        if !(s.tol > 0.0) {
            errors.push("solver.tol must be positive".into());
        }
        if s.max_iters == 0 {
            errors.push("solver.max_iters must be positive".into());
        }
    }
    if let Some(l) = &cfg.lattice {
        if let Some(t) = l.core_radius {
            if !(t > 0.0) {
                errors.push("lattice.core_radius must be positive".into());
            }
        }
    }
    if let Some(h) = &cfg.harmonic {
        if !(h.omega_osc > 0.0) {
            errors.push("harmonic.omega_osc must be positive".into());
        }
        if h.omega < 0.0 {
            errors.push("harmonic.omega must be nonnegative".into());
        }
        if !(h.particle_count > 0.0) || !(h.scattering_length > 0.0) {
            errors.push("harmonic.particle_count and scattering_length must be positive".into());
        }
    }
    if let Some(s) = &cfg.sweep {
        if s.epsilon.is_empty() || s.omega.is_empty() {
            errors.push("sweep.epsilon and sweep.omega must be nonempty".into());
        }
        if !matches!(s.command.as_str(), "gp" | "tf2d" | "lattice" | "giant" | "asympt") {
            errors.push(format!(
                "sweep.command \"{}\" unsupported (expected gp, tf2d, lattice, giant or asympt)",
                s.command
            ));
        }
    }
    errors
}

/// Parses and validates a configuration file, reporting every problem found.
pub fn parse_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Config(vec![format!("invalid JSON: {e}")]))?;
    let mut errors = Vec::new();
    check_keys(&value, &mut errors);
    let cfg = if errors.is_empty() {
        match serde_json::from_value::<RunConfig>(value) {
            Ok(cfg) => Some(cfg),
            Err(e) => {
                errors.push(format!("schema error: {e}"));
                None
            }
        }
    } else {
        None
    };
    if let Some(cfg) = cfg {
        errors.extend(domain_errors(&cfg));
        if errors.is_empty() {
            return Ok(cfg);
        }
    }
    Err(CliError::Config(errors))
}
