//! TOML experiment configuration. Every field has a default, so a config
//! may be as short as `scenario = "counterexamples"`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FourierGrid;
use crate::integrate::{FormulationKind, StepController};
use crate::mhd::presets::{self, Preset, PresetParams};
use crate::mhd::{CouplingMatrix, MhdState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    Simulate,
    Equivalence,
    Sweep,
    Counterexamples,
    Iterate,
    Probes,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 6] = [
        Self::Simulate,
        Self::Equivalence,
        Self::Sweep,
        Self::Counterexamples,
        Self::Iterate,
        Self::Probes,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Equivalence => "equivalence",
            Self::Sweep => "sweep",
            Self::Counterexamples => "counterexamples",
            Self::Iterate => "iterate",
            Self::Probes => "probes",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 128 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PresetConfig {
    pub name: Preset,
    pub amplitude: f64,
    pub epsilon: f64,
    pub r_amplitude: f64,
    pub seed: u64,
    pub band: f64,
}

impl Default for PresetConfig {
    fn default() -> Self {
        let p = PresetParams::default();
        Self {
            name: Preset::OrszagTang,
            amplitude: p.amplitude,
            epsilon: p.epsilon,
            r_amplitude: p.r_amplitude,
            seed: p.seed,
            band: p.band,
        }
    }
}

impl PresetConfig {
    pub fn params(&self) -> PresetParams {
        PresetParams {
            amplitude: self.amplitude,
            epsilon: self.epsilon,
            r_amplitude: self.r_amplitude,
            seed: self.seed,
            band: self.band,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    Rotation,
    Zero,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingConfig {
    pub kind: CouplingKind,
    /// Rows of the matrix; required for `custom` only.
    pub matrix: Option<[[f64; 2]; 2]>,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self {
            kind: CouplingKind::Rotation,
            matrix: None,
        }
    }
}

/// One right-hand side, or all three in lockstep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulationChoice {
    Primitive,
    Elsasser,
    Vorticity,
    All,
}

impl FormulationChoice {
    pub fn kinds(&self) -> Vec<FormulationKind> {
        match self {
            Self::Primitive => vec![FormulationKind::Primitive],
            Self::Elsasser => vec![FormulationKind::Elsasser],
            Self::Vorticity => vec![FormulationKind::Vorticity],
            Self::All => FormulationKind::ALL.to_vec(),
        }
    }
}

/// The unspecified constants of the lifespan bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub big_c: f64,
    pub small_c: f64,
    /// Regularity `s` of the general bound, with `p = r = ∞, 1`.
    pub s: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            big_c: 1.0,
            small_c: 1.0,
            s: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for CSV/JSON artifacts; nothing is written when unset.
    pub dir: Option<PathBuf>,
    pub plots: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub eps: Vec<f64>,
    /// Stop when `E(t)` reaches this multiple of `E(0)`.
    pub growth_factor: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            eps: vec![1.0, 0.5, 0.25, 0.125, 0.0625],
            growth_factor: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquivalenceConfig {
    /// Number of comparison times after `t = 0`.
    pub samples: usize,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self { samples: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterationConfig {
    /// Number of iterates after iterate 0.
    pub iterations: usize,
    /// Successive differences below `floor · ‖data‖` are rounding noise
    /// and are left out of the rate.
    pub floor: f64,
    /// Ratio above which a difference counts as divergence.
    pub divergence_factor: f64,
    pub energy_tol: f64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            iterations: 12,
            floor: 1e-11,
            divergence_factor: 1e6,
            energy_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    /// Horizon of the shear transport run.
    pub t_end: f64,
    pub dt: f64,
    /// Seed of the random field/velocity pair.
    pub seed: u64,
    pub band: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            t_end: 3.0,
            dt: 0.01,
            seed: 7,
            band: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioName,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub preset: PresetConfig,
    #[serde(default)]
    pub coupling: CouplingConfig,
    /// Defaults to `all` for `equivalence` and `primitive` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formulation: Option<FormulationChoice>,
    #[serde(default)]
    pub controller: StepController,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub equivalence: EquivalenceConfig,
    #[serde(default)]
    pub iteration: IterationConfig,
    #[serde(default)]
    pub probes: ProbeConfig,
}

impl ExperimentConfig {
    /// Defaults for `scenario`.
    pub fn new(scenario: ScenarioName) -> Self {
        Self {
            scenario,
            grid: GridConfig::default(),
            preset: PresetConfig::default(),
            coupling: CouplingConfig::default(),
            formulation: None,
            controller: StepController::default(),
            bounds: BoundsConfig::default(),
            output: OutputConfig::default(),
            sweep: SweepConfig::default(),
            equivalence: EquivalenceConfig::default(),
            iteration: IterationConfig::default(),
            probes: ProbeConfig::default(),
        }
    }

    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text)
            .map_err(|e| Error::config("<document>", e.to_string()))?;
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid.n;
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::config(
                "grid.n",
                format!("{n} is not a power of two >= 8"),
            ));
        }
        self.coupling()?;
        match (self.scenario, self.formulation()) {
            (ScenarioName::Equivalence, FormulationChoice::All) => {}
            (ScenarioName::Equivalence, _) => {
                return Err(Error::config(
                    "formulation",
                    "equivalence compares all formulations; use \"all\"",
                ));
            }
            (ScenarioName::Simulate | ScenarioName::Sweep, _) => {
                self.single_formulation()?;
            }
            _ => {}
        }
        let p = &self.preset;
        for (name, v) in [
            ("preset.amplitude", p.amplitude),
            ("preset.epsilon", p.epsilon),
            ("preset.r_amplitude", p.r_amplitude),
        ] {
            if !v.is_finite() {
                return Err(Error::config(name, "must be finite"));
            }
        }
        if !(p.band >= 1.0) {
            return Err(Error::config("preset.band", "must be at least 1"));
        }
        self.controller
            .validate()
            .map_err(|e| Error::config("controller", e.to_string()))?;
        let b = &self.bounds;
        if !(b.big_c > 0.0) {
            return Err(Error::config("bounds.big_c", "must be positive"));
        }
        if !(b.small_c > 0.0) {
            return Err(Error::config("bounds.small_c", "must be positive"));
        }
        if !(b.s.is_finite() && crate::lp::BesovSpec::linf_one(b.s).is_lipschitz()) {
            return Err(Error::config(
                "bounds.s",
                "B^s_{∞,1} must embed in Lipschitz, so s >= 1",
            ));
        }
        let eps = &self.sweep.eps;
        if eps.is_empty() || eps.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
            return Err(Error::config(
                "sweep.eps",
                "must be a nonempty list of finite values >= 0",
            ));
        }
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::config("sweep.eps", "must be strictly decreasing"));
        }
        if !(self.sweep.growth_factor > 1.0) {
            return Err(Error::config("sweep.growth_factor", "must exceed 1"));
        }
        if self.equivalence.samples == 0 {
            return Err(Error::config("equivalence.samples", "must be at least 1"));
        }
        let it = &self.iteration;
        if it.iterations == 0 || it.iterations > 20 {
            return Err(Error::config("iteration.iterations", "must lie in 1..=20"));
        }
        if !(it.floor >= 0.0) || !(it.divergence_factor > 1.0) || !(it.energy_tol >= 0.0) {
            return Err(Error::config(
                "iteration",
                "floor >= 0, divergence_factor > 1, energy_tol >= 0",
            ));
        }
        let pr = &self.probes;
        if !(pr.t_end > 0.0 && pr.dt > 0.0) {
            return Err(Error::config("probes", "t_end and dt must be positive"));
        }
        if !(pr.band >= 1.0) {
            return Err(Error::config("probes.band", "must be at least 1"));
        }
        Ok(())
    }

    pub fn formulation(&self) -> FormulationChoice {
        match (self.formulation, self.scenario) {
            (Some(f), _) => f,
            (None, ScenarioName::Equivalence) => FormulationChoice::All,
            (None, _) => FormulationChoice::Primitive,
        }
    }

    /// The single right-hand side of a non-equivalence run.
    pub fn single_formulation(&self) -> Result<FormulationKind> {
        match self.formulation() {
            FormulationChoice::Primitive => Ok(FormulationKind::Primitive),
            FormulationChoice::Elsasser => Ok(FormulationKind::Elsasser),
            FormulationChoice::Vorticity => Ok(FormulationKind::Vorticity),
            FormulationChoice::All => Err(Error::config(
                "formulation",
                format!("scenario `{}` needs a single formulation", self.scenario),
            )),
        }
    }

    pub fn coupling(&self) -> Result<CouplingMatrix> {
        match (self.coupling.kind, self.coupling.matrix) {
            (CouplingKind::Rotation, None) => Ok(CouplingMatrix::rotation()),
            (CouplingKind::Zero, None) => Ok(CouplingMatrix::zero()),
            (CouplingKind::Custom, Some(m)) if m.iter().flatten().all(|v| v.is_finite()) => {
                Ok(CouplingMatrix::new(m))
            }
            (CouplingKind::Custom, Some(_)) => {
                Err(Error::config("coupling.matrix", "entries must be finite"))
            }
            (CouplingKind::Custom, None) => Err(Error::config(
                "coupling.matrix",
                "required for kind = \"custom\"",
            )),
            (_, Some(_)) => Err(Error::config(
                "coupling.matrix",
                "only allowed for kind = \"custom\"",
            )),
        }
    }

    pub fn grid(&self) -> Result<Arc<FourierGrid>> {
        FourierGrid::shared(self.grid.n)
    }

    pub fn initial_state(&self, grid: &Arc<FourierGrid>) -> MhdState {
        presets::build(grid, self.preset.name, &self.preset.params())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = ExperimentConfig::from_toml_str("scenario = \"counterexamples\"").unwrap();
        assert_eq!(cfg, ExperimentConfig::new(ScenarioName::Counterexamples));
    }

    #[test]
    fn roundtrip_through_toml() {
        let mut cfg = ExperimentConfig::new(ScenarioName::Sweep);
        cfg.coupling = CouplingConfig {
            kind: CouplingKind::Custom,
            matrix: Some([[1.0, 0.5], [0.0, 2.0]]),
        };
        cfg.output.dir = Some("out".into());
        cfg.controller.fixed_dt = Some(0.01);
        let text = cfg.to_toml_string();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }

    fn err_path(text: &str) -> String {
        match ExperimentConfig::from_toml_str(text) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_field_paths() {
        assert_eq!(
            err_path("scenario = \"simulate\"\n[grid]\nn = 100"),
            "grid.n"
        );
        assert_eq!(
            err_path("scenario = \"simulate\"\n[grid]\nn = \"big\""),
            "grid.n"
        );
        assert_eq!(err_path("scenario = \"dance\""), "scenario");
        assert_eq!(
            err_path("scenario = \"simulate\"\n[preset]\nname = \"vortex\""),
            "preset.name"
        );
        assert_eq!(
            err_path("scenario = \"simulate\"\n[coupling]\nkind = \"custom\""),
            "coupling.matrix"
        );
        assert_eq!(
            err_path(
                "scenario = \"simulate\"\n[coupling]\nkind = \"custom\"\nmatrix = [[1.0, 2.0]]"
            ),
            "coupling.matrix"
        );
        assert_eq!(
            err_path("scenario = \"sweep\"\n[sweep]\neps = [0.5, 1.0]"),
            "sweep.eps"
        );
        assert_eq!(
            err_path("scenario = \"simulate\"\n[controller]\ncfl = 2.0"),
            "controller"
        );
        assert!(matches!(
            ExperimentConfig::from_toml_str("scenario = \"simulate\"\ncolour = 1"),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn custom_matrix_parses() {
        let cfg = ExperimentConfig::from_toml_str(
            "scenario = \"simulate\"\n[coupling]\nkind = \"custom\"\nmatrix = [[1.0, 0.0], [0.5, -1.0]]",
        )
        .unwrap();
        assert_eq!(cfg.coupling().unwrap().entries, [[1.0, 0.0], [0.5, -1.0]]);
    }
}
