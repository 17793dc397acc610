//! JSON run configuration and its validation.

use casimir_core::geometry::CorrugationSpec;
use casimir_core::lifshitz::{AtomSpec, MatsubaraGrid};
use casimir_core::materials::{PermittivityModel, PlateMaterial};
use casimir_core::optics::Extrapolation;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Config schema version understood by this build.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Pressure,
    FreeEnergy,
    SphereForce,
    AtomWall,
    Lateral,
    Entropy,
    KkTransform,
    ModulationDiff,
    Compare,
    RepulsionCheck,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Pressure => "pressure",
            Scenario::FreeEnergy => "free-energy",
            Scenario::SphereForce => "sphere-force",
            Scenario::AtomWall => "atom-wall",
            Scenario::Lateral => "lateral",
            Scenario::Entropy => "entropy",
            Scenario::KkTransform => "kk-transform",
            Scenario::ModulationDiff => "modulation-diff",
            Scenario::Compare => "compare",
            Scenario::RepulsionCheck => "repulsion-check",
        }
    }

    /// Sweep axis the scenario expects, or `None` when it has no sweep.
    fn axis(self) -> Option<Axis> {
        match self {
            Scenario::Pressure
            | Scenario::FreeEnergy
            | Scenario::SphereForce
            | Scenario::AtomWall
            | Scenario::ModulationDiff
            | Scenario::Compare => Some(Axis::A),
            Scenario::Entropy => Some(Axis::T),
            Scenario::Lateral => Some(Axis::Phi),
            Scenario::KkTransform | Scenario::RepulsionCheck => Some(Axis::Xi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Separation, µm.
    A,
    /// Temperature, K.
    T,
    /// Corrugation phase, rad.
    Phi,
    /// Imaginary frequency, eV.
    Xi,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::A => "a_um",
            Axis::T => "T_K",
            Axis::Phi => "phi_rad",
            Axis::Xi => "xi_eV",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => (self.start.ln() + (self.stop / self.start).ln() * t).exp(),
                }
            })
            .collect()
    }

    fn validate(&self, out: &mut Vec<String>) {
        // φ may legitimately start at zero or run negative
        let positive = self.axis != Axis::Phi;
        if !self.start.is_finite() || !self.stop.is_finite() {
            out.push("sweep.start and sweep.stop must be finite".into());
        } else {
            if positive && !(self.start > 0.0) {
                out.push("sweep.start must be > 0".into());
            }
            if !(self.stop > self.start) && !(self.count == 1 && self.stop == self.start) {
                out.push("sweep.stop must be greater than sweep.start".into());
            }
            if self.spacing == Spacing::Log && !(self.start > 0.0) {
                out.push("sweep.spacing log requires start > 0".into());
            }
        }
        if self.count == 0 {
            out.push("sweep.count must be >= 1".into());
        }
    }
}

/// Matsubara and quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Accuracy {
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_l_max")]
    pub l_max: usize,
}

fn default_tail_tol() -> f64 {
    MatsubaraGrid::new(1.0).tail_tol
}

fn default_quad_tol() -> f64 {
    MatsubaraGrid::new(1.0).quad_tol
}

fn default_l_max() -> usize {
    MatsubaraGrid::new(1.0).l_max
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            tail_tol: default_tail_tol(),
            quad_tol: default_quad_tol(),
            l_max: default_l_max(),
        }
    }
}

impl Accuracy {
    /// Overrides both tolerances from a single `--tolerance` value; the
    /// quadrature is kept a decade tighter than the sum.
    pub fn with_tolerance(self, tol: f64) -> Self {
        Accuracy {
            tail_tol: tol,
            quad_tol: tol / 10.0,
            ..self
        }
    }

    pub fn grid(&self, temperature: f64) -> MatsubaraGrid {
        MatsubaraGrid {
            temperature,
            l_max: self.l_max,
            tail_tol: self.tail_tol,
            quad_tol: self.quad_tol,
            fixed_terms: None,
        }
    }

    fn validate(&self, out: &mut Vec<String>) {
        for (name, v) in [("tail_tol", self.tail_tol), ("quad_tol", self.quad_tol)] {
            if !(v > 0.0 && v < 1.0) {
                out.push(format!("accuracy.{name} must lie in (0, 1)"));
            }
        }
        if self.l_max == 0 {
            out.push("accuracy.l_max must be >= 1".into());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereConfig {
    pub radius_um: f64,
}

/// Tabulated Im ε(ω) plus its low-frequency extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KkConfig {
    /// CSV path, relative paths resolved against the config file.
    pub table: PathBuf,
    pub extrapolation: Extrapolation,
}

/// How the theoretical uncertainty σ_theory is obtained per point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TheoryError {
    Absolute { sigma: f64 },
    Relative { fraction: f64 },
}

impl Default for TheoryError {
    fn default() -> Self {
        TheoryError::Absolute { sigma: 0.0 }
    }
}

impl TheoryError {
    pub fn sigma(&self, value: f64) -> f64 {
        match *self {
            TheoryError::Absolute { sigma } => sigma,
            TheoryError::Relative { fraction } => fraction * value.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareQuantity {
    /// Plate-plate pressure, Pa.
    #[default]
    Pressure,
    /// Sphere-plate force, N.
    SphereForce,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    /// CSV with columns a_nm, value, sigma_a_nm, sigma_value.
    pub experiment: PathBuf,
    #[serde(default)]
    pub quantity: CompareQuantity,
    #[serde(default)]
    pub theory_error: TheoryError,
    #[serde(default)]
    pub confidence: Option<String>,
}

/// Names of the three media for the liquid-gap repulsion ordering
/// ε1 < ε0 < ε2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepulsionConfig {
    pub eps0: String,
    pub eps1: String,
    pub eps2: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Optional; when given it must agree with the command-line scenario.
    #[serde(default)]
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub materials: BTreeMap<String, PlateMaterial>,
    /// Names of the two plate materials.
    #[serde(default)]
    pub plates: Option<[String; 2]>,
    /// Plate pair for the illuminated state in modulation-diff.
    #[serde(default)]
    pub light: Option<[String; 2]>,
    #[serde(default)]
    pub use_modified_tm: bool,
    #[serde(default)]
    pub temperature_k: Option<f64>,
    /// Fixed separation when the sweep runs over T or φ.
    #[serde(default)]
    pub separation_um: Option<f64>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub sphere: Option<SphereConfig>,
    #[serde(default)]
    pub corrugation: Option<CorrugationSpec>,
    #[serde(default)]
    pub atom: Option<AtomSpec>,
    #[serde(default)]
    pub wall: Option<String>,
    #[serde(default)]
    pub kk: Option<KkConfig>,
    #[serde(default)]
    pub compare: Option<CompareConfig>,
    #[serde(default)]
    pub repulsion: Option<RepulsionConfig>,
    /// Polynomial degree of the T → 0 entropy extrapolation.
    #[serde(default)]
    pub extrapolation_degree: Option<usize>,
    #[serde(default)]
    pub accuracy: Accuracy,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(vec![format!("cannot read {}: {e}", path.display())]))?;
        let mut config = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(kk) = &mut config.kk {
            kk.table = base.join(&kk.table);
        }
        if let Some(cmp) = &mut config.compare {
            cmp.experiment = base.join(&cmp.experiment);
        }
        Ok(config)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(vec![e.to_string()]))
    }

    pub fn material(&self, name: &str) -> &PlateMaterial {
        &self.materials[name]
    }

    pub fn plate_pair(&self) -> (&PlateMaterial, &PlateMaterial) {
        let [m1, m2] = self.plates.as_ref().expect("validated");
        (self.material(m1), self.material(m2))
    }

    /// Every violation for running `scenario`, empty when valid.
    pub fn violations(&self, scenario: Scenario) -> Vec<String> {
        let mut out = Vec::new();
        if self.version != CONFIG_VERSION {
            out.push(format!(
                "version {} is not supported (expected {CONFIG_VERSION})",
                self.version
            ));
        }
        if let Some(s) = self.scenario {
            if s != scenario {
                out.push(format!(
                    "config is for scenario {} but {} was requested",
                    s.name(),
                    scenario.name()
                ));
            }
        }
        for (name, m) in &self.materials {
            m.validate(&format!("materials.{name}"), &mut out);
        }
        self.accuracy.validate(&mut out);

        let require_pair =
            |field: &str, pair: &Option<[String; 2]>, out: &mut Vec<String>| match pair {
                None => out.push(format!("{field} is required for {}", scenario.name())),
                Some(names) => {
                    for n in names {
                        if !self.materials.contains_key(n) {
                            out.push(format!("{field} refers to unknown material {n:?}"));
                        }
                    }
                }
            };
        let require_temperature = |out: &mut Vec<String>| match self.temperature_k {
            None => out.push(format!("temperature_k is required for {}", scenario.name())),
            Some(t) if !(t > 0.0) => out.push("temperature_k must be > 0".into()),
            _ => {}
        };
        let require_separation = |out: &mut Vec<String>| match self.separation_um {
            None => out.push(format!("separation_um is required for {}", scenario.name())),
            Some(a) if !(a > 0.0) => out.push("separation_um must be > 0".into()),
            _ => {}
        };
        let require_sphere = |out: &mut Vec<String>| match self.sphere {
            None => out.push(format!("sphere is required for {}", scenario.name())),
            Some(s) if !(s.radius_um > 0.0) => out.push("sphere.radius_um must be > 0".into()),
            _ => {}
        };

        match (&self.sweep, scenario.axis()) {
            (None, _) => out.push(format!("sweep is required for {}", scenario.name())),
            (Some(sweep), Some(axis)) => {
                if sweep.axis != axis {
                    out.push(format!(
                        "sweep.axis must be {} for {}",
                        axis.column(),
                        scenario.name()
                    ));
                }
                sweep.validate(&mut out);
            }
            (Some(_), None) => {}
        }

        match scenario {
            Scenario::Pressure | Scenario::FreeEnergy => {
                require_pair("plates", &self.plates, &mut out);
                require_temperature(&mut out);
            }
            Scenario::SphereForce => {
                require_pair("plates", &self.plates, &mut out);
                require_temperature(&mut out);
                require_sphere(&mut out);
            }
            Scenario::Compare => {
                require_pair("plates", &self.plates, &mut out);
                require_temperature(&mut out);
                match &self.compare {
                    None => out.push("compare is required for compare".into()),
                    Some(c) => {
                        if c.quantity == CompareQuantity::SphereForce {
                            require_sphere(&mut out);
                        }
                        let bad = match c.theory_error {
                            TheoryError::Absolute { sigma } => !(sigma >= 0.0),
                            TheoryError::Relative { fraction } => !(fraction >= 0.0),
                        };
                        if bad {
                            out.push("compare.theory_error must be >= 0".into());
                        }
                    }
                }
            }
            Scenario::ModulationDiff => {
                require_pair("plates", &self.plates, &mut out);
                require_pair("light", &self.light, &mut out);
                require_temperature(&mut out);
                require_sphere(&mut out);
            }
            Scenario::Entropy => {
                require_pair("plates", &self.plates, &mut out);
                require_separation(&mut out);
                if let Some(d) = self.extrapolation_degree {
                    let n = self.sweep.map_or(0, |s| s.count);
                    if d == 0 || d >= n {
                        out.push(format!(
                            "extrapolation_degree must be between 1 and sweep.count - 1 ({})",
                            n.saturating_sub(1)
                        ));
                    }
                }
            }
            Scenario::Lateral => {
                require_pair("plates", &self.plates, &mut out);
                require_temperature(&mut out);
                require_separation(&mut out);
                require_sphere(&mut out);
                match &self.corrugation {
                    None => out.push("corrugation is required for lateral".into()),
                    Some(c) => {
                        if !(c.a1_nm >= 0.0) || !(c.a2_nm >= 0.0) {
                            out.push("corrugation amplitudes must be >= 0".into());
                        }
                        if !(c.period_nm > 0.0) {
                            out.push("corrugation.period_nm must be > 0".into());
                        }
                    }
                }
                if let Some([m1, m2]) = &self.plates {
                    if self.materials.get(m1) != self.materials.get(m2) {
                        out.push("lateral requires both plates to be the same material".into());
                    }
                }
            }
            Scenario::AtomWall => {
                require_temperature(&mut out);
                match &self.atom {
                    None => out.push("atom is required for atom-wall".into()),
                    Some(atom) => {
                        if !(atom.alpha0 > 0.0) {
                            out.push("atom.alpha0 must be > 0".into());
                        }
                        if !(atom.beta0 >= 0.0) {
                            out.push("atom.beta0 must be >= 0".into());
                        }
                        for (field, w) in [("omega_a", atom.omega_a), ("omega_b", atom.omega_b)] {
                            if w.is_some_and(|w| !(w > 0.0)) {
                                out.push(format!("atom.{field} must be > 0"));
                            }
                        }
                    }
                }
                match &self.wall {
                    None => out.push("wall is required for atom-wall".into()),
                    Some(w) if !self.materials.contains_key(w) => {
                        out.push(format!("wall refers to unknown material {w:?}"))
                    }
                    _ => {}
                }
            }
            Scenario::KkTransform => {
                if self.kk.is_none() {
                    out.push("kk is required for kk-transform".into());
                }
            }
            Scenario::RepulsionCheck => {
                require_temperature(&mut out);
                match &self.repulsion {
                    None => out.push("repulsion is required for repulsion-check".into()),
                    Some(r) => {
                        for (field, n) in [("eps0", &r.eps0), ("eps1", &r.eps1), ("eps2", &r.eps2)]
                        {
                            if !self.materials.contains_key(n) {
                                out.push(format!(
                                    "repulsion.{field} refers to unknown material {n:?}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self, scenario: Scenario) -> Result<(), CliError> {
        let v = self.violations(scenario);
        if v.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(v))
        }
    }

    pub fn permittivity(&self, name: &str) -> &PermittivityModel {
        &self.material(name).permittivity
    }
}
