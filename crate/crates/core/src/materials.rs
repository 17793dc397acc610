//! Dielectric permittivity and magnetic permeability along the imaginary
//! frequency axis.
//!
//! Every model is evaluated at ω = iξ with ξ in eV, where all of them are real
//! and monotonically decreasing. The zero-frequency behaviour needed by the
//! Matsubara l = 0 term is exposed separately through [`StaticResponse`]
//! because several models diverge there.

use crate::error::{CasimirError, Result};
use serde::{Deserialize, Serialize};

/// One Lorentz oscillator of the bound (core) electron response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oscillator {
    /// Oscillator strength g_j, eV².
    #[serde(rename = "g")]
    pub strength: f64,
    /// Resonance frequency ω_j, eV.
    #[serde(rename = "omega")]
    pub frequency: f64,
    /// Damping γ_j, eV.
    #[serde(rename = "gamma", default)]
    pub damping: f64,
}

/// Core-electron permittivity ε_c(iξ) = 1 + Σ g_j / (ω_j² + ξ² + γ_j ξ).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSet {
    #[serde(default)]
    pub oscillators: Vec<Oscillator>,
}

impl OscillatorSet {
    pub fn new(oscillators: Vec<Oscillator>) -> Self {
        OscillatorSet { oscillators }
    }

    /// Single oscillator with the given static permittivity ε(0) and
    /// resonance frequency (eV), undamped.
    pub fn single(static_eps: f64, frequency: f64) -> Self {
        OscillatorSet::new(vec![Oscillator {
            strength: (static_eps - 1.0) * frequency * frequency,
            frequency,
            damping: 0.0,
        }])
    }

    pub fn eval(&self, xi: f64) -> f64 {
        1.0 + self
            .oscillators
            .iter()
            .map(|o| o.strength / (o.frequency * o.frequency + xi * xi + o.damping * xi))
            .sum::<f64>()
    }

    /// ε_c(0).
    pub fn static_value(&self) -> f64 {
        self.eval(0.0)
    }

    pub fn validate(&self, path: &str, out: &mut Vec<String>) {
        for (i, o) in self.oscillators.iter().enumerate() {
            if !(o.frequency > 0.0) {
                out.push(format!("{path}.oscillators[{i}].omega must be > 0"));
            }
            if !(o.strength >= 0.0) {
                out.push(format!("{path}.oscillators[{i}].g must be >= 0"));
            }
            if !(o.damping >= 0.0) {
                out.push(format!("{path}.oscillators[{i}].gamma must be >= 0"));
            }
        }
    }
}

/// Evaluates the core permittivity (same as [`OscillatorSet::eval`]).
pub fn eval_eps_core(osc: &OscillatorSet, xi: f64) -> f64 {
    osc.eval(xi)
}

/// Reflection contrast of a dielectric at zero frequency,
/// r0 = (ε_c(0) - 1)/(ε_c(0) + 1).
pub fn static_contrast(osc: &OscillatorSet) -> f64 {
    contrast(osc.static_value())
}

pub(crate) fn contrast(eps0: f64) -> f64 {
    (eps0 - 1.0) / (eps0 + 1.0)
}

/// Relaxation parameter γ(T) of a Drude metal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Relaxation {
    Constant(f64),
    /// γ(T) = gamma_ref · (T / t_ref)^exponent; exponent 2 models a perfect
    /// lattice at low temperature.
    PowerLaw {
        gamma_ref: f64,
        t_ref: f64,
        exponent: f64,
    },
}

impl Relaxation {
    pub fn at(&self, temperature: f64) -> f64 {
        match *self {
            Relaxation::Constant(g) => g,
            Relaxation::PowerLaw {
                gamma_ref,
                t_ref,
                exponent,
            } => gamma_ref * (temperature / t_ref).powf(exponent),
        }
    }

    fn validate(&self, path: &str, out: &mut Vec<String>) {
        match *self {
            Relaxation::Constant(g) if !(g >= 0.0) => out.push(format!("{path} must be >= 0")),
            Relaxation::PowerLaw {
                gamma_ref, t_ref, ..
            } => {
                if !(gamma_ref >= 0.0) {
                    out.push(format!("{path}.gamma_ref must be >= 0"));
                }
                if !(t_ref > 0.0) {
                    out.push(format!("{path}.t_ref must be > 0"));
                }
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeParams {
    /// Plasma frequency, eV.
    pub omega_p: f64,
    /// Relaxation parameter, eV.
    pub gamma: Relaxation,
    /// Optional bound-electron background; empty means ε_c = 1.
    #[serde(default)]
    pub core: OscillatorSet,
}

impl DrudeParams {
    pub fn new(omega_p: f64, gamma: f64) -> Self {
        DrudeParams {
            omega_p,
            gamma: Relaxation::Constant(gamma),
            core: OscillatorSet::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlasmaParams {
    pub omega_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralizedPlasma {
    pub core: OscillatorSet,
    pub omega_p: f64,
}

/// dc conductivity σ0(T) in eV (so that 4πσ0/ξ is dimensionless).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Conductivity {
    Constant(f64),
    /// (T in K, σ0 in eV) samples, linearly interpolated in ln T and clamped
    /// outside the sampled range.
    Table(Vec<(f64, f64)>),
}

impl Conductivity {
    pub fn at(&self, temperature: f64) -> f64 {
        match self {
            Conductivity::Constant(s) => *s,
            Conductivity::Table(rows) => {
                let x = temperature.ln();
                interpolate_clamped(rows, x, |t| t.ln())
            }
        }
    }

    fn validate(&self, path: &str, out: &mut Vec<String>) {
        match self {
            Conductivity::Constant(s) if !(*s >= 0.0) => out.push(format!("{path} must be >= 0")),
            Conductivity::Table(rows) => {
                if rows.is_empty() {
                    out.push(format!("{path} table is empty"));
                }
                check_table(rows, path, out, true);
                if rows.iter().any(|r| !(r.1 >= 0.0)) {
                    out.push(format!("{path} values must be >= 0"));
                }
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcConductivity {
    pub core: OscillatorSet,
    pub sigma0: Conductivity,
}

/// Dielectric matrix with a volume fraction f of ferromagnetic inclusions:
/// ε = ε_base · (1 + 3f/(1 - f)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FerroDielectricMix {
    pub base: Box<PermittivityModel>,
    pub f: f64,
}

impl FerroDielectricMix {
    pub fn multiplier(&self) -> f64 {
        1.0 + 3.0 * self.f / (1.0 - self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PermittivityModel {
    /// Bound electrons only.
    Dielectric(OscillatorSet),
    DcConductivity(DcConductivity),
    Drude(DrudeParams),
    Plasma(PlasmaParams),
    GeneralizedPlasma(GeneralizedPlasma),
    FerroDielectricMix(FerroDielectricMix),
}

/// Zero-frequency character of a permittivity model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticResponse {
    /// Finite ε(0).
    Dielectric { eps0: f64 },
    /// ε diverges while ε·ξ² → 0 (dissipative carriers): TM → 1, TE sees
    /// no carrier contribution.
    Conductor,
    /// ε·ξ² → ω_p²: TM → 1 and a finite TE limit.
    PlasmaLike { omega_p: f64 },
}

impl PermittivityModel {
    pub fn name(&self) -> &'static str {
        match self {
            PermittivityModel::Dielectric(_) => "dielectric",
            PermittivityModel::DcConductivity(_) => "dc-conductivity",
            PermittivityModel::Drude(_) => "drude",
            PermittivityModel::Plasma(_) => "plasma",
            PermittivityModel::GeneralizedPlasma(_) => "generalized-plasma",
            PermittivityModel::FerroDielectricMix(_) => "ferro-dielectric-mix",
        }
    }

    pub fn plasma(omega_p: f64) -> Self {
        PermittivityModel::Plasma(PlasmaParams { omega_p })
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Self {
        PermittivityModel::Drude(DrudeParams::new(omega_p, gamma))
    }

    pub fn dielectric(core: OscillatorSet) -> Self {
        PermittivityModel::Dielectric(core)
    }

    /// ε(iξ) at temperature T.
    pub fn eval(&self, xi: f64, temperature: f64) -> Result<f64> {
        let diverges = || CasimirError::Domain {
            model: self.name(),
            xi,
        };
        Ok(match self {
            PermittivityModel::Dielectric(core) => core.eval(xi),
            PermittivityModel::DcConductivity(dc) => {
                if xi <= 0.0 {
                    return Err(diverges());
                }
                dc.core.eval(xi) + 4.0 * std::f64::consts::PI * dc.sigma0.at(temperature) / xi
            }
            PermittivityModel::Drude(d) => {
                if xi <= 0.0 {
                    return Err(diverges());
                }
                let gamma = d.gamma.at(temperature);
                d.core.eval(xi) + d.omega_p * d.omega_p / (xi * (xi + gamma))
            }
            PermittivityModel::Plasma(p) => {
                if xi <= 0.0 {
                    return Err(diverges());
                }
                1.0 + p.omega_p * p.omega_p / (xi * xi)
            }
            PermittivityModel::GeneralizedPlasma(g) => {
                if xi <= 0.0 {
                    return Err(diverges());
                }
                g.core.eval(xi) + g.omega_p * g.omega_p / (xi * xi)
            }
            PermittivityModel::FerroDielectricMix(m) => {
                m.base.eval(xi, temperature)? * m.multiplier()
            }
        })
    }

    /// Bound-electron part ε_c(iξ): the model with its free-carrier term
    /// removed. Models without a separate carrier term return themselves.
    pub fn core_eval(&self, xi: f64) -> f64 {
        match self {
            PermittivityModel::DcConductivity(dc) => dc.core.eval(xi),
            PermittivityModel::Drude(d) => d.core.eval(xi),
            PermittivityModel::GeneralizedPlasma(g) => g.core.eval(xi),
            PermittivityModel::Plasma(_) => 1.0,
            PermittivityModel::FerroDielectricMix(m) => m.base.core_eval(xi) * m.multiplier(),
            PermittivityModel::Dielectric(core) => core.eval(xi),
        }
    }

    pub fn has_dissipative_carriers(&self) -> bool {
        match self {
            PermittivityModel::DcConductivity(_) | PermittivityModel::Drude(_) => true,
            PermittivityModel::FerroDielectricMix(m) => m.base.has_dissipative_carriers(),
            _ => false,
        }
    }

    pub fn static_response(&self, temperature: f64) -> StaticResponse {
        match self {
            PermittivityModel::Dielectric(core) => StaticResponse::Dielectric {
                eps0: core.static_value(),
            },
            PermittivityModel::DcConductivity(dc) => {
                if dc.sigma0.at(temperature) > 0.0 {
                    StaticResponse::Conductor
                } else {
                    StaticResponse::Dielectric {
                        eps0: dc.core.static_value(),
                    }
                }
            }
            PermittivityModel::Drude(d) => {
                if d.gamma.at(temperature) > 0.0 {
                    StaticResponse::Conductor
                } else {
                    StaticResponse::PlasmaLike { omega_p: d.omega_p }
                }
            }
            PermittivityModel::Plasma(p) => StaticResponse::PlasmaLike { omega_p: p.omega_p },
            PermittivityModel::GeneralizedPlasma(g) => {
                StaticResponse::PlasmaLike { omega_p: g.omega_p }
            }
            PermittivityModel::FerroDielectricMix(m) => {
                let k = m.multiplier();
                match m.base.static_response(temperature) {
                    StaticResponse::Dielectric { eps0 } => {
                        StaticResponse::Dielectric { eps0: eps0 * k }
                    }
                    StaticResponse::Conductor => StaticResponse::Conductor,
                    StaticResponse::PlasmaLike { omega_p } => StaticResponse::PlasmaLike {
                        omega_p: omega_p * k.sqrt(),
                    },
                }
            }
        }
    }

    pub fn validate(&self, path: &str, out: &mut Vec<String>) {
        let positive = |v: f64, name: &str, out: &mut Vec<String>| {
            if !(v > 0.0) {
                out.push(format!("{path}.{name} must be > 0"));
            }
        };
        match self {
            PermittivityModel::Dielectric(core) => core.validate(path, out),
            PermittivityModel::DcConductivity(dc) => {
                dc.core.validate(&format!("{path}.core"), out);
                dc.sigma0.validate(&format!("{path}.sigma0"), out);
            }
            PermittivityModel::Drude(d) => {
                positive(d.omega_p, "omega_p", out);
                d.gamma.validate(&format!("{path}.gamma"), out);
                d.core.validate(&format!("{path}.core"), out);
            }
            PermittivityModel::Plasma(p) => positive(p.omega_p, "omega_p", out),
            PermittivityModel::GeneralizedPlasma(g) => {
                positive(g.omega_p, "omega_p", out);
                g.core.validate(&format!("{path}.core"), out);
            }
            PermittivityModel::FerroDielectricMix(m) => {
                if !(0.0..1.0).contains(&m.f) {
                    out.push(format!("{path}.f must satisfy 0 <= f < 1"));
                }
                m.base.validate(&format!("{path}.base"), out);
            }
        }
    }
}

/// Free function form of [`PermittivityModel::eval`].
pub fn eval_eps(model: &PermittivityModel, xi: f64, temperature: f64) -> Result<f64> {
    model.eval(xi, temperature)
}

/// Static magnetic permeability, applied only to the zero-frequency
/// Matsubara term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagneticModel {
    #[serde(default = "one")]
    pub mu0: f64,
    /// Curie temperature, K. At or above it the material is nonmagnetic.
    #[serde(default)]
    pub curie_temperature: Option<f64>,
    /// (T in K, μ(0)) samples, piecewise linear, clamped at the ends.
    /// Takes precedence over `mu0` when present.
    #[serde(default)]
    pub mu_table: Option<Vec<(f64, f64)>>,
}

fn one() -> f64 {
    1.0
}

impl Default for MagneticModel {
    fn default() -> Self {
        MagneticModel::nonmagnetic()
    }
}

impl MagneticModel {
    pub fn nonmagnetic() -> Self {
        MagneticModel {
            mu0: 1.0,
            curie_temperature: None,
            mu_table: None,
        }
    }

    pub fn with_mu0(mu0: f64) -> Self {
        MagneticModel {
            mu0,
            ..MagneticModel::nonmagnetic()
        }
    }

    pub fn is_magnetic(&self) -> bool {
        self.mu0 != 1.0
            || self
                .mu_table
                .as_ref()
                .is_some_and(|t| t.iter().any(|r| r.1 != 1.0))
    }

    /// μ(iξ_l) at temperature T.
    pub fn eval(&self, l: usize, temperature: f64) -> f64 {
        if l > 0 {
            return 1.0;
        }
        if let Some(tc) = self.curie_temperature {
            if temperature >= tc {
                return 1.0;
            }
        }
        match &self.mu_table {
            Some(rows) if !rows.is_empty() => interpolate_clamped(rows, temperature, |t| t),
            _ => self.mu0,
        }
    }

    pub fn validate(&self, path: &str, out: &mut Vec<String>) {
        if !(self.mu0 >= 1.0) {
            out.push(format!("{path}.mu0 must be >= 1"));
        }
        if let Some(tc) = self.curie_temperature {
            if !(tc > 0.0) {
                out.push(format!("{path}.curie_temperature must be > 0"));
            }
        }
        if let Some(rows) = &self.mu_table {
            if rows.is_empty() {
                out.push(format!("{path}.mu_table is empty"));
            }
            check_table(rows, &format!("{path}.mu_table"), out, true);
            if rows.iter().any(|r| !(r.1 >= 1.0)) {
                out.push(format!("{path}.mu_table values must be >= 1"));
            }
        }
    }
}

pub fn eval_mu(mag: &MagneticModel, l: usize, temperature: f64) -> f64 {
    mag.eval(l, temperature)
}

/// One half-space: permittivity, permeability and optional screening.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateMaterial {
    pub permittivity: PermittivityModel,
    #[serde(default)]
    pub magnetic: MagneticModel,
    /// Inverse screening length κ expressed as ħcκ, eV.
    #[serde(default)]
    pub screening: Option<f64>,
}

impl PlateMaterial {
    pub fn new(permittivity: PermittivityModel) -> Self {
        PlateMaterial {
            permittivity,
            magnetic: MagneticModel::nonmagnetic(),
            screening: None,
        }
    }

    pub fn with_magnetic(mut self, magnetic: MagneticModel) -> Self {
        self.magnetic = magnetic;
        self
    }

    pub fn with_screening(mut self, kappa_ev: f64) -> Self {
        self.screening = Some(kappa_ev);
        self
    }

    /// Same material with μ ≡ 1.
    pub fn without_magnetism(&self) -> Self {
        PlateMaterial {
            magnetic: MagneticModel::nonmagnetic(),
            ..self.clone()
        }
    }

    pub fn validate(&self, path: &str, out: &mut Vec<String>) {
        self.permittivity
            .validate(&format!("{path}.permittivity"), out);
        self.magnetic.validate(&format!("{path}.magnetic"), out);
        if let Some(kappa) = self.screening {
            if !(kappa > 0.0) {
                out.push(format!("{path}.screening must be > 0"));
            }
            if !self.permittivity.has_dissipative_carriers() {
                out.push(format!(
                    "{path}.screening requires a drude or dc-conductivity permittivity"
                ));
            }
        }
    }
}

fn check_table(rows: &[(f64, f64)], path: &str, out: &mut Vec<String>, positive_x: bool) {
    if positive_x && rows.iter().any(|r| !(r.0 > 0.0)) {
        out.push(format!("{path} temperatures must be > 0"));
    }
    if rows.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        out.push(format!("{path} temperatures must be strictly increasing"));
    }
}

/// Piecewise-linear interpolation of `rows` in the transformed abscissa
/// `map(x)`, clamped to the end values.
fn interpolate_clamped(rows: &[(f64, f64)], x: f64, map: impl Fn(f64) -> f64) -> f64 {
    let first = rows[0];
    let last = rows[rows.len() - 1];
    if x <= map(first.0) {
        return first.1;
    }
    if x >= map(last.0) {
        return last.1;
    }
    let i = rows.partition_point(|r| map(r.0) <= x);
    let (x0, y0) = (map(rows[i - 1].0), rows[i - 1].1);
    let (x1, y1) = (map(rows[i].0), rows[i].1);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn osc(g: f64, w: f64, gamma: f64) -> OscillatorSet {
        OscillatorSet::new(vec![Oscillator {
            strength: g,
            frequency: w,
            damping: gamma,
        }])
    }

    #[test]
    fn core_permittivity_examples() {
        assert_eq!(eval_eps_core(&OscillatorSet::default(), 3.7), 1.0);
        assert_eq!(eval_eps_core(&osc(3.0, 1.0, 0.0), 0.0), 4.0);
        assert_eq!(eval_eps_core(&osc(3.0, 1.0, 1.0), 1.0), 2.0);
    }

    #[test]
    fn drude_gold_at_nine_ev() {
        let eps = eval_eps(&PermittivityModel::drude(9.0, 0.035), 9.0, 300.0).unwrap();
        assert_relative_eq!(eps, 1.0 + 81.0 / (9.0 * 9.035), max_relative = 1e-15);
        assert!((eps - 1.9961).abs() < 1e-4);
    }

    #[test]
    fn plasma_at_its_own_frequency() {
        let eps = eval_eps(&PermittivityModel::plasma(4.2), 4.2, 300.0).unwrap();
        assert_relative_eq!(eps, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn ferro_mixture_doubles_polystyrene() {
        let base = PermittivityModel::dielectric(OscillatorSet::single(2.56, 8.0));
        let mix = PermittivityModel::FerroDielectricMix(FerroDielectricMix {
            base: Box::new(base),
            f: 0.25,
        });
        assert_relative_eq!(mix.eval(0.0, 300.0).unwrap(), 5.12, max_relative = 1e-14);
        assert_eq!(
            mix.static_response(300.0),
            StaticResponse::Dielectric { eps0: 5.12 }
        );
    }

    #[test]
    fn divergent_models_reject_zero_frequency() {
        for m in [
            PermittivityModel::drude(9.0, 0.035),
            PermittivityModel::plasma(9.0),
            PermittivityModel::DcConductivity(DcConductivity {
                core: osc(3.0, 1.0, 0.0),
                sigma0: Conductivity::Constant(1e-6),
            }),
        ] {
            assert!(matches!(
                m.eval(0.0, 300.0),
                Err(CasimirError::Domain { .. })
            ));
        }
    }

    #[test]
    fn permeability_rules() {
        let co = MagneticModel::with_mu0(70.0);
        assert_eq!(eval_mu(&co, 0, 300.0), 70.0);
        assert_eq!(eval_mu(&co, 1, 300.0), 1.0);
        let gd = MagneticModel {
            mu0: 25.0,
            curie_temperature: Some(290.0),
            mu_table: None,
        };
        assert_eq!(eval_mu(&gd, 0, 300.0), 1.0);
        assert_eq!(eval_mu(&gd, 0, 280.0), 25.0);
    }

    #[test]
    fn permeability_table_is_piecewise_linear() {
        let m = MagneticModel {
            mu0: 1.0,
            curie_temperature: Some(293.0),
            mu_table: Some(vec![(270.0, 40.0), (280.0, 30.0), (290.0, 10.0)]),
        };
        assert_relative_eq!(m.eval(0, 275.0), 35.0);
        assert_relative_eq!(m.eval(0, 285.0), 20.0);
        assert_eq!(m.eval(0, 260.0), 40.0);
        assert_eq!(m.eval(0, 292.0), 10.0);
        assert_eq!(m.eval(0, 295.0), 1.0);
    }

    #[test]
    fn conductivity_interpolates_in_log_temperature() {
        let s = Conductivity::Table(vec![(10.0, 1.0), (1000.0, 3.0)]);
        assert_relative_eq!(s.at(100.0), 2.0, max_relative = 1e-14);
        assert_eq!(s.at(1.0), 1.0);
    }

    #[test]
    fn static_contrast_examples() {
        assert_eq!(static_contrast(&OscillatorSet::default()), 0.0);
        assert_relative_eq!(
            static_contrast(&OscillatorSet::single(3.0, 5.0)),
            0.5,
            max_relative = 1e-14
        );
        let r0 = static_contrast(&OscillatorSet::single(2.56, 5.0));
        assert!((r0 - 0.4382).abs() < 1e-4);
    }

    #[test]
    fn screening_requires_free_carriers() {
        let mut v = Vec::new();
        PlateMaterial::new(PermittivityModel::plasma(9.0))
            .with_screening(1.0)
            .validate("m", &mut v);
        assert_eq!(v.len(), 1);
        let mut v = Vec::new();
        PlateMaterial::new(PermittivityModel::drude(9.0, 0.035))
            .with_screening(1.0)
            .validate("m", &mut v);
        assert!(v.is_empty());
    }

    #[test]
    fn config_round_trip_of_every_variant() {
        let json = r#"[
            {"model": "dielectric", "oscillators": [{"g": 3.0, "omega": 1.0, "gamma": 0.1}]},
            {"model": "dc-conductivity", "core": {"oscillators": []}, "sigma0": 1e-9},
            {"model": "drude", "omega_p": 9.0, "gamma": 0.035},
            {"model": "drude", "omega_p": 9.0, "gamma": {"gamma_ref": 0.035, "t_ref": 300.0, "exponent": 2.0}},
            {"model": "plasma", "omega_p": 9.0},
            {"model": "generalized-plasma", "omega_p": 9.0, "core": {"oscillators": [{"g": 10.0, "omega": 3.0}]}},
            {"model": "ferro-dielectric-mix", "f": 0.25, "base": {"model": "dielectric", "oscillators": []}}
        ]"#;
        let models: Vec<PermittivityModel> = serde_json::from_str(json).unwrap();
        assert_eq!(models.len(), 7);
        let back: Vec<PermittivityModel> =
            serde_json::from_str(&serde_json::to_string(&models).unwrap()).unwrap();
        assert_eq!(models, back);
    }

    #[test]
    fn missing_plasma_frequency_is_named() {
        let err = serde_json::from_str::<PermittivityModel>(r#"{"model": "drude", "gamma": 0.03}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("omega_p"), "{err}");
    }

    fn any_core() -> impl Strategy<Value = OscillatorSet> {
        prop::collection::vec((0.0..50.0f64, 0.05..20.0f64, 0.0..2.0f64), 0..4).prop_map(|v| {
            OscillatorSet::new(
                v.into_iter()
                    .map(|(g, w, d)| Oscillator {
                        strength: g,
                        frequency: w,
                        damping: d,
                    })
                    .collect(),
            )
        })
    }

    fn any_model() -> impl Strategy<Value = PermittivityModel> {
        let core = any_core();
        (core, 0.1..15.0f64, 0.0..0.5f64, 0usize..6, 0.0..0.9f64).prop_map(
            |(core, wp, g, kind, f)| match kind {
                0 => PermittivityModel::Dielectric(core),
                1 => PermittivityModel::DcConductivity(DcConductivity {
                    core,
                    sigma0: Conductivity::Constant(g * 1e-3),
                }),
                2 => PermittivityModel::Drude(DrudeParams {
                    omega_p: wp,
                    gamma: Relaxation::Constant(g),
                    core,
                }),
                3 => PermittivityModel::plasma(wp),
                4 => PermittivityModel::GeneralizedPlasma(GeneralizedPlasma { core, omega_p: wp }),
                _ => PermittivityModel::FerroDielectricMix(FerroDielectricMix {
                    base: Box::new(PermittivityModel::Dielectric(core)),
                    f,
                }),
            },
        )
    }

    proptest! {
        #[test]
        fn permittivity_decreases_along_imaginary_axis(m in any_model(), x1 in 1e-4..50.0f64, dx in 1e-6..50.0f64) {
            let e1 = m.eval(x1, 300.0).unwrap();
            let e2 = m.eval(x1 + dx, 300.0).unwrap();
            prop_assert!(e2 <= e1);
            prop_assert!(e2 >= 1.0);
        }

        #[test]
        fn generalized_plasma_is_plasma_plus_core(core in any_core(), wp in 0.1..15.0f64, xi in 1e-4..50.0f64) {
            let g = PermittivityModel::GeneralizedPlasma(GeneralizedPlasma { core: core.clone(), omega_p: wp });
            let p = PermittivityModel::plasma(wp);
            let lhs = g.eval(xi, 300.0).unwrap();
            let rhs = p.eval(xi, 300.0).unwrap() + (eval_eps_core(&core, xi) - 1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs);
        }

        #[test]
        fn permeability_is_unity_above_zero_frequency(mu0 in 1.0..1e4f64, l in 1usize..10_000, t in 0.1..2000.0f64) {
            prop_assert_eq!(MagneticModel::with_mu0(mu0).eval(l, t), 1.0);
        }

        #[test]
        fn zero_fraction_mixture_is_identity(core in any_core(), xi in 0.0..50.0f64) {
            let base = PermittivityModel::Dielectric(core);
            let mix = PermittivityModel::FerroDielectricMix(FerroDielectricMix { base: Box::new(base.clone()), f: 0.0 });
            prop_assert_eq!(mix.eval(xi, 300.0).unwrap(), base.eval(xi, 300.0).unwrap());
        }
    }
}
