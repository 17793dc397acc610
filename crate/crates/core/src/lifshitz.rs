//! Matsubara summation and transverse-momentum quadrature for plate-plate
//! and atom-plate configurations.
//!
//! Internally every integral runs over y = 2aq ∈ [ζ_l, ∞) with
//! ζ_l = 2aξ_l/ħc, so that all integrands decay like e^{-y}.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CasimirError, Result};
use crate::geometry::{pfa_sphere_force, SphereSpec};
use crate::materials::PlateMaterial;
use crate::quadrature::{Adaptive, Integral, NeumaierSum};
use crate::reflection::Reflector;
use crate::special::li3;
use crate::units::{
    matsubara_xi_ev, reduced_frequency, thermal_energy_ev, EV_TO_J, HBAR_C_EV_NM, K_B_J, ZETA3,
};

/// Width of the finite y-interval integrated numerically above ζ_l.
pub(crate) const Y_SPAN: f64 = 60.0;
const Y_BREAKS: [f64; 7] = [0.0, 0.5, 2.0, 6.0, 15.0, 30.0, Y_SPAN];

/// Consecutive negligible terms required before the Matsubara sum stops.
const QUIET_TERMS: usize = 3;

/// Temperature, Matsubara frequencies and truncation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatsubaraGrid {
    pub temperature: f64,
    /// Hard cap on the Matsubara index.
    pub l_max: usize,
    /// A term is negligible when below `tail_tol` times the running sum.
    pub tail_tol: f64,
    /// Relative tolerance of each y-integral.
    pub quad_tol: f64,
    /// Sum exactly this many terms (l = 0..n) with no tail correction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_terms: Option<usize>,
}

impl MatsubaraGrid {
    pub fn new(temperature: f64) -> Self {
        MatsubaraGrid {
            temperature,
            l_max: 200_000,
            tail_tol: 1e-8,
            quad_tol: 1e-9,
            fixed_terms: None,
        }
    }

    pub fn with_temperature(&self, temperature: f64) -> Self {
        MatsubaraGrid {
            temperature,
            ..*self
        }
    }

    pub fn xi(&self, l: usize) -> f64 {
        matsubara_xi_ev(self.temperature, l)
    }

    fn quadrature(&self) -> Adaptive {
        Adaptive::with_rel_tol(self.quad_tol)
    }

    fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(CasimirError::InvalidInput(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        if !(self.tail_tol > 0.0) || !(self.quad_tol > 0.0) {
            return Err(CasimirError::InvalidInput(
                "tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Two plates across a vacuum gap of `separation_nm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlatePairSpec {
    pub mat1: PlateMaterial,
    pub mat2: PlateMaterial,
    pub separation_nm: f64,
    #[serde(default)]
    pub use_modified_tm: bool,
}

impl PlatePairSpec {
    pub fn new(mat1: PlateMaterial, mat2: PlateMaterial, separation_nm: f64) -> Self {
        PlatePairSpec {
            mat1,
            mat2,
            separation_nm,
            use_modified_tm: false,
        }
    }

    pub fn symmetric(mat: PlateMaterial, separation_nm: f64) -> Self {
        PlatePairSpec::new(mat.clone(), mat, separation_nm)
    }

    pub fn at_separation(&self, separation_nm: f64) -> Self {
        PlatePairSpec {
            separation_nm,
            ..self.clone()
        }
    }

    pub fn with_modified_tm(mut self) -> Self {
        self.use_modified_tm = true;
        self
    }

    /// The same pair with both plates' magnetic response switched off.
    pub fn without_magnetism(&self) -> Self {
        PlatePairSpec {
            mat1: self.mat1.without_magnetism(),
            mat2: self.mat2.without_magnetism(),
            ..self.clone()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.separation_nm > 0.0) || !self.separation_nm.is_finite() {
            return Err(CasimirError::InvalidInput(format!(
                "separation must be positive, got {} nm",
                self.separation_nm
            )));
        }
        Ok(())
    }

    pub(crate) fn reflectors(
        &self,
        l: usize,
        xi: f64,
        temperature: f64,
    ) -> Result<(Reflector, Reflector)> {
        Ok((
            Reflector::new(&self.mat1, l, xi, temperature, self.use_modified_tm)?,
            Reflector::new(&self.mat2, l, xi, temperature, self.use_modified_tm)?,
        ))
    }
}

/// An atom with single-oscillator electric polarizability and magnetic
/// susceptibility, both in nm³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub alpha0: f64,
    /// Characteristic frequency in eV; `None` keeps α static.
    #[serde(default)]
    pub omega_a: Option<f64>,
    #[serde(default)]
    pub beta0: f64,
    #[serde(default)]
    pub omega_b: Option<f64>,
}

impl AtomSpec {
    pub fn static_alpha(alpha0_nm3: f64) -> Self {
        AtomSpec {
            alpha0: alpha0_nm3,
            omega_a: None,
            beta0: 0.0,
            omega_b: None,
        }
    }

    /// Polarizability given in cm³ (Gaussian units).
    pub fn from_cm3(alpha0_cm3: f64, omega_a: Option<f64>) -> Self {
        AtomSpec {
            omega_a,
            ..AtomSpec::static_alpha(alpha0_cm3 * crate::units::CM3_TO_NM3)
        }
    }

    pub fn alpha(&self, xi: f64) -> f64 {
        oscillator(self.alpha0, self.omega_a, xi)
    }

    pub fn beta(&self, xi: f64) -> f64 {
        oscillator(self.beta0, self.omega_b, xi)
    }
}

fn oscillator(strength: f64, omega: Option<f64>, xi: f64) -> f64 {
    match omega {
        Some(w) => strength * w * w / (w * w + xi * xi),
        None => strength,
    }
}

/// Result of a Matsubara-summed quantity with its convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeEnergyResult {
    /// J/m², Pa, J or N depending on the quantity.
    pub value: f64,
    /// Matsubara terms summed explicitly (indices 0..terms_used).
    pub terms_used: usize,
    /// Accumulated quadrature error estimate, same unit as `value`.
    pub quadrature_error: f64,
    /// Geometric tail added after truncation, same unit as `value`.
    pub truncation_tail: f64,
    /// The zero-frequency TM term was taken from a small-ξ probe.
    pub zero_frequency_probe: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SumOutcome {
    pub value: f64,
    pub error: f64,
    pub terms: usize,
    pub tail: f64,
}

/// Σ′ over Matsubara terms. `term(l)` returns the unweighted term and its
/// error; the l = 0 half weight is applied here. Terms are evaluated in
/// parallel blocks and reduced in ascending l.
pub(crate) fn matsubara_sum<F>(
    grid: &MatsubaraGrid,
    separation_nm: f64,
    term: F,
) -> Result<SumOutcome>
where
    F: Fn(usize) -> Result<Integral> + Sync,
{
    let weight = |l: usize| if l == 0 { 0.5 } else { 1.0 };
    let eval = |l: usize| {
        term(l)
            .map(|i| (weight(l) * i.value, weight(l) * i.error))
            .map_err(|e| e.at(l, separation_nm))
    };

    if let Some(n) = grid.fixed_terms {
        let values: Vec<(f64, f64)> = (0..n).into_par_iter().map(eval).collect::<Result<_>>()?;
        let mut sum = NeumaierSum::default();
        let mut error = 0.0;
        for (v, e) in values {
            sum.add(v);
            error += e;
        }
        return Ok(SumOutcome {
            value: sum.total(),
            error,
            terms: n,
            tail: 0.0,
        });
    }

    let mut sum = NeumaierSum::default();
    let mut error = 0.0;
    let mut quiet = 0;
    let mut last = [0.0f64; 2];
    let mut next = 0usize;
    let mut block = 8usize;
    while next <= grid.l_max {
        let end = (next + block).min(grid.l_max + 1);
        let values: Vec<(f64, f64)> = (next..end)
            .into_par_iter()
            .map(eval)
            .collect::<Result<_>>()?;
        for (offset, (v, e)) in values.into_iter().enumerate() {
            sum.add(v);
            error += e;
            last = [last[1], v];
            let total = sum.total();
            if v.abs() <= grid.tail_tol * total.abs() {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= QUIET_TERMS {
                let tail = geometric_tail(last[0], last[1]);
                return Ok(SumOutcome {
                    value: total + tail,
                    error: error + tail.abs(),
                    terms: next + offset + 1,
                    tail,
                });
            }
        }
        next = end;
        block = (block * 2).min(4096);
    }
    Err(CasimirError::TruncationFailure {
        l: grid.l_max,
        separation_nm,
        temperature_k: grid.temperature,
    })
}

fn geometric_tail(previous: f64, last: f64) -> f64 {
    if previous == 0.0 || last == 0.0 {
        return 0.0;
    }
    let ratio = last / previous;
    if ratio > 0.0 && ratio < 1.0 {
        last * ratio / (1.0 - ratio)
    } else {
        0.0
    }
}

/// ∫_ζ^∞ f(y) dy over the standard break points, with a tail bound beyond
/// ζ + 60 folded into the error.
pub(crate) fn integrate_y<F: Fn(f64) -> f64>(f: F, zeta: f64, quad: &Adaptive) -> Result<Integral> {
    let breaks: Vec<f64> = Y_BREAKS.iter().map(|b| zeta + b).collect();
    let mut r = quad.integrate(&f, &breaks)?;
    // the integrand decays at least like e^{-y} beyond the last break
    let end = zeta + Y_SPAN;
    r.error += 2.0 * f(end).abs() * (1.0 + end);
    Ok(r)
}

fn q_of_y(separation_nm: f64) -> impl Fn(f64) -> f64 {
    let scale = HBAR_C_EV_NM / (2.0 * separation_nm);
    move |y| y * scale
}

/// Φ_E(ξ_l) = (1/4a²)∫_{ζ_l}^∞ y Σ_α ln(1 - r_α⁽¹⁾r_α⁽²⁾e^{-y}) dy, in nm⁻².
pub fn phi_e(spec: &PlatePairSpec, l: usize, grid: &MatsubaraGrid) -> Result<Integral> {
    spec.validate()?;
    phi_e_with(spec, l, grid.xi(l), grid.temperature, &grid.quadrature())
}

fn phi_e_with(
    spec: &PlatePairSpec,
    l: usize,
    xi: f64,
    temperature: f64,
    quad: &Adaptive,
) -> Result<Integral> {
    let a = spec.separation_nm;
    let (r1, r2) = spec.reflectors(l, xi, temperature)?;
    let q = q_of_y(a);
    let zeta = reduced_frequency(a, xi);
    let integrand = |y: f64| {
        let (tm1, te1) = r1.at(q(y));
        let (tm2, te2) = r2.at(q(y));
        let e = (-y).exp();
        y * ((-tm1 * tm2 * e).ln_1p() + (-te1 * te2 * e).ln_1p())
    };
    let i = integrate_y(integrand, zeta, quad)?;
    let scale = 1.0 / (4.0 * a * a);
    Ok(Integral {
        value: i.value * scale,
        error: i.error * scale,
    })
}

/// Φ_P(ξ_l) = (1/8a³)∫_{ζ_l}^∞ y² Σ_α [e^y/(r_α⁽¹⁾r_α⁽²⁾) - 1]⁻¹ dy, in nm⁻³.
pub fn phi_p(spec: &PlatePairSpec, l: usize, grid: &MatsubaraGrid) -> Result<Integral> {
    spec.validate()?;
    phi_p_with(spec, l, grid.xi(l), grid.temperature, &grid.quadrature())
}

fn phi_p_with(
    spec: &PlatePairSpec,
    l: usize,
    xi: f64,
    temperature: f64,
    quad: &Adaptive,
) -> Result<Integral> {
    let a = spec.separation_nm;
    let (r1, r2) = spec.reflectors(l, xi, temperature)?;
    let q = q_of_y(a);
    let zeta = reduced_frequency(a, xi);
    let integrand = |y: f64| {
        let (tm1, te1) = r1.at(q(y));
        let (tm2, te2) = r2.at(q(y));
        let e = (-y).exp();
        let tm = tm1 * tm2 * e;
        let te = te1 * te2 * e;
        y * y * (tm / (1.0 - tm) + te / (1.0 - te))
    };
    let i = integrate_y(integrand, zeta, quad)?;
    let scale = 1.0 / (8.0 * a * a * a);
    Ok(Integral {
        value: i.value * scale,
        error: i.error * scale,
    })
}

fn probe_flag(spec: &PlatePairSpec) -> bool {
    spec.use_modified_tm
}

/// Free energy per unit area, J/m².
pub fn free_energy(spec: &PlatePairSpec, grid: &MatsubaraGrid) -> Result<FreeEnergyResult> {
    spec.validate()?;
    grid.validate()?;
    let quad = grid.quadrature();
    let t = grid.temperature;
    let s = matsubara_sum(grid, spec.separation_nm, |l| {
        phi_e_with(spec, l, grid.xi(l), t, &quad)
    })?;
    // eV/nm² → J/m²
    let unit = thermal_energy_ev(t) / (2.0 * PI) * EV_TO_J * 1e18;
    Ok(finish(s, unit, probe_flag(spec)))
}

/// Pressure, Pa (negative for attraction).
pub fn pressure(spec: &PlatePairSpec, grid: &MatsubaraGrid) -> Result<FreeEnergyResult> {
    spec.validate()?;
    grid.validate()?;
    let quad = grid.quadrature();
    let t = grid.temperature;
    let s = matsubara_sum(grid, spec.separation_nm, |l| {
        phi_p_with(spec, l, grid.xi(l), t, &quad)
    })?;
    // eV/nm³ → Pa
    let unit = -thermal_energy_ev(t) / PI * EV_TO_J * 1e27;
    Ok(finish(s, unit, probe_flag(spec)))
}

fn finish(s: SumOutcome, unit: f64, probe: bool) -> FreeEnergyResult {
    FreeEnergyResult {
        value: s.value * unit,
        terms_used: s.terms,
        quadrature_error: s.error * unit.abs(),
        truncation_tail: s.tail * unit,
        zero_frequency_probe: probe,
    }
}

/// P₀ = -π²ħc/(240a⁴) in Pa for a separation in nm.
pub fn ideal_metal_pressure(separation_nm: f64) -> f64 {
    -PI.powi(2) * HBAR_C_EV_NM / (240.0 * separation_nm.powi(4)) * EV_TO_J * 1e27
}

/// E₀ = -π²ħc/(720a³) in J/m² for a separation in nm.
pub fn ideal_metal_free_energy(separation_nm: f64) -> f64 {
    -PI.powi(2) * HBAR_C_EV_NM / (720.0 * separation_nm.powi(3)) * EV_TO_J * 1e18
}

/// Casimir-Polder free energy (J) and force F = -∂𝓕/∂a (N) for an atom at
/// `separation_nm` from a wall.
pub fn casimir_polder(
    atom: &AtomSpec,
    wall: &PlateMaterial,
    separation_nm: f64,
    grid: &MatsubaraGrid,
) -> Result<(FreeEnergyResult, FreeEnergyResult)> {
    if !(separation_nm > 0.0) {
        return Err(CasimirError::InvalidInput(format!(
            "separation must be positive, got {separation_nm} nm"
        )));
    }
    grid.validate()?;
    let a = separation_nm;
    let t = grid.temperature;
    let quad = grid.quadrature();
    let q = q_of_y(a);
    // power = 2 for the free energy, 3 for the force
    let term = |l: usize, power: i32| -> Result<Integral> {
        let xi = grid.xi(l);
        let alpha = atom.alpha(xi);
        let beta = atom.beta(xi);
        if alpha == 0.0 && beta == 0.0 {
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
            });
        }
        let r = Reflector::new(wall, l, xi, t, false)?;
        let zeta = reduced_frequency(a, xi);
        let integrand = |y: f64| {
            let (tm, te) = r.at(q(y));
            let bracket =
                2.0 * y * y * (alpha * tm + beta * te) - zeta * zeta * (alpha + beta) * (tm + te);
            y.powi(power - 2) * (-y).exp() * bracket
        };
        integrate_y(integrand, zeta, &quad)
    };
    let energy = matsubara_sum(grid, a, |l| term(l, 2))?;
    let force = matsubara_sum(grid, a, |l| term(l, 3))?;
    let kt = thermal_energy_ev(t);
    let energy_unit = -kt / (8.0 * a.powi(3)) * EV_TO_J;
    let force_unit = -2.0 * kt / (16.0 * a.powi(4)) * EV_TO_J * 1e9;
    Ok((
        finish(energy, energy_unit, false),
        finish(force, force_unit, false),
    ))
}

/// Entropy per unit area with its derivative error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyResult {
    /// J/(m²·K)
    pub value: f64,
    pub error: f64,
    /// Initial finite-difference step, K.
    pub step: f64,
    pub terms_used: usize,
}

/// S = -∂𝓕/∂T at `temperature` by central differences with two Richardson
/// levels. All stencil points share one Matsubara truncation so that the
/// summed free energy is a smooth function of T.
pub fn entropy(
    spec: &PlatePairSpec,
    grid: &MatsubaraGrid,
    temperature: f64,
) -> Result<EntropyResult> {
    spec.validate()?;
    let base = MatsubaraGrid {
        temperature,
        tail_tol: grid.tail_tol.min(1e-13),
        quad_tol: grid.quad_tol.min(1e-12),
        fixed_terms: None,
        ..*grid
    };
    base.validate()?;
    let h = (0.5f64).max(0.02 * temperature).min(0.5 * temperature);
    // the lowest stencil temperature needs the most terms
    let coldest = free_energy(spec, &base.with_temperature(temperature - h))?;
    let terms = coldest.terms_used + coldest.terms_used / 2 + 8;
    let fixed = MatsubaraGrid {
        fixed_terms: Some(terms),
        ..base
    };
    let offsets = [-h, -h / 2.0, -h / 4.0, h / 4.0, h / 2.0, h];
    let values: Vec<FreeEnergyResult> = offsets
        .iter()
        .map(|dt| free_energy(spec, &fixed.with_temperature(temperature + dt)))
        .collect::<Result<_>>()?;
    let f = |i: usize| values[i].value;
    let d = [
        (f(5) - f(0)) / (2.0 * h),
        (f(4) - f(1)) / h,
        (f(3) - f(2)) / (0.5 * h),
    ];
    let d1 = [(4.0 * d[1] - d[0]) / 3.0, (4.0 * d[2] - d[1]) / 3.0];
    let d2 = (16.0 * d1[1] - d1[0]) / 15.0;
    let rounding: f64 = values
        .iter()
        .map(|v| v.quadrature_error)
        .fold(0.0, f64::max)
        / (0.25 * h);
    let error = (d2 - d1[1]).abs() + rounding;
    let scale = values.iter().map(|v| v.value.abs()).fold(0.0, f64::max) / temperature;
    if !d2.is_finite() || error > 1e-2 * d2.abs() + 1e-6 * scale {
        return Err(CasimirError::DerivativeNonConvergence {
            temperature_k: temperature,
            value: -d2,
            error,
        });
    }
    Ok(EntropyResult {
        value: -d2,
        error,
        step: h,
        terms_used: terms,
    })
}

/// Least-squares polynomial of the given degree through `samples`,
/// evaluated at x = 0.
pub fn extrapolate_to_zero(samples: &[(f64, f64)], degree: usize) -> Result<f64> {
    let n = degree + 1;
    if samples.len() < n {
        return Err(CasimirError::InvalidInput(format!(
            "extrapolation of degree {degree} needs at least {n} samples"
        )));
    }
    let scale = samples.iter().map(|s| s.0.abs()).fold(0.0, f64::max);
    // normal equations in the scaled abscissa x/scale
    let mut m = vec![vec![0.0; n + 1]; n];
    for &(x, y) in samples {
        let t = x / scale;
        let powers: Vec<f64> = (0..n).map(|k| t.powi(k as i32)).collect();
        for i in 0..n {
            for j in 0..n {
                m[i][j] += powers[i] * powers[j];
            }
            m[i][n] += powers[i] * y;
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        if m[col][col] == 0.0 {
            return Err(CasimirError::InvalidInput(
                "degenerate extrapolation samples".into(),
            ));
        }
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let factor = row[col] / pivot_row[col];
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *v -= factor * p;
            }
        }
    }
    let mut coef = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * coef[j]).sum();
        coef[i] = (m[i][n] - s) / m[i][i];
    }
    Ok(coef[0])
}

/// Zero-temperature entropy of two dielectrics whose dc conductivity is
/// kept: k_B/(16πa²)[ζ(3) - Li₃(r0⁽¹⁾r0⁽²⁾)], in J/(m²·K).
pub fn entropy_oracle_dielectric(r0_1: f64, r0_2: f64, separation_nm: f64) -> f64 {
    let a = separation_nm * 1e-9;
    K_B_J / (16.0 * PI * a * a) * (ZETA3 - li3(r0_1 * r0_2))
}

/// Three-term low-temperature asymptote of the Drude-model entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrudeEntropyAsymptote {
    /// Sum of the three terms, J/(m²·K).
    pub value: f64,
    pub terms: [f64; 3],
    /// The expansion parameter c(ω₁+ω₂)/(aω₁ω₂) is below 0.1.
    pub valid: bool,
}

pub fn entropy_oracle_drude(
    omega_p1: f64,
    omega_p2: f64,
    separation_nm: f64,
) -> DrudeEntropyAsymptote {
    let a = separation_nm * 1e-9;
    let lead = -K_B_J * ZETA3 / (16.0 * PI * a * a);
    let x = HBAR_C_EV_NM * (omega_p1 + omega_p2) / (separation_nm * omega_p1 * omega_p2);
    let terms = [lead, -2.0 * x * lead, 3.0 * x * x * lead];
    DrudeEntropyAsymptote {
        value: terms.iter().sum(),
        terms,
        valid: x < 0.1,
    }
}

/// Sphere-plate force difference F(light) - F(dark), N.
pub fn modulation_diff(
    light: &PlatePairSpec,
    dark: &PlatePairSpec,
    grid: &MatsubaraGrid,
    sphere: &SphereSpec,
) -> Result<f64> {
    if light == dark {
        return Ok(0.0);
    }
    let on = pfa_sphere_force(light, sphere, grid)?;
    let off = pfa_sphere_force(dark, sphere, grid)?;
    Ok(on.force - off.force)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{OscillatorSet, PermittivityModel};
    use approx::assert_relative_eq;

    fn vacuum() -> PlateMaterial {
        PlateMaterial::new(PermittivityModel::dielectric(OscillatorSet::default()))
    }

    fn ideal(separation_nm: f64) -> PlatePairSpec {
        PlatePairSpec::symmetric(
            PlateMaterial::new(PermittivityModel::plasma(1e7)),
            separation_nm,
        )
    }

    fn series(order: i32) -> f64 {
        (1..200_000).map(|n| 1.0 / (n as f64).powi(order)).sum()
    }

    #[test]
    fn vacuum_gap_contributes_nothing() {
        let spec = PlatePairSpec::symmetric(vacuum(), 500.0);
        let grid = MatsubaraGrid::new(300.0);
        assert_eq!(phi_e(&spec, 0, &grid).unwrap().value, 0.0);
        assert_eq!(phi_p(&spec, 3, &grid).unwrap().value, 0.0);
        assert_eq!(free_energy(&spec, &grid).unwrap().value, 0.0);
        assert_eq!(pressure(&spec, &grid).unwrap().value, 0.0);
    }

    #[test]
    fn ideal_metal_zero_frequency_integrals() {
        let a = 700.0;
        let spec = ideal(a);
        let grid = MatsubaraGrid::new(300.0);
        // ∫ y ln(1 - e^{-y}) dy = -Σ 1/n³ per polarization
        let e = phi_e(&spec, 0, &grid).unwrap().value * 4.0 * a * a;
        assert_relative_eq!(e, -2.0 * series(3), max_relative = 1e-6);
        // ∫ y²/(e^y - 1) dy = Σ 2/n³ per polarization
        let p = phi_p(&spec, 0, &grid).unwrap().value * 8.0 * a.powi(3);
        assert_relative_eq!(p, 4.0 * series(3), max_relative = 1e-6);
    }

    #[test]
    fn ideal_metal_closed_forms() {
        assert_relative_eq!(ideal_metal_pressure(1000.0), -1.300e-3, max_relative = 1e-3);
        assert_relative_eq!(
            ideal_metal_pressure(500.0),
            16.0 * ideal_metal_pressure(1000.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            ideal_metal_pressure(2000.0),
            ideal_metal_pressure(1000.0) / 16.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn high_plasma_frequency_reaches_ideal_metal_energy() {
        let spec =
            PlatePairSpec::symmetric(PlateMaterial::new(PermittivityModel::plasma(1e6)), 1000.0);
        let f = free_energy(&spec, &MatsubaraGrid::new(1.0)).unwrap();
        assert_relative_eq!(
            f.value,
            ideal_metal_free_energy(1000.0),
            max_relative = 1e-3
        );
    }

    #[test]
    fn pressure_is_minus_energy_gradient() {
        let spec = PlatePairSpec::symmetric(
            PlateMaterial::new(PermittivityModel::drude(9.0, 0.035)),
            800.0,
        );
        let grid = MatsubaraGrid {
            tail_tol: 1e-12,
            quad_tol: 1e-12,
            ..MatsubaraGrid::new(300.0)
        };
        let h = 1.0;
        let e = |a: f64| free_energy(&spec.at_separation(a), &grid).unwrap().value;
        let gradient = (e(800.0 + h) - e(800.0 - h)) / (2.0 * h * 1e-9);
        let p = pressure(&spec, &grid).unwrap().value;
        assert_relative_eq!(p, -gradient, max_relative = 1e-5);
    }

    #[test]
    fn truncation_is_stable_under_doubled_cap() {
        let spec =
            PlatePairSpec::symmetric(PlateMaterial::new(PermittivityModel::plasma(9.0)), 300.0);
        let grid = MatsubaraGrid::new(300.0);
        let base = pressure(&spec, &grid).unwrap();
        let n = base.terms_used;
        let doubled = pressure(
            &spec,
            &MatsubaraGrid {
                fixed_terms: Some(2 * n),
                ..grid
            },
        )
        .unwrap();
        assert!(((base.value - doubled.value) / doubled.value).abs() < grid.tail_tol);
    }

    #[test]
    fn truncation_failure_names_the_point() {
        let spec = ideal(5000.0);
        let grid = MatsubaraGrid {
            l_max: 2,
            ..MatsubaraGrid::new(10.0)
        };
        match pressure(&spec, &grid) {
            Err(CasimirError::TruncationFailure {
                l, separation_nm, ..
            }) => {
                assert_eq!(l, 2);
                assert_eq!(separation_nm, 5000.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classical_casimir_polder_limit() {
        let atom = AtomSpec::static_alpha(47.3);
        let wall = PlateMaterial::new(PermittivityModel::plasma(1e6));
        let a = 20_000.0;
        let t = 300.0;
        let (e, f) = casimir_polder(&atom, &wall, a, &MatsubaraGrid::new(t)).unwrap();
        let kt = K_B_J * t;
        let a_m = a * 1e-9;
        let alpha = 47.3e-27;
        assert_relative_eq!(
            e.value,
            -kt * alpha / (4.0 * a_m.powi(3)),
            max_relative = 1e-3
        );
        assert_relative_eq!(
            f.value,
            -3.0 * kt * alpha / (4.0 * a_m.powi(4)),
            max_relative = 1e-3
        );
        let none = AtomSpec::static_alpha(0.0);
        let (e0, f0) = casimir_polder(&none, &wall, a, &MatsubaraGrid::new(t)).unwrap();
        assert_eq!((e0.value, f0.value), (0.0, 0.0));
    }

    #[test]
    fn casimir_polder_force_is_energy_gradient() {
        let atom = AtomSpec::from_cm3(4.73e-23, Some(1.6));
        let wall = PlateMaterial::new(PermittivityModel::dielectric(OscillatorSet::single(
            3.8, 12.0,
        )));
        let grid = MatsubaraGrid {
            tail_tol: 1e-12,
            quad_tol: 1e-12,
            ..MatsubaraGrid::new(310.0)
        };
        let a = 2000.0;
        let h = 2.0;
        let e = |a: f64| casimir_polder(&atom, &wall, a, &grid).unwrap().0.value;
        let gradient = (e(a + h) - e(a - h)) / (2.0 * h * 1e-9);
        let f = casimir_polder(&atom, &wall, a, &grid).unwrap().1.value;
        assert_relative_eq!(f, -gradient, max_relative = 1e-6);
    }

    #[test]
    fn dielectric_entropy_oracle_values() {
        let a = 1000.0;
        let zero = entropy_oracle_dielectric(0.0, 0.0, a);
        assert_relative_eq!(
            zero,
            K_B_J * ZETA3 / (16.0 * PI * 1e-12),
            max_relative = 1e-14
        );
        let r0 = 1.56 / 3.56;
        let s = entropy_oracle_dielectric(r0, r0, a);
        assert_relative_eq!(
            s / zero,
            (ZETA3 - 0.196_916_054_314_189) / ZETA3,
            max_relative = 1e-12
        );
        assert!(entropy_oracle_dielectric(0.999_999, 0.999_999, a) < 1e-5 * zero);
    }

    #[test]
    fn drude_entropy_oracle_terms() {
        let a = 2000.0;
        let far = entropy_oracle_drude(1e12, 1e12, a);
        assert_relative_eq!(far.value, far.terms[0], max_relative = 1e-9);
        let s = entropy_oracle_drude(9.0, 9.0, a);
        let c_over_a = HBAR_C_EV_NM / a;
        assert_relative_eq!(
            s.terms[1],
            -(2.0 * c_over_a) * (2.0 / 9.0) * s.terms[0],
            max_relative = 1e-14
        );
        assert!(s.valid && s.value < 0.0);
        assert!(!entropy_oracle_drude(0.5, 0.5, 100.0).valid);
    }

    #[test]
    fn extrapolation_recovers_polynomial_intercept() {
        let samples: Vec<(f64, f64)> = (1..8)
            .map(|i| {
                let t = i as f64;
                (t, 2.0 - 0.3 * t + 0.01 * t * t)
            })
            .collect();
        assert_relative_eq!(
            extrapolate_to_zero(&samples, 2).unwrap(),
            2.0,
            max_relative = 1e-12
        );
        assert!(extrapolate_to_zero(&samples[..2], 2).is_err());
    }

    #[test]
    fn entropy_of_ideal_metal_matches_classical_slope() {
        // at large aT the l = 0 term dominates: 𝓕 ≈ -k_B T ζ(3)/(8πa²)
        let spec = ideal(10_000.0);
        let s = entropy(&spec, &MatsubaraGrid::new(300.0), 300.0).unwrap();
        let a = 1e-5;
        let classical = K_B_J * ZETA3 / (8.0 * PI * a * a);
        assert_relative_eq!(s.value, classical, max_relative = 2e-2);
        let vac = entropy(
            &PlatePairSpec::symmetric(vacuum(), 1000.0),
            &MatsubaraGrid::new(300.0),
            300.0,
        )
        .unwrap();
        assert_eq!(vac.value, 0.0);
    }
}
