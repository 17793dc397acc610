//! Sphere-plate observables in the proximity force approximation and the
//! lateral force between sinusoidally corrugated surfaces.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{CasimirError, Result};
use crate::lifshitz::{
    free_energy, matsubara_sum, FreeEnergyResult, MatsubaraGrid, PlatePairSpec, Y_SPAN,
};
use crate::quadrature::{Adaptive, Integral, NeumaierSum};
use crate::reflection::{Coefficient, Reflector};
use crate::special::{bessel_i1_scaled, inverse_cube_tail, inverse_square_tail, li2};
use crate::units::{reduced_frequency, thermal_energy_ev, EV_TO_J, HBAR_C_EV_NM};

/// Separation-to-radius ratio above which the PFA result is flagged.
pub const PFA_WARNING_RATIO: f64 = 0.1;

/// Sphere of radius `radius_um` (µm) at closest separation `separation_nm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSpec {
    pub radius_um: f64,
    pub separation_nm: f64,
}

impl SphereSpec {
    fn radius_nm(&self) -> f64 {
        self.radius_um * 1e3
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius_um > 0.0) || !(self.separation_nm > 0.0) {
            return Err(CasimirError::InvalidInput(
                "sphere radius and separation must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereForce {
    /// N (negative for attraction).
    pub force: f64,
    /// Relative error bound a/R of the approximation.
    pub relative_error_bound: f64,
    pub warning: Option<String>,
    pub plate_energy: FreeEnergyResult,
}

/// F = 2πR𝓕(a, T). The sphere's separation overrides the plates'.
pub fn pfa_sphere_force(
    plates: &PlatePairSpec,
    sphere: &SphereSpec,
    grid: &MatsubaraGrid,
) -> Result<SphereForce> {
    sphere.validate()?;
    let spec = plates.at_separation(sphere.separation_nm);
    let energy = free_energy(&spec, grid)?;
    let ratio = sphere.separation_nm / sphere.radius_nm();
    let warning = (ratio > PFA_WARNING_RATIO)
        .then(|| format!("a/R = {ratio:.3} exceeds {PFA_WARNING_RATIO}; proximity force approximation unreliable"));
    Ok(SphereForce {
        force: TAU * sphere.radius_um * 1e-6 * energy.value,
        relative_error_bound: ratio,
        warning,
        plate_energy: energy,
    })
}

/// Converts measured force gradients (a in nm, F′ in N/m) into pressures
/// P = -F′/(2πR), R in µm.
pub fn pressure_from_gradient(samples: &[(f64, f64)], radius_um: f64) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(CasimirError::EmptyTable);
    }
    if !(radius_um > 0.0) {
        return Err(CasimirError::InvalidInput(
            "sphere radius must be positive".into(),
        ));
    }
    let r = radius_um * 1e-6;
    Ok(samples.iter().map(|&(a, g)| (a, -g / (TAU * r))).collect())
}

/// Sinusoidal corrugations of amplitude `a1_nm` (plate) and `a2_nm`
/// (sphere) with common period and relative phase `phase` (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrugationSpec {
    pub a1_nm: f64,
    pub a2_nm: f64,
    pub period_nm: f64,
    pub phase: f64,
}

impl CorrugationSpec {
    pub fn with_phase(&self, phase: f64) -> Self {
        CorrugationSpec { phase, ..*self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.a1_nm >= 0.0)
            || !(self.a2_nm >= 0.0)
            || !(self.period_nm > 0.0)
            || !self.phase.is_finite()
        {
            return Err(CasimirError::InvalidInput(
                "corrugation amplitudes must be >= 0, the period > 0 and the phase finite".into(),
            ));
        }
        Ok(())
    }
}

/// β = √(A1² + A2² - 2A1A2 cos φ)/a.
pub fn beta(separation_nm: f64, corr: &CorrugationSpec) -> f64 {
    let (a1, a2) = (corr.a1_nm, corr.a2_nm);
    (a1 * a1 + a2 * a2 - 2.0 * a1 * a2 * corr.phase.cos())
        .max(0.0)
        .sqrt()
        / separation_nm
}

/// 2πa/Λ above which the corrugation PFA is flagged.
pub const LATERAL_PFA_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LateralForce {
    /// N
    pub force: f64,
    pub beta: f64,
    /// 2πa/Λ
    pub pfa_parameter: f64,
    pub pfa_valid: bool,
    /// Matsubara terms summed.
    pub terms_used: usize,
    pub error: f64,
}

/// Maximum number of explicitly summed harmonics for one Matsubara term.
const MAX_HARMONICS: usize = 200_000;
/// Harmonics summed explicitly before an algebraic tail is fitted, for
/// zero-frequency coefficients that reach unit modulus at y → 0.
const ALGEBRAIC_HARMONICS: usize = 512;
/// Relative size of the last harmonic at which the n-series stops, unless
/// the Matsubara tolerance asks for more.
const HARMONIC_TOL: f64 = 1e-10;

/// Lateral force on the sphere for plates of one material.
pub fn lateral_force(
    plates: &PlatePairSpec,
    sphere: &SphereSpec,
    corr: &CorrugationSpec,
    grid: &MatsubaraGrid,
) -> Result<LateralForce> {
    sphere.validate()?;
    corr.validate()?;
    if plates.mat1 != plates.mat2 {
        return Err(CasimirError::DissimilarPlates);
    }
    let a = sphere.separation_nm;
    let pfa_parameter = TAU * a / corr.period_nm;
    let b = beta(a, corr);
    let outcome = |force: f64, terms_used: usize, error: f64| LateralForce {
        force,
        beta: b,
        pfa_parameter,
        pfa_valid: pfa_parameter <= LATERAL_PFA_LIMIT,
        terms_used,
        error,
    };

    // φ reduced to (-π, π] keeping the sign, so that φ → -φ is exact
    let magnitude = corr.phase.abs() % TAU;
    let reduced = if magnitude > PI {
        magnitude - TAU
    } else {
        magnitude
    };
    let sin_phi = if reduced == 0.0 || reduced == PI {
        0.0
    } else {
        corr.phase.signum() * reduced.sin()
    };
    if sin_phi == 0.0 || corr.a1_nm * corr.a2_nm == 0.0 || b == 0.0 {
        return Ok(outcome(0.0, 0, 0.0));
    }
    if b >= 1.0 {
        return Err(CasimirError::SeriesNonConvergence(format!(
            "corrugation parameter beta = {b} must be below 1"
        )));
    }

    let t = grid.temperature;
    let quad = Adaptive::with_rel_tol(grid.quad_tol);
    let tol = HARMONIC_TOL.min(1e-2 * grid.tail_tol);
    let spec = plates.at_separation(a);
    let sum = matsubara_sum(grid, a, |l| {
        let xi = grid.xi(l);
        let r = Reflector::new(&spec.mat1, l, xi, t, spec.use_modified_tm)?;
        harmonic_sum(
            &r,
            l,
            reduced_frequency(a, xi),
            b,
            HBAR_C_EV_NM / (2.0 * a),
            &quad,
            tol,
            false,
        )
    })?;
    let prefactor =
        PI * thermal_energy_ev(t) * sphere.radius_nm() * corr.a1_nm * corr.a2_nm * sin_phi
            / (2.0 * a.powi(3) * corr.period_nm * b);
    // eV/nm → N
    let unit = prefactor * EV_TO_J * 1e9;
    Ok(outcome(sum.value * unit, sum.terms, sum.error * unit.abs()))
}

/// Σ_n ∫_ζ^∞ y e^{-ny} I₁(nβy)[r_TM^{2n} + r_TE^{2n}] dy for one Matsubara
/// term. `q_scale` converts y to q.
#[allow(clippy::too_many_arguments)]
pub(crate) fn harmonic_sum(
    r: &Reflector,
    l: usize,
    zeta: f64,
    beta: f64,
    q_scale: f64,
    quad: &Adaptive,
    tol: f64,
    force_numeric: bool,
) -> Result<Integral> {
    let decay = 1.0 - beta;
    if l == 0 && !force_numeric {
        if let (Some(tm), Some(te)) = (r.tm.constant(), r.te.constant()) {
            // ∫₀^∞ y e^{-py} I₁(by) dy = b/(p² - b²)^{3/2}
            let value = beta / (1.0 - beta * beta).powf(1.5) * (li2(tm * tm) + li2(te * te));
            return Ok(Integral { value, error: 0.0 });
        }
    }
    let harmonic = |n: usize| -> Result<Integral> {
        let nf = n as f64;
        let width = 1.0 / (nf * decay);
        let breaks: Vec<f64> = [0.0, 0.5, 2.0, 6.0, 15.0, 30.0, Y_SPAN]
            .iter()
            .map(|s| zeta + s * width)
            .collect();
        let power = 2 * n as i32;
        let f = |y: f64| {
            if y == 0.0 {
                return 0.0;
            }
            let q = y * q_scale;
            let weight = y * (-nf * decay * y).exp() * bessel_i1_scaled(nf * beta * y);
            weight * (power_of(&r.tm, q, power) + power_of(&r.te, q, power))
        };
        quad.integrate(f, &breaks)
    };

    let algebraic = l == 0 && reaches_unit_modulus(r);
    let cap = if algebraic {
        ALGEBRAIC_HARMONICS
    } else {
        MAX_HARMONICS
    };
    let mut sum = NeumaierSum::default();
    let mut error = 0.0;
    let mut previous = 0.0;
    let mut last = 0.0;
    for n in 1..=cap {
        let h = harmonic(n)?;
        sum.add(h.value);
        error += h.error;
        previous = last;
        last = h.value;
        if h.value.abs() <= tol * sum.total().abs() {
            return Ok(Integral {
                value: sum.total(),
                error,
            });
        }
    }
    if !algebraic {
        return Err(CasimirError::SeriesNonConvergence(format!(
            "harmonic series at l = {l} not converged after {cap} terms"
        )));
    }
    // t_n ≈ C/n² + D/n³ fitted to the last two harmonics
    let n = cap as f64;
    let m = n - 1.0;
    let d = (last * n * n - previous * m * m) / (1.0 / n - 1.0 / m);
    let c = last * n * n - d / n;
    let tail = c * inverse_square_tail(cap) + d * inverse_cube_tail(cap);
    let pure_square = last * n * n * inverse_square_tail(cap);
    Ok(Integral {
        value: sum.total() + tail,
        error: error + (tail - pure_square).abs(),
    })
}

#[inline]
fn power_of(c: &Coefficient, q: f64, power: i32) -> f64 {
    let v = c.at(q);
    if v == 0.0 {
        0.0
    } else {
        v.powi(power)
    }
}

/// Whether a zero-frequency coefficient tends to ±1 as q → 0, which makes
/// the harmonic series decay only algebraically.
fn reaches_unit_modulus(r: &Reflector) -> bool {
    let probe = 1e-12;
    r.tm.at(probe).abs() > 1.0 - 1e-6 || r.te.at(probe).abs() > 1.0 - 1e-6
}

/// Mean displacement of each maximum from the midpoint of its two adjacent
/// minima, as a fraction of the period. `samples` holds one full period
/// sampled uniformly (the endpoint excluded).
pub fn asymmetry_metric(samples: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n < 64 {
        return Err(CasimirError::InvalidInput(format!(
            "asymmetry metric needs at least 64 samples per period, got {n}"
        )));
    }
    let at = |i: isize| samples[i.rem_euclid(n as isize) as usize];
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for i in 0..n as isize {
        let (l, c, r) = (at(i - 1), at(i), at(i + 1));
        // parabolic vertex offset in samples
        let offset = || {
            let curvature = l - 2.0 * c + r;
            if curvature == 0.0 {
                0.0
            } else {
                0.5 * (l - r) / curvature
            }
        };
        if c > l && c >= r {
            maxima.push(i as f64 + offset());
        } else if c < l && c <= r {
            minima.push(i as f64 + offset());
        }
    }
    if maxima.is_empty() || minima.is_empty() {
        return Err(CasimirError::NoExtrema);
    }
    let period = n as f64;
    let mut shifts = Vec::with_capacity(maxima.len());
    for &x in &maxima {
        // nearest minima before and after, cyclically
        let before = minima
            .iter()
            .map(|&m| (x - m).rem_euclid(period))
            .fold(f64::INFINITY, f64::min);
        let after = minima
            .iter()
            .map(|&m| (m - x).rem_euclid(period))
            .fold(f64::INFINITY, f64::min);
        shifts.push((0.5 * (after - before)).abs());
    }
    Ok(shifts.iter().sum::<f64>() / shifts.len() as f64 / period)
}
