//! TM/TE reflection coefficients on a homogeneous half-space at imaginary
//! frequency.
//!
//! Frequencies and wave numbers are both in eV (`ħc·k`), so that
//! q = √(k⊥² + ξ²) and k = √(k⊥² + εμξ²).

use crate::error::{CasimirError, Result};
use crate::materials::{contrast, PlateMaterial, StaticResponse};

/// Point (ξ, q) on the imaginary frequency axis, both in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryFreqPoint {
    pub xi: f64,
    pub q: f64,
}

impl ImaginaryFreqPoint {
    pub fn from_kperp(xi: f64, kperp: f64) -> Self {
        ImaginaryFreqPoint {
            xi,
            q: kperp.hypot(xi),
        }
    }

    /// `q` must satisfy q ≥ ξ.
    pub fn from_q(xi: f64, q: f64) -> Self {
        debug_assert!(q >= xi);
        ImaginaryFreqPoint { xi, q }
    }

    pub fn kperp_sq(&self) -> f64 {
        ((self.q - self.xi) * (self.q + self.xi)).max(0.0)
    }

    pub fn kperp(&self) -> f64 {
        self.kperp_sq().sqrt()
    }

    /// k⁽ⁿ⁾ = √(q² + (εμ - 1)ξ²).
    pub fn k_medium(&self, eps_mu: f64) -> f64 {
        (self.q * self.q + (eps_mu - 1.0) * self.xi * self.xi).sqrt()
    }
}

/// A reflection coefficient as a function of q at fixed ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Coefficient {
    Constant(f64),
    /// (s·q - k)/(s·q + k), s = ε (TM) or μ (TE).
    Fresnel {
        xi: f64,
        s: f64,
        eps_mu: f64,
    },
    /// Screening-modified TM coefficient.
    Modified {
        xi: f64,
        eps: f64,
        eps_mu: f64,
        /// (ε - ε_c)/ε_c
        carrier_ratio: f64,
        /// κ²·(ε_c(0)/ε_c)·ε/(ε - ε_c)
        screening_sq: f64,
        /// The argument is k⊥ rather than q (zero-frequency probe).
        kperp_argument: bool,
    },
    /// ξ → 0 limit of the TE coefficient with ε·ξ² → ω_p²:
    /// (μ0 q - √(q² + μ0ω_p²))/(μ0 q + √(q² + μ0ω_p²)).
    PlasmaStaticTe {
        mu0: f64,
        mu_omega_p_sq: f64,
    },
}

impl Coefficient {
    #[inline]
    pub(crate) fn at(&self, q: f64) -> f64 {
        match *self {
            Coefficient::Constant(r) => r,
            Coefficient::Fresnel { xi, s, eps_mu } => {
                let pt = ImaginaryFreqPoint { xi, q };
                let k = pt.k_medium(eps_mu);
                (s * q - k) / (s * q + k)
            }
            Coefficient::Modified {
                xi,
                eps,
                eps_mu,
                carrier_ratio,
                screening_sq,
                kperp_argument,
            } => {
                let pt = if kperp_argument {
                    ImaginaryFreqPoint::from_kperp(xi, q)
                } else {
                    ImaginaryFreqPoint { xi, q }
                };
                let q = pt.q;
                let k = pt.k_medium(eps_mu);
                let kperp_sq = pt.kperp_sq();
                let correction = if carrier_ratio == 0.0 || kperp_sq == 0.0 {
                    0.0
                } else {
                    kperp_sq / (kperp_sq + screening_sq).sqrt() * carrier_ratio
                };
                (eps * q - k - correction) / (eps * q + k + correction)
            }
            Coefficient::PlasmaStaticTe { mu0, mu_omega_p_sq } => {
                let k = (q * q + mu_omega_p_sq).sqrt();
                (mu0 * q - k) / (mu0 * q + k)
            }
        }
    }

    /// The value when it does not depend on q.
    pub(crate) fn constant(&self) -> Option<f64> {
        match *self {
            Coefficient::Constant(r) => Some(r),
            _ => None,
        }
    }
}

/// Screening-modified TM reflection at fixed ξ > 0.
fn modified_coefficient(
    material: &PlateMaterial,
    xi: f64,
    temperature: f64,
) -> Result<Coefficient> {
    let kappa = material.screening.ok_or(CasimirError::MissingScreening)?;
    let model = &material.permittivity;
    if !model.has_dissipative_carriers() {
        return Err(CasimirError::NoFreeCarriers);
    }
    let eps = model.eval(xi, temperature)?;
    let eps_core = model.core_eval(xi);
    let eps_core0 = model.core_eval(0.0);
    let carriers = eps - eps_core;
    let (carrier_ratio, screening_sq) = if carriers > 0.0 {
        (
            carriers / eps_core,
            kappa * kappa * (eps_core0 / eps_core) * eps / carriers,
        )
    } else {
        (0.0, f64::INFINITY)
    };
    Ok(Coefficient::Modified {
        xi,
        eps,
        eps_mu: eps,
        carrier_ratio,
        screening_sq,
        kperp_argument: false,
    })
}

/// Zero-frequency coefficients as q-functions (q = k⊥ at ξ = 0).
fn static_coefficients(material: &PlateMaterial, temperature: f64) -> (Coefficient, Coefficient) {
    let mu0 = material.magnetic.eval(0, temperature);
    let te_magnetic = Coefficient::Constant(contrast(mu0));
    match material.permittivity.static_response(temperature) {
        StaticResponse::Dielectric { eps0 } => (Coefficient::Constant(contrast(eps0)), te_magnetic),
        StaticResponse::Conductor => (Coefficient::Constant(1.0), te_magnetic),
        StaticResponse::PlasmaLike { omega_p } => (
            Coefficient::Constant(1.0),
            Coefficient::PlasmaStaticTe {
                mu0,
                mu_omega_p_sq: mu0 * omega_p * omega_p,
            },
        ),
    }
}

/// Probe frequency (eV) used to approximate the ξ → 0 limit of the
/// screening-modified TM coefficient.
pub const MODIFIED_TM_ZERO_PROBE_EV: f64 = 1e-8;

/// Pair of coefficient functions for one plate at one Matsubara index.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reflector {
    pub tm: Coefficient,
    pub te: Coefficient,
}

impl Reflector {
    pub(crate) fn new(
        material: &PlateMaterial,
        l: usize,
        xi: f64,
        temperature: f64,
        modified_tm: bool,
    ) -> Result<Self> {
        if l == 0 || xi == 0.0 {
            let (tm, te) = static_coefficients(material, temperature);
            let tm = if modified_tm {
                probe_zero_frequency_tm(material, temperature)?
            } else {
                tm
            };
            return Ok(Reflector { tm, te });
        }
        let eps = material.permittivity.eval(xi, temperature)?;
        let mu = material.magnetic.eval(l, temperature);
        let tm = if modified_tm {
            let mut c = modified_coefficient(material, xi, temperature)?;
            if let Coefficient::Modified { eps_mu, .. } = &mut c {
                *eps_mu = eps * mu;
            }
            c
        } else {
            Coefficient::Fresnel {
                xi,
                s: eps,
                eps_mu: eps * mu,
            }
        };
        let te = Coefficient::Fresnel {
            xi,
            s: mu,
            eps_mu: eps * mu,
        };
        Ok(Reflector { tm, te })
    }

    #[inline]
    pub(crate) fn at(&self, q: f64) -> (f64, f64) {
        (self.tm.at(q), self.te.at(q))
    }
}

/// The modified TM coefficient has no analytic ξ → 0 form here; it is
/// sampled at a small probe frequency, with the argument read as k⊥.
fn probe_zero_frequency_tm(material: &PlateMaterial, temperature: f64) -> Result<Coefficient> {
    let mut c = modified_coefficient(material, MODIFIED_TM_ZERO_PROBE_EV, temperature)?;
    if let Coefficient::Modified { kperp_argument, .. } = &mut c {
        *kperp_argument = true;
    }
    Ok(c)
}

/// (r_TM, r_TE) at a point with ξ > 0; at l = 0 (or ξ = 0) the analytic
/// zero-frequency limits are returned instead.
pub fn fresnel(
    material: &PlateMaterial,
    pt: ImaginaryFreqPoint,
    l: usize,
    temperature: f64,
) -> Result<(f64, f64)> {
    if l == 0 || pt.xi == 0.0 {
        return Ok(zero_freq_limits(material, pt.kperp(), temperature));
    }
    Ok(Reflector::new(material, l, pt.xi, temperature, false)?.at(pt.q))
}

/// Screening-modified TM coefficient at ξ > 0.
pub fn modified_tm(
    material: &PlateMaterial,
    pt: ImaginaryFreqPoint,
    temperature: f64,
) -> Result<f64> {
    if !(pt.xi > 0.0) {
        return Err(CasimirError::InvalidInput(
            "modified TM coefficient requires xi > 0".into(),
        ));
    }
    Ok(Reflector::new(material, 1, pt.xi, temperature, true)?
        .tm
        .at(pt.q))
}

/// Analytic ξ → 0 limits (r_TM(0, k⊥), r_TE(0, k⊥)); k⊥ in eV.
pub fn zero_freq_limits(material: &PlateMaterial, kperp: f64, temperature: f64) -> (f64, f64) {
    let (tm, te) = static_coefficients(material, temperature);
    (tm.at(kperp), te.at(kperp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn plate(m: PermittivityModel) -> PlateMaterial {
        PlateMaterial::new(m)
    }

    #[test]
    fn vacuum_does_not_reflect() {
        let vac = plate(PermittivityModel::dielectric(OscillatorSet::default()));
        let (tm, te) = fresnel(&vac, ImaginaryFreqPoint::from_kperp(0.3, 0.7), 1, 300.0).unwrap();
        assert_eq!((tm, te), (0.0, 0.0));
    }

    #[test]
    fn tm_tends_to_one_for_large_permittivity() {
        let m = plate(PermittivityModel::plasma(1e7));
        let (tm, _) = fresnel(&m, ImaginaryFreqPoint::from_kperp(0.1, 0.2), 1, 300.0).unwrap();
        assert!((1.0 - tm) < 1e-6);
    }

    #[test]
    fn plasma_gold_at_first_matsubara_matches_direct_formula() {
        let xi = 0.1627;
        let kperp = xi;
        let m = plate(PermittivityModel::plasma(9.0));
        let (tm, te) = fresnel(&m, ImaginaryFreqPoint::from_kperp(xi, kperp), 1, 300.0).unwrap();
        // scalar evaluation with k⊥ and ξ kept separate
        let eps = 1.0 + 81.0 / (xi * xi);
        let q = (kperp * kperp + xi * xi).sqrt();
        let k = (kperp * kperp + eps * xi * xi).sqrt();
        assert_relative_eq!(tm, (eps * q - k) / (eps * q + k), max_relative = 1e-14);
        assert_relative_eq!(te, (q - k) / (q + k), max_relative = 1e-14);
    }

    #[test]
    fn zero_frequency_limits() {
        let drude = plate(PermittivityModel::drude(9.0, 0.035));
        assert_eq!(zero_freq_limits(&drude, 0.01, 300.0), (1.0, 0.0));
        let diel = plate(PermittivityModel::dielectric(OscillatorSet::single(
            2.56, 8.0,
        )));
        let (tm, te) = zero_freq_limits(&diel, 0.01, 300.0);
        assert!((tm - 0.4382).abs() < 1e-4);
        assert_eq!(te, 0.0);
        let magnetic = diel.clone().with_magnetic(MagneticModel::with_mu0(25.0));
        let (_, te) = zero_freq_limits(&magnetic, 0.01, 300.0);
        assert_relative_eq!(te, 24.0 / 26.0, max_relative = 1e-15);
        assert!((te - 0.9231).abs() < 1e-4);
        let plasma = plate(PermittivityModel::plasma(9.0));
        let (tm, te) = zero_freq_limits(&plasma, 2.0, 300.0);
        let big_k = (4.0f64 + 81.0).sqrt();
        assert_eq!(tm, 1.0);
        assert_relative_eq!(te, (2.0 - big_k) / (2.0 + big_k), max_relative = 1e-15);
    }

    #[test]
    fn continuity_at_small_frequency() {
        let xi = 1e-6;
        let kperp = 0.05;
        for m in [
            plate(PermittivityModel::plasma(9.0)),
            plate(PermittivityModel::dielectric(OscillatorSet::single(
                11.7, 4.3,
            ))),
        ] {
            let (tm, te) =
                fresnel(&m, ImaginaryFreqPoint::from_kperp(xi, kperp), 1, 300.0).unwrap();
            let (tm0, te0) = zero_freq_limits(&m, kperp, 300.0);
            assert!((tm - tm0).abs() < 1e-4 && (te - te0).abs() < 1e-4);
        }
        // Drude TE collapses while plasma TE stays finite for k⊥ ≪ ω_p
        let drude = plate(PermittivityModel::drude(9.0, 0.035));
        let plasma = plate(PermittivityModel::plasma(9.0));
        let pt = ImaginaryFreqPoint::from_kperp(xi, 1.0);
        assert!(fresnel(&drude, pt, 1, 300.0).unwrap().1.abs() < 1e-3);
        assert!(fresnel(&plasma, pt, 1, 300.0).unwrap().1.abs() > 0.01);
    }

    #[test]
    fn modified_tm_reduces_without_carriers() {
        // Drude with vanishing plasma frequency: ε = ε_c
        let core = OscillatorSet::single(11.7, 4.3);
        let m = PlateMaterial::new(PermittivityModel::Drude(DrudeParams {
            omega_p: 0.0,
            gamma: Relaxation::Constant(0.05),
            core: core.clone(),
        }))
        .with_screening(0.01);
        let pt = ImaginaryFreqPoint::from_kperp(0.2, 0.3);
        let standard = fresnel(&plate(PermittivityModel::dielectric(core)), pt, 1, 300.0)
            .unwrap()
            .0;
        assert_relative_eq!(
            modified_tm(&m, pt, 300.0).unwrap(),
            standard,
            max_relative = 1e-14
        );
    }

    #[test]
    fn modified_tm_large_kappa_limit() {
        let drude = PermittivityModel::drude(9.0, 0.035);
        let pt = ImaginaryFreqPoint::from_kperp(1.0, 0.3);
        let standard = fresnel(&plate(drude.clone()), pt, 1, 300.0).unwrap().0;
        let m = plate(drude.clone()).with_screening(1e6 * pt.kperp());
        let modified = modified_tm(&m, pt, 300.0).unwrap();
        assert!((modified - standard).abs() < 1e-6 * standard.abs());
        // the deviation falls off as 1/κ
        let d = |kappa: f64| {
            modified_tm(&plate(drude.clone()).with_screening(kappa), pt, 300.0).unwrap() - standard
        };
        assert_relative_eq!(d(1e4) / d(1e5), 10.0, max_relative = 1e-3);
    }

    #[test]
    fn modified_tm_matches_direct_composition() {
        let (wp, gamma, kappa) = (9.0, 0.035, 0.4);
        let core = OscillatorSet::single(3.0, 6.0);
        let m = PlateMaterial::new(PermittivityModel::Drude(DrudeParams {
            omega_p: wp,
            gamma: Relaxation::Constant(gamma),
            core: core.clone(),
        }))
        .with_screening(kappa);
        let (xi, kperp) = (0.05, 0.3);
        let pt = ImaginaryFreqPoint::from_kperp(xi, kperp);
        // direct transcription of the composed formula
        let ec = core.eval(xi);
        let ec0 = core.eval(0.0);
        let e = ec + wp * wp / (xi * (xi + gamma));
        let q = (kperp * kperp + xi * xi).sqrt();
        let k = (kperp * kperp + e * xi * xi).sqrt();
        let eta = (kperp * kperp + kappa * kappa * (ec0 / ec) * (e / (e - ec))).sqrt();
        let corr = kperp * kperp / eta * (e - ec) / ec;
        let expected = (e * q - k - corr) / (e * q + k + corr);
        assert_relative_eq!(
            modified_tm(&m, pt, 300.0).unwrap(),
            expected,
            max_relative = 1e-13
        );
    }

    #[test]
    fn modified_tm_requires_kappa() {
        let m = plate(PermittivityModel::drude(9.0, 0.035));
        let pt = ImaginaryFreqPoint::from_kperp(0.1, 0.1);
        assert!(matches!(
            modified_tm(&m, pt, 300.0),
            Err(CasimirError::MissingScreening)
        ));
    }

    fn any_material() -> impl Strategy<Value = PlateMaterial> {
        (
            0usize..5,
            0.1..20.0f64,
            0.0..1.0f64,
            1.0..50.0f64,
            1.0..100.0f64,
        )
            .prop_map(|(kind, wp, g, e0, mu)| {
                let eps = match kind {
                    0 => PermittivityModel::drude(wp, g),
                    1 => PermittivityModel::plasma(wp),
                    2 => PermittivityModel::dielectric(OscillatorSet::single(e0, wp)),
                    3 => PermittivityModel::GeneralizedPlasma(GeneralizedPlasma {
                        core: OscillatorSet::single(e0, 5.0),
                        omega_p: wp,
                    }),
                    _ => PermittivityModel::DcConductivity(DcConductivity {
                        core: OscillatorSet::single(e0, wp),
                        sigma0: Conductivity::Constant(g * 1e-4),
                    }),
                };
                let screening = if matches!(kind, 0 | 4) {
                    Some(0.01 + g)
                } else {
                    None
                };
                PlateMaterial {
                    permittivity: eps,
                    magnetic: MagneticModel::with_mu0(mu),
                    screening,
                }
            })
    }

    proptest! {
        #[test]
        fn coefficients_bounded(m in any_material(), xi in 1e-6..30.0f64, kperp in 0.0..100.0f64, l in 0usize..3) {
            let pt = ImaginaryFreqPoint::from_kperp(xi, kperp);
            let (tm, te) = fresnel(&m, pt, l, 300.0).unwrap();
            prop_assert!(tm.abs() <= 1.0 && te.abs() <= 1.0);
            if m.screening.is_some() {
                let r = modified_tm(&m, pt, 300.0).unwrap();
                prop_assert!(r.abs() <= 1.0);
            }
        }
    }
}
