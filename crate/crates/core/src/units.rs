//! Physical constants and unit conventions.
//!
//! Frequencies and energies are carried in eV (ħω convention), lengths in nm.
//! Wave numbers are expressed in eV as well, i.e. `ħc·k`, so that
//! `k [nm⁻¹] = k_ev / HBAR_C_EV_NM`.

/// Boltzmann constant in eV/K (CODATA 2018, exact).
pub const K_B_EV: f64 = 8.617_333_262e-5;

/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// Joules per eV (exact).
pub const EV_TO_J: f64 = 1.602_176_634e-19;

/// Boltzmann constant in J/K.
pub const K_B_J: f64 = K_B_EV * EV_TO_J;

/// ħc in J·m.
pub const HBAR_C_J_M: f64 = HBAR_C_EV_NM * 1e-9 * EV_TO_J;

pub const NM_TO_M: f64 = 1e-9;
pub const UM_TO_NM: f64 = 1e3;

/// cm³ → nm³, used for atomic polarizabilities quoted in cm³.
pub const CM3_TO_NM3: f64 = 1e21;

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Thermal energy k_B·T in eV.
#[inline]
pub fn thermal_energy_ev(temperature_k: f64) -> f64 {
    K_B_EV * temperature_k
}

/// Matsubara frequency ħξ_l = 2π k_B T l in eV.
#[inline]
pub fn matsubara_xi_ev(temperature_k: f64, l: usize) -> f64 {
    2.0 * std::f64::consts::PI * K_B_EV * temperature_k * l as f64
}

/// Dimensionless ζ = 2aξ/c for a separation in nm and a frequency in eV.
#[inline]
pub fn reduced_frequency(separation_nm: f64, xi_ev: f64) -> f64 {
    2.0 * separation_nm * xi_ev / HBAR_C_EV_NM
}
