//! Randomized invariants of the Lifshitz sums and the geometry layer.

use casimir_core::geometry::*;
use casimir_core::lifshitz::*;
use casimir_core::materials::*;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn material(kind: u8, wp: f64, gamma: f64, mu0: f64) -> PlateMaterial {
    let eps = match kind % 4 {
        0 => PermittivityModel::drude(wp, gamma),
        1 => PermittivityModel::plasma(wp),
        2 => PermittivityModel::dielectric(OscillatorSet::single(1.5 + wp, 5.0)),
        _ => PermittivityModel::GeneralizedPlasma(GeneralizedPlasma {
            core: OscillatorSet::single(3.0, 6.0),
            omega_p: wp,
        }),
    };
    PlateMaterial::new(eps).with_magnetic(MagneticModel::with_mu0(mu0))
}

fn tight(t: f64) -> MatsubaraGrid {
    MatsubaraGrid {
        tail_tol: 1e-12,
        quad_tol: 1e-12,
        ..MatsubaraGrid::new(t)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pressure_is_energy_gradient(
        k1 in 0u8..4, k2 in 0u8..4, wp in 1.0..12.0f64, gamma in 0.01..0.5f64,
        mu in 1.0..50.0f64, a in 150.0..3000.0f64, t in 50.0..400.0f64,
    ) {
        let spec = PlatePairSpec::new(material(k1, wp, gamma, mu), material(k2, wp * 0.7, gamma, 1.0), a);
        let grid = tight(t);
        let h = 1e-3 * a;
        let e = |a: f64| free_energy(&spec.at_separation(a), &grid).unwrap().value;
        let gradient = (e(a + h) - e(a - h)) / (2.0 * h * 1e-9);
        let p = pressure(&spec, &grid).unwrap().value;
        prop_assert!(((p + gradient) / p).abs() < 1e-5, "{} vs {}", p, -gradient);
    }

    #[test]
    fn attraction_weakens_with_distance(k in 0u8..4, wp in 1.0..12.0f64, a in 100.0..2000.0f64) {
        let spec = PlatePairSpec::symmetric(material(k, wp, 0.05, 1.0), a);
        let grid = MatsubaraGrid::new(300.0);
        let mut previous = f64::INFINITY;
        for factor in [1.0, 1.3, 1.7, 2.5, 4.0] {
            let p = pressure(&spec.at_separation(a * factor), &grid).unwrap().value;
            prop_assert!(p < 0.0 && p.abs() < previous);
            previous = p.abs();
        }
    }

    #[test]
    fn unit_permeability_is_nonmagnetic(k in 0u8..4, wp in 1.0..12.0f64, a in 100.0..3000.0f64) {
        let with_unit = PlatePairSpec::symmetric(material(k, wp, 0.05, 1.0), a);
        let plain = PlatePairSpec::symmetric(material(k, wp, 0.05, 1.0).without_magnetism(), a);
        let grid = MatsubaraGrid::new(300.0);
        prop_assert_eq!(pressure(&with_unit, &grid).unwrap().value, pressure(&plain, &grid).unwrap().value);
    }

    #[test]
    fn truncation_and_quadrature_soundness(k in 0u8..4, wp in 1.0..12.0f64, a in 100.0..3000.0f64) {
        let spec = PlatePairSpec::symmetric(material(k, wp, 0.05, 1.0), a);
        let grid = MatsubaraGrid::new(300.0);
        let base = pressure(&spec, &grid).unwrap();
        let doubled = pressure(&spec, &MatsubaraGrid { fixed_terms: Some(2 * base.terms_used), ..grid }).unwrap();
        prop_assert!(((base.value - doubled.value) / base.value).abs() < grid.tail_tol);
        let finer = pressure(&spec, &MatsubaraGrid { quad_tol: grid.quad_tol / 2.0, ..grid }).unwrap();
        prop_assert!((base.value - finer.value).abs() <= base.quadrature_error + base.truncation_tail.abs() + 1e-14 * base.value.abs());
    }

    #[test]
    fn lateral_force_is_odd_and_periodic(phase in -10.0..10.0f64, a1 in 5.0..60.0f64, a2 in 5.0..60.0f64, a in 150.0..400.0f64) {
        let plates = PlatePairSpec::symmetric(material(0, 9.0, 0.035, 1.0), a);
        let sphere = SphereSpec { radius_um: 100.0, separation_nm: a };
        let corr = CorrugationSpec { a1_nm: a1, a2_nm: a2, period_nm: 1500.0, phase };
        let grid = MatsubaraGrid::new(300.0);
        let f = |p: f64| lateral_force(&plates, &sphere, &corr.with_phase(p), &grid).unwrap().force;
        let (fp, fm) = (f(phase), f(-phase));
        prop_assert_eq!(fp, -fm);
        let shifted = f(phase + TAU);
        prop_assert!((shifted - fp).abs() <= 1e-12 * fp.abs() + 1e-300);
    }
}

fn corrugated() -> (PlatePairSpec, SphereSpec, CorrugationSpec) {
    let a = 200.0;
    (
        PlatePairSpec::symmetric(material(0, 9.0, 0.035, 1.0), a),
        SphereSpec {
            radius_um: 100.0,
            separation_nm: a,
        },
        CorrugationSpec {
            a1_nm: 60.0,
            a2_nm: 20.0,
            period_nm: 2500.0,
            phase: 1.1,
        },
    )
}

#[test]
fn lateral_force_second_order_in_amplitudes() {
    let (plates, sphere, corr) = corrugated();
    let grid = MatsubaraGrid::new(300.0);
    let scaled = |eps: f64| {
        let c = CorrugationSpec {
            a1_nm: eps * corr.a1_nm,
            a2_nm: eps * corr.a2_nm,
            ..corr
        };
        lateral_force(&plates, &sphere, &c, &grid).unwrap().force / (eps * eps)
    };
    let (f1, f2, f3) = (scaled(1e-1), scaled(1e-2), scaled(1e-3));
    // corrections are O(ε²): successive differences shrink by ~100
    let ratio = (f1 - f2) / (f2 - f3);
    assert!((ratio - 100.0).abs() < 5.0, "ratio {ratio}");
    assert!(((f2 - f3) / f3).abs() < 1e-3);
}

#[test]
fn lateral_force_stable_under_tighter_controls() {
    let (plates, sphere, corr) = corrugated();
    let grid = MatsubaraGrid::new(300.0);
    let base = lateral_force(&plates, &sphere, &corr, &grid).unwrap();
    let tighter = MatsubaraGrid {
        tail_tol: grid.tail_tol / 100.0,
        quad_tol: grid.quad_tol / 2.0,
        ..grid
    };
    let refined = lateral_force(&plates, &sphere, &corr, &tighter).unwrap();
    assert!(((base.force - refined.force) / refined.force).abs() < 1e-7);
    let doubled = MatsubaraGrid {
        fixed_terms: Some(2 * base.terms_used),
        ..grid
    };
    let longer = lateral_force(&plates, &sphere, &corr, &doubled).unwrap();
    assert!(((base.force - longer.force) / longer.force).abs() < grid.tail_tol);
}

#[test]
fn lateral_force_peak_decays_with_separation() {
    let (plates, _, corr) = corrugated();
    let grid = MatsubaraGrid::new(300.0);
    let mut previous = f64::INFINITY;
    for a in [150.0, 200.0, 300.0, 450.0] {
        let sphere = SphereSpec {
            radius_um: 100.0,
            separation_nm: a,
        };
        let peak = (1..32)
            .map(|i| {
                let phase = PI * i as f64 / 32.0;
                lateral_force(&plates, &sphere, &corr.with_phase(phase), &grid)
                    .unwrap()
                    .force
                    .abs()
            })
            .fold(0.0, f64::max);
        assert!(peak < previous);
        previous = peak;
    }
}

#[test]
fn gradient_round_trip_to_pressure() {
    let plates = PlatePairSpec::symmetric(material(0, 9.0, 0.035, 1.0), 1.0);
    let r = 150.0;
    let grid = tight(300.0);
    let force = |a: f64| {
        pfa_sphere_force(
            &plates,
            &SphereSpec {
                radius_um: r,
                separation_nm: a,
            },
            &grid,
        )
        .unwrap()
        .force
    };
    let samples: Vec<(f64, f64)> = [300.0, 500.0, 800.0]
        .iter()
        .map(|&a| {
            // five-point stencil keeps truncation well below the tolerance
            let h = 1.0;
            let d = 8.0 * (force(a + h) - force(a - h)) - (force(a + 2.0 * h) - force(a - 2.0 * h));
            (a, d / (12.0 * h * 1e-9))
        })
        .collect();
    for (a, p) in pressure_from_gradient(&samples, r).unwrap() {
        let direct = pressure(&plates.at_separation(a), &grid).unwrap().value;
        assert!(((p - direct) / direct).abs() < 1e-6, "{p} vs {direct}");
    }
}
