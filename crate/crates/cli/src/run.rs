//! Scenario execution: sweeps dispatched to the rayon pool, results
//! assembled in sweep order.

use casimir_core::geometry::{lateral_force, pfa_sphere_force, SphereSpec};
use casimir_core::lifshitz::{
    casimir_polder, entropy, extrapolate_to_zero, free_energy, ideal_metal_free_energy,
    ideal_metal_pressure, modulation_diff, pressure, FreeEnergyResult, MatsubaraGrid,
    PlatePairSpec,
};
use casimir_core::optics::{kramers_kronig, parse_optical_csv};
use casimir_core::units::UM_TO_NM;
use casimir_core::CasimirError;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::compare::{compare, ExperimentTable};
use crate::config::{Axis, CompareQuantity, RunConfig, Scenario};
use crate::error::CliError;
use crate::repulsion::repulsion_check;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
}

impl Cell {
    /// Nine significant digits in scientific notation.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.8e}"),
            Cell::Flag(b) => b.to_string(),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Num(v) => v,
            Cell::Flag(b) => f64::from(u8::from(b)),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

/// Tabular result plus the metadata written to the JSON sidecar.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Scenario-specific diagnostics, one entry per row where applicable.
    pub diagnostics: Value,
    pub summary: Value,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct SumDiagnostics {
    terms_used: usize,
    quadrature_error: f64,
    truncation_tail: f64,
    /// The l = 0 modified TM term was taken numerically near ξ = 0.
    zero_frequency_probe: bool,
}

impl From<&FreeEnergyResult> for SumDiagnostics {
    fn from(r: &FreeEnergyResult) -> Self {
        SumDiagnostics {
            terms_used: r.terms_used,
            quadrature_error: r.quadrature_error,
            truncation_tail: r.truncation_tail,
            zero_frequency_probe: r.zero_frequency_probe,
        }
    }
}

/// Notes recorded with every run describing modelling conventions.
pub fn model_notes() -> Vec<&'static str> {
    vec![
        "frequencies in eV; separations in um at the interface and nm internally",
        "magnetic permeability enters only the zero-frequency Matsubara term",
        "the zero-frequency plasma TE coefficient uses mu0 both in front of q and inside the square root",
        "with modified TM enabled, its zero-frequency value is probed at xi = 1e-8 eV",
        "tabulated Im eps beyond the last row is continued as omega^-3",
        "sphere forces use the proximity force approximation",
    ]
}

pub fn run(config: &RunConfig, scenario: Scenario) -> Result<RunOutput, CliError> {
    config.validate(scenario)?;
    let points = config.sweep.expect("validated").points();
    match scenario {
        Scenario::Pressure => run_pressure(config, &points),
        Scenario::FreeEnergy => run_free_energy(config, &points),
        Scenario::SphereForce => run_sphere_force(config, &points),
        Scenario::AtomWall => run_atom_wall(config, &points),
        Scenario::Lateral => run_lateral(config, &points),
        Scenario::Entropy => run_entropy(config, &points),
        Scenario::KkTransform => run_kk(config, &points),
        Scenario::ModulationDiff => run_modulation(config, &points),
        Scenario::Compare => run_compare(config, &points),
        Scenario::RepulsionCheck => run_repulsion(config, &points),
    }
}

fn at(axis: Axis, x: f64) -> String {
    match axis {
        Axis::A => format!("a = {x} um"),
        Axis::T => format!("T = {x} K"),
        Axis::Phi => format!("phi = {x} rad"),
        Axis::Xi => format!("xi = {x} eV"),
    }
}

/// Evaluates `f` at every sweep point in parallel, keeping sweep order and
/// tagging failures with the offending coordinate.
fn sweep<T: Send>(
    axis: Axis,
    points: &[f64],
    f: impl Fn(f64) -> Result<T, CasimirError> + Sync,
) -> Result<Vec<T>, CliError> {
    points
        .par_iter()
        .map(|&x| f(x).map_err(|e| CliError::numerical(at(axis, x), e)))
        .collect()
}

fn plate_spec(config: &RunConfig, pair: &[String; 2], separation_nm: f64) -> PlatePairSpec {
    PlatePairSpec {
        use_modified_tm: config.use_modified_tm,
        ..PlatePairSpec::new(
            config.material(&pair[0]).clone(),
            config.material(&pair[1]).clone(),
            separation_nm,
        )
    }
}

fn plates(config: &RunConfig, separation_nm: f64) -> PlatePairSpec {
    plate_spec(
        config,
        config.plates.as_ref().expect("validated"),
        separation_nm,
    )
}

fn grid(config: &RunConfig) -> MatsubaraGrid {
    config
        .accuracy
        .grid(config.temperature_k.expect("validated"))
}

fn sphere(config: &RunConfig, separation_nm: f64) -> SphereSpec {
    SphereSpec {
        radius_um: config.sphere.expect("validated").radius_um,
        separation_nm,
    }
}

fn run_pressure(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let grid = grid(config);
    let (m1, m2) = config.plate_pair();
    let magnetic = m1.magnetic.is_magnetic() || m2.magnetic.is_magnetic();
    let results = sweep(Axis::A, points, |a_um| {
        let spec = plates(config, a_um * UM_TO_NM);
        let p = pressure(&spec, &grid)?;
        // η compares against the same pair with μ ≡ 1
        let reference = if magnetic {
            Some(pressure(&spec.without_magnetism(), &grid)?)
        } else {
            None
        };
        Ok((a_um, spec.separation_nm, p, reference))
    })?;
    let rows = results
        .iter()
        .map(|(a_um, a_nm, p, reference)| {
            let eta = reference.map_or(0.0, |r| (p.value - r.value) / r.value * 100.0);
            vec![
                (*a_um).into(),
                p.value.into(),
                (p.value / ideal_metal_pressure(*a_nm)).into(),
                eta.into(),
            ]
        })
        .collect();
    let diagnostics = results
        .iter()
        .map(|(_, _, p, r)| json!({"pressure": SumDiagnostics::from(p), "nonmagnetic": r.as_ref().map(SumDiagnostics::from)}))
        .collect();
    Ok(RunOutput {
        columns: vec!["a_um", "P_Pa", "P_over_P0", "eta_percent"],
        rows,
        diagnostics,
        summary: json!({"magnetic": magnetic}),
    })
}

fn run_free_energy(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let grid = grid(config);
    let results = sweep(Axis::A, points, |a_um| {
        let spec = plates(config, a_um * UM_TO_NM);
        Ok((
            a_um,
            free_energy(&spec, &grid)?,
            ideal_metal_free_energy(spec.separation_nm),
        ))
    })?;
    Ok(RunOutput {
        columns: vec!["a_um", "F_J_m2", "F_over_F0"],
        rows: results
            .iter()
            .map(|(a, f, f0)| vec![(*a).into(), f.value.into(), (f.value / f0).into()])
            .collect(),
        diagnostics: results
            .iter()
            .map(|(_, f, _)| json!(SumDiagnostics::from(f)))
            .collect(),
        summary: Value::Null,
    })
}

fn run_sphere_force(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let grid = grid(config);
    let results = sweep(Axis::A, points, |a_um| {
        let a_nm = a_um * UM_TO_NM;
        Ok((
            a_um,
            pfa_sphere_force(&plates(config, a_nm), &sphere(config, a_nm), &grid)?,
        ))
    })?;
    Ok(RunOutput {
        columns: vec!["a_um", "F_N", "pfa_error_bound"],
        rows: results.iter().map(|(a, f)| vec![(*a).into(), f.force.into(), f.relative_error_bound.into()]).collect(),
        diagnostics: results
            .iter()
            .map(|(_, f)| json!({"sum": SumDiagnostics::from(&f.plate_energy), "warning": f.warning}))
            .collect(),
        summary: Value::Null,
    })
}

fn run_atom_wall(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let grid = grid(config);
    let atom = config.atom.expect("validated");
    let wall = config.material(config.wall.as_ref().expect("validated"));
    let results = sweep(Axis::A, points, |a_um| {
        let (e, f) = casimir_polder(&atom, wall, a_um * UM_TO_NM, &grid)?;
        Ok((a_um, e, f))
    })?;
    Ok(RunOutput {
        columns: vec!["a_um", "energy_J", "force_N"],
        rows: results.iter().map(|(a, e, f)| vec![(*a).into(), e.value.into(), f.value.into()]).collect(),
        diagnostics: results
            .iter()
            .map(|(_, e, f)| json!({"energy": SumDiagnostics::from(e), "force": SumDiagnostics::from(f)}))
            .collect(),
        summary: Value::Null,
    })
}

fn run_lateral(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let grid = grid(config);
    let a_nm = config.separation_um.expect("validated") * UM_TO_NM;
    let spec = plates(config, a_nm);
    let sph = sphere(config, a_nm);
    let corr = config.corrugation.expect("validated");
    let results = sweep(Axis::Phi, points, |phi| {
        Ok((
            phi,
            lateral_force(&spec, &sph, &corr.with_phase(phi), &grid)?,
        ))
    })?;
    let pfa_valid = results.iter().all(|(_, f)| f.pfa_valid);
    Ok(RunOutput {
        columns: vec!["phi_rad", "F_lat_N", "beta"],
        rows: results
            .iter()
            .map(|(phi, f)| vec![(*phi).into(), f.force.into(), f.beta.into()])
            .collect(),
        diagnostics: results
            .iter()
            .map(|(_, f)| json!({"terms_used": f.terms_used, "error": f.error}))
            .collect(),
        summary: json!({
            "pfa_parameter": results.first().map(|(_, f)| f.pfa_parameter),
            "pfa_valid": pfa_valid,
        }),
    })
}

fn run_entropy(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let a_nm = config.separation_um.expect("validated") * UM_TO_NM;
    let spec = plates(config, a_nm);
    // the step and truncation are chosen per temperature by the core
    let base = config.accuracy.grid(points[0]);
    let results = sweep(Axis::T, points, |t| Ok((t, entropy(&spec, &base, t)?)))?;
    let samples: Vec<(f64, f64)> = results.iter().map(|(t, s)| (*t, s.value)).collect();
    let degree = config
        .extrapolation_degree
        .unwrap_or(2)
        .min(samples.len().saturating_sub(1));
    let s0 = if degree >= 1 {
        Some(
            extrapolate_to_zero(&samples, degree)
                .map_err(|e| CliError::numerical("T -> 0 extrapolation", e))?,
        )
    } else {
        None
    };
    Ok(RunOutput {
        columns: vec!["T_K", "S_J_m2K", "S_error"],
        rows: results
            .iter()
            .map(|(t, s)| vec![(*t).into(), s.value.into(), s.error.into()])
            .collect(),
        diagnostics: results
            .iter()
            .map(|(_, s)| json!({"step_K": s.step, "terms_used": s.terms_used}))
            .collect(),
        summary: json!({"extrapolation_degree": degree, "entropy_at_zero": s0}),
    })
}

fn run_kk(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let kk = config.kk.as_ref().expect("validated");
    let table = parse_optical_csv(&kk.table)
        .map_err(|e| CliError::Config(vec![format!("{}: {e}", kk.table.display())]))?;
    let values = sweep(Axis::Xi, points, |xi| {
        Ok((xi, kramers_kronig(&table, &kk.extrapolation, xi)?))
    })?;
    Ok(RunOutput {
        columns: vec!["xi_eV", "eps"],
        rows: values
            .iter()
            .map(|(xi, e)| vec![(*xi).into(), (*e).into()])
            .collect(),
        diagnostics: Value::Null,
        summary: json!({"table_rows": table.len(), "first_omega_eV": table.first_omega()}),
    })
}

fn run_modulation(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let grid = grid(config);
    let light_pair = config.light.as_ref().expect("validated");
    let results = sweep(Axis::A, points, |a_um| {
        let a_nm = a_um * UM_TO_NM;
        let dark = plates(config, a_nm);
        let light = plate_spec(config, light_pair, a_nm);
        Ok((
            a_um,
            modulation_diff(&light, &dark, &grid, &sphere(config, a_nm))?,
        ))
    })?;
    Ok(RunOutput {
        columns: vec!["a_um", "dF_N"],
        rows: results
            .iter()
            .map(|(a, d)| vec![(*a).into(), (*d).into()])
            .collect(),
        diagnostics: Value::Null,
        summary: Value::Null,
    })
}

fn run_compare(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let cmp = config.compare.as_ref().expect("validated");
    let experiment = ExperimentTable::from_path(&cmp.experiment, cmp.confidence.clone())
        .map_err(|e| CliError::Config(vec![format!("{}: {e}", cmp.experiment.display())]))?;
    let grid = grid(config);
    let theory = sweep(Axis::A, points, |a_um| {
        let a_nm = a_um * UM_TO_NM;
        let spec = plates(config, a_nm);
        let value = match cmp.quantity {
            CompareQuantity::Pressure => pressure(&spec, &grid)?.value,
            CompareQuantity::SphereForce => {
                pfa_sphere_force(&spec, &sphere(config, a_nm), &grid)?.force
            }
        };
        Ok((a_nm, value))
    })?;
    let report = compare(&theory, &experiment, &cmp.theory_error).map_err(|e| match e {
        CasimirError::OutOfRange(a) => CliError::Config(vec![format!(
            "experimental separation {a} nm lies outside the theory sweep"
        )]),
        other => CliError::numerical("comparison", other),
    })?;
    Ok(RunOutput {
        columns: vec![
            "a_nm",
            "experiment",
            "theory",
            "difference",
            "half_width",
            "inside",
        ],
        rows: report
            .points
            .iter()
            .map(|p| {
                vec![
                    p.a_nm.into(),
                    p.experiment.into(),
                    p.theory.into(),
                    p.difference.into(),
                    p.half_width.into(),
                    p.inside.into(),
                ]
            })
            .collect(),
        diagnostics: Value::Null,
        summary: json!({"fraction_inside": report.fraction_inside, "confidence": report.confidence}),
    })
}

fn run_repulsion(config: &RunConfig, points: &[f64]) -> Result<RunOutput, CliError> {
    let r = config.repulsion.as_ref().expect("validated");
    let verdict = repulsion_check(
        config.permittivity(&r.eps0),
        config.permittivity(&r.eps1),
        config.permittivity(&r.eps2),
        points,
        config.temperature_k.expect("validated"),
    )
    .map_err(|e| CliError::numerical("permittivity evaluation", e))?;
    Ok(RunOutput {
        columns: vec!["xi_eV", "eps0", "eps1", "eps2", "ordered"],
        rows: verdict
            .samples
            .iter()
            .map(|s| {
                vec![
                    s.xi.into(),
                    s.eps0.into(),
                    s.eps1.into(),
                    s.eps2.into(),
                    s.ordered.into(),
                ]
            })
            .collect(),
        diagnostics: Value::Null,
        summary: json!({"holds": verdict.holds, "violations_xi_eV": verdict.violations}),
    })
}
