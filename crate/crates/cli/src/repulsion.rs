//! Ordering test ε1(iξ) < ε0(iξ) < ε2(iξ) for repulsion across a liquid gap.

use casimir_core::materials::PermittivityModel;
use casimir_core::Result;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepulsionSample {
    pub xi: f64,
    pub eps0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub ordered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepulsionVerdict {
    pub holds: bool,
    pub samples: Vec<RepulsionSample>,
    /// ξ values where the strict ordering fails.
    pub violations: Vec<f64>,
}

/// `eps0` fills the gap between half-spaces `eps1` and `eps2`.
pub fn repulsion_check(
    eps0: &PermittivityModel,
    eps1: &PermittivityModel,
    eps2: &PermittivityModel,
    xi_grid: &[f64],
    temperature: f64,
) -> Result<RepulsionVerdict> {
    let samples = xi_grid
        .iter()
        .map(|&xi| {
            let (e0, e1, e2) = (
                eps0.eval(xi, temperature)?,
                eps1.eval(xi, temperature)?,
                eps2.eval(xi, temperature)?,
            );
            Ok(RepulsionSample {
                xi,
                eps0: e0,
                eps1: e1,
                eps2: e2,
                ordered: e1 < e0 && e0 < e2,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<f64> = samples
        .iter()
        .filter(|s| !s.ordered)
        .map(|s| s.xi)
        .collect();
    Ok(RepulsionVerdict {
        holds: violations.is_empty(),
        samples,
        violations,
    })
}
