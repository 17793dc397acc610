//! Theory against measured points with a combined uncertainty band.

use casimir_core::{CasimirError, Result};
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;

use crate::config::TheoryError;

/// One measured point; `value` is a pressure (Pa) or force (N).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub a_nm: f64,
    pub value: f64,
    pub sigma_a_nm: f64,
    pub sigma_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentTable {
    rows: Vec<ExperimentRow>,
    pub confidence: Option<String>,
}

impl ExperimentTable {
    pub fn new(rows: Vec<ExperimentRow>, confidence: Option<String>) -> Result<Self> {
        if rows.is_empty() {
            return Err(CasimirError::EmptyTable);
        }
        for (i, r) in rows.iter().enumerate() {
            let line = i as u64 + 1;
            let finite = [r.a_nm, r.value, r.sigma_a_nm, r.sigma_value]
                .iter()
                .all(|v| v.is_finite());
            if !finite || !(r.sigma_a_nm >= 0.0) || !(r.sigma_value >= 0.0) || !(r.a_nm > 0.0) {
                return Err(CasimirError::MalformedRow {
                    line,
                    message: "values must be finite, a > 0 and uncertainties >= 0".into(),
                });
            }
            if i > 0 && !(r.a_nm > rows[i - 1].a_nm) {
                return Err(CasimirError::NonMonotone {
                    line,
                    omega: r.a_nm,
                    previous: rows[i - 1].a_nm,
                });
            }
        }
        Ok(ExperimentTable { rows, confidence })
    }

    pub fn rows(&self) -> &[ExperimentRow] {
        &self.rows
    }

    /// Reads `a_nm,value,sigma_a_nm,sigma_value` with a header row; `#`
    /// starts a comment line.
    pub fn from_reader<R: Read>(reader: R, confidence: Option<String>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.deserialize::<ExperimentRow>() {
            rows.push(record?);
        }
        Self::new(rows, confidence)
    }

    pub fn from_path(path: &Path, confidence: Option<String>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?, confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonPoint {
    pub a_nm: f64,
    pub experiment: f64,
    pub theory: f64,
    /// theory - experiment
    pub difference: f64,
    /// Combined half-width Ξ.
    pub half_width: f64,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub points: Vec<ComparisonPoint>,
    pub fraction_inside: f64,
    pub confidence: Option<String>,
}

/// Compares a theory curve, sampled at increasing separations (nm), with an
/// experiment. Theory values and slopes at the measured separations come
/// from a cubic Hermite interpolant, so nodes are reproduced exactly.
pub fn compare(
    theory: &[(f64, f64)],
    experiment: &ExperimentTable,
    model: &TheoryError,
) -> Result<ComparisonReport> {
    let curve = Hermite::new(theory)?;
    let mut points = Vec::with_capacity(experiment.rows.len());
    for r in &experiment.rows {
        let (value, slope) = curve.eval(r.a_nm)?;
        let sigma_th = model.sigma(value);
        let half_width =
            (r.sigma_value.powi(2) + (r.sigma_a_nm * slope).powi(2) + sigma_th.powi(2)).sqrt();
        let difference = value - r.value;
        points.push(ComparisonPoint {
            a_nm: r.a_nm,
            experiment: r.value,
            theory: value,
            difference,
            half_width,
            inside: difference.abs() <= half_width,
        });
    }
    let inside = points.iter().filter(|p| p.inside).count();
    Ok(ComparisonReport {
        fraction_inside: inside as f64 / points.len() as f64,
        points,
        confidence: experiment.confidence.clone(),
    })
}

/// Cubic Hermite interpolant with three-point slope estimates.
struct Hermite<'a> {
    nodes: &'a [(f64, f64)],
    slopes: Vec<f64>,
}

impl<'a> Hermite<'a> {
    fn new(nodes: &'a [(f64, f64)]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(CasimirError::EmptyTable);
        }
        if nodes.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(CasimirError::InvalidInput(
                "theory abscissae must be strictly increasing".into(),
            ));
        }
        let n = nodes.len();
        let secant = |i: usize| (nodes[i + 1].1 - nodes[i].1) / (nodes[i + 1].0 - nodes[i].0);
        let slopes = (0..n)
            .map(|i| match n {
                1 => 0.0,
                2 => secant(0),
                _ => {
                    // derivative of the parabola through three neighbours
                    let j = i.clamp(1, n - 2);
                    let (x0, x1, x2) = (nodes[j - 1].0, nodes[j].0, nodes[j + 1].0);
                    let (d0, d1) = (secant(j - 1), secant(j));
                    let x = nodes[i].0;
                    d0 + (d1 - d0) * (2.0 * x - x0 - x1) / (x2 - x0)
                }
            })
            .collect();
        Ok(Hermite { nodes, slopes })
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let n = self.nodes.len();
        let (lo, hi) = (self.nodes[0].0, self.nodes[n - 1].0);
        // tolerate rounding at the ends of the sweep
        let slack = 1e-9 * hi.abs();
        if !(x >= lo - slack && x <= hi + slack) {
            return Err(CasimirError::OutOfRange(x));
        }
        if n == 1 {
            return Ok((self.nodes[0].1, 0.0));
        }
        let x = x.clamp(lo, hi);
        let i = self.nodes.partition_point(|p| p.0 <= x).clamp(1, n - 1) - 1;
        let ((x0, y0), (x1, y1)) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let (t2, t3) = (t * t, t * t * t);
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let slope = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        Ok((value, slope))
    }
}
