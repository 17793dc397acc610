//! Permittivity along the imaginary axis from tabulated optical data.
//!
//! ε(iξ) = 1 + (2/π)∫₀^∞ ω Im ε(ω)/(ξ² + ω²) dω, split into a Drude segment
//! below the first tabulated frequency, the table itself (piecewise power
//! law in ω) and an ω⁻³ tail above the last row.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use crate::error::{CasimirError, Result};
use crate::quadrature::Adaptive;

/// Im ε = 2·Re n·Im n.
pub fn im_eps_from_nk(n_re: f64, n_im: f64) -> f64 {
    2.0 * n_re * n_im
}

/// Tabulated Im ε(ω), ω in eV, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
}

impl OpticalDataTable {
    /// Rows of (ω, Im ε); validates ordering and signs.
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(CasimirError::EmptyTable);
        }
        for (i, &(w, e)) in rows.iter().enumerate() {
            let line = i as u64 + 1;
            if !(w > 0.0) || !w.is_finite() {
                return Err(CasimirError::MalformedRow {
                    line,
                    message: format!("frequency must be positive, got {w}"),
                });
            }
            if !(e >= 0.0) || !e.is_finite() {
                return Err(CasimirError::MalformedRow {
                    line,
                    message: format!("Im eps must be non-negative, got {e}"),
                });
            }
            if i > 0 && w <= rows[i - 1].0 {
                return Err(CasimirError::NonMonotone {
                    line,
                    omega: w,
                    previous: rows[i - 1].0,
                });
            }
        }
        let (omega, im_eps) = rows.into_iter().unzip();
        Ok(OpticalDataTable { omega, im_eps })
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.im_eps.iter().copied())
    }

    pub fn first_omega(&self) -> f64 {
        self.omega[0]
    }

    /// The same table with every Im ε multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        OpticalDataTable {
            omega: self.omega.clone(),
            im_eps: self.im_eps.iter().map(|e| e * factor).collect(),
        }
    }

    /// Interpolated Im ε inside the table (power law between rows, linear
    /// where either endpoint vanishes).
    pub fn interpolate(&self, omega: f64) -> f64 {
        let n = self.omega.len();
        if n == 1 || omega <= self.omega[0] {
            return self.im_eps[0];
        }
        if omega >= self.omega[n - 1] {
            return self.im_eps[n - 1];
        }
        let i = self.omega.partition_point(|&w| w <= omega) - 1;
        segment_value(
            self.omega[i],
            self.omega[i + 1],
            self.im_eps[i],
            self.im_eps[i + 1],
            omega,
        )
    }
}

fn segment_value(w0: f64, w1: f64, f0: f64, f1: f64, w: f64) -> f64 {
    if f0 > 0.0 && f1 > 0.0 {
        let p = (f1 / f0).ln() / (w1 / w0).ln();
        f0 * (w / w0).powf(p)
    } else {
        f0 + (f1 - f0) * (w - w0) / (w1 - w0)
    }
}

/// Low-frequency extrapolation below the first tabulated row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Extrapolation {
    Drude { omega_p: f64, gamma: f64 },
    None,
}

/// Relative accuracy of each transform.
const KK_TOL: f64 = 1e-9;

/// ε(iξ) for ξ > 0 from the table and the low-frequency extrapolation. The
/// extrapolation joins at the first tabulated frequency.
pub fn kramers_kronig(table: &OpticalDataTable, ext: &Extrapolation, xi: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(CasimirError::InvalidInput(format!(
            "Kramers-Kronig transform requires xi > 0, got {xi}"
        )));
    }
    if table.is_empty() {
        return Err(CasimirError::EmptyTable);
    }
    let join = table.first_omega();
    let low = match *ext {
        Extrapolation::Drude { omega_p, gamma } => drude_segment(omega_p, gamma, join, xi)?,
        Extrapolation::None => 0.0,
    };
    let body = table_segment(table, xi)?;
    let tail = cubic_tail(
        table.omega[table.len() - 1],
        table.im_eps[table.len() - 1],
        xi,
    );
    Ok(1.0 + 2.0 / PI * (low + body + tail))
}

/// ∫₀^W ω_p²γ/((ω² + γ²)(ω² + ξ²)) dω.
fn drude_segment(omega_p: f64, gamma: f64, upper: f64, xi: f64) -> Result<f64> {
    let wp2 = omega_p * omega_p;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if (xi - gamma).abs() > 1e-3 * (xi + gamma) {
        let g = |s: f64| (upper / s).atan() / s;
        return Ok(wp2 * gamma * (g(gamma) - g(xi)) / ((xi - gamma) * (xi + gamma)));
    }
    // partial fractions cancel near ξ = γ: integrate in u = ln ω instead
    drude_segment_quadrature(omega_p, gamma, upper, xi)
}

pub(crate) fn drude_segment_quadrature(
    omega_p: f64,
    gamma: f64,
    upper: f64,
    xi: f64,
) -> Result<f64> {
    let wp2 = omega_p * omega_p;
    let f = |u: f64| {
        let w = u.exp();
        let w2 = w * w;
        // ω dω = ω² du
        wp2 * gamma * w / ((w2 + gamma * gamma) * (w2 + xi * xi))
    };
    let top = upper.ln();
    let scale = gamma.min(xi).min(upper);
    // below u_min the integrand is smaller than e^{u}/(γ²ξ²)·ω_p²γ
    let bottom = (scale * 1e-16).ln();
    let mut breaks = vec![bottom];
    let mut u = scale.ln() - 2.0;
    while u > bottom {
        breaks.push(u);
        u -= 4.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.retain(|&b| b < top);
    breaks.push(top);
    breaks.dedup();
    let r = Adaptive::with_rel_tol(1e-12).integrate(f, &breaks)?;
    Ok(r.value)
}

/// ∫ over the tabulated range, in u = ln ω.
fn table_segment(table: &OpticalDataTable, xi: f64) -> Result<f64> {
    let n = table.len();
    if n < 2 {
        return Ok(0.0);
    }
    let xi2 = xi * xi;
    let f = |u: f64| {
        let w = u.exp();
        let w2 = w * w;
        w2 * table.interpolate(w) / (xi2 + w2)
    };
    let breaks: Vec<f64> = table.omega.iter().map(|w| w.ln()).collect();
    let quad = Adaptive {
        rel_tol: KK_TOL,
        abs_tol: 0.0,
        max_panels: n + 4000,
    };
    Ok(quad.integrate(f, &breaks)?.value)
}

/// ∫_{ω_N}^∞ ω f_N(ω_N/ω)³/(ξ² + ω²) dω.
fn cubic_tail(omega_n: f64, f_n: f64, xi: f64) -> f64 {
    if f_n == 0.0 {
        return 0.0;
    }
    let x = xi / omega_n;
    if x < 1e-2 {
        let x2 = x * x;
        f_n * (1.0 / 3.0 - x2 / 5.0 + x2 * x2 / 7.0 - x2 * x2 * x2 / 9.0)
    } else {
        f_n * omega_n.powi(3) / (xi * xi) * (1.0 / omega_n - x.atan() / xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Columns {
    Nk,
    ImEps,
}

/// Reads a CSV table with header `omega_eV,n,k` or `omega_eV,im_eps`.
/// Lines starting with `#` are comments.
pub fn parse_optical_csv(path: impl AsRef<Path>) -> Result<OpticalDataTable> {
    let file = std::fs::File::open(path)?;
    parse_optical_reader(file)
}

pub fn parse_optical_reader<R: Read>(reader: R) -> Result<OpticalDataTable> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    let header_line = csv.position().line().max(1);
    let names: Vec<&str> = headers.iter().collect();
    let columns = match names.as_slice() {
        ["omega_eV", "n", "k"] => Columns::Nk,
        ["omega_eV", "im_eps"] => Columns::ImEps,
        _ => {
            return Err(CasimirError::MalformedRow {
                line: header_line,
                message: format!(
                    "header must be `omega_eV,n,k` or `omega_eV,im_eps`, got `{}`",
                    names.join(",")
                ),
            })
        }
    };
    let width = if columns == Columns::Nk { 3 } else { 2 };
    let mut rows: Vec<(f64, f64)> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    for record in csv.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(CasimirError::MalformedRow {
                line,
                message: format!("expected {width} fields, found {}", record.len()),
            });
        }
        let mut values = [0.0; 3];
        for (slot, field) in values.iter_mut().zip(record.iter()) {
            *slot = field.parse().map_err(|_| CasimirError::MalformedRow {
                line,
                message: format!("`{field}` is not a number"),
            })?;
        }
        let im = match columns {
            Columns::Nk => {
                if values[2] < 0.0 {
                    return Err(CasimirError::MalformedRow {
                        line,
                        message: format!(
                            "extinction coefficient must be non-negative, got {}",
                            values[2]
                        ),
                    });
                }
                im_eps_from_nk(values[1], values[2])
            }
            Columns::ImEps => values[1],
        };
        rows.push((values[0], im));
        lines.push(line);
    }
    // re-tag row errors with file line numbers
    OpticalDataTable::new(rows).map_err(|e| match e {
        CasimirError::MalformedRow { line, message } => CasimirError::MalformedRow {
            line: lines[line as usize - 1],
            message,
        },
        CasimirError::NonMonotone {
            line,
            omega,
            previous,
        } => CasimirError::NonMonotone {
            line: lines[line as usize - 1],
            omega,
            previous,
        },
        other => other,
    })
}
