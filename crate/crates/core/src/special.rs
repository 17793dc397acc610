//! Polylogarithms of order 2 and 3 on [-1, 1] and the exponentially scaled
//! modified Bessel function I₁.

use crate::units::ZETA3;
use std::f64::consts::PI;

const ZETA2: f64 = PI * PI / 6.0;

fn power_series(z: f64, order: i32) -> f64 {
    let mut sum = 0.0;
    let mut zn = z;
    for n in 1..100_000 {
        let term = zn / (n as f64).powi(order);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        zn *= z;
    }
    sum
}

/// Dilogarithm Li₂(z) for real z in [-1, 1].
pub fn li2(z: f64) -> f64 {
    assert!(
        (-1.0..=1.0).contains(&z),
        "li2 argument {z} outside [-1, 1]"
    );
    if z == 1.0 {
        ZETA2
    } else if z == 0.0 {
        0.0
    } else if z < 0.0 {
        // Landen: Li₂(z) = -Li₂(z/(z-1)) - ½ln²(1-z), with z/(z-1) in (0, ½]
        let w = z / (z - 1.0);
        let l = (-z).ln_1p();
        -li2(w) - 0.5 * l * l
    } else if z > 0.5 {
        ZETA2 - z.ln() * (-z).ln_1p() - power_series(1.0 - z, 2)
    } else {
        power_series(z, 2)
    }
}

/// Trilogarithm Li₃(z) for real z in [-1, 1].
///
/// Direct power series Σ zⁿ/n³ for |z| ≤ 3/4; closer to ±1 the expansion in
/// μ = ln z about z = 1 is used (and Li₃(-x) = ¼Li₃(x²) - Li₃(x) for the
/// negative branch).
pub fn li3(z: f64) -> f64 {
    assert!(
        (-1.0..=1.0).contains(&z),
        "li3 argument {z} outside [-1, 1]"
    );
    if z == 1.0 {
        ZETA3
    } else if z == -1.0 {
        -0.75 * ZETA3
    } else if z.abs() <= 0.75 {
        power_series(z, 3)
    } else if z < 0.0 {
        0.25 * li3(z * z) - li3(-z)
    } else {
        li3_near_one(z)
    }
}

fn li3_near_one(z: f64) -> f64 {
    let mu = z.ln();
    // ζ(3-k) for k = 3..=11
    const ZETA_NEG: [f64; 9] = [
        -0.5,
        -1.0 / 12.0,
        0.0,
        1.0 / 120.0,
        0.0,
        -1.0 / 252.0,
        0.0,
        1.0 / 240.0,
        0.0,
    ];
    let mut sum = ZETA3 + ZETA2 * mu + (1.5 - (-mu).ln()) * mu * mu / 2.0;
    let mut mu_k_over_fact = mu * mu / 2.0;
    for (i, zeta) in ZETA_NEG.iter().enumerate() {
        let k = (i + 3) as f64;
        mu_k_over_fact *= mu / k;
        sum += zeta * mu_k_over_fact;
    }
    sum
}

/// e^{-x} I₁(x) for x ≥ 0.
///
/// Power series below x = 20, Hankel asymptotic expansion above.
pub fn bessel_i1_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < 20.0 {
        let q = 0.25 * x * x;
        let mut term = 0.5 * x;
        let mut sum = term;
        let mut k = 0.0;
        loop {
            term *= q / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 1.0;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum * (-x).exp()
    } else {
        let mu = 4.0;
        let mut c = 1.0;
        let mut sum = 1.0;
        for k in 1..40 {
            let odd = (2 * k - 1) as f64;
            let next = -c * (mu - odd * odd) / (k as f64 * 8.0 * x);
            if next.abs() >= c.abs() {
                break;
            }
            c = next;
            sum += c;
            if c.abs() < 1e-17 {
                break;
            }
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

/// Σ_{n > N} n⁻², via Euler-Maclaurin.
pub(crate) fn inverse_square_tail(n: usize) -> f64 {
    let n = n as f64;
    1.0 / n - 0.5 / (n * n) + 1.0 / (6.0 * n.powi(3)) - 1.0 / (30.0 * n.powi(5))
}

/// Σ_{n > N} n⁻³, via Euler-Maclaurin.
pub(crate) fn inverse_cube_tail(n: usize) -> f64 {
    let n = n as f64;
    0.5 / (n * n) - 0.5 / n.powi(3) + 0.25 / n.powi(4) - 1.0 / (12.0 * n.powi(6))
}
