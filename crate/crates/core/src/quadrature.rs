//! Globally adaptive Gauss-Kronrod (G10/K21) integration and compensated
//! summation.

use crate::error::{CasimirError, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, lower: f64, upper: f64) -> Panel {
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let fc = f(center);
    let mut left = [0.0; 10];
    let mut right = [0.0; 10];
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = half * XGK[j];
        left[j] = f(center - x);
        right[j] = f(center + x);
        let pair = left[j] + right[j];
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((left[j] - mean).abs() + (right[j] - mean).abs());
    }
    asc *= half.abs();
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK rescaling: the raw Gauss/Kronrod difference is very
    // pessimistic for smooth integrands.
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * value.abs();
    Panel {
        lower,
        upper,
        value,
        error: error.max(floor),
    }
}

/// Adaptive integration controls.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_panels: 400,
        }
    }
}

impl Adaptive {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Adaptive {
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrates `f` over the consecutive intervals defined by `breaks`
    /// (at least two strictly increasing points).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<Integral> {
        assert!(breaks.len() >= 2);
        let mut panels: Vec<Panel> = breaks
            .windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| gk21(&f, w[0], w[1]))
            .collect();
        if panels.is_empty() {
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
            });
        }
        loop {
            let (value, error) = totals(&panels);
            if !value.is_finite() || !error.is_finite() {
                return Err(CasimirError::QuadratureNonConvergence {
                    lower: breaks[0],
                    upper: *breaks.last().unwrap(),
                    value,
                    error,
                });
            }
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                return Ok(Integral { value, error });
            }
            if panels.len() >= self.max_panels {
                // accept when the remaining error is at rounding level
                if error <= 1e3 * f64::EPSILON * sum_abs(&panels) {
                    return Ok(Integral { value, error });
                }
                return Err(CasimirError::QuadratureNonConvergence {
                    lower: breaks[0],
                    upper: *breaks.last().unwrap(),
                    value,
                    error,
                });
            }
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
                .map(|(i, _)| i)
                .unwrap();
            let p = panels.swap_remove(worst);
            let mid = 0.5 * (p.lower + p.upper);
            if mid <= p.lower || mid >= p.upper {
                // interval cannot be bisected further
                panels.push(Panel { error: 0.0, ..p });
                continue;
            }
            panels.push(gk21(&f, p.lower, mid));
            panels.push(gk21(&f, mid, p.upper));
        }
    }
}

fn totals(panels: &[Panel]) -> (f64, f64) {
    let mut value = NeumaierSum::default();
    let mut error = 0.0;
    let mut sorted: Vec<&Panel> = panels.iter().collect();
    sorted.sort_by(|a, b| a.lower.total_cmp(&b.lower));
    for p in sorted {
        value.add(p.value);
        error += p.error;
    }
    (value.total(), error)
}

fn sum_abs(panels: &[Panel]) -> f64 {
    panels.iter().map(|p| p.value.abs()).sum()
}

/// Kahan-Babuška-Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
