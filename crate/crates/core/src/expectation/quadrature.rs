//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

// Kronrod abscissae (non-negative half) and weights; every odd index is also a Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any one initial interval.
    pub max_depth: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_depth: 48,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    // QUADPACK error scaling.
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let q = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(invalid("tolerance", "abs_tol and rel_tol must be positive"));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        self.integrate_pieces(f, &[a, b])
    }

    /// Integral over `[breaks[0], breaks[last]]`, with the breakpoints as the
    /// initial partition. Breakpoints must be finite and increasing.
    pub fn integrate_pieces<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<Integral> {
        self.validate()?;
        if breaks.len() < 2 || breaks.iter().any(|x| !x.is_finite()) {
            return Err(invalid("breaks", "need at least two finite breakpoints"));
        }
        if breaks.windows(2).any(|w| w[0] > w[1]) {
            return Err(invalid("breaks", "breakpoints must be increasing"));
        }

        let mut segments: Vec<Segment> = breaks
            .windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| {
                let (value, error) = gauss_kronrod(&f, w[0], w[1]);
                Segment {
                    a: w[0],
                    b: w[1],
                    value,
                    error,
                    depth: 0,
                }
            })
            .collect();

        loop {
            let value: f64 = segments.iter().map(|s| s.value).sum();
            let error: f64 = segments.iter().map(|s| s.error).sum();
            if !value.is_finite() || !error.is_finite() {
                return Err(Error::Convergence { estimate: value, error });
            }
            if error <= self.tolerance(value) {
                return Ok(Integral { value, error });
            }
            let (worst, _) = segments
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .expect("at least one segment while error exceeds tolerance");
            let s = segments[worst];
            let mid = 0.5 * (s.a + s.b);
            if s.depth >= self.max_depth || segments.len() >= MAX_SEGMENTS || mid <= s.a || mid >= s.b {
                return Err(Error::Convergence { estimate: value, error });
            }
            let (v1, e1) = gauss_kronrod(&f, s.a, mid);
            let (v2, e2) = gauss_kronrod(&f, mid, s.b);
            segments[worst] = Segment {
                a: s.a,
                b: mid,
                value: v1,
                error: e1,
                depth: s.depth + 1,
            };
            segments.push(Segment {
                a: mid,
                b: s.b,
                value: v2,
                error: e2,
                depth: s.depth + 1,
            });
        }
    }

    /// Integral of `f` over `[0, inf)` via `x = t / (1 - t)`.
    pub fn integrate_improper<F: Fn(f64) -> f64>(&self, f: F) -> Result<Integral> {
        self.integrate(
            |t| {
                let s = 1.0 - t;
                f(t / s) / (s * s)
            },
            0.0,
            1.0,
        )
    }

    /// Integral of `f` over the whole real line via `x = t / (1 - t^2)`.
    pub fn integrate_real_line<F: Fn(f64) -> f64>(&self, f: F) -> Result<Integral> {
        self.integrate_pieces(
            |t| {
                let s = 1.0 - t * t;
                f(t / s) * (1.0 + t * t) / (s * s)
            },
            &[-1.0, 0.0, 1.0],
        )
    }
}
