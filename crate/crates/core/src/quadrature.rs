//! Adaptive Gauss–Kronrod quadrature on `[0, ∞)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (descending, last is the midpoint) and weights;
// the 7-point Gauss rule uses the odd-indexed abscissae.
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

/// How the infinite upper limit is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailStrategy {
    /// Map `[0, ∞)` onto `[0, 1)` with `x = s/(1 - s)`.
    Substitution,
    /// Integrate `[0, L]`, doubling `L` until the added piece is negligible.
    Truncation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff_strategy: TailStrategy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
            tail_cutoff_strategy: TailStrategy::Substitution,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

/// `(kronrod, |kronrod - gauss|)` on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = h * x;
        let pair = f(c - dx) + f(c + dx);
        kron += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration of `f` over the finite interval `[a, b]`.
/// Returns `(estimate, error estimate)`.
pub fn integrate_finite(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate()?;
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut pieces = 1;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Quadrature { estimate: total, error: total_err, subdivisions: pieces });
        }
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok((total, total_err));
        }
        if pieces >= spec.max_subdivisions {
            return Err(Error::Quadrature { estimate: total, error: total_err, subdivisions: pieces });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Piece { a: mid, b: worst.b, value: rv, error: re });
        pieces += 1;
    }
}

/// `∫_0^∞ f(x) dx`.
pub fn improper_quadrature(f: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    match spec.tail_cutoff_strategy {
        TailStrategy::Substitution => {
            let g = |s: f64| {
                let one_minus = 1.0 - s;
                let v = f(s / one_minus) / (one_minus * one_minus);
                // far tail: the integrand underflowed against the Jacobian
                if v.is_nan() {
                    0.0
                } else {
                    v
                }
            };
            integrate_finite(g, 0.0, 1.0, spec).map(|(v, _)| v)
        }
        TailStrategy::Truncation => {
            let mut lo = 0.0;
            let mut hi = 1.0;
            let mut total = 0.0;
            let mut used = 0;
            loop {
                let (piece, _) = integrate_finite(&f, lo, hi, spec)?;
                total += piece;
                used += 1;
                if piece.abs() <= spec.abs_tol.max(spec.rel_tol * total.abs()) && used > 1 {
                    return Ok(total);
                }
                if used >= 64 {
                    return Err(Error::Quadrature { estimate: total, error: piece.abs(), subdivisions: used });
                }
                lo = hi;
                hi *= 2.0;
            }
        }
    }
}

/// `∫_0^∞ g(x) dx` after `u = log(1 + λx)/λ`, i.e.
/// `∫_0^∞ g((e^{λu} - 1)/λ) e^{λu} du`. Integrands carrying a factor
/// `(1 + λx)^{-1/λ}` become exponentially damped in `u`.
pub fn degenerate_log_quadrature(
    g: impl Fn(f64) -> f64,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Domain("substitution needs λ > 0".into()));
    }
    improper_quadrature(
        |u| {
            let x = (lambda * u).exp_m1() / lambda;
            let v = g(x) * (lambda * u).exp();
            if v.is_nan() {
                0.0
            } else {
                v
            }
        },
        spec,
    )
}
