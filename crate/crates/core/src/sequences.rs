//! Degenerate derangement polynomials and their companion sequences.
//!
//! Most sequences have two independent routes: an explicit finite sum (or
//! recurrence) and extraction from a truncated generating series. The plain
//! functions return the explicit route; the `*_series` variants extract from
//! the generating function. With the `cross-check` feature enabled, debug
//! builds assert that both routes agree on every call.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int, ratio_serde, Poly, Scalar};
use crate::series::{deg_exp, deg_log, Series};

/// Generalized falling factorial `(x)_{n,λ} = x(x-λ)...(x-(n-1)λ)`.
pub fn falling_deg(x: &Scalar, n: usize, lambda: &Scalar) -> Scalar {
    let mut acc = Scalar::one();
    for j in 0..n {
        acc *= x - lambda * int(j as i64);
    }
    acc
}

/// `(x)_{0,λ}, ..., (x)_{n_max,λ}`.
pub fn falling_deg_seq(x: &Scalar, n_max: usize, lambda: &Scalar) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = Scalar::one();
    out.push(acc.clone());
    for j in 0..n_max {
        acc *= x - lambda * int(j as i64);
        out.push(acc.clone());
    }
    out
}

/// `(x)_{n,λ}` as a polynomial in `x`.
pub fn falling_deg_poly(n: usize, lambda: &Scalar) -> Poly {
    (0..n).fold(Poly::one(), |acc, j| {
        acc.mul(&Poly::linear_root(&(lambda * int(j as i64))))
    })
}

/// `d_{n,λ}(x) = n! sum_{l=0}^{n} (x-1)_{l,λ}/l!`.
pub fn derange_deg(n: usize, lambda: &Scalar, x: &Scalar) -> Scalar {
    let v = derange_deg_seq(n, lambda, x).pop().expect("nonempty");
    #[cfg(all(debug_assertions, feature = "cross-check"))]
    debug_assert_eq!(v, derange_deg_series(n, lambda, x));
    v
}

/// `d_{0,λ}(x), ..., d_{n_max,λ}(x)` by the explicit sum.
pub fn derange_deg_seq(n_max: usize, lambda: &Scalar, x: &Scalar) -> Vec<Scalar> {
    let shifted = x - Scalar::one();
    let falling = falling_deg_seq(&shifted, n_max, lambda);
    let mut partial = Scalar::zero();
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, f) in falling.iter().enumerate() {
        partial += f / factorial(n);
        out.push(factorial(n) * &partial);
    }
    out
}

/// `n! [t^n] e_λ^{x-1}(t)/(1-t)`.
pub fn derange_deg_series(n: usize, lambda: &Scalar, x: &Scalar) -> Scalar {
    let shifted = x - Scalar::one();
    Series::geometric(n)
        .mul(&deg_exp(&shifted, lambda, n))
        .egf_coeff(n)
}

/// `d_{n,λ}(x)` as a polynomial in `x` through the binomial convolution
/// `sum_l binom(n,l) d_{l,λ} (x)_{n-l,λ}`.
pub fn derange_deg_poly(n: usize, lambda: &Scalar) -> Poly {
    let numbers = derange_deg_seq(n, lambda, &Scalar::zero());
    (0..=n).fold(Poly::zero(), |acc, l| {
        let term = falling_deg_poly(n - l, lambda).scale(&(binomial(n as i64, l) * &numbers[l]));
        acc.add(&term)
    })
}

fn check_order(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::OutOfRange("order r must be at least 1".into()));
    }
    Ok(())
}

/// Higher-order `d^{(r)}_{n,λ}(x) = n! sum_l (x-1)_{l,λ}/l! binom(r+n-l-1, n-l)`.
pub fn derange_deg_order(n: usize, r: usize, lambda: &Scalar, x: &Scalar) -> Result<Scalar> {
    check_order(r)?;
    let shifted = x - Scalar::one();
    let falling = falling_deg_seq(&shifted, n, lambda);
    let mut sum = Scalar::zero();
    for (l, f) in falling.iter().enumerate() {
        let b = binomial((r + n - l) as i64 - 1, n - l);
        sum += f / factorial(l) * b;
    }
    let v = factorial(n) * sum;
    #[cfg(all(debug_assertions, feature = "cross-check"))]
    debug_assert_eq!(v, derange_deg_order_series(n, r, lambda, x)?);
    Ok(v)
}

/// `n! [t^n] (1-t)^{-r} e_λ^{x-1}(t)`, with `(1-t)^{-r}` obtained by
/// repeated series division.
pub fn derange_deg_order_series(n: usize, r: usize, lambda: &Scalar, x: &Scalar) -> Result<Scalar> {
    check_order(r)?;
    let one_minus_t = Series::one(n).sub(&Series::t(n));
    let mut s = deg_exp(&(x - Scalar::one()), lambda, n);
    for _ in 0..r {
        s = s.div(&one_minus_t)?;
    }
    Ok(s.egf_coeff(n))
}

/// Lower-triangular table indexed `[n][m]` for `0 <= m <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    rows: Vec<Vec<Scalar>>,
}

impl Triangle {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Entry `(n, m)`; zero when `m > n`.
    pub fn get(&self, n: usize, m: usize) -> Scalar {
        assert!(n <= self.n_max(), "row {n} beyond table size {}", self.n_max());
        self.rows[n].get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn row(&self, n: usize) -> &[Scalar] {
        &self.rows[n]
    }

    /// Builds the triangle column by column from `(1/m!) g(t)^m`.
    fn from_powers(g: &Series) -> Triangle {
        let n_max = g.order();
        let mut rows: Vec<Vec<Scalar>> = (0..=n_max).map(|n| vec![Scalar::zero(); n + 1]).collect();
        let mut power = Series::one(n_max);
        for m in 0..=n_max {
            if m > 0 {
                power = power.mul(g);
            }
            let inv_mfact = factorial(m).recip();
            for (n, row) in rows.iter_mut().enumerate().skip(m) {
                row[m] = power.egf_coeff(n) * &inv_mfact;
            }
        }
        Triangle { rows }
    }
}

/// Degenerate Stirling numbers of the second kind by the triangular
/// recurrence `S(n+1,m) = S(n,m-1) + (m - nλ) S(n,m)`, `S(0,0) = 1`.
pub fn stirling2_triangle(n_max: usize, lambda: &Scalar) -> Triangle {
    let mut rows: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
    for n in 0..n_max {
        let nl = lambda * int(n as i64);
        let prev = &rows[n];
        let mut next = vec![Scalar::zero(); n + 2];
        for (m, slot) in next.iter_mut().enumerate() {
            let mut v = Scalar::zero();
            if m >= 1 {
                v += &prev[m - 1];
            }
            if m <= n {
                v += (int(m as i64) - &nl) * &prev[m];
            }
            *slot = v;
        }
        rows.push(next);
    }
    Triangle { rows }
}

/// Degenerate Stirling numbers of the second kind from
/// `(1/m!)(e_λ(t) - 1)^m`.
pub fn stirling2_triangle_series(n_max: usize, lambda: &Scalar) -> Triangle {
    let g = deg_exp(&Scalar::one(), lambda, n_max).sub(&Series::one(n_max));
    Triangle::from_powers(&g)
}

/// `S_{2,λ}(n, m)`.
pub fn stirling2_deg(n: usize, m: usize, lambda: &Scalar) -> Scalar {
    if m > n {
        return Scalar::zero();
    }
    let v = stirling2_triangle(n, lambda).get(n, m);
    #[cfg(all(debug_assertions, feature = "cross-check"))]
    debug_assert_eq!(v, stirling2_deg_series(n, m, lambda));
    v
}

pub fn stirling2_deg_series(n: usize, m: usize, lambda: &Scalar) -> Scalar {
    if m > n {
        return Scalar::zero();
    }
    let g = deg_exp(&Scalar::one(), lambda, n).sub(&Series::one(n));
    g.pow(m).egf_coeff(n) / factorial(m)
}

/// Degenerate Stirling numbers of the first kind from
/// `(1/m!)(log_λ(1 + t))^m`.
pub fn stirling1_triangle(n_max: usize, lambda: &Scalar) -> Triangle {
    Triangle::from_powers(&deg_log(lambda, n_max))
}

/// `S_{1,λ}(n, m)`.
pub fn stirling1_deg(n: usize, m: usize, lambda: &Scalar) -> Scalar {
    if m > n {
        return Scalar::zero();
    }
    deg_log(lambda, n).pow(m).egf_coeff(n) / factorial(m)
}

/// Classical signed Stirling numbers of the first kind,
/// `s(n+1,k) = s(n,k-1) - n s(n,k)`.
pub fn stirling1_classical_triangle(n_max: usize) -> Triangle {
    let mut rows: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
    for n in 0..n_max {
        let prev = &rows[n];
        let nn = int(n as i64);
        let next = (0..=n + 1)
            .map(|k| {
                let mut v = Scalar::zero();
                if k >= 1 {
                    v += &prev[k - 1];
                }
                if k <= n {
                    v -= &nn * &prev[k];
                }
                v
            })
            .collect();
        rows.push(next);
    }
    Triangle { rows }
}

pub fn stirling1_classical(n: usize, m: usize) -> Scalar {
    if m > n {
        return Scalar::zero();
    }
    stirling1_classical_triangle(n).get(n, m)
}

/// `F_{n,λ}(y) = sum_k k! y^k S_{2,λ}(n,k)`.
pub fn fubini_deg(n: usize, lambda: &Scalar, y: &Scalar) -> Scalar {
    let s2 = stirling2_triangle(n, lambda);
    let v = fubini_from_triangle(&s2, n, y);
    #[cfg(all(debug_assertions, feature = "cross-check"))]
    debug_assert_eq!(v, fubini_deg_series(n, lambda, y));
    v
}

pub(crate) fn fubini_from_triangle(s2: &Triangle, n: usize, y: &Scalar) -> Scalar {
    let mut ypow = Scalar::one();
    let mut acc = Scalar::zero();
    for k in 0..=n {
        acc += factorial(k) * &ypow * s2.get(n, k);
        ypow *= y;
    }
    acc
}

/// `n! [t^n] 1/(1 - y(e_λ(t) - 1))`.
pub fn fubini_deg_series(n: usize, lambda: &Scalar, y: &Scalar) -> Scalar {
    fubini_deg_series_seq(n, lambda, y)[n].clone()
}

/// `F_{0,λ}(y), ..., F_{n_max,λ}(y)` from one series division.
pub fn fubini_deg_series_seq(n_max: usize, lambda: &Scalar, y: &Scalar) -> Vec<Scalar> {
    let g = deg_exp(&Scalar::one(), lambda, n_max).sub(&Series::one(n_max));
    let denom = Series::one(n_max).sub(&g.scale(y));
    let s = Series::one(n_max).div(&denom).expect("constant term is 1");
    (0..=n_max).map(|k| s.egf_coeff(k)).collect()
}

/// Fully degenerate Bell polynomial `Bel_{n,λ}(x) = n! [t^n] e_λ(x(e_λ(t) - 1))`.
pub fn bell_deg(n: usize, lambda: &Scalar, x: &Scalar) -> Scalar {
    let v = bell_deg_seq(n, lambda, x)[n].clone();
    #[cfg(all(debug_assertions, feature = "cross-check"))]
    debug_assert_eq!(v, bell_deg_explicit(n, lambda, x));
    v
}

/// `Bel_{0,λ}(x), ..., Bel_{n_max,λ}(x)` from one composition.
pub fn bell_deg_seq(n_max: usize, lambda: &Scalar, x: &Scalar) -> Vec<Scalar> {
    let outer = deg_exp(&Scalar::one(), lambda, n_max);
    let inner = deg_exp(&Scalar::one(), lambda, n_max)
        .sub(&Series::one(n_max))
        .scale(x);
    let s = outer.compose(&inner).expect("inner has zero constant term");
    (0..=n_max).map(|k| s.egf_coeff(k)).collect()
}

/// `sum_k (1)_{k,λ} x^k S_{2,λ}(n,k)`, the expansion of the outer
/// degenerate exponential in powers of `e_λ(t) - 1`.
pub fn bell_deg_explicit(n: usize, lambda: &Scalar, x: &Scalar) -> Scalar {
    let s2 = stirling2_triangle(n, lambda);
    let falling = falling_deg_seq(&Scalar::one(), n, lambda);
    let mut xpow = Scalar::one();
    let mut acc = Scalar::zero();
    for (k, f) in falling.iter().enumerate() {
        acc += f * &xpow * s2.get(n, k);
        xpow *= x;
    }
    acc
}

/// Named sequences that can be tabulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Derangement,
    DerangementPoly,
    DerangementOrder,
    Stirling1,
    Stirling2,
    Fubini,
    Bell,
    Falling,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 8] = [
        SequenceKind::Derangement,
        SequenceKind::DerangementPoly,
        SequenceKind::DerangementOrder,
        SequenceKind::Stirling1,
        SequenceKind::Stirling2,
        SequenceKind::Fubini,
        SequenceKind::Bell,
        SequenceKind::Falling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Derangement => "derangement",
            SequenceKind::DerangementPoly => "derangement-poly",
            SequenceKind::DerangementOrder => "derangement-order",
            SequenceKind::Stirling1 => "stirling1",
            SequenceKind::Stirling2 => "stirling2",
            SequenceKind::Fubini => "fubini",
            SequenceKind::Bell => "bell",
            SequenceKind::Falling => "falling",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SequenceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::OutOfRange(format!("unknown sequence `{s}`")))
    }
}

/// One tabulated value: a number, or a polynomial's ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableValue {
    Scalar(#[serde(with = "ratio_serde")] Scalar),
    Poly(Poly),
}

/// Parameters selecting a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableParams {
    #[serde(with = "ratio_serde")]
    pub lambda: Scalar,
    /// Polynomial argument (`x`, or `y` for Fubini).
    #[serde(with = "ratio_serde::option")]
    pub x: Option<Scalar>,
    /// Order for `derangement-order`.
    pub r: Option<usize>,
    /// Column index for the Stirling tables.
    pub m: Option<usize>,
    pub n_max: usize,
}

/// A sequence tabulated for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTable {
    pub name: SequenceKind,
    #[serde(with = "ratio_serde")]
    pub lambda: Scalar,
    #[serde(with = "ratio_serde::option")]
    pub x: Option<Scalar>,
    pub r: Option<usize>,
    pub m: Option<usize>,
    pub values: Vec<(usize, TableValue)>,
}

impl SequenceTable {
    /// Tabulates `kind`. Missing `x` defaults to `0` (`1` for Bell and
    /// Fubini), missing `r` and `m` default to `1`.
    pub fn build(kind: SequenceKind, params: &TableParams) -> Result<SequenceTable> {
        let lambda = &params.lambda;
        let n_max = params.n_max;
        if n_max > crate::identities::MAX_N {
            return Err(Error::OutOfRange(format!("n_max = {n_max} exceeds {}", crate::identities::MAX_N)));
        }
        let mut x = None;
        let mut r = None;
        let mut m = None;
        let scalars: Vec<Scalar> = match kind {
            SequenceKind::Derangement => {
                let xv = params.x.clone().unwrap_or_else(Scalar::zero);
                let v = derange_deg_seq(n_max, lambda, &xv);
                x = Some(xv);
                v
            }
            SequenceKind::DerangementPoly => {
                let values = (0..=n_max)
                    .map(|n| (n, TableValue::Poly(derange_deg_poly(n, lambda))))
                    .collect();
                return Ok(SequenceTable { name: kind, lambda: lambda.clone(), x, r, m, values });
            }
            SequenceKind::DerangementOrder => {
                let xv = params.x.clone().unwrap_or_else(Scalar::zero);
                let rv = params.r.unwrap_or(1);
                let v = (0..=n_max)
                    .map(|n| derange_deg_order(n, rv, lambda, &xv))
                    .collect::<Result<Vec<_>>>()?;
                x = Some(xv);
                r = Some(rv);
                v
            }
            SequenceKind::Stirling1 | SequenceKind::Stirling2 => {
                let mv = params.m.unwrap_or(1);
                let tri = if kind == SequenceKind::Stirling1 {
                    stirling1_triangle(n_max, lambda)
                } else {
                    stirling2_triangle(n_max, lambda)
                };
                m = Some(mv);
                (0..=n_max).map(|n| tri.get(n, mv)).collect()
            }
            SequenceKind::Fubini => {
                let y = params.x.clone().unwrap_or_else(Scalar::one);
                let s2 = stirling2_triangle(n_max, lambda);
                let v = (0..=n_max).map(|n| fubini_from_triangle(&s2, n, &y)).collect();
                x = Some(y);
                v
            }
            SequenceKind::Bell => {
                let xv = params.x.clone().unwrap_or_else(Scalar::one);
                let v = bell_deg_seq(n_max, lambda, &xv);
                x = Some(xv);
                v
            }
            SequenceKind::Falling => {
                let xv = params.x.clone().unwrap_or_else(Scalar::zero);
                let v = falling_deg_seq(&xv, n_max, lambda);
                x = Some(xv);
                v
            }
        };
        let values = scalars
            .into_iter()
            .enumerate()
            .map(|(n, v)| (n, TableValue::Scalar(v)))
            .collect();
        Ok(SequenceTable { name: kind, lambda: lambda.clone(), x, r, m, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q(n: i64, d: i64) -> Scalar {
        rat(n, d).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn falling_examples() {
        assert_eq!(falling_deg(&q(5, 3), 0, &q(1, 2)), int(1));
        assert_eq!(falling_deg(&int(-1), 2, &q(1, 2)), q(3, 2));
        assert_eq!(falling_deg(&int(1), 7, &int(0)), int(1));
        assert_eq!(falling_deg(&q(2, 3), 5, &int(0)), q(32, 243));
        assert_eq!(falling_deg_seq(&int(0), 5, &q(1, 3)), ints(&[1, 0, 0, 0, 0, 0]));
        let p = falling_deg_poly(4, &q(-2, 5));
        for x in [int(0), q(7, 3), int(-4)] {
            assert_eq!(p.eval(&x), falling_deg(&x, 4, &q(-2, 5)));
        }
    }

    #[test]
    fn classical_derangement_numbers() {
        assert_eq!(derange_deg_seq(6, &int(0), &int(0)), ints(&[1, 0, 1, 2, 9, 44, 265]));
    }

    #[test]
    fn degenerate_derangement_numbers() {
        // n! sum_l (-1)_{l,1/2}/l!, products (-1)(-3/2)(-2)(-5/2)... by hand
        let expected = vec![int(1), int(0), q(3, 2), q(3, 2), q(27, 2)];
        assert_eq!(derange_deg_seq(4, &q(1, 2), &int(0)), expected);
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(&derange_deg_series(n, &q(1, 2), &int(0)), e);
        }
    }

    #[test]
    fn derangement_at_x_one_is_factorial() {
        for lambda in [q(1, 2), q(-3, 7), int(0)] {
            for n in 0..8 {
                assert_eq!(derange_deg(n, &lambda, &int(1)), factorial(n));
            }
        }
    }

    #[test]
    fn derangement_polynomials() {
        assert_eq!(derange_deg_poly(0, &q(1, 3)), Poly::one());
        // 2! sum_l (x-1)^l/l! = 1 + 2(x-1) + (x-1)^2 = x^2 + 1 at λ = 0
        assert_eq!(derange_deg_poly(2, &int(0)), Poly::new(ints(&[1, 0, 1])));
        for lambda in [q(1, 2), q(-1, 3), int(0)] {
            for n in 0..7 {
                let p = derange_deg_poly(n, &lambda);
                assert!(p.degree() <= n);
                for x in [int(0), q(3, 4), int(-2)] {
                    assert_eq!(p.eval(&x), derange_deg(n, &lambda, &x));
                }
            }
        }
    }

    #[test]
    fn higher_order() {
        for lambda in [q(1, 2), q(-1, 4), int(0)] {
            for x in [int(0), q(3, 4)] {
                for n in 0..8 {
                    assert_eq!(derange_deg_order(n, 1, &lambda, &x).unwrap(), derange_deg(n, &lambda, &x));
                    for r in 1..4 {
                        assert_eq!(
                            derange_deg_order(n, r, &lambda, &x).unwrap(),
                            derange_deg_order_series(n, r, &lambda, &x).unwrap()
                        );
                    }
                }
            }
        }
        assert_eq!(derange_deg_order(0, 3, &q(1, 2), &int(7)).unwrap(), int(1));
        // r=2, λ=1/2, x=0, n=2: 2! [1*3 + (-1)*2 + (3/2)/2*1] = 7/2
        assert_eq!(derange_deg_order(2, 2, &q(1, 2), &int(0)).unwrap(), q(7, 2));
        assert!(derange_deg_order(2, 0, &q(1, 2), &int(0)).is_err());
    }

    #[test]
    fn stirling2_examples() {
        let lambda = q(1, 2);
        for n in 0..8 {
            assert_eq!(stirling2_deg(n, n, &lambda), int(1));
            if n >= 1 {
                assert_eq!(stirling2_deg(n, 1, &lambda), falling_deg(&int(1), n, &lambda));
            }
        }
        assert_eq!(stirling2_deg(2, 1, &lambda), q(1, 2));
        assert_eq!(stirling2_deg(3, 2, &int(0)), int(3));
        assert_eq!(stirling2_deg(2, 5, &lambda), int(0));
        assert_eq!(stirling2_deg_series(3, 2, &lambda), stirling2_deg(3, 2, &lambda));
    }

    #[test]
    fn stirling1_examples() {
        assert_eq!(stirling1_deg(4, 4, &q(2, 7)), int(1));
        assert_eq!(stirling1_deg(2, 1, &q(1, 2)), q(-1, 2));
        assert_eq!(stirling1_deg(2, 1, &q(3, 5)), q(3, 5) - int(1));
        assert_eq!(stirling1_deg(2, 1, &int(0)), int(-1));
        assert_eq!(stirling1_classical(3, 1), int(2));
        assert_eq!(stirling1_classical(5, 5), int(1));
        assert_eq!(stirling1_classical(4, 0), int(0));
        let tri = stirling1_triangle(12, &int(0));
        assert_eq!(tri, stirling1_classical_triangle(12));
    }

    #[test]
    fn fubini_examples() {
        for lambda in [q(1, 2), q(-1, 3), int(0)] {
            assert_eq!(fubini_deg(0, &lambda, &q(5, 2)), int(1));
            assert_eq!(fubini_deg(2, &lambda, &int(1)), int(3) - &lambda);
            for n in 1..6 {
                assert_eq!(fubini_deg(n, &lambda, &int(0)), int(0));
            }
            for y in [int(1), q(-2, 3)] {
                let seq = fubini_deg_series_seq(7, &lambda, &y);
                for (n, v) in seq.iter().enumerate() {
                    assert_eq!(&fubini_deg(n, &lambda, &y), v);
                }
            }
        }
        // ordered Bell numbers
        assert_eq!(fubini_deg_series_seq(5, &int(0), &int(1)), ints(&[1, 1, 3, 13, 75, 541]));
    }

    #[test]
    fn bell_examples() {
        let lambda = q(1, 2);
        assert_eq!(bell_deg(0, &lambda, &q(4, 9)), int(1));
        for x in [int(1), q(2, 3), int(-3)] {
            assert_eq!(bell_deg(2, &lambda, &x), (int(1) - &lambda) * (&x + &x * &x));
        }
        assert_eq!(bell_deg(2, &lambda, &int(1)), int(1));
        for n in 1..6 {
            assert_eq!(bell_deg(n, &lambda, &int(0)), int(0));
        }
        // classical Bell numbers at λ = 0
        assert_eq!(bell_deg_seq(6, &int(0), &int(1)), ints(&[1, 1, 2, 5, 15, 52, 203]));
        for n in 0..8 {
            assert_eq!(bell_deg(n, &q(-2, 5), &q(3, 4)), bell_deg_explicit(n, &q(-2, 5), &q(3, 4)));
        }
    }

    #[test]
    fn tables() {
        let params = TableParams { lambda: int(0), x: None, r: None, m: None, n_max: 4 };
        let t = SequenceTable::build(SequenceKind::Derangement, &params).unwrap();
        let vals: Vec<_> = t.values.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(vals, ints(&[1, 0, 1, 2, 9]).into_iter().map(TableValue::Scalar).collect::<Vec<_>>());
        for kind in SequenceKind::ALL {
            let t = SequenceTable::build(kind, &params).unwrap();
            assert_eq!(t.values.len(), 5);
            assert!(t.values.iter().enumerate().all(|(i, (n, _))| i == *n));
            assert_eq!(kind.name().parse::<SequenceKind>().unwrap(), kind);
        }
        assert!("nope".parse::<SequenceKind>().is_err());
    }
}
