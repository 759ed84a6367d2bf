//! Truncated formal power series over exact rationals.
//!
//! A [`Series`] of order `N` carries the coefficients of `t^0..=t^N`. Binary
//! operations between series of different orders truncate to the smaller
//! order; nothing ever extends the order implicitly.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial_rational, factorial, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Scalar>,
}

impl Series {
    /// Series whose order is `coeffs.len() - 1`. An empty vector gives the
    /// zero series of order 0.
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Series { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Scalar) -> Self {
        Series::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Series::new(vec![Scalar::zero(); order + 1])
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(Scalar::one(), order)
    }

    /// `c * t^k`, zero if `k` exceeds the order.
    pub fn monomial(c: Scalar, k: usize, order: usize) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        Series::monomial(Scalar::one(), 1, order)
    }

    /// `1/(1 - t)`.
    pub fn geometric(order: usize) -> Self {
        Series::new(vec![Scalar::one(); order + 1])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `k! [t^k]`, the exponential-generating-function reading.
    pub fn egf_coeff(&self, k: usize) -> Scalar {
        factorial(k) * self.coeff(k)
    }

    pub fn truncate(&self, order: usize) -> Series {
        let order = order.min(self.order());
        Series::new(self.coeffs[..=order].to_vec())
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::from_fn(n, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    pub fn neg(&self) -> Series {
        Series::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Substitutes `t -> c t`.
    pub fn dilate(&self, c: &Scalar) -> Series {
        let mut pow = Scalar::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Series::new(out)
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let mut out = vec![Scalar::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series::new(out)
    }

    pub fn pow(&self, mut e: usize) -> Series {
        let mut acc = Series::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`; the divisor's constant term may be
    /// any nonzero rational.
    pub fn div(&self, divisor: &Series) -> Result<Series> {
        let b0 = divisor.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::SeriesDivision);
        }
        let n = self.order().min(divisor.order());
        let inv_b0 = b0.recip();
        let mut q: Vec<Scalar> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                let b = &divisor.coeffs[i];
                if !b.is_zero() {
                    acc -= b * &q[k - i];
                }
            }
            q.push(acc * &inv_b0);
        }
        Ok(Series::new(q))
    }

    /// `self(inner(t))` by Horner's scheme. `inner` must have zero constant
    /// term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Composition);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// `self^q` for rational `q` through `sum_k binom(q, k) u^k` with
    /// `u = self - 1`.
    pub fn binomial_pow(&self, q: &Scalar) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::BinomialPowDomain);
        }
        let n = self.order();
        let outer = Series::from_fn(n, |k| binomial_rational(q, k));
        let mut u = self.clone();
        u.coeffs[0] = Scalar::zero();
        outer.compose(&u)
    }
}

/// Degenerate exponential `e_λ^x(t) = (1 + λt)^{x/λ}`; coefficient `k` is
/// `(x)_{k,λ} / k!`. `λ = 0` is the classical `e^{xt}`.
pub fn deg_exp(x: &Scalar, lambda: &Scalar, order: usize) -> Series {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Scalar::one();
    coeffs.push(c.clone());
    for k in 1..=order {
        // (x)_{k,λ}/k! = (x)_{k-1,λ}/(k-1)! * (x - (k-1)λ) / k
        let km1 = Scalar::from_integer((k as i64 - 1).into());
        c = c * (x - lambda * km1) / Scalar::from_integer((k as i64).into());
        coeffs.push(c.clone());
    }
    Series::new(coeffs)
}

/// `log_λ(1 + t)`, the compositional inverse of `e_λ(t) - 1`:
/// `((1 + t)^λ - 1)/λ`, or `log(1 + t)` when `λ = 0`.
pub fn deg_log(lambda: &Scalar, order: usize) -> Series {
    Series::from_fn(order, |k| {
        if k == 0 {
            Scalar::zero()
        } else if lambda.is_zero() {
            let s = if k % 2 == 1 { 1 } else { -1 };
            Scalar::new(s.into(), (k as i64).into())
        } else {
            binomial_rational(lambda, k) / lambda
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn q(n: i64, d: i64) -> Scalar {
        rat(n, d).unwrap()
    }

    fn poly(cs: &[i64]) -> Series {
        Series::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn mul_basics() {
        let a = poly(&[1, 1, 0]);
        let b = poly(&[1, -1, 0]);
        assert_eq!(a.mul(&b), poly(&[1, 0, -1]));
        let c = poly(&[3, -2, 5, 7]);
        assert_eq!(c.mul(&Series::one(3)), c);
        // different orders truncate to the smaller
        assert_eq!(c.mul(&Series::one(1)).order(), 1);
    }

    #[test]
    fn div_basics() {
        let geo = Series::one(6).div(&poly(&[1, -1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(geo, Series::geometric(6));
        let a = poly(&[2, 5, -1, 4]);
        assert_eq!(a.div(&a).unwrap(), Series::one(3));
        assert_eq!(a.div(&poly(&[0, 1, 1, 1])), Err(Error::SeriesDivision));
        // non-unit constant term
        let b = poly(&[3, 1, 0, 2]);
        assert_eq!(a.div(&b).unwrap().mul(&b), a);
    }

    #[test]
    fn fubini_denominator_at_classical_limit() {
        // 1/(2 - e^t), long division by hand: 1 + t + 3/2 t^2
        let e = deg_exp(&int(1), &int(0), 2);
        let denom = Series::constant(int(2), 2).sub(&e);
        let f = Series::one(2).div(&denom).unwrap();
        assert_eq!(f.coeffs(), &[int(1), int(1), q(3, 2)]);
        assert_eq!(f.egf_coeff(2), int(3));
    }

    #[test]
    fn compose_basics() {
        let geo = Series::geometric(8);
        assert_eq!(geo.compose(&Series::t(8)).unwrap(), geo);
        let c = poly(&[4, 1, 2, 3]);
        assert_eq!(c.compose(&Series::zero(3)).unwrap(), Series::constant(int(4), 3));
        assert_eq!(c.compose(&Series::one(3)), Err(Error::Composition));
        // (1 + t)^2 composed with t + t^2 = 1 + 2t + 3t^2 + 2t^3 + t^4
        let sq = poly(&[1, 2, 1, 0, 0]);
        let inner = poly(&[0, 1, 1, 0, 0]);
        assert_eq!(sq.compose(&inner).unwrap(), poly(&[1, 2, 3, 2, 1]));
    }

    #[test]
    fn exp_after_log_is_identity() {
        for lambda in [q(1, 2), q(-1, 3), q(2, 7), int(0)] {
            let e = deg_exp(&int(1), &lambda, 16);
            let l = deg_log(&lambda, 16);
            let expected = poly(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
            assert_eq!(e.compose(&l).unwrap(), expected, "λ = {lambda}");
        }
    }

    #[test]
    fn binomial_pow_basics() {
        let base = poly(&[1, 1, 0, 0]);
        assert_eq!(base.binomial_pow(&int(2)).unwrap(), poly(&[1, 2, 1, 0]));
        let half = base.binomial_pow(&q(1, 2)).unwrap();
        assert_eq!(half.mul(&half), base);
        assert_eq!(poly(&[2, 1]).binomial_pow(&int(3)), Err(Error::BinomialPowDomain));
        // (1 + t/2)^2 at order 2: 1 + t + t^2/4
        let lam = q(1, 2);
        let base = Series::new(vec![int(1), lam.clone(), int(0)]);
        let p = base.binomial_pow(&lam.recip()).unwrap();
        assert_eq!(p.coeff(2), q(1, 4));
    }

    #[test]
    fn deg_exp_examples() {
        let classical = deg_exp(&int(1), &int(0), 6);
        for k in 0..=6 {
            assert_eq!(classical.coeff(k), factorial(k).recip());
        }
        assert_eq!(deg_exp(&int(1), &q(1, 2), 2).coeff(2), q(1, 4));
        assert_eq!(deg_exp(&int(0), &q(1, 3), 5), Series::one(5));
    }

    #[test]
    fn deg_exp_matches_binomial_power() {
        for lambda in [q(1, 2), q(-1, 3), q(2, 7)] {
            for x in [int(0), int(1), q(-3, 4), int(5)] {
                let base = Series::new(vec![int(1), lambda.clone(), int(0), int(0), int(0), int(0), int(0), int(0)]);
                let via_pow = base.binomial_pow(&(&x / &lambda)).unwrap();
                assert_eq!(deg_exp(&x, &lambda, 7), via_pow);
            }
        }
    }

    #[test]
    fn deg_log_examples() {
        let l0 = deg_log(&int(0), 5);
        assert_eq!(l0.coeffs(), &[int(0), int(1), q(-1, 2), q(1, 3), q(-1, 4), q(1, 5)]);
        assert_eq!(deg_log(&q(1, 2), 2).coeff(2), q(-1, 4));
        for lambda in [q(1, 2), q(-5, 3), q(2, 7), int(0)] {
            assert_eq!(deg_log(&lambda, 3).coeff(1), int(1));
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let s = poly(&[1, -2, 3, 1, 0, 5]);
        let mut acc = Series::one(5);
        for e in 0..6 {
            assert_eq!(s.pow(e), acc);
            acc = acc.mul(&s);
        }
    }
}
