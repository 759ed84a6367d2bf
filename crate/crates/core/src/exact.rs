//! Exact rational scalars, factorials, binomial coefficients and dense
//! univariate polynomials.
//!
//! Everything in this module is exact. [`Scalar`] is an arbitrary-precision
//! rational kept in canonical form (positive denominator, reduced).

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Scalar = BigRational;

/// Number of factorials kept in the process-wide table.
pub const FACTORIAL_CACHE: usize = 256;

/// Builds the canonical rational `num/den`.
pub fn rat(num: i64, den: i64) -> Result<Scalar> {
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Integer as a rational.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}

/// Renders a rational as `"p/q"`; integers keep the `/1` so consumers can
/// split unconditionally.
pub fn to_ratio_string(q: &Scalar) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Nearest `f64` of an exact rational.
pub fn to_f64(q: &Scalar) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod ratio_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_ratio_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(q: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
            q.as_ref().map(to_ratio_string).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Scalar>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(q: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(q.iter().map(to_ratio_string))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scalar>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

fn factorial_table() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(FACTORIAL_CACHE + 1);
        v.push(BigInt::one());
        for i in 1..=FACTORIAL_CACHE {
            let next = &v[i - 1] * BigInt::from(i);
            v.push(next);
        }
        v
    })
}

/// `n!` as a big integer. Values up to [`FACTORIAL_CACHE`] come from a
/// shared table.
pub fn factorial_int(n: usize) -> BigInt {
    let table = factorial_table();
    if n < table.len() {
        return table[n].clone();
    }
    let mut acc = table[table.len() - 1].clone();
    for i in table.len()..=n {
        acc *= BigInt::from(i);
    }
    acc
}

pub fn factorial(n: usize) -> Scalar {
    BigRational::from_integer(factorial_int(n))
}

/// Generalized binomial `n(n-1)...(n-k+1)/k!` for any integer `n`.
pub fn binomial(n: i64, k: usize) -> Scalar {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n) - BigInt::from(i);
    }
    BigRational::new(num, factorial_int(k))
}

/// `q(q-1)...(q-k+1)/k!` for rational `q`.
pub fn binomial_rational(q: &Scalar, k: usize) -> Scalar {
    let mut acc = Scalar::one();
    let mut term = q.clone();
    for _ in 0..k {
        acc *= &term;
        term -= Scalar::one();
    }
    acc / factorial(k)
}

/// `(-1)^k` as a rational.
pub fn sign(k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Dense polynomial in one variable, ascending coefficients.
///
/// The zero polynomial is stored as the single coefficient `0`; otherwise the
/// leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::constant(Scalar::zero())
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `x - a`.
    pub fn linear_root(a: &Scalar) -> Self {
        Poly::new(vec![-a.clone(), Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Horner evaluation.
    pub fn eval(&self, a: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * a + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
                match other.coeffs.get(i) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ratio_serde::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ratio_serde::vec::deserialize(d).map(Poly::new)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        rat(n, d).unwrap()
    }

    #[test]
    fn rat_is_canonical() {
        assert_eq!(to_ratio_string(&q(2, 4)), "1/2");
        assert_eq!(to_ratio_string(&q(3, -6)), "-1/2");
        assert_eq!(to_ratio_string(&q(0, 7)), "0/1");
        assert!(matches!(rat(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn parse_round_trip() {
        assert_eq!(parse_rational("-2/6").unwrap(), q(-1, 3));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(4), int(24));
        let oracle: i64 = (1..=10).product();
        assert_eq!(factorial(10), int(oracle));
        // past the cached range
        let big = factorial(FACTORIAL_CACHE + 3);
        let expected = factorial(FACTORIAL_CACHE)
            * int(FACTORIAL_CACHE as i64 + 1)
            * int(FACTORIAL_CACHE as i64 + 2)
            * int(FACTORIAL_CACHE as i64 + 3);
        assert_eq!(big, expected);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(-3, 0), int(1));
        assert_eq!(binomial(6, 3), int(20));
        assert_eq!(binomial(3, 5), int(0));
        // (-1 choose k) = (-1)^k
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial_rational(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial_rational(&q(1, 2), 0), int(1));
        assert_eq!(binomial_rational(&q(1, 2), 1), q(1, 2));
    }

    #[test]
    fn rational_binomial_matches_integer_binomial() {
        for n in 0..=64i64 {
            for k in 0..=64usize {
                assert_eq!(binomial_rational(&int(n), k), binomial(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn poly_basics() {
        let x = Poly::x();
        let x2p1 = Poly::new(vec![int(1), int(0), int(1)]);
        assert_eq!(x2p1.eval(&int(2)), int(5));
        let prod = x.mul(&Poly::new(vec![int(1), int(1)]));
        assert_eq!(prod, Poly::new(vec![int(0), int(1), int(1)]));
        assert_eq!(Poly::zero().eval(&q(3, 7)), int(0));
        assert_eq!(Poly::new(vec![int(0), int(0)]).degree(), 0);
        assert_eq!(prod.to_string(), "x^2 + x");
        assert_eq!(Poly::linear_root(&q(1, 2)).to_string(), "x - 1/2");
    }
}
