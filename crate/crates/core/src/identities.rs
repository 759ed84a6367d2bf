//! Exact verifiers for the degenerate derangement identities.
//!
//! Each identity is evaluated at concrete rational `(λ, x)` with the two
//! sides computed as written, term by term, from independent routes:
//!
//! | term                  | route                                              |
//! |-----------------------|----------------------------------------------------|
//! | `d_{n,λ}(x)`          | explicit sum over `(x-1)_{l,λ}/l!`                 |
//! | `d^{(r)}_{n,λ}(x)`    | explicit sum, or series `(1-t)^{-r} e_λ^{x-1}(t)`  |
//! | `S_{2,λ}(n,m)`        | triangular recurrence                              |
//! | `S_{1,λ}(n,m)`        | powers of `log_λ(1+t)`                             |
//! | `F_{n,λ}(1)`          | series division `1/(2 - e_λ(t))`                   |
//! | `Bel_{n,λ}(1)`        | series composition `e_λ(e_λ(t) - 1)`               |
//! | `(x)_{n,λ}`, binomials| direct products                                    |
//!
//! [`certify`] turns grid evaluation at fixed `n` into a polynomial-identity
//! proof: both sides have degree at most `n` in each of `λ` and `x`, so
//! agreement on an `(n+1) x (n+1)` product grid forces equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int, ratio_serde, sign, Scalar};
use crate::sequences::{
    bell_deg_seq, derange_deg_order, derange_deg_order_series, derange_deg_seq, falling_deg,
    falling_deg_seq, fubini_deg_series_seq, stirling1_triangle, stirling2_triangle, Triangle,
};

/// Largest `n` accepted by [`verify`] and the table builder.
pub const MAX_N: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Thm2Conv,
    Thm2Rec,
    Thm2RecX0,
    Thm3,
    Thm4,
    Thm5,
    Lemma6,
    Thm7A,
    Thm7B,
    Thm8A,
    Thm8B,
    Eq24_25,
    Thm9VsSeries,
    Thm10,
    ExpMomentBridge,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::Thm2Conv,
        IdentityId::Thm2Rec,
        IdentityId::Thm2RecX0,
        IdentityId::Thm3,
        IdentityId::Thm4,
        IdentityId::Thm5,
        IdentityId::Lemma6,
        IdentityId::Thm7A,
        IdentityId::Thm7B,
        IdentityId::Thm8A,
        IdentityId::Thm8B,
        IdentityId::Eq24_25,
        IdentityId::Thm9VsSeries,
        IdentityId::Thm10,
        IdentityId::ExpMomentBridge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Thm2Conv => "THM2_CONV",
            IdentityId::Thm2Rec => "THM2_REC",
            IdentityId::Thm2RecX0 => "THM2_REC_X0",
            IdentityId::Thm3 => "THM3",
            IdentityId::Thm4 => "THM4",
            IdentityId::Thm5 => "THM5",
            IdentityId::Lemma6 => "LEMMA6",
            IdentityId::Thm7A => "THM7_A",
            IdentityId::Thm7B => "THM7_B",
            IdentityId::Thm8A => "THM8_A",
            IdentityId::Thm8B => "THM8_B",
            IdentityId::Eq24_25 => "EQ24_25",
            IdentityId::Thm9VsSeries => "THM9_VS_SERIES",
            IdentityId::Thm10 => "THM10",
            IdentityId::ExpMomentBridge => "EXP_MOMENT_BRIDGE",
        }
    }

    pub fn uses_x(self) -> bool {
        matches!(
            self,
            IdentityId::Thm2Conv
                | IdentityId::Thm2Rec
                | IdentityId::Thm3
                | IdentityId::Thm4
                | IdentityId::Thm5
                | IdentityId::Lemma6
                | IdentityId::Eq24_25
                | IdentityId::Thm9VsSeries
                | IdentityId::ExpMomentBridge
        )
    }

    pub fn uses_r(self) -> bool {
        self == IdentityId::Thm9VsSeries
    }

    /// Smallest `n` for which the identity is stated.
    pub fn min_n(self) -> usize {
        match self {
            IdentityId::Thm2Rec | IdentityId::Thm2RecX0 | IdentityId::Lemma6 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Negative-control switch: `FlipLastTerm` negates the top-index summand of
/// the mutated side, which must make the identity fail somewhere.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mutation {
    #[default]
    None,
    FlipLastTerm,
}

/// One evaluation point of one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub identity_id: IdentityId,
    pub n: usize,
    #[serde(with = "ratio_serde")]
    pub lambda: Scalar,
    #[serde(with = "ratio_serde::option", skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<usize>,
}

impl IdentityCase {
    /// Checks that `x` and `r` are present exactly when the identity uses
    /// them and that `n`, `r` are in range.
    pub fn new(
        identity_id: IdentityId,
        n: usize,
        lambda: Scalar,
        x: Option<Scalar>,
        r: Option<usize>,
    ) -> Result<Self> {
        let case = IdentityCase { identity_id, n, lambda, x, r };
        case.validate()?;
        Ok(case)
    }

    pub fn validate(&self) -> Result<()> {
        let id = self.identity_id;
        if self.n > MAX_N {
            return Err(Error::OutOfRange(format!("n = {} exceeds {MAX_N}", self.n)));
        }
        if self.n < id.min_n() {
            return Err(Error::OutOfRange(format!("{id} needs n >= {}", id.min_n())));
        }
        if id.uses_x() != self.x.is_some() {
            return Err(Error::OutOfRange(format!(
                "{id} {} an x parameter",
                if id.uses_x() { "requires" } else { "takes no" }
            )));
        }
        match (id.uses_r(), self.r) {
            (true, None) | (true, Some(0)) => {
                Err(Error::OutOfRange(format!("{id} requires r >= 1")))
            }
            (false, Some(_)) => Err(Error::OutOfRange(format!("{id} takes no r parameter"))),
            _ => Ok(()),
        }
    }
}

/// Result of evaluating one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseOutcome {
    #[serde(with = "ratio_serde")]
    pub lhs: Scalar,
    #[serde(with = "ratio_serde")]
    pub rhs: Scalar,
    /// Further expressions that must equal `rhs` (the third member of a
    /// chained identity).
    #[serde(with = "ratio_serde::vec")]
    pub extra: Vec<Scalar>,
    pub pass: bool,
}

/// Exact tables for one `λ` (and `-λ`) up to a fixed `n`.
///
/// Owned per task; never shared mutably.
pub struct LambdaTables {
    lambda: Scalar,
    neg_lambda: Scalar,
    n_max: usize,
    s2: Triangle,
    s2_neg: Triangle,
    s1: Triangle,
    derange0: Vec<Scalar>,
    bell: Vec<Scalar>,
    bell_neg: Vec<Scalar>,
    fubini1: Vec<Scalar>,
    derange_by_x: BTreeMap<Scalar, Vec<Scalar>>,
}

impl LambdaTables {
    pub fn new(lambda: &Scalar, n_max: usize) -> Self {
        let neg_lambda = -lambda.clone();
        LambdaTables {
            lambda: lambda.clone(),
            n_max,
            s2: stirling2_triangle(n_max, lambda),
            s2_neg: stirling2_triangle(n_max, &neg_lambda),
            s1: stirling1_triangle(n_max, lambda),
            derange0: derange_deg_seq(n_max, lambda, &Scalar::zero()),
            bell: bell_deg_seq(n_max, lambda, &Scalar::one()),
            bell_neg: bell_deg_seq(n_max, &neg_lambda, &Scalar::one()),
            fubini1: fubini_deg_series_seq(n_max, lambda, &Scalar::one()),
            derange_by_x: BTreeMap::new(),
            neg_lambda,
        }
    }

    /// Caches `d_{l,λ}(x)` for `l <= n_max` at each of `xs`.
    pub fn with_xs(mut self, xs: &[Scalar]) -> Self {
        for x in xs {
            let seq = derange_deg_seq(self.n_max, &self.lambda, x);
            self.derange_by_x.insert(x.clone(), seq);
        }
        self
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Evaluates `case`, whose `λ` must be this table's `λ`.
    pub fn evaluate(&self, case: &IdentityCase, mutation: Mutation) -> Result<CaseOutcome> {
        case.validate()?;
        if case.lambda != self.lambda {
            return Err(Error::OutOfRange("case λ does not match the table".into()));
        }
        if case.n > self.n_max {
            return Err(Error::OutOfRange(format!("n = {} beyond table size {}", case.n, self.n_max)));
        }
        let n = case.n;
        let flip = mutation == Mutation::FlipLastTerm;
        let x = case.x.clone().unwrap_or_else(Scalar::zero);
        let (lhs, rhs, extra) = match case.identity_id {
            IdentityId::Thm2Conv => (self.derange_x(n, &x)[n].clone(), self.thm2_conv_rhs(n, &x, flip), vec![]),
            IdentityId::Thm2Rec => {
                let lhs = falling_deg(&(&x - Scalar::one()), n, &self.lambda);
                (lhs, self.rec_rhs(&self.derange_x(n, &x), n, flip), vec![])
            }
            IdentityId::Thm2RecX0 => {
                let lhs = falling_deg(&int(-1), n, &self.lambda);
                (lhs, self.rec_rhs(&self.derange0, n, flip), vec![])
            }
            IdentityId::Thm3 => (self.thm3_lhs(n, &x), self.thm3_rhs(n, &x, flip), vec![]),
            IdentityId::Thm4 => (self.thm4_lhs(n, &x), self.thm4_rhs(n, &x, flip), vec![]),
            IdentityId::Thm5 => {
                let lhs = self.thm5_lhs(n);
                let rhs = self.thm5_rhs(n, flip);
                let third = self.shifted_convolution(n, &x, false);
                (lhs, rhs, vec![third, factorial(n)])
            }
            IdentityId::Lemma6 => (self.lemma6_lhs(n, &x), self.lemma6_rhs(n, &x, flip), vec![]),
            IdentityId::Thm7A => (falling_deg(&Scalar::one(), n, &self.lambda), self.bell_s1_sum(n, flip), vec![]),
            IdentityId::Thm7B => (self.bell[n].clone(), self.thm7b_rhs(n, flip), vec![]),
            IdentityId::Thm8A => (self.thm8a_lhs(n), self.thm8a_rhs(n, flip), vec![]),
            IdentityId::Thm8B => {
                let single = sign(n) * falling_deg(&int(-1), n, &self.neg_lambda);
                (self.bell_s1_sum(n, false), if flip { -single } else { single }, vec![])
            }
            IdentityId::Eq24_25 => (self.eq25_lhs(n), self.shifted_convolution(n, &x, flip), vec![]),
            IdentityId::Thm9VsSeries => {
                let r = case.r.expect("validated");
                (self.thm9_explicit(n, r, &x, flip), derange_deg_order_series(n, r, &self.lambda, &x)?, vec![])
            }
            IdentityId::Thm10 => (self.bell_neg[n].clone(), self.thm10_rhs(n, flip), vec![]),
            IdentityId::ExpMomentBridge => (self.moment_bridge(n, &x, flip), self.derange_x(n, &x)[n].clone(), vec![]),
        };
        let pass = lhs == rhs && extra.iter().all(|e| *e == rhs);
        Ok(CaseOutcome { lhs, rhs, extra, pass })
    }

    fn derange_x(&self, n: usize, x: &Scalar) -> std::borrow::Cow<'_, [Scalar]> {
        match self.derange_by_x.get(x) {
            Some(seq) => std::borrow::Cow::Borrowed(&seq[..=n]),
            None => std::borrow::Cow::Owned(derange_deg_seq(n, &self.lambda, x)),
        }
    }

    /// `sum_l binom(n,l) d_{l,λ} (x)_{n-l,λ}`.
    fn thm2_conv_rhs(&self, n: usize, x: &Scalar, flip: bool) -> Scalar {
        let falling = falling_deg_seq(x, n, &self.lambda);
        sum_terms(
            (0..=n).map(|l| binomial(n as i64, l) * &self.derange0[l] * &falling[n - l]),
            flip,
        )
    }

    /// `d_n - n d_{n-1}` over a precomputed sequence.
    fn rec_rhs(&self, d: &[Scalar], n: usize, flip: bool) -> Scalar {
        sum_terms([d[n].clone(), -(int(n as i64) * &d[n - 1])], flip)
    }

    /// `sum_j sum_{l<=j} binom(n,j) (1)_{n-j,λ} (-1)^l d_{l,λ}(x) S_{2,λ}(j,l)`.
    fn thm3_lhs(&self, n: usize, x: &Scalar) -> Scalar {
        let d = self.derange_x(n, x);
        let one_falling = falling_deg_seq(&Scalar::one(), n, &self.lambda);
        let mut acc = Scalar::zero();
        for j in 0..=n {
            let outer = binomial(n as i64, j) * &one_falling[n - j];
            for (l, dl) in d.iter().enumerate().take(j + 1) {
                acc += &outer * sign(l) * dl * self.s2.get(j, l);
            }
        }
        acc
    }

    /// `sum_j (x-1)_{j,λ} (-1)^j S_{2,λ}(n,j)`.
    fn thm3_rhs(&self, n: usize, x: &Scalar, flip: bool) -> Scalar {
        let falling = falling_deg_seq(&(x - Scalar::one()), n, &self.lambda);
        sum_terms((0..=n).map(|j| &falling[j] * sign(j) * self.s2.get(n, j)), flip)
    }

    /// `sum_l S_{2,λ}(n,l) d_{l,λ}(x)`.
    fn thm4_lhs(&self, n: usize, x: &Scalar) -> Scalar {
        let d = self.derange_x(n, x);
        (0..=n).map(|l| self.s2.get(n, l) * &d[l]).sum()
    }

    /// `sum_l sum_{m<=l} binom(n,l) F_{n-l,λ}(1) (x-1)_{m,λ} S_{2,λ}(l,m)`.
    fn thm4_rhs(&self, n: usize, x: &Scalar, flip: bool) -> Scalar {
        let falling = falling_deg_seq(&(x - Scalar::one()), n, &self.lambda);
        let terms = (0..=n).flat_map(|l| {
            let outer = binomial(n as i64, l) * &self.fubini1[n - l];
            let falling = &falling;
            (0..=l).map(move |m| &outer * &falling[m] * self.s2.get(l, m))
        });
        sum_terms(terms, flip)
    }

    /// `sum_l F_{l,λ}(1) S_{1,λ}(n,l)`.
    fn thm5_lhs(&self, n: usize) -> Scalar {
        (0..=n).map(|l| &self.fubini1[l] * self.s1.get(n, l)).sum()
    }

    /// `sum_l binom(n,l) d_{l,λ} (1)_{n-l,λ}`.
    fn thm5_rhs(&self, n: usize, flip: bool) -> Scalar {
        let one_falling = falling_deg_seq(&Scalar::one(), n, &self.lambda);
        sum_terms(
            (0..=n).map(|l| binomial(n as i64, l) * &self.derange0[l] * &one_falling[n - l]),
            flip,
        )
    }

    /// `sum_m binom(n,m) d_{m,λ}(x) (1-x)_{n-m,λ}`.
    fn shifted_convolution(&self, n: usize, x: &Scalar, flip: bool) -> Scalar {
        let d = self.derange_x(n, x);
        let falling = falling_deg_seq(&(Scalar::one() - x), n, &self.lambda);
        sum_terms(
            (0..=n).map(|m| binomial(n as i64, m) * &d[m] * &falling[n - m]),
            flip,
        )
    }

    /// `sum_{m=1}^{n} (x-1)_{m,λ} S_{2,λ}(n,m)`.
    fn lemma6_lhs(&self, n: usize, x: &Scalar) -> Scalar {
        let falling = falling_deg_seq(&(x - Scalar::one()), n, &self.lambda);
        (1..=n).map(|m| &falling[m] * self.s2.get(n, m)).sum()
    }

    /// `sum_{m=1}^{n} (d_{m,λ}(x) - m d_{m-1,λ}(x)) S_{2,λ}(n,m)`.
    fn lemma6_rhs(&self, n: usize, x: &Scalar, flip: bool) -> Scalar {
        let d = self.derange_x(n, x);
        sum_terms(
            (1..=n).map(|m| (&d[m] - int(m as i64) * &d[m - 1]) * self.s2.get(n, m)),
            flip,
        )
    }

    /// `sum_m Bel_{m,λ} S_{1,λ}(n,m)`.
    fn bell_s1_sum(&self, n: usize, flip: bool) -> Scalar {
        sum_terms((0..=n).map(|m| &self.bell[m] * self.s1.get(n, m)), flip)
    }

    /// `sum_m (1)_{m,λ} S_{2,λ}(n,m)`.
    fn thm7b_rhs(&self, n: usize, flip: bool) -> Scalar {
        let one_falling = falling_deg_seq(&Scalar::one(), n, &self.lambda);
        sum_terms((0..=n).map(|m| &one_falling[m] * self.s2.get(n, m)), flip)
    }

    /// `sum_m (-1)^m d_{m,λ} S_{2,-λ}(n,m)`.
    fn thm8a_lhs(&self, n: usize) -> Scalar {
        (0..=n)
            .map(|m| sign(m) * &self.derange0[m] * self.s2_neg.get(n, m))
            .sum()
    }

    /// `sum_m binom(n,m) Bel_{m,-λ} (-1)_{n-m,-λ}`.
    fn thm8a_rhs(&self, n: usize, flip: bool) -> Scalar {
        let falling = falling_deg_seq(&int(-1), n, &self.neg_lambda);
        sum_terms(
            (0..=n).map(|m| binomial(n as i64, m) * &self.bell_neg[m] * &falling[n - m]),
            flip,
        )
    }

    /// `(-1)^n sum_m (-1)_{m,λ} S_{1,λ}(n,m)`.
    fn eq25_lhs(&self, n: usize) -> Scalar {
        let falling = falling_deg_seq(&int(-1), n, &self.lambda);
        let s: Scalar = (0..=n).map(|m| &falling[m] * self.s1.get(n, m)).sum();
        sign(n) * s
    }

    /// `n! sum_l (x-1)_{l,λ}/l! binom(r+n-l-1, n-l)`.
    fn thm9_explicit(&self, n: usize, r: usize, x: &Scalar, flip: bool) -> Scalar {
        if !flip {
            return derange_deg_order(n, r, &self.lambda, x).expect("r validated");
        }
        let falling = falling_deg_seq(&(x - Scalar::one()), n, &self.lambda);
        let s = sum_terms(
            (0..=n).map(|l| &falling[l] / factorial(l) * binomial((r + n - l) as i64 - 1, n - l)),
            flip,
        );
        factorial(n) * s
    }

    /// `sum_j sum_{m<=j} binom(n,j) (1)_{n-j,-λ} (-1)^m d_{m,λ} S_{2,-λ}(j,m)`.
    fn thm10_rhs(&self, n: usize, flip: bool) -> Scalar {
        let one_falling = falling_deg_seq(&Scalar::one(), n, &self.neg_lambda);
        let terms = (0..=n).flat_map(|j| {
            let outer = binomial(n as i64, j) * &one_falling[n - j];
            (0..=j).map(move |m| &outer * sign(m) * &self.derange0[m] * self.s2_neg.get(j, m))
        });
        sum_terms(terms, flip)
    }

    /// `sum_m binom(n,m) (x-1)_{n-m,λ} E[X^m]` with `E[X^m] = m!` for
    /// `X ~ Exp(1)`.
    fn moment_bridge(&self, n: usize, x: &Scalar, flip: bool) -> Scalar {
        let falling = falling_deg_seq(&(x - Scalar::one()), n, &self.lambda);
        sum_terms(
            (0..=n).map(|m| binomial(n as i64, m) * &falling[n - m] * factorial(m)),
            flip,
        )
    }
}

/// Sums `terms`, negating the last one when `flip` is set.
fn sum_terms(terms: impl IntoIterator<Item = Scalar>, flip: bool) -> Scalar {
    let mut acc = Scalar::zero();
    let mut last: Option<Scalar> = None;
    for t in terms {
        if let Some(prev) = last.replace(t) {
            acc += prev;
        }
    }
    if let Some(t) = last {
        if flip {
            acc -= t;
        } else {
            acc += t;
        }
    }
    acc
}

/// Evaluates one case from scratch.
pub fn verify(case: &IdentityCase) -> Result<CaseOutcome> {
    verify_with(case, Mutation::None)
}

pub fn verify_with(case: &IdentityCase, mutation: Mutation) -> Result<CaseOutcome> {
    case.validate()?;
    LambdaTables::new(&case.lambda, case.n).evaluate(case, mutation)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: IdentityCase,
    #[serde(with = "ratio_serde")]
    pub lhs: Scalar,
    #[serde(with = "ratio_serde")]
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub cases_run: usize,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certified_degrees: Option<BTreeMap<IdentityId, usize>>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Grid for [`verify_grid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub ids: BTreeSet<IdentityId>,
    pub n_max: usize,
    pub lambdas: Vec<Scalar>,
    pub xs: Vec<Scalar>,
    pub r_max: usize,
}

impl Grid {
    /// All cases for one `λ`, ordered by `(identity, n, x index, r)`.
    fn cases_for(&self, lambda: &Scalar) -> Vec<IdentityCase> {
        let mut out = Vec::new();
        for &id in &self.ids {
            for n in id.min_n()..=self.n_max {
                let xs: Vec<Option<Scalar>> = if id.uses_x() {
                    self.xs.iter().cloned().map(Some).collect()
                } else {
                    vec![None]
                };
                let rs: Vec<Option<usize>> = if id.uses_r() {
                    (1..=self.r_max).map(Some).collect()
                } else {
                    vec![None]
                };
                for x in &xs {
                    for r in &rs {
                        out.push(IdentityCase {
                            identity_id: id,
                            n,
                            lambda: lambda.clone(),
                            x: x.clone(),
                            r: *r,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Runs every combination of the grid. `jobs = 1` stays on the calling
/// thread; otherwise each `λ` is a separate task on a pool of `jobs`
/// threads (`0` means rayon's default). The report is ordered by
/// `(λ position, identity, n, x position, r)` whatever the scheduling.
pub fn verify_grid(grid: &Grid, mutation: Mutation, jobs: usize) -> Result<VerificationReport> {
    if grid.n_max > MAX_N {
        return Err(Error::OutOfRange(format!("n_max = {} exceeds {MAX_N}", grid.n_max)));
    }
    let needs_r = grid.ids.iter().any(|id| id.uses_r());
    if needs_r && grid.r_max == 0 {
        return Err(Error::OutOfRange("r_max must be at least 1".into()));
    }
    let needs_x = grid.ids.iter().any(|id| id.uses_x());
    if grid.ids.is_empty() {
        return Ok(VerificationReport::default());
    }
    if grid.lambdas.is_empty() || (needs_x && grid.xs.is_empty()) {
        return Err(Error::OutOfRange("grids must be nonempty".into()));
    }

    let run_one = |lambda: &Scalar| -> Result<(usize, Vec<Failure>)> {
        let tables = LambdaTables::new(lambda, grid.n_max).with_xs(&grid.xs);
        let mut failures = Vec::new();
        let cases = grid.cases_for(lambda);
        for case in &cases {
            let out = tables.evaluate(case, mutation)?;
            if !out.pass {
                failures.push(Failure { case: case.clone(), lhs: out.lhs, rhs: out.rhs });
            }
        }
        Ok((cases.len(), failures))
    };

    let per_lambda: Vec<Result<(usize, Vec<Failure>)>> = if jobs == 1 {
        grid.lambdas.iter().map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
        pool.install(|| grid.lambdas.par_iter().map(run_one).collect())
    };

    let mut report = VerificationReport::default();
    for res in per_lambda {
        let (count, failures) = res?;
        report.cases_run += count;
        report.failures.extend(failures);
    }
    Ok(report)
}

fn distinct(points: &[Scalar]) -> Vec<Scalar> {
    let mut v: Vec<Scalar> = points.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Proves the identity at fixed `n` as a polynomial identity in `(λ, x)` by
/// checking it on a product grid with at least `n + 1` distinct points per
/// variable.
pub fn certify(id: IdentityId, n: usize, lambdas: &[Scalar], xs: &[Scalar]) -> Result<bool> {
    certify_with(id, n, lambdas, xs, 1, Mutation::None)
}

/// [`certify`] with an explicit order `r` (used only by `THM9_VS_SERIES`)
/// and mutation mode.
pub fn certify_with(
    id: IdentityId,
    n: usize,
    lambdas: &[Scalar],
    xs: &[Scalar],
    r: usize,
    mutation: Mutation,
) -> Result<bool> {
    let lambdas = distinct(lambdas);
    let needed = n + 1;
    if lambdas.len() < needed {
        return Err(Error::InsufficientPoints { n, var: "λ", needed, got: lambdas.len() });
    }
    let xs: Vec<Option<Scalar>> = if id.uses_x() {
        let xs = distinct(xs);
        if xs.len() < needed {
            return Err(Error::InsufficientPoints { n, var: "x", needed, got: xs.len() });
        }
        xs.into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    let r = id.uses_r().then_some(r);
    for lambda in &lambdas {
        let tables = LambdaTables::new(lambda, n);
        for x in &xs {
            let case = IdentityCase::new(id, n, lambda.clone(), x.clone(), r)?;
            if !tables.evaluate(&case, mutation)?.pass {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `k` distinct small rationals usable as certification points.
pub fn certification_points(k: usize) -> Vec<Scalar> {
    (0..k)
        .map(|i| {
            let i = i as i64;
            // 0, 1/2, -1/2, 1, -1, 3/2, ...
            let mag = (i + 1) / 2;
            let s = if i % 2 == 1 { 1 } else { -1 };
            Scalar::new((s * mag).into(), 2.into())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q(n: i64, d: i64) -> Scalar {
        rat(n, d).unwrap()
    }

    fn case(id: IdentityId, n: usize, lambda: Scalar, x: Option<Scalar>, r: Option<usize>) -> IdentityCase {
        IdentityCase::new(id, n, lambda, x, r).unwrap()
    }

    #[test]
    fn thm2_rec_worked_example() {
        let out = verify(&case(IdentityId::Thm2Rec, 4, q(1, 2), Some(int(0)), None)).unwrap();
        assert_eq!(out.lhs, q(15, 2));
        assert_eq!(out.rhs, q(15, 2));
        assert!(out.pass);
        let x0 = verify(&case(IdentityId::Thm2RecX0, 4, q(1, 2), None, None)).unwrap();
        assert_eq!(x0.lhs, q(15, 2));
        assert!(x0.pass);
    }

    #[test]
    fn thm5_at_zero() {
        for lambda in [q(1, 2), q(-2, 7), int(0)] {
            let out = verify(&case(IdentityId::Thm5, 0, lambda, Some(q(3, 4)), None)).unwrap();
            assert_eq!(out.lhs, int(1));
            assert_eq!(out.rhs, int(1));
            assert!(out.pass);
        }
    }

    #[test]
    fn thm7b_worked_example() {
        let out = verify(&case(IdentityId::Thm7B, 2, q(1, 2), None, None)).unwrap();
        assert_eq!(out.lhs, int(1));
        assert_eq!(out.rhs, int(1));
        assert!(out.pass);
    }

    #[test]
    fn parameter_validation() {
        assert!(IdentityCase::new(IdentityId::Thm7A, 3, q(1, 2), Some(int(0)), None).is_err());
        assert!(IdentityCase::new(IdentityId::Thm3, 3, q(1, 2), None, None).is_err());
        assert!(IdentityCase::new(IdentityId::Thm9VsSeries, 3, q(1, 2), Some(int(0)), None).is_err());
        assert!(IdentityCase::new(IdentityId::Thm9VsSeries, 3, q(1, 2), Some(int(0)), Some(0)).is_err());
        assert!(IdentityCase::new(IdentityId::Thm2Rec, 0, q(1, 2), Some(int(0)), None).is_err());
        assert!(IdentityCase::new(IdentityId::Thm7A, MAX_N + 1, q(1, 2), None, None).is_err());
        assert!(matches!("THM99".parse::<IdentityId>(), Err(Error::UnknownIdentity(_))));
        assert_eq!("thm8_b".parse::<IdentityId>().unwrap(), IdentityId::Thm8B);
    }

    #[test]
    fn small_grid_has_no_failures() {
        let grid = Grid {
            ids: IdentityId::ALL.into_iter().collect(),
            n_max: 8,
            lambdas: vec![int(0), q(1, 2), q(-1, 3)],
            xs: vec![int(0), int(1), q(3, 4)],
            r_max: 2,
        };
        let report = verify_grid(&grid, Mutation::None, 1).unwrap();
        assert!(report.passed(), "{:?}", report.failures.first());
        assert!(report.cases_run > 0);
        let parallel = verify_grid(&grid, Mutation::None, 3).unwrap();
        assert_eq!(report, parallel);
    }

    #[test]
    fn empty_id_set_runs_nothing() {
        let grid = Grid { ids: BTreeSet::new(), n_max: 8, lambdas: vec![int(0)], xs: vec![], r_max: 1 };
        assert_eq!(verify_grid(&grid, Mutation::None, 1).unwrap().cases_run, 0);
    }

    #[test]
    fn mutation_breaks_every_identity() {
        let grid = Grid {
            ids: BTreeSet::new(),
            n_max: 6,
            lambdas: vec![int(0), q(1, 2), q(-1, 3)],
            xs: vec![int(0), int(1), q(3, 4)],
            r_max: 2,
        };
        for id in IdentityId::ALL {
            let g = Grid { ids: [id].into_iter().collect(), ..grid.clone() };
            let report = verify_grid(&g, Mutation::FlipLastTerm, 1).unwrap();
            assert!(!report.passed(), "{id} survived mutation");
        }
    }

    #[test]
    fn certify_examples() {
        let pts = certification_points(4);
        assert!(certify(IdentityId::Thm2Rec, 3, &pts, &pts).unwrap());
        for id in IdentityId::ALL {
            if id.min_n() == 0 {
                assert!(certify(id, 0, &[q(1, 3)], &[int(2)]).unwrap(), "{id}");
            }
        }
        assert!(!certify_with(IdentityId::Thm2Rec, 3, &pts, &pts, 1, Mutation::FlipLastTerm).unwrap());
        let err = certify(IdentityId::Thm5, 3, &pts[..3], &pts).unwrap_err();
        assert!(matches!(err, Error::InsufficientPoints { needed: 4, got: 3, .. }));
        // duplicates do not count
        let dup = vec![int(1); 10];
        assert!(certify(IdentityId::Thm7A, 2, &dup, &[]).is_err());
    }
}
