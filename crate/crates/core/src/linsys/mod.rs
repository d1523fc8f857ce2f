//! Linear systems on Mori conic bundles: pushforward through type II links and the
//! λ-growth bound for maps that do not preserve the fibration.

mod growth;
mod lattice;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::mfs_catalog::{link_validate, SarkisovLink};

pub use growth::{default_delta, lambda_bound, BoundOutcome, GrowthCertificate, Hypothesis, DEFAULT_LARGE};
pub use lattice::push_oracle;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinsysError {
    #[error("invalid link: {0}")]
    InvalidLink(String),
    #[error("multiplicity 2m={two_m} of {key} outside [0, 4λ]")]
    MultiplicityOutOfRange { key: String, two_m: i64 },
    #[error("λ must be positive")]
    NonpositiveLambda,
    #[error("{0} is not in ½ℤ")]
    NotHalfIntegral(String),
    #[error("coefficients exceed the supported range")]
    Overflow,
}

impl LinsysError {
    pub fn kind(&self) -> &'static str {
        match self {
            LinsysError::InvalidLink(_) => "InvalidLink",
            LinsysError::MultiplicityOutOfRange { .. } => "MultiplicityOutOfRange",
            LinsysError::NonpositiveLambda => "NonpositiveLambda",
            LinsysError::NotHalfIntegral(_) => "NotHalfIntegral",
            LinsysError::Overflow => "Overflow",
        }
    }
}

/// H ~ λ(−K_X) + νf with base-orbit multiplicities, all stored doubled.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearSystemClass {
    pub two_lambda: u64,
    pub two_nu: i64,
    /// Orbit key to 2m_ω. Missing orbits have multiplicity 0.
    #[serde(default)]
    pub two_mult: BTreeMap<String, i64>,
}

/// Doubles a rational, rejecting denominators other than 1 and 2.
pub fn double_half_integer(x: &BigRational) -> Result<i64, LinsysError> {
    let d = x * BigRational::from_integer(2.into());
    if !d.is_integer() {
        return Err(LinsysError::NotHalfIntegral(x.to_string()));
    }
    d.to_integer()
        .to_i64()
        .ok_or_else(|| LinsysError::NotHalfIntegral(x.to_string()))
}

pub fn half(n: i64) -> BigRational {
    BigRational::new(n.into(), 2.into())
}

impl LinearSystemClass {
    pub fn new(two_lambda: u64, two_nu: i64) -> Self {
        LinearSystemClass {
            two_lambda,
            two_nu,
            two_mult: BTreeMap::new(),
        }
    }

    pub fn from_rationals(
        lambda: &BigRational,
        nu: &BigRational,
        mults: &[(String, BigRational)],
    ) -> Result<Self, LinsysError> {
        if lambda.is_negative() {
            return Err(LinsysError::NotHalfIntegral(lambda.to_string()));
        }
        let mut h = LinearSystemClass::new(double_half_integer(lambda)? as u64, double_half_integer(nu)?);
        for (k, m) in mults {
            h = h.with_mult(k, double_half_integer(m)?);
        }
        h.check()?;
        Ok(h)
    }

    pub fn with_mult(mut self, key: &str, two_m: i64) -> Self {
        self.two_mult.insert(key.to_string(), two_m);
        self
    }

    pub fn lambda(&self) -> BigRational {
        half(self.two_lambda as i64)
    }

    pub fn nu(&self) -> BigRational {
        half(self.two_nu)
    }

    pub fn mult(&self, key: &str) -> BigRational {
        half(self.two_mult(key))
    }

    pub fn two_mult(&self, key: &str) -> i64 {
        self.two_mult.get(key).copied().unwrap_or(0)
    }

    /// 0 ≤ m_ω ≤ 2λ for every recorded orbit.
    pub fn check(&self) -> Result<(), LinsysError> {
        for (k, &m) in &self.two_mult {
            check_mult(self.two_lambda, k, m)?;
        }
        Ok(())
    }

    fn without_zero_entries(mut self) -> Self {
        self.two_mult.retain(|_, m| *m != 0);
        self
    }
}

fn check_mult(two_lambda: u64, key: &str, two_m: i64) -> Result<(), LinsysError> {
    if two_m < 0 || two_m > 2 * two_lambda as i64 {
        return Err(LinsysError::MultiplicityOutOfRange {
            key: key.to_string(),
            two_m,
        });
    }
    Ok(())
}

/// Source and target orbit keys with their common size and the K² of the endpoints.
pub(crate) fn link_data(link: &SarkisovLink) -> Result<(String, String, usize, i32), LinsysError> {
    if !link.is_type2_cb() {
        return Err(LinsysError::InvalidLink(
            "not a type II link between conic bundles".into(),
        ));
    }
    if let crate::mfs_catalog::LinkVerdict::Violation { rule } = link_validate(link) {
        return Err(LinsysError::InvalidLink(rule));
    }
    let (src, tgt) = match (&link.orbit_src, &link.orbit_tgt) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(LinsysError::InvalidLink("missing base orbit".into())),
    };
    let k2 = link
        .source
        .k2()
        .ok_or_else(|| LinsysError::InvalidLink("non-rational source".into()))?;
    Ok((src.key(), tgt.key(), src.size, k2))
}

/// Pushforward through a type II link between conic bundles:
/// λ' = λ, ν' = ν + |ω|(λ − m_ω), m_ω' = 2λ − m_ω.
pub fn push_type2(h: &LinearSystemClass, link: &SarkisovLink) -> Result<LinearSystemClass, LinsysError> {
    let (src, tgt, r, _) = link_data(link)?;
    h.check()?;
    let two_m = h.two_mult(&src);
    let (two_nu, two_m2) = push_doubled(h.two_lambda, h.two_nu, two_m, r as i64);
    let mut out = h.clone();
    out.two_mult.remove(&src);
    out.two_nu = two_nu;
    out.two_mult.insert(tgt, two_m2);
    Ok(out.without_zero_entries())
}

/// The closed formulas on doubled values: returns (2ν', 2m').
pub fn push_doubled(two_lambda: u64, two_nu: i64, two_m: i64, size: i64) -> (i64, i64) {
    let tl = two_lambda as i64;
    (two_nu + size * (tl - two_m), 2 * tl - two_m)
}

/// Rational rendering helper: integers print without a denominator.
pub fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn positive(x: &BigRational) -> bool {
    x > &BigRational::zero()
}
