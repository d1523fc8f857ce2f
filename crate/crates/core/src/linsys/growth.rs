//! Lower bound on λ' for a birational map between conic bundles that does not preserve
//! the fibration, given the large base orbits of the source system.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{fmt_rational, positive, LinsysError};

/// Δ: orbits of at least this size are "large".
pub const DEFAULT_LARGE: usize = 16;

/// δ = ½.
pub fn default_delta() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

mod rat_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    #[serde(with = "rat_str")]
    pub lambda_in: BigRational,
    /// Σ |ω|(1 − m_ω/λ) over the large orbits.
    #[serde(with = "rat_str")]
    pub beta: BigRational,
    #[serde(with = "rat_str")]
    pub a_lower: BigRational,
    /// a·β·λ, a lower bound for λ'.
    #[serde(with = "rat_str")]
    pub bound: BigRational,
    /// μ: the largest multiplicity among the large orbits.
    #[serde(with = "rat_str")]
    pub mu: BigRational,
    pub large: usize,
    #[serde(with = "rat_str")]
    pub delta: BigRational,
    /// bound > 4λ.
    pub exceeds_four_lambda: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "hypothesis", rename_all = "kebab-case")]
pub enum Hypothesis {
    NoLargeOrbits,
    OrbitTooSmall { index: usize, size: usize },
    /// m_ω ≥ δλ.
    MultiplicityTooLarge { index: usize, mult: String },
    /// a < ½.
    ALowerTooSmall,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum BoundOutcome {
    Certificate(GrowthCertificate),
    HypothesisFailure(Hypothesis),
}

impl BoundOutcome {
    pub fn certificate(&self) -> Option<&GrowthCertificate> {
        match self {
            BoundOutcome::Certificate(c) => Some(c),
            BoundOutcome::HypothesisFailure(_) => None,
        }
    }
}

/// Certifies λ' ≥ aβλ with β > Δ(1 − δ) when every orbit has size ≥ Δ and m_ω < δλ.
pub fn lambda_bound(
    lambda: &BigRational,
    large_orbits: &[(usize, BigRational)],
    a_lower: &BigRational,
    large: usize,
    delta: &BigRational,
) -> Result<BoundOutcome, LinsysError> {
    if !positive(lambda) {
        return Err(LinsysError::NonpositiveLambda);
    }
    let fail = |h| Ok(BoundOutcome::HypothesisFailure(h));
    if a_lower < &default_delta() {
        return fail(Hypothesis::ALowerTooSmall);
    }
    if large_orbits.is_empty() {
        return fail(Hypothesis::NoLargeOrbits);
    }
    let threshold = delta * lambda;
    let mut beta = BigRational::zero();
    let mut mu = BigRational::zero();
    for (i, (size, m)) in large_orbits.iter().enumerate() {
        if *size < large {
            return fail(Hypothesis::OrbitTooSmall { index: i, size: *size });
        }
        if m >= &threshold {
            return fail(Hypothesis::MultiplicityTooLarge {
                index: i,
                mult: fmt_rational(m),
            });
        }
        if m > &mu {
            mu = m.clone();
        }
        let size = BigRational::from_integer((*size).into());
        beta += size * (BigRational::one() - m / lambda);
    }
    let bound = a_lower * &beta * lambda;
    let four = BigRational::from_integer(4.into());
    Ok(BoundOutcome::Certificate(GrowthCertificate {
        lambda_in: lambda.clone(),
        exceeds_four_lambda: bound > &four * lambda,
        beta,
        a_lower: a_lower.clone(),
        bound,
        mu,
        large,
        delta: delta.clone(),
    }))
}
