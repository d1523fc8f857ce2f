//! Exact arithmetic over Q and finite fields, factorization, irreducibility certificates.

pub mod factor;
pub mod field;
pub mod irreducible;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod spec;

use serde::{Deserialize, Serialize};

pub use field::{ExtensionField, Field, FiniteField, PrimeField, Rationals};
pub use irreducible::{IrreducibilityCertificate, Method, Verdict};
pub use poly::Poly;
pub use spec::{AnyField, Coeffs, FieldSpec, Fp, Fq, PolynomialOverField, SpecField};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("operation not supported over {0}")]
    UnsupportedField(String),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("q = {q} is not a power of p = {p}")]
    BaseMismatch { q: u64, p: u64 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial belongs to a different field")]
    FieldMismatch,
}

impl FieldError {
    pub fn kind(&self) -> &'static str {
        match self {
            FieldError::ZeroPolynomial => "ZeroPolynomial",
            FieldError::ConstantPolynomial => "ConstantPolynomial",
            FieldError::UnsupportedField(_) => "UnsupportedField",
            FieldError::NotIrreducible => "NotIrreducible",
            FieldError::BaseMismatch { .. } => "BaseMismatch",
            FieldError::InvalidField(_) => "InvalidField",
            FieldError::Parse(_) => "ParseError",
            FieldError::FieldMismatch => "FieldMismatch",
        }
    }
}

/// Monic irreducible factors with multiplicities, ordered by degree then coefficients.
pub fn factor_over_prime_field(
    f: &PolynomialOverField,
) -> Result<Vec<(PolynomialOverField, u32)>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    crate::with_finite_field!(
        f.field(),
        Err(FieldError::UnsupportedField("Q".into())),
        |k| {
            let p = f.typed(&k)?;
            Ok(factor::factor(&k, &p)
                .into_iter()
                .map(|(g, m)| (PolynomialOverField::from_typed(&k, g), m))
                .collect())
        }
    )
}

pub fn irreducible_check(f: &PolynomialOverField) -> Result<IrreducibilityCertificate, FieldError> {
    match f.degree() {
        None | Some(0) => return Err(FieldError::ConstantPolynomial),
        _ => {}
    }
    match f.field().instantiate()? {
        AnyField::Q(k) => Ok(irreducible::certify_rational(&f.typed(&k)?)),
        AnyField::Fp(k) => Ok(irreducible::certify_finite(&k, &f.typed(&k)?)),
        AnyField::Fq(k) => Ok(irreducible::certify_finite(&k, &f.typed(&k)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusOrbit {
    pub size: usize,
    /// Conjugates t^(q^i) reduced mod f, for i = 0..size.
    pub conjugates: Vec<PolynomialOverField>,
}

/// Orbit of a root t of `f` (irreducible over F_p) under x -> x^q.
pub fn frobenius_orbit(f: &PolynomialOverField, q: u64) -> Result<FrobeniusOrbit, FieldError> {
    let p = match f.field() {
        FieldSpec::FinitePrime { p } => *p,
        other => return Err(FieldError::UnsupportedField(other.to_string())),
    };
    let k = match field::prime_power(q) {
        Some((qp, k)) if qp == p => k,
        _ => return Err(FieldError::BaseMismatch { q, p }),
    };
    let fp = PrimeField::new(p);
    let coeffs = f.typed(&fp)?;
    if coeffs.len() < 2 || !factor::is_irreducible(&fp, &coeffs) {
        return Err(FieldError::NotIrreducible);
    }
    let ext = ExtensionField::new(fp.clone(), coeffs);
    let t = ext.generator().unwrap();
    let mut conj = vec![t.clone()];
    loop {
        let next = ext.frobenius_pow(conj.last().unwrap(), k);
        if next == t {
            break;
        }
        conj.push(next);
    }
    Ok(FrobeniusOrbit {
        size: conj.len(),
        conjugates: conj
            .iter()
            .map(|c| PolynomialOverField::from_typed(&fp, ext.to_poly(c)))
            .collect(),
    })
}

/// Parses `text` as a polynomial over `field` and checks it is nonzero.
pub fn parse_poly(field: &FieldSpec, text: &str) -> Result<PolynomialOverField, FieldError> {
    let p = PolynomialOverField::parse(field, text)?;
    if p.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    Ok(p)
}

/// Degree of a typed polynomial's splitting field over a finite field: lcm of factor degrees.
pub fn splitting_degree(f: &PolynomialOverField) -> Result<usize, FieldError> {
    let fs = factor_over_prime_field(f)?;
    Ok(fs
        .iter()
        .map(|(g, _)| g.degree().unwrap_or(0))
        .fold(1, num_integer::lcm))
}
