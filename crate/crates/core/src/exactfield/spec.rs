//! Serializable field descriptions and field-tagged polynomials.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor;
use super::field::{is_prime, prime_power, ExtensionField, Field, PrimeField, Rationals};
use super::parse;
use super::poly::{self, Poly};
use super::FieldError;

pub type Fp = PrimeField;
pub type Fq = ExtensionField<PrimeField>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldSpec {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    FinitePrime { p: u64 },
    /// `modulus` lists coefficients over F_p, constant term first.
    #[serde(rename = "Fq")]
    FiniteExtension { p: u64, modulus: Vec<u64> },
}

/// A field instance selected at runtime.
#[derive(Clone, Debug)]
pub enum AnyField {
    Q(Rationals),
    Fp(Fp),
    Fq(Fq),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Self {
        FieldSpec::FinitePrime { p }
    }

    /// Parses `Q`, `F<p>`, `F<p^k>` (e.g. `F16`) or `F<p>^<k>`. Prime powers use the
    /// first irreducible modulus in canonical order.
    pub fn parse(label: &str) -> Result<Self, FieldError> {
        let s = label.trim();
        if s == "Q" || s == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let bad = || FieldError::InvalidField(label.to_string());
        let rest = s.strip_prefix('F').ok_or_else(bad)?;
        let (p, k) = match rest.split_once('^') {
            Some((p, k)) => {
                let p: u64 = p.parse().map_err(|_| bad())?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                (p, k)
            }
            None => {
                let q: u64 = rest.parse().map_err(|_| bad())?;
                prime_power(q).ok_or_else(bad)?
            }
        };
        if !is_prime(p) || k == 0 {
            return Err(bad());
        }
        FieldSpec::of_order(p, k)
    }

    /// F_{p^k} with the canonical modulus (F_p itself when k = 1).
    pub fn of_order(p: u64, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= (1 << 32) {
            return Err(FieldError::InvalidField(format!("p={p} is not a supported prime")));
        }
        if k == 1 {
            return Ok(FieldSpec::FinitePrime { p });
        }
        if k > 64 {
            return Err(FieldError::InvalidField(format!("extension degree {k} exceeds 64")));
        }
        let fp = PrimeField::new(p);
        let modulus = factor::first_irreducible(&fp, k as usize);
        Ok(FieldSpec::FiniteExtension { p, modulus })
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::FinitePrime { p } => {
                if is_prime(*p) && *p < (1 << 32) {
                    Ok(())
                } else {
                    Err(FieldError::InvalidField(format!("p={p} is not a supported prime")))
                }
            }
            FieldSpec::FiniteExtension { p, modulus } => {
                FieldSpec::FinitePrime { p: *p }.validate()?;
                let fp = PrimeField::new(*p);
                let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
                let m = poly::trim(&fp, m);
                if m.len() < 2 || m.len() > 65 || *m.last().unwrap() != 1 {
                    return Err(FieldError::InvalidField(
                        "modulus must be monic of degree 1..64".into(),
                    ));
                }
                if !factor::is_irreducible(&fp, &m) {
                    return Err(FieldError::InvalidField("modulus is not irreducible".into()));
                }
                Ok(())
            }
        }
    }

    pub fn instantiate(&self) -> Result<AnyField, FieldError> {
        self.validate()?;
        Ok(match self {
            FieldSpec::Rationals => AnyField::Q(Rationals),
            FieldSpec::FinitePrime { p } => AnyField::Fp(PrimeField::new(*p)),
            FieldSpec::FiniteExtension { p, modulus } => {
                let fp = PrimeField::new(*p);
                let m = modulus.iter().map(|c| c % p).collect();
                AnyField::Fq(ExtensionField::new(fp, m))
            }
        })
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rationals)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::FinitePrime { p } | FieldSpec::FiniteExtension { p, .. } => *p,
        }
    }

    /// |k| for finite fields.
    pub fn order(&self) -> Option<u128> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::FinitePrime { p } => Some(*p as u128),
            FieldSpec::FiniteExtension { p, modulus } => {
                (*p as u128).checked_pow(modulus.len() as u32 - 1)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::FinitePrime { p } => write!(f, "F{p}"),
            FieldSpec::FiniteExtension { p, modulus } => {
                let fp = PrimeField::new(*p);
                let m = poly::format(&fp, modulus, "a");
                write!(f, "F{}[a]/({m})", p.pow(modulus.len() as u32 - 1))
            }
        }
    }
}

/// Ties a concrete field type to its serialized description.
pub trait SpecField: Field {
    fn spec(&self) -> FieldSpec;
    fn wrap(coeffs: Poly<Self>) -> Coeffs;
    fn unwrap(coeffs: &Coeffs) -> Option<&Poly<Self>>;
}

impl SpecField for Rationals {
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn wrap(coeffs: Poly<Self>) -> Coeffs {
        Coeffs::Q(coeffs)
    }
    fn unwrap(coeffs: &Coeffs) -> Option<&Poly<Self>> {
        match coeffs {
            Coeffs::Q(v) => Some(v),
            _ => None,
        }
    }
}

impl SpecField for Fp {
    fn spec(&self) -> FieldSpec {
        FieldSpec::FinitePrime { p: self.p() }
    }
    fn wrap(coeffs: Poly<Self>) -> Coeffs {
        Coeffs::Fp(coeffs)
    }
    fn unwrap(coeffs: &Coeffs) -> Option<&Poly<Self>> {
        match coeffs {
            Coeffs::Fp(v) => Some(v),
            _ => None,
        }
    }
}

impl SpecField for Fq {
    fn spec(&self) -> FieldSpec {
        FieldSpec::FiniteExtension {
            p: self.base().p(),
            modulus: self.modulus().to_vec(),
        }
    }
    fn wrap(coeffs: Poly<Self>) -> Coeffs {
        Coeffs::Fq(coeffs)
    }
    fn unwrap(coeffs: &Coeffs) -> Option<&Poly<Self>> {
        match coeffs {
            Coeffs::Fq(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeffs {
    Q(Vec<BigRational>),
    Fp(Vec<u64>),
    Fq(Vec<Vec<u64>>),
}

/// Runs `$body` with `$k` bound to the concrete field of `$spec`.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$k:ident| $body:expr) => {
        match $spec.instantiate()? {
            $crate::exactfield::AnyField::Q($k) => $body,
            $crate::exactfield::AnyField::Fp($k) => $body,
            $crate::exactfield::AnyField::Fq($k) => $body,
        }
    };
}

/// Like [`with_field!`] for finite fields; `$on_q` is evaluated for Q.
#[macro_export]
macro_rules! with_finite_field {
    ($spec:expr, $on_q:expr, |$k:ident| $body:expr) => {
        match $spec.instantiate()? {
            $crate::exactfield::AnyField::Q(_) => $on_q,
            $crate::exactfield::AnyField::Fp($k) => $body,
            $crate::exactfield::AnyField::Fq($k) => $body,
        }
    };
}

/// Exact univariate polynomial tagged with its field. Coefficients ascending, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolynomialOverField {
    field: FieldSpec,
    coeffs: Coeffs,
}

impl PolynomialOverField {
    pub fn from_typed<F: SpecField>(k: &F, coeffs: Poly<F>) -> Self {
        PolynomialOverField {
            field: k.spec(),
            coeffs: F::wrap(poly::trim(k, coeffs)),
        }
    }

    pub fn parse(field: &FieldSpec, text: &str) -> Result<Self, FieldError> {
        with_field!(field, |k| {
            let p = parse::parse_poly(&k, text)?;
            Ok(PolynomialOverField::from_typed(&k, p))
        })
    }

    /// Coefficients in the concrete field `k`; fails if `k` is not this polynomial's field.
    pub fn typed<F: SpecField>(&self, k: &F) -> Result<Poly<F>, FieldError> {
        if k.spec() != self.field {
            return Err(FieldError::FieldMismatch);
        }
        F::unwrap(&self.coeffs).cloned().ok_or(FieldError::FieldMismatch)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> Option<usize> {
        let n = match &self.coeffs {
            Coeffs::Q(v) => v.len(),
            Coeffs::Fp(v) => v.len(),
            Coeffs::Fq(v) => v.len(),
        };
        n.checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn monic(&self) -> Self {
        match (&self.coeffs, self.field.instantiate()) {
            (Coeffs::Q(v), Ok(AnyField::Q(k))) => Self::from_typed(&k, poly::monic(&k, v)),
            (Coeffs::Fp(v), Ok(AnyField::Fp(k))) => Self::from_typed(&k, poly::monic(&k, v)),
            (Coeffs::Fq(v), Ok(AnyField::Fq(k))) => Self::from_typed(&k, poly::monic(&k, v)),
            _ => self.clone(),
        }
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        match (&self.coeffs, self.field.instantiate()) {
            (Coeffs::Q(v), Ok(AnyField::Q(k))) => v.iter().map(|c| k.fmt_elem(c)).collect(),
            (Coeffs::Fp(v), Ok(AnyField::Fp(k))) => v.iter().map(|c| k.fmt_elem(c)).collect(),
            (Coeffs::Fq(v), Ok(AnyField::Fq(k))) => v.iter().map(|c| k.fmt_elem(c)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn to_string_in(&self, var: &str) -> String {
        match (&self.coeffs, self.field.instantiate()) {
            (Coeffs::Q(v), Ok(AnyField::Q(k))) => poly::format(&k, v, var),
            (Coeffs::Fp(v), Ok(AnyField::Fp(k))) => poly::format(&k, v, var),
            (Coeffs::Fq(v), Ok(AnyField::Fq(k))) => poly::format(&k, v, var),
            _ => String::from("?"),
        }
    }

    pub fn from_coeff_strings(field: &FieldSpec, coeffs: &[String]) -> Result<Self, FieldError> {
        with_field!(field, |k| {
            let v = coeffs
                .iter()
                .map(|s| parse::parse_elem(&k, s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PolynomialOverField::from_typed(&k, v))
        })
    }

    /// Canonical ordering (degree, then coefficients from the top); fields compared first.
    pub fn cmp_canonical(&self, other: &Self) -> std::cmp::Ordering {
        self.field.cmp(&other.field).then_with(|| match (&self.coeffs, &other.coeffs) {
            (Coeffs::Q(a), Coeffs::Q(b)) => poly::cmp_canonical(a, b),
            (Coeffs::Fp(a), Coeffs::Fp(b)) => poly::cmp_canonical(a, b),
            (Coeffs::Fq(a), Coeffs::Fq(b)) => poly::cmp_canonical(a, b),
            _ => std::cmp::Ordering::Equal,
        })
    }
}

impl fmt::Display for PolynomialOverField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x"))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    field: FieldSpec,
    coeffs: Vec<String>,
}

impl Serialize for PolynomialOverField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            field: self.field.clone(),
            coeffs: self.coeff_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolynomialOverField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        PolynomialOverField::from_coeff_strings(&raw.field, &raw.coeffs)
            .map_err(serde::de::Error::custom)
    }
}
