//! Irreducibility certificates over Q and finite fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::factor;
use super::field::{is_prime, Field, FiniteField, PrimeField, Rationals};
use super::poly::{self, Poly};
use super::spec::{PolynomialOverField, SpecField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "factor")]
pub enum Verdict {
    Irreducible,
    /// Carries a nontrivial monic factor.
    Reducible(PolynomialOverField),
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", content = "p")]
pub enum Method {
    TrialFactorization,
    Eisenstein(u64),
    ModPReduction(u64),
    RootSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCertificate {
    pub verdict: Verdict,
    pub method: Option<Method>,
}

impl IrreducibilityCertificate {
    pub fn is_irreducible(&self) -> bool {
        matches!(self.verdict, Verdict::Irreducible)
    }
}

/// Finite-field verdicts are decided by full factorization.
pub fn certify_finite<F: FiniteField + SpecField>(k: &F, f: &[F::Elem]) -> IrreducibilityCertificate {
    let fs = factor::factor(k, f);
    let verdict = if fs.len() == 1 && fs[0].1 == 1 {
        Verdict::Irreducible
    } else {
        Verdict::Reducible(PolynomialOverField::from_typed(k, fs[0].0.clone()))
    };
    IrreducibilityCertificate {
        verdict,
        method: Some(Method::TrialFactorization),
    }
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

pub fn certify_rational(f: &[BigRational]) -> IrreducibilityCertificate {
    let q = Rationals;
    let z = primitive_integer(f);
    let n = z.len() - 1;
    let done = |verdict, method| IrreducibilityCertificate {
        verdict,
        method: Some(method),
    };
    if n == 1 {
        return done(Verdict::Irreducible, Method::TrialFactorization);
    }
    for p in (2u64..=100).filter(|&p| is_prime(p)) {
        if eisenstein(&z, p) {
            return done(Verdict::Irreducible, Method::Eisenstein(p));
        }
    }
    let roots = rational_root(&z);
    if let Some(Some(r)) = &roots {
        let lin = vec![-r.clone(), BigRational::one()];
        return done(
            Verdict::Reducible(PolynomialOverField::from_typed(&q, lin)),
            Method::RootSearch,
        );
    }
    let roots_exhausted = matches!(roots, Some(None));
    if roots_exhausted && n <= 3 {
        return done(Verdict::Irreducible, Method::TrialFactorization);
    }
    if roots_exhausted && n == 4 {
        match quadratic_factor(&z) {
            Some(Some(g)) => {
                return done(
                    Verdict::Reducible(PolynomialOverField::from_typed(&q, g)),
                    Method::TrialFactorization,
                )
            }
            Some(None) => return done(Verdict::Irreducible, Method::TrialFactorization),
            None => {}
        }
    }
    for p in (2u64..=100).filter(|&p| is_prime(p)) {
        let bp = BigInt::from(p);
        if (z[n].clone() % &bp).is_zero() {
            continue;
        }
        let fp = PrimeField::new(p);
        let red: Poly<PrimeField> = z.iter().map(|c| fp.from_bigint(c)).collect();
        if factor::is_irreducible(&fp, &red) {
            return done(Verdict::Irreducible, Method::ModPReduction(p));
        }
    }
    IrreducibilityCertificate {
        verdict: Verdict::Unverified,
        method: None,
    }
}

/// Primitive integer polynomial with positive leading coefficient, same roots as f.
pub fn primitive_integer(f: &[BigRational]) -> Vec<BigInt> {
    let l = f
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -1 } else { 1 };
    ints.iter().map(|c| c / &g * sign).collect()
}

fn eisenstein(z: &[BigInt], p: u64) -> bool {
    let p = BigInt::from(p);
    let n = z.len() - 1;
    !(z[n].clone() % &p).is_zero()
        && z[..n].iter().all(|c| (c % &p).is_zero())
        && !(z[0].clone() % (&p * &p)).is_zero()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

/// Some(Some(root)) if a rational root exists, Some(None) if the search was exhaustive
/// and found none, None if the coefficients were too large to search.
fn rational_root(z: &[BigInt]) -> Option<Option<BigRational>> {
    if z[0].is_zero() {
        return Some(Some(BigRational::zero()));
    }
    let ds = divisors(&z[0])?;
    let es = divisors(z.last().unwrap())?;
    for d in &ds {
        for e in &es {
            if !d.gcd(e).is_one() {
                continue;
            }
            for s in [1i32, -1] {
                let num = d * s;
                if eval_scaled(z, &num, e).is_zero() {
                    return Some(Some(BigRational::new(num, e.clone())));
                }
            }
        }
    }
    Some(None)
}

/// e^n f(d/e).
fn eval_scaled(z: &[BigInt], d: &BigInt, e: &BigInt) -> BigInt {
    let n = z.len() - 1;
    let mut acc = BigInt::zero();
    for (i, c) in z.iter().enumerate() {
        acc += c * d.pow(i as u32) * e.pow((n - i) as u32);
    }
    acc
}

/// Kronecker search for a quadratic factor of a primitive quartic without rational roots.
fn quadratic_factor(z: &[BigInt]) -> Option<Option<Poly<Rationals>>> {
    let q = Rationals;
    let f: Vec<BigRational> = z.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let at = |x: i64| eval_scaled(z, &BigInt::from(x), &BigInt::one());
    let d0s = divisors(&at(0))?;
    let d1s = divisors(&at(1))?;
    let d2s = divisors(&at(-1))?;
    if d0s.len() * d1s.len() * d2s.len() > 4_000_000 {
        return None;
    }
    let signed = |v: &[BigInt]| -> Vec<BigInt> {
        v.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
    };
    let two = BigInt::from(2);
    for c in signed(&d0s) {
        for g1 in signed(&d1s) {
            for g2 in signed(&d2s) {
                let s = &g1 + &g2;
                if !(s.clone() % &two).is_zero() {
                    continue;
                }
                let a = &s / &two - &c;
                let b = (&g1 - &g2) / &two;
                if a.is_zero() {
                    continue;
                }
                let g: Vec<BigRational> = [c.clone(), b, a]
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect();
                if poly::div_exact(&q, &f, &g).is_some() {
                    return Some(Some(poly::monic(&q, &g)));
                }
            }
        }
    }
    Some(None)
}
