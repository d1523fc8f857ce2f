//! Field contexts. A field value owns its parameters (prime, modulus); elements are plain data.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use super::poly;

pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// 0 for Q.
    fn characteristic(&self) -> u64;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    /// Adjoined generator of an extension, if any.
    fn generator(&self) -> Option<Self::Elem> {
        None
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

pub trait FiniteField: Field {
    /// Degree over the prime field.
    fn degree(&self) -> u32;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree())
    }

    /// Absolute Frobenius x -> x^p.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }

    /// x -> x^(p^k).
    fn frobenius_pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.frobenius(&x);
        }
        x
    }

    /// All elements in ascending order. Only sensible for small fields.
    fn elements(&self) -> Vec<Self::Elem>;

    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// F_p with p < 2^32, elements as residues in [0, p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32), "prime out of range: {p}");
        PrimeField { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (g, x, _) = extended_gcd(*a as i64, self.p as i64);
        debug_assert_eq!(g, 1);
        Some(x.rem_euclid(self.p as i64) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl FiniteField for PrimeField {
    fn degree(&self) -> u32 {
        1
    }
    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() % self.p
    }
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// base[a]/(modulus) for a monic irreducible modulus; elements are coefficient vectors
/// of fixed length deg(modulus), constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionField<F: Field> {
    base: F,
    modulus: Vec<F::Elem>,
}

impl<F: Field> ExtensionField<F> {
    /// The caller guarantees irreducibility; the modulus is made monic here.
    pub fn new(base: F, modulus: Vec<F::Elem>) -> Self {
        let modulus = poly::monic(&base, &poly::trim(&base, modulus));
        assert!(modulus.len() >= 2, "extension modulus must be nonconstant");
        ExtensionField { base, modulus }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn modulus(&self) -> &[F::Elem] {
        &self.modulus
    }

    /// Degree over the base field.
    pub fn rel_degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn embed(&self, a: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.rel_degree()];
        v[0] = a.clone();
        v
    }

    /// The base-field value of `a`, if `a` lies in the base field.
    pub fn project(&self, a: &[F::Elem]) -> Option<F::Elem> {
        if a[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// Reduce an arbitrary polynomial over the base into canonical form.
    pub fn from_poly(&self, p: &[F::Elem]) -> Vec<F::Elem> {
        let r = poly::rem(&self.base, p, &self.modulus);
        self.pad(r)
    }

    pub fn to_poly(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        poly::trim(&self.base, a.to_vec())
    }

    fn pad(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        v.resize(self.rel_degree(), self.base.zero());
        v
    }
}

impl<F: Field> Field for ExtensionField<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.rel_degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = self.rel_degree();
        let k = &self.base;
        let mut r = vec![k.zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !k.is_zero(y) {
                    r[i + j] = k.add(&r[i + j], &k.mul(x, y));
                }
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = std::mem::replace(&mut r[i], k.zero());
            if k.is_zero(&c) {
                continue;
            }
            for j in 0..n {
                r[i - n + j] = k.sub(&r[i - n + j], &k.mul(&c, &self.modulus[j]));
            }
        }
        r.truncate(n);
        r
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let (g, s, _) = poly::xgcd(&self.base, &self.to_poly(a), &self.modulus);
        if g.len() != 1 {
            return None;
        }
        Some(self.from_poly(&s))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.embed(&self.base.from_bigint(n))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn generator(&self) -> Option<Self::Elem> {
        Some(self.from_poly(&[self.base.zero(), self.base.one()]))
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        poly::format(&self.base, &self.to_poly(a), "a")
    }
}

impl<F: FiniteField> FiniteField for ExtensionField<F> {
    fn degree(&self) -> u32 {
        self.base.degree() * self.rel_degree() as u32
    }
    fn elements(&self) -> Vec<Self::Elem> {
        let base = self.base.elements();
        let mut out: Vec<Self::Elem> = vec![Vec::new()];
        for _ in 0..self.rel_degree() {
            let mut next = Vec::with_capacity(out.len() * base.len());
            for v in &out {
                for b in &base {
                    let mut w = v.clone();
                    w.push(b.clone());
                    next.push(w);
                }
            }
            out = next;
        }
        out.sort();
        out
    }
    fn random_elem(&self, rng: &mut dyn RngCore) -> Self::Elem {
        (0..self.rel_degree())
            .map(|_| self.base.random_elem(rng))
            .collect()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns (p, k) with q = p^k, or None.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let (mut r, mut k) = (q, 0u32);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}
