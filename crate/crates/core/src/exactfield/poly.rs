//! Dense univariate polynomials over a [`Field`], coefficients ascending, always trimmed.

use std::cmp::Ordering;

use num_bigint::BigUint;

use super::field::Field;

pub type Poly<F> = Vec<<F as Field>::Elem>;

pub fn trim<F: Field>(k: &F, mut a: Poly<F>) -> Poly<F> {
    while let Some(l) = a.last() {
        if k.is_zero(l) {
            a.pop();
        } else {
            break;
        }
    }
    a
}

/// Degree, with the zero polynomial mapped to None.
pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(k: &F, c: F::Elem) -> Poly<F> {
    trim(k, vec![c])
}

pub fn x<F: Field>(k: &F) -> Poly<F> {
    vec![k.zero(), k.one()]
}

pub fn is_one<F: Field>(k: &F, a: &[F::Elem]) -> bool {
    a.len() == 1 && k.is_one(&a[0])
}

pub fn add<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let r = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, r)
}

pub fn sub<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let r = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, r)
}

pub fn neg<F: Field>(k: &F, a: &[F::Elem]) -> Poly<F> {
    a.iter().map(|c| k.neg(c)).collect()
}

pub fn scale<F: Field>(k: &F, a: &[F::Elem], c: &F::Elem) -> Poly<F> {
    trim(k, a.iter().map(|x| k.mul(x, c)).collect())
}

pub fn mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![k.zero(); a.len() + b.len() - 1];
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
    trim(k, r)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r: Poly<F> = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lc_inv = k.inv(b.last().unwrap()).expect("nonzero leading coefficient");
    let mut q = vec![k.zero(); r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = k.mul(&r[i + b.len() - 1], &lc_inv);
        if k.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = k.sub(&r[i + j], &k.mul(&c, bj));
        }
        q[i] = c;
    }
    r.truncate(b.len() - 1);
    (trim(k, q), trim(k, r))
}

pub fn rem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    divrem(k, a, b).1
}

/// Exact quotient; None if `b` does not divide `a`.
pub fn div_exact<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<Poly<F>> {
    let (q, r) = divrem(k, a, b);
    r.is_empty().then_some(q)
}

pub fn monic<F: Field>(k: &F, a: &[F::Elem]) -> Poly<F> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = k.inv(l).expect("nonzero leading coefficient");
            a.iter().map(|c| k.mul(c, &inv)).collect()
        }
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

/// (g, s, t) with g = s a + t b and g monic.
pub fn xgcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![k.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![k.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s2 = sub(k, &s0, &mul(k, &q, &s1));
        let t2 = sub(k, &t0, &mul(k, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last().cloned() {
        None => (r0, s0, t0),
        Some(l) => {
            let inv = k.inv(&l).unwrap();
            (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
        }
    }
}

pub fn derivative<F: Field>(k: &F, a: &[F::Elem]) -> Poly<F> {
    let r = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(c, &k.from_i64(i as i64)))
        .collect();
    trim(k, r)
}

pub fn eval<F: Field>(k: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

pub fn mulmod<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Poly<F> {
    rem(k, &mul(k, a, b), m)
}

pub fn powmod<F: Field>(k: &F, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Poly<F> {
    let base = rem(k, a, m);
    let mut acc = rem(k, &[k.one()], m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(k, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(k, &acc, &base, m);
        }
    }
    acc
}

/// Canonical ordering: degree first, then coefficients compared from the leading one down.
pub fn cmp_canonical<E: Ord>(a: &[E], b: &[E]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

pub fn format<F: Field>(k: &F, a: &[F::Elem], var: &str) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in a.iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let mut cs = k.fmt_elem(c);
        let negative = cs.starts_with('-') && !cs[1..].contains(['+', '-']);
        if negative {
            cs.remove(0);
        }
        let compound = cs.contains(['+', '-']);
        let term = match (i, cs.as_str()) {
            (0, _) => {
                if compound {
                    format!("({cs})")
                } else {
                    cs
                }
            }
            (_, "1") => monomial(var, i),
            _ if compound => format!("({cs})*{}", monomial(var, i)),
            _ => format!("{cs}*{}", monomial(var, i)),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        out.push_str(&term);
    }
    out
}

fn monomial(var: &str, i: usize) -> String {
    if i == 1 {
        var.to_string()
    } else {
        format!("{var}^{i}")
    }
}
