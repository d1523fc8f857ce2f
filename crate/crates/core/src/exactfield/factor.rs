//! Factorization over finite fields: squarefree split, distinct-degree split, Cantor–Zassenhaus.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::FiniteField;
use super::poly::{self, Poly};

const EDF_SEED: u64 = 0x6372_656d_6f6e_61;

/// Monic irreducible factors with multiplicities, sorted canonically.
/// `f` must be nonzero.
pub fn factor<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Poly<F>, u32)> {
    assert!(!f.is_empty());
    let f = poly::monic(k, f);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    for (g, m) in squarefree(k, &f) {
        for (h, d) in distinct_degree(k, &g) {
            for e in equal_degree(k, &h, d, &mut rng) {
                out.push((e, m));
            }
        }
    }
    out.sort_by(|a, b| poly::cmp_canonical(&a.0, &b.0));
    out
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime squarefree parts with multiplicities.
pub fn squarefree<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Poly<F>, u32)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let p = k.characteristic() as u32;
    let df = poly::derivative(k, f);
    let mut c = poly::gcd(k, f, &df);
    let mut w = poly::div_exact(k, f, &c).unwrap();
    let mut i = 1u32;
    while !poly::is_one(k, &w) {
        let y = poly::gcd(k, &w, &c);
        let z = poly::div_exact(k, &w, &y).unwrap();
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        c = poly::div_exact(k, &c, &y).unwrap();
        w = y;
    }
    if c.len() > 1 {
        let root = pth_root(k, &c);
        for (g, m) in squarefree(k, &root) {
            out.push((g, m * p));
        }
    }
    out
}

/// For c(x) = d(x^p), returns the p-th root of c.
fn pth_root<F: FiniteField>(k: &F, c: &[F::Elem]) -> Poly<F> {
    let p = k.characteristic() as usize;
    let back = k.degree() - 1;
    c.iter()
        .step_by(p)
        .map(|a| k.frobenius_pow(a, back))
        .collect()
}

/// (product of all irreducible factors of degree d, d) for a squarefree monic f.
pub fn distinct_degree<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Poly<F>, usize)> {
    let q = k.order();
    let x = poly::x(k);
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let mut h = poly::rem(k, &x, &f);
    let mut d = 0usize;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
            break;
        }
        h = poly::powmod(k, &h, &q, &f);
        let g = poly::gcd(k, &poly::sub(k, &h, &x), &f);
        if g.len() > 1 {
            f = poly::div_exact(k, &f, &g).unwrap();
            h = poly::rem(k, &h, &f);
            out.push((g, d));
        }
    }
    out
}

/// Split a squarefree monic product of irreducibles of degree d.
pub fn equal_degree<F: FiniteField>(
    k: &F,
    f: &[F::Elem],
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let p = k.characteristic();
    loop {
        let a: Poly<F> = poly::trim(k, (0..n).map(|_| k.random_elem(rng)).collect());
        if a.len() <= 1 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace down to F_2 of the element a in (F_q[x]/f_i)
            let steps = k.degree() as usize * d;
            let mut acc = a.clone();
            let mut t = a.clone();
            for _ in 1..steps {
                t = poly::mulmod(k, &t, &t, f);
                acc = poly::add(k, &acc, &t);
            }
            acc
        } else {
            let e = (k.order().pow(d as u32) - BigUint::one()) / 2u32;
            poly::sub(k, &poly::powmod(k, &a, &e, f), &[k.one()])
        };
        let g = poly::gcd(k, f, &b);
        if g.len() > 1 && g.len() < f.len() {
            let h = poly::div_exact(k, f, &g).unwrap();
            let mut out = equal_degree(k, &g, d, rng);
            out.extend(equal_degree(k, &h, d, rng));
            return out;
        }
    }
}

pub fn is_irreducible<F: FiniteField>(k: &F, f: &[F::Elem]) -> bool {
    if f.len() < 2 {
        return false;
    }
    let f = poly::monic(k, f);
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let q = k.order();
    let x = poly::x(k);
    // x^(q^n) = x mod f, and gcd(x^(q^(n/r)) - x, f) = 1 for every prime r | n.
    let mut powers = vec![poly::rem(k, &x, &f)];
    for _ in 0..n {
        let next = poly::powmod(k, powers.last().unwrap(), &q, &f);
        powers.push(next);
    }
    if poly::sub(k, &powers[n], &poly::rem(k, &x, &f)).len() > 0 {
        return false;
    }
    for r in prime_divisors(n) {
        let h = poly::sub(k, &powers[n / r], &x);
        if !poly::is_one(k, &poly::gcd(k, &h, &f)) {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Monic polynomials of degree n in canonical order, lazily.
pub fn monic_polys<F: FiniteField>(k: &F, n: usize) -> impl Iterator<Item = Poly<F>> + '_ {
    let elems = k.elements();
    let base = elems.len();
    let mut digits = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut p: Poly<F> = digits.iter().map(|&i| elems[i].clone()).collect();
        p.push(k.one());
        // odometer: digits[0] is the constant term, least significant
        let mut i = 0;
        loop {
            if i == n {
                done = true;
                break;
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        Some(p)
    })
}

/// First monic irreducible polynomial of degree n in canonical order.
pub fn first_irreducible<F: FiniteField>(k: &F, n: usize) -> Poly<F> {
    irreducibles(k, n).next().expect("irreducible polynomials exist in every degree")
}

pub fn irreducibles<F: FiniteField>(k: &F, n: usize) -> impl Iterator<Item = Poly<F>> + '_ {
    monic_polys(k, n).filter(move |p| is_irreducible(k, p))
}

/// Distinct roots of f in k, sorted.
pub fn roots<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<F::Elem> {
    let f = poly::monic(k, f);
    if f.len() < 2 {
        return Vec::new();
    }
    let x = poly::x(k);
    let xq = poly::powmod(k, &x, &k.order(), &f);
    let g = poly::gcd(k, &poly::sub(k, &xq, &x), &f);
    if g.len() < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    let mut out: Vec<F::Elem> = equal_degree(k, &g, 1, &mut rng)
        .into_iter()
        .map(|l| k.neg(&l[0]))
        .collect();
    out.sort();
    out
}
