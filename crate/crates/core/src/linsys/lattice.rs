//! Picard lattice of the common resolution S of a type II link, used as an oracle for
//! the closed pushforward formulas.
//!
//! Basis {−K_S, f̂, E₂} where σ₁: S → X₁ blows up ω₁ with exceptional divisor E₁ and
//! σ₂: S → X₂ blows up ω₂ with exceptional divisor E₂. Classes are stored with doubled
//! integer coordinates.

use super::{link_data, LinearSystemClass, LinsysError};
use crate::mfs_catalog::SarkisovLink;

type V = [i128; 3];

fn overflow() -> LinsysError {
    LinsysError::Overflow
}

fn gram(k2: i128, r: i128) -> [[i128; 3]; 3] {
    [[k2 - r, 2, r], [2, 0, 0], [r, 0, -r]]
}

fn dot(g: &[[i128; 3]; 3], a: &V, b: &V) -> Result<i128, LinsysError> {
    let mut s: i128 = 0;
    for i in 0..3 {
        for j in 0..3 {
            let t = a[i]
                .checked_mul(g[i][j])
                .and_then(|x| x.checked_mul(b[j]))
                .ok_or_else(overflow)?;
            s = s.checked_add(t).ok_or_else(overflow)?;
        }
    }
    Ok(s)
}

fn comb(terms: &[(i128, V)]) -> Result<V, LinsysError> {
    let mut out: V = [0; 3];
    for (c, v) in terms {
        for i in 0..3 {
            let t = c.checked_mul(v[i]).ok_or_else(overflow)?;
            out[i] = out[i].checked_add(t).ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

fn exact_div(n: i128, d: i128, what: &str) -> Result<i128, LinsysError> {
    if n % d != 0 {
        return Err(LinsysError::NotHalfIntegral(format!("{what} = {n}/{}", 2 * d)));
    }
    Ok(n / d)
}

fn narrow(x: i128) -> Result<i64, LinsysError> {
    i64::try_from(x).map_err(|_| overflow())
}

pub fn push_oracle(h: &LinearSystemClass, link: &SarkisovLink) -> Result<LinearSystemClass, LinsysError> {
    let (src, tgt, r, k2) = link_data(link)?;
    h.check()?;
    let (r, k2) = (r as i128, k2 as i128);
    let g = gram(k2, r);
    let minus_k: V = [1, 0, 0];
    let fib: V = [0, 1, 0];
    let e2: V = [0, 0, 1];
    // the fibers through ω₁ become E₁ + E₂
    let e1 = comb(&[(r, fib), (-1, e2)])?;
    // σ₁*(−K_{X₁}) = −K_S + E₁
    let pull_k1 = comb(&[(1, minus_k), (1, e1)])?;
    let (tl, tn, tm) = (h.two_lambda as i128, h.two_nu as i128, h.two_mult(&src) as i128);
    let lifted = comb(&[(tl, pull_k1), (tn, fib), (-tm, e1)])?;

    // H̃ = σ₂*(λ'(−K_{X₂}) + ν'f) − m'E₂; σ₂*(−K_{X₂}) = −K_S + E₂
    let tl2 = exact_div(dot(&g, &lifted, &fib)?, 2, "λ'")?;
    let tm2 = exact_div(dot(&g, &lifted, &e2)?, r, "m'")?;
    // H̃·(−K_S) = λ'K² + 2ν' − m'r
    let rest = tl2
        .checked_mul(k2)
        .zip(tm2.checked_mul(r))
        .and_then(|(a, b)| dot(&g, &lifted, &minus_k).ok()?.checked_sub(a)?.checked_add(b))
        .ok_or_else(overflow)?;
    let tn2 = exact_div(rest, 2, "ν'")?;

    let two_lambda = u64::try_from(tl2).map_err(|_| LinsysError::NonpositiveLambda)?;
    let mut out = LinearSystemClass::new(two_lambda, narrow(tn2)?);
    for (k, v) in &h.two_mult {
        if k != &src && *v != 0 {
            out.two_mult.insert(k.clone(), *v);
        }
    }
    if tm2 != 0 {
        out.two_mult.insert(tgt, narrow(tm2)?);
    }
    Ok(out)
}
