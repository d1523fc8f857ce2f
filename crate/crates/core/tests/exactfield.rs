use cremona_kit::exactfield::{
    factor, factor_over_prime_field, frobenius_orbit, irreducible_check, poly, ExtensionField,
    Field, FieldSpec, FiniteField, Method, PolynomialOverField, PrimeField, Verdict,
};
use proptest::prelude::*;

fn f2() -> FieldSpec {
    FieldSpec::prime(2)
}

fn p(field: &FieldSpec, s: &str) -> PolynomialOverField {
    PolynomialOverField::parse(field, s).unwrap()
}

/// Every monic polynomial of degree `d` over F_p.
fn all_monic(p: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|mut v| {
            v.push(1);
            v
        })
        .collect()
}

/// Trial-division factorization: repeatedly divide by the smallest monic divisor of degree >= 1.
fn oracle_factor(p: u64, f: &[u64]) -> Vec<(Vec<u64>, u32)> {
    let k = PrimeField::new(p);
    let mut f = poly::monic(&k, f);
    let mut out: Vec<(Vec<u64>, u32)> = Vec::new();
    let mut d = 1;
    while f.len() > 1 {
        if 2 * d > f.len() - 1 {
            out.push((f.clone(), 1));
            break;
        }
        let mut divided = false;
        for g in all_monic(p, d) {
            if let Some(q) = poly::div_exact(&k, &f, &g) {
                f = q;
                match out.iter_mut().find(|(h, _)| *h == g) {
                    Some(e) => e.1 += 1,
                    None => out.push((g, 1)),
                }
                divided = true;
                break;
            }
        }
        if !divided {
            d += 1;
        }
    }
    let mut merged: Vec<(Vec<u64>, u32)> = Vec::new();
    for (g, m) in out {
        match merged.iter_mut().find(|(h, _)| *h == g) {
            Some(e) => e.1 += m,
            None => merged.push((g, m)),
        }
    }
    merged.sort_by(|a, b| poly::cmp_canonical(&a.0, &b.0));
    merged
}

#[test]
fn factor_examples_match_trial_division() {
    let k = PrimeField::new(2);
    for (s, expect_len) in [("x^2+x+1", 1), ("x^4+x+1", 1)] {
        let f = p(&f2(), s);
        let got = factor_over_prime_field(&f).unwrap();
        let oracle = oracle_factor(2, &f.typed(&k).unwrap());
        assert_eq!(got.len(), expect_len);
        let got_raw: Vec<(Vec<u64>, u32)> = got
            .iter()
            .map(|(g, m)| (g.typed(&k).unwrap(), *m))
            .collect();
        assert_eq!(got_raw, oracle, "{s}");
        assert_eq!(got[0].0, f);
    }
    let got = factor_over_prime_field(&p(&f2(), "x^2+1")).unwrap();
    assert_eq!(got, vec![(p(&f2(), "x+1"), 2)]);
}

#[test]
fn factor_rejects_zero_and_q() {
    let zero = PolynomialOverField::from_typed(&PrimeField::new(2), vec![]);
    assert_eq!(
        factor_over_prime_field(&zero).unwrap_err().kind(),
        "ZeroPolynomial"
    );
    let q = p(&FieldSpec::Rationals, "x^2-1");
    assert_eq!(factor_over_prime_field(&q).unwrap_err().kind(), "UnsupportedField");
}

#[test]
fn factor_over_extension_field() {
    // x^2+x+1 splits over F_4
    let f4 = FieldSpec::parse("F4").unwrap();
    let f = p(&f4, "x^2+x+1");
    let got = factor_over_prime_field(&f).unwrap();
    assert_eq!(got.len(), 2);
    assert!(got.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
    assert_eq!(got[0].0.to_string_in("x"), "x+a");
    assert_eq!(got[1].0.to_string_in("x"), "x+(a+1)");
}

#[test]
fn irreducible_check_examples() {
    let q = FieldSpec::Rationals;
    let c = irreducible_check(&p(&q, "x^17-2")).unwrap();
    assert_eq!(c.verdict, Verdict::Irreducible);
    assert_eq!(c.method, Some(Method::Eisenstein(2)));

    let c = irreducible_check(&p(&q, "x^2-1")).unwrap();
    assert_eq!(c.verdict, Verdict::Reducible(p(&q, "x-1")));

    let f = p(&f2(), "x^17+x^3+1");
    let c = irreducible_check(&f).unwrap();
    let fs = factor_over_prime_field(&f).unwrap();
    let irreducible = fs.len() == 1 && fs[0].1 == 1;
    assert_eq!(c.is_irreducible(), irreducible);

    assert_eq!(
        irreducible_check(&p(&q, "7")).unwrap_err().kind(),
        "ConstantPolynomial"
    );
}

#[test]
fn irreducible_check_q_small_degree_trial() {
    let q = FieldSpec::Rationals;
    // x^4+1 has no rational roots and no rational quadratic factor
    let c = irreducible_check(&p(&q, "x^4+1")).unwrap();
    assert_eq!(c.verdict, Verdict::Irreducible);
    // (x^2+1)(x^2+3)
    let c = irreducible_check(&p(&q, "x^4+4x^2+3")).unwrap();
    match c.verdict {
        Verdict::Reducible(g) => {
            let f = p(&q, "x^4+4x^2+3");
            let k = cremona_kit::Rationals;
            assert!(poly::div_exact(&k, &f.typed(&k).unwrap(), &g.typed(&k).unwrap()).is_some());
            assert_eq!(g.degree(), Some(2));
        }
        other => panic!("expected a quadratic factor, got {other:?}"),
    }
    // rational coefficients are cleared: (x - 1/2)(x + 3)
    let c = irreducible_check(&p(&q, "x^2+5/2*x-3/2")).unwrap();
    assert_eq!(c.verdict, Verdict::Reducible(p(&q, "x-1/2")));
    // x^3+x+1 is irreducible mod 2; also degree 3 without rational roots
    assert!(irreducible_check(&p(&q, "x^3+x+1")).unwrap().is_irreducible());
}

#[test]
fn irreducible_check_q_mod_p() {
    // degree 6, not Eisenstein at any prime; irreducible mod 2
    let q = FieldSpec::Rationals;
    let c = irreducible_check(&p(&q, "x^6+x+1")).unwrap();
    assert_eq!(c.verdict, Verdict::Irreducible);
    assert!(matches!(c.method, Some(Method::ModPReduction(_))));
}

/// Repeated squaring of t in F_2[t]/(t^4+t+1), written out on bit masks.
fn squarings_mod_t4_t_1(k: u32) -> Vec<u32> {
    let mulmod = |a: u32, b: u32| {
        let mut r = 0u32;
        for i in 0..4 {
            if b >> i & 1 == 1 {
                r ^= a << i;
            }
        }
        for i in (4..8).rev() {
            if r >> i & 1 == 1 {
                r ^= 0b10011 << (i - 4);
            }
        }
        r
    };
    let mut x = 0b10u32;
    let mut out = vec![x];
    loop {
        for _ in 0..k {
            x = mulmod(x, x);
        }
        if x == 0b10 {
            return out;
        }
        out.push(x);
    }
}

#[test]
fn frobenius_orbit_examples() {
    let f = p(&f2(), "t^4+t+1");
    let o = frobenius_orbit(&f, 2).unwrap();
    assert_eq!(o.size, 4);
    let k = PrimeField::new(2);
    let masks: Vec<u32> = o
        .conjugates
        .iter()
        .map(|c| {
            c.typed(&k)
                .unwrap()
                .iter()
                .enumerate()
                .map(|(i, b)| (*b as u32) << i)
                .sum()
        })
        .collect();
    assert_eq!(masks, squarings_mod_t4_t_1(1));

    let o = frobenius_orbit(&p(&f2(), "t+1"), 2).unwrap();
    assert_eq!(o.size, 1);
    assert_eq!(o.conjugates[0], p(&f2(), "1"));

    let o = frobenius_orbit(&f, 4).unwrap();
    assert_eq!(o.size, 2);
    assert_eq!(o.size, squarings_mod_t4_t_1(2).len());

    assert_eq!(frobenius_orbit(&f, 3).unwrap_err().kind(), "BaseMismatch");
    assert_eq!(
        frobenius_orbit(&p(&f2(), "t^2+1"), 2).unwrap_err().kind(),
        "NotIrreducible"
    );
}

#[test]
fn first_irreducibles() {
    let k = PrimeField::new(2);
    let f4 = factor::first_irreducible(&k, 4);
    assert_eq!(poly::format(&k, &f4, "x"), "x^4+x+1");
    let f2 = factor::first_irreducible(&k, 2);
    assert_eq!(poly::format(&k, &f2, "x"), "x^2+x+1");
    let k3 = PrimeField::new(3);
    assert_eq!(poly::format(&k3, &factor::first_irreducible(&k3, 2), "x"), "x^2+1");
}

#[test]
fn roots_in_extension() {
    let k = PrimeField::new(2);
    let e = ExtensionField::new(k.clone(), vec![1, 1, 0, 0, 1]);
    let f: Vec<Vec<u64>> = [1u64, 1, 0, 0, 1].iter().map(|c| e.embed(c)).collect();
    let rs = factor::roots(&e, &f);
    assert_eq!(rs.len(), 4);
    for r in &rs {
        assert!(e.is_zero(&poly::eval(&e, &f, r)));
    }
    // x^2+x+1 has its roots in F_16 as well (F_4 inside F_16)
    let g: Vec<Vec<u64>> = [1u64, 1, 1].iter().map(|c| e.embed(c)).collect();
    assert_eq!(factor::roots(&e, &g).len(), 2);
}

#[test]
fn json_round_trip() {
    for (field, s) in [
        (FieldSpec::Rationals, "3/2*x^3-x+7"),
        (f2(), "x^4+x+1"),
        (FieldSpec::parse("F9").unwrap(), "x^2+(a+1)*x+2*a"),
    ] {
        let f = p(&field, s);
        let js = serde_json::to_string(&f).unwrap();
        let back: PolynomialOverField = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        assert_eq!(p(&field, &f.to_string_in("x")), f);
    }
    let js = serde_json::to_value(p(&f2(), "x^3+1")).unwrap();
    assert_eq!(
        js,
        serde_json::json!({"field": {"kind": "Fp", "p": 2}, "coeffs": ["1", "0", "0", "1"]})
    );
}

#[test]
fn field_spec_parsing() {
    assert_eq!(FieldSpec::parse("F2").unwrap(), FieldSpec::prime(2));
    assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
    let f16 = FieldSpec::parse("F16").unwrap();
    assert_eq!(
        f16,
        FieldSpec::FiniteExtension {
            p: 2,
            modulus: vec![1, 1, 0, 0, 1]
        }
    );
    assert_eq!(FieldSpec::parse("F2^4").unwrap(), f16);
    assert!(FieldSpec::parse("F6").is_err());
    assert!(FieldSpec::parse("R").is_err());
    let bad = FieldSpec::FiniteExtension {
        p: 2,
        modulus: vec![1, 0, 1],
    };
    assert!(bad.validate().is_err());
}

fn poly_strategy(p: u64, max_deg: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..p, 1..=max_deg + 1).prop_map(move |mut v| {
        v.push(1);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_reassembles(pr in prop::sample::select(vec![2u64, 3, 5]), f in poly_strategy(5, 9)) {
        let k = PrimeField::new(pr);
        let f: Vec<u64> = poly::trim(&k, f.into_iter().map(|c| c % pr).collect());
        prop_assume!(f.len() > 1);
        let fs = factor::factor(&k, &f);
        let mut prod = vec![1u64];
        let mut deg_sum = 0;
        for (g, m) in &fs {
            prop_assert!(factor::is_irreducible(&k, g));
            prop_assert_eq!(*g.last().unwrap(), 1);
            for _ in 0..*m {
                prod = poly::mul(&k, &prod, g);
            }
            deg_sum += (g.len() - 1) * *m as usize;
        }
        prop_assert_eq!(prod, poly::monic(&k, &f));
        prop_assert_eq!(deg_sum, f.len() - 1);
        prop_assert_eq!(fs, oracle_factor(pr, &f));
    }

    #[test]
    fn frobenius_orbit_size_divides_degree(idx in 0usize..6, k in 1u32..5) {
        let k2 = PrimeField::new(2);
        let degs = [2usize, 3, 4, 5, 6, 8];
        let f = factor::first_irreducible(&k2, degs[idx]);
        let d = f.len() - 1;
        let fp = PolynomialOverField::from_typed(&k2, f);
        let o = frobenius_orbit(&fp, 1 << k).unwrap();
        prop_assert_eq!(o.size, d / num_integer::gcd(d, k as usize));
        prop_assert_eq!(d % o.size, 0);
        if k == 1 {
            prop_assert_eq!(o.size, d);
        }
    }

    #[test]
    fn q_certificate_never_contradicts_trial(a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6) {
        // (x^2 + a x + b)(x^2 + c x + d) is never certified irreducible
        let q = FieldSpec::Rationals;
        let f = p(&q, &format!("(x^2+({a})*x+({b}))*(x^2+({c})*x+({d}))"));
        let cert = irreducible_check(&f).unwrap();
        prop_assert!(!cert.is_irreducible());
        if let Verdict::Reducible(g) = cert.verdict {
            let k = cremona_kit::Rationals;
            prop_assert!(poly::div_exact(&k, &f.typed(&k).unwrap(), &g.typed(&k).unwrap()).is_some());
            prop_assert!(g.degree().unwrap() >= 1 && g.degree() < f.degree());
        }
    }

    #[test]
    fn finite_certificate_agrees_with_factorization(f in poly_strategy(3, 7)) {
        let k = PrimeField::new(3);
        let f: Vec<u64> = poly::trim(&k, f);
        prop_assume!(f.len() > 1);
        let pf = PolynomialOverField::from_typed(&k, f.clone());
        let cert = irreducible_check(&pf).unwrap();
        let oracle = oracle_factor(3, &f);
        prop_assert_eq!(cert.is_irreducible(), oracle.len() == 1 && oracle[0].1 == 1);
    }
}

#[test]
fn extension_field_arithmetic_is_a_field() {
    let k = PrimeField::new(3);
    let e = ExtensionField::new(k, vec![1, 0, 1]); // F_9
    let elems = e.elements();
    assert_eq!(elems.len(), 9);
    for a in &elems {
        if !e.is_zero(a) {
            let inv = e.inv(a).unwrap();
            assert!(e.is_one(&e.mul(a, &inv)));
        }
        assert_eq!(e.pow(a, 9), *a);
    }
}
