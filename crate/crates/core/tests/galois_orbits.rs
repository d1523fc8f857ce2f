use std::collections::{BTreeSet, HashMap};

use cremona_kit::exactfield::PolynomialOverField;
use cremona_kit::galois_orbits::{
    apply_matrix, enumerate_point_orbits, fingerprint, general_position_check, large_orbit,
    match_transform, orbit_from_poly, pgl3_classify, transitive_sym4_audit, ClassFilter,
    GeneralPosition, OrbitError, PointOrbit, PositionVerdict, Template, TemplateKind,
};
use cremona_kit::FieldSpec;
use proptest::prelude::*;

fn f2() -> FieldSpec {
    FieldSpec::prime(2)
}

fn p(field: &FieldSpec, s: &str) -> PolynomialOverField {
    PolynomialOverField::parse(field, s).unwrap()
}

/// GF(2^m) on bit masks, modulus given with its leading bit.
#[derive(Clone, Copy)]
struct Gf2 {
    m: u32,
    modulus: u32,
}

impl Gf2 {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let mut r = 0u32;
        for i in 0..self.m {
            if b >> i & 1 == 1 {
                r ^= a << i;
            }
        }
        for i in (self.m..2 * self.m).rev() {
            if r >> i & 1 == 1 {
                r ^= self.modulus << (i - self.m);
            }
        }
        r
    }
    fn inv(&self, a: u32) -> u32 {
        (1..1 << self.m).find(|&b| self.mul(a, b) == 1).unwrap()
    }
    fn norm(&self, p: [u32; 3]) -> [u32; 3] {
        let lead = *p.iter().find(|&&x| x != 0).unwrap();
        let s = self.inv(lead);
        p.map(|x| self.mul(x, s))
    }
    fn frob(&self, p: [u32; 3]) -> [u32; 3] {
        p.map(|x| self.mul(x, x))
    }
    fn det(&self, a: [u32; 3], b: [u32; 3], c: [u32; 3]) -> u32 {
        let m = |x, y| self.mul(x, y);
        m(a[0], m(b[1], c[2]) ^ m(b[2], c[1]))
            ^ m(a[1], m(b[0], c[2]) ^ m(b[2], c[0]))
            ^ m(a[2], m(b[0], c[1]) ^ m(b[1], c[0]))
    }
}

fn gf(n: usize) -> Gf2 {
    let modulus = [0, 0b10, 0b111, 0b1011, 0b10011][n];
    Gf2 { m: n as u32, modulus }
}

fn orbit_of(k: &Gf2, p: [u32; 3]) -> Vec<[u32; 3]> {
    let mut out = vec![p];
    loop {
        let q = k.frob(*out.last().unwrap());
        if q == p {
            out.sort();
            return out;
        }
        out.push(q);
    }
}

/// Closed points of degree n of P² over F_2, as sorted conjugate sets.
fn oracle_closed_points(n: usize) -> Vec<Vec<[u32; 3]>> {
    let k = gf(n);
    let size = 1u32 << n;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in 0..size {
        for y in 0..size {
            for z in 0..size {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let pt = k.norm([x, y, z]);
                if !seen.insert(pt) {
                    continue;
                }
                let o = orbit_of(&k, pt);
                if o.len() == n && o[0] == pt {
                    out.push(o);
                }
            }
        }
    }
    out
}

fn gl3_f2() -> Vec<[[u32; 3]; 3]> {
    let k = gf(1);
    (0u32..512)
        .map(|c| std::array::from_fn(|i| std::array::from_fn(|j| c >> (3 * i + j) & 1)))
        .filter(|m: &[[u32; 3]; 3]| k.det(m[0], m[1], m[2]) != 0)
        .collect()
}

fn act(k: &Gf2, a: &[[u32; 3]; 3], pts: &[[u32; 3]]) -> Vec<[u32; 3]> {
    let mut v: Vec<[u32; 3]> = pts
        .iter()
        .map(|pt| {
            k.norm(std::array::from_fn(|i| {
                (0..3).fold(0, |acc, j| acc ^ k.mul(a[i][j], pt[j]))
            }))
        })
        .collect();
    v.sort();
    v
}

fn oracle_collinear(k: &Gf2, pts: &[[u32; 3]]) -> bool {
    let n = pts.len();
    (0..n).any(|i| {
        (i + 1..n).any(|j| (j + 1..n).any(|l| k.det(pts[i], pts[j], pts[l]) == 0))
    })
}

/// Partition of the closed points of degree n into GL₃(F₂) classes.
fn oracle_classes(n: usize, gp_only: bool) -> Vec<Vec<Vec<[u32; 3]>>> {
    let k = gf(n);
    let mats = gl3_f2();
    let mut pts = oracle_closed_points(n);
    if gp_only {
        pts.retain(|o| !oracle_collinear(&k, o));
    }
    let mut classes: Vec<Vec<Vec<[u32; 3]>>> = Vec::new();
    for o in pts {
        match classes
            .iter_mut()
            .find(|c| mats.iter().any(|a| act(&k, a, &c[0]) == o))
        {
            Some(c) => c.push(o),
            None => classes.push(vec![o]),
        }
    }
    classes
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut r = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            r = -r;
        }
        d += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

fn zeta_count(q: i64, n: usize) -> i64 {
    let s: i64 = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(n / d) * (q.pow(2 * d as u32) + q.pow(d as u32) + 1))
        .sum();
    s / n as i64
}

/// The representative point of an enumerated orbit as a bit mask triple.
fn rep_bits(o: &PointOrbit) -> [u32; 3] {
    let cs = o.coords.as_ref().unwrap();
    cs.clone().map(|c| {
        c.coeff_strings()
            .iter()
            .enumerate()
            .map(|(i, s)| if s == "1" { 1 << i } else { 0 })
            .sum()
    })
}

#[test]
fn census_counts_match_zeta_and_oracle() {
    for n in 1..=4 {
        let orbits = enumerate_point_orbits(2, n).unwrap();
        let oracle = oracle_closed_points(n);
        assert_eq!(orbits.len() as i64, zeta_count(2, n), "n={n}");
        assert_eq!(orbits.len(), oracle.len());
        let k = gf(n);
        for o in &orbits {
            assert_eq!(o.size, n);
            let conj = orbit_of(&k, rep_bits(o));
            assert!(conj.contains(&rep_bits(o)));
            let gp = n < 3 || !oracle_collinear(&k, &conj);
            assert_eq!(o.general_position == GeneralPosition::Yes, gp);
        }
    }
    assert_eq!(enumerate_point_orbits(2, 1).unwrap().len(), 7);
    assert_eq!(enumerate_point_orbits(2, 2).unwrap().len(), 7);
    assert_eq!(enumerate_point_orbits(2, 4).unwrap().len(), 63);
    assert_eq!(enumerate_point_orbits(3, 2).unwrap().len() as i64, zeta_count(3, 2));
    assert_eq!(enumerate_point_orbits(4, 2).unwrap().len() as i64, zeta_count(4, 2));
}

#[test]
fn census_scale_limit() {
    let e = enumerate_point_orbits(2, 11).unwrap_err();
    assert_eq!(e.kind(), "ScaleExceeded");
    assert_eq!(enumerate_point_orbits(6, 1).unwrap_err().kind(), "InvalidField");
}

#[test]
fn pgl3_classes_match_brute_force() {
    for n in 1..=4 {
        let orbits = enumerate_point_orbits(2, n).unwrap();
        let k = gf(n);
        let index: HashMap<[u32; 3], usize> = orbits
            .iter()
            .enumerate()
            .map(|(i, o)| (orbit_of(&k, rep_bits(o))[0], i))
            .collect();
        for (filter, gp_only) in [(ClassFilter::All, false), (ClassFilter::GeneralPositionOnly, true)] {
            let got = pgl3_classify(&orbits, 2, filter).unwrap();
            let oracle = oracle_classes(n, gp_only);
            let mut got_sets: Vec<BTreeSet<usize>> =
                got.iter().map(|c| c.indices.iter().copied().collect()).collect();
            let mut want_sets: Vec<BTreeSet<usize>> = oracle
                .iter()
                .map(|c| c.iter().map(|o| index[&o[0]]).collect())
                .collect();
            got_sets.sort();
            want_sets.sort();
            assert_eq!(got_sets, want_sets, "n={n} filter={filter:?}");
            for c in &got {
                assert_eq!(c.members, c.indices.len());
                assert_eq!(c.representative, orbits[c.indices[0]]);
            }
        }
    }
}

#[test]
fn f2_census_class_counts() {
    let o1 = enumerate_point_orbits(2, 1).unwrap();
    assert_eq!(pgl3_classify(&o1, 2, ClassFilter::All).unwrap().len(), 1);
    let o2 = enumerate_point_orbits(2, 2).unwrap();
    assert_eq!(pgl3_classify(&o2, 2, ClassFilter::All).unwrap().len(), 1);
    let o4 = enumerate_point_orbits(2, 4).unwrap();
    let gp = pgl3_classify(&o4, 2, ClassFilter::GeneralPositionOnly).unwrap();
    assert_eq!(gp.len(), 1);
    // frozen from the brute-force GL3(F2) oracle above
    let all = pgl3_classify(&o4, 2, ClassFilter::All).unwrap();
    assert_eq!(all.len(), oracle_classes(4, false).len());
}

#[test]
fn classify_is_order_independent() {
    let mut o4 = enumerate_point_orbits(2, 4).unwrap();
    let a = pgl3_classify(&o4, 2, ClassFilter::All).unwrap();
    o4.reverse();
    let b = pgl3_classify(&o4, 2, ClassFilter::All).unwrap();
    let reps_a: Vec<_> = a.iter().map(|c| (c.representative.key(), c.members)).collect();
    let reps_b: Vec<_> = b.iter().map(|c| (c.representative.key(), c.members)).collect();
    assert_eq!(reps_a, reps_b);
}

#[test]
fn size_two_orbits_over_f4_form_one_class() {
    let o = enumerate_point_orbits(4, 2).unwrap();
    assert_eq!(pgl3_classify(&o, 4, ClassFilter::All).unwrap().len(), 1);
}

#[test]
fn frame_classification_beyond_sweep_range() {
    // over F_7 a 4-point set is classified by the Frobenius cycle type
    let f7 = FieldSpec::prime(7);
    let k7 = cremona_kit::PrimeField::new(7);
    let quartics: Vec<PolynomialOverField> = cremona_kit::exactfield::factor::irreducibles(&k7, 4)
        .take(3)
        .map(|f| PolynomialOverField::from_typed(&k7, f))
        .collect();
    let mut orbits: Vec<PointOrbit> = quartics
        .iter()
        .map(|f| orbit_from_poly(&f7, f, TemplateKind::Conic, None, false).unwrap())
        .collect();
    let g = p(&f7, "x^2+1");
    let h = p(&f7, "x^2+2");
    orbits.push(orbit_from_poly(&f7, &g, TemplateKind::Split, Some(&h), false).unwrap());
    orbits.push(orbit_from_poly(&f7, &g, TemplateKind::Split, Some(&g), false).unwrap());
    let classes = pgl3_classify(&orbits, 7, ClassFilter::All).unwrap();
    let mut sizes: Vec<usize> = classes.iter().map(|c| c.members).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, quartics.len()]);

    let lines = [orbit_from_poly(&f7, &p(&f7, "x^3+3"), TemplateKind::Line, None, false).unwrap()];
    assert_eq!(
        pgl3_classify(&lines, 7, ClassFilter::All).unwrap_err().kind(),
        "ScaleExceeded"
    );
}

#[test]
fn orbit_from_poly_examples() {
    let o = orbit_from_poly(&f2(), &p(&f2(), "t^4+t+1"), TemplateKind::Conic, None, false).unwrap();
    assert_eq!(o.size, 4);
    assert_eq!(o.general_position, GeneralPosition::Yes);

    let q = FieldSpec::Rationals;
    let o = orbit_from_poly(&q, &p(&q, "x^17-2"), TemplateKind::Line, None, false).unwrap();
    assert_eq!(o.size, 17);
    assert_eq!(o.template, Template::Line);
    assert_eq!(o.general_position, GeneralPosition::No);

    let g = p(&f2(), "x^2+x+1");
    let o = orbit_from_poly(&f2(), &g, TemplateKind::Split, Some(&g), false).unwrap();
    assert_eq!(o.size, 4);
    assert_eq!(o.general_position, GeneralPosition::Yes);
    assert_eq!(fingerprint(std::slice::from_ref(&o)).unwrap().generator_images[0].len(), 4);

    let e = orbit_from_poly(&f2(), &p(&f2(), "x^2+1"), TemplateKind::Conic, None, false).unwrap_err();
    assert_eq!(e, OrbitError::NotIrreducible);
    let e = orbit_from_poly(&f2(), &g, TemplateKind::Split, Some(&p(&f2(), "x^3+x+1")), false)
        .unwrap_err();
    assert_eq!(e.kind(), "DegreeMismatch");
    let e = orbit_from_poly(&f2(), &g, TemplateKind::Split, None, false).unwrap_err();
    assert_eq!(e.kind(), "DegreeMismatch");
}

#[test]
fn general_position_examples() {
    let conic = orbit_from_poly(&f2(), &p(&f2(), "t^4+t+1"), TemplateKind::Conic, None, false).unwrap();
    assert_eq!(general_position_check(&[conic]).unwrap(), PositionVerdict::Yes);

    let q = FieldSpec::Rationals;
    let line: Vec<PointOrbit> = [["1", "0", "0"], ["0", "1", "0"], ["1", "1", "0"]]
        .iter()
        .map(|c| PointOrbit::rational_point(&q, *c).unwrap())
        .collect();
    assert_eq!(
        general_position_check(&line).unwrap(),
        PositionVerdict::No { triple: [0, 1, 2] }
    );

    let g = p(&f2(), "x^2+x+1");
    let split = orbit_from_poly(&f2(), &g, TemplateKind::Split, Some(&g), false).unwrap();
    assert_eq!(general_position_check(&[split]).unwrap(), PositionVerdict::Yes);

    let qc = orbit_from_poly(&q, &p(&q, "x^4-2"), TemplateKind::Conic, None, false).unwrap();
    let ql = orbit_from_poly(&q, &p(&q, "x^3-2"), TemplateKind::Line, None, false).unwrap();
    assert_eq!(
        general_position_check(&[qc, ql]).unwrap_err().kind(),
        "UncomputableOverQ"
    );
}

#[test]
fn match_transform_identity_and_errors() {
    let conic = orbit_from_poly(&f2(), &p(&f2(), "t^4+t+1"), TemplateKind::Conic, None, false).unwrap();
    let t = match_transform(std::slice::from_ref(&conic), std::slice::from_ref(&conic)).unwrap();
    assert_eq!(t.labeling, vec![0, 1, 2, 3]);
    assert_eq!(
        t.matrix,
        [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]].map(|r| r.map(String::from))
    );

    // size-4 orbit with a collinear triple
    let o4 = enumerate_point_orbits(2, 4).unwrap();
    let bad = o4.iter().find(|o| o.general_position == GeneralPosition::No).unwrap();
    let e = match_transform(std::slice::from_ref(&conic), std::slice::from_ref(bad)).unwrap_err();
    assert!(matches!(e, OrbitError::CollinearTriple(_)));

    // a 4-cycle never matches two 2-cycles
    let g = p(&f2(), "x^2+x+1");
    let split = orbit_from_poly(&f2(), &g, TemplateKind::Split, Some(&g), false).unwrap();
    assert_eq!(
        match_transform(&[conic], &[split]).unwrap_err(),
        OrbitError::FingerprintMismatch
    );
}

fn f2_matrix_strings(code: u32) -> [[String; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (code >> (3 * i + j) & 1).to_string()))
}

fn normalized_code(code: u32) -> bool {
    let k = gf(1);
    let m: [[u32; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| code >> (3 * i + j) & 1));
    k.det(m[0], m[1], m[2]) != 0
}

#[test]
fn match_transform_recovers_known_matrix_up_to_stabilizer() {
    let conic = orbit_from_poly(&f2(), &p(&f2(), "t^4+t+1"), TemplateKind::Conic, None, false).unwrap();
    let k16 = gf(4);
    let pts: Vec<[u32; 3]> = orbit_of(&k16, [1, 0b10, 0b100]);
    for code in (0u32..512).filter(|&c| normalized_code(c)) {
        let a0 = f2_matrix_strings(code);
        let image = apply_matrix(std::slice::from_ref(&conic), &a0).unwrap();
        let t = match_transform(std::slice::from_ref(&conic), &image).unwrap();
        let m: [[u32; 3]; 3] = t.matrix.clone().map(|r| r.map(|s| s.parse().unwrap()));
        let a0m: [[u32; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| code >> (3 * i + j) & 1));
        // same image set, and A0⁻¹A stabilizes P: the stabilizer has order 4 (the
        // centralizer of a 4-cycle), so A0 itself is one of four admissible answers
        assert_eq!(act(&k16, &m, &pts), act(&k16, &a0m, &pts));
        let solutions: Vec<_> = gl3_f2()
            .into_iter()
            .filter(|a| act(&k16, a, &pts) == act(&k16, &a0m, &pts))
            .collect();
        assert_eq!(solutions.len(), 4);
        assert!(solutions.contains(&m) && solutions.contains(&a0m));
    }
}

#[test]
fn match_transform_over_q_normal_forms() {
    let q = FieldSpec::Rationals;
    let a = orbit_from_poly(&q, &p(&q, "x^4-2"), TemplateKind::Conic, None, false).unwrap();
    let b = orbit_from_poly(&q, &p(&q, "x^4-3"), TemplateKind::Conic, None, false).unwrap();
    assert!(match_transform(std::slice::from_ref(&a), std::slice::from_ref(&a)).is_ok());
    assert_eq!(match_transform(&[a], &[b]).unwrap_err(), OrbitError::NoMatch);

    let g = p(&q, "x^2-2");
    let h = p(&q, "x^2-3");
    let s1 = orbit_from_poly(&q, &g, TemplateKind::Split, Some(&h), false).unwrap();
    let s2 = orbit_from_poly(&q, &h, TemplateKind::Split, Some(&g), false).unwrap();
    let t = match_transform(&[s1], &[s2]).unwrap();
    assert_eq!(t.matrix[1][2], "1");

    let frame: Vec<PointOrbit> = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["1", "1", "1"]]
        .iter()
        .map(|c| PointOrbit::rational_point(&q, *c).unwrap())
        .collect();
    let other: Vec<PointOrbit> = [["1", "2", "0"], ["0", "1", "0"], ["0", "0", "1"], ["1", "1", "3"]]
        .iter()
        .map(|c| PointOrbit::rational_point(&q, *c).unwrap())
        .collect();
    let t = match_transform(&frame, &other).unwrap();
    let image = apply_matrix(&frame, &t.matrix).unwrap();
    let keys = |v: &[PointOrbit]| v.iter().map(|o| o.key()).collect::<BTreeSet<_>>();
    assert_eq!(keys(&image), keys(&other));
}

#[test]
fn large_orbit_examples() {
    let q = FieldSpec::Rationals;
    let o = large_orbit(&q, 17, false).unwrap();
    assert_eq!(o.size, 17);
    assert_eq!(o.template, Template::Conic);
    assert_eq!(o.min_poly, p(&q, "x^17-2"));
    let o = large_orbit(&f2(), 4, false).unwrap();
    assert_eq!(o.min_poly, p(&f2(), "x^4+x+1"));
    assert_eq!(o.size, 4);
    let o = large_orbit(&q, 1, false).unwrap();
    assert_eq!(o.size, 1);
    assert_eq!(o.coords.as_ref().unwrap()[0], p(&q, "1"));
    assert_eq!(large_orbit(&q, 16, true).unwrap().size, 17);
}

#[test]
fn sym4_audit() {
    let classes = transitive_sym4_audit();
    assert_eq!(classes.len(), 5);
    let names: Vec<&str> = classes.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["S4", "A4", "D8", "V4", "Z4"]);
    let orders: Vec<usize> = classes.iter().map(|c| c.order).collect();
    assert_eq!(orders, [24, 12, 8, 4, 4]);
    let conj: Vec<usize> = classes.iter().map(|c| c.conjugates).collect();
    assert_eq!(conj, [1, 1, 3, 1, 3]);
    for c in &classes {
        assert!(c.elements.contains(&"(13)(24)".to_string()));
        assert_eq!(c.witnesses.len(), 3);
        for w in &c.witnesses {
            assert!(w.all.contains(&w.witness));
        }
    }
    let v4 = &classes[3];
    let w = v4.witnesses.iter().find(|w| w.pairing == "{1,3}<->{2,4}").unwrap();
    assert_eq!(w.witness, "(14)(23)");
    let z4 = &classes[4];
    let w = z4.witnesses.iter().find(|w| w.pairing == "{1,3}<->{2,4}").unwrap();
    assert_eq!(w.witness, "(1234)");
}

#[test]
fn orbit_json_round_trip() {
    let g = p(&f2(), "x^2+x+1");
    let o = orbit_from_poly(&f2(), &g, TemplateKind::Split, Some(&g), false).unwrap();
    let js = serde_json::to_value(&o).unwrap();
    assert_eq!(js["template"], "split");
    assert_eq!(js["general_position"], "yes");
    assert_eq!(js["size"], 4);
    let back: PointOrbit = serde_json::from_value(js).unwrap();
    assert_eq!(back, o);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn general_position_is_pgl3_invariant(idx in 0usize..63, code in 0u32..512) {
        prop_assume!(normalized_code(code));
        let o4 = enumerate_point_orbits(2, 4).unwrap();
        let o = &o4[idx];
        let img = apply_matrix(std::slice::from_ref(o), &f2_matrix_strings(code)).unwrap();
        prop_assert_eq!(img.len(), 1);
        prop_assert_eq!(img[0].size, 4);
        prop_assert_eq!(img[0].general_position, o.general_position);
    }

    #[test]
    fn orbit_size_equals_degree(idx in 0usize..5) {
        let f = ["x^2+x+1", "x^3+x+1", "x^4+x+1", "x^5+x^2+1", "x^6+x+1"][idx];
        let o = orbit_from_poly(&f2(), &p(&f2(), f), TemplateKind::Conic, None, false).unwrap();
        prop_assert_eq!(o.size, idx + 2);
        let l = orbit_from_poly(&f2(), &p(&f2(), f), TemplateKind::Line, None, false).unwrap();
        prop_assert_eq!(l.size, idx + 2);
        prop_assert_eq!(fingerprint(&[o]).unwrap().generator_images[0].len(), idx + 2);
    }

    #[test]
    fn transversal_members_never_match(i in 0usize..63, j in 0usize..63) {
        let o4 = enumerate_point_orbits(2, 4).unwrap();
        let classes = pgl3_classify(&o4, 2, ClassFilter::All).unwrap();
        let class_of = |x: usize| classes.iter().position(|c| c.indices.contains(&x)).unwrap();
        let k = gf(4);
        let (a, b) = (orbit_of(&k, rep_bits(&o4[i])), orbit_of(&k, rep_bits(&o4[j])));
        let related = gl3_f2().iter().any(|m| act(&k, m, &a) == b);
        prop_assert_eq!(related, class_of(i) == class_of(j));
    }
}
