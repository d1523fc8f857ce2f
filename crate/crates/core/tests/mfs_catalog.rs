use std::collections::BTreeSet;

use cremona_kit::exactfield::PolynomialOverField;
use cremona_kit::galois_orbits::{
    apply_matrix, enumerate_point_orbits, large_orbit, orbit_from_poly, GeneralPosition, PointOrbit,
    TemplateKind,
};
use cremona_kit::mfs_catalog::{
    cb_class_key, dp5_incidence, galois_depth, link_validate, mfs_invariants, CatalogError,
    ConicBundleClassKey, FiberCenter, IncidenceConfig, LinkType, LinkVerdict, MfsKind,
    MoriFiberSpaceModel, SarkisovLink, Scope,
};
use cremona_kit::FieldSpec;
use proptest::prelude::*;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn p(field: &FieldSpec, s: &str) -> PolynomialOverField {
    PolynomialOverField::parse(field, s).unwrap()
}

fn cb5_q() -> MoriFiberSpaceModel {
    MoriFiberSpaceModel::cb5(large_orbit(&q(), 4, false).unwrap())
}

fn cb6_q() -> MoriFiberSpaceModel {
    let f = q();
    let o = orbit_from_poly(&f, &p(&f, "x^2-2"), TemplateKind::Split, Some(&p(&f, "x^2-3")), false).unwrap();
    MoriFiberSpaceModel::cb6(vec![o])
}

fn ok() -> LinkVerdict {
    LinkVerdict::Ok {
        scope: Scope::Verified,
    }
}

fn rule(r: &str) -> LinkVerdict {
    LinkVerdict::Violation { rule: r.into() }
}

fn type2_cb(x: usize) -> SarkisovLink {
    let o = large_orbit(&q(), x, false).unwrap();
    let f = MoriFiberSpaceModel::hirzebruch(1);
    let c = FiberCenter::Finite(p(&q(), &format!("x^{x}-3")));
    SarkisovLink::new(LinkType::II, f.clone(), f, Some(o.clone()), Some(o), Some(c))
}

#[test]
fn invariants_examples() {
    let i = mfs_invariants(&cb5_q());
    assert_eq!((i.k2, i.singular_fibers, i.picard_rank), (Some(5), Some(3), Some(2)));
    let i = mfs_invariants(&MoriFiberSpaceModel::hirzebruch(3));
    assert_eq!((i.k2, i.singular_fibers), (Some(8), Some(0)));
    let i = mfs_invariants(&cb6_q());
    assert_eq!((i.k2, i.singular_fibers), (Some(6), Some(2)));
    let i = mfs_invariants(&MoriFiberSpaceModel::p2());
    assert_eq!((i.k2, i.singular_fibers, i.picard_rank), (Some(9), None, Some(1)));
    let i = mfs_invariants(&MoriFiberSpaceModel::new(MfsKind::NonRationalCB));
    assert!(!i.rational);
    assert_eq!(i.k2, None);
}

#[test]
fn galois_depth_examples() {
    assert_eq!(galois_depth(&[type2_cb(17)]), 17);
    let iv = SarkisovLink::new(
        LinkType::IV,
        MoriFiberSpaceModel::hirzebruch(0),
        MoriFiberSpaceModel::hirzebruch(0),
        None,
        None,
        None,
    );
    assert_eq!(galois_depth(&[iv]), 0);
    assert_eq!(galois_depth(&[type2_cb(3), type2_cb(17)]), 17);
    assert_eq!(galois_depth(&[]), 0);
}

#[test]
fn link_validate_examples() {
    let o9 = large_orbit(&q(), 9, false).unwrap();
    let o1 = large_orbit(&q(), 1, false).unwrap();
    let dp = SarkisovLink::new(
        LinkType::II,
        MoriFiberSpaceModel::del_pezzo(9),
        MoriFiberSpaceModel::del_pezzo(1),
        Some(o9),
        Some(o1),
        None,
    );
    assert_eq!(link_validate(&dp), rule("DP-orbit-bound"));
    assert_eq!(link_validate(&type2_cb(17)), ok());

    let o4 = large_orbit(&q(), 4, false).unwrap();
    let iii = SarkisovLink::new(LinkType::III, cb5_q(), MoriFiberSpaceModel::p2(), None, Some(o4.clone()), None);
    assert_eq!(link_validate(&iii), ok());
    // orbit recorded on the other slot
    let iii2 = SarkisovLink::new(LinkType::III, cb5_q(), MoriFiberSpaceModel::p2(), Some(o4.clone()), None, None);
    assert_eq!(link_validate(&iii2), ok());
    let bad = SarkisovLink::new(LinkType::III, cb6_q(), MoriFiberSpaceModel::p2(), None, Some(o4), None);
    assert_eq!(link_validate(&bad), rule("K2-balance"));
}

#[test]
fn link_validate_rules() {
    let mut l = type2_cb(5);
    l.avoids_singular_fibers = false;
    assert_eq!(link_validate(&l), rule("II-singular-fiber"));

    let mut l = type2_cb(5);
    l.orbit_tgt = Some(large_orbit(&q(), 3, false).unwrap());
    assert_eq!(link_validate(&l), rule("II-cb-equal"));
    l.depth = 4;
    assert_eq!(link_validate(&l), rule("depth-mismatch"));
    l.orbit_src = Some(large_orbit(&q(), 3, false).unwrap());
    l.depth = 3;
    l.fiber_center = None;
    assert_eq!(link_validate(&l), ok());

    let mut l = type2_cb(5);
    l.fiber_center = Some(FiberCenter::Infinity);
    assert_eq!(link_validate(&l), rule("fiber-center-degree"));

    let mixed = SarkisovLink::new(
        LinkType::II,
        MoriFiberSpaceModel::p2(),
        MoriFiberSpaceModel::hirzebruch(1),
        Some(large_orbit(&q(), 1, false).unwrap()),
        Some(large_orbit(&q(), 1, false).unwrap()),
        None,
    );
    assert_eq!(link_validate(&mixed), rule("mixed-base"));

    let iv = |a: u32, b: u32| {
        SarkisovLink::new(
            LinkType::IV,
            MoriFiberSpaceModel::hirzebruch(a),
            MoriFiberSpaceModel::hirzebruch(b),
            None,
            None,
            None,
        )
    };
    assert_eq!(link_validate(&iv(0, 0)), ok());
    assert_eq!(link_validate(&iv(0, 2)), rule("IV-endpoints"));

    let dp = SarkisovLink::new(
        LinkType::II,
        MoriFiberSpaceModel::p2(),
        MoriFiberSpaceModel::del_pezzo(8),
        Some(large_orbit(&q(), 2, false).unwrap()),
        Some(large_orbit(&q(), 1, false).unwrap()),
        None,
    );
    assert_eq!(
        link_validate(&dp),
        LinkVerdict::Ok {
            scope: Scope::NecessaryConditionsOnly
        }
    );

    let nr = MoriFiberSpaceModel::new(MfsKind::NonRationalCB);
    let l = SarkisovLink::new(LinkType::I, MoriFiberSpaceModel::p2(), nr, None, None, None);
    assert_eq!(link_validate(&l), rule("nonrational-type"));
}

#[test]
fn type2_cb_links_all_depths() {
    for x in 1..=20 {
        assert!(link_validate(&type2_cb(x)).is_ok(), "depth {x}");
    }
}

#[test]
fn fiber_center_disjointness() {
    let f = q();
    let a = FiberCenter::Finite(p(&f, "x^2-2"));
    let b = FiberCenter::Finite(p(&f, "x^2-3"));
    assert!(a.disjoint(&b).unwrap());
    assert!(!a.disjoint(&a).unwrap());
    assert!(a.disjoint(&FiberCenter::Infinity).unwrap());
    assert!(!FiberCenter::Infinity.disjoint(&FiberCenter::Infinity).unwrap());
    let s = serde_json::to_string(&FiberCenter::Infinity).unwrap();
    assert_eq!(s, "\"infinity\"");
    let back: FiberCenter = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn cb_class_key_examples() {
    assert_eq!(
        cb_class_key(&MoriFiberSpaceModel::hirzebruch(0)).unwrap(),
        cb_class_key(&MoriFiberSpaceModel::hirzebruch(5)).unwrap()
    );
    let f2 = FieldSpec::prime(2);
    let gp4: Vec<PointOrbit> = enumerate_point_orbits(2, 4)
        .unwrap()
        .into_iter()
        .filter(|o| o.general_position == GeneralPosition::Yes)
        .collect();
    assert!(gp4.len() >= 2);
    let keys: BTreeSet<ConicBundleClassKey> = gp4
        .iter()
        .map(|o| cb_class_key(&MoriFiberSpaceModel::cb5(o.clone())).unwrap())
        .collect();
    assert_eq!(keys.len(), 1);
    let k5 = keys.into_iter().next().unwrap();
    assert!(matches!(k5, ConicBundleClassKey::DP5 { .. }));

    let quad = p(&f2, "x^2+x+1");
    let split = orbit_from_poly(&f2, &quad, TemplateKind::Split, Some(&quad), false).unwrap();
    let k6 = cb_class_key(&MoriFiberSpaceModel::cb6(vec![split])).unwrap();
    assert!(matches!(k6, ConicBundleClassKey::DP6 { .. }));
    assert_ne!(k5, k6);
    assert_ne!(k5, ConicBundleClassKey::Hirzebruch);

    assert_eq!(
        cb_class_key(&MoriFiberSpaceModel::new(MfsKind::NonRationalCB)).unwrap_err(),
        CatalogError::NonRational
    );
    assert_ne!(cb_class_key(&cb5_q()).unwrap(), cb_class_key(&cb6_q()).unwrap());
}

#[test]
fn invalid_conic_bundles_rejected() {
    // a line orbit is collinear
    let f3 = FieldSpec::prime(3);
    let quartic = cremona_kit::galois_orbits::large_orbit(&f3, 4, false).unwrap();
    let line = orbit_from_poly(&f3, &quartic.min_poly, TemplateKind::Line, None, false).unwrap();
    let e = cb_class_key(&MoriFiberSpaceModel::cb5(line)).unwrap_err();
    assert_eq!(e.kind(), "InvalidModel");
}

/// Normalized invertible 3x3 matrices over F_p, p prime.
fn pgl3(pr: u32) -> Vec<[[u32; 3]; 3]> {
    let n = pr.pow(9);
    let mut out = Vec::new();
    for c in 0..n {
        let mut v = [0u32; 9];
        let mut x = c;
        for e in v.iter_mut() {
            *e = x % pr;
            x /= pr;
        }
        if v.iter().find(|&&e| e != 0) != Some(&1) {
            continue;
        }
        let m: [[u32; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j]));
        let d = (m[0][0] * (m[1][1] * m[2][2] + pr * pr - m[1][2] * m[2][1])
            + m[0][1] * (m[1][2] * m[2][0] + pr * pr - m[1][0] * m[2][2])
            + m[0][2] * (m[1][0] * m[2][1] + pr * pr - m[1][1] * m[2][0]))
            % pr;
        if d != 0 {
            out.push(m);
        }
    }
    out
}

fn strings(m: &[[u32; 3]; 3]) -> [[String; 3]; 3] {
    m.map(|r| r.map(|e| e.to_string()))
}

#[test]
fn pgl3_oracle_sizes() {
    assert_eq!(pgl3(2).len(), 168);
    assert_eq!(pgl3(3).len(), 5616);
}

#[test]
fn cb_class_key_invariant_under_pgl3_f2_f3() {
    for pr in [2u64, 3] {
        let mats = pgl3(pr as u32);
        let field = FieldSpec::prime(pr);
        let o = large_orbit(&field, 4, false).unwrap();
        let x = MoriFiberSpaceModel::cb5(o.clone());
        let k0 = cb_class_key(&x).unwrap();
        let quads: Vec<PointOrbit> = enumerate_point_orbits(pr, 2).unwrap();
        let pair = vec![quads[0].clone(), quads[quads.len() - 1].clone()];
        let six = MoriFiberSpaceModel::cb6(pair.clone());
        let has6 = six.validate().is_ok();
        let k6 = if has6 { Some(cb_class_key(&six).unwrap()) } else { None };
        for m in &mats {
            let img = apply_matrix(std::slice::from_ref(&o), &strings(m)).unwrap();
            assert_eq!(cb_class_key(&MoriFiberSpaceModel::cb5(img[0].clone())).unwrap(), k0);
            if let Some(k6) = &k6 {
                let img = apply_matrix(&pair, &strings(m)).unwrap();
                assert_eq!(&cb_class_key(&MoriFiberSpaceModel::cb6(img)).unwrap(), k6);
            }
        }
    }
}

#[test]
fn dp5_incidence_examples() {
    let a = dp5_incidence(IncidenceConfig::A);
    assert_eq!(a.neighbours("E1").into_iter().filter(|c| c.len() == 3).collect::<Vec<_>>(), ["E12", "E13", "E14"]);
    let b = dp5_incidence(IncidenceConfig::B);
    assert_eq!(b.neighbours("E1").into_iter().filter(|c| c.len() == 3).collect::<Vec<_>>(), ["E23", "E24", "E34"]);
    for t in [&a, &b] {
        let fibers: Vec<[&str; 2]> = t.fibers.iter().map(|[x, y]| [x.as_str(), y.as_str()]).collect();
        assert_eq!(fibers, [["E12", "E34"], ["E13", "E24"], ["E14", "E23"]]);
        for s in &t.sections {
            assert_eq!(t.vertical_degree(s), 3);
            assert_eq!(t.section_degree(s), 0);
        }
        for v in &t.vertical {
            assert_eq!(t.section_degree(v), 2);
            assert_eq!(t.vertical_degree(v), 1);
        }
        assert_eq!(t.adjacency.len(), 12 + 3);
    }
    assert_ne!(a.adjacency, b.adjacency);
}

fn perms4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 1..=4 {
        for b in 1..=4 {
            for c in 1..=4 {
                for d in 1..=4 {
                    let v = [a, b, c, d];
                    if v.iter().collect::<BTreeSet<_>>().len() == 4 {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn dp5_incidence_relabeling_preserves_config() {
    for cfg in [IncidenceConfig::A, IncidenceConfig::B] {
        let t = dp5_incidence(cfg);
        for s in perms4() {
            let r = t.relabel(s);
            assert_eq!(r.adjacency, t.adjacency);
            assert_eq!(r.fibers, t.fibers);
        }
    }
}

#[test]
fn model_json_round_trip() {
    let l = type2_cb(3);
    let s = serde_json::to_string(&l).unwrap();
    assert!(s.contains("\"type\":\"II\""));
    let back: SarkisovLink = serde_json::from_str(&s).unwrap();
    assert_eq!(back, l);
    let m = cb5_q().labeled("X1");
    let s = serde_json::to_string(&m).unwrap();
    assert!(s.contains("\"kind\":\"CB5\""));
    let back: MoriFiberSpaceModel = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
    assert!(m.key().ends_with("@X1"));
}

fn any_model() -> impl Strategy<Value = MoriFiberSpaceModel> {
    prop_oneof![
        Just(MoriFiberSpaceModel::p2()),
        (0u32..6).prop_map(MoriFiberSpaceModel::hirzebruch),
        (1u8..10).prop_map(MoriFiberSpaceModel::del_pezzo),
        Just(cb5_q()),
        Just(cb6_q()),
        Just(MoriFiberSpaceModel::new(MfsKind::NonRationalCB)),
    ]
}

fn any_orbit() -> impl Strategy<Value = Option<PointOrbit>> {
    prop_oneof![Just(0usize), 1usize..12].prop_map(|n| {
        if n == 0 {
            None
        } else {
            Some(large_orbit(&FieldSpec::Rationals, n, false).unwrap())
        }
    })
}

fn any_link() -> impl Strategy<Value = SarkisovLink> {
    (
        prop_oneof![Just(LinkType::I), Just(LinkType::II), Just(LinkType::III), Just(LinkType::IV)],
        any_model(),
        any_model(),
        any_orbit(),
        any_orbit(),
        any::<bool>(),
    )
        .prop_map(|(t, s, g, a, b, avoid)| {
            let mut l = SarkisovLink::new(t, s, g, a, b, None);
            l.avoids_singular_fibers = avoid;
            l
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn k2_plus_singular_fibers_is_eight(m in any_model()) {
        let i = mfs_invariants(&m);
        if m.is_rational() && m.base_dim() == 1 {
            prop_assert_eq!(i.k2.unwrap() + i.singular_fibers.unwrap(), 8);
        }
    }

    #[test]
    fn link_validate_symmetric_under_inverse(l in any_link()) {
        prop_assert_eq!(link_validate(&l), link_validate(&l.inverse()));
    }

    #[test]
    fn link_depth_is_max_orbit(l in any_link()) {
        prop_assume!(l.link_type != LinkType::IV);
        let m = l.orbit_src.iter().chain(l.orbit_tgt.iter()).map(|o| o.size).max().unwrap_or(0);
        prop_assert_eq!(galois_depth(&[l]), m);
    }
}
