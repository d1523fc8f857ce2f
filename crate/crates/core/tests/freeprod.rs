use std::collections::{BTreeSet, HashSet, VecDeque};

use cremona_kit::exactfield::PolynomialOverField;
use cremona_kit::freeprod::{
    fp_normalize, homo_eval, homo_refined_eval, FpLetter, FpWord, FreeProductElement, RefinedFactor,
    RefinedIndex,
};
use cremona_kit::galois_orbits::{large_orbit, orbit_from_poly, TemplateKind};
use cremona_kit::mfs_catalog::{
    cb_class_key, ConicBundleClassKey, FiberCenter, LinkType, MoriFiberSpaceModel, SarkisovLink,
};
use cremona_kit::rewriting::{fuzz_relator, FuzzConfig, GroupoidWord, Letter};
use cremona_kit::FieldSpec;
use proptest::prelude::*;

type Raw = Vec<(u8, BTreeSet<u8>)>;

fn letters(raw: &Raw) -> Vec<FpLetter<u8, u8>> {
    raw.iter()
        .map(|(f, b)| FpLetter {
            factor: *f,
            bits: b.clone(),
        })
        .collect()
}

/// Every word reachable by deleting an empty letter or merging an adjacent same-factor
/// pair anywhere; returns the irreducible ones.
fn oracle_terminals(raw: &Raw) -> HashSet<Raw> {
    let mut seen: HashSet<Raw> = HashSet::new();
    let mut terminals = HashSet::new();
    let mut queue = VecDeque::from([raw.clone()]);
    while let Some(w) = queue.pop_front() {
        if !seen.insert(w.clone()) {
            continue;
        }
        let mut succ = Vec::new();
        for i in 0..w.len() {
            if w[i].1.is_empty() {
                let mut v = w.clone();
                v.remove(i);
                succ.push(v);
            }
            if i + 1 < w.len() && w[i].0 == w[i + 1].0 {
                let mut v = w.clone();
                let merged = w[i].1.symmetric_difference(&w[i + 1].1).cloned().collect();
                v.splice(i..i + 2, [(w[i].0, merged)]);
                succ.push(v);
            }
        }
        if succ.is_empty() {
            terminals.insert(w);
        }
        queue.extend(succ);
    }
    terminals
}

fn set(v: &[u8]) -> BTreeSet<u8> {
    v.iter().copied().collect()
}

fn key(s: &str) -> ConicBundleClassKey {
    ConicBundleClassKey::DP5 { id: s.into() }
}

fn g(k: ConicBundleClassKey, bits: &[usize]) -> FpLetter<ConicBundleClassKey, usize> {
    FpLetter {
        factor: k,
        bits: bits.iter().copied().collect(),
    }
}

#[test]
fn normalize_examples() {
    let (c, d) = (key("C"), key("D"));
    assert!(fp_normalize(vec![g(c.clone(), &[17]), g(c.clone(), &[17])]).is_identity());
    let w = fp_normalize(vec![g(c.clone(), &[17]), g(d.clone(), &[19])]);
    assert_eq!(w.word, vec![g(c.clone(), &[17]), g(d.clone(), &[19])]);
    let w = fp_normalize(vec![
        g(c.clone(), &[17]),
        g(c.clone(), &[19]),
        g(d.clone(), &[17]),
        g(d, &[17]),
    ]);
    assert_eq!(w.word, vec![g(c, &[17, 19])]);
}

#[test]
fn normalize_matches_exhaustive_rewriting_on_examples() {
    let raw: Raw = vec![
        (0, set(&[1])),
        (1, set(&[2])),
        (1, set(&[2])),
        (0, set(&[1, 3])),
        (2, set(&[])),
        (0, set(&[3])),
    ];
    let t = oracle_terminals(&raw);
    assert_eq!(t.len(), 1);
    assert!(t.contains(&vec![]));
    assert!(fp_normalize(letters(&raw)).is_identity());
}

fn refined_models() -> (MoriFiberSpaceModel, MoriFiberSpaceModel, FieldSpec) {
    let f2 = FieldSpec::prime(2);
    let quartic = PolynomialOverField::parse(&f2, "x^4+x+1").unwrap();
    let o4 = orbit_from_poly(&f2, &quartic, TemplateKind::Conic, None, false).unwrap();
    let quad = PolynomialOverField::parse(&f2, "x^2+x+1").unwrap();
    let o22 = orbit_from_poly(&f2, &quad, TemplateKind::Split, Some(&quad), false).unwrap();
    (MoriFiberSpaceModel::cb5(o4), MoriFiberSpaceModel::cb6(vec![o22]), f2)
}

fn deep_link(model: &MoriFiberSpaceModel, field: &FieldSpec, d: usize, tag: &str) -> SarkisovLink {
    let o = large_orbit(field, d, false).unwrap();
    let center = FiberCenter::Finite(o.min_poly.clone());
    SarkisovLink::new(
        LinkType::II,
        model.clone(),
        model.clone().labeled(tag),
        Some(o.clone().with_tag(format!("{tag}s"))),
        Some(o.with_tag(format!("{tag}t"))),
        Some(center),
    )
}

fn one_letter(l: SarkisovLink) -> GroupoidWord {
    GroupoidWord::from_letters(vec![Letter::link(l)]).unwrap()
}

#[test]
fn homo_eval_examples() {
    let q = FieldSpec::Rationals;
    let f = MoriFiberSpaceModel::hirzebruch(1);
    let w = one_letter(deep_link(&f, &q, 17, "a"));
    let img = homo_eval(&w, 16).unwrap();
    assert_eq!(img.word, vec![g(ConicBundleClassKey::Hirzebruch, &[17])]);
    let shallow = GroupoidWord::from_letters(vec![
        Letter::link(deep_link(&f, &q, 1, "b")),
        Letter::link(deep_link(&f.clone().labeled("b"), &q, 3, "c")),
    ])
    .unwrap();
    assert!(homo_eval(&shallow, 16).unwrap().is_identity());
    // the exponent is irrelevant
    let inv = GroupoidWord::from_letters(vec![Letter::inv(deep_link(&f, &q, 17, "a"))]).unwrap();
    assert_eq!(homo_eval(&inv, 16).unwrap(), img);
    // a lower threshold lets shallow links through
    assert_eq!(homo_eval(&shallow, 1).unwrap().len(), 1);
}

#[test]
fn homo_refined_examples() {
    let (cb5, cb6, f2) = refined_models();
    let w = one_letter(deep_link(&cb5, &f2, 17, "a"));
    let img = homo_refined_eval(&w, &f2).unwrap();
    let id = match cb_class_key(&cb5).unwrap() {
        ConicBundleClassKey::DP5 { id } => id,
        other => panic!("{other:?}"),
    };
    assert_eq!(img.word.len(), 1);
    assert_eq!(img.word[0].factor, RefinedFactor::J5 { class: id });
    assert_eq!(img.word[0].bits, BTreeSet::from([RefinedIndex::N(8)]));
    assert!(!img.has_auxiliary());

    let hirz = MoriFiberSpaceModel::hirzebruch(2);
    let w = one_letter(deep_link(&hirz, &f2, 16, "h"));
    let img = homo_refined_eval(&w, &f2).unwrap();
    assert_eq!(img.word[0].factor, RefinedFactor::I0);
    assert_eq!(img.word[0].bits, BTreeSet::from([RefinedIndex::Depth(16)]));

    let w = one_letter(deep_link(&cb6, &f2, 16, "e"));
    let img = homo_refined_eval(&w, &f2).unwrap();
    assert!(matches!(img.word[0].factor, RefinedFactor::J6 { .. }));
    assert!(img.has_auxiliary());

    assert!(homo_refined_eval(&GroupoidWord::empty(cb5.clone()), &f2).unwrap().is_identity());
    let q_word = one_letter(deep_link(&hirz, &FieldSpec::Rationals, 17, "q"));
    assert_eq!(homo_refined_eval(&q_word, &f2).unwrap_err().kind(), "FieldMismatch");

    let s = serde_json::to_string(&img).unwrap();
    assert!(s.contains("\"aux16\""));
    let back: cremona_kit::freeprod::RefinedElement = serde_json::from_str(&s).unwrap();
    assert_eq!(back, img);
}

#[test]
fn three_free_factors() {
    let (cb5, cb6, f2) = refined_models();
    let hirz = MoriFiberSpaceModel::hirzebruch(0);
    let imgs: Vec<FreeProductElement> = [&hirz, &cb5, &cb6]
        .iter()
        .enumerate()
        .map(|(i, m)| homo_eval(&one_letter(deep_link(m, &f2, 17, &format!("w{i}"))), 16).unwrap())
        .collect();
    for i in 0..3 {
        assert_eq!(imgs[i].len(), 1);
        for j in 0..3 {
            if i != j {
                assert_eq!(imgs[i].mul(&imgs[j]).len(), 2);
            }
        }
    }
}

#[test]
fn element_json_shape() {
    let w: FreeProductElement = fp_normalize(vec![g(ConicBundleClassKey::Hirzebruch, &[17, 19])]);
    let s = serde_json::to_string(&w).unwrap();
    assert_eq!(s, r#"{"word":[{"factor":{"family":"Hirzebruch"},"bits":[17,19]}]}"#);
    let back: FreeProductElement = serde_json::from_str(&s).unwrap();
    assert_eq!(back, w);
}

fn raw_strategy() -> impl Strategy<Value = Raw> {
    prop::collection::vec((0u8..3, prop::collection::btree_set(0u8..3, 0..3)), 0..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalize_is_the_unique_terminal(raw in raw_strategy()) {
        let t = oracle_terminals(&raw);
        prop_assert_eq!(t.len(), 1);
        let only = t.into_iter().next().unwrap();
        let got = fp_normalize(letters(&raw));
        prop_assert_eq!(&got.word, &letters(&only));
        prop_assert_eq!(fp_normalize(got.word.clone()), got.clone());
        for w in got.word.windows(2) {
            prop_assert!(w[0].factor != w[1].factor);
        }
    }

    #[test]
    fn group_laws(a in raw_strategy(), b in raw_strategy(), c in raw_strategy()) {
        let (a, b, c): (FpWord<u8, u8>, FpWord<u8, u8>, FpWord<u8, u8>) =
            (fp_normalize(letters(&a)), fp_normalize(letters(&b)), fp_normalize(letters(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
    }

    #[test]
    fn homo_eval_is_functorial(seed in 0u64..3000, cut1 in 0.0f64..1.0, cut2 in 0.0f64..1.0) {
        let w = fuzz_relator(seed, &FuzzConfig::default());
        let n = w.letters.len();
        let (mut i, mut j) = ((cut1 * n as f64) as usize, (cut2 * n as f64) as usize);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let part = |a: usize, b: usize| GroupoidWord {
            endpoints: [
                if a == 0 { w.endpoints[0].clone() } else { w.letters[a - 1].target().clone() },
                if b == 0 { w.endpoints[0].clone() } else { w.letters[b - 1].target().clone() },
            ],
            letters: w.letters[a..b].to_vec(),
        };
        let (w1, w2, w3) = (part(0, i), part(i, j), part(j, n));
        let h = |x: &GroupoidWord| homo_eval(x, 16).unwrap();
        prop_assert_eq!(h(&w1.then(&w2)), h(&w1).mul(&h(&w2)));
        prop_assert!(h(&w1).mul(&h(&w2)).mul(&h(&w3)).is_identity());
    }
}
