//! The map [x₀:x₁; y₀:y₁] ↦ [x₀y₁ᵈ : x₁p(y₀,y₁); y₀:y₁] of P¹×P¹ as a word of links.

use serde::{Deserialize, Serialize};

use super::{require_irreducible, ConstructionError};
use crate::exactfield::{factor, poly, ExtensionField, Field, FiniteField, PolynomialOverField, SpecField};
use crate::galois_orbits::{orbit_from_poly, PointOrbit, TemplateKind};
use crate::mfs_catalog::{link_validate, FiberCenter, LinkType, LinkVerdict, MfsKind, MoriFiberSpaceModel, SarkisovLink};
use crate::rewriting::{GroupoidWord, Letter};

/// Largest degree for which the base locus is checked on coordinates.
const COORDINATE_CHECK_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeJonquieresMap {
    /// p(y) with p(y₀, y₁) = y₁ᵈ p(y₀/y₁).
    pub p: PolynomialOverField,
}

impl DeJonquieresMap {
    pub fn new(p: PolynomialOverField) -> Self {
        DeJonquieresMap { p }
    }

    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePointRecord {
    pub letter: usize,
    pub count: usize,
    pub multiplicity: u32,
    pub location: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateCheck {
    pub host_degree: usize,
    /// Distinct points [0:1; t:1] with p(t) = 0 where both components vanish.
    pub proper_points: usize,
    pub frobenius_transitive: bool,
    /// Multiplicities along the chain of infinitely near points over ([1:0],[1:0]).
    pub chain: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeJonquieresAudit {
    pub bidegree: [usize; 2],
    pub self_intersection: usize,
    pub base_points: Vec<BasePointRecord>,
    pub total_base_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<CoordinateCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub word: GroupoidWord,
    pub audit: DeJonquieresAudit,
}

fn validated(l: SarkisovLink) -> Result<SarkisovLink, ConstructionError> {
    match link_validate(&l) {
        LinkVerdict::Ok { .. } => Ok(l),
        LinkVerdict::Violation { rule } => Err(ConstructionError::InvalidLink(rule)),
    }
}

fn point(field: &crate::exactfield::FieldSpec, tag: String) -> Result<PointOrbit, ConstructionError> {
    Ok(PointOrbit::rational_point(field, ["1", "0", "0"])?.with_tag(tag))
}

/// φ₀: F₀ ⇢ F_d of depth d over the fiber p = 0, then φ_d, …, φ₁: F_n ⇢ F_{n−1} of depth 1
/// over the fiber at infinity.
pub fn dejonquieres_decompose(m: &DeJonquieresMap) -> Result<Decomposition, ConstructionError> {
    let field = m.p.field().clone();
    require_irreducible(&m.p)?;
    let d = m.degree();
    let orbit = orbit_from_poly(&field, &m.p, TemplateKind::Line, None, false)?;
    let center = FiberCenter::Finite(m.p.monic());
    let mut letters = Vec::with_capacity(d + 1);
    letters.push(validated(SarkisovLink::new(
        LinkType::II,
        MoriFiberSpaceModel::hirzebruch(0),
        MoriFiberSpaceModel::hirzebruch(d as u32),
        Some(orbit.clone().with_tag("jq0s")),
        Some(orbit.with_tag("jq0t")),
        Some(center),
    ))?);
    for n in (1..=d).rev() {
        letters.push(validated(SarkisovLink::new(
            LinkType::II,
            MoriFiberSpaceModel::hirzebruch(n as u32),
            MoriFiberSpaceModel::hirzebruch(n as u32 - 1),
            Some(point(&field, format!("jq{n}s"))?),
            Some(point(&field, format!("jq{n}t"))?),
            Some(FiberCenter::Infinity),
        ))?);
    }
    let word = GroupoidWord::from_letters(letters.into_iter().map(Letter::link).collect())
        .expect("at least one letter");
    let mut base_points = vec![BasePointRecord {
        letter: 0,
        count: d,
        multiplicity: 1,
        location: "[0:1; t:1], p(t) = 0".into(),
    }];
    base_points.extend((1..=d).map(|i| BasePointRecord {
        letter: i,
        count: 1,
        multiplicity: 1,
        location: if i == 1 {
            "([1:0],[1:0])".into()
        } else {
            format!("infinitely near ([1:0],[1:0]) on x1 = 0, order {}", i - 1)
        },
    }));
    let total = base_points.iter().map(|b| b.count * b.multiplicity as usize).sum();
    let coordinates = if field.is_finite() && d <= COORDINATE_CHECK_MAX {
        Some(crate::with_finite_field!(field, unreachable!(), |k| coordinate_check(&k, &m.p)?))
    } else {
        None
    };
    Ok(Decomposition {
        word,
        audit: DeJonquieresAudit {
            bidegree: [1, d],
            self_intersection: 2 * d,
            base_points,
            total_base_points: total,
            coordinates,
        },
    })
}

fn coordinate_check<K: FiniteField + SpecField>(
    k: &K,
    p: &PolynomialOverField,
) -> Result<CoordinateCheck, ConstructionError> {
    let pt = p.typed(k)?;
    let d = pt.len() - 1;
    let h = ExtensionField::new(k.clone(), pt.clone());
    let ph: Vec<_> = pt.iter().map(|c| h.embed(c)).collect();
    let roots = factor::roots(&h, &ph);
    // both components at ([0:1],[t:1]): x₀y₁ᵈ = 0 and x₁p(t) = 0
    let vanish = roots.iter().filter(|t| h.is_zero(&poly::eval(&h, &ph, t))).count();
    let g = h.generator().unwrap_or_else(|| h.one());
    let mut x = h.frobenius_pow(&g, k.degree());
    let mut cycle = 1;
    while x != g {
        x = h.frobenius_pow(&x, k.degree());
        cycle += 1;
    }
    // local ideal at ([1:0],[1:0]) in x = x₁/x₀, u = y₁/y₀: (uᵈ, x·p̃(u)), p̃(u) = p(1, u)
    let unit = !k.is_zero(&pt[d]);
    let mut chain = Vec::new();
    let mut e = d;
    while e > 0 && unit {
        // (uᵉ, x·p̃): orders e and 1 at the origin; blowing up x = u·x′ and dividing by u
        // leaves (uᵉ⁻¹, x′·p̃) at the next point on the section
        chain.push(e.min(1) as u32);
        e -= 1;
    }
    Ok(CoordinateCheck {
        host_degree: d,
        proper_points: vanish,
        frobenius_transitive: cycle == d,
        chain,
    })
}

fn is_p1xp1(x: &MoriFiberSpaceModel) -> bool {
    matches!(x.kind, MfsKind::Hirzebruch { n: 0 })
}

/// α⁻¹·w·α with α: P² ⇢ F₁ ⇢ F₀ the blow-up of a rational point followed by an
/// elementary link at the fiber at infinity.
pub fn conjugate_to_p2(w: &GroupoidWord) -> Result<GroupoidWord, ConstructionError> {
    for e in &w.endpoints {
        if !is_p1xp1(e) {
            return Err(ConstructionError::EndpointMismatch(e.key()));
        }
    }
    let field = w
        .letters
        .iter()
        .filter_map(|l| l.as_link())
        .flat_map(|l| l.orbit_src.iter().chain(l.orbit_tgt.iter()))
        .map(|o| o.field.clone())
        .next()
        .unwrap_or(crate::exactfield::FieldSpec::Rationals);
    let f1 = MoriFiberSpaceModel::hirzebruch(1);
    let blow = validated(SarkisovLink::new(
        LinkType::I,
        MoriFiberSpaceModel::p2(),
        f1.clone(),
        Some(point(&field, "alpha1".into())?),
        None,
        None,
    ))?;
    let elem = |to: &MoriFiberSpaceModel| -> Result<SarkisovLink, ConstructionError> {
        validated(SarkisovLink::new(
            LinkType::II,
            f1.clone(),
            to.clone(),
            Some(point(&field, "alpha2s".into())?),
            Some(point(&field, "alpha2t".into())?),
            Some(FiberCenter::Infinity),
        ))
    };
    let mut letters = vec![Letter::link(blow.clone()), Letter::link(elem(&w.endpoints[0])?)];
    letters.extend(w.letters.iter().cloned());
    letters.push(Letter::inv(elem(&w.endpoints[1])?));
    letters.push(Letter::inv(blow));
    Ok(GroupoidWord::from_letters(letters).expect("at least four letters"))
}
