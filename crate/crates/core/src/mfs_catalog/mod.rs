//! Rational Mori fiber space models, Sarkisov links, link validity, conic bundle
//! classes and the ten-curve incidence on the quintic del Pezzo conic bundle.

mod classes;
mod incidence;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactfield::{poly, FieldError, PolynomialOverField};
use crate::galois_orbits::{GeneralPosition, OrbitError, PointOrbit};

pub use classes::{cb_class_key, ConicBundleClassKey};
pub use incidence::{dp5_incidence, IncidenceConfig, TenCurveIncidence};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MfsKind {
    P2,
    Hirzebruch { n: u32 },
    /// Blow-up of P² in a size-4 orbit in general position.
    CB5 { orbit: PointOrbit },
    /// Blow-up of P¹×P¹ (equivalently, two size-2 orbits of P²) in general position.
    CB6 { orbits: Vec<PointOrbit> },
    DelPezzo { degree: u8 },
    NonRationalCB,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoriFiberSpaceModel {
    #[serde(flatten)]
    pub kind: MfsKind,
    /// Distinguishes isomorphic models in words (e.g. intermediate surfaces).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model is not a rational conic bundle")]
    NonRational,
    #[error("conic bundle class could not be resolved: {0}")]
    UnresolvedClass(String),
}

impl From<FieldError> for CatalogError {
    fn from(e: FieldError) -> Self {
        CatalogError::Orbit(e.into())
    }
}

impl CatalogError {
    pub fn kind(&self) -> &'static str {
        match self {
            CatalogError::Orbit(e) => e.kind(),
            CatalogError::InvalidModel(_) => "InvalidModel",
            CatalogError::NonRational => "NonRational",
            CatalogError::UnresolvedClass(_) => "UnresolvedClass",
        }
    }
}

impl MoriFiberSpaceModel {
    pub fn new(kind: MfsKind) -> Self {
        MoriFiberSpaceModel { kind, label: None }
    }

    pub fn p2() -> Self {
        Self::new(MfsKind::P2)
    }

    pub fn hirzebruch(n: u32) -> Self {
        Self::new(MfsKind::Hirzebruch { n })
    }

    pub fn del_pezzo(degree: u8) -> Self {
        Self::new(MfsKind::DelPezzo { degree })
    }

    pub fn cb5(orbit: PointOrbit) -> Self {
        Self::new(MfsKind::CB5 { orbit })
    }

    pub fn cb6(orbits: Vec<PointOrbit>) -> Self {
        Self::new(MfsKind::CB6 { orbits })
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// K², None for the non-rational flag.
    pub fn k2(&self) -> Option<i32> {
        Some(match &self.kind {
            MfsKind::P2 => 9,
            MfsKind::Hirzebruch { .. } => 8,
            MfsKind::CB5 { .. } => 5,
            MfsKind::CB6 { .. } => 6,
            MfsKind::DelPezzo { degree } => *degree as i32,
            MfsKind::NonRationalCB => return None,
        })
    }

    pub fn base_dim(&self) -> u8 {
        match self.kind {
            MfsKind::P2 | MfsKind::DelPezzo { .. } => 0,
            _ => 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self.kind, MfsKind::NonRationalCB)
    }

    pub fn is_conic_bundle(&self) -> bool {
        self.base_dim() == 1
    }

    /// Identity of the model inside words.
    pub fn key(&self) -> String {
        let base = match &self.kind {
            MfsKind::P2 => "P2".to_string(),
            MfsKind::Hirzebruch { n } => format!("F{n}"),
            MfsKind::CB5 { orbit } => format!("CB5[{}]", orbit.key()),
            MfsKind::CB6 { orbits } => {
                let ks: Vec<String> = orbits.iter().map(|o| o.key()).collect();
                format!("CB6[{}]", ks.join(","))
            }
            MfsKind::DelPezzo { degree } => format!("DP{degree}"),
            MfsKind::NonRationalCB => "NRCB".to_string(),
        };
        match &self.label {
            Some(l) => format!("{base}@{l}"),
            None => base,
        }
    }

    /// Checks the structural requirements of the kind.
    pub fn validate(&self) -> Result<(), CatalogError> {
        match &self.kind {
            MfsKind::CB5 { orbit } => {
                if orbit.size != 4 {
                    return Err(CatalogError::InvalidModel("CB5 needs an orbit of size 4".into()));
                }
                if orbit.general_position != GeneralPosition::Yes {
                    return Err(CatalogError::InvalidModel("CB5 orbit is not in general position".into()));
                }
            }
            MfsKind::CB6 { orbits } => {
                let sizes: Vec<usize> = orbits.iter().map(|o| o.size).collect();
                if PointOrbit::total_points(orbits) != 4 || sizes.iter().any(|&s| s != 2 && s != 4) {
                    return Err(CatalogError::InvalidModel(
                        "CB6 needs two size-2 orbits (or one split pair)".into(),
                    ));
                }
                if orbits.len() == 1 && orbits[0].min_poly2.is_none() {
                    return Err(CatalogError::InvalidModel("CB6 single orbit must be a split pair".into()));
                }
                let gp = if orbits.len() == 1 {
                    orbits[0].general_position == GeneralPosition::Yes
                } else {
                    crate::galois_orbits::general_position_check(orbits)?
                        == crate::galois_orbits::PositionVerdict::Yes
                };
                if !gp {
                    return Err(CatalogError::InvalidModel("CB6 points are not in general position".into()));
                }
            }
            MfsKind::DelPezzo { degree } if !(1..=9).contains(degree) => {
                return Err(CatalogError::InvalidModel(format!("del Pezzo degree {degree}")));
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for MoriFiberSpaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfsInvariants {
    pub rational: bool,
    pub base_dim: u8,
    pub k2: Option<i32>,
    pub singular_fibers: Option<i32>,
    pub picard_rank: Option<u32>,
}

pub fn mfs_invariants(x: &MoriFiberSpaceModel) -> MfsInvariants {
    let k2 = x.k2();
    let base_dim = x.base_dim();
    MfsInvariants {
        rational: x.is_rational(),
        base_dim,
        k2,
        singular_fibers: k2.filter(|_| base_dim == 1).map(|k| 8 - k),
        picard_rank: k2.map(|_| if base_dim == 0 { 1 } else { 2 }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkType {
    I,
    II,
    III,
    IV,
}

/// Fiber of a conic bundle over P¹ containing the base points: the minimal polynomial
/// of their image on P¹, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiberCenter {
    Finite(PolynomialOverField),
    Infinity,
}

impl FiberCenter {
    pub fn degree(&self) -> usize {
        match self {
            FiberCenter::Finite(p) => p.degree().unwrap_or(0),
            FiberCenter::Infinity => 1,
        }
    }

    /// Canonical key: the monic polynomial, or `inf`.
    pub fn key(&self) -> String {
        match self {
            FiberCenter::Finite(p) => p.monic().to_string_in("t"),
            FiberCenter::Infinity => "inf".into(),
        }
    }

    /// No common fiber: coprime polynomials, or one finite and one at infinity.
    pub fn disjoint(&self, other: &FiberCenter) -> Result<bool, FieldError> {
        match (self, other) {
            (FiberCenter::Infinity, FiberCenter::Infinity) => Ok(false),
            (FiberCenter::Finite(_), FiberCenter::Infinity)
            | (FiberCenter::Infinity, FiberCenter::Finite(_)) => Ok(true),
            (FiberCenter::Finite(a), FiberCenter::Finite(b)) => {
                if a.field() != b.field() {
                    return Err(FieldError::FieldMismatch);
                }
                let field = a.field().clone();
                crate::with_field!(field, |k| {
                    let g = poly::gcd(&k, &a.typed(&k)?, &b.typed(&k)?);
                    Ok(g.len() == 1)
                })
            }
        }
    }
}

impl Serialize for FiberCenter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FiberCenter::Finite(p) => p.serialize(s),
            FiberCenter::Infinity => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for FiberCenter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        if v.as_str() == Some("infinity") {
            return Ok(FiberCenter::Infinity);
        }
        PolynomialOverField::deserialize(v)
            .map(FiberCenter::Finite)
            .map_err(serde::de::Error::custom)
    }
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SarkisovLink {
    #[serde(rename = "type")]
    pub link_type: LinkType,
    pub source: MoriFiberSpaceModel,
    pub target: MoriFiberSpaceModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_src: Option<PointOrbit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_tgt: Option<PointOrbit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_center: Option<FiberCenter>,
    pub depth: usize,
    /// Declared: no base point lies on a singular fiber.
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub avoids_singular_fibers: bool,
}

impl SarkisovLink {
    /// Link with depth taken from the base orbits.
    pub fn new(
        link_type: LinkType,
        source: MoriFiberSpaceModel,
        target: MoriFiberSpaceModel,
        orbit_src: Option<PointOrbit>,
        orbit_tgt: Option<PointOrbit>,
        fiber_center: Option<FiberCenter>,
    ) -> Self {
        let depth = orbit_src
            .iter()
            .chain(orbit_tgt.iter())
            .map(|o| o.size)
            .max()
            .unwrap_or(0);
        SarkisovLink {
            link_type,
            source,
            target,
            orbit_src,
            orbit_tgt,
            fiber_center,
            depth,
            avoids_singular_fibers: true,
        }
    }

    pub fn inverse(&self) -> SarkisovLink {
        SarkisovLink {
            link_type: match self.link_type {
                LinkType::I => LinkType::III,
                LinkType::III => LinkType::I,
                t => t,
            },
            source: self.target.clone(),
            target: self.source.clone(),
            orbit_src: self.orbit_tgt.clone(),
            orbit_tgt: self.orbit_src.clone(),
            fiber_center: self.fiber_center.clone(),
            depth: self.depth,
            avoids_singular_fibers: self.avoids_singular_fibers,
        }
    }

    /// Type II link between Mori conic bundles.
    pub fn is_type2_cb(&self) -> bool {
        self.link_type == LinkType::II
            && self.source.is_conic_bundle()
            && self.target.is_conic_bundle()
    }

    fn orbit_sizes(&self) -> (usize, usize) {
        (
            self.orbit_src.as_ref().map_or(0, |o| o.size),
            self.orbit_tgt.as_ref().map_or(0, |o| o.size),
        )
    }
}

/// Maximal base-orbit size over the links (declared depth when no orbit is attached).
pub fn galois_depth(links: &[SarkisovLink]) -> usize {
    links
        .iter()
        .map(|l| {
            if l.link_type == LinkType::IV {
                return 0;
            }
            let (a, b) = l.orbit_sizes();
            if l.orbit_src.is_none() && l.orbit_tgt.is_none() {
                l.depth
            } else {
                a.max(b)
            }
        })
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Verified,
    /// Only the orbit bounds and K² balance were checked (del Pezzo edges).
    NecessaryConditionsOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LinkVerdict {
    Ok { scope: Scope },
    Violation { rule: String },
}

impl LinkVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, LinkVerdict::Ok { .. })
    }
}

fn violation(rule: &str) -> LinkVerdict {
    LinkVerdict::Violation { rule: rule.into() }
}

/// Orbit bounds, endpoint dimensions, K² balance and the II:x:x pattern.
pub fn link_validate(l: &SarkisovLink) -> LinkVerdict {
    // a type III link is checked as its inverse type I link
    let l = &if l.link_type == LinkType::III { l.inverse() } else { l.clone() };
    let (a, b) = l.orbit_sizes();
    if l.orbit_src.is_some() || l.orbit_tgt.is_some() {
        let expect = if l.link_type == LinkType::IV { 0 } else { a.max(b) };
        if l.depth != expect {
            return violation("depth-mismatch");
        }
    }
    if !l.source.is_rational() || !l.target.is_rational() {
        return if l.link_type == LinkType::II && !l.source.is_rational() && !l.target.is_rational() {
            LinkVerdict::Ok {
                scope: Scope::NecessaryConditionsOnly,
            }
        } else {
            violation("nonrational-type")
        };
    }
    if l.source.validate().is_err() || l.target.validate().is_err() {
        return violation("invalid-model");
    }
    let (ks, kt) = (l.source.k2().unwrap(), l.target.k2().unwrap());
    let (ds, dt) = (l.source.base_dim(), l.target.base_dim());
    match l.link_type {
        LinkType::I | LinkType::III => {
            if ds != 0 || dt != 1 {
                return violation("I/III-endpoints");
            }
            // the blown-up orbit lies on the base-dimension-0 side; either slot may carry it
            if (a == 0) == (b == 0) {
                return violation("I/III-orbit-bound");
            }
            let r = a.max(b);
            if r > 8 {
                return violation("I/III-orbit-bound");
            }
            if kt != ks - r as i32 {
                return violation("K2-balance");
            }
            LinkVerdict::Ok {
                scope: Scope::Verified,
            }
        }
        LinkType::II if ds == 0 && dt == 0 => {
            if a == 0 || b == 0 || a > 8 || b > 8 {
                return violation("DP-orbit-bound");
            }
            if kt != ks - a as i32 + b as i32 {
                return violation("K2-balance");
            }
            LinkVerdict::Ok {
                scope: Scope::NecessaryConditionsOnly,
            }
        }
        LinkType::II if ds == 1 && dt == 1 => {
            if a == 0 || a != b {
                return violation("II-cb-equal");
            }
            if ks != kt {
                return violation("K2-balance");
            }
            if !l.avoids_singular_fibers {
                return violation("II-singular-fiber");
            }
            if let Some(c) = &l.fiber_center {
                if c.degree() != a {
                    return violation("fiber-center-degree");
                }
            }
            LinkVerdict::Ok {
                scope: Scope::Verified,
            }
        }
        LinkType::II => violation("mixed-base"),
        LinkType::IV => {
            let self_product = |x: &MoriFiberSpaceModel| matches!(x.kind, MfsKind::Hirzebruch { n: 0 });
            if !self_product(&l.source) || !self_product(&l.target) || a != 0 || b != 0 {
                return violation("IV-endpoints");
            }
            LinkVerdict::Ok {
                scope: Scope::Verified,
            }
        }
    }
}
