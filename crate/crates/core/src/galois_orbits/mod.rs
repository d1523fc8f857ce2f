//! Galois orbits of points in P²: construction from polynomials, position tests,
//! census over finite fields, PGL₃ classification and the matching-transform solver.

mod census;
mod matching;
pub(crate) mod points;
mod sym4;

use serde::{Deserialize, Serialize};

use crate::exactfield::{
    irreducible_check, poly, FieldError, FieldSpec, PolynomialOverField, Rationals, Verdict,
};

pub use census::{enumerate_point_orbits, pgl3_classify, ClassFilter, OrbitClass, MAX_ENUM_ORDER};
pub use matching::{apply_matrix, fingerprint, match_transform, PermutationActionFingerprint, Transform};
pub use sym4::{transitive_sym4_audit, Perm, Sym4Class, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Template {
    /// [1 : a : a²] over the roots a of min_poly.
    Conic,
    /// [1 : a : 0] over the roots of min_poly and [1 : 0 : b] over the roots of min_poly2.
    Split,
    /// [0 : 1 : r] over the roots of min_poly.
    Line,
    /// [c0(t) : c1(t) : c2(t)] over the roots t of min_poly.
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneralPosition {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointOrbit {
    pub field: FieldSpec,
    pub template: Template,
    pub min_poly: PolynomialOverField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_poly2: Option<PolynomialOverField>,
    /// Explicit coordinates as polynomials in a root t of min_poly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<[PolynomialOverField; 3]>,
    pub size: usize,
    pub general_position: GeneralPosition,
    /// Free-form identity for points that are not described by coordinates in P²
    /// (e.g. points on a Hirzebruch surface).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("orbits live over different fields")]
    IncompatibleFields,
    #[error("general coordinates over Q are not supported: {0}")]
    UncomputableOverQ(String),
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    #[error("points {0:?} are collinear")]
    CollinearTriple([usize; 3]),
    #[error("Galois permutation fingerprints do not agree under any labeling")]
    FingerprintMismatch,
    #[error("no labeling yields a matrix over the base field")]
    NoMatch,
    #[error("expected {expected} points, got {got}")]
    PointCount { expected: usize, got: usize },
}

impl OrbitError {
    pub fn kind(&self) -> &'static str {
        match self {
            OrbitError::Field(e) => e.kind(),
            OrbitError::NotIrreducible => "NotIrreducible",
            OrbitError::DegreeMismatch(_) => "DegreeMismatch",
            OrbitError::IncompatibleFields => "IncompatibleFields",
            OrbitError::UncomputableOverQ(_) => "UncomputableOverQ",
            OrbitError::ScaleExceeded(_) => "ScaleExceeded",
            OrbitError::CollinearTriple(_) => "CollinearTriple",
            OrbitError::FingerprintMismatch => "FingerprintMismatch",
            OrbitError::NoMatch => "NoMatch",
            OrbitError::PointCount { .. } => "PointCount",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateKind {
    Conic,
    Split,
    Line,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum PositionVerdict {
    Yes,
    /// Indices into the concatenated point list of the input orbits.
    No { triple: [usize; 3] },
}

impl PointOrbit {
    /// Canonical identity: size, template, minimal polynomial(s), coordinates and tag.
    pub fn key(&self) -> String {
        let t = match self.template {
            Template::Conic => "conic",
            Template::Split => "split",
            Template::Line => "line",
            Template::Explicit => "explicit",
        };
        let mut s = format!("{t}/{}/{}", self.size, self.min_poly.to_string_in("t"));
        if let Some(g) = &self.min_poly2 {
            s += &format!("/{}", g.to_string_in("t"));
        }
        if let Some(c) = &self.coords {
            s += &format!(
                "/[{}:{}:{}]",
                c[0].to_string_in("t"),
                c[1].to_string_in("t"),
                c[2].to_string_in("t")
            );
        }
        if let Some(tag) = &self.tag {
            s += &format!("#{tag}");
        }
        s
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    /// A single k-rational point.
    pub fn rational_point(field: &FieldSpec, coords: [&str; 3]) -> Result<Self, OrbitError> {
        let x = PolynomialOverField::parse(field, "x")?;
        let cs = [
            PolynomialOverField::parse(field, coords[0])?,
            PolynomialOverField::parse(field, coords[1])?,
            PolynomialOverField::parse(field, coords[2])?,
        ];
        if cs.iter().any(|c| c.degree().unwrap_or(0) > 0) {
            return Err(OrbitError::DegreeMismatch("rational point coordinates must be constants".into()));
        }
        PointOrbit::explicit(field, x, cs)
    }

    /// Orbit of [c0(t) : c1(t) : c2(t)] over the roots t of an irreducible `min_poly`.
    pub fn explicit(
        field: &FieldSpec,
        min_poly: PolynomialOverField,
        coords: [PolynomialOverField; 3],
    ) -> Result<Self, OrbitError> {
        if min_poly.field() != field || coords.iter().any(|c| c.field() != field) {
            return Err(OrbitError::IncompatibleFields);
        }
        let d = min_poly.degree().unwrap_or(0);
        if d == 0 {
            return Err(FieldError::ConstantPolynomial.into());
        }
        if irreducible_check(&min_poly)?.verdict != Verdict::Irreducible {
            return Err(OrbitError::NotIrreducible);
        }
        let min_poly = min_poly.monic();
        let coords = reduce_coords(&min_poly, coords)?;
        if coords.iter().all(|c| c.is_zero()) {
            return Err(OrbitError::DegreeMismatch("all coordinates vanish".into()));
        }
        let mut o = PointOrbit {
            field: field.clone(),
            template: Template::Explicit,
            min_poly,
            min_poly2: None,
            coords: Some(coords),
            size: d,
            general_position: GeneralPosition::Unknown,
            tag: None,
        };
        if field.is_finite() {
            o.size = points::point_count(&o)?;
        } else if d > 1 {
            return Ok(o);
        }
        o.general_position = position_flag(std::slice::from_ref(&o))?;
        Ok(o)
    }

    /// Total point count of the union of `orbits`.
    pub fn total_points(orbits: &[PointOrbit]) -> usize {
        orbits.iter().map(|o| o.size).sum()
    }
}

fn reduce_coords(
    m: &PolynomialOverField,
    coords: [PolynomialOverField; 3],
) -> Result<[PolynomialOverField; 3], OrbitError> {
    let field = m.field().clone();
    let out: Result<Vec<PolynomialOverField>, FieldError> = (|| {
        crate::with_field!(field, |k| {
            let mm = m.typed(&k)?;
            let rs: Vec<_> = coords
                .iter()
                .map(|c| Ok(poly::rem(&k, &c.typed(&k)?, &mm)))
                .collect::<Result<_, FieldError>>()?;
            // scale so the first nonzero coordinate is 1 in k[t]/(m)
            let scale = rs.iter().find(|c| !c.is_empty()).map(|c| {
                let (_, s, _) = poly::xgcd(&k, c, &mm);
                s
            });
            Ok(rs
                .iter()
                .map(|c| {
                    let c = match &scale {
                        Some(s) => poly::rem(&k, &poly::mul(&k, c, s), &mm),
                        None => c.clone(),
                    };
                    PolynomialOverField::from_typed(&k, c)
                })
                .collect())
        })
    })();
    let v = out?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone()])
}

fn position_flag(orbits: &[PointOrbit]) -> Result<GeneralPosition, OrbitError> {
    if PointOrbit::total_points(orbits) < 3 {
        return Ok(GeneralPosition::Yes);
    }
    Ok(match general_position_check(orbits)? {
        PositionVerdict::Yes => GeneralPosition::Yes,
        PositionVerdict::No { .. } => GeneralPosition::No,
    })
}

/// Builds an orbit from an irreducible polynomial and a template. `f2` is the second
/// quadratic of a split pair. Unverified irreducibility over Q is accepted only with
/// `allow_unverified`.
pub fn orbit_from_poly(
    field: &FieldSpec,
    f: &PolynomialOverField,
    template: TemplateKind,
    f2: Option<&PolynomialOverField>,
    allow_unverified: bool,
) -> Result<PointOrbit, OrbitError> {
    let check = |g: &PolynomialOverField| -> Result<PolynomialOverField, OrbitError> {
        if g.field() != field {
            return Err(OrbitError::IncompatibleFields);
        }
        match irreducible_check(g)?.verdict {
            Verdict::Irreducible => Ok(g.monic()),
            Verdict::Unverified if allow_unverified => Ok(g.monic()),
            _ => Err(OrbitError::NotIrreducible),
        }
    };
    let f = check(f)?;
    let d = f.degree().unwrap();
    let (tmpl, g, size) = match template {
        TemplateKind::Conic | TemplateKind::Line => {
            if f2.is_some() {
                return Err(OrbitError::DegreeMismatch(
                    "a second polynomial is only used by the split template".into(),
                ));
            }
            let t = if template == TemplateKind::Conic {
                Template::Conic
            } else {
                Template::Line
            };
            (t, None, d)
        }
        TemplateKind::Split => {
            let g = f2.ok_or_else(|| {
                OrbitError::DegreeMismatch("split template needs two quadratics".into())
            })?;
            let g = check(g)?;
            if d != 2 || g.degree() != Some(2) {
                return Err(OrbitError::DegreeMismatch(
                    "split template needs two degree-2 polynomials".into(),
                ));
            }
            (Template::Split, Some(g), 4)
        }
    };
    let mut o = PointOrbit {
        field: field.clone(),
        template: tmpl,
        min_poly: f,
        min_poly2: g,
        coords: None,
        size,
        general_position: GeneralPosition::Unknown,
        tag: None,
    };
    o.general_position = position_flag(std::slice::from_ref(&o))?;
    Ok(o)
}

/// Exhaustive no-three-collinear test on the union of the orbits.
pub fn general_position_check(orbits: &[PointOrbit]) -> Result<PositionVerdict, OrbitError> {
    let n = PointOrbit::total_points(orbits);
    if n < 3 {
        return Err(OrbitError::PointCount { expected: 3, got: n });
    }
    let field = &orbits[0].field;
    if orbits.iter().any(|o| &o.field != field) {
        return Err(OrbitError::IncompatibleFields);
    }
    if field.is_finite() {
        return points::finite_position_check(orbits);
    }
    rational_position_check(orbits)
}

fn rational_position_check(orbits: &[PointOrbit]) -> Result<PositionVerdict, OrbitError> {
    if orbits.iter().all(|o| o.template == Template::Explicit && o.size == 1) {
        let k = Rationals;
        let pts: Vec<_> = orbits
            .iter()
            .map(|o| points::rational_coords(o))
            .collect::<Result<_, _>>()?;
        return Ok(points::first_collinear(&k, &pts)
            .map_or(PositionVerdict::Yes, |triple| PositionVerdict::No { triple }));
    }
    match orbits {
        // a line meets an irreducible conic in at most two points
        [o] if o.template == Template::Conic => Ok(PositionVerdict::Yes),
        // [1:a1:0], [1:a2:0], [1:0:b] has determinant b(a2 - a1), nonzero for
        // irreducible quadratics (roots distinct and nonzero)
        [o] if o.template == Template::Split => Ok(PositionVerdict::Yes),
        [o] if o.template == Template::Line => Ok(PositionVerdict::No { triple: [0, 1, 2] }),
        _ => Err(OrbitError::UncomputableOverQ(
            "only a single conic, split or line orbit, or rational points".into(),
        )),
    }
}

/// An orbit of size at least `delta`. With `odd`, the size is the least odd integer ≥ delta.
pub fn large_orbit(field: &FieldSpec, delta: usize, odd: bool) -> Result<PointOrbit, OrbitError> {
    let mut d = delta.max(1);
    if odd && d % 2 == 0 {
        d += 1;
    }
    if d == 1 {
        return PointOrbit::rational_point(field, ["1", "0", "0"]);
    }
    let f = match field {
        FieldSpec::Rationals => PolynomialOverField::parse(field, &format!("x^{d}-2"))?,
        _ => crate::with_finite_field!(field, unreachable!(), |k| {
            PolynomialOverField::from_typed(&k, crate::exactfield::factor::first_irreducible(&k, d))
        }),
    };
    orbit_from_poly(field, &f, TemplateKind::Conic, None, false)
}
