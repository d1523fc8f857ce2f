//! Type II links of odd depth 2n+1 between conic bundles on del Pezzo surfaces of degree 5
//! and 6. The base points are q_i = [0:1:r_i] for the roots r_i of an irreducible r of
//! degree 2n+1; the fiber through q_i is the conic C_i of the pencil through four points.

use serde::{Deserialize, Serialize};

use super::{require_irreducible, ConstructionError};
use crate::exactfield::linalg::{nullspace, rank};
use crate::exactfield::{
    factor, poly, ExtensionField, Field, FieldSpec, FiniteField, Poly, PolynomialOverField, SpecField,
};
use crate::galois_orbits::points::first_collinear;
use crate::galois_orbits::{orbit_from_poly, GeneralPosition, PointOrbit, Template, TemplateKind};
use crate::mfs_catalog::{link_validate, FiberCenter, LinkType, LinkVerdict, MoriFiberSpaceModel, SarkisovLink};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    /// Every conic solved on coordinates in a splitting tower.
    Coordinates,
    /// Distinctness from the degree of the pencil parameter, collinearity by orbit sizes.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicAudit {
    pub mode: Certification,
    /// Number of distinct conics C_i.
    pub conics: usize,
    /// Rank of the 5×6 system, the same for every q_i.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_rank: Option<usize>,
    pub irreducible: bool,
    pub collinear_free: bool,
    /// Degree over k of the tower used for coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_degree: Option<usize>,
    /// Minimal polynomial of the pencil parameters of the C_i.
    pub center: PolynomialOverField,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigLink {
    pub link: SarkisovLink,
    pub audit: ConicAudit,
}

/// The four base points: roots of f on y² = xz, or [1:a:0], [1:0:b] for roots of g, h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PencilFamily {
    Conic(PolynomialOverField),
    Split(PolynomialOverField, PolynomialOverField),
}

impl PencilFamily {
    fn field(&self) -> &FieldSpec {
        match self {
            PencilFamily::Conic(f) | PencilFamily::Split(f, _) => f.field(),
        }
    }
}

fn coeff<F: Field>(k: &F, p: &[F::Elem], i: usize) -> F::Elem {
    p.get(i).cloned().unwrap_or_else(|| k.zero())
}

/// Basis B₀, B₁ of the pencil in the monomials x², y², z², xy, xz, yz. Every conic of the
/// pencil other than B₁ is B₀ + t·B₁.
pub fn pencil_basis<F: SpecField>(k: &F, fam: &PencilFamily) -> Result<[Vec<F::Elem>; 2], ConstructionError> {
    let (z, o) = (k.zero(), k.one());
    match fam {
        PencilFamily::Conic(f) => {
            let f = poly::monic(k, &f.typed(k)?);
            let c = |i| coeff(k, &f, i);
            Ok([
                vec![c(0), z.clone(), o.clone(), c(1), c(2), c(3)],
                vec![z.clone(), o, z.clone(), z.clone(), k.neg(&k.one()), z],
            ])
        }
        PencilFamily::Split(g, h) => {
            let g = poly::monic(k, &g.typed(k)?);
            let h = poly::monic(k, &h.typed(k)?);
            let ratio = k
                .div(&coeff(k, &g, 0), &coeff(k, &h, 0))
                .ok_or_else(|| ConstructionError::NotIrreducible)?;
            Ok([
                vec![
                    coeff(k, &g, 0),
                    o.clone(),
                    ratio.clone(),
                    coeff(k, &g, 1),
                    k.mul(&ratio, &coeff(k, &h, 1)),
                    z.clone(),
                ],
                vec![z.clone(), z.clone(), z.clone(), z.clone(), z, o],
            ])
        }
    }
}

/// t(s) mod r with B₀ + t(s)·B₁ the conic through [0:1:s].
pub fn pencil_parameter<F: SpecField>(
    k: &F,
    fam: &PencilFamily,
    r: &[F::Elem],
) -> Result<Poly<F>, ConstructionError> {
    let s = poly::x(k);
    let t = match fam {
        // t + s² + c₃s = 0
        PencilFamily::Conic(f) => {
            let c3 = coeff(k, &poly::monic(k, &f.typed(k)?), 3);
            poly::neg(k, &poly::add(k, &poly::mul(k, &s, &s), &poly::scale(k, &s, &c3)))
        }
        // 1 + (g₀/h₀)s² + t·s = 0
        PencilFamily::Split(g, h) => {
            let g = poly::monic(k, &g.typed(k)?);
            let h = poly::monic(k, &h.typed(k)?);
            let ratio = k.div(&coeff(k, &g, 0), &coeff(k, &h, 0)).ok_or(ConstructionError::NotIrreducible)?;
            let (gcd, inv_s, _) = poly::xgcd(k, &s, r);
            if gcd.len() != 1 {
                return Err(ConstructionError::NotGeneralPosition("q = [0:1:0] lies on z = 0".into()));
            }
            let inv_s = poly::scale(k, &inv_s, &k.inv(&gcd[0]).unwrap());
            let sq = poly::scale(k, &poly::mul(k, &s, &s), &ratio);
            poly::neg(k, &poly::add(k, &inv_s, &sq))
        }
    };
    Ok(poly::rem(k, &t, r))
}

/// Minimal polynomial of t in k[s]/(r), from the first linear relation among its powers.
fn min_poly_in_quotient<F: Field>(k: &F, r: &[F::Elem], t: &[F::Elem]) -> Poly<F> {
    let n = r.len() - 1;
    let pad = |p: &[F::Elem]| {
        let mut v = p.to_vec();
        v.resize(n, k.zero());
        v
    };
    let mut powers = vec![pad(&[k.one()])];
    loop {
        let next = poly::rem(k, &poly::mul(k, powers.last().unwrap(), t), r);
        powers.push(pad(&next));
        let m: Vec<Vec<F::Elem>> = (0..n)
            .map(|i| powers.iter().map(|v| v[i].clone()).collect())
            .collect();
        if let Some(rel) = nullspace(k, &m).into_iter().next() {
            return poly::monic(k, &rel);
        }
    }
}

fn compose<F: Field>(k: &F, f: &[F::Elem], g: &[F::Elem]) -> Poly<F> {
    f.iter()
        .rev()
        .fold(Vec::new(), |acc, c| poly::add(k, &poly::mul(k, &acc, g), &[c.clone()]))
}

/// Collinearity of some q_i with two base points, decided without coordinates.
/// Conic family: q is on the line through [1:a:a²], [1:b:b²] iff s = a + b.
/// Split family: q is on a line through [1:a:0], [1:0:b] iff s·a + b = 0.
fn symbolic_collinear<F: SpecField>(k: &F, fam: &PencilFamily, r: &[F::Elem]) -> Result<bool, ConstructionError> {
    let d = r.len() - 1;
    let s = || k.neg(&k.div(&r[0], &r[1]).unwrap());
    match fam {
        PencilFamily::Conic(f) => match d {
            // a + b has an orbit of size dividing 24 (the Galois group of f acts on pairs)
            1 => {
                let f = f.typed(k)?;
                let shifted = compose(k, &f, &[s(), k.neg(&k.one())]);
                Ok(poly::gcd(k, &f, &shifted).len() > 1)
            }
            3 => Err(ConstructionError::Unsupported(
                "collinearity for degree 3 over an infinite field".into(),
            )),
            _ => Ok(false),
        },
        // −b/a lies in the compositum of two quadratic fields
        PencilFamily::Split(g, h) => match d {
            1 => {
                let s = s();
                if k.is_zero(&s) {
                    return Ok(true);
                }
                let g = g.typed(k)?;
                let hs = compose(k, &h.typed(k)?, &[k.zero(), k.neg(&s)]);
                Ok(poly::gcd(k, &g, &hs).len() > 1)
            }
            _ => Ok(false),
        },
    }
}

fn monomials<F: Field>(k: &F, p: &[F::Elem; 3]) -> Vec<F::Elem> {
    let [x, y, z] = p;
    vec![
        k.mul(x, x),
        k.mul(y, y),
        k.mul(z, z),
        k.mul(x, y),
        k.mul(x, z),
        k.mul(y, z),
    ]
}

/// 4abc + def − af² − be² − cd² for ax² + by² + cz² + dxy + exz + fyz; zero iff the conic
/// is singular, in every characteristic.
fn half_discriminant<F: Field>(k: &F, q: &[F::Elem]) -> F::Elem {
    let m = |a: &F::Elem, b: &F::Elem, c: &F::Elem| k.mul(&k.mul(a, b), c);
    let [a, b, c, d, e, f] = [&q[0], &q[1], &q[2], &q[3], &q[4], &q[5]];
    let mut v = k.mul(&k.from_i64(4), &m(a, b, c));
    v = k.add(&v, &m(d, e, f));
    v = k.sub(&v, &m(a, f, f));
    v = k.sub(&v, &m(b, e, e));
    k.sub(&v, &m(c, d, d))
}

fn normalized<F: Field>(k: &F, v: &[F::Elem]) -> Vec<F::Elem> {
    match v.iter().find(|c| !k.is_zero(c)).and_then(|c| k.inv(c)) {
        Some(s) => v.iter().map(|c| k.mul(c, &s)).collect(),
        None => v.to_vec(),
    }
}

struct Coordinates<K: FiniteField> {
    conics: usize,
    rank: usize,
    center: Poly<K>,
    host_degree: usize,
}

/// Tower k ⊂ k_B = k[u]/(m) ⊂ L = k_B[s]/(r). The four points live in k_B; q₀ = [0:1:s]
/// and q_j is its j-th Frobenius conjugate.
fn coordinates<K: FiniteField + SpecField>(
    k: &K,
    fam: &PencilFamily,
    r: &PolynomialOverField,
) -> Result<Coordinates<K>, ConstructionError> {
    let modulus = match fam {
        PencilFamily::Conic(f) | PencilFamily::Split(f, _) => f.typed(k)?,
    };
    let kb = ExtensionField::new(k.clone(), modulus);
    let up = |p: &[K::Elem]| -> Vec<Vec<K::Elem>> { p.iter().map(|c| kb.embed(c)).collect() };
    let (one, zero) = (kb.one(), kb.zero());
    let base: Vec<[Vec<K::Elem>; 3]> = match fam {
        PencilFamily::Conic(f) => factor::roots(&kb, &up(&f.typed(k)?))
            .into_iter()
            .map(|u| [one.clone(), u.clone(), kb.mul(&u, &u)])
            .collect(),
        PencilFamily::Split(g, h) => {
            let mut v: Vec<_> = factor::roots(&kb, &up(&g.typed(k)?))
                .into_iter()
                .map(|a| [one.clone(), a, zero.clone()])
                .collect();
            v.extend(
                factor::roots(&kb, &up(&h.typed(k)?))
                    .into_iter()
                    .map(|b| [one.clone(), zero.clone(), b]),
            );
            v
        }
    };
    if base.len() != 4 {
        return Err(ConstructionError::NotGeneralPosition(format!(
            "expected four base points, found {}",
            base.len()
        )));
    }
    let rt = r.typed(k)?;
    let rb = up(&rt);
    if !factor::is_irreducible(&kb, &rb) {
        return Err(ConstructionError::Unsupported(
            "r does not stay irreducible over the field of the base points".into(),
        ));
    }
    let l = ExtensionField::new(kb.clone(), rb);
    let lift = |c: &Vec<K::Elem>| l.embed(c);
    let base: Vec<[_; 3]> = base.iter().map(|p| std::array::from_fn(|i| lift(&p[i]))).collect();
    let basis = pencil_basis(k, fam)?;
    let basis: Vec<Vec<_>> = basis
        .iter()
        .map(|b| b.iter().map(|c| l.embed(&kb.embed(c))).collect())
        .collect();
    let deg = rt.len() - 1;
    let mut s = l.generator().expect("extension has a generator");
    let mut conics = Vec::with_capacity(deg);
    let mut params = Vec::with_capacity(deg);
    let mut sys_rank = 0;
    for j in 0..deg {
        if j > 0 {
            s = l.frobenius_pow(&s, k.degree());
        }
        let q = [l.zero(), l.one(), s.clone()];
        let mut pts = base.clone();
        pts.push(q);
        if let Some(t) = first_collinear(&l, &pts) {
            return Err(ConstructionError::NotGeneralPosition(format!(
                "q_{j} is collinear with two base points (triple {t:?})"
            )));
        }
        let rows: Vec<Vec<_>> = pts.iter().map(|p| monomials(&l, p)).collect();
        sys_rank = rank(&l, &rows);
        let ns = nullspace(&l, &rows);
        if sys_rank != 5 || ns.len() != 1 {
            return Err(ConstructionError::NotGeneralPosition(format!(
                "the conic through the base points and q_{j} is not unique"
            )));
        }
        let c = normalized(&l, &ns[0]);
        if l.is_zero(&half_discriminant(&l, &c)) {
            return Err(ConstructionError::NotGeneralPosition(format!("the conic through q_{j} is singular")));
        }
        // c ∝ B₀ + t·B₁
        let m: Vec<Vec<_>> = (0..6)
            .map(|i| vec![basis[0][i].clone(), basis[1][i].clone(), c[i].clone()])
            .collect();
        let rel = nullspace(&l, &m);
        let t = match rel.as_slice() {
            [v] if !l.is_zero(&v[0]) => l.div(&v[1], &v[0]).unwrap(),
            _ => {
                return Err(ConstructionError::NotGeneralPosition(format!(
                    "the conic through q_{j} is not in the pencil"
                )))
            }
        };
        conics.push(c);
        params.push(t);
    }
    let mut distinct = conics.clone();
    distinct.sort();
    distinct.dedup();
    let center_l = params.iter().fold(vec![l.one()], |acc, t| {
        poly::mul(&l, &acc, &[l.neg(t), l.one()])
    });
    let center: Option<Poly<K>> = center_l
        .iter()
        .map(|c| l.project(c).and_then(|b| kb.project(&b)))
        .collect();
    let center = center.ok_or_else(|| {
        ConstructionError::Unsupported("pencil parameters are not Galois stable".into())
    })?;
    Ok(Coordinates {
        conics: distinct.len(),
        rank: sys_rank,
        center,
        host_degree: kb.rel_degree() * deg,
    })
}

fn symbolic<F: SpecField>(
    k: &F,
    fam: &PencilFamily,
    r: &PolynomialOverField,
) -> Result<(PolynomialOverField, bool), ConstructionError> {
    let rt = poly::monic(k, &r.typed(k)?);
    let collinear = symbolic_collinear(k, fam, &rt)?;
    let t = pencil_parameter(k, fam, &rt)?;
    let mp = min_poly_in_quotient(k, &rt, &t);
    Ok((PolynomialOverField::from_typed(k, mp), collinear))
}

fn check_r(r: &PolynomialOverField, field: &FieldSpec) -> Result<usize, ConstructionError> {
    if r.field() != field {
        return Err(crate::galois_orbits::OrbitError::IncompatibleFields.into());
    }
    let d = r.degree().unwrap_or(0);
    if d % 2 == 0 {
        return Err(ConstructionError::EvenDegree(d));
    }
    require_irreducible(r)?;
    Ok(d)
}

fn build(
    fam: PencilFamily,
    source: MoriFiberSpaceModel,
    r: &PolynomialOverField,
) -> Result<BigLink, ConstructionError> {
    let field = fam.field().clone();
    let d = check_r(r, &field)?;
    let audit = if field.is_finite() {
        let c = crate::with_finite_field!(field, unreachable!(), |k| {
            let c = coordinates(&k, &fam, r)?;
            (c.conics, c.rank, c.host_degree, PolynomialOverField::from_typed(&k, c.center))
        });
        ConicAudit {
            mode: Certification::Coordinates,
            conics: c.0,
            system_rank: Some(c.1),
            irreducible: true,
            collinear_free: true,
            host_degree: Some(c.2),
            center: c.3,
        }
    } else {
        let (center, collinear) = crate::with_field!(field, |k| symbolic(&k, &fam, r)?);
        if collinear {
            return Err(ConstructionError::NotGeneralPosition(
                "some q_i is collinear with two base points".into(),
            ));
        }
        ConicAudit {
            mode: Certification::Symbolic,
            conics: center.degree().unwrap_or(0),
            system_rank: None,
            irreducible: true,
            collinear_free: true,
            host_degree: None,
            center,
        }
    };
    if audit.conics != d || audit.center.degree() != Some(d) {
        return Err(ConstructionError::ConicCoincidence(format!(
            "{} distinct conics for {d} points",
            audit.conics
        )));
    }
    let orbit = orbit_from_poly(&field, r, TemplateKind::Line, None, false)?;
    let target = source.clone().labeled(format!("r={}", r.monic().to_string_in("t")));
    let link = SarkisovLink::new(
        LinkType::II,
        source,
        target,
        Some(orbit.clone().with_tag("q")),
        Some(orbit.with_tag("q'")),
        Some(FiberCenter::Finite(audit.center.clone())),
    );
    match link_validate(&link) {
        LinkVerdict::Ok { .. } => Ok(BigLink { link, audit }),
        LinkVerdict::Violation { rule } => Err(ConstructionError::InvalidLink(rule)),
    }
}

/// Depth-(2n+1) link between conic bundles on the del Pezzo surface of degree 5 obtained by
/// blowing up `orbit4` (four points on y² = xz).
pub fn c5_big_link(orbit4: &PointOrbit, r_poly: &PolynomialOverField) -> Result<BigLink, ConstructionError> {
    if orbit4.size != 4 || orbit4.general_position != GeneralPosition::Yes {
        return Err(ConstructionError::NotGeneralPosition(format!(
            "orbit of size {} with general position {:?}",
            orbit4.size, orbit4.general_position
        )));
    }
    if orbit4.template != Template::Conic {
        return Err(ConstructionError::Unsupported("the degree 5 construction needs a conic orbit".into()));
    }
    build(
        PencilFamily::Conic(orbit4.min_poly.clone()),
        MoriFiberSpaceModel::cb5(orbit4.clone()),
        r_poly,
    )
}

/// Depth-(2n+1) link between conic bundles on the del Pezzo surface of degree 6 obtained by
/// blowing up the split pair [1:a_i:0], [1:0:b_i].
pub fn c6_big_link(pair: &PointOrbit, r_poly: &PolynomialOverField) -> Result<BigLink, ConstructionError> {
    let h = match (&pair.template, &pair.min_poly2) {
        (Template::Split, Some(h)) => h.clone(),
        _ => {
            return Err(ConstructionError::Unsupported(
                "the degree 6 construction needs a split pair".into(),
            ))
        }
    };
    if pair.general_position != GeneralPosition::Yes {
        return Err(ConstructionError::NotGeneralPosition("split pair".into()));
    }
    build(
        PencilFamily::Split(pair.min_poly.clone(), h),
        MoriFiberSpaceModel::cb6(vec![pair.clone()]),
        r_poly,
    )
}

/// [1:a_i:0] and [1:0:a_i] for the roots a_i of the quadratic g.
pub fn mirror_pair(g: &PolynomialOverField) -> Result<PointOrbit, ConstructionError> {
    if g.degree() != Some(2) {
        return Err(ConstructionError::Unsupported("mirror pairs come from quadratics".into()));
    }
    Ok(orbit_from_poly(g.field(), g, TemplateKind::Split, Some(g), false)?)
}
