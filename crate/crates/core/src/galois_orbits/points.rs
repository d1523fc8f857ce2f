//! Materialization of orbits as concrete points in a finite host extension.

use num_rational::BigRational;

use super::{OrbitError, PointOrbit, PositionVerdict, Template};
use crate::exactfield::linalg::{det_rows, normalize_point, Vec3};
use crate::exactfield::{factor, poly, ExtensionField, Field, FiniteField, Rationals, SpecField};

/// H = K[r]/(m) with m the canonical irreducible of the requested degree.
#[derive(Clone, Debug)]
pub struct Host<K: FiniteField> {
    pub k: K,
    pub h: ExtensionField<K>,
}

pub type HElem<K> = Vec<<K as Field>::Elem>;
pub type HPoint<K> = [HElem<K>; 3];

impl<K: FiniteField> Host<K> {
    pub fn new(k: &K, degree: usize) -> Self {
        let m = factor::first_irreducible(k, degree.max(1));
        Host {
            k: k.clone(),
            h: ExtensionField::new(k.clone(), m),
        }
    }

    pub fn embed(&self, c: &K::Elem) -> HElem<K> {
        self.h.embed(c)
    }

    pub fn embed_poly(&self, f: &[K::Elem]) -> Vec<HElem<K>> {
        f.iter().map(|c| self.embed(c)).collect()
    }

    /// x -> x^|K|.
    pub fn frob(&self, x: &HElem<K>) -> HElem<K> {
        self.h.frobenius_pow(x, self.k.degree())
    }

    pub fn frob_point(&self, p: &HPoint<K>) -> HPoint<K> {
        std::array::from_fn(|i| self.frob(&p[i]))
    }

    pub fn roots(&self, f: &[K::Elem]) -> Vec<HElem<K>> {
        factor::roots(&self.h, &self.embed_poly(f))
    }
}

/// Degree over the base field of a field containing every point of the orbit.
pub fn splitting_degree(o: &PointOrbit) -> usize {
    let d = o.min_poly.degree().unwrap_or(1).max(1);
    match &o.min_poly2 {
        Some(g) => num_integer::lcm(d, g.degree().unwrap_or(1).max(1)),
        None => d,
    }
}

pub fn common_degree(orbits: &[PointOrbit]) -> usize {
    orbits.iter().map(splitting_degree).fold(1, num_integer::lcm)
}

/// Sorted, normalized points of `o` in the host.
pub fn orbit_points<K: FiniteField + SpecField>(
    host: &Host<K>,
    o: &PointOrbit,
) -> Result<Vec<HPoint<K>>, OrbitError> {
    let h = &host.h;
    let f = o.min_poly.typed(&host.k)?;
    let zero = h.zero();
    let one = h.one();
    let mut pts: Vec<HPoint<K>> = match o.template {
        Template::Conic => host
            .roots(&f)
            .into_iter()
            .map(|r| [one.clone(), r.clone(), h.mul(&r, &r)])
            .collect(),
        Template::Line => host
            .roots(&f)
            .into_iter()
            .map(|r| [zero.clone(), one.clone(), r])
            .collect(),
        Template::Split => {
            let g = o
                .min_poly2
                .as_ref()
                .ok_or_else(|| OrbitError::DegreeMismatch("split orbit without second quadratic".into()))?
                .typed(&host.k)?;
            let mut v: Vec<HPoint<K>> = host
                .roots(&f)
                .into_iter()
                .map(|r| [one.clone(), r, zero.clone()])
                .collect();
            v.extend(
                host.roots(&g)
                    .into_iter()
                    .map(|s| [one.clone(), zero.clone(), s]),
            );
            v
        }
        Template::Explicit => {
            let cs = o
                .coords
                .as_ref()
                .ok_or_else(|| OrbitError::DegreeMismatch("explicit orbit without coordinates".into()))?;
            let cs: Vec<Vec<HElem<K>>> = cs
                .iter()
                .map(|c| Ok(host.embed_poly(&c.typed(&host.k)?)))
                .collect::<Result<_, OrbitError>>()?;
            host.roots(&f)
                .into_iter()
                .map(|r| {
                    let p: HPoint<K> = std::array::from_fn(|i| poly::eval(h, &cs[i], &r));
                    normalize_point(h, &p)
                })
                .collect()
        }
    };
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Points of every orbit in a common host, concatenated in input order.
pub fn all_points<K: FiniteField + SpecField>(
    host: &Host<K>,
    orbits: &[PointOrbit],
) -> Result<Vec<HPoint<K>>, OrbitError> {
    let mut out = Vec::new();
    for o in orbits {
        out.extend(orbit_points(host, o)?);
    }
    Ok(out)
}

/// Lexicographically first collinear triple of indices.
pub fn first_collinear<F: Field>(k: &F, pts: &[Vec3<F>]) -> Option<[usize; 3]> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                if k.is_zero(&det_rows(k, &pts[i], &pts[j], &pts[l])) {
                    return Some([i, j, l]);
                }
            }
        }
    }
    None
}

pub fn finite_position_check(orbits: &[PointOrbit]) -> Result<PositionVerdict, OrbitError> {
    let field = orbits[0].field.clone();
    crate::with_finite_field!(field, unreachable!(), |k| {
        let host = Host::new(&k, common_degree(orbits));
        let pts = all_points(&host, orbits)?;
        Ok(first_collinear(&host.h, &pts)
            .map_or(PositionVerdict::Yes, |triple| PositionVerdict::No { triple }))
    })
}

pub fn point_count(o: &PointOrbit) -> Result<usize, OrbitError> {
    let field = o.field.clone();
    crate::with_finite_field!(field, Ok(o.size), |k| {
        let host = Host::new(&k, splitting_degree(o));
        Ok(orbit_points(&host, o)?.len())
    })
}

/// Coordinates of an explicit orbit of a single rational point over Q.
pub fn rational_coords(o: &PointOrbit) -> Result<[BigRational; 3], OrbitError> {
    let k = Rationals;
    let f = o.min_poly.typed(&k)?;
    let cs = o.coords.as_ref().ok_or_else(|| {
        OrbitError::UncomputableOverQ("orbit has no explicit coordinates".into())
    })?;
    if f.len() != 2 {
        return Err(OrbitError::UncomputableOverQ("point is not rational".into()));
    }
    let root = k.neg(&k.div(&f[0], &f[1]).unwrap());
    let mut out: Vec<BigRational> = Vec::new();
    for c in cs {
        out.push(poly::eval(&k, &c.typed(&k)?, &root));
    }
    let p: [BigRational; 3] = [out[0].clone(), out[1].clone(), out[2].clone()];
    Ok(normalize_point(&k, &p))
}
