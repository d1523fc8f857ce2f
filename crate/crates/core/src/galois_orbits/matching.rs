//! Galois permutation fingerprints and the projective frame solve for matching
//! 4-point sets by a k-rational linear map.

use serde::{Deserialize, Serialize};

use super::points::{all_points, common_degree, first_collinear, rational_coords, HPoint, Host};
use super::{OrbitError, PointOrbit, Template};
use crate::exactfield::linalg::{apply3, inv3, mul3, normalize_mat3, normalize_point, Mat3, Vec3};
use crate::exactfield::parse::parse_elem;
use crate::exactfield::{poly, Field, FiniteField, PolynomialOverField, Rationals};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationActionFingerprint {
    /// One permutation per generator of the Galois action, on point labels 0..n.
    pub generator_images: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transform {
    /// Entries in the base field, first nonzero entry normalized to 1.
    pub matrix: [[String; 3]; 3],
    /// The matrix sends the i-th point of P to the labeling[i]-th point of Q,
    /// both sorted in a common host field.
    pub labeling: Vec<usize>,
}

/// Frobenius permutation of the sorted points of the union (finite fields only).
pub fn fingerprint(orbits: &[PointOrbit]) -> Result<PermutationActionFingerprint, OrbitError> {
    let field = orbits
        .first()
        .map(|o| o.field.clone())
        .ok_or(OrbitError::PointCount { expected: 1, got: 0 })?;
    if orbits.iter().any(|o| o.field != field) {
        return Err(OrbitError::IncompatibleFields);
    }
    crate::with_finite_field!(
        field,
        Err(OrbitError::UncomputableOverQ("no finite Frobenius over Q".into())),
        |k| {
            let host = Host::new(&k, common_degree(orbits));
            let mut pts = all_points(&host, orbits)?;
            pts.sort();
            Ok(PermutationActionFingerprint {
                generator_images: vec![frob_perm(&host, &pts)],
            })
        }
    )
}

fn frob_perm<K: FiniteField>(host: &Host<K>, pts: &[HPoint<K>]) -> Vec<usize> {
    pts.iter()
        .map(|p| {
            let img = host.frob_point(p);
            pts.iter().position(|x| *x == img).expect("point sets are Galois stable")
        })
        .collect()
}

/// Permutations of 0..n in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Columns p0, p1, p2 scaled so that their sum is p3.
fn frame<F: Field>(k: &F, p: &[Vec3<F>]) -> Option<Mat3<F>> {
    let m: Mat3<F> = std::array::from_fn(|r| std::array::from_fn(|c| p[c][r].clone()));
    let c = apply3(k, &inv3(k, &m)?, &p[3]);
    if c.iter().any(|x| k.is_zero(x)) {
        return None;
    }
    Some(std::array::from_fn(|r| {
        std::array::from_fn(|col| k.mul(&m[r][col], &c[col]))
    }))
}

/// A with A·p_i = q_{π(i)}, if one exists.
fn frame_solve<F: Field>(k: &F, p: &[Vec3<F>], q: &[Vec3<F>], pi: &[usize]) -> Option<Mat3<F>> {
    let qs: Vec<Vec3<F>> = (0..4).map(|i| q[pi[i]].clone()).collect();
    let fp = frame(k, p)?;
    let fq = frame(k, &qs)?;
    let a = normalize_mat3(k, &mul3(k, &fq, &inv3(k, &fp)?));
    let ok = (0..4).all(|i| normalize_point(k, &apply3(k, &a, &p[i])) == normalize_point(k, &qs[i]));
    ok.then_some(a)
}

/// Matching on sorted host points; the matrix is returned over the base field.
pub(crate) fn match_points<K: FiniteField>(
    host: &Host<K>,
    p: &[HPoint<K>],
    q: &[HPoint<K>],
) -> Result<(Mat3<K>, Vec<usize>), OrbitError> {
    let h = &host.h;
    for s in [p, q] {
        if s.len() != 4 {
            return Err(OrbitError::PointCount { expected: 4, got: s.len() });
        }
        if let Some(t) = first_collinear(h, s) {
            return Err(OrbitError::CollinearTriple(t));
        }
    }
    let sp = frob_perm(host, p);
    let sq = frob_perm(host, q);
    let compatible: Vec<Vec<usize>> = permutations(4)
        .into_iter()
        .filter(|pi| (0..4).all(|i| pi[sp[i]] == sq[pi[i]]))
        .collect();
    if compatible.is_empty() {
        return Err(OrbitError::FingerprintMismatch);
    }
    for pi in compatible {
        let Some(a) = frame_solve(h, p, q, &pi) else {
            continue;
        };
        let base: Option<Vec<K::Elem>> = a.iter().flatten().map(|x| h.project(x)).collect();
        if let Some(b) = base {
            let m: Mat3<K> = std::array::from_fn(|i| std::array::from_fn(|j| b[3 * i + j].clone()));
            return Ok((m, pi));
        }
    }
    Err(OrbitError::NoMatch)
}

fn format_mat<F: Field>(k: &F, m: &Mat3<F>) -> [[String; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| k.fmt_elem(&m[i][j])))
}

fn check_pair(p: &[PointOrbit], q: &[PointOrbit]) -> Result<(), OrbitError> {
    let field = &p.first().ok_or(OrbitError::PointCount { expected: 4, got: 0 })?.field;
    if p.iter().chain(q).any(|o| &o.field != field) {
        return Err(OrbitError::IncompatibleFields);
    }
    for s in [p, q] {
        let n = PointOrbit::total_points(s);
        if n != 4 {
            return Err(OrbitError::PointCount { expected: 4, got: n });
        }
    }
    Ok(())
}

/// A matrix over k mapping the 4-point set P onto Q, respecting the Galois action.
pub fn match_transform(p: &[PointOrbit], q: &[PointOrbit]) -> Result<Transform, OrbitError> {
    check_pair(p, q)?;
    let field = p[0].field.clone();
    crate::with_finite_field!(field, rational_match(p, q), |k| {
        let host = Host::new(&k, num_integer::lcm(common_degree(p), common_degree(q)));
        let mut ps = all_points(&host, p)?;
        let mut qs = all_points(&host, q)?;
        ps.sort();
        qs.sort();
        let (m, labeling) = match_points(&host, &ps, &qs)?;
        Ok(Transform {
            matrix: format_mat(&k, &m),
            labeling,
        })
    })
}

fn identity_strings() -> [[String; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { "1" } else { "0" }.to_string()))
}

/// Over Q only the normal forms are compared; a failure is not a proof of inequivalence.
fn rational_match(p: &[PointOrbit], q: &[PointOrbit]) -> Result<Transform, OrbitError> {
    let k = Rationals;
    let rational = |s: &[PointOrbit]| s.iter().all(|o| o.template == Template::Explicit && o.size == 1);
    if rational(p) && rational(q) {
        let ps: Vec<Vec3<Rationals>> = p.iter().map(rational_coords).collect::<Result<_, _>>()?;
        let qs: Vec<Vec3<Rationals>> = q.iter().map(rational_coords).collect::<Result<_, _>>()?;
        for s in [&ps, &qs] {
            if let Some(t) = first_collinear(&k, s) {
                return Err(OrbitError::CollinearTriple(t));
            }
        }
        let pi: Vec<usize> = (0..4).collect();
        let a = frame_solve(&k, &ps, &qs, &pi).ok_or(OrbitError::NoMatch)?;
        return Ok(Transform {
            matrix: format_mat(&k, &a),
            labeling: pi,
        });
    }
    let ident = (0..4).collect::<Vec<usize>>();
    match (p, q) {
        ([a], [b]) if a.template == Template::Conic && b.template == Template::Conic => {
            if a.min_poly.monic() == b.min_poly.monic() {
                return Ok(Transform {
                    matrix: identity_strings(),
                    labeling: ident,
                });
            }
        }
        ([a], [b]) if a.template == Template::Split && b.template == Template::Split => {
            let (g, h) = (a.min_poly.monic(), a.min_poly2.clone().map(|x| x.monic()));
            let (g2, h2) = (b.min_poly.monic(), b.min_poly2.clone().map(|x| x.monic()));
            if g == g2 && h == h2 {
                return Ok(Transform {
                    matrix: identity_strings(),
                    labeling: ident,
                });
            }
            if Some(&g) == h2.as_ref() && h.as_ref() == Some(&g2) {
                let swap = [["1", "0", "0"], ["0", "0", "1"], ["0", "1", "0"]]
                    .map(|r| r.map(String::from));
                return Ok(Transform {
                    matrix: swap,
                    labeling: vec![2, 3, 0, 1],
                });
            }
        }
        _ => {}
    }
    Err(OrbitError::NoMatch)
}

/// Coordinates of each orbit as polynomials in a root t of its minimal polynomial.
fn coordinate_parts(o: &PointOrbit) -> Result<Vec<(PolynomialOverField, [String; 3])>, OrbitError> {
    let f = o.min_poly.clone();
    Ok(match o.template {
        Template::Conic => vec![(f, ["1", "t", "t^2"].map(String::from))],
        Template::Line => vec![(f, ["0", "1", "t"].map(String::from))],
        Template::Split => {
            let g = o
                .min_poly2
                .clone()
                .ok_or_else(|| OrbitError::DegreeMismatch("split orbit without second quadratic".into()))?;
            vec![
                (f, ["1", "t", "0"].map(String::from)),
                (g, ["1", "0", "t"].map(String::from)),
            ]
        }
        Template::Explicit => {
            let c = o
                .coords
                .as_ref()
                .ok_or_else(|| OrbitError::DegreeMismatch("explicit orbit without coordinates".into()))?;
            vec![(f, c.clone().map(|x| x.to_string_in("t")))]
        }
    })
}

/// Image of the orbits under the matrix with entries parsed as elements of their field.
pub fn apply_matrix(orbits: &[PointOrbit], m: &[[String; 3]; 3]) -> Result<Vec<PointOrbit>, OrbitError> {
    let mut out = Vec::new();
    for o in orbits {
        let field = o.field.clone();
        for (minp, coords) in coordinate_parts(o)? {
            let image: Result<[PolynomialOverField; 3], OrbitError> =
                crate::with_field!(field, |k| {
                    let a: Vec<Vec<_>> = m
                        .iter()
                        .map(|row| row.iter().map(|s| parse_elem(&k, s)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<_, _>>()?;
                    let cs: Vec<_> = coords
                        .iter()
                        .map(|s| PolynomialOverField::parse(&field, s).and_then(|p| p.typed(&k)))
                        .collect::<Result<_, _>>()?;
                    Ok(std::array::from_fn(|i| {
                        let row = (0..3).fold(Vec::new(), |acc, j| {
                            poly::add(&k, &acc, &poly::scale(&k, &cs[j], &a[i][j]))
                        });
                        PolynomialOverField::from_typed(&k, row)
                    }))
                });
            out.push(PointOrbit::explicit(&field, minp, image?)?);
        }
    }
    Ok(out)
}
