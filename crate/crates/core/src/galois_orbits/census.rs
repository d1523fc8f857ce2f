//! Closed points of P² over F_q and their PGL₃(F_q) classes.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matching::match_points;
use super::points::{all_points, common_degree, first_collinear, HPoint, Host};
use super::{GeneralPosition, OrbitError, PointOrbit, Template};
use crate::exactfield::field::prime_power;
use crate::exactfield::linalg::{apply3, det3, normalize_point, Mat3};
use crate::exactfield::{ExtensionField, Field, FieldError, FieldSpec, FiniteField, PolynomialOverField, SpecField};

/// Largest q^n for which the points of P²(F_{q^n}) are enumerated.
pub const MAX_ENUM_ORDER: u64 = 1024;

/// Largest q for which PGL₃(F_q) is swept exhaustively.
const MAX_SWEEP_Q: u64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFilter {
    All,
    GeneralPositionOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub representative: PointOrbit,
    pub members: usize,
    /// Positions of the members in the input list.
    pub indices: Vec<usize>,
}

fn field_of_order(q: u64) -> Result<FieldSpec, OrbitError> {
    let (p, e) = prime_power(q)
        .ok_or_else(|| FieldError::InvalidField(format!("{q} is not a prime power")))?;
    Ok(FieldSpec::of_order(p, e)?)
}

/// All closed points of degree exactly n of P² over F_q, as explicit orbits.
pub fn enumerate_point_orbits(q: u64, n: usize) -> Result<Vec<PointOrbit>, OrbitError> {
    let field = field_of_order(q)?;
    if n == 0 {
        return Err(OrbitError::DegreeMismatch("orbit size must be positive".into()));
    }
    let big = (q as u128).checked_pow(n as u32);
    if big.map_or(true, |b| b > MAX_ENUM_ORDER as u128) {
        return Err(OrbitError::ScaleExceeded(format!(
            "enumerating P²(F_{{{q}^{n}}}) exceeds the limit |F| <= {MAX_ENUM_ORDER}"
        )));
    }
    crate::with_finite_field!(field, unreachable!(), |k| Ok(enumerate_in(&k, &field, n)))
}

fn enumerate_in<K: FiniteField + SpecField>(k: &K, field: &FieldSpec, n: usize) -> Vec<PointOrbit> {
    let host = Host::new(k, n);
    let h = &host.h;
    let elems = h.elements();
    let (zero, one) = (h.zero(), h.one());
    // normalized points grouped by leading pattern: [1:y:z], [0:1:z], [0:0:1]
    let mut heads: Vec<(HElemPair<K>, bool)> = elems
        .iter()
        .map(|y| ((one.clone(), y.clone()), true))
        .collect();
    heads.push(((zero.clone(), one.clone()), true));
    heads.push(((zero.clone(), zero.clone()), false));
    let min_poly = PolynomialOverField::from_typed(k, h.modulus().to_vec());
    let mut found: Vec<(HPoint<K>, PointOrbit)> = heads
        .par_iter()
        .flat_map_iter(|((x, y), free_z)| {
            let zs: Vec<_> = if *free_z { elems.clone() } else { vec![one.clone()] };
            let host = &host;
            let min_poly = &min_poly;
            zs.into_iter().filter_map(move |z| {
                let p: HPoint<K> = [x.clone(), y.clone(), z];
                let conj = conjugates(host, &p);
                if conj.len() != n || conj.iter().any(|c| c < &p) {
                    return None;
                }
                let gp = if n < 3 || first_collinear(&host.h, &conj).is_none() {
                    GeneralPosition::Yes
                } else {
                    GeneralPosition::No
                };
                let coords = std::array::from_fn(|i| {
                    PolynomialOverField::from_typed(k, host.h.to_poly(&p[i]))
                });
                let o = PointOrbit {
                    field: field.clone(),
                    template: Template::Explicit,
                    min_poly: min_poly.clone(),
                    min_poly2: None,
                    coords: Some(coords),
                    size: n,
                    general_position: gp,
                    tag: None,
                };
                Some((p, o))
            })
        })
        .collect();
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.into_iter().map(|(_, o)| o).collect()
}

type HElemPair<K> = (Vec<<K as Field>::Elem>, Vec<<K as Field>::Elem>);

/// Distinct Frobenius conjugates of a normalized point, starting with the point.
fn conjugates<K: FiniteField>(host: &Host<K>, p: &HPoint<K>) -> Vec<HPoint<K>> {
    let mut out = vec![p.clone()];
    loop {
        let next = host.frob_point(out.last().unwrap());
        if &next == p {
            return out;
        }
        out.push(next);
    }
}

/// Every element of PGL₃(K), normalized so the first nonzero entry is 1.
pub(crate) fn pgl3_elements<K: FiniteField>(k: &K) -> Vec<Mat3<K>> {
    let elems = k.elements();
    let q = elems.len();
    let total = q.pow(9);
    (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut entries: Vec<K::Elem> = Vec::with_capacity(9);
            for _ in 0..9 {
                entries.push(elems[code % q].clone());
                code /= q;
            }
            let lead = entries.iter().find(|e| !k.is_zero(e))?;
            if !k.is_one(lead) {
                return None;
            }
            let m: Mat3<K> =
                std::array::from_fn(|i| std::array::from_fn(|j| entries[3 * i + j].clone()));
            if k.is_zero(&det3(k, &m)) {
                None
            } else {
                Some(m)
            }
        })
        .collect()
}

fn image<K: FiniteField>(host: &Host<K>, a: &Mat3<ExtensionField<K>>, pts: &[HPoint<K>]) -> Vec<HPoint<K>> {
    let mut v: Vec<HPoint<K>> = pts
        .iter()
        .map(|p| normalize_point(&host.h, &apply3(&host.h, a, p)))
        .collect();
    v.sort();
    v
}

/// Partitions orbits into PGL₃(F_q) classes; the representative is the least member
/// by (size, sorted points).
pub fn pgl3_classify(
    orbits: &[PointOrbit],
    q: u64,
    filter: ClassFilter,
) -> Result<Vec<OrbitClass>, OrbitError> {
    let field = field_of_order(q)?;
    if orbits.iter().any(|o| o.field != field) {
        return Err(OrbitError::IncompatibleFields);
    }
    let kept: Vec<usize> = (0..orbits.len())
        .filter(|&i| {
            filter == ClassFilter::All || orbits[i].general_position == GeneralPosition::Yes
        })
        .collect();
    if kept.is_empty() {
        return Ok(Vec::new());
    }
    let selected: Vec<PointOrbit> = kept.iter().map(|&i| orbits[i].clone()).collect();
    if q > MAX_SWEEP_Q
        && !selected
            .iter()
            .all(|o| o.size == 4 && o.general_position == GeneralPosition::Yes)
    {
        return Err(OrbitError::ScaleExceeded(format!(
            "PGL3(F_{q}) classification beyond q = {MAX_SWEEP_Q} is limited to 4-point orbits in general position"
        )));
    }
    let groups = crate::with_finite_field!(field, unreachable!(), |k| classify_in(&k, &selected, q))?;
    Ok(groups
        .into_iter()
        .map(|g| OrbitClass {
            representative: selected[g[0]].clone(),
            members: g.len(),
            indices: g.iter().map(|&i| kept[i]).collect(),
        })
        .collect())
}

fn classify_in<K: FiniteField + SpecField>(
    k: &K,
    selected: &[PointOrbit],
    q: u64,
) -> Result<Vec<Vec<usize>>, OrbitError> {
    let host = Host::new(k, common_degree(selected));
    let sets: Vec<Vec<HPoint<K>>> = selected
        .iter()
        .map(|o| all_points(&host, std::slice::from_ref(o)).map(sorted))
        .collect::<Result<_, _>>()?;
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&a, &b| (sets[a].len(), &sets[a]).cmp(&(sets[b].len(), &sets[b])));
    if q <= MAX_SWEEP_Q {
        Ok(sweep_classes(k, &host, &sets, &order))
    } else {
        frame_classes(&host, &sets, &order)
    }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn sweep_classes<K: FiniteField>(
    k: &K,
    host: &Host<K>,
    sets: &[Vec<HPoint<K>>],
    order: &[usize],
) -> Vec<Vec<usize>> {
    let mats: Vec<Mat3<ExtensionField<K>>> = pgl3_elements(k)
        .iter()
        .map(|m| std::array::from_fn(|i| std::array::from_fn(|j| host.embed(&m[i][j]))))
        .collect();
    let mut assigned = vec![false; sets.len()];
    let mut groups = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut group = vec![i];
        let rest: Vec<usize> = order[pos + 1..]
            .iter()
            .copied()
            .filter(|&j| !assigned[j] && sets[j].len() == sets[i].len())
            .collect();
        if !rest.is_empty() {
            let images: HashSet<Vec<HPoint<K>>> = mats
                .par_iter()
                .map(|a| image(host, a, &sets[i]))
                .collect();
            for j in rest {
                if images.contains(&sets[j]) {
                    assigned[j] = true;
                    group.push(j);
                }
            }
        }
        groups.push(group);
    }
    groups
}

fn frame_classes<K: FiniteField>(
    host: &Host<K>,
    sets: &[Vec<HPoint<K>>],
    order: &[usize],
) -> Result<Vec<Vec<usize>>, OrbitError> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in order {
        let mut placed = false;
        for g in groups.iter_mut() {
            match match_points(host, &sets[g[0]], &sets[i]) {
                Ok(_) => {
                    g.push(i);
                    placed = true;
                    break;
                }
                Err(OrbitError::NoMatch) | Err(OrbitError::FingerprintMismatch) => {}
                Err(e) => return Err(e),
            }
        }
        if !placed {
            groups.push(vec![i]);
        }
    }
    Ok(groups)
}
