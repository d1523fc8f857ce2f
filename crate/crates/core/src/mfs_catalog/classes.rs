//! Equivalence classes of rational Mori conic bundles.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::{CatalogError, MfsKind, MoriFiberSpaceModel};
use crate::exactfield::{factor, FieldSpec, FiniteField, PolynomialOverField, SpecField};
use crate::galois_orbits::{match_transform, orbit_from_poly, OrbitError, PointOrbit, Template, TemplateKind};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum ConicBundleClassKey {
    Hirzebruch,
    DP5 { id: String },
    DP6 { id: String },
}

impl fmt::Display for ConicBundleClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConicBundleClassKey::Hirzebruch => f.write_str("Hirz"),
            ConicBundleClassKey::DP5 { id } => write!(f, "DP5[{id}]"),
            ConicBundleClassKey::DP6 { id } => write!(f, "DP6[{id}]"),
        }
    }
}

fn cache() -> &'static Mutex<HashMap<String, ConicBundleClassKey>> {
    static CACHE: OnceLock<Mutex<HashMap<String, ConicBundleClassKey>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Class of a rational conic bundle under fibration-preserving birational maps.
pub fn cb_class_key(x: &MoriFiberSpaceModel) -> Result<ConicBundleClassKey, CatalogError> {
    match &x.kind {
        MfsKind::Hirzebruch { .. } => Ok(ConicBundleClassKey::Hirzebruch),
        MfsKind::NonRationalCB => Err(CatalogError::NonRational),
        MfsKind::P2 | MfsKind::DelPezzo { .. } => Err(CatalogError::InvalidModel(
            "class keys are defined for conic bundles only".into(),
        )),
        MfsKind::CB5 { orbit } => {
            x.validate()?;
            let orbits = std::slice::from_ref(orbit);
            let id = cached(orbits, "5", || class_id(orbits, 5))?;
            Ok(ConicBundleClassKey::DP5 { id })
        }
        MfsKind::CB6 { orbits } => {
            x.validate()?;
            let id = cached(orbits, "6", || class_id(orbits, 6))?;
            Ok(ConicBundleClassKey::DP6 { id })
        }
    }
}

fn cached(
    orbits: &[PointOrbit],
    tag: &str,
    compute: impl FnOnce() -> Result<String, CatalogError>,
) -> Result<String, CatalogError> {
    let mut key = format!("{}|{tag}", orbits[0].field);
    for o in orbits {
        key += "|";
        key += &o.key();
    }
    if let Some(ConicBundleClassKey::DP5 { id } | ConicBundleClassKey::DP6 { id }) =
        cache().lock().unwrap().get(&key)
    {
        return Ok(id.clone());
    }
    let id = compute()?;
    let v = if tag == "5" {
        ConicBundleClassKey::DP5 { id: id.clone() }
    } else {
        ConicBundleClassKey::DP6 { id: id.clone() }
    };
    cache().lock().unwrap().insert(key, v);
    Ok(id)
}

fn class_id(orbits: &[PointOrbit], k2: u8) -> Result<String, CatalogError> {
    let field = orbits[0].field.clone();
    crate::with_finite_field!(field, Ok(rational_id(orbits)), |k| finite_id(&k, orbits, k2))
}

/// Canonical representative: the first conic (K²=5) or split (K²=6) normal form
/// in canonical polynomial order that is projectively equivalent to the input.
fn finite_id<K: FiniteField + SpecField>(
    k: &K,
    orbits: &[PointOrbit],
    k2: u8,
) -> Result<String, CatalogError> {
    let field: FieldSpec = k.spec();
    let wrap = |f: Vec<K::Elem>| PolynomialOverField::from_typed(k, f);
    let matches = |cand: &PointOrbit| -> Result<bool, CatalogError> {
        match match_transform(orbits, std::slice::from_ref(cand)) {
            Ok(_) => Ok(true),
            Err(OrbitError::NoMatch | OrbitError::FingerprintMismatch) => Ok(false),
            Err(e) => Err(e.into()),
        }
    };
    if k2 == 5 {
        for g in factor::irreducibles(k, 4) {
            let cand = orbit_from_poly(&field, &wrap(g), TemplateKind::Conic, None, false)?;
            if matches(&cand)? {
                return Ok(format!("conic:{}", cand.min_poly.to_string_in("t")));
            }
        }
    } else {
        let quads: Vec<Vec<K::Elem>> = factor::irreducibles(k, 2).collect();
        for (i, g) in quads.iter().enumerate() {
            for h in &quads[i..] {
                let (g, h) = (wrap(g.clone()), wrap(h.clone()));
                let cand = orbit_from_poly(&field, &g, TemplateKind::Split, Some(&h), false)?;
                if matches(&cand)? {
                    return Ok(format!("split:{},{}", g.to_string_in("t"), h.to_string_in("t")));
                }
            }
        }
    }
    Err(CatalogError::UnresolvedClass(
        "no normal form matches the defining orbits".into(),
    ))
}

/// Over Q the key is the normal form of the defining data; distinct keys may still be
/// equivalent.
fn rational_id(orbits: &[PointOrbit]) -> String {
    match orbits {
        [o] if o.template == Template::Conic => format!("conic:{}", o.min_poly.monic().to_string_in("t")),
        [o] if o.template == Template::Split => {
            let mut v = vec![
                o.min_poly.monic().to_string_in("t"),
                o.min_poly2.as_ref().map(|g| g.monic().to_string_in("t")).unwrap_or_default(),
            ];
            v.sort();
            format!("split:{}", v.join(","))
        }
        _ => {
            let mut v: Vec<String> = orbits.iter().map(|o| o.key()).collect();
            v.sort();
            format!("orbits:{}", v.join(";"))
        }
    }
}
