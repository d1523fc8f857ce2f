//! Index sets and free-factor witnesses for the refined target.

use serde::{Deserialize, Serialize};

use super::{c5_big_link, c6_big_link, dejonquieres_decompose, mirror_pair, ConstructionError, DeJonquieresMap};
use crate::exactfield::{factor, FieldSpec, PolynomialOverField};
use crate::freeprod::{homo_eval, homo_refined_eval, FreeProductElement, RefinedElement, DEFAULT_DEPTH_THRESHOLD};
use crate::galois_orbits::{
    enumerate_point_orbits, large_orbit, orbit_from_poly, pgl3_classify, ClassFilter, TemplateKind,
};
use crate::rewriting::{GroupoidWord, Letter};

/// Depth of the witness words.
const WITNESS_DEPTH: usize = 17;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWitness {
    pub n: usize,
    pub degree: usize,
    pub poly: PolynomialOverField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub all: usize,
    pub general_position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessWord {
    pub family: String,
    pub word: GroupoidWord,
    pub image: FreeProductElement,
    pub refined: RefinedElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedTargetReport {
    pub field: FieldSpec,
    pub bound: usize,
    /// Depths d in 16..=bound with an irreducible of degree d (indices of I₀ reached by
    /// de Jonquières maps).
    pub i0_depths: Vec<usize>,
    pub i_indices: Vec<IndexWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<ClassCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n4: Option<ClassCounts>,
    pub witnesses: Vec<WitnessWord>,
    /// (i, j, normal-form length of image_i · image_j) for i ≠ j.
    pub pairwise_lengths: Vec<[usize; 3]>,
    pub distinct_factors: usize,
}

/// An irreducible of degree d: the first in canonical order over a finite field, x^d − 2 over Q.
fn irreducible_of_degree(field: &FieldSpec, d: usize) -> Result<PolynomialOverField, ConstructionError> {
    Ok(match field {
        FieldSpec::Rationals => PolynomialOverField::parse(field, &format!("x^{d}-2"))?,
        _ => crate::with_finite_field!(field, unreachable!(), |k| {
            PolynomialOverField::from_typed(&k, factor::first_irreducible(&k, d))
        }),
    })
}

fn counts(q: u64, n: usize) -> Result<ClassCounts, ConstructionError> {
    let orbits = enumerate_point_orbits(q, n)?;
    Ok(ClassCounts {
        all: pgl3_classify(&orbits, q, ClassFilter::All)?.len(),
        general_position: pgl3_classify(&orbits, q, ClassFilter::GeneralPositionOnly)?.len(),
    })
}

fn witness(family: &str, word: GroupoidWord, field: &FieldSpec) -> Result<WitnessWord, ConstructionError> {
    Ok(WitnessWord {
        family: family.into(),
        image: homo_eval(&word, DEFAULT_DEPTH_THRESHOLD)?,
        refined: homo_refined_eval(&word, field)?,
        word,
    })
}

fn one_letter(l: crate::mfs_catalog::SarkisovLink) -> GroupoidWord {
    GroupoidWord::from_letters(vec![Letter::link(l)]).expect("one letter")
}

pub fn refined_target_report(field: &FieldSpec, bound: usize) -> Result<RefinedTargetReport, ConstructionError> {
    field.validate()?;
    let i0_depths: Vec<usize> = (DEFAULT_DEPTH_THRESHOLD..=bound).collect();
    let mut i_indices = Vec::new();
    for n in 8.. {
        let d = 2 * n + 1;
        if d > bound {
            break;
        }
        i_indices.push(IndexWitness {
            n,
            degree: d,
            poly: irreducible_of_degree(field, d)?,
        });
    }
    let (n2, n4) = match field.order() {
        Some(q) => {
            let q = u64::try_from(q).map_err(|_| {
                crate::galois_orbits::OrbitError::ScaleExceeded(format!("field of order {q}"))
            })?;
            (Some(counts(q, 2)?), Some(counts(q, 4)?))
        }
        None => (None, None),
    };

    let r = irreducible_of_degree(field, WITNESS_DEPTH)?;
    let hirz = dejonquieres_decompose(&DeJonquieresMap::new(r.clone()))?.word;
    let orbit4 = match field {
        FieldSpec::Rationals => large_orbit(field, 4, false)?,
        _ => orbit_from_poly(field, &irreducible_of_degree(field, 4)?, TemplateKind::Conic, None, false)?,
    };
    let j5 = one_letter(c5_big_link(&orbit4, &r)?.link);
    let j6 = one_letter(c6_big_link(&mirror_pair(&irreducible_of_degree(field, 2)?)?, &r)?.link);
    let witnesses = vec![
        witness("hirzebruch", hirz, field)?,
        witness("dp5", j5, field)?,
        witness("dp6", j6, field)?,
    ];
    let mut pairwise_lengths = Vec::new();
    for (i, a) in witnesses.iter().enumerate() {
        for (j, b) in witnesses.iter().enumerate() {
            if i != j {
                pairwise_lengths.push([i, j, a.image.mul(&b.image).len()]);
            }
        }
    }
    let mut factors: Vec<_> = witnesses.iter().flat_map(|w| w.image.factors()).collect();
    factors.sort();
    factors.dedup();
    Ok(RefinedTargetReport {
        field: field.clone(),
        bound,
        i0_depths,
        i_indices,
        n2,
        n4,
        witnesses,
        pairwise_lengths,
        distinct_factors: factors.len(),
    })
}
