//! Free products of direct sums of Z/2Z and the homomorphism from groupoid words.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactfield::FieldSpec;
use crate::mfs_catalog::{cb_class_key, CatalogError, ConicBundleClassKey};
use crate::rewriting::{word_validate, GroupoidWord, WordVerdict};

/// Threshold of Galois depth above which links survive.
pub const DEFAULT_DEPTH_THRESHOLD: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FpLetter<F, B: Ord> {
    pub factor: F,
    pub bits: BTreeSet<B>,
}

/// Alternating normal form: adjacent factors differ and no bit set is empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FpWord<F, B: Ord> {
    pub word: Vec<FpLetter<F, B>>,
}

pub type FreeProductElement = FpWord<ConicBundleClassKey, usize>;

impl<F: Clone + Eq, B: Ord + Clone> FpWord<F, B> {
    pub fn identity() -> Self {
        FpWord { word: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = self.word.clone();
        raw.extend(other.word.iter().cloned());
        fp_normalize(raw)
    }

    /// Every element has order dividing 2 in its factor, so the inverse reverses the word.
    pub fn inverse(&self) -> Self {
        FpWord {
            word: self.word.iter().rev().cloned().collect(),
        }
    }

    pub fn factors(&self) -> Vec<F> {
        self.word.iter().map(|l| l.factor.clone()).collect()
    }
}

/// Merges adjacent letters of the same factor by symmetric difference and drops empty ones.
pub fn fp_normalize<F: Eq, B: Ord + Clone>(raw: Vec<FpLetter<F, B>>) -> FpWord<F, B> {
    let mut out: Vec<FpLetter<F, B>> = Vec::new();
    for l in raw {
        if l.bits.is_empty() {
            continue;
        }
        match out.last_mut() {
            Some(top) if top.factor == l.factor => {
                let merged: BTreeSet<B> = top.bits.symmetric_difference(&l.bits).cloned().collect();
                if merged.is_empty() {
                    out.pop();
                } else {
                    top.bits = merged;
                }
            }
            _ => out.push(l),
        }
    }
    FpWord { word: out }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomoError {
    #[error("word does not chain at position {0}")]
    ChainBreak(usize),
    #[error("letter {position} is invalid: {rule}")]
    InvalidLetter { position: usize, rule: String },
    #[error(transparent)]
    Class(#[from] CatalogError),
    #[error("letter {0} is over a different field")]
    FieldMismatch(usize),
}

impl HomoError {
    pub fn kind(&self) -> &'static str {
        match self {
            HomoError::ChainBreak(_) => "ChainBreak",
            HomoError::InvalidLetter { .. } => "InvalidLetter",
            HomoError::Class(e) => e.kind(),
            HomoError::FieldMismatch(_) => "FieldMismatch",
        }
    }
}

fn check(w: &GroupoidWord) -> Result<(), HomoError> {
    match word_validate(w) {
        WordVerdict::Ok => Ok(()),
        WordVerdict::ChainBreak { position } => Err(HomoError::ChainBreak(position)),
        WordVerdict::InvalidLetter { position, rule } => Err(HomoError::InvalidLetter { position, rule }),
    }
}

/// Surviving letters: (position, class key, depth) of type II conic bundle links of depth ≥ Δ.
fn surviving(w: &GroupoidWord, delta: usize) -> Result<Vec<(usize, ConicBundleClassKey, usize)>, HomoError> {
    check(w)?;
    let mut out = Vec::new();
    for (i, l) in w.letters.iter().enumerate() {
        if let Some(link) = l.as_link() {
            if link.is_type2_cb() && link.depth >= delta {
                out.push((i, cb_class_key(&link.source)?, link.depth));
            }
        }
    }
    Ok(out)
}

/// Each type II conic bundle link of depth ≥ Δ maps to the generator (class, {depth});
/// every other letter maps to the identity.
pub fn homo_eval(w: &GroupoidWord, delta: usize) -> Result<FreeProductElement, HomoError> {
    let raw = surviving(w, delta)?
        .into_iter()
        .map(|(_, factor, d)| FpLetter {
            factor,
            bits: BTreeSet::from([d]),
        })
        .collect();
    Ok(fp_normalize(raw))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "component")]
pub enum RefinedFactor {
    I0,
    J5 { class: String },
    J6 { class: String },
}

/// Index inside a factor: depths for I₀, n = (d−1)/2 for odd d ≥ 17 in I, and the raw
/// depth for even-depth letters outside I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefinedIndex {
    Depth(usize),
    N(usize),
    Aux(usize),
}

impl fmt::Display for RefinedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefinedIndex::Depth(d) => write!(f, "d{d}"),
            RefinedIndex::N(n) => write!(f, "n{n}"),
            RefinedIndex::Aux(d) => write!(f, "aux{d}"),
        }
    }
}

impl std::str::FromStr for RefinedIndex {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.parse::<usize>().map_err(|e| e.to_string());
        if let Some(t) = s.strip_prefix("aux") {
            Ok(RefinedIndex::Aux(num(t)?))
        } else if let Some(t) = s.strip_prefix('d') {
            Ok(RefinedIndex::Depth(num(t)?))
        } else if let Some(t) = s.strip_prefix('n') {
            Ok(RefinedIndex::N(num(t)?))
        } else {
            Err(format!("bad index {s}"))
        }
    }
}

impl Serialize for RefinedIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RefinedIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub type RefinedElement = FpWord<RefinedFactor, RefinedIndex>;

impl RefinedElement {
    /// True when some letter uses an index outside the stated index sets.
    pub fn has_auxiliary(&self) -> bool {
        self.word
            .iter()
            .any(|l| l.bits.iter().any(|b| matches!(b, RefinedIndex::Aux(_))))
    }
}

/// Routes surviving letters (Δ = 16) to I₀, J₅ or J₆ by family.
pub fn homo_refined_eval(w: &GroupoidWord, field: &FieldSpec) -> Result<RefinedElement, HomoError> {
    for (i, l) in w.letters.iter().enumerate() {
        if let Some(link) = l.as_link() {
            let off = link
                .orbit_src
                .iter()
                .chain(link.orbit_tgt.iter())
                .any(|o| &o.field != field);
            if off {
                return Err(HomoError::FieldMismatch(i));
            }
        }
    }
    let raw = surviving(w, DEFAULT_DEPTH_THRESHOLD)?
        .into_iter()
        .map(|(_, key, d)| {
            let idx = if d % 2 == 1 && d >= 17 {
                RefinedIndex::N((d - 1) / 2)
            } else {
                RefinedIndex::Aux(d)
            };
            let (factor, idx) = match key {
                ConicBundleClassKey::Hirzebruch => (RefinedFactor::I0, RefinedIndex::Depth(d)),
                ConicBundleClassKey::DP5 { id } => (RefinedFactor::J5 { class: id }, idx),
                ConicBundleClassKey::DP6 { id } => (RefinedFactor::J6 { class: id }, idx),
            };
            FpLetter {
                factor,
                bits: BTreeSet::from([idx]),
            }
        })
        .collect();
    Ok(fp_normalize(raw))
}
