//! Words in the groupoid of Sarkisov links between Mori fiber spaces, the elementary
//! relations among type II conic bundle links, and a reducer for relators.

mod fuzz;
mod moves;
mod reduce;

use serde::{Deserialize, Serialize};

use crate::mfs_catalog::{link_validate, FiberCenter, LinkVerdict, MoriFiberSpaceModel, SarkisovLink};

pub use fuzz::{fuzz_relator, FuzzConfig};
pub use moves::{apply_move, commute_move, normalize_markers, Move};
pub use reduce::{fiber_traces, reduce_relation, reorder_by_depth, FiberTrace, Reduction};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("links share the fiber {0}")]
    SharedFiber(String),
    #[error("letter {0} is not a type II link between conic bundles")]
    NotTypeIICB(usize),
    #[error("word endpoints differ")]
    NotARelator,
    #[error("chain breaks at position {0}")]
    ChainBreak(usize),
    #[error("fiber centers cannot be compared at position {0}")]
    UndecidableCenters(usize),
    #[error("move does not apply: {0}")]
    InvalidMove(String),
}

impl RewriteError {
    pub fn kind(&self) -> &'static str {
        match self {
            RewriteError::SharedFiber(_) => "SharedFiber",
            RewriteError::NotTypeIICB(_) => "NotTypeIICB",
            RewriteError::NotARelator => "NotARelator",
            RewriteError::ChainBreak(_) => "ChainBreak",
            RewriteError::UndecidableCenters(_) => "UndecidableCenters",
            RewriteError::InvalidMove(_) => "InvalidMove",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsoMarker {
    pub from: MoriFiberSpaceModel,
    pub to: MoriFiberSpaceModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Letter {
    Link { link: SarkisovLink, exp: i8 },
    Iso { iso: IsoMarker },
}

impl Letter {
    pub fn link(link: SarkisovLink) -> Self {
        Letter::Link { link, exp: 1 }
    }

    pub fn inv(link: SarkisovLink) -> Self {
        Letter::Link { link, exp: -1 }
    }

    pub fn iso(from: MoriFiberSpaceModel, to: MoriFiberSpaceModel) -> Self {
        Letter::Iso {
            iso: IsoMarker { from, to },
        }
    }

    pub fn is_link(&self) -> bool {
        matches!(self, Letter::Link { .. })
    }

    pub fn source(&self) -> &MoriFiberSpaceModel {
        match self {
            Letter::Link { link, exp } if *exp < 0 => &link.target,
            Letter::Link { link, .. } => &link.source,
            Letter::Iso { iso } => &iso.from,
        }
    }

    pub fn target(&self) -> &MoriFiberSpaceModel {
        match self {
            Letter::Link { link, exp } if *exp < 0 => &link.source,
            Letter::Link { link, .. } => &link.target,
            Letter::Iso { iso } => &iso.to,
        }
    }

    /// The link as applied, i.e. inverted for exponent −1.
    pub fn effective(&self) -> Option<SarkisovLink> {
        match self {
            Letter::Link { link, exp } if *exp < 0 => Some(link.inverse()),
            Letter::Link { link, .. } => Some(link.clone()),
            Letter::Iso { .. } => None,
        }
    }

    pub fn as_link(&self) -> Option<&SarkisovLink> {
        match self {
            Letter::Link { link, .. } => Some(link),
            Letter::Iso { .. } => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.as_link().map_or(0, |l| l.depth)
    }

    pub fn center(&self) -> Option<&FiberCenter> {
        self.as_link().and_then(|l| l.fiber_center.as_ref())
    }

    /// Keys of the orbits blown up and contracted, as applied.
    pub(crate) fn orbit_keys(&self) -> (String, String) {
        let key = |o: &Option<crate::galois_orbits::PointOrbit>| o.as_ref().map_or(String::new(), |o| o.key());
        match self {
            Letter::Link { link, exp } if *exp < 0 => (key(&link.orbit_tgt), key(&link.orbit_src)),
            Letter::Link { link, .. } => (key(&link.orbit_src), key(&link.orbit_tgt)),
            Letter::Iso { .. } => (String::new(), String::new()),
        }
    }

    pub(crate) fn set_source(&mut self, m: MoriFiberSpaceModel) {
        match self {
            Letter::Link { link, exp } if *exp < 0 => link.target = m,
            Letter::Link { link, .. } => link.source = m,
            Letter::Iso { iso } => iso.from = m,
        }
    }

    pub(crate) fn set_target(&mut self, m: MoriFiberSpaceModel) {
        match self {
            Letter::Link { link, exp } if *exp < 0 => link.source = m,
            Letter::Link { link, .. } => link.target = m,
            Letter::Iso { iso } => iso.to = m,
        }
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Link { link, exp } => Letter::Link {
                link: link.clone(),
                exp: -exp,
            },
            Letter::Iso { iso } => Letter::iso(iso.to.clone(), iso.from.clone()),
        }
    }
}

/// Letters in application order: the first letter is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupoidWord {
    pub endpoints: [MoriFiberSpaceModel; 2],
    pub letters: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum WordVerdict {
    Ok,
    ChainBreak { position: usize },
    InvalidLetter { position: usize, rule: String },
}

impl GroupoidWord {
    pub fn empty(x: MoriFiberSpaceModel) -> Self {
        GroupoidWord {
            endpoints: [x.clone(), x],
            letters: Vec::new(),
        }
    }

    /// Endpoints taken from the first and last letter.
    pub fn from_letters(letters: Vec<Letter>) -> Option<Self> {
        let first = letters.first()?.source().clone();
        let last = letters.last()?.target().clone();
        Some(GroupoidWord {
            endpoints: [first, last],
            letters,
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_relator(&self) -> bool {
        self.endpoints[0].key() == self.endpoints[1].key()
    }

    pub fn link_count(&self) -> usize {
        self.letters.iter().filter(|l| l.is_link()).count()
    }

    pub fn depths(&self) -> Vec<usize> {
        self.letters.iter().filter(|l| l.is_link()).map(|l| l.depth()).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GroupoidWord) -> GroupoidWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupoidWord {
            endpoints: [self.endpoints[0].clone(), other.endpoints[1].clone()],
            letters,
        }
    }

    pub fn inverse(&self) -> GroupoidWord {
        GroupoidWord {
            endpoints: [self.endpoints[1].clone(), self.endpoints[0].clone()],
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }
}

/// Composability and per-letter link validity. A break at position i means letter i does
/// not start where the word so far ends; position n refers to the final endpoint.
pub fn word_validate(w: &GroupoidWord) -> WordVerdict {
    let mut at = w.endpoints[0].key();
    for (i, l) in w.letters.iter().enumerate() {
        if l.source().key() != at {
            return WordVerdict::ChainBreak { position: i };
        }
        if let Letter::Link { link, exp } = l {
            if exp.abs() != 1 {
                return WordVerdict::InvalidLetter {
                    position: i,
                    rule: "exponent".into(),
                };
            }
            if let LinkVerdict::Violation { rule } = link_validate(link) {
                return WordVerdict::InvalidLetter { position: i, rule };
            }
        }
        at = l.target().key();
    }
    if at != w.endpoints[1].key() {
        return WordVerdict::ChainBreak {
            position: w.letters.len(),
        };
    }
    WordVerdict::Ok
}

/// Deterministic 64-bit FNV-1a, used for labels of intermediate surfaces.
pub(crate) fn fnv(parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for p in parts {
        for b in p.bytes().chain(std::iter::once(0xff)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}
