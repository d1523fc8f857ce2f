//! Elementary moves on groupoid words.

use serde::{Deserialize, Serialize};

use super::{fnv, GroupoidWord, Letter, RewriteError};
use crate::mfs_catalog::{MoriFiberSpaceModel, SarkisovLink};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "kebab-case")]
pub enum Move {
    /// χ followed by its inverse becomes an isomorphism marker.
    Cancel { position: usize, fiber: String },
    /// Swaps two links over disjoint fibers through the four-link relation.
    Commute { position: usize, depths: [usize; 2] },
    /// Folds the marker at `position` into the neighbouring link.
    Absorb { position: usize },
    /// Composes two adjacent markers.
    Fuse { position: usize },
    DropIdentity { position: usize },
}

fn require_cb(l: &SarkisovLink, pos: usize) -> Result<(), RewriteError> {
    if l.is_type2_cb() {
        Ok(())
    } else {
        Err(RewriteError::NotTypeIICB(pos))
    }
}

/// Given χ₁: X₀ → X₁ and χ₂: X₁ → X₂ over disjoint fibers, returns χ₃: X₂ → X₃ and
/// χ₄: X₃ → X₀ with χ₄χ₃χ₂χ₁ = id. χ₃ undoes χ₁ and χ₄ undoes χ₂.
pub fn commute_move(
    chi1: &SarkisovLink,
    chi2: &SarkisovLink,
) -> Result<(SarkisovLink, SarkisovLink), RewriteError> {
    require_cb(chi1, 0)?;
    require_cb(chi2, 1)?;
    if chi2.source.key() != chi1.target.key() {
        return Err(RewriteError::ChainBreak(1));
    }
    let (c1, c2) = match (&chi1.fiber_center, &chi2.fiber_center) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(RewriteError::UndecidableCenters(0)),
    };
    match c1.disjoint(c2) {
        Ok(true) => {}
        Ok(false) => return Err(RewriteError::SharedFiber(c1.key())),
        Err(_) => return Err(RewriteError::UndecidableCenters(0)),
    }
    let (x0, x2) = (chi1.source.key(), chi2.target.key());
    let h = fnv(&[&x0, &chi1.target.key(), &x2, &c1.key(), &c2.key()]);
    let x3 = MoriFiberSpaceModel {
        kind: chi1.source.kind.clone(),
        label: Some(format!("c{h:016x}")),
    };
    let chi3 = SarkisovLink {
        link_type: chi1.link_type,
        source: chi2.target.clone(),
        target: x3.clone(),
        orbit_src: chi1.orbit_tgt.clone(),
        orbit_tgt: chi1.orbit_src.clone(),
        fiber_center: chi1.fiber_center.clone(),
        depth: chi1.depth,
        avoids_singular_fibers: chi1.avoids_singular_fibers,
    };
    let chi4 = SarkisovLink {
        link_type: chi2.link_type,
        source: x3,
        target: chi1.source.clone(),
        orbit_src: chi2.orbit_tgt.clone(),
        orbit_tgt: chi2.orbit_src.clone(),
        fiber_center: chi2.fiber_center.clone(),
        depth: chi2.depth,
        avoids_singular_fibers: chi2.avoids_singular_fibers,
    };
    Ok((chi3, chi4))
}

fn bad(msg: &str) -> RewriteError {
    RewriteError::InvalidMove(msg.into())
}

fn marker_at(w: &GroupoidWord, p: usize) -> Result<(), RewriteError> {
    match w.letters.get(p) {
        Some(Letter::Iso { .. }) => Ok(()),
        _ => Err(bad("no marker at position")),
    }
}

/// True when letters p, p+1 are a link followed by the link undoing it.
pub(crate) fn cancels(w: &GroupoidWord, p: usize) -> bool {
    let (a, b) = match (w.letters.get(p), w.letters.get(p + 1)) {
        (Some(a), Some(b)) if a.is_link() && b.is_link() => (a, b),
        _ => return false,
    };
    let same_fiber = match (a.center(), b.center()) {
        (Some(x), Some(y)) => x.key() == y.key(),
        (None, None) => true,
        _ => false,
    };
    let (s1, t1) = a.orbit_keys();
    let (s2, t2) = b.orbit_keys();
    same_fiber && s2 == t1 && t2 == s1 && a.depth() == b.depth()
}

pub fn apply_move(w: &GroupoidWord, mv: &Move) -> Result<GroupoidWord, RewriteError> {
    let mut out = w.clone();
    let n = w.letters.len();
    match mv {
        Move::Cancel { position: p, .. } => {
            if !cancels(w, *p) {
                return Err(bad("letters do not cancel"));
            }
            let iso = Letter::iso(w.letters[*p].source().clone(), w.letters[p + 1].target().clone());
            out.letters.splice(*p..*p + 2, [iso]);
        }
        Move::Commute { position: p, .. } => {
            if p + 1 >= n {
                return Err(bad("commute past the end"));
            }
            let (k, j) = match (w.letters[*p].effective(), w.letters[p + 1].effective()) {
                (Some(k), Some(j)) => (k, j),
                _ => return Err(bad("commute needs two links")),
            };
            let (chi3, chi4) = commute_move(&k, &j).map_err(|e| match e {
                RewriteError::NotTypeIICB(i) => RewriteError::NotTypeIICB(p + i),
                RewriteError::UndecidableCenters(i) => RewriteError::UndecidableCenters(p + i),
                RewriteError::ChainBreak(i) => RewriteError::ChainBreak(p + i),
                other => other,
            })?;
            // χ₂χ₁ = χ₃⁻¹χ₄⁻¹
            out.letters.splice(*p..*p + 2, [Letter::inv(chi4), Letter::inv(chi3)]);
        }
        Move::Absorb { position: p } => {
            marker_at(w, *p)?;
            let (from, to) = (w.letters[*p].source().clone(), w.letters[*p].target().clone());
            if p + 1 < n && w.letters[p + 1].is_link() {
                out.letters[p + 1].set_source(from);
            } else if *p > 0 && w.letters[p - 1].is_link() {
                out.letters[p - 1].set_target(to);
            } else {
                return Err(bad("marker has no neighbouring link"));
            }
            out.letters.remove(*p);
        }
        Move::Fuse { position: p } => {
            marker_at(w, *p)?;
            marker_at(w, p + 1)?;
            let iso = Letter::iso(w.letters[*p].source().clone(), w.letters[p + 1].target().clone());
            out.letters.splice(*p..*p + 2, [iso]);
        }
        Move::DropIdentity { position: p } => {
            marker_at(w, *p)?;
            if w.letters[*p].source().key() != w.letters[*p].target().key() {
                return Err(bad("marker is not the identity"));
            }
            out.letters.remove(*p);
        }
    }
    Ok(out)
}

/// Removes markers: identities are dropped, adjacent markers fused, and the rest folded
/// into a neighbouring link. A lone non-identity marker is kept.
pub fn normalize_markers(w: &GroupoidWord, log: &mut Vec<Move>) -> GroupoidWord {
    let mut w = w.clone();
    loop {
        let p = match w.letters.iter().position(|l| !l.is_link()) {
            Some(p) => p,
            None => return w,
        };
        let l = &w.letters[p];
        let n = w.letters.len();
        let mv = if l.source().key() == l.target().key() {
            Move::DropIdentity { position: p }
        } else if p + 1 < n && !w.letters[p + 1].is_link() {
            Move::Fuse { position: p }
        } else if (p + 1 < n) || p > 0 {
            Move::Absorb { position: p }
        } else {
            return w;
        };
        w = apply_move(&w, &mv).expect("marker normalization move applies");
        log.push(mv);
    }
}
