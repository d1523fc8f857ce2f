//! Fiber-by-fiber reduction of relators and depth reordering.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::moves::{apply_move, cancels, normalize_markers, Move};
use super::{word_validate, GroupoidWord, Letter, RewriteError, WordVerdict};

/// N(F, i): number of links stacked over the fiber F after the first i letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTrace {
    pub fiber: String,
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub residual: GroupoidWord,
    pub moves: Vec<Move>,
    /// Traces of the input word.
    pub traces: Vec<FiberTrace>,
    /// The residual still contains links.
    pub stuck: bool,
}

fn fiber_key(l: &Letter) -> String {
    l.center().map_or_else(|| "?".to_string(), |c| c.key())
}

/// Per-letter stack level after the letter, and whether the letter popped.
fn levels(w: &GroupoidWord) -> Vec<Option<(String, usize, bool)>> {
    let mut stacks: HashMap<String, Vec<(String, String)>> = HashMap::new();
    w.letters
        .iter()
        .map(|l| {
            if !l.is_link() {
                return None;
            }
            let f = fiber_key(l);
            let (s, t) = l.orbit_keys();
            let st = stacks.entry(f.clone()).or_default();
            let pop = matches!(st.last(), Some((s0, t0)) if *t0 == s && *s0 == t);
            if pop {
                st.pop();
            } else {
                st.push((s, t));
            }
            Some((f, st.len(), pop))
        })
        .collect()
}

pub fn fiber_traces(w: &GroupoidWord) -> Vec<FiberTrace> {
    let lv = levels(w);
    let fibers: BTreeMap<String, ()> = lv.iter().flatten().map(|(f, _, _)| (f.clone(), ())).collect();
    fibers
        .into_keys()
        .map(|f| {
            let mut counts = vec![0];
            let mut cur = 0;
            for x in &lv {
                if let Some((g, n, _)) = x {
                    if *g == f {
                        cur = *n;
                    }
                }
                counts.push(cur);
            }
            FiberTrace { fiber: f, counts }
        })
        .collect()
}

/// Leftmost maximal plateau of the first fiber (in key order) that has one: a push to the
/// fiber's maximal level and the next letter over the same fiber, which pops it.
fn pick_plateau(w: &GroupoidWord) -> Option<(usize, usize)> {
    let lv = levels(w);
    let mut by_fiber: BTreeMap<&str, Vec<(usize, usize, bool)>> = BTreeMap::new();
    for (i, x) in lv.iter().enumerate() {
        if let Some((f, n, pop)) = x {
            by_fiber.entry(f.as_str()).or_default().push((i, *n, *pop));
        }
    }
    for seq in by_fiber.values() {
        let m = seq.iter().map(|x| x.1).max().unwrap_or(0);
        for (k, &(i, n, pop)) in seq.iter().enumerate() {
            if n == m && !pop {
                match seq.get(k + 1) {
                    Some(&(j, _, true)) => return Some((i, j)),
                    _ => break,
                }
            }
        }
    }
    None
}

fn check_letters(w: &GroupoidWord, cb_only: bool) -> Result<(), RewriteError> {
    match word_validate(w) {
        WordVerdict::Ok => {}
        WordVerdict::ChainBreak { position } => return Err(RewriteError::ChainBreak(position)),
        WordVerdict::InvalidLetter { position, .. } => return Err(RewriteError::NotTypeIICB(position)),
    }
    if !cb_only {
        return Ok(());
    }
    for (i, l) in w.letters.iter().enumerate() {
        if let Some(link) = l.as_link() {
            if !link.is_type2_cb() {
                return Err(RewriteError::NotTypeIICB(i));
            }
        }
    }
    Ok(())
}

fn step(w: &mut GroupoidWord, log: &mut Vec<Move>, mv: Move) -> Result<(), RewriteError> {
    *w = apply_move(w, &mv)?;
    log.push(mv);
    Ok(())
}

/// Reduces a relator by cancellations and commutations inside maximal plateaus.
/// Trivial cancellation applies to links of any type; commutation only to type II
/// conic bundle links, so other letters that do not cancel leave the word stuck.
pub fn reduce_relation(w: &GroupoidWord) -> Result<Reduction, RewriteError> {
    if !w.is_relator() {
        return Err(RewriteError::NotARelator);
    }
    check_letters(w, false)?;
    let traces = fiber_traces(w);
    let mut moves = Vec::new();
    let mut cur = w.clone();
    let stuck = loop {
        cur = normalize_markers(&cur, &mut moves);
        if cur.link_count() == 0 {
            break !cur.is_empty();
        }
        if let Some(p) = (0..cur.len()).find(|&p| cancels(&cur, p)) {
            let fiber = fiber_key(&cur.letters[p]);
            step(&mut cur, &mut moves, Move::Cancel { position: p, fiber })?;
            continue;
        }
        let (i, j) = match pick_plateau(&cur) {
            Some(x) => x,
            None => break true,
        };
        let mut ok = true;
        for p in (i + 1..j).rev() {
            let depths = [cur.letters[p].depth(), cur.letters[p + 1].depth()];
            let mv = Move::Commute { position: p, depths };
            if step(&mut cur, &mut moves, mv).is_err() {
                ok = false;
                break;
            }
        }
        if !ok || !cancels(&cur, i) {
            break true;
        }
        let fiber = fiber_key(&cur.letters[i]);
        step(&mut cur, &mut moves, Move::Cancel { position: i, fiber })?;
    };
    Ok(Reduction {
        residual: cur,
        moves,
        traces,
        stuck,
    })
}

/// Moves links of depth ≥ `delta` ahead (in application order) of shallower links over
/// disjoint fibers. Links over a common fiber keep their order.
pub fn reorder_by_depth(w: &GroupoidWord, delta: usize) -> Result<(GroupoidWord, Vec<Move>), RewriteError> {
    check_letters(w, true)?;
    let mut moves = Vec::new();
    let mut cur = normalize_markers(w, &mut moves);
    loop {
        let mut changed = false;
        for p in 0..cur.len().saturating_sub(1) {
            let (a, b) = (&cur.letters[p], &cur.letters[p + 1]);
            if !(a.is_link() && b.is_link() && a.depth() < delta && b.depth() >= delta) {
                continue;
            }
            let disjoint = match (a.center(), b.center()) {
                (Some(x), Some(y)) => x.disjoint(y).map_err(|_| RewriteError::UndecidableCenters(p))?,
                _ => return Err(RewriteError::UndecidableCenters(p)),
            };
            if disjoint {
                let depths = [a.depth(), b.depth()];
                step(&mut cur, &mut moves, Move::Commute { position: p, depths })?;
                changed = true;
            }
        }
        if !changed {
            return Ok((cur, moves));
        }
    }
}
