//! Transitive subgroups of Sym₄ and elements exchanging the three pairings of {1,2,3,4}.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// One-line notation on {0,1,2,3}: i maps to self.0[i].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm(pub [usize; 4]);

impl Perm {
    pub const ID: Perm = Perm([0, 1, 2, 3]);

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(std::array::from_fn(|i| self.0[other.0[i]]))
    }

    pub fn inverse(&self) -> Perm {
        let mut v = [0; 4];
        for i in 0..4 {
            v[self.0[i]] = i;
        }
        Perm(v)
    }

    /// Cycle notation on 1..4, e.g. `(13)(24)`; `id` for the identity.
    pub fn cycles(&self) -> String {
        let mut seen = [false; 4];
        let mut out = String::new();
        for s in 0..4 {
            if seen[s] || self.0[s] == s {
                continue;
            }
            out.push('(');
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                out.push_str(&(i + 1).to_string());
                i = self.0[i];
            }
            out.push(')');
        }
        if out.is_empty() {
            "id".into()
        } else {
            out
        }
    }

    pub fn from_cycles(s: &str) -> Option<Perm> {
        let mut v = [0, 1, 2, 3];
        if s == "id" {
            return Some(Perm(v));
        }
        for cyc in s.split(')').filter(|c| !c.is_empty()) {
            let digits: Vec<usize> = cyc
                .strip_prefix('(')?
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize - 1))
                .collect::<Option<_>>()?;
            if digits.iter().any(|&d| d > 3) {
                return None;
            }
            for w in 0..digits.len() {
                v[digits[w]] = digits[(w + 1) % digits.len()];
            }
        }
        Some(Perm(v))
    }

    fn image(&self, set: &[usize; 2]) -> [usize; 2] {
        let mut v = [self.0[set[0]], self.0[set[1]]];
        v.sort();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub pairing: String,
    pub witness: String,
    /// Every element of the subgroup performing the exchange.
    pub all: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sym4Class {
    pub name: String,
    pub order: usize,
    /// Number of subgroups in the conjugacy class.
    pub conjugates: usize,
    pub elements: Vec<String>,
    pub witnesses: Vec<Witness>,
}

const PAIRINGS: [([usize; 2], [usize; 2]); 3] = [([0, 1], [2, 3]), ([0, 3], [1, 2]), ([0, 2], [1, 3])];

fn all_perms() -> Vec<Perm> {
    super::matching::permutations(4)
        .into_iter()
        .map(|v| Perm([v[0], v[1], v[2], v[3]]))
        .collect()
}

fn closure(gens: &[Perm]) -> BTreeSet<Perm> {
    let mut g: BTreeSet<Perm> = BTreeSet::from([Perm::ID]);
    let mut frontier = vec![Perm::ID];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = s.compose(&x);
            if g.insert(y) {
                frontier.push(y);
            }
        }
    }
    g
}

fn transitive(g: &BTreeSet<Perm>) -> bool {
    let orbit: BTreeSet<usize> = g.iter().map(|p| p.0[0]).collect();
    orbit.len() == 4
}

fn conjugate(g: &BTreeSet<Perm>, by: &Perm) -> BTreeSet<Perm> {
    let inv = by.inverse();
    g.iter().map(|h| by.compose(h).compose(&inv)).collect()
}

fn class_name(g: &BTreeSet<Perm>) -> &'static str {
    match g.len() {
        24 => "S4",
        12 => "A4",
        8 => "D8",
        4 if g.iter().all(|p| p.compose(p) == Perm::ID) => "V4",
        4 => "Z4",
        _ => "other",
    }
}

/// Prefers (13)(24), then (1234), then the greatest element in one-line notation.
fn pick_witness(cands: &[Perm]) -> Perm {
    let double = Perm::from_cycles("(13)(24)").unwrap();
    let four = Perm::from_cycles("(1234)").unwrap();
    if cands.contains(&double) {
        double
    } else if cands.contains(&four) {
        four
    } else {
        *cands.iter().max().unwrap()
    }
}

/// The transitive subgroups of Sym₄ up to conjugacy, largest first, each with exchange
/// witnesses for {1,2}↔{3,4}, {1,4}↔{2,3} and {1,3}↔{2,4}.
pub fn transitive_sym4_audit() -> Vec<Sym4Class> {
    let perms = all_perms();
    let mut subgroups: BTreeSet<BTreeSet<Perm>> = BTreeSet::new();
    for a in &perms {
        for b in &perms {
            let g = closure(&[*a, *b]);
            if transitive(&g) {
                subgroups.insert(g);
            }
        }
    }
    let mut classes: Vec<Vec<BTreeSet<Perm>>> = Vec::new();
    for g in subgroups {
        match classes
            .iter_mut()
            .find(|c| perms.iter().any(|x| conjugate(&c[0], x) == g))
        {
            Some(c) => c.push(g),
            None => classes.push(vec![g]),
        }
    }
    let four = Perm::from_cycles("(1234)").unwrap();
    let mut out: Vec<Sym4Class> = classes
        .into_iter()
        .map(|members| {
            let rep = members
                .iter()
                .find(|g| g.contains(&four))
                .or_else(|| members.iter().min())
                .unwrap()
                .clone();
            let witnesses = PAIRINGS
                .iter()
                .map(|(a, b)| {
                    let cands: Vec<Perm> = rep.iter().copied().filter(|p| p.image(a) == *b).collect();
                    let show = |s: &[usize; 2]| format!("{{{},{}}}", s[0] + 1, s[1] + 1);
                    Witness {
                        pairing: format!("{}<->{}", show(a), show(b)),
                        witness: pick_witness(&cands).cycles(),
                        all: cands.iter().map(Perm::cycles).collect(),
                    }
                })
                .collect();
            Sym4Class {
                name: class_name(&rep).into(),
                order: rep.len(),
                conjugates: members.len(),
                elements: rep.iter().map(Perm::cycles).collect(),
                witnesses,
            }
        })
        .collect();
    let rank = |n: &str| ["S4", "A4", "D8", "V4", "Z4"].iter().position(|x| *x == n);
    out.sort_by_key(|c| rank(&c.name));
    out
}
