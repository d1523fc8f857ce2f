//! Ten (−1)-curves on a degree-5 del Pezzo conic bundle: four sections E1..E4 and six
//! vertical components Eij of the three singular fibers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IncidenceConfig {
    /// Ek meets Eij iff k ∈ {i,j}.
    A,
    /// Ek meets Eij iff k ∉ {i,j}.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TenCurveIncidence {
    pub config: IncidenceConfig,
    pub sections: Vec<String>,
    pub vertical: Vec<String>,
    /// Unordered pairs of meeting curves, each sorted, the list sorted.
    pub adjacency: Vec<[String; 2]>,
    /// The singular fibers as pairs of vertical components.
    pub fibers: Vec<[String; 2]>,
}

const PAIRS: [[usize; 2]; 6] = [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]];

fn sec(k: usize) -> String {
    format!("E{k}")
}

fn vert(p: [usize; 2]) -> String {
    format!("E{}{}", p[0], p[1])
}

fn complement(p: [usize; 2]) -> [usize; 2] {
    let v: Vec<usize> = (1..=4).filter(|x| !p.contains(x)).collect();
    [v[0], v[1]]
}

fn edge(a: String, b: String) -> [String; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub fn dp5_incidence(config: IncidenceConfig) -> TenCurveIncidence {
    let mut adj: BTreeSet<[String; 2]> = BTreeSet::new();
    for k in 1..=4 {
        for p in PAIRS {
            let meets = p.contains(&k) == (config == IncidenceConfig::A);
            if meets {
                adj.insert(edge(sec(k), vert(p)));
            }
        }
    }
    let mut fibers = Vec::new();
    for p in PAIRS {
        let c = complement(p);
        if p < c {
            adj.insert(edge(vert(p), vert(c)));
            fibers.push([vert(p), vert(c)]);
        }
    }
    TenCurveIncidence {
        config,
        sections: (1..=4).map(sec).collect(),
        vertical: PAIRS.iter().map(|&p| vert(p)).collect(),
        adjacency: adj.into_iter().collect(),
        fibers,
    }
}

impl TenCurveIncidence {
    pub fn meets(&self, a: &str, b: &str) -> bool {
        let e = edge(a.to_string(), b.to_string());
        self.adjacency.binary_search(&e).is_ok()
    }

    /// Curves meeting `c`, sorted.
    pub fn neighbours(&self, c: &str) -> Vec<String> {
        let mut v: Vec<String> = self
            .adjacency
            .iter()
            .filter_map(|[a, b]| {
                if a == c {
                    Some(b.clone())
                } else if b == c {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect();
        v.sort();
        v
    }

    /// Number of sections met by `c`.
    pub fn section_degree(&self, c: &str) -> usize {
        self.neighbours(c)
            .iter()
            .filter(|n| self.sections.contains(n))
            .count()
    }

    /// Number of vertical curves met by `c`.
    pub fn vertical_degree(&self, c: &str) -> usize {
        self.neighbours(c)
            .iter()
            .filter(|n| self.vertical.contains(n))
            .count()
    }

    /// Image under a permutation of the section indices (`perm[i-1]` is the image of i).
    pub fn relabel(&self, perm: [usize; 4]) -> TenCurveIncidence {
        let map = |s: &str| -> String {
            let digits: Vec<usize> = s[1..]
                .chars()
                .map(|c| perm[c.to_digit(10).unwrap() as usize - 1])
                .collect();
            match digits.as_slice() {
                [k] => sec(*k),
                [i, j] => vert([(*i).min(*j), (*i).max(*j)]),
                _ => unreachable!(),
            }
        };
        let mut adjacency: Vec<[String; 2]> =
            self.adjacency.iter().map(|[a, b]| edge(map(a), map(b))).collect();
        adjacency.sort();
        let mut fibers: Vec<[String; 2]> = self
            .fibers
            .iter()
            .map(|[a, b]| edge(map(a), map(b)))
            .collect();
        fibers.sort();
        TenCurveIncidence {
            config: self.config,
            sections: self.sections.clone(),
            vertical: self.vertical.clone(),
            adjacency,
            fibers,
        }
    }
}
