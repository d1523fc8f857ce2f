//! Seeded generator of relators built from trivial relations and four-link relations,
//! combined by conjugation, concatenation, rotation and inversion.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{commute_move, GroupoidWord, Letter};
use crate::exactfield::{FieldSpec, PolynomialOverField};
use crate::galois_orbits::{large_orbit, PointOrbit};
use crate::mfs_catalog::{FiberCenter, LinkType, MoriFiberSpaceModel, SarkisovLink};

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub max_len: usize,
    pub depths: Vec<usize>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            max_len: 40,
            depths: vec![1, 1, 2, 3, 5, 8, 15, 16, 17, 19],
        }
    }
}

fn pool_orbit(d: usize) -> PointOrbit {
    static POOL: OnceLock<Mutex<HashMap<usize, PointOrbit>>> = OnceLock::new();
    let pool = POOL.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(o) = pool.lock().unwrap().get(&d) {
        return o.clone();
    }
    let o = large_orbit(&FieldSpec::Rationals, d, false).expect("x^d-2 is irreducible");
    pool.lock().unwrap().insert(d, o.clone());
    o
}

fn primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| {
        let n = 20_000usize;
        let mut sieve = vec![true; n];
        let mut out = Vec::new();
        for i in 2..n {
            if sieve[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < n {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        out
    })
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    cfg: &'a FuzzConfig,
    fresh: usize,
}

impl Gen<'_> {
    fn next_id(&mut self) -> usize {
        self.fresh += 1;
        self.fresh
    }

    fn model(&mut self) -> MoriFiberSpaceModel {
        let n = self.rng.gen_range(0..4);
        let id = self.next_id();
        MoriFiberSpaceModel::hirzebruch(n).labeled(format!("Y{id}"))
    }

    /// A depth-d link over the fiber x^d = p for a fresh prime p.
    fn link(&mut self, from: &MoriFiberSpaceModel, to: &MoriFiberSpaceModel) -> SarkisovLink {
        let d = self.cfg.depths[self.rng.gen_range(0..self.cfg.depths.len())];
        let id = self.next_id();
        let p = primes()[id % primes().len()];
        let q = FieldSpec::Rationals;
        let center = PolynomialOverField::parse(&q, &format!("x^{d}-{p}")).expect("center parses");
        SarkisovLink::new(
            LinkType::II,
            from.clone(),
            to.clone(),
            Some(pool_orbit(d).with_tag(format!("s{id}"))),
            Some(pool_orbit(d).with_tag(format!("t{id}"))),
            Some(FiberCenter::Finite(center)),
        )
    }

    fn four_link(&mut self, at: &MoriFiberSpaceModel) -> Vec<Letter> {
        let rot = self.rng.gen_range(0..3);
        let (x0, x1, x2) = match rot {
            0 => (at.clone(), self.model(), self.model()),
            1 => (self.model(), at.clone(), self.model()),
            _ => (self.model(), self.model(), at.clone()),
        };
        let chi1 = self.link(&x0, &x1);
        let chi2 = self.link(&x1, &x2);
        let (chi3, chi4) = commute_move(&chi1, &chi2).expect("fresh centers are disjoint");
        let mut v: Vec<Letter> = [chi1, chi2, chi3, chi4].into_iter().map(Letter::link).collect();
        v.rotate_left(rot);
        if self.rng.gen_bool(0.5) {
            v = v.iter().rev().map(Letter::inverse).collect();
        }
        v
    }

    fn relator(&mut self, at: &MoriFiberSpaceModel, budget: usize) -> Vec<Letter> {
        let choice = if budget < 4 { 0 } else { self.rng.gen_range(0..5) };
        match choice {
            0 => {
                let y = self.model();
                let chi = self.link(at, &y);
                vec![Letter::link(chi.clone()), Letter::inv(chi)]
            }
            1 => self.four_link(at),
            2 => {
                let glen = self.rng.gen_range(1..=3).min((budget - 2) / 2);
                let mut g = Vec::new();
                let mut cur = at.clone();
                for _ in 0..glen {
                    let y = self.model();
                    let l = self.link(&cur, &y);
                    let letter = if self.rng.gen_bool(0.5) {
                        Letter::link(l)
                    } else {
                        Letter::inv(l.inverse())
                    };
                    cur = y;
                    g.push(letter);
                }
                let inner = self.relator(&cur, budget - 2 * glen);
                let mut v = g.clone();
                v.extend(inner);
                v.extend(g.iter().rev().map(Letter::inverse));
                v
            }
            3 => {
                let first = self.rng.gen_range(2..=budget - 2);
                let mut v = self.relator(at, first);
                let rest = budget - v.len();
                if rest >= 2 {
                    v.extend(self.relator(at, rest));
                }
                v
            }
            _ => {
                // αβ = γ for isomorphisms: a marker to a relabeled copy and back
                let id = self.next_id();
                let z = MoriFiberSpaceModel {
                    kind: at.kind.clone(),
                    label: Some(format!("Z{id}")),
                };
                let mut v = vec![Letter::iso(at.clone(), z.clone())];
                v.extend(self.relator(&z, budget - 2));
                v.push(Letter::iso(z, at.clone()));
                v
            }
        }
    }
}

/// A relator based at the Hirzebruch surface `F1@X`; the same seed gives the same word.
pub fn fuzz_relator(seed: u64, cfg: &FuzzConfig) -> GroupoidWord {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        cfg,
        fresh: 0,
    };
    let x = MoriFiberSpaceModel::hirzebruch(1).labeled("X");
    let letters = g.relator(&x, cfg.max_len.max(2));
    GroupoidWord {
        endpoints: [x.clone(), x],
        letters,
    }
}
