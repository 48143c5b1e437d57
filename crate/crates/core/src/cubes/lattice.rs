use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Lattice;
use crate::cayley::Explorer;
use crate::covers::Cover;
use crate::error::{Error, Result};

/// Two points of one 2-component of part `i` whose `i`-th coordinates are
/// `0` and `k`. Parts and axes are numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeWitness {
    pub part: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LatticeOutcome {
    Witness(LatticeWitness),
    /// The open `(n+1)`-ball about `point` lies in no part.
    HypothesisFails {
        point: Vec<usize>,
    },
    /// The hypothesis holds but no witness exists, contradicting the lemma.
    NoWitness,
}

/// Membership table `[part][point]`.
fn table(lat: Lattice, parts: &[Vec<usize>]) -> Vec<Vec<bool>> {
    parts
        .iter()
        .map(|p| {
            let mut row = vec![false; lat.size()];
            p.iter().for_each(|&x| row[x] = true);
            row
        })
        .collect()
}

struct Geometry {
    lat: Lattice,
    coords: Vec<Vec<usize>>,
    balls: Vec<Vec<usize>>,
    neighbours: Vec<Vec<usize>>,
}

impl Geometry {
    fn new(lat: Lattice) -> Self {
        let coords = (0..lat.size()).map(|x| lat.coords(x)).collect();
        let balls = (0..lat.size()).map(|x| lat.closed_ball(x, lat.n)).collect();
        let neighbours = (0..lat.size()).map(|x| lat.closed_ball(x, 1)).collect();
        Geometry {
            lat,
            coords,
            balls,
            neighbours,
        }
    }

    fn outcome(&self, member: &[Vec<bool>]) -> LatticeOutcome {
        let lat = self.lat;
        for (x, ball) in self.balls.iter().enumerate() {
            if !member.iter().any(|row| ball.iter().all(|&y| row[y])) {
                return LatticeOutcome::HypothesisFails {
                    point: self.coords[x].clone(),
                };
            }
        }
        for (i, row) in member.iter().enumerate().take(lat.n) {
            let mut comp = vec![usize::MAX; lat.size()];
            let mut best: Option<(usize, usize)> = None;
            for start in 0..lat.size() {
                if !row[start] || comp[start] != usize::MAX {
                    continue;
                }
                let mut stack = vec![start];
                let mut members = Vec::new();
                comp[start] = start;
                while let Some(x) = stack.pop() {
                    members.push(x);
                    for &y in &self.neighbours[x] {
                        if row[y] && comp[y] == usize::MAX {
                            comp[y] = start;
                            stack.push(y);
                        }
                    }
                }
                members.sort_unstable();
                'pairs: for (s, &a) in members.iter().enumerate() {
                    for &b in &members[s + 1..] {
                        if self.coords[a][i].abs_diff(self.coords[b][i]) == lat.k {
                            if best.is_none_or(|p| (a, b) < p) {
                                best = Some((a, b));
                            }
                            break 'pairs;
                        }
                    }
                }
            }
            if let Some((a, b)) = best {
                return LatticeOutcome::Witness(LatticeWitness {
                    part: i,
                    a: self.coords[a].clone(),
                    b: self.coords[b].clone(),
                });
            }
        }
        LatticeOutcome::NoWitness
    }
}

/// Checks the lattice covering lemma on one cover of `{0..k}ⁿ` by at most
/// `n` parts: if every open `(n+1)`-ball lies in some part, some part `i`
/// has a 2-component containing points with `i`-th coordinates `0` and `k`.
/// Returns the least such witness in (part, a, b) order.
pub fn lattice_lemma_witness(lat: Lattice, cover: &Cover) -> Result<LatticeOutcome> {
    if cover.parts().len() > lat.n {
        return Err(Error::InvalidInput(format!(
            "{} parts for an {}-dimensional lattice",
            cover.parts().len(),
            lat.n
        )));
    }
    let cover = Cover::new(lat.size(), cover.parts().to_vec())?.padded(lat.n);
    Ok(Geometry::new(lat).outcome(&table(lat, cover.parts())))
}

/// Aggregate verdict of a search over many covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub lattice: Lattice,
    pub mode: String,
    pub covers: u64,
    pub hypothesis_holds: u64,
    pub witnesses: u64,
    /// Covers satisfying the hypothesis without a witness, as per-point part
    /// masks; the least few are kept.
    pub counterexamples: Vec<Vec<u32>>,
}

impl LatticeSummary {
    pub fn passed(&self) -> bool {
        self.witnesses == self.hypothesis_holds && self.counterexamples.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    covers: u64,
    holds: u64,
    witnesses: u64,
    bad: Vec<Vec<u32>>,
}

const KEEP: usize = 8;

impl Tally {
    fn record(mut self, geo: &Geometry, masks: Vec<u32>) -> Self {
        let member: Vec<Vec<bool>> = (0..geo.lat.n)
            .map(|i| masks.iter().map(|m| m >> i & 1 == 1).collect())
            .collect();
        self.covers += 1;
        match geo.outcome(&member) {
            LatticeOutcome::Witness(_) => {
                self.holds += 1;
                self.witnesses += 1;
            }
            LatticeOutcome::NoWitness => {
                self.holds += 1;
                self.bad.push(masks);
            }
            LatticeOutcome::HypothesisFails { .. } => {}
        }
        self
    }

    fn merge(mut self, other: Tally) -> Self {
        self.covers += other.covers;
        self.holds += other.holds;
        self.witnesses += other.witnesses;
        self.bad.extend(other.bad);
        self.bad.sort();
        self.bad.truncate(KEEP);
        self
    }

    fn finish(self, lat: Lattice, mode: &str) -> LatticeSummary {
        LatticeSummary {
            lattice: lat,
            mode: mode.into(),
            covers: self.covers,
            hypothesis_holds: self.holds,
            witnesses: self.witnesses,
            counterexamples: self.bad,
        }
    }
}

fn run<F>(ex: &Explorer, total: u64, lat: Lattice, mode: &str, masks: F) -> LatticeSummary
where
    F: Fn(u64) -> Vec<u32> + Sync,
{
    let geo = Geometry::new(lat);
    let tally = if ex.workers() > 1 {
        ex.install(|| {
            (0..total)
                .into_par_iter()
                .fold(Tally::default, |t, c| t.record(&geo, masks(c)))
                .reduce(Tally::default, Tally::merge)
        })
    } else {
        (0..total).fold(Tally::default(), |t, c| t.record(&geo, masks(c)))
    };
    tally.merge(Tally::default()).finish(lat, mode)
}

/// Every cover of the lattice by `n` possibly overlapping parts: each point
/// goes to a nonempty subset of parts, `(2ⁿ − 1)^((k+1)ⁿ)` covers in all.
pub fn lattice_exhaustive(ex: &Explorer, lat: Lattice) -> Result<LatticeSummary> {
    let choices = (1u64 << lat.n) - 1;
    let total = choices
        .checked_pow(lat.size() as u32)
        .filter(|&t| t <= ex.budget() as u64)
        .ok_or(Error::Budget {
            budget: ex.budget(),
        })?;
    Ok(run(ex, total, lat, "exhaustive", |mut c| {
        (0..lat.size())
            .map(|_| {
                let m = (c % choices) as u32 + 1;
                c /= choices;
                m
            })
            .collect()
    }))
}

/// Seeded random covers that satisfy the hypothesis by construction: every
/// point plants its closed `n`-ball into a random part, then each point
/// joins each other part with probability 1/4.
pub fn lattice_random(ex: &Explorer, lat: Lattice, samples: u64, seed: u64) -> LatticeSummary {
    let balls: Vec<Vec<usize>> = (0..lat.size()).map(|x| lat.closed_ball(x, lat.n)).collect();
    run(ex, samples, lat, "random", |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c);
        let mut masks = vec![0u32; lat.size()];
        for ball in &balls {
            let part = rng.gen_range(0..lat.n);
            ball.iter().for_each(|&y| masks[y] |= 1 << part);
        }
        for m in &mut masks {
            for part in 0..lat.n {
                if rng.gen_ratio(1, 4) {
                    *m |= 1 << part;
                }
            }
        }
        masks
    })
}
