//! Breadth-first search over Cayley graphs: open balls, exact word
//! lengths and shortest words, under an explicit state budget.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ballstore::{BallRecord, BallStore};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_BUDGET: usize = 10_000_000;

/// SHA-256 of a canonical group or wreath declaration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpecHash(pub [u8; 32]);

impl SpecHash {
    pub fn of(bytes: &[u8]) -> Self {
        SpecHash(Sha256::digest(bytes).into())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let v = hex::decode(s).map_err(|e| Error::Encoding(format!("spec hash: {e}")))?;
        let arr: [u8; 32] = v
            .try_into()
            .map_err(|_| Error::Encoding("spec hash must be 32 bytes".into()))?;
        Ok(SpecHash(arr))
    }
}

impl fmt::Debug for SpecHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpecHash({})", &self.to_hex()[..16])
    }
}

impl fmt::Display for SpecHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for SpecHash {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for SpecHash {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SpecHash::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// A group with a fixed symmetric generating set, viewed as its Cayley
/// graph with edges `x -> x·s`.
pub trait CayleyGraph: Sync {
    type Elem: Clone + Eq + Hash + Send + Sync + fmt::Debug;

    fn identity(&self) -> Self::Elem;

    /// Symmetric generating letters. The identity never appears.
    fn letters(&self) -> &[Self::Elem];

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    /// Right multiplication by `letters()[letter]`.
    fn step(&self, a: &Self::Elem, letter: usize) -> Self::Elem {
        self.mul(a, &self.letters()[letter])
    }

    /// Canonical serialization; byte order is the canonical element order.
    fn encode(&self, a: &Self::Elem) -> Vec<u8>;

    fn decode(&self, bytes: &[u8]) -> Result<Self::Elem>;

    fn spec_hash(&self) -> SpecHash;

    fn ball_in(&self, ex: &Explorer, r: &Rational) -> Result<Ball<Self::Elem>>
    where
        Self: Sized,
    {
        ex.bfs_ball(self, r)
    }

    fn length_in(&self, ex: &Explorer, a: &Self::Elem) -> Result<u32>
    where
        Self: Sized,
    {
        ex.bfs_path(self, a).map(|w| w.len() as u32)
    }

    /// Index of the letter inverse to `letter`.
    fn inverse_letter(&self, letter: usize) -> usize {
        let inv = self.inverse(&self.letters()[letter]);
        self.letters()
            .iter()
            .position(|l| *l == inv)
            .expect("generating letters are closed under inverses")
    }
}

/// An enumerated open ball `B(1, r)` in canonical order.
#[derive(Clone, Debug)]
pub struct Ball<E: Eq + Hash> {
    pub radius: Rational,
    elements: Vec<E>,
    lengths: Vec<u32>,
    index: HashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> Ball<E> {
    /// `entries` must already be sorted canonically.
    pub fn from_sorted(radius: Rational, entries: Vec<(E, u32)>) -> Self {
        let (elements, lengths): (Vec<E>, Vec<u32>) = entries.into_iter().unzip();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ball {
            radius,
            elements,
            lengths,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, u32)> {
        self.elements.iter().zip(self.lengths.iter().copied())
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }

    pub fn length_of(&self, e: &E) -> Option<u32> {
        self.index.get(e).map(|&i| self.lengths[i])
    }

    pub fn max_length(&self) -> u32 {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// Restriction to a smaller radius using the length table.
    pub fn restrict(&self, r: &Rational) -> Ball<E> {
        let entries = self
            .iter()
            .filter(|(_, l)| rational::lt(*l as u64, r))
            .map(|(e, l)| (e.clone(), l))
            .collect();
        Ball::from_sorted(*r, entries)
    }
}

/// Search configuration shared by every BFS-backed operation.
#[derive(Clone)]
pub struct Explorer {
    budget: usize,
    pool: Option<Arc<rayon::ThreadPool>>,
    store: Option<BallStore>,
}

impl Default for Explorer {
    fn default() -> Self {
        Explorer {
            budget: DEFAULT_BUDGET,
            pool: None,
            store: None,
        }
    }
}

impl fmt::Debug for Explorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Explorer")
            .field("budget", &self.budget)
            .field("workers", &self.workers())
            .field(
                "store",
                &self.store.as_ref().map(|s| s.root().to_path_buf()),
            )
            .finish()
    }
}

impl Explorer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// `workers <= 1` keeps frontier expansion on the calling thread.
    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        self.pool = if workers <= 1 {
            None
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            Some(Arc::new(pool))
        };
        Ok(self)
    }

    pub fn with_store(mut self, store: BallStore) -> Self {
        self.store = Some(store);
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn workers(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    pub fn store(&self) -> Option<&BallStore> {
        self.store.as_ref()
    }

    /// Open ball `{g : l(g) < r}` sorted by canonical encoding.
    pub fn ball<G: CayleyGraph>(&self, g: &G, r: &Rational) -> Result<Ball<G::Elem>> {
        rational::require_positive(r)?;
        g.ball_in(self, r)
    }

    pub fn growth<G: CayleyGraph>(&self, g: &G, r: &Rational) -> Result<usize> {
        self.ball(g, r).map(|b| b.len())
    }

    /// Exact word length.
    pub fn word_length<G: CayleyGraph>(&self, g: &G, a: &G::Elem) -> Result<u32> {
        g.length_in(self, a)
    }

    /// A minimal word (letter indices) evaluating to `a`.
    pub fn shortest_word<G: CayleyGraph>(&self, g: &G, a: &G::Elem) -> Result<Vec<usize>> {
        self.bfs_path(g, a)
    }

    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }

    /// Layered BFS from the identity, consulting the ball store first.
    pub fn bfs_ball<G: CayleyGraph>(&self, g: &G, r: &Rational) -> Result<Ball<G::Elem>> {
        if let Some(store) = &self.store {
            if let Some(rec) = store.load(&g.spec_hash(), r)? {
                let entries = rec
                    .encodings
                    .iter()
                    .zip(&rec.lengths)
                    .map(|(bytes, &l)| Ok((g.decode(bytes)?, l)))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Ball::from_sorted(*r, entries));
            }
        }
        let depth = rational::max_below(r);
        let mut visited: HashMap<G::Elem, u32> = HashMap::new();
        visited.insert(g.identity(), 0);
        let mut frontier = vec![g.identity()];
        let nl = g.letters().len();
        for d in 0..depth.max(0) as u32 {
            if frontier.is_empty() {
                break;
            }
            let expanded: Vec<G::Elem> = if self.pool.is_some() {
                self.install(|| {
                    frontier
                        .par_iter()
                        .flat_map_iter(|x| (0..nl).map(move |i| g.step(x, i)))
                        .collect()
                })
            } else {
                frontier
                    .iter()
                    .flat_map(|x| (0..nl).map(move |i| g.step(x, i)))
                    .collect()
            };
            let mut next = Vec::new();
            for y in expanded {
                if !visited.contains_key(&y) {
                    visited.insert(y.clone(), d + 1);
                    next.push(y);
                }
            }
            if visited.len() > self.budget {
                return Err(Error::Budget {
                    budget: self.budget,
                });
            }
            frontier = next;
        }
        let mut entries: Vec<(Vec<u8>, G::Elem, u32)> = visited
            .into_iter()
            .map(|(e, l)| (g.encode(&e), e, l))
            .collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        if let Some(store) = &self.store {
            let rec = BallRecord {
                spec_hash: g.spec_hash(),
                radius: *r,
                encodings: entries.iter().map(|e| e.0.clone()).collect(),
                lengths: entries.iter().map(|e| e.2).collect(),
            };
            store.store(&rec)?;
        }
        Ok(Ball::from_sorted(
            *r,
            entries.into_iter().map(|(_, e, l)| (e, l)).collect(),
        ))
    }

    /// Bidirectional BFS between the identity and `target`, expanding the
    /// smaller frontier one full layer at a time.
    pub fn bfs_path<G: CayleyGraph>(&self, g: &G, target: &G::Elem) -> Result<Vec<usize>> {
        let id = g.identity();
        if *target == id {
            return Ok(Vec::new());
        }
        const ROOT: usize = usize::MAX;
        // node -> (depth, letter that produced it from its parent)
        let mut fwd: HashMap<G::Elem, (u32, usize)> = HashMap::from([(id.clone(), (0, ROOT))]);
        let mut bwd: HashMap<G::Elem, (u32, usize)> = HashMap::from([(target.clone(), (0, ROOT))]);
        let mut ff = vec![id];
        let mut bf = vec![target.clone()];
        let mut fdepth = 0u32;
        let mut bdepth = 0u32;
        let nl = g.letters().len();
        let meet = loop {
            if ff.is_empty() || bf.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "{target:?} is not reachable from the identity"
                )));
            }
            let forward = ff.len() <= bf.len();
            let (frontier, own, other, depth) = if forward {
                (&mut ff, &mut fwd, &bwd, &mut fdepth)
            } else {
                (&mut bf, &mut bwd, &fwd, &mut bdepth)
            };
            let mut next = Vec::new();
            let mut best: Option<(u32, G::Elem)> = None;
            for x in frontier.iter() {
                for i in 0..nl {
                    let y = g.step(x, i);
                    if own.contains_key(&y) {
                        continue;
                    }
                    own.insert(y.clone(), (*depth + 1, i));
                    if let Some(&(od, _)) = other.get(&y) {
                        let total = *depth + 1 + od;
                        if best.as_ref().is_none_or(|(b, _)| total < *b) {
                            best = Some((total, y.clone()));
                        }
                    }
                    next.push(y);
                }
            }
            *depth += 1;
            *frontier = next;
            if let Some((_, m)) = best {
                break m;
            }
            if fwd.len() + bwd.len() > self.budget {
                return Err(Error::Budget {
                    budget: self.budget,
                });
            }
        };
        // identity -> meet
        let mut head = Vec::new();
        let mut cur = meet.clone();
        loop {
            let (_, letter) = fwd[&cur];
            if letter == ROOT {
                break;
            }
            head.push(letter);
            cur = g.step(&cur, g.inverse_letter(letter));
        }
        head.reverse();
        // meet -> target: bwd node y was reached as y = z·s from z nearer the target
        let mut cur = meet;
        loop {
            let (_, letter) = bwd[&cur];
            if letter == ROOT {
                break;
            }
            let inv = g.inverse_letter(letter);
            head.push(inv);
            cur = g.step(&cur, inv);
        }
        Ok(head)
    }
}
