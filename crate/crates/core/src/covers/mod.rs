//! Finite covers of windows in metric spaces: r-components, Lebesgue
//! numbers and measured control values.
//!
//! Windows are finite. A diameter measured on a window can only
//! under-estimate the diameter in the ambient space, so measured values are
//! used to check upper bounds, never to claim lower bounds.

mod combine;
mod coset;
mod view;

#[cfg(test)]
mod tests;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cayley::SpecHash;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use combine::{combine_covers, interval_cover, weakly_dominates, CombinedCover};
pub use coset::{coset_cover, kernel_control_bound, vz_closure_constant, CosetCover};
pub use view::{GroupWindow, L1Points, MetricView};

/// A family of subsets `X_0..X_n` of a window, as sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    parts: Vec<Vec<usize>>,
}

impl Cover {
    /// Fails unless the parts cover all `points` indices.
    pub fn new(points: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; points];
        let mut parts = parts;
        for part in &mut parts {
            part.sort_unstable();
            part.dedup();
            for &p in part.iter() {
                if p >= points {
                    return Err(Error::InvalidInput(format!(
                        "point {p} outside a window of {points} points"
                    )));
                }
                seen[p] = true;
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("point {p} lies in no part")));
        }
        Ok(Cover { parts })
    }

    /// Cover given by a part label per point.
    pub fn from_labels(labels: &[usize], parts: usize) -> Result<Self> {
        let mut out = vec![Vec::new(); parts];
        for (p, &l) in labels.iter().enumerate() {
            let part = out.get_mut(l).ok_or_else(|| {
                Error::InvalidInput(format!("label {l} out of range for {parts} parts"))
            })?;
            part.push(p);
        }
        Cover::new(labels.len(), out)
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Appends empty parts up to `n`.
    pub fn padded(mut self, n: usize) -> Self {
        while self.parts.len() < n {
            self.parts.push(Vec::new());
        }
        self
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Classes of `subset` under chains with consecutive distances `< r`.
/// Chains stay inside `subset`. Classes are sorted, and ordered by their
/// least point.
pub fn r_components<V: MetricView + ?Sized>(
    view: &V,
    subset: &[usize],
    r: &Rational,
) -> Result<Vec<Vec<usize>>> {
    rational::require_positive(r)?;
    let mut uf = UnionFind::new(subset.len());
    for a in 0..subset.len() {
        for b in a + 1..subset.len() {
            if view.dist(subset[a], subset[b])? < *r {
                uf.union(a, b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; subset.len()];
    let mut order: Vec<usize> = (0..subset.len()).collect();
    order.sort_by_key(|&i| subset[i]);
    for i in order {
        let root = uf.find(i);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[root]].push(subset[i]);
    }
    Ok(classes)
}

/// Largest pairwise distance in `set`; zero when it has fewer than two points.
pub fn diameter<V: MetricView + ?Sized>(view: &V, set: &[usize]) -> Result<Rational> {
    let mut d = Rational::default();
    for (a, &x) in set.iter().enumerate() {
        for &y in &set[a + 1..] {
            d = d.max(view.dist(x, y)?);
        }
    }
    Ok(d)
}

/// Outcome of a Lebesgue-number check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LebesgueVerdict {
    pub ok: bool,
    /// A point whose open ball lies in no part.
    pub witness: Option<usize>,
}

/// Points of the window at distance `< r` from `x`.
pub fn open_ball<V: MetricView + ?Sized>(view: &V, x: usize, r: &Rational) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for y in 0..view.len() {
        if view.dist(x, y)? < *r {
            out.push(y);
        }
    }
    Ok(out)
}

/// Whether every open `r`-ball of the window lies in some part.
pub fn lebesgue_ok<V: MetricView + ?Sized>(
    view: &V,
    cover: &Cover,
    r: &Rational,
) -> Result<LebesgueVerdict> {
    rational::require_positive(r)?;
    for x in 0..view.len() {
        let ball = open_ball(view, x, r)?;
        let inside = cover
            .parts
            .iter()
            .any(|part| ball.iter().all(|y| part.binary_search(y).is_ok()));
        if !inside {
            return Ok(LebesgueVerdict {
                ok: false,
                witness: Some(x),
            });
        }
    }
    Ok(LebesgueVerdict {
        ok: true,
        witness: None,
    })
}

/// Per part, the largest diameter of one of its `r`-components.
pub fn component_diameters<V: MetricView + ?Sized>(
    view: &V,
    cover: &Cover,
    r: &Rational,
) -> Result<Vec<Rational>> {
    cover
        .parts
        .iter()
        .map(|part| {
            let mut d = Rational::default();
            for class in r_components(view, part, r)? {
                d = d.max(diameter(view, &class)?);
            }
            Ok(d)
        })
        .collect()
}

/// Where a measurement was taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowMeta {
    pub spec_hash: Option<SpecHash>,
    pub description: String,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlEntry {
    #[serde(with = "rational::as_string")]
    pub r: Rational,
    #[serde(with = "rational::vec_as_string")]
    pub diameters: Vec<Rational>,
    #[serde(with = "rational::as_string")]
    pub max_diameter: Rational,
    pub lebesgue: LebesgueVerdict,
}

/// Measured control values of one cover at several scales.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlSample {
    pub window: WindowMeta,
    pub part_sizes: Vec<usize>,
    pub entries: Vec<ControlEntry>,
}

impl ControlSample {
    pub fn measure<V: MetricView + ?Sized>(
        view: &V,
        window: WindowMeta,
        cover: &Cover,
        radii: &[Rational],
    ) -> Result<Self> {
        let entries = radii
            .iter()
            .map(|r| {
                let diameters = component_diameters(view, cover, r)?;
                let max_diameter = diameters.iter().copied().max().unwrap_or_default();
                Ok(ControlEntry {
                    r: *r,
                    diameters,
                    max_diameter,
                    lebesgue: lebesgue_ok(view, cover, r)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ControlSample {
            window,
            part_sizes: cover.part_sizes(),
            entries,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// One row per (r, part).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record([
            "spec_hash",
            "window",
            "points",
            "r",
            "part",
            "part_size",
            "diameter",
            "lebesgue",
        ])
        .map_err(csv_err)?;
        let hash = self
            .window
            .spec_hash
            .map(|h| h.to_hex())
            .unwrap_or_default();
        for e in &self.entries {
            for (i, d) in e.diameters.iter().enumerate() {
                w.write_record([
                    hash.clone(),
                    self.window.description.clone(),
                    self.window.points.to_string(),
                    e.r.to_string(),
                    i.to_string(),
                    self.part_sizes[i].to_string(),
                    d.to_string(),
                    e.lebesgue.ok.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
