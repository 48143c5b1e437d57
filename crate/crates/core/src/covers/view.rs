use std::collections::HashMap;
use std::sync::Mutex;

use crate::cayley::{Ball, CayleyGraph, Explorer, SpecHash};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// A finite point set with an exact distance oracle. Points are `0..len()`.
pub trait MetricView: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn dist(&self, i: usize, j: usize) -> Result<Rational>;

    fn label(&self, i: usize) -> String {
        i.to_string()
    }

    /// Symmetry, identity of indiscernibles and the triangle inequality on
    /// every pair and triple.
    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        let mut d = vec![Rational::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = self.dist(i, j)?;
            }
        }
        for i in 0..n {
            for j in 0..n {
                let dij = d[i * n + j];
                if dij != d[j * n + i] || (dij == Rational::default()) != (i == j) {
                    return Err(Error::InvalidInput(format!(
                        "distance between {} and {} is not a metric value",
                        self.label(i),
                        self.label(j)
                    )));
                }
                for k in 0..n {
                    if d[i * n + k] > dij + d[j * n + k] {
                        return Err(Error::InvalidInput(format!(
                            "triangle inequality fails at {}, {}, {}",
                            self.label(i),
                            self.label(j),
                            self.label(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Integer points under the l₁ metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Points {
    pub points: Vec<Vec<i64>>,
}

impl L1Points {
    pub fn new(points: Vec<Vec<i64>>) -> Self {
        L1Points { points }
    }

    /// The interval `lo..=hi` of ℤ.
    pub fn interval(lo: i64, hi: i64) -> Self {
        L1Points::new((lo..=hi).map(|x| vec![x]).collect())
    }

    pub fn position(&self, p: &[i64]) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

impl MetricView for L1Points {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn dist(&self, i: usize, j: usize) -> Result<Rational> {
        let d: i64 = self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(int(d))
    }

    fn label(&self, i: usize) -> String {
        format!("{:?}", self.points[i])
    }
}

/// Finite set of group elements with the word metric `d(x, y) = l(x⁻¹y)`
/// of the ambient group.
pub struct GroupWindow<'a, G: CayleyGraph> {
    group: &'a G,
    ex: &'a Explorer,
    points: Vec<G::Elem>,
    table: Option<Ball<G::Elem>>,
    memo: Mutex<HashMap<G::Elem, u32>>,
    radius: Option<Rational>,
}

impl<'a, G: CayleyGraph> GroupWindow<'a, G> {
    /// Distances are looked up in a table or computed by BFS.
    pub fn new(group: &'a G, ex: &'a Explorer, points: Vec<G::Elem>) -> Self {
        GroupWindow {
            group,
            ex,
            points,
            table: None,
            memo: Mutex::new(HashMap::new()),
            radius: None,
        }
    }

    /// The elements of `B(1, radius)` accepted by `keep`, with a length
    /// table of `B(1, 2m + 1)` where `m` is the largest length in the
    /// window, so every distance is a lookup.
    pub fn ball(
        group: &'a G,
        ex: &'a Explorer,
        radius: &Rational,
        keep: impl Fn(&G::Elem) -> bool,
    ) -> Result<Self> {
        let ball = ex.ball(group, radius)?;
        let points: Vec<G::Elem> = ball
            .elements()
            .iter()
            .filter(|e| keep(e))
            .cloned()
            .collect();
        let m = points
            .iter()
            .map(|p| ball.length_of(p).unwrap())
            .max()
            .unwrap_or(0);
        let mut w = GroupWindow::new(group, ex, points);
        w.radius = Some(*radius);
        w.table = Some(ex.ball(group, &int(2 * m as i64 + 1))?);
        Ok(w)
    }

    pub fn group(&self) -> &G {
        self.group
    }

    pub fn points(&self) -> &[G::Elem] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &G::Elem {
        &self.points[i]
    }

    pub fn index_of(&self, e: &G::Elem) -> Option<usize> {
        self.points.iter().position(|p| p == e)
    }

    /// Radius of the ball the window was cut from, if any.
    pub fn radius(&self) -> Option<Rational> {
        self.radius
    }

    pub fn spec_hash(&self) -> SpecHash {
        self.group.spec_hash()
    }

    pub fn length(&self, e: &G::Elem) -> Result<u32> {
        if let Some(t) = &self.table {
            if let Some(l) = t.length_of(e) {
                return Ok(l);
            }
        }
        if let Some(&l) = self.memo.lock().unwrap().get(e) {
            return Ok(l);
        }
        let l = self.ex.word_length(self.group, e)?;
        self.memo.lock().unwrap().insert(e.clone(), l);
        Ok(l)
    }

    /// `l(x⁻¹y)` as an integer.
    pub fn distance(&self, x: &G::Elem, y: &G::Elem) -> Result<u32> {
        let q = self.group.mul(&self.group.inverse(x), y);
        self.length(&q)
    }

    /// Whether the window's distances all come from a precomputed table.
    pub fn is_tabulated(&self) -> bool {
        self.table.is_some()
    }
}

impl<G: CayleyGraph> MetricView for GroupWindow<'_, G> {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn dist(&self, i: usize, j: usize) -> Result<Rational> {
        self.distance(&self.points[i], &self.points[j])
            .map(|l| int(l as i64))
    }

    fn label(&self, i: usize) -> String {
        format!("{:?}", self.points[i])
    }
}
