//! r-cubes: maps `{0..k}ⁿ → X` with every lattice edge of length `< r`,
//! and the lattice covering lemma that turns them into lower bounds on
//! control functions.

mod kernel;
mod lattice;


use serde::{Deserialize, Serialize};

use crate::covers::{component_diameters, lebesgue_ok, Cover, MetricView};
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

pub use kernel::{
    build_kernel_cube, growth_lower_bound_certificate, Certificate, EdgeCheck, KernelCube,
    PairCheck,
};
pub use lattice::{
    lattice_exhaustive, lattice_lemma_witness, lattice_random, LatticeOutcome, LatticeSummary,
    LatticeWitness,
};

/// The grid `{0..k}ⁿ` with the l₁ metric. Points are indexed
/// lexicographically, first coordinate most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub n: usize,
    pub k: usize,
}

impl Lattice {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "lattice dimension must be positive".into(),
            ));
        }
        (k + 1)
            .checked_pow(n as u32)
            .filter(|&s| s <= 1 << 32)
            .ok_or_else(|| Error::InvalidInput(format!("lattice {{0..{k}}}^{n} is too large")))?;
        Ok(Lattice { n, k })
    }

    pub fn size(&self) -> usize {
        (self.k + 1).pow(self.n as u32)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut x = vec![0; self.n];
        for c in x.iter_mut().rev() {
            *c = idx % (self.k + 1);
            idx /= self.k + 1;
        }
        x
    }

    pub fn index(&self, x: &[usize]) -> usize {
        x.iter().fold(0, |acc, &c| acc * (self.k + 1) + c)
    }

    pub fn l1(&self, a: usize, b: usize) -> usize {
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .map(|(x, y)| x.abs_diff(y))
            .sum()
    }

    /// `x + e_axis`, if inside the grid.
    pub fn step(&self, idx: usize, axis: usize) -> Option<usize> {
        let x = self.coords(idx);
        (x[axis] < self.k).then(|| idx + (self.k + 1).pow((self.n - 1 - axis) as u32))
    }

    /// All edges `(x, x + e_axis, axis)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size() {
            for axis in 0..self.n {
                if let Some(y) = self.step(x, axis) {
                    out.push((x, y, axis));
                }
            }
        }
        out
    }

    /// Points at l₁ distance at most `radius`.
    pub fn closed_ball(&self, idx: usize, radius: usize) -> Vec<usize> {
        (0..self.size())
            .filter(|&y| self.l1(idx, y) <= radius)
            .collect()
    }
}

/// A map from a lattice into some point type whose edges all have length
/// `< r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RCube<T> {
    pub lattice: Lattice,
    #[serde(with = "rational::as_string")]
    pub r: Rational,
    /// Vertex images in lattice index order.
    pub vertices: Vec<T>,
}

impl<T> RCube<T> {
    /// Checks the edge condition with `dist`.
    pub fn new(
        lattice: Lattice,
        r: Rational,
        vertices: Vec<T>,
        dist: impl Fn(&T, &T) -> Result<Rational>,
    ) -> Result<Self> {
        rational::require_positive(&r)?;
        if vertices.len() != lattice.size() {
            return Err(Error::InvalidInput(format!(
                "{} vertices for a lattice of {} points",
                vertices.len(),
                lattice.size()
            )));
        }
        for (x, y, _) in lattice.edges() {
            let d = dist(&vertices[x], &vertices[y])?;
            if d >= r {
                return Err(Error::InvalidInput(format!(
                    "edge {:?} -> {:?} has length {d}, not below {r}",
                    lattice.coords(x),
                    lattice.coords(y)
                )));
            }
        }
        Ok(RCube {
            lattice,
            r,
            vertices,
        })
    }

    pub fn vertex(&self, x: &[usize]) -> &T {
        &self.vertices[self.lattice.index(x)]
    }
}

/// Two lattice points far apart whose images are close.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub part: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// `dist(f(a), f(b))`.
    #[serde(with = "rational::as_string")]
    pub d: Rational,
    /// Largest diameter of an `n·r`-component of the cover.
    #[serde(with = "rational::as_string")]
    pub bound: Rational,
}

/// For a cover of `X` by at most `n` parts with Lebesgue number at least
/// `n·r` and an `r`-cube `cube` in `X`, finds lattice points `a`, `b` with
/// some coordinate differing by `k` and `dist(f(a), f(b))` bounded by the
/// largest `n·r`-component diameter.
pub fn cube_obstruction<V: MetricView + ?Sized>(
    view: &V,
    cover: &Cover,
    cube: &RCube<usize>,
) -> Result<Obstruction> {
    let lat = cube.lattice;
    if cover.parts().len() > lat.n {
        return Err(Error::InvalidInput(format!(
            "{} parts for an {}-dimensional cube",
            cover.parts().len(),
            lat.n
        )));
    }
    if let Some(&v) = cube.vertices.iter().find(|&&v| v >= view.len()) {
        return Err(Error::InvalidInput(format!(
            "vertex {v} outside the window"
        )));
    }
    for (x, y, _) in lat.edges() {
        if view.dist(cube.vertices[x], cube.vertices[y])? >= cube.r {
            return Err(Error::InvalidInput(format!(
                "not an r-cube at edge {:?} -> {:?}",
                lat.coords(x),
                lat.coords(y)
            )));
        }
    }
    let nr = int(lat.n as i64) * cube.r;
    if let Some(x) = lebesgue_ok(view, cover, &nr)?.witness {
        return Err(Error::Precondition(format!(
            "the open {nr}-ball about {} lies in no part",
            view.label(x)
        )));
    }
    let cover = cover.clone().padded(lat.n);
    let pulled: Vec<Vec<usize>> = cover
        .parts()
        .iter()
        .map(|part| {
            (0..lat.size())
                .filter(|&x| part.binary_search(&cube.vertices[x]).is_ok())
                .collect()
        })
        .collect();
    let pulled = Cover::new(lat.size(), pulled)?;
    let w = match lattice_lemma_witness(lat, &pulled)? {
        LatticeOutcome::Witness(w) => w,
        other => {
            return Err(Error::InvalidInput(format!(
                "pulled-back cover has no lattice witness: {other:?}"
            )))
        }
    };
    let d = view.dist(
        cube.vertices[lat.index(&w.a)],
        cube.vertices[lat.index(&w.b)],
    )?;
    let bound = component_diameters(view, &cover, &nr)?
        .into_iter()
        .max()
        .unwrap_or_default();
    Ok(Obstruction {
        part: w.part,
        a: w.a,
        b: w.b,
        d,
        bound,
    })
}

/// `⌊D · Lip(f⁻¹)⌋`: the largest side `k` of a verified cube compatible
/// with a control value `D`.
pub fn cube_size_bound(d: &Rational, lip_inv: &Rational) -> i64 {
    rational::floor_to_i64(&(d * lip_inv))
}
