use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Lattice, RCube};
use crate::cayley::{Explorer, SpecHash};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::rational::{self, int, Rational};
use crate::wreath::{WreathContext, WreathElement};

/// The bulb `x(j,i)` crossed by one lattice edge and the upper bound
/// `2·l(g(j,i)) + 1` on its length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub from: Vec<usize>,
    pub axis: usize,
    pub index: String,
    pub upper: u32,
}

/// For a vertex pair, the number of bulb indices where the images differ,
/// which bounds their distance from below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub l1: usize,
    pub lower: usize,
}

/// A `3r`-cube in the kernel `K` of `H ≀ G → G` built from `n·k` distinct
/// elements `g(j,i)` of `B_G(1, r)`.
#[derive(Clone, Debug)]
pub struct KernelCube {
    pub cube: RCube<WreathElement>,
    /// `g(j,i)` at `j·n + i`.
    pub indices: Vec<GroupElement>,
    pub index_lengths: Vec<u32>,
    pub u: GroupElement,
    pub edges: Vec<EdgeCheck>,
    pub pairs: Vec<PairCheck>,
    pub pairs_exhaustive: bool,
}

impl KernelCube {
    /// Every checked pair has `lower == l1`, so `Lip(f⁻¹) ≤ 1`.
    pub fn lip_inverse_at_most_one(&self) -> bool {
        self.pairs.iter().all(|p| p.lower >= p.l1)
    }

    pub fn max_edge_upper(&self) -> u32 {
        self.edges.iter().map(|e| e.upper).max().unwrap_or(0)
    }
}

const SAMPLED_PAIRS: usize = 2000;

/// Labels the origin by `1 ∈ K` and the edge from `x` to `x + e_i` by the
/// bulb `g(x_i, i)·u·g(x_i, i)⁻¹`, where `g(j,i)` are the first `n·k`
/// elements of `B_G(1, r)` in canonical order and `u` is the first
/// nontrivial element of `H`. Every edge is checked to cross one bulb of
/// length at most `2l(g) + 1 < 3r`. Vertex pairs are compared exhaustively
/// when `n·k ≤ 9`, otherwise on a seeded sample.
pub fn build_kernel_cube(
    ctx: &WreathContext,
    ex: &Explorer,
    n: usize,
    r: &Rational,
    k: usize,
    seed: u64,
) -> Result<KernelCube> {
    rational::require_positive(r)?;
    let lat = Lattice::new(n, k)?;
    let ball = ex.ball(ctx.base(), r)?;
    if n * k > ball.len() {
        return Err(Error::InvalidInput(format!(
            "n·k = {} exceeds γ({r}) = {}",
            n * k,
            ball.len()
        )));
    }
    let indices: Vec<GroupElement> = ball.elements()[..n * k].to_vec();
    let index_lengths: Vec<u32> = indices.iter().map(|g| ball.length_of(g).unwrap()).collect();
    let u = ctx.first_nontrivial_fiber().clone();
    let g = |j: usize, i: usize| &indices[j * n + i];

    let vertices: Vec<WreathElement> = (0..lat.size())
        .map(|v| {
            let x = lat.coords(v);
            let lamps: BTreeMap<GroupElement, GroupElement> = (0..n)
                .flat_map(|i| (0..x[i]).map(move |j| (i, j)))
                .map(|(i, j)| (g(j, i).clone(), u.clone()))
                .collect();
            WreathElement {
                lamps,
                cursor: ctx.base().identity(),
            }
        })
        .collect();

    let edge_r = int(3) * r;
    let mut edges = Vec::new();
    for (x, y, axis) in lat.edges() {
        let j = lat.coords(x)[axis];
        let q = ctx.mul(&ctx.inverse(&vertices[x]), &vertices[y]);
        if q != ctx.bulb_element(g(j, axis), &u) {
            return Err(Error::InvalidInput(format!(
                "edge {:?} along axis {axis} does not cross the bulb at {}",
                lat.coords(x),
                g(j, axis)
            )));
        }
        let upper = 2 * index_lengths[j * n + axis] + 1;
        if int(upper as i64) >= edge_r {
            return Err(Error::InvalidInput(format!(
                "edge bound {upper} is not below 3r = {edge_r}"
            )));
        }
        edges.push(EdgeCheck {
            from: lat.coords(x),
            axis,
            index: g(j, axis).to_string(),
            upper,
        });
    }
    let cube = RCube {
        lattice: lat,
        r: edge_r,
        vertices,
    };

    let pair = |a: usize, b: usize| {
        let q = ctx.mul(&ctx.inverse(&cube.vertices[a]), &cube.vertices[b]);
        PairCheck {
            a: lat.coords(a),
            b: lat.coords(b),
            l1: lat.l1(a, b),
            lower: q.lamps.len(),
        }
    };
    let pairs_exhaustive = n * k <= 9;
    let pairs = if pairs_exhaustive {
        (0..lat.size())
            .flat_map(|a| (a + 1..lat.size()).map(move |b| (a, b)))
            .map(|(a, b)| pair(a, b))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_PAIRS)
            .map(|_| {
                let a = rng.gen_range(0..lat.size());
                let b = rng.gen_range(0..lat.size());
                pair(a, b)
            })
            .collect()
    };
    Ok(KernelCube {
        cube,
        indices,
        index_lengths,
        u,
        edges,
        pairs,
        pairs_exhaustive,
    })
}

/// Machine-checkable certificate that every (n−1)-dimensional control
/// function of `K` satisfies `D(3nr) ≥ k` with `k = ⌊γ(r)/n⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec_hash: SpecHash,
    pub base_spec_hash: SpecHash,
    pub n: usize,
    #[serde(with = "rational::as_string")]
    pub r: Rational,
    pub gamma: usize,
    pub k: usize,
    #[serde(with = "rational::as_string")]
    pub cube_r: Rational,
    pub u: String,
    /// `g(j,i)` by row `j`.
    pub index_table: Vec<Vec<String>>,
    pub edges: Vec<EdgeCheck>,
    pub pairs: Vec<PairCheck>,
    pub pairs_exhaustive: bool,
    pub lip_inverse_at_most_one: bool,
    /// `3nr` at which the bound applies.
    #[serde(with = "rational::as_string")]
    pub scale: Rational,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.lip_inverse_at_most_one && self.edges.iter().all(|e| int(e.upper as i64) < self.cube_r)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

pub fn growth_lower_bound_certificate(
    ctx: &WreathContext,
    ex: &Explorer,
    n: usize,
    r: &Rational,
    seed: u64,
) -> Result<(usize, KernelCube, Certificate)> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "cube dimension must be positive".into(),
        ));
    }
    let gamma = ex.growth(ctx.base(), r)?;
    let k = gamma / n;
    let cube = build_kernel_cube(ctx, ex, n, r, k, seed)?;
    let cert = Certificate {
        spec_hash: crate::cayley::CayleyGraph::spec_hash(ctx),
        base_spec_hash: crate::cayley::CayleyGraph::spec_hash(ctx.base()),
        n,
        r: *r,
        gamma,
        k,
        cube_r: cube.cube.r,
        u: cube.u.to_string(),
        index_table: cube
            .indices
            .chunks(n)
            .map(|row| row.iter().map(|g| g.to_string()).collect())
            .collect(),
        edges: cube.edges.clone(),
        pairs: cube.pairs.clone(),
        pairs_exhaustive: cube.pairs_exhaustive,
        lip_inverse_at_most_one: cube.lip_inverse_at_most_one(),
        scale: int(3 * n as i64) * r,
    };
    Ok((k, cube, cert))
}
