use super::{Cover, GroupWindow, L1Points};
use crate::cayley::CayleyGraph;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A cover of a window of `G` pulled back from a cover of a retract `I`.
#[derive(Clone, Debug)]
pub struct CombinedCover {
    pub cover: Cover,
    /// Control value of the `I`-cover at `r`.
    pub d: Rational,
    /// `d + D⁰_K(r + 2d)`.
    pub predicted: Rational,
}

/// Pulls back `i_cover` along the retraction `project: G → I` onto the
/// window and predicts its control value `d + D⁰_K(r + 2d)`, where `d` is
/// the control value of `i_cover` at `r` and `d0k` is a 0-dimensional
/// control function of the kernel.
///
/// `i_points[j]` is the element of `G` for point `j` of the `I`-cover.
/// Fails with an invalid-input error unless `project` is idempotent, fixes
/// `I`, maps letters to letters or the identity, respects multiplication
/// along every window edge, and lands inside `i_points`.
pub fn combine_covers<G: CayleyGraph>(
    window: &GroupWindow<'_, G>,
    project: impl Fn(&G::Elem) -> G::Elem,
    i_points: &[G::Elem],
    i_cover: &Cover,
    d: &Rational,
    d0k: impl Fn(&Rational) -> Result<Rational>,
    r: &Rational,
) -> Result<CombinedCover> {
    let g = window.group();
    let bad = |msg: String| Err(Error::InvalidInput(msg));
    for p in i_points {
        if project(p) != *p {
            return bad(format!(
                "{p:?} lies in I but is not fixed by the retraction"
            ));
        }
    }
    let letter_images: Vec<G::Elem> = g.letters().iter().map(&project).collect();
    for (s, ps) in g.letters().iter().zip(&letter_images) {
        if *ps != g.identity() && !g.letters().contains(ps) {
            return bad(format!(
                "letter {s:?} projects to {ps:?}, which is not a letter"
            ));
        }
    }
    let mut labels = Vec::with_capacity(window.points().len());
    for x in window.points() {
        let px = project(x);
        if project(&px) != px {
            return bad(format!("projection is not idempotent at {x:?}"));
        }
        for (i, ps) in letter_images.iter().enumerate() {
            if project(&g.step(x, i)) != g.mul(&px, ps) {
                return bad(format!("projection is not a homomorphism at {x:?}"));
            }
        }
        let Some(j) = i_points.iter().position(|p| *p == px) else {
            return bad(format!("{x:?} projects outside the window of I"));
        };
        labels.push(j);
    }
    let parts = i_cover
        .parts()
        .iter()
        .map(|part| {
            (0..labels.len())
                .filter(|&x| part.binary_search(&labels[x]).is_ok())
                .collect()
        })
        .collect();
    let cover = Cover::new(labels.len(), parts)?;
    let predicted = d + d0k(&(r + Rational::from_integer(2) * d))?;
    Ok(CombinedCover {
        cover,
        d: *d,
        predicted,
    })
}

/// Two-part cover of the interval `lo..=hi`: consecutive blocks of length
/// `block` alternate between the parts, each widened by `pad` on both sides.
/// Every open `(pad + 1)`-ball lies in the part of its centre's block.
pub fn interval_cover(lo: i64, hi: i64, block: i64, pad: i64) -> Result<(L1Points, Cover)> {
    if lo > hi || block < 1 || pad < 0 {
        return Err(Error::InvalidInput(format!(
            "interval cover needs lo ≤ hi, block ≥ 1, pad ≥ 0; got {lo}, {hi}, {block}, {pad}"
        )));
    }
    let points = L1Points::interval(lo, hi);
    let mut parts = vec![Vec::new(), Vec::new()];
    for x in lo..=hi {
        let mut near: Vec<i64> = ((x - pad)..=(x + pad))
            .map(|y| (y - lo).div_euclid(block) % 2)
            .collect();
        near.sort_unstable();
        near.dedup();
        for part in near {
            parts[part.rem_euclid(2) as usize].push((x - lo) as usize);
        }
    }
    let cover = Cover::new(points.points.len(), parts)?;
    Ok((points, cover))
}

/// Whether `g(t) ≤ λ·f(λt + C) + C` at every sample `t`. Only the sampled
/// range is checked.
pub fn weakly_dominates(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    lambda: f64,
    c: f64,
    samples: &[f64],
) -> Result<bool> {
    if !(lambda >= 1.0 && c >= 0.0) {
        return Err(Error::Precondition(format!(
            "weak domination needs λ ≥ 1 and C ≥ 0, got λ = {lambda}, C = {c}"
        )));
    }
    Ok(samples
        .iter()
        .all(|&t| g(t) <= lambda * f(lambda * t + c) + c))
}
