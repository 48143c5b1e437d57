use std::collections::{HashSet, VecDeque};

use super::{r_components, GroupWindow};
use crate::cayley::{CayleyGraph, Explorer};
use crate::error::{Error, Result};
use crate::group::VirtuallyZStructure;
use crate::rational::{self, int, Rational};
use crate::wreath::WreathContext;

/// The subgroup generated by `B(1, r)` inside a locally finite subgroup, and
/// the partition of a window into its left cosets.
#[derive(Clone, Debug)]
pub struct CosetCover<E> {
    pub r: Rational,
    /// `B(1, r)` intersected with the subgroup.
    pub generators: Vec<E>,
    /// The generated subgroup, in canonical order.
    pub closure: Vec<E>,
    /// Coset index of every window point.
    pub coset_of: Vec<usize>,
    /// Window points grouped by coset, ordered by least point.
    pub cosets: Vec<Vec<usize>>,
    /// Largest word length in the closure.
    pub max_length: u32,
}

impl<E> CosetCover<E> {
    /// Whether every `r`-component of the window lies in a single coset.
    pub fn components_in_cosets<G: CayleyGraph<Elem = E>>(
        &self,
        window: &GroupWindow<'_, G>,
    ) -> Result<bool> {
        let all: Vec<usize> = (0..window.points().len()).collect();
        Ok(r_components(window, &all, &self.r)?
            .iter()
            .all(|c| c.iter().all(|&p| self.coset_of[p] == self.coset_of[c[0]])))
    }
}

/// Closes `B(1, r) ∩ S` under multiplication, where `S` is the subgroup
/// selected by `in_subgroup`, and partitions the window into left cosets
/// `xS_r`. The closure must stabilize within the explorer's budget.
pub fn coset_cover<G: CayleyGraph>(
    window: &GroupWindow<'_, G>,
    ex: &Explorer,
    in_subgroup: impl Fn(&G::Elem) -> bool,
    r: &Rational,
) -> Result<CosetCover<G::Elem>> {
    let g = window.group();
    let generators: Vec<G::Elem> = ex
        .ball(g, r)?
        .elements()
        .iter()
        .filter(|e| in_subgroup(e))
        .cloned()
        .collect();
    let mut seen: HashSet<G::Elem> = HashSet::from([g.identity()]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for s in &generators {
            let y = g.mul(&x, s);
            if seen.insert(y.clone()) {
                if seen.len() > ex.budget() {
                    return Err(Error::Budget {
                        budget: ex.budget(),
                    });
                }
                queue.push_back(y);
            }
        }
    }
    let mut closure: Vec<(Vec<u8>, G::Elem)> =
        seen.into_iter().map(|e| (g.encode(&e), e)).collect();
    closure.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let closure: Vec<G::Elem> = closure.into_iter().map(|(_, e)| e).collect();

    let mut max_length = 0;
    for e in &closure {
        max_length = max_length.max(window.length(e)?);
    }

    // a coset xS is named by the least encoding among its elements
    let mut keys: Vec<(Vec<u8>, usize)> = window
        .points()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let key = closure
                .iter()
                .map(|s| g.encode(&g.mul(x, s)))
                .min()
                .unwrap();
            (key, i)
        })
        .collect();
    keys.sort();
    let mut coset_of = vec![0; keys.len()];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    let mut last: Option<Vec<u8>> = None;
    for (key, i) in keys {
        if last.as_ref() != Some(&key) {
            cosets.push(Vec::new());
            last = Some(key);
        }
        coset_of[i] = cosets.len() - 1;
        cosets.last_mut().unwrap().push(i);
    }
    // renumber by least point
    cosets.iter_mut().for_each(|c| c.sort_unstable());
    let mut order: Vec<usize> = (0..cosets.len()).collect();
    order.sort_by_key(|&c| cosets[c][0]);
    let mut rank = vec![0; cosets.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    for c in &mut coset_of {
        *c = rank[*c];
    }
    let cosets = order
        .into_iter()
        .map(|c| std::mem::take(&mut cosets[c]))
        .collect();
    Ok(CosetCover {
        r: *r,
        generators,
        closure,
        coset_of,
        cosets,
        max_length,
    })
}

/// `(2r + 1)·γ_G(r)`: a 0-dimensional control function of the kernel of
/// `H ≀ G → G`.
pub fn kernel_control_bound(ex: &Explorer, ctx: &WreathContext, r: &Rational) -> Result<Rational> {
    rational::require_positive(r)?;
    let gamma = ex.growth(ctx.base(), r)?;
    Ok((int(2) * r + int(1)) * int(gamma as i64))
}

/// `L = 4Cn² + 2n + 2Cn`: the subgroup generated by `B(1, r)` of any
/// locally finite subgroup lies in `B(1, Lr)`.
pub fn vz_closure_constant(s: &VirtuallyZStructure) -> Result<Rational> {
    let c = s.distortion.ok_or_else(|| {
        Error::Precondition("the virtually-Z structure declares no distortion constant".into())
    })?;
    let n = int(s.index() as i64);
    Ok(int(4) * c * n * n + int(2) * n + int(2) * c * n)
}
