//! Bulbs `g·a·g⁻¹` and the bulb normal form of kernel elements.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Letter, WreathContext, WreathElement};
use crate::cayley::Explorer;
use crate::error::{Error, Result};
use crate::group::{GroupElement, VirtuallyZStructure};

/// The `(index, value)`-bulb, `value ∈ H∖{1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bulb {
    pub index: GroupElement,
    pub value: GroupElement,
}

/// Product of bulbs with pairwise distinct indices, kept in canonical
/// index order. Bulbs at distinct indices commute.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BulbProduct {
    bulbs: Vec<Bulb>,
}

impl BulbProduct {
    /// Multiplies bulbs in the given order, merging equal indices
    /// (`(g,a)·(g,b) = (g,ab)`) and dropping any that cancel.
    pub fn new(ctx: &WreathContext, bulbs: impl IntoIterator<Item = Bulb>) -> Result<Self> {
        let hid = ctx.fiber().identity();
        let mut acc: BTreeMap<GroupElement, GroupElement> = BTreeMap::new();
        for b in bulbs {
            ctx.base().validate(&b.index)?;
            ctx.fiber().validate(&b.value)?;
            if b.value == hid {
                return Err(Error::InvalidInput(format!(
                    "bulb at {} has trivial value",
                    b.index
                )));
            }
            let cur = acc.remove(&b.index).unwrap_or_else(|| hid.clone());
            let v = ctx.fiber().mul(&cur, &b.value);
            if v != hid {
                acc.insert(b.index, v);
            }
        }
        Ok(BulbProduct {
            bulbs: acc
                .into_iter()
                .map(|(index, value)| Bulb { index, value })
                .collect(),
        })
    }

    /// Normal form of a kernel element: one bulb per lit lamp.
    pub fn from_element(ctx: &WreathContext, w: &WreathElement) -> Result<Self> {
        if !ctx.is_kernel(w) {
            return Err(Error::InvalidInput(format!("{w} is not in the kernel")));
        }
        Ok(BulbProduct {
            bulbs: w
                .lamps
                .iter()
                .map(|(g, h)| Bulb {
                    index: g.clone(),
                    value: h.clone(),
                })
                .collect(),
        })
    }

    pub fn to_element(&self, ctx: &WreathContext) -> WreathElement {
        WreathElement {
            lamps: self
                .bulbs
                .iter()
                .map(|b| (b.index.clone(), b.value.clone()))
                .collect(),
            cursor: ctx.base().identity(),
        }
    }

    pub fn bulbs(&self) -> &[Bulb] {
        &self.bulbs
    }

    pub fn len(&self) -> usize {
        self.bulbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bulbs.is_empty()
    }
}

/// Lower bound on word length: a product of bulbs at `n > 1` distinct
/// indices has length at least `n`. Returns `n`.
pub fn bulb_lower_bound(p: &BulbProduct) -> usize {
    p.len()
}

/// Rewrites `x₁a₁x₂a₂…x_ka_k·z` as `∏ (x₁…x_j)·a_j·(x₁…x_j)⁻¹ · (x₁…x_k z)`.
/// Returns the bulbs (indexed by prefix products of the cursor moves) and
/// the residual cursor.
pub fn bulb_decompose(ctx: &WreathContext, word: &[usize]) -> Result<(BulbProduct, GroupElement)> {
    let mut prefix = ctx.base().identity();
    let mut bulbs = Vec::new();
    for &i in word {
        if i >= ctx.generators().len() {
            return Err(Error::InvalidInput(format!(
                "letter index {i} out of range"
            )));
        }
        match ctx.letter(i) {
            Letter::Lamp(h) => bulbs.push(Bulb {
                index: prefix.clone(),
                value: h.clone(),
            }),
            Letter::Move(s) => prefix = ctx.base().mul(&prefix, s),
        }
    }
    Ok((BulbProduct::new(ctx, bulbs)?, prefix))
}

/// An explicit word for a bulb product together with its certified bound.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructedWord {
    pub word: Vec<usize>,
    /// `n·(k + 2 + 4·max|e|)`.
    pub bound: u64,
}

impl ConstructedWord {
    pub fn letters(&self) -> usize {
        self.word.len()
    }
}

/// Builds the word `g·t^{e₁}a₁t^{e₂−e₁}a₂…a_k t^{−e_k}·g⁻¹` for each coset
/// group `g = g_i`, groups in declared order, exponents increasing.
pub fn bulb_word_construct(
    ctx: &WreathContext,
    ex: &Explorer,
    vz: &VirtuallyZStructure,
    p: &BulbProduct,
) -> Result<ConstructedWord> {
    let base = ctx.base();
    let n = vz.index();
    let mut groups: Vec<Vec<(i64, &GroupElement)>> = vec![Vec::new(); n];
    let mut max_e = 0u64;
    for b in p.bulbs() {
        let (i, e) = vz.decompose(base, &b.index)?;
        groups[i as usize - 1].push((e, &b.value));
        max_e = max_e.max(e.unsigned_abs());
    }
    let to_ctx =
        |w: Vec<usize>| -> Vec<usize> { w.into_iter().map(|l| ctx.move_letter(l)).collect() };
    let t_word = to_ctx(ex.shortest_word(base, &vz.t)?);
    let t_inv = ctx.invert_word(&t_word);
    let power = |e: i64, out: &mut Vec<usize>| {
        let w = if e >= 0 { &t_word } else { &t_inv };
        for _ in 0..e.unsigned_abs() {
            out.extend_from_slice(w);
        }
    };
    let mut word = Vec::new();
    for (i, group) in groups.iter_mut().enumerate() {
        if group.is_empty() {
            continue;
        }
        group.sort_by_key(|(e, _)| *e);
        let rep = to_ctx(ex.shortest_word(base, &vz.coset_reps[i])?);
        word.extend_from_slice(&rep);
        let mut at = 0i64;
        for &(e, a) in group.iter() {
            power(e - at, &mut word);
            word.push(
                ctx.lamp_letter(a)
                    .expect("bulb values are nontrivial elements of H"),
            );
            at = e;
        }
        power(-at, &mut word);
        word.extend(ctx.invert_word(&rep));
    }
    if ctx.evaluate(&word) != p.to_element(ctx) {
        return Err(Error::Structure(
            "constructed word does not evaluate to the bulb product".into(),
        ));
    }
    let bound = n as u64 * (p.len() as u64 + 2 + 4 * max_e);
    Ok(ConstructedWord { word, bound })
}

impl WreathContext {
    /// Word length of a kernel element given as bulbs.
    pub fn bulb_product_length(&self, ex: &Explorer, p: &BulbProduct) -> Result<u32> {
        ex.word_length(self, &p.to_element(self))
    }

    /// `bulb_decompose` of a minimal word for `w`.
    pub fn normal_form(
        &self,
        ex: &Explorer,
        w: &WreathElement,
    ) -> Result<(BulbProduct, GroupElement)> {
        let word = ex.shortest_word(self, w)?;
        bulb_decompose(self, &word)
    }

    /// Letter count of `word` as elements of `G` only.
    pub fn move_count(&self, word: &[usize]) -> usize {
        word.iter()
            .filter(|&&i| matches!(self.letter(i), Letter::Move(_)))
            .count()
    }
}
