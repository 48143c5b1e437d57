//! The wreath product `H ≀ G`: pairs (lamp configuration, cursor) with
//! `(f₁,b₁)·(f₂,b₂) = (f₁·(b₁f₂), b₁b₂)` where `(b f)(γ) = f(b⁻¹γ)`.
//!
//! Marked by `H∖{1}` (lamp letters acting at the cursor) followed by the
//! marked generators of `G` (cursor moves).

mod bulbs;
mod packed;

use std::collections::BTreeMap;
use std::fmt;

pub use bulbs::{
    bulb_decompose, bulb_lower_bound, bulb_word_construct, Bulb, BulbProduct, ConstructedWord,
};
pub use packed::PackedLamplighter;

use crate::cayley::{Ball, CayleyGraph, Explorer, SpecHash};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupKind, MarkedGroup};
use crate::rational::{self, Rational};

/// An element `(f, b)`; `lamps` holds exactly the support of `f`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub lamps: BTreeMap<GroupElement, GroupElement>,
    pub cursor: GroupElement,
}

impl WreathElement {
    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.lamps.keys()
    }
}

impl fmt::Debug for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (g, h)) in self.lamps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}↦{h}")?;
        }
        write!(f, "}} @ {}", self.cursor)
    }
}

/// What a generating letter of `H ≀ G` does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter<'a> {
    Lamp(&'a GroupElement),
    Move(&'a GroupElement),
}

#[derive(Clone, Debug)]
pub struct WreathContext {
    fiber: MarkedGroup,
    base: MarkedGroup,
    fiber_elements: Vec<GroupElement>,
    lamp_letters: usize,
    letters: Vec<WreathElement>,
    hash: SpecHash,
    packed: bool,
}

impl WreathContext {
    /// `fiber` must be finite and nontrivial.
    pub fn new(fiber: MarkedGroup, base: MarkedGroup) -> Result<Self> {
        if !fiber.is_finite() {
            return Err(Error::Unsupported(
                "the fiber group H must be finite to use H∖{1} as generators".into(),
            ));
        }
        let fiber_elements = fiber.elements()?;
        let hid = fiber.identity();
        let nontrivial: Vec<GroupElement> = fiber_elements
            .iter()
            .filter(|h| **h != hid)
            .cloned()
            .collect();
        if nontrivial.is_empty() {
            return Err(Error::InvalidInput(
                "the fiber group H must be nontrivial".into(),
            ));
        }
        let gid = base.identity();
        let mut letters: Vec<WreathElement> = nontrivial
            .iter()
            .map(|h| WreathElement {
                lamps: BTreeMap::from([(gid.clone(), h.clone())]),
                cursor: gid.clone(),
            })
            .collect();
        letters.extend(base.letters().iter().map(|s| WreathElement {
            lamps: BTreeMap::new(),
            cursor: s.clone(),
        }));
        let packed = matches!(fiber.kind(), GroupKind::Cyclic { modulus: 2 })
            && matches!(base.kind(), GroupKind::Integers)
            && base.letters() == [GroupElement::Int(1), GroupElement::Int(-1)];
        let hash = SpecHash::of(
            format!(
                "wreath(fiber={},base={})",
                fiber.canonical_spec(),
                base.canonical_spec()
            )
            .as_bytes(),
        );
        Ok(WreathContext {
            fiber,
            base,
            fiber_elements,
            lamp_letters: nontrivial.len(),
            letters,
            hash,
            packed,
        })
    }

    /// The lamplighter group ℤ/n ≀ ℤ.
    pub fn lamplighter(n: u64) -> Result<Self> {
        Self::new(MarkedGroup::cyclic(n)?, MarkedGroup::integers())
    }

    pub fn fiber(&self) -> &MarkedGroup {
        &self.fiber
    }

    pub fn base(&self) -> &MarkedGroup {
        &self.base
    }

    /// The marking `H∖{1} ∪ gens(G)` as elements, lamp letters first.
    pub fn generators(&self) -> &[WreathElement] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> Letter<'_> {
        if i < self.lamp_letters {
            Letter::Lamp(self.letters[i].lamps.values().next().unwrap())
        } else {
            Letter::Move(&self.letters[i].cursor)
        }
    }

    pub fn lamp_letter_count(&self) -> usize {
        self.lamp_letters
    }

    /// Letter index of the lamp letter `h ∈ H∖{1}`.
    pub fn lamp_letter(&self, h: &GroupElement) -> Option<usize> {
        (0..self.lamp_letters).find(|&i| self.letter(i) == Letter::Lamp(h))
    }

    /// Letter index of the wreath letter moving the cursor by base letter `i`.
    pub fn move_letter(&self, base_letter: usize) -> usize {
        self.lamp_letters + base_letter
    }

    /// First nonidentity element of `H` in canonical order.
    pub fn first_nontrivial_fiber(&self) -> &GroupElement {
        self.letters[0].lamps.values().next().unwrap()
    }

    pub fn uses_packed_search(&self) -> bool {
        self.packed
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement {
            lamps: BTreeMap::new(),
            cursor: self.base.identity(),
        }
    }

    pub fn is_kernel(&self, w: &WreathElement) -> bool {
        w.cursor == self.base.identity()
    }

    /// `π(f, b) = (1, b)`.
    pub fn project(&self, w: &WreathElement) -> WreathElement {
        WreathElement {
            lamps: BTreeMap::new(),
            cursor: w.cursor.clone(),
        }
    }

    pub fn embed_base(&self, g: &GroupElement) -> WreathElement {
        WreathElement {
            lamps: BTreeMap::new(),
            cursor: g.clone(),
        }
    }

    /// The `(g, a)`-bulb `g·a·g⁻¹`.
    pub fn bulb_element(&self, g: &GroupElement, a: &GroupElement) -> WreathElement {
        let mut lamps = BTreeMap::new();
        if *a != self.fiber.identity() {
            lamps.insert(g.clone(), a.clone());
        }
        WreathElement {
            lamps,
            cursor: self.base.identity(),
        }
    }

    pub fn validate(&self, w: &WreathElement) -> Result<()> {
        self.base.validate(&w.cursor)?;
        let hid = self.fiber.identity();
        for (g, h) in &w.lamps {
            self.base.validate(g)?;
            self.fiber.validate(h)?;
            if *h == hid {
                return Err(Error::Encoding(format!("lamp at {g} holds the identity")));
            }
        }
        Ok(())
    }

    /// Validated semidirect-product multiplication.
    pub fn multiply(&self, x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.mul(x, y))
    }

    pub fn mul(&self, x: &WreathElement, y: &WreathElement) -> WreathElement {
        let mut lamps = x.lamps.clone();
        for (g, v) in &y.lamps {
            let at = self.base.mul(&x.cursor, g);
            self.toggle(&mut lamps, at, v);
        }
        WreathElement {
            lamps,
            cursor: self.base.mul(&x.cursor, &y.cursor),
        }
    }

    /// `lamps[at] ← lamps[at]·v`, pruning identities.
    fn toggle(
        &self,
        lamps: &mut BTreeMap<GroupElement, GroupElement>,
        at: GroupElement,
        v: &GroupElement,
    ) {
        let hid = self.fiber.identity();
        let cur = lamps.get(&at).cloned().unwrap_or_else(|| hid.clone());
        let new = self.fiber.mul(&cur, v);
        if new == hid {
            lamps.remove(&at);
        } else {
            lamps.insert(at, new);
        }
    }

    pub fn inverse(&self, x: &WreathElement) -> WreathElement {
        let binv = self.base.inverse(&x.cursor);
        let lamps = x
            .lamps
            .iter()
            .map(|(g, v)| (self.base.mul(&binv, g), self.fiber.inverse(v)))
            .collect();
        WreathElement {
            lamps,
            cursor: binv,
        }
    }

    pub fn evaluate(&self, word: &[usize]) -> WreathElement {
        word.iter()
            .fold(self.identity(), |acc, &i| CayleyGraph::step(self, &acc, i))
    }

    /// Inverse word: reversed, each letter inverted.
    pub fn invert_word(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().map(|&i| self.inverse_letter(i)).collect()
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = word
            .iter()
            .map(|&i| match self.letter(i) {
                Letter::Lamp(h) => format!("[{h}]"),
                Letter::Move(g) => format!("<{g}>"),
            })
            .collect();
        parts.join(" ")
    }

    fn fiber_id(&self, h: &GroupElement) -> u32 {
        self.fiber_elements
            .binary_search(h)
            .expect("lamp value lies in H") as u32
    }

    /// `cursor ‖ u32 count ‖ (index ‖ u32 H-id)*`, big-endian, lamps in
    /// canonical index order; the H-id is the position in canonical `H` order.
    pub fn encode(&self, w: &WreathElement) -> Vec<u8> {
        let mut out = Vec::new();
        w.cursor.encode_into(&mut out);
        out.extend_from_slice(&(w.lamps.len() as u32).to_be_bytes());
        for (g, h) in &w.lamps {
            g.encode_into(&mut out);
            out.extend_from_slice(&self.fiber_id(h).to_be_bytes());
        }
        out
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<WreathElement> {
        let (cursor, mut rest) = self.base.decode_prefix(bytes)?;
        let take4 = |r: &mut &[u8]| -> Result<u32> {
            if r.len() < 4 {
                return Err(Error::Encoding("truncated wreath encoding".into()));
            }
            let v = u32::from_be_bytes(r[..4].try_into().unwrap());
            *r = &r[4..];
            Ok(v)
        };
        let count = take4(&mut rest)?;
        let mut lamps = BTreeMap::new();
        let mut prev: Option<GroupElement> = None;
        for _ in 0..count {
            let (g, r) = self.base.decode_prefix(rest)?;
            rest = r;
            let id = take4(&mut rest)? as usize;
            let h = self
                .fiber_elements
                .get(id)
                .ok_or_else(|| Error::Encoding(format!("H-id {id} out of range")))?
                .clone();
            if prev.as_ref().is_some_and(|p| *p >= g) {
                return Err(Error::Encoding("lamp indices not strictly sorted".into()));
            }
            prev = Some(g.clone());
            lamps.insert(g, h);
        }
        if !rest.is_empty() {
            return Err(Error::Encoding(format!("{} trailing bytes", rest.len())));
        }
        let w = WreathElement { lamps, cursor };
        self.validate(&w)?;
        Ok(w)
    }

    /// Ball of the kernel `K ∩ B(1, r)`.
    pub fn kernel_ball(&self, ex: &Explorer, r: &Rational) -> Result<Vec<(WreathElement, u32)>> {
        let ball = ex.ball(self, r)?;
        Ok(ball
            .iter()
            .filter(|(w, _)| self.is_kernel(w))
            .map(|(w, l)| (w.clone(), l))
            .collect())
    }

    /// Largest |position| touched by `w` when the base is ℤ.
    fn packed_extent(&self, w: &WreathElement) -> Option<i64> {
        let pos = |g: &GroupElement| match g {
            GroupElement::Int(v) => Some(v.abs()),
            _ => None,
        };
        let mut m = pos(&w.cursor)?;
        for g in w.lamps.keys() {
            m = m.max(pos(g)?);
        }
        Some(m)
    }
}

impl CayleyGraph for WreathContext {
    type Elem = WreathElement;

    fn identity(&self) -> WreathElement {
        WreathContext::identity(self)
    }

    fn letters(&self) -> &[WreathElement] {
        &self.letters
    }

    fn mul(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        WreathContext::mul(self, a, b)
    }

    fn inverse(&self, a: &WreathElement) -> WreathElement {
        WreathContext::inverse(self, a)
    }

    fn step(&self, a: &WreathElement, letter: usize) -> WreathElement {
        let mut out = a.clone();
        if letter < self.lamp_letters {
            let h = self.letters[letter].lamps.values().next().unwrap();
            self.toggle(&mut out.lamps, a.cursor.clone(), h);
        } else {
            out.cursor = self.base.mul(&a.cursor, &self.letters[letter].cursor);
        }
        out
    }

    fn encode(&self, a: &WreathElement) -> Vec<u8> {
        WreathContext::encode(self, a)
    }

    fn decode(&self, bytes: &[u8]) -> Result<WreathElement> {
        WreathContext::decode(self, bytes)
    }

    fn spec_hash(&self) -> SpecHash {
        self.hash
    }

    fn inverse_letter(&self, letter: usize) -> usize {
        if letter < self.lamp_letters {
            let h = self.letters[letter].lamps.values().next().unwrap();
            self.lamp_letter(&self.fiber.inverse(h)).unwrap()
        } else {
            self.lamp_letters + self.base.inverse_letter(letter - self.lamp_letters)
        }
    }

    /// Uses the bit-packed search for ℤ/2 ≀ ℤ whenever every state of the
    /// BFS stays inside the packed window.
    fn ball_in(&self, ex: &Explorer, r: &Rational) -> Result<Ball<WreathElement>> {
        if self.packed && rational::max_below(r) <= packed::WINDOW {
            let p = PackedLamplighter::new(self.hash);
            let ball = ex.bfs_ball(&p, r)?;
            let entries = ball.iter().map(|(e, l)| (p.unpack(e), l)).collect();
            return Ok(Ball::from_sorted(*r, entries));
        }
        ex.bfs_ball(self, r)
    }

    fn length_in(&self, ex: &Explorer, a: &WreathElement) -> Result<u32> {
        if self.packed {
            if let Some(extent) = self.packed_extent(a) {
                // visit the leftmost lamp, then the rightmost, then the cursor
                let upper = a.lamps.len() as i64 + 5 * extent;
                if extent + upper <= packed::WINDOW {
                    let p = PackedLamplighter::new(self.hash);
                    let target = p.pack(a).expect("extent checked");
                    return ex.bfs_path(&p, &target).map(|w| w.len() as u32);
                }
            }
        }
        ex.bfs_path(self, a).map(|w| w.len() as u32)
    }
}
