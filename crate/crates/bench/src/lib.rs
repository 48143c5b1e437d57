//! Shared fixtures for the criterion benches in `benches/`.

use wreathdim::{GroupElement, MarkedGroup, WreathContext, WreathElement};

pub fn lamplighter() -> WreathContext {
    WreathContext::lamplighter(2).expect("ℤ/2 ≀ ℤ is valid")
}

/// ℤ/2 ≀ ℤ² for the cube benches.
pub fn lamplighter_z2() -> WreathContext {
    let base = MarkedGroup::product(MarkedGroup::integers(), MarkedGroup::integers());
    WreathContext::new(MarkedGroup::cyclic(2).expect("modulus 2"), base).expect("valid wreath")
}

/// Lamps lit at `at` with the cursor back at the origin.
pub fn lamps(ctx: &WreathContext, at: &[i64]) -> WreathElement {
    let a = ctx.first_nontrivial_fiber().clone();
    at.iter()
        .map(|&p| ctx.bulb_element(&GroupElement::Int(p), &a))
        .fold(ctx.identity(), |acc, b| ctx.mul(&acc, &b))
}
