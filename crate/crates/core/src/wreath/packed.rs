//! ℤ/2 ≀ ℤ with lamp configurations packed into a `u128` window.

use std::collections::BTreeMap;

use super::WreathElement;
use crate::cayley::{CayleyGraph, SpecHash};
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Positions `-WINDOW..=WINDOW` are representable.
pub const WINDOW: i64 = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Packed {
    /// Bit `p + WINDOW` is the lamp at position `p`.
    bits: u128,
    cursor: i8,
}

/// Letters in the same order as the general ℤ/2 ≀ ℤ context: `a, t, t⁻¹`.
/// Canonical encoding and spec hash are those of the general context, so
/// results are interchangeable.
#[derive(Clone, Debug)]
pub struct PackedLamplighter {
    hash: SpecHash,
    letters: [Packed; 3],
}

fn shift(bits: u128, by: i64) -> u128 {
    if by >= 0 {
        let out = bits << by;
        debug_assert_eq!(out >> by, bits, "lamp left the packed window");
        out
    } else {
        let out = bits >> -by;
        debug_assert_eq!(out << -by, bits, "lamp left the packed window");
        out
    }
}

impl PackedLamplighter {
    pub fn new(hash: SpecHash) -> Self {
        PackedLamplighter {
            hash,
            letters: [
                Packed {
                    bits: 1 << WINDOW,
                    cursor: 0,
                },
                Packed { bits: 0, cursor: 1 },
                Packed {
                    bits: 0,
                    cursor: -1,
                },
            ],
        }
    }

    pub fn pack(&self, w: &WreathElement) -> Option<Packed> {
        let pos = |g: &GroupElement| match g {
            GroupElement::Int(v) if v.abs() <= WINDOW => Some(*v),
            _ => None,
        };
        let mut bits = 0u128;
        for (g, h) in &w.lamps {
            if *h != GroupElement::Residue(1) {
                return None;
            }
            bits |= 1 << (pos(g)? + WINDOW);
        }
        Some(Packed {
            bits,
            cursor: pos(&w.cursor)? as i8,
        })
    }

    pub fn unpack(&self, p: &Packed) -> WreathElement {
        let mut lamps = BTreeMap::new();
        let mut bits = p.bits;
        while bits != 0 {
            let b = bits.trailing_zeros() as i64;
            lamps.insert(GroupElement::Int(b - WINDOW), GroupElement::Residue(1));
            bits &= bits - 1;
        }
        WreathElement {
            lamps,
            cursor: GroupElement::Int(p.cursor as i64),
        }
    }
}

impl CayleyGraph for PackedLamplighter {
    type Elem = Packed;

    fn identity(&self) -> Packed {
        Packed { bits: 0, cursor: 0 }
    }

    fn letters(&self) -> &[Packed] {
        &self.letters
    }

    fn mul(&self, a: &Packed, b: &Packed) -> Packed {
        let cursor = a.cursor as i64 + b.cursor as i64;
        debug_assert!(cursor.abs() <= WINDOW, "cursor left the packed window");
        Packed {
            bits: a.bits ^ shift(b.bits, a.cursor as i64),
            cursor: cursor as i8,
        }
    }

    fn inverse(&self, a: &Packed) -> Packed {
        Packed {
            bits: shift(a.bits, -(a.cursor as i64)),
            cursor: -a.cursor,
        }
    }

    fn step(&self, a: &Packed, letter: usize) -> Packed {
        match letter {
            0 => Packed {
                bits: a.bits ^ (1 << (a.cursor as i64 + WINDOW)),
                cursor: a.cursor,
            },
            1 => Packed {
                bits: a.bits,
                cursor: a.cursor + 1,
            },
            _ => Packed {
                bits: a.bits,
                cursor: a.cursor - 1,
            },
        }
    }

    fn inverse_letter(&self, letter: usize) -> usize {
        [0, 2, 1][letter]
    }

    /// Same bytes as the general context: H-id of the nontrivial element is 1.
    fn encode(&self, a: &Packed) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * a.bits.count_ones() as usize);
        GroupElement::Int(a.cursor as i64).encode_into(&mut out);
        out.extend_from_slice(&a.bits.count_ones().to_be_bytes());
        let mut bits = a.bits;
        while bits != 0 {
            let b = bits.trailing_zeros() as i64;
            GroupElement::Int(b - WINDOW).encode_into(&mut out);
            out.extend_from_slice(&1u32.to_be_bytes());
            bits &= bits - 1;
        }
        out
    }

    fn decode(&self, bytes: &[u8]) -> Result<Packed> {
        let ctx = super::WreathContext::lamplighter(2)?;
        let w = ctx.decode(bytes)?;
        self.pack(&w)
            .ok_or_else(|| Error::Encoding("element outside the packed window".into()))
    }

    fn spec_hash(&self) -> SpecHash {
        self.hash
    }
}
