use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Canonical encoding of an element, one variant per group kind.
///
/// Derived equality is element equality: free words are kept fully
/// reduced and residues normalized, so two encodings are equal iff the
/// elements are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Int(i64),
    Residue(u64),
    /// Reduced word: signed 1-based generator indices.
    Word(Vec<i32>),
    Row(u32),
    Pair(Box<GroupElement>, Box<GroupElement>),
    /// `g_coset · t^exp`, coset 1-based.
    Vz {
        coset: u32,
        exp: i64,
    },
}

// Serialized form, all integers big-endian:
//   element  := u32 payload_len ‖ payload
//   Int      := i64 with sign bit flipped
//   Residue  := u64
//   Word     := (i32 with sign bit flipped)*
//   Row      := u32
//   Pair     := element(left) ‖ element(right)
//   Vz       := u32 coset ‖ i64 exp with sign bit flipped
// Flipping the sign bit makes byte order agree with numeric order.

fn flip64(v: i64) -> [u8; 8] {
    ((v as u64) ^ (1 << 63)).to_be_bytes()
}

fn unflip64(b: [u8; 8]) -> i64 {
    (u64::from_be_bytes(b) ^ (1 << 63)) as i64
}

fn flip32(v: i32) -> [u8; 4] {
    ((v as u32) ^ (1 << 31)).to_be_bytes()
}

fn unflip32(b: [u8; 4]) -> i32 {
    (u32::from_be_bytes(b) ^ (1 << 31)) as i32
}

impl GroupElement {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16);
        self.encode_into(&mut out);
        out
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        let start = out.len();
        out.extend_from_slice(&[0; 4]);
        match self {
            GroupElement::Int(v) => out.extend_from_slice(&flip64(*v)),
            GroupElement::Residue(v) => out.extend_from_slice(&v.to_be_bytes()),
            GroupElement::Word(w) => {
                for &x in w {
                    out.extend_from_slice(&flip32(x));
                }
            }
            GroupElement::Row(v) => out.extend_from_slice(&v.to_be_bytes()),
            GroupElement::Pair(a, b) => {
                a.encode_into(out);
                b.encode_into(out);
            }
            GroupElement::Vz { coset, exp } => {
                out.extend_from_slice(&coset.to_be_bytes());
                out.extend_from_slice(&flip64(*exp));
            }
        }
        let len = (out.len() - start - 4) as u32;
        out[start..start + 4].copy_from_slice(&len.to_be_bytes());
    }

    /// Splits one length-prefixed element off the front of `bytes`.
    pub fn split_frame(bytes: &[u8]) -> Result<(&[u8], &[u8])> {
        if bytes.len() < 4 {
            return Err(Error::Encoding("truncated length prefix".into()));
        }
        let len = u32::from_be_bytes(bytes[..4].try_into().unwrap()) as usize;
        let rest = &bytes[4..];
        if rest.len() < len {
            return Err(Error::Encoding(format!(
                "payload of {len} bytes truncated to {}",
                rest.len()
            )));
        }
        Ok(rest.split_at(len))
    }

    pub(crate) fn payload_int(p: &[u8]) -> Result<i64> {
        let b: [u8; 8] = p
            .try_into()
            .map_err(|_| Error::Encoding(format!("integer payload of {} bytes", p.len())))?;
        Ok(unflip64(b))
    }

    pub(crate) fn payload_u64(p: &[u8]) -> Result<u64> {
        let b: [u8; 8] = p
            .try_into()
            .map_err(|_| Error::Encoding(format!("residue payload of {} bytes", p.len())))?;
        Ok(u64::from_be_bytes(b))
    }

    pub(crate) fn payload_u32(p: &[u8]) -> Result<u32> {
        let b: [u8; 4] = p
            .try_into()
            .map_err(|_| Error::Encoding(format!("row payload of {} bytes", p.len())))?;
        Ok(u32::from_be_bytes(b))
    }

    pub(crate) fn payload_word(p: &[u8]) -> Result<Vec<i32>> {
        if !p.len().is_multiple_of(4) {
            return Err(Error::Encoding("word payload not a multiple of 4".into()));
        }
        Ok(p.chunks_exact(4)
            .map(|c| unflip32(c.try_into().unwrap()))
            .collect())
    }

    pub(crate) fn payload_vz(p: &[u8]) -> Result<(u32, i64)> {
        if p.len() != 12 {
            return Err(Error::Encoding(format!(
                "coset payload of {} bytes",
                p.len()
            )));
        }
        Ok((
            u32::from_be_bytes(p[..4].try_into().unwrap()),
            unflip64(p[4..].try_into().unwrap()),
        ))
    }
}

impl Ord for GroupElement {
    /// Byte order of the canonical encodings, with fast paths for the
    /// fixed-width kinds.
    fn cmp(&self, other: &Self) -> Ordering {
        use GroupElement::*;
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Residue(a), Residue(b)) => a.cmp(b),
            (Row(a), Row(b)) => a.cmp(b),
            (Word(a), Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Vz { coset: c1, exp: e1 }, Vz { coset: c2, exp: e2 }) => c1.cmp(c2).then(e1.cmp(e2)),
            _ => self.encode().cmp(&other.encode()),
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn letter_name(x: i32) -> String {
    let i = x.unsigned_abs();
    let base = if i <= 26 {
        ((b'a' + (i - 1) as u8) as char).to_string()
    } else {
        format!("x{i}")
    };
    if x < 0 {
        format!("{base}^-1")
    } else {
        base
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(v) => write!(f, "{v}"),
            GroupElement::Residue(v) => write!(f, "{v}"),
            GroupElement::Word(w) if w.is_empty() => f.write_str("1"),
            GroupElement::Word(w) => {
                let parts: Vec<String> = w.iter().map(|&x| letter_name(x)).collect();
                f.write_str(&parts.join(" "))
            }
            GroupElement::Row(v) => write!(f, "#{v}"),
            GroupElement::Pair(a, b) => write!(f, "({a}, {b})"),
            GroupElement::Vz { coset, exp } => write!(f, "g{coset}·t^{exp}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_element() -> impl Strategy<Value = GroupElement> {
        let leaf = prop_oneof![
            any::<i64>().prop_map(GroupElement::Int),
            any::<u64>().prop_map(GroupElement::Residue),
            prop::collection::vec(-3i32..=3, 0..6)
                .prop_map(|w| GroupElement::Word(w.into_iter().filter(|&x| x != 0).collect())),
            any::<u32>().prop_map(GroupElement::Row),
            (1u32..5, any::<i64>()).prop_map(|(coset, exp)| GroupElement::Vz { coset, exp }),
        ];
        leaf.prop_recursive(2, 8, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| GroupElement::Pair(Box::new(a), Box::new(b)))
        })
    }

    fn same_kind(a: &GroupElement, b: &GroupElement) -> bool {
        std::mem::discriminant(a) == std::mem::discriminant(b)
    }

    proptest! {
        #[test]
        fn order_matches_encoding_bytes(a in arb_element(), b in arb_element()) {
            prop_assume!(same_kind(&a, &b));
            prop_assert_eq!(a.cmp(&b), a.encode().cmp(&b.encode()));
        }

        #[test]
        fn frame_splits_exactly(a in arb_element()) {
            let bytes = a.encode();
            let (payload, rest) = GroupElement::split_frame(&bytes).unwrap();
            prop_assert!(rest.is_empty());
            prop_assert_eq!(payload.len() + 4, bytes.len());
        }
    }

    #[test]
    fn integer_encoding_is_bit_exact() {
        assert_eq!(
            GroupElement::Int(-1).encode(),
            vec![0, 0, 0, 8, 0x7f, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff]
        );
        assert_eq!(
            GroupElement::Word(vec![1, -2]).encode(),
            vec![0, 0, 0, 8, 0x80, 0, 0, 1, 0x7f, 0xff, 0xff, 0xfe]
        );
    }

    #[test]
    fn truncated_frames_are_rejected() {
        assert!(GroupElement::split_frame(&[0, 0]).is_err());
        assert!(GroupElement::split_frame(&[0, 0, 0, 8, 1, 2]).is_err());
    }
}
