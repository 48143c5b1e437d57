//! Solving `base^e = target` for the exponent `e`, per group kind.

use num_integer::Integer;

/// Set of integer exponents `e` with `base^e = target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerSolutions {
    None,
    Unique(i64),
    /// `e ≡ residue (mod modulus)`, `modulus >= 1`.
    Periodic {
        residue: i64,
        modulus: i64,
    },
    /// Only when `base` and `target` are both the identity of a trivial
    /// factor with no period information.
    All,
}

impl PowerSolutions {
    pub fn periodic(residue: i64, modulus: i64) -> Self {
        if modulus == 1 {
            return PowerSolutions::All;
        }
        PowerSolutions::Periodic {
            residue: residue.rem_euclid(modulus),
            modulus,
        }
    }

    pub fn intersect(self, other: PowerSolutions) -> PowerSolutions {
        use PowerSolutions::*;
        match (self, other) {
            (None, _) | (_, None) => None,
            (All, x) | (x, All) => x,
            (Unique(a), Unique(b)) => {
                if a == b {
                    Unique(a)
                } else {
                    None
                }
            }
            (Unique(a), Periodic { residue, modulus })
            | (Periodic { residue, modulus }, Unique(a)) => {
                if a.rem_euclid(modulus) == residue {
                    Unique(a)
                } else {
                    None
                }
            }
            (
                Periodic {
                    residue: r1,
                    modulus: m1,
                },
                Periodic {
                    residue: r2,
                    modulus: m2,
                },
            ) => {
                // e = r1 + m1·s with m1·s ≡ r2 - r1 (mod m2)
                let g = m1.gcd(&m2);
                if (r2 - r1).rem_euclid(g) != 0 {
                    return None;
                }
                let m2g = m2 / g;
                let s = if m2g == 1 {
                    0
                } else {
                    let inv = mod_inverse((m1 / g).rem_euclid(m2g), m2g)
                        .expect("coprime after dividing out the gcd");
                    (((r2 - r1) / g).rem_euclid(m2g) as i128 * inv as i128 % m2g as i128) as i64
                };
                let lcm = m1 / g * m2;
                PowerSolutions::periodic(r1 + m1 * s, lcm)
            }
        }
    }
}

pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let eg = a.extended_gcd(&m);
    if eg.gcd != 1 {
        return None;
    }
    Some(eg.x.rem_euclid(m))
}

/// Solutions of `b·e ≡ x (mod n)`.
pub fn linear_congruence(b: u64, x: u64, n: u64) -> PowerSolutions {
    let (b, x, n) = (b as i64, x as i64, n as i64);
    let g = b.gcd(&n);
    if g == 0 {
        return if x == 0 {
            PowerSolutions::All
        } else {
            PowerSolutions::None
        };
    }
    if x % g != 0 {
        return PowerSolutions::None;
    }
    let ng = n / g;
    if ng == 1 {
        return PowerSolutions::All;
    }
    let inv = mod_inverse((b / g).rem_euclid(ng), ng).unwrap();
    PowerSolutions::periodic(((x / g) as i128 * inv as i128 % ng as i128) as i64, ng)
}
