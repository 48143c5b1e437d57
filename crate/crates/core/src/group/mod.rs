//! Finitely generated groups with a fixed ordered generating set.

mod element;
pub mod power;
mod vz;

use std::sync::Arc;

pub use element::GroupElement;
pub use power::PowerSolutions;
pub use vz::VirtuallyZStructure;

use crate::cayley::{CayleyGraph, SpecHash};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum GroupKind {
    Integers,
    Cyclic {
        modulus: u64,
    },
    Free {
        rank: u32,
    },
    /// Multiplication table on `0..n`, row and column 0 the identity.
    Table {
        table: Arc<Vec<Vec<u32>>>,
        inverses: Arc<Vec<u32>>,
    },
    Product(Arc<MarkedGroup>, Arc<MarkedGroup>),
    /// Elements of an inner group carrying a virtually-ℤ structure,
    /// re-encoded as `(coset, exponent)`.
    VirtuallyZ(Arc<MarkedGroup>),
}

/// A group together with its marking. Immutable once built.
#[derive(Clone, Debug)]
pub struct MarkedGroup {
    kind: GroupKind,
    generators: Vec<GroupElement>,
    letters: Vec<GroupElement>,
    virtually_z: Option<VirtuallyZStructure>,
    hash: SpecHash,
}

impl MarkedGroup {
    fn build(kind: GroupKind, generators: Vec<GroupElement>) -> Result<Self> {
        let mut g = MarkedGroup {
            kind,
            generators: Vec::new(),
            letters: Vec::new(),
            virtually_z: None,
            hash: SpecHash([0; 32]),
        };
        g.set_generators(generators)?;
        Ok(g)
    }

    /// ℤ generated by `t = 1`.
    pub fn integers() -> Self {
        Self::build(GroupKind::Integers, vec![GroupElement::Int(1)]).unwrap()
    }

    /// ℤ/n generated by `1`. `n = 1` gives the trivial group with no generators.
    pub fn cyclic(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput(
                "cyclic modulus must be positive".into(),
            ));
        }
        let gens = if modulus == 1 {
            vec![]
        } else {
            vec![GroupElement::Residue(1)]
        };
        Self::build(GroupKind::Cyclic { modulus }, gens)
    }

    /// Free group on `rank` letters with the standard basis.
    pub fn free(rank: u32) -> Self {
        let gens = (1..=rank as i32)
            .map(|i| GroupElement::Word(vec![i]))
            .collect();
        Self::build(GroupKind::Free { rank }, gens).unwrap()
    }

    /// Finite group from a multiplication table; generated by every
    /// nonidentity element unless re-marked.
    pub fn table(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty multiplication table".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "table row {i} has length {}",
                    row.len()
                )));
            }
            if row.iter().any(|&x| x as usize >= n) {
                return Err(Error::InvalidInput(format!(
                    "table row {i} has out-of-range entries"
                )));
            }
            let mut seen = vec![false; n];
            for &x in row {
                seen[x as usize] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidInput(format!(
                    "table row {i} is not a permutation"
                )));
            }
        }
        for i in 0..n {
            if rows[0][i] as usize != i || rows[i][0] as usize != i {
                return Err(Error::InvalidInput("element 0 must be the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = rows[a][b] as usize;
                    let bc = rows[b][c] as usize;
                    if rows[ab][c] != rows[a][bc] {
                        return Err(Error::InvalidInput(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| rows[a].iter().position(|&x| x == 0).unwrap() as u32)
            .collect();
        let gens = (1..n as u32).map(GroupElement::Row).collect();
        Self::build(
            GroupKind::Table {
                table: Arc::new(rows),
                inverses: Arc::new(inverses),
            },
            gens,
        )
    }

    /// Direct product marked by `left gens × 1` followed by `1 × right gens`.
    pub fn product(left: MarkedGroup, right: MarkedGroup) -> Self {
        let (li, ri) = (left.identity(), right.identity());
        let gens = left
            .generators
            .iter()
            .map(|g| GroupElement::Pair(Box::new(g.clone()), Box::new(ri.clone())))
            .chain(
                right
                    .generators
                    .iter()
                    .map(|g| GroupElement::Pair(Box::new(li.clone()), Box::new(g.clone()))),
            )
            .collect();
        Self::build(GroupKind::Product(Arc::new(left), Arc::new(right)), gens).unwrap()
    }

    /// Re-encodes `inner` as pairs `(coset, exponent)`; the marking is the
    /// image of the inner marking.
    pub fn virtually_z_wrapper(inner: MarkedGroup) -> Result<Self> {
        let vz = inner
            .virtually_z
            .clone()
            .ok_or_else(|| Error::Structure("wrapped group has no virtually-Z structure".into()))?;
        let gens = inner
            .generators
            .iter()
            .map(|g| {
                vz.decompose(&inner, g)
                    .map(|(coset, exp)| GroupElement::Vz { coset, exp })
            })
            .collect::<Result<Vec<_>>>()?;
        let t = vz
            .decompose(&inner, &vz.t)
            .map(|(coset, exp)| GroupElement::Vz { coset, exp })?;
        let reps = (1..=vz.index() as u32)
            .map(|coset| GroupElement::Vz { coset, exp: 0 })
            .collect();
        let distortion = vz.distortion;
        let mut g = Self::build(GroupKind::VirtuallyZ(Arc::new(inner)), gens)?;
        g.virtually_z = Some(VirtuallyZStructure::new(&g, t, reps, distortion)?);
        Ok(g)
    }

    /// Replaces the marking. The identity may not be listed.
    pub fn with_generators(mut self, generators: Vec<GroupElement>) -> Result<Self> {
        self.set_generators(generators)?;
        Ok(self)
    }

    /// Attaches and validates a declared virtually-ℤ structure.
    pub fn with_virtually_z(
        mut self,
        t: GroupElement,
        coset_reps: Vec<GroupElement>,
        distortion: Option<num_rational::Ratio<i64>>,
    ) -> Result<Self> {
        self.virtually_z = Some(VirtuallyZStructure::new(&self, t, coset_reps, distortion)?);
        Ok(self)
    }

    fn set_generators(&mut self, generators: Vec<GroupElement>) -> Result<()> {
        let id = self.identity();
        for g in &generators {
            self.validate(g)?;
            if *g == id {
                return Err(Error::InvalidInput(
                    "the identity may not be listed as a generator".into(),
                ));
            }
        }
        let mut letters: Vec<GroupElement> = Vec::new();
        for g in &generators {
            for x in [g.clone(), self.inverse(g)] {
                if !letters.contains(&x) {
                    letters.push(x);
                }
            }
        }
        self.generators = generators;
        self.letters = letters;
        self.hash = SpecHash::of(self.canonical_spec().as_bytes());
        Ok(())
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn virtually_z(&self) -> Option<&VirtuallyZStructure> {
        self.virtually_z.as_ref()
    }

    /// Canonical text of kind, parameters and marking; the spec hash is
    /// its SHA-256.
    pub fn canonical_spec(&self) -> String {
        let kind = match &self.kind {
            GroupKind::Integers => "integers".to_string(),
            GroupKind::Cyclic { modulus } => format!("cyclic(modulus={modulus})"),
            GroupKind::Free { rank } => format!("free(rank={rank})"),
            GroupKind::Table { table, .. } => {
                let rows: Vec<String> = table
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                format!("table({})", rows.join(";"))
            }
            GroupKind::Product(a, b) => {
                format!("product({},{})", a.canonical_spec(), b.canonical_spec())
            }
            GroupKind::VirtuallyZ(inner) => {
                let vz = inner
                    .virtually_z
                    .as_ref()
                    .expect("validated on construction");
                let reps: Vec<String> = vz
                    .coset_reps
                    .iter()
                    .map(|g| hex::encode(g.encode()))
                    .collect();
                format!(
                    "virtually_z({},t={},reps={})",
                    inner.canonical_spec(),
                    hex::encode(vz.t.encode()),
                    reps.join(",")
                )
            }
        };
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| hex::encode(g.encode()))
            .collect();
        format!("{kind};gens=[{}]", gens.join(","))
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Integers => GroupElement::Int(0),
            GroupKind::Cyclic { .. } => GroupElement::Residue(0),
            GroupKind::Free { .. } => GroupElement::Word(Vec::new()),
            GroupKind::Table { .. } => GroupElement::Row(0),
            GroupKind::Product(a, b) => {
                GroupElement::Pair(Box::new(a.identity()), Box::new(b.identity()))
            }
            GroupKind::VirtuallyZ(inner) => {
                let vz = inner.virtually_z.as_ref().unwrap();
                let (coset, exp) = vz
                    .decompose(inner, &inner.identity())
                    .expect("identity decomposes");
                GroupElement::Vz { coset, exp }
            }
        }
    }

    /// Checks that `e` is a canonical encoding for this group.
    pub fn validate(&self, e: &GroupElement) -> Result<()> {
        let bad = |msg: String| Err(Error::Encoding(msg));
        match (&self.kind, e) {
            (GroupKind::Integers, GroupElement::Int(_)) => Ok(()),
            (GroupKind::Cyclic { modulus }, GroupElement::Residue(v)) => {
                if v < modulus {
                    Ok(())
                } else {
                    bad(format!("residue {v} not reduced mod {modulus}"))
                }
            }
            (GroupKind::Free { rank }, GroupElement::Word(w)) => {
                for (i, &x) in w.iter().enumerate() {
                    if x == 0 || x.unsigned_abs() > *rank {
                        return bad(format!("letter {x} outside free basis of rank {rank}"));
                    }
                    if i > 0 && w[i - 1] == -x {
                        return bad(format!("word {e} is not reduced"));
                    }
                }
                Ok(())
            }
            (GroupKind::Table { table, .. }, GroupElement::Row(v)) => {
                if (*v as usize) < table.len() {
                    Ok(())
                } else {
                    bad(format!("row {v} outside table of order {}", table.len()))
                }
            }
            (GroupKind::Product(a, b), GroupElement::Pair(x, y)) => {
                a.validate(x)?;
                b.validate(y)
            }
            (GroupKind::VirtuallyZ(inner), GroupElement::Vz { coset, .. }) => {
                let n = inner.virtually_z.as_ref().unwrap().index() as u32;
                if (1..=n).contains(coset) {
                    Ok(())
                } else {
                    bad(format!("coset index {coset} outside 1..={n}"))
                }
            }
            _ => bad(format!("element {e} does not match group kind")),
        }
    }

    /// Validated product `xy`.
    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.mul(x, y))
    }

    /// Unchecked product; inputs must be valid encodings.
    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        use GroupElement as E;
        match (&self.kind, x, y) {
            (GroupKind::Integers, E::Int(a), E::Int(b)) => E::Int(a + b),
            (GroupKind::Cyclic { modulus }, E::Residue(a), E::Residue(b)) => {
                E::Residue(((*a as u128 + *b as u128) % *modulus as u128) as u64)
            }
            (GroupKind::Free { .. }, E::Word(a), E::Word(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                E::Word(out)
            }
            (GroupKind::Table { table, .. }, E::Row(a), E::Row(b)) => {
                E::Row(table[*a as usize][*b as usize])
            }
            (GroupKind::Product(ga, gb), E::Pair(a1, b1), E::Pair(a2, b2)) => {
                E::Pair(Box::new(ga.mul(a1, a2)), Box::new(gb.mul(b1, b2)))
            }
            (GroupKind::VirtuallyZ(inner), E::Vz { .. }, E::Vz { .. }) => {
                let vz = inner.virtually_z.as_ref().unwrap();
                let p = inner.mul(&self.unwrap_vz(x), &self.unwrap_vz(y));
                let (coset, exp) = vz.decompose(inner, &p).expect("cosets partition the group");
                E::Vz { coset, exp }
            }
            _ => panic!("mul: {x} and {y} do not match the group kind"),
        }
    }

    /// Inner element `g_coset · t^exp` of a virtually-ℤ wrapper.
    fn unwrap_vz(&self, e: &GroupElement) -> GroupElement {
        let (GroupKind::VirtuallyZ(inner), GroupElement::Vz { coset, exp }) = (&self.kind, e)
        else {
            panic!("not a virtually-Z wrapper element");
        };
        let vz = inner.virtually_z.as_ref().unwrap();
        inner.mul(&vz.coset_reps[*coset as usize - 1], &inner.pow(&vz.t, *exp))
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        use GroupElement as E;
        match (&self.kind, x) {
            (GroupKind::Integers, E::Int(a)) => E::Int(-a),
            (GroupKind::Cyclic { modulus }, E::Residue(a)) => E::Residue((modulus - a) % modulus),
            (GroupKind::Free { .. }, E::Word(w)) => E::Word(w.iter().rev().map(|l| -l).collect()),
            (GroupKind::Table { inverses, .. }, E::Row(a)) => E::Row(inverses[*a as usize]),
            (GroupKind::Product(ga, gb), E::Pair(a, b)) => {
                E::Pair(Box::new(ga.inverse(a)), Box::new(gb.inverse(b)))
            }
            (GroupKind::VirtuallyZ(inner), E::Vz { .. }) => {
                let vz = inner.virtually_z.as_ref().unwrap();
                let (coset, exp) = vz
                    .decompose(inner, &inner.inverse(&self.unwrap_vz(x)))
                    .expect("cosets partition the group");
                E::Vz { coset, exp }
            }
            _ => panic!("inverse: {x} does not match the group kind"),
        }
    }

    pub fn pow(&self, x: &GroupElement, e: i64) -> GroupElement {
        let base = if e < 0 { self.inverse(x) } else { x.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// Every `e` with `base^e = target`.
    pub fn solve_power(&self, base: &GroupElement, target: &GroupElement) -> PowerSolutions {
        use GroupElement as E;
        match (&self.kind, base, target) {
            (GroupKind::Integers, E::Int(b), E::Int(x)) => {
                if *b == 0 {
                    if *x == 0 {
                        PowerSolutions::All
                    } else {
                        PowerSolutions::None
                    }
                } else if x % b == 0 {
                    PowerSolutions::Unique(x / b)
                } else {
                    PowerSolutions::None
                }
            }
            (GroupKind::Cyclic { modulus }, E::Residue(b), E::Residue(x)) => {
                power::linear_congruence(*b, *x, *modulus)
            }
            (GroupKind::Table { .. }, _, _) => {
                let id = self.identity();
                let mut acc = id.clone();
                let mut k = 0i64;
                let mut hit = None;
                loop {
                    if acc == *target && hit.is_none() {
                        hit = Some(k);
                    }
                    acc = self.mul(&acc, base);
                    k += 1;
                    if acc == id {
                        break;
                    }
                }
                match hit {
                    Some(h) => PowerSolutions::periodic(h, k),
                    None => PowerSolutions::None,
                }
            }
            (GroupKind::Free { .. }, E::Word(w), E::Word(x)) => {
                if w.is_empty() {
                    return if x.is_empty() {
                        PowerSolutions::All
                    } else {
                        PowerSolutions::None
                    };
                }
                if x.is_empty() {
                    return PowerSolutions::Unique(0);
                }
                // w = u·c·u⁻¹ with c cyclically reduced, |w^e| = 2|u| + |e|·|c|
                let mut u = 0;
                while w[u] == -w[w.len() - 1 - u] {
                    u += 1;
                }
                let core = w.len() - 2 * u;
                let m = x.len() as i64 - 2 * u as i64;
                if m <= 0 || m % core as i64 != 0 {
                    return PowerSolutions::None;
                }
                let e = m / core as i64;
                for cand in [e, -e] {
                    if self.pow(base, cand) == *target {
                        return PowerSolutions::Unique(cand);
                    }
                }
                PowerSolutions::None
            }
            (GroupKind::Product(ga, gb), E::Pair(b1, b2), E::Pair(x1, x2)) => {
                ga.solve_power(b1, x1).intersect(gb.solve_power(b2, x2))
            }
            (GroupKind::VirtuallyZ(inner), _, _) => {
                inner.solve_power(&self.unwrap_vz(base), &self.unwrap_vz(target))
            }
            _ => PowerSolutions::None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            GroupKind::Integers => false,
            GroupKind::Cyclic { .. } | GroupKind::Table { .. } => true,
            GroupKind::Free { rank } => *rank == 0,
            GroupKind::Product(a, b) => a.is_finite() && b.is_finite(),
            GroupKind::VirtuallyZ(_) => false,
        }
    }

    /// All elements of a finite group in canonical order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let mut out = match &self.kind {
            GroupKind::Cyclic { modulus } => (0..*modulus).map(GroupElement::Residue).collect(),
            GroupKind::Table { table, .. } => {
                (0..table.len() as u32).map(GroupElement::Row).collect()
            }
            GroupKind::Free { rank: 0 } => vec![self.identity()],
            GroupKind::Product(a, b) => {
                let (ea, eb) = (a.elements()?, b.elements()?);
                let mut v = Vec::with_capacity(ea.len() * eb.len());
                for x in &ea {
                    for y in &eb {
                        v.push(GroupElement::Pair(Box::new(x.clone()), Box::new(y.clone())));
                    }
                }
                v
            }
            _ => {
                return Err(Error::Unsupported(
                    "element listing of an infinite group".into(),
                ))
            }
        };
        out.sort();
        Ok(out)
    }

    /// Decodes and validates a canonical serialization.
    pub fn decode(&self, bytes: &[u8]) -> Result<GroupElement> {
        let (e, rest) = self.decode_prefix(bytes)?;
        if !rest.is_empty() {
            return Err(Error::Encoding(format!("{} trailing bytes", rest.len())));
        }
        Ok(e)
    }

    pub fn decode_prefix<'a>(&self, bytes: &'a [u8]) -> Result<(GroupElement, &'a [u8])> {
        let (p, rest) = GroupElement::split_frame(bytes)?;
        let e = match &self.kind {
            GroupKind::Integers => GroupElement::Int(GroupElement::payload_int(p)?),
            GroupKind::Cyclic { .. } => GroupElement::Residue(GroupElement::payload_u64(p)?),
            GroupKind::Free { .. } => GroupElement::Word(GroupElement::payload_word(p)?),
            GroupKind::Table { .. } => GroupElement::Row(GroupElement::payload_u32(p)?),
            GroupKind::Product(a, b) => {
                let (x, r) = a.decode_prefix(p)?;
                let (y, r) = b.decode_prefix(r)?;
                if !r.is_empty() {
                    return Err(Error::Encoding("trailing bytes inside pair".into()));
                }
                GroupElement::Pair(Box::new(x), Box::new(y))
            }
            GroupKind::VirtuallyZ(_) => {
                let (coset, exp) = GroupElement::payload_vz(p)?;
                GroupElement::Vz { coset, exp }
            }
        };
        self.validate(&e)?;
        Ok((e, rest))
    }

    /// Evaluates a word of letter indices.
    pub fn evaluate(&self, word: &[usize]) -> GroupElement {
        word.iter()
            .fold(self.identity(), |acc, &i| self.mul(&acc, &self.letters[i]))
    }
}

impl CayleyGraph for MarkedGroup {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        MarkedGroup::identity(self)
    }

    fn letters(&self) -> &[GroupElement] {
        &self.letters
    }

    fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        MarkedGroup::mul(self, a, b)
    }

    fn inverse(&self, a: &GroupElement) -> GroupElement {
        MarkedGroup::inverse(self, a)
    }

    fn encode(&self, a: &GroupElement) -> Vec<u8> {
        a.encode()
    }

    fn decode(&self, bytes: &[u8]) -> Result<GroupElement> {
        MarkedGroup::decode(self, bytes)
    }

    fn spec_hash(&self) -> SpecHash {
        self.hash
    }
}
