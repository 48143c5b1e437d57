use num_traits::{One, Zero};

use super::{GroupElement, MarkedGroup, PowerSolutions};
use crate::cayley::{Ball, Explorer};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Declared infinite cyclic subgroup `⟨t⟩` of finite index with coset
/// representatives `g_1..g_n`: every element is uniquely `g_i · t^e`.
#[derive(Clone, Debug)]
pub struct VirtuallyZStructure {
    pub t: GroupElement,
    pub coset_reps: Vec<GroupElement>,
    /// `C` with `|e|/C ≤ l(t^e) ≤ |e|`, when declared.
    pub distortion: Option<Rational>,
}

impl VirtuallyZStructure {
    /// Checks that `t` has infinite order and that the representatives lie
    /// in pairwise distinct cosets.
    pub fn new(
        group: &MarkedGroup,
        t: GroupElement,
        coset_reps: Vec<GroupElement>,
        distortion: Option<Rational>,
    ) -> Result<Self> {
        group.validate(&t)?;
        for g in &coset_reps {
            group.validate(g)?;
        }
        if coset_reps.is_empty() {
            return Err(Error::Structure(
                "at least one coset representative required".into(),
            ));
        }
        if group.solve_power(&t, &group.identity()) != PowerSolutions::Unique(0) {
            return Err(Error::Structure(format!(
                "t = {t} does not have infinite order"
            )));
        }
        if let Some(c) = distortion {
            if c <= Rational::zero() {
                return Err(Error::Structure(format!(
                    "distortion constant {c} must be positive"
                )));
            }
        }
        let s = VirtuallyZStructure {
            t,
            coset_reps,
            distortion,
        };
        for (i, gi) in s.coset_reps.iter().enumerate() {
            for gj in &s.coset_reps[i + 1..] {
                let q = group.mul(&group.inverse(gi), gj);
                if group.solve_power(&s.t, &q) != PowerSolutions::None {
                    return Err(Error::Structure(format!(
                        "representatives {gi} and {gj} lie in the same coset of <t>"
                    )));
                }
            }
        }
        Ok(s)
    }

    /// The index `n` of `⟨t⟩`.
    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    /// The unique `(i, e)`, `i` 1-based, with `g = g_i · t^e`.
    pub fn decompose(&self, group: &MarkedGroup, g: &GroupElement) -> Result<(u32, i64)> {
        let mut found = None;
        for (i, gi) in self.coset_reps.iter().enumerate() {
            let q = group.mul(&group.inverse(gi), g);
            match group.solve_power(&self.t, &q) {
                PowerSolutions::None => {}
                PowerSolutions::Unique(e) => {
                    if found.is_some() {
                        return Err(Error::Structure(format!("{g} lies in two declared cosets")));
                    }
                    found = Some((i as u32 + 1, e));
                }
                other => {
                    return Err(Error::Structure(format!(
                        "exponent of {g} over t is not unique: {other:?}"
                    )))
                }
            }
        }
        found.ok_or_else(|| {
            Error::Structure(format!(
                "{g} is not of the form g_i·t^e for the {} declared representatives",
                self.index()
            ))
        })
    }

    /// Exhaustive check that every element of `ball` decomposes and that
    /// the decomposition reassembles to the element.
    pub fn verify_on_ball(&self, group: &MarkedGroup, ball: &Ball<GroupElement>) -> Result<()> {
        for g in ball.elements() {
            let (i, e) = self.decompose(group, g)?;
            let back = group.mul(&self.coset_reps[i as usize - 1], &group.pow(&self.t, e));
            if back != *g {
                return Err(Error::Structure(format!("g_{i}·t^{e} ≠ {g}")));
            }
        }
        Ok(())
    }

    /// Least `C` with `|e|/C ≤ l(t^e)` for `0 < |e| ≤ e_max`, also
    /// certifying `l(t^e) ≤ |e|`. An empty window gives `C = 1`.
    pub fn distortion_constant(
        &self,
        group: &MarkedGroup,
        ex: &Explorer,
        e_max: u64,
    ) -> Result<Rational> {
        let mut c = Rational::one();
        for e in 1..=e_max as i64 {
            for signed in [e, -e] {
                let len = ex.word_length(group, &group.pow(&self.t, signed))?;
                if len as i64 > e {
                    return Err(Error::Structure(format!(
                        "l(t^{signed}) = {len} exceeds |{signed}|; t is not a generator-compatible choice"
                    )));
                }
                c = c.max(Rational::new(e, len as i64));
            }
        }
        if let Some(declared) = self.distortion {
            if declared < c {
                return Err(Error::Structure(format!(
                    "declared distortion {declared} is smaller than the measured {c}"
                )));
            }
        }
        Ok(c)
    }

    /// Declared distortion, or the measured one over `|e| ≤ e_max`.
    pub fn distortion_or_measure(
        &self,
        group: &MarkedGroup,
        ex: &Explorer,
        e_max: u64,
    ) -> Result<Rational> {
        match self.distortion {
            Some(c) => Ok(c),
            None => self.distortion_constant(group, ex, e_max),
        }
    }

    /// `γ(r) ≤ n·(3nCr + 1)`.
    pub fn linear_growth_bound(&self, c: &Rational, r: &Rational) -> Rational {
        let n = int(self.index() as i64);
        n * (int(3) * n * c * r + Rational::one())
    }
}
