//! Test-side reference implementations, written without the library's
//! search or group code.

use std::collections::{BTreeSet, HashMap, VecDeque};

use wreathdim::{GroupElement, WreathElement};

/// An element of ℤ/2 ≀ ℤ: lit positions and cursor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lamp {
    pub lit: BTreeSet<i64>,
    pub cursor: i64,
}

impl Lamp {
    pub fn identity() -> Self {
        Lamp {
            lit: BTreeSet::new(),
            cursor: 0,
        }
    }

    pub fn kernel(lit: &[i64]) -> Self {
        Lamp {
            lit: lit.iter().copied().collect(),
            cursor: 0,
        }
    }

    /// Letters: 0 toggles the lamp under the cursor, 1 moves right, 2 left.
    pub fn step(&self, letter: usize) -> Self {
        let mut out = self.clone();
        match letter {
            0 => {
                if !out.lit.remove(&self.cursor) {
                    out.lit.insert(self.cursor);
                }
            }
            1 => out.cursor += 1,
            2 => out.cursor -= 1,
            _ => panic!("no letter {letter}"),
        }
        out
    }

    pub fn eval(word: &[usize]) -> Self {
        word.iter().fold(Lamp::identity(), |x, &l| x.step(l))
    }

    /// `self⁻¹·other`.
    pub fn left_quotient(&self, other: &Lamp) -> Lamp {
        let lit = self
            .lit
            .symmetric_difference(&other.lit)
            .map(|p| p - self.cursor)
            .collect();
        Lamp {
            lit,
            cursor: other.cursor - self.cursor,
        }
    }

    pub fn from_lib(w: &WreathElement) -> Lamp {
        let pos = |g: &GroupElement| match g {
            GroupElement::Int(v) => *v,
            other => panic!("not an integer position: {other:?}"),
        };
        Lamp {
            lit: w.lamps.keys().map(pos).collect(),
            cursor: pos(&w.cursor),
        }
    }
}

/// Plain BFS lengths of every element of length at most `depth`.
pub fn lamp_lengths(depth: u32) -> HashMap<Lamp, u32> {
    let mut seen = HashMap::from([(Lamp::identity(), 0)]);
    let mut queue = VecDeque::from([Lamp::identity()]);
    while let Some(x) = queue.pop_front() {
        let d = seen[&x];
        if d == depth {
            continue;
        }
        for l in 0..3 {
            let y = x.step(l);
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Classes of `points` joined by chains with consecutive distance `< r`.
pub fn components(n: usize, r: u32, dist: impl Fn(usize, usize) -> u32) -> Vec<Vec<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();
    for s in 0..n {
        if label[s].is_some() {
            continue;
        }
        let mut class = vec![s];
        label[s] = Some(out.len());
        let mut i = 0;
        while i < class.len() {
            let x = class[i];
            for y in 0..n {
                if label[y].is_none() && dist(x, y) < r {
                    label[y] = Some(out.len());
                    class.push(y);
                }
            }
            i += 1;
        }
        class.sort_unstable();
        out.push(class);
    }
    out
}

pub fn diameter(class: &[usize], dist: impl Fn(usize, usize) -> u32) -> u32 {
    let mut d = 0;
    for &a in class {
        for &b in class {
            d = d.max(dist(a, b));
        }
    }
    d
}

/// Number of reduced words of length `< r` in the free group of rank 2.
pub fn free_reduced_words_below(r: u32) -> usize {
    // letters 1, -1, 2, -2; a word is reduced if no letter meets its inverse
    let letters = [1i32, -1, 2, -2];
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    let mut count = 1;
    for _ in 1..r {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().filter_map(move |&l| {
                    if w.last() == Some(&-l) {
                        None
                    } else {
                        let mut v = w.clone();
                        v.push(l);
                        Some(v)
                    }
                })
            })
            .collect();
        count += layer.len();
    }
    count
}

/// Growth of ℤ in the generator `1`: integers with `|x| < r`.
pub fn integers_growth(r: u32) -> usize {
    (-(r as i64) + 1..r as i64).count()
}
