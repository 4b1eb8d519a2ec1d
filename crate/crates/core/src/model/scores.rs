use std::fmt;
use std::str::FromStr;

use super::{Part, ProjectiveTree};
use crate::error::{Error, Result};

/// The part types scored by a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factorization {
    Dep1,
    Sib2,
    Gch2,
    GSib3,
}

impl Factorization {
    pub const ALL: [Factorization; 4] = [
        Factorization::Dep1,
        Factorization::Sib2,
        Factorization::Gch2,
        Factorization::GSib3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Factorization::Dep1 => "dep1",
            Factorization::Sib2 => "sib2",
            Factorization::Gch2 => "gch2",
            Factorization::GSib3 => "gsib3",
        }
    }

    /// Whether charts for this factorization carry grandparent indices.
    pub fn grandparented(self) -> bool {
        matches!(self, Factorization::Gch2 | Factorization::GSib3)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Factorization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Factorization::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown factorization {s:?} (expected dep1|sib2|gch2|gsib3)"))
    }
}

/// Dense indexing of every candidate part of one factorization for an
/// `n`-word sentence.
///
/// Layouts: arcs `[s][t]`; siblings `[s][t][|r - s|]` with slot 0 for the
/// inner-most case; grandchildren `[g][s][t]`. Grand-siblings use a packed
/// layout because a dense `[g][s][r][t]` array is quartic in memory: each
/// ordered pair `(s, t)` owns `gslots * |t - s|` entries, where `gslots`
/// counts the grandparents outside `[min(s,t), max(s,t)]` (one sentinel for
/// the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartSpace {
    n: usize,
    factorization: Factorization,
    pair_offsets: Vec<usize>,
    len: usize,
}

impl PartSpace {
    pub fn new(n: usize, factorization: Factorization) -> Self {
        let w = n + 1;
        let (pair_offsets, len) = match factorization {
            Factorization::Dep1 => (Vec::new(), w * w),
            Factorization::Sib2 => (Vec::new(), w * w * w),
            Factorization::Gch2 => (Vec::new(), w * w * w),
            Factorization::GSib3 => {
                let mut offsets = vec![usize::MAX; w * w];
                let mut next = 0;
                for s in 0..=n {
                    for t in 1..=n {
                        if s == t {
                            continue;
                        }
                        offsets[s * w + t] = next;
                        next += gsib_gslots(n, s, t) * s.abs_diff(t);
                    }
                }
                (offsets, next)
            }
        };
        PartSpace {
            n,
            factorization,
            pair_offsets,
            len,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factorization(&self) -> Factorization {
        self.factorization
    }

    /// Storage length (including unused slots of dense layouts).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn dep(&self, s: usize, t: usize) -> usize {
        s * (self.n + 1) + t
    }

    #[inline]
    pub fn sib(&self, s: usize, r: Option<usize>, t: usize) -> usize {
        let w = self.n + 1;
        (s * w + t) * w + r.map_or(0, |r| r.abs_diff(s))
    }

    #[inline]
    pub fn gch(&self, g: usize, s: usize, t: usize) -> usize {
        let w = self.n + 1;
        (g * w + s) * w + t
    }

    #[inline]
    pub fn gsib(&self, g: usize, s: usize, r: Option<usize>, t: usize) -> usize {
        let base = self.pair_offsets[s * (self.n + 1) + t];
        let d = s.abs_diff(t);
        let gslot = if s == 0 {
            0
        } else if g < s.min(t) {
            g
        } else {
            g - (d + 1)
        };
        base + gslot * d + r.map_or(0, |r| r.abs_diff(s))
    }

    /// Storage index of `part`, or `None` if it does not belong to this space.
    pub fn index(&self, part: &Part) -> Option<usize> {
        if !part.is_valid(self.n) {
            return None;
        }
        match (*part, self.factorization) {
            (Part::Dep { head, modifier }, Factorization::Dep1) => Some(self.dep(head, modifier)),
            (
                Part::Sib {
                    head,
                    inner,
                    modifier,
                },
                Factorization::Sib2,
            ) => Some(self.sib(head, inner, modifier)),
            (
                Part::Gch {
                    grandparent,
                    head,
                    modifier,
                },
                Factorization::Gch2,
            ) => Some(self.gch(grandparent, head, modifier)),
            (
                Part::GSib {
                    grandparent,
                    head,
                    inner,
                    modifier,
                },
                Factorization::GSib3,
            ) => Some(self.gsib(grandparent, head, inner, modifier)),
            _ => None,
        }
    }

    /// Visits every valid part with its storage index, in a fixed order.
    pub fn for_each_part(&self, mut f: impl FnMut(usize, Part)) {
        let n = self.n;
        for s in 0..=n {
            for t in 1..=n {
                if s == t {
                    continue;
                }
                let between = || {
                    std::iter::once(None).chain((s.min(t) + 1..s.max(t)).map(Some))
                };
                let grandparents = || (0..=n).filter(move |&g| g < s.min(t) || g > s.max(t));
                match self.factorization {
                    Factorization::Dep1 => f(self.dep(s, t), Part::dep(s, t)),
                    Factorization::Sib2 => {
                        for r in between() {
                            f(self.sib(s, r, t), Part::sib(s, r, t));
                        }
                    }
                    Factorization::Gch2 => {
                        if s >= 1 {
                            for g in grandparents() {
                                f(self.gch(g, s, t), Part::gch(g, s, t));
                            }
                        }
                    }
                    Factorization::GSib3 => {
                        if s == 0 {
                            for r in between() {
                                f(self.gsib(0, 0, r, t), Part::gsib(0, 0, r, t));
                            }
                        } else {
                            for g in grandparents() {
                                for r in between() {
                                    f(self.gsib(g, s, r, t), Part::gsib(g, s, r, t));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    /// All valid parts with their indices.
    pub fn parts(&self) -> Vec<(usize, Part)> {
        let mut out = Vec::new();
        self.for_each_part(|i, p| out.push((i, p)));
        out
    }
}

fn gsib_gslots(n: usize, s: usize, t: usize) -> usize {
    if s == 0 {
        1
    } else {
        n - s.abs_diff(t)
    }
}

/// Log-domain part scores `log w(p, x)` for one sentence and factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct PartScoreTable {
    space: PartSpace,
    scores: Vec<f64>,
}

impl PartScoreTable {
    pub fn zeros(n: usize, factorization: Factorization) -> Self {
        let space = PartSpace::new(n, factorization);
        let scores = vec![0.0; space.len()];
        PartScoreTable { space, scores }
    }

    pub fn from_scores(space: PartSpace, scores: Vec<f64>) -> Result<Self> {
        if scores.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: scores.len(),
            });
        }
        Ok(PartScoreTable { space, scores })
    }

    /// Fills every valid part with `f(part)`.
    pub fn from_fn(n: usize, factorization: Factorization, mut f: impl FnMut(&Part) -> f64) -> Self {
        let mut table = Self::zeros(n, factorization);
        let space = table.space.clone();
        space.for_each_part(|i, p| table.scores[i] = f(&p));
        table
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn factorization(&self) -> Factorization {
        self.space.factorization()
    }

    pub fn space(&self) -> &PartSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.scores
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.scores
    }

    /// Score of `part`, or `None` if it is not a part of this table.
    pub fn get(&self, part: &Part) -> Option<f64> {
        self.space.index(part).map(|i| self.scores[i])
    }

    pub fn set(&mut self, part: &Part, value: f64) -> Result<()> {
        let i = self
            .space
            .index(part)
            .ok_or_else(|| Error::InvalidPart(part.to_string(), self.n()))?;
        self.scores[i] = value;
        Ok(())
    }

    pub(crate) fn expect_factorization(&self, expected: Factorization) {
        assert_eq!(
            self.factorization(),
            expected,
            "score table factorization mismatch"
        );
    }
}

/// The parts of `tree` under `factorization`.
pub fn decompose(tree: &ProjectiveTree, factorization: Factorization) -> Vec<Part> {
    let n = tree.len();
    match factorization {
        Factorization::Dep1 => (1..=n).map(|m| Part::dep(tree.head(m), m)).collect(),
        Factorization::Sib2 => sibling_parts(tree).collect(),
        Factorization::Gch2 => (1..=n)
            .filter_map(|t| {
                let s = tree.head(t);
                (s >= 1).then(|| Part::gch(tree.head(s), s, t))
            })
            .collect(),
        Factorization::GSib3 => sibling_parts(tree)
            .map(|p| match p {
                Part::Sib {
                    head: 0,
                    inner,
                    modifier,
                } => Part::gsib(0, 0, inner, modifier),
                Part::Sib {
                    head,
                    inner,
                    modifier,
                } => Part::gsib(tree.head(head), head, inner, modifier),
                _ => unreachable!(),
            })
            .collect(),
    }
}

fn sibling_parts(tree: &ProjectiveTree) -> impl Iterator<Item = Part> + '_ {
    (0..=tree.len()).flat_map(move |h| {
        let chain = |mods: Vec<usize>| {
            let mut prev = None;
            mods.into_iter()
                .map(|m| {
                    let p = Part::sib(h, prev, m);
                    prev = Some(m);
                    p
                })
                .collect::<Vec<_>>()
        };
        let mut parts = chain(tree.left_modifiers(h).collect());
        parts.extend(chain(tree.right_modifiers(h).collect()));
        parts
    })
}

/// Sum of the part scores of `tree`.
pub fn tree_score(tree: &ProjectiveTree, scores: &PartScoreTable) -> f64 {
    decompose(tree, scores.factorization())
        .iter()
        .map(|p| {
            scores
                .get(p)
                .unwrap_or_else(|| panic!("{p} missing from score table"))
        })
        .sum()
}
