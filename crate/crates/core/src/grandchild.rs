//! Second-order grandchild model over g-spans: decoding, inside, outside,
//! and marginals.
//!
//! Every complete and incomplete span carries the index `g` of its head's
//! own head, which lies outside the span. The grandchild weight
//! `w(g, s, t)` is absorbed once, when the incomplete g-span `I^g(s, t)` is
//! built. Spans headed by the root have no grandparent and form a separate
//! root-level pass; arcs leaving the root carry no grandchild part.

use crate::chart::{self, Chart, ChartLayout, Derivations, Key, Production, Semiring, C_HL, C_HR, I_HL, I_HR};
use crate::inference::Marginals;
use crate::model::{Factorization, PartScoreTable, PartSpace, ProjectiveTree};

pub(crate) struct Grandchild {
    layout: ChartLayout,
    space: PartSpace,
}

impl Grandchild {
    pub(crate) fn new(n: usize) -> Self {
        Grandchild {
            layout: ChartLayout::grandparented(n),
            space: PartSpace::new(n, Factorization::Gch2),
        }
    }
}

/// Grandparent positions outside `[s, t]`.
pub(crate) fn outside_positions(n: usize, s: usize, t: usize) -> impl Iterator<Item = usize> {
    (0..s).chain(t + 1..=n)
}

impl Derivations for Grandchild {
    fn layout(&self) -> ChartLayout {
        self.layout
    }

    fn items_for_span(&self, s: usize, t: usize, out: &mut Vec<Key>) {
        let n = self.layout.n();
        if s == 0 {
            let root = self.layout.no_grandparent();
            if t > 0 {
                out.push(Key::new(I_HL, root, 0, t));
            }
            out.push(Key::new(C_HL, root, 0, t));
            return;
        }
        for g in outside_positions(n, s, t) {
            if s < t {
                out.push(Key::new(I_HL, g, s, t));
                out.push(Key::new(I_HR, g, s, t));
            }
            out.push(Key::new(C_HL, g, s, t));
            out.push(Key::new(C_HR, g, s, t));
        }
    }

    fn productions(&self, k: Key, out: &mut Vec<Production>) {
        let at = |slot, g, l, r| self.layout.at(slot, g, l, r);
        let (g, s, t) = (k.g, k.l, k.r);
        if g == self.layout.no_grandparent() {
            match k.slot {
                I_HL => out.extend((0..t).map(|r| Production {
                    left: at(C_HL, g, 0, r),
                    right: at(C_HR, 0, r + 1, t),
                    weight: None,
                })),
                C_HL => out.extend((1..=t).map(|r| Production {
                    left: at(I_HL, g, 0, r),
                    right: at(C_HL, 0, r, t),
                    weight: None,
                })),
                _ => unreachable!(),
            }
            return;
        }
        match k.slot {
            I_HL => {
                let w = Some(self.space.gch(g, s, t));
                out.extend((s..t).map(|r| Production {
                    left: at(C_HL, g, s, r),
                    right: at(C_HR, s, r + 1, t),
                    weight: w,
                }));
            }
            I_HR => {
                let w = Some(self.space.gch(g, t, s));
                out.extend((s..t).map(|r| Production {
                    left: at(C_HL, t, s, r),
                    right: at(C_HR, g, r + 1, t),
                    weight: w,
                }));
            }
            C_HL => out.extend((s + 1..=t).map(|r| Production {
                left: at(I_HL, g, s, r),
                right: at(C_HL, s, r, t),
                weight: None,
            })),
            C_HR => out.extend((s..t).map(|r| Production {
                left: at(C_HR, t, s, r),
                right: at(I_HR, g, r, t),
                weight: None,
            })),
            _ => unreachable!(),
        }
    }

    fn goal(&self) -> Key {
        Key::new(C_HL, self.layout.no_grandparent(), 0, self.layout.n())
    }
}

/// Highest-scoring projective tree under grandchild-part scores.
pub fn decode_gch2(scores: &PartScoreTable) -> ProjectiveTree {
    scores.expect_factorization(Factorization::Gch2);
    let d = Grandchild::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::MaxTropical);
    ProjectiveTree::from_decoder(chart::backtrack(&d, &chart))
}

/// Inside chart over g-spans followed by the root pass; returns `log Z`.
pub fn inside_gch2(scores: &PartScoreTable) -> (Chart, f64) {
    scores.expect_factorization(Factorization::Gch2);
    let d = Grandchild::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::LogSum);
    let log_z = chart::goal_value(&d, &chart);
    (chart, log_z)
}

/// Outside chart for an inside chart computed from the same scores.
pub fn outside_gch2(scores: &PartScoreTable, inside: &Chart) -> Chart {
    scores.expect_factorization(Factorization::Gch2);
    chart::outside(&Grandchild::new(scores.n()), scores.values(), inside).0
}

/// Grandchild-part marginals `m(g, s, t) = beta(I^g) alpha(I^g) / Z`.
pub fn marginals_gch2(scores: &PartScoreTable) -> Marginals {
    let (inside, log_z) = inside_gch2(scores);
    let (_, m) = chart::outside(&Grandchild::new(scores.n()), scores.values(), &inside);
    Marginals::new(scores.space().clone(), m, log_z)
}
