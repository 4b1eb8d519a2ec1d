//! Second-order sibling model: decoding, inside, outside, and marginals.
//!
//! Besides complete and incomplete spans the chart holds sibling spans
//! `S(s, t)` covering the region between two successive modifiers of a
//! shared head. An incomplete span grows by combining a smaller incomplete
//! span with a sibling span, absorbing the weight of the sibling part; the
//! first (inner-most) modifier is attached from a complete span directly.

use crate::chart::{
    self, Chart, ChartLayout, Derivations, Key, Production, Semiring, C_HL, C_HR, I_HL, I_HR, SIB,
};
use crate::inference::Marginals;
use crate::model::{Factorization, PartScoreTable, PartSpace, ProjectiveTree};

pub(crate) struct Sibling {
    layout: ChartLayout,
    space: PartSpace,
}

impl Sibling {
    pub(crate) fn new(n: usize) -> Self {
        Sibling {
            layout: ChartLayout::plain(n),
            space: PartSpace::new(n, Factorization::Sib2),
        }
    }
}

impl Derivations for Sibling {
    fn layout(&self) -> ChartLayout {
        self.layout
    }

    fn items_for_span(&self, s: usize, t: usize, out: &mut Vec<Key>) {
        if s < t {
            if s >= 1 {
                out.push(Key::new(SIB, 0, s, t));
            }
            out.push(Key::new(I_HL, 0, s, t));
            if s >= 1 {
                out.push(Key::new(I_HR, 0, s, t));
            }
        }
        out.push(Key::new(C_HL, 0, s, t));
        if s >= 1 {
            out.push(Key::new(C_HR, 0, s, t));
        }
    }

    fn productions(&self, k: Key, out: &mut Vec<Production>) {
        let at = |slot, l, r| self.layout.at(slot, 0, l, r);
        let (s, t) = (k.l, k.r);
        let sib = |h, r, m| Some(self.space.sib(h, r, m));
        match k.slot {
            SIB => out.extend((s..t).map(|r| Production {
                left: at(C_HL, s, r),
                right: at(C_HR, r + 1, t),
                weight: None,
            })),
            I_HL => {
                out.push(Production {
                    left: at(C_HL, s, s),
                    right: at(C_HR, s + 1, t),
                    weight: sib(s, None, t),
                });
                out.extend((s + 1..t).map(|r| Production {
                    left: at(I_HL, s, r),
                    right: at(SIB, r, t),
                    weight: sib(s, Some(r), t),
                }));
            }
            I_HR => {
                out.push(Production {
                    left: at(C_HL, s, t - 1),
                    right: at(C_HR, t, t),
                    weight: sib(t, None, s),
                });
                out.extend((s + 1..t).map(|r| Production {
                    left: at(SIB, s, r),
                    right: at(I_HR, r, t),
                    weight: sib(t, Some(r), s),
                }));
            }
            C_HL => out.extend((s + 1..=t).map(|r| Production {
                left: at(I_HL, s, r),
                right: at(C_HL, r, t),
                weight: None,
            })),
            C_HR => out.extend((s..t).map(|r| Production {
                left: at(C_HR, s, r),
                right: at(I_HR, r, t),
                weight: None,
            })),
            _ => unreachable!(),
        }
    }

    fn goal(&self) -> Key {
        Key::new(C_HL, 0, 0, self.layout.n())
    }
}

/// Highest-scoring projective tree under sibling-part scores.
pub fn decode_sib2(scores: &PartScoreTable) -> ProjectiveTree {
    scores.expect_factorization(Factorization::Sib2);
    let d = Sibling::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::MaxTropical);
    ProjectiveTree::from_decoder(chart::backtrack(&d, &chart))
}

/// Inside chart and log partition function.
pub fn inside_sib2(scores: &PartScoreTable) -> (Chart, f64) {
    scores.expect_factorization(Factorization::Sib2);
    let d = Sibling::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::LogSum);
    let log_z = chart::goal_value(&d, &chart);
    (chart, log_z)
}

/// Outside chart for an inside chart computed from the same scores.
pub fn outside_sib2(scores: &PartScoreTable, inside: &Chart) -> Chart {
    scores.expect_factorization(Factorization::Sib2);
    chart::outside(&Sibling::new(scores.n()), scores.values(), inside).0
}

/// Sibling-part marginals, including the inner-most `(s, -, t)` parts.
pub fn marginals_sib2(scores: &PartScoreTable) -> Marginals {
    let (inside, log_z) = inside_sib2(scores);
    let (_, m) = chart::outside(&Sibling::new(scores.n()), scores.values(), &inside);
    Marginals::new(scores.space().clone(), m, log_z)
}
