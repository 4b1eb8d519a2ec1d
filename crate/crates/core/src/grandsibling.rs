//! Third-order grand-sibling model: decoding, inside, outside, and marginals.
//!
//! This is the sibling model with every span augmented by a grandparent
//! index. The sibling g-span `S^h(s, t)` carries the shared head `h` of its
//! two bounding modifiers. The grand-sibling weight `w(g, s, r, t)` is
//! absorbed where the incomplete g-span `I^g(s, r)` combines with
//! `S^s(r, t)` (or, for the inner-most modifier, where `I^g(s, t)` is built
//! from the complete span of `t`). Root-headed sibling groups use the
//! sentinel grandparent 0.

use crate::chart::{
    self, Chart, ChartLayout, Derivations, Key, Production, Semiring, C_HL, C_HR, I_HL, I_HR, SIB,
};
use crate::grandchild::outside_positions;
use crate::inference::Marginals;
use crate::model::{Factorization, PartScoreTable, PartSpace, ProjectiveTree};

pub(crate) struct GrandSibling {
    layout: ChartLayout,
    space: PartSpace,
}

impl GrandSibling {
    pub(crate) fn new(n: usize) -> Self {
        GrandSibling {
            layout: ChartLayout::grandparented(n),
            space: PartSpace::new(n, Factorization::GSib3),
        }
    }
}

impl Derivations for GrandSibling {
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
                out.push(Key::new(SIB, g, s, t));
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
        let gsib = |g, h, r, m| Some(self.space.gsib(g, h, r, m));
        if g == self.layout.no_grandparent() {
            match k.slot {
                I_HL => {
                    out.push(Production {
                        left: at(C_HL, g, 0, 0),
                        right: at(C_HR, 0, 1, t),
                        weight: gsib(0, 0, None, t),
                    });
                    out.extend((1..t).map(|r| Production {
                        left: at(I_HL, g, 0, r),
                        right: at(SIB, 0, r, t),
                        weight: gsib(0, 0, Some(r), t),
                    }));
                }
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
            SIB => out.extend((s..t).map(|r| Production {
                left: at(C_HL, g, s, r),
                right: at(C_HR, g, r + 1, t),
                weight: None,
            })),
            I_HL => {
                out.push(Production {
                    left: at(C_HL, g, s, s),
                    right: at(C_HR, s, s + 1, t),
                    weight: gsib(g, s, None, t),
                });
                out.extend((s + 1..t).map(|r| Production {
                    left: at(I_HL, g, s, r),
                    right: at(SIB, s, r, t),
                    weight: gsib(g, s, Some(r), t),
                }));
            }
            I_HR => {
                out.push(Production {
                    left: at(C_HL, t, s, t - 1),
                    right: at(C_HR, g, t, t),
                    weight: gsib(g, t, None, s),
                });
                out.extend((s + 1..t).map(|r| Production {
                    left: at(SIB, t, s, r),
                    right: at(I_HR, g, r, t),
                    weight: gsib(g, t, Some(r), s),
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

/// Highest-scoring projective tree under grand-sibling part scores.
pub fn decode_gsib3(scores: &PartScoreTable) -> ProjectiveTree {
    scores.expect_factorization(Factorization::GSib3);
    let d = GrandSibling::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::MaxTropical);
    ProjectiveTree::from_decoder(chart::backtrack(&d, &chart))
}

/// Inside chart and log partition function.
pub fn inside_gsib3(scores: &PartScoreTable) -> (Chart, f64) {
    scores.expect_factorization(Factorization::GSib3);
    let d = GrandSibling::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::LogSum);
    let log_z = chart::goal_value(&d, &chart);
    (chart, log_z)
}

/// Outside chart for an inside chart computed from the same scores.
pub fn outside_gsib3(scores: &PartScoreTable, inside: &Chart) -> Chart {
    scores.expect_factorization(Factorization::GSib3);
    chart::outside(&GrandSibling::new(scores.n()), scores.values(), inside).0
}

/// Grand-sibling part marginals, including inner-most `(g, s, -, t)` parts.
pub fn marginals_gsib3(scores: &PartScoreTable) -> Marginals {
    let (inside, log_z) = inside_gsib3(scores);
    let (_, m) = chart::outside(&GrandSibling::new(scores.n()), scores.values(), &inside);
    Marginals::new(scores.space().clone(), m, log_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{Direction, SpanItem};
    use crate::model::Part;

    #[test]
    fn decode_examples() {
        let mut t = PartScoreTable::zeros(2, Factorization::GSib3);
        t.set(&Part::gsib(0, 1, None, 2), 1.0).unwrap();
        assert_eq!(decode_gsib3(&t).heads(), &[0, 1]);
        let mut t = PartScoreTable::zeros(1, Factorization::GSib3);
        t.set(&Part::gsib(0, 0, None, 1), 0.5).unwrap();
        assert_eq!(decode_gsib3(&t).heads(), &[0]);
        assert!((inside_gsib3(&t).1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partition_examples() {
        for (n, count) in [(2usize, 3.0f64), (3, 12.0)] {
            let t = PartScoreTable::zeros(n, Factorization::GSib3);
            assert!((inside_gsib3(&t).1 - count.ln()).abs() < 1e-12);
        }
        let mut t = PartScoreTable::zeros(2, Factorization::GSib3);
        t.set(&Part::gsib(0, 0, Some(1), 2), 1.0).unwrap();
        assert!((inside_gsib3(&t).1 - (2.0 + 1f64.exp()).ln()).abs() < 1e-12);
    }

    #[test]
    fn uniform_marginals_two_words() {
        let t = PartScoreTable::zeros(2, Factorization::GSib3);
        let m = marginals_gsib3(&t);
        assert!((m.get(&Part::gsib(0, 0, None, 1)) - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.get(&Part::gsib(0, 0, Some(1), 2)) - 1.0 / 3.0).abs() < 1e-12);
        let one = marginals_gsib3(&PartScoreTable::zeros(1, Factorization::GSib3));
        assert!((one.get(&Part::gsib(0, 0, None, 1)) - 1.0).abs() < 1e-15);

        let (inside, _) = inside_gsib3(&t);
        let alpha = outside_gsib3(&t, &inside);
        assert_eq!(alpha.get(&SpanItem::complete(0, 2, Direction::HeadLeft, None)), 0.0);
    }
}
