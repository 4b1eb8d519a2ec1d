//! Edge-factored projective inference (Eisner's algorithm) over multi-root
//! trees: decoding, inside, outside, and arc marginals.
//!
//! Items are complete and incomplete spans; the arc score is absorbed when
//! an incomplete span is built from two adjacent complete spans.

use crate::chart::{self, Chart, ChartLayout, Derivations, Key, Production, Semiring, C_HL, C_HR, I_HL, I_HR};
use crate::inference::Marginals;
use crate::model::{Factorization, PartScoreTable, ProjectiveTree};

pub(crate) struct FirstOrder {
    layout: ChartLayout,
    n: usize,
}

impl FirstOrder {
    pub(crate) fn new(n: usize) -> Self {
        FirstOrder {
            layout: ChartLayout::plain(n),
            n,
        }
    }

    #[inline]
    fn arc(&self, head: usize, modifier: usize) -> usize {
        head * (self.n + 1) + modifier
    }
}

impl Derivations for FirstOrder {
    fn layout(&self) -> ChartLayout {
        self.layout
    }

    fn items_for_span(&self, s: usize, t: usize, out: &mut Vec<Key>) {
        // Right-headed items never cover the root.
        if s < t {
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
        match k.slot {
            I_HL | I_HR => {
                let w = if k.slot == I_HL {
                    self.arc(s, t)
                } else {
                    self.arc(t, s)
                };
                out.extend((s..t).map(|r| Production {
                    left: at(C_HL, s, r),
                    right: at(C_HR, r + 1, t),
                    weight: Some(w),
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
            _ => unreachable!("no sibling spans in the first-order chart"),
        }
    }

    fn goal(&self) -> Key {
        Key::new(C_HL, 0, 0, self.n)
    }
}

/// Highest-scoring projective tree under arc scores.
pub fn decode_dep1(scores: &PartScoreTable) -> ProjectiveTree {
    scores.expect_factorization(Factorization::Dep1);
    let d = FirstOrder::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::MaxTropical);
    ProjectiveTree::from_decoder(chart::backtrack(&d, &chart))
}

/// Inside chart and log partition function.
pub fn inside_dep1(scores: &PartScoreTable) -> (Chart, f64) {
    scores.expect_factorization(Factorization::Dep1);
    let d = FirstOrder::new(scores.n());
    let chart = chart::fill(&d, scores.values(), Semiring::LogSum);
    let log_z = chart::goal_value(&d, &chart);
    (chart, log_z)
}

/// Outside chart for an inside chart computed from the same scores.
pub fn outside_dep1(scores: &PartScoreTable, inside: &Chart) -> Chart {
    scores.expect_factorization(Factorization::Dep1);
    chart::outside(&FirstOrder::new(scores.n()), scores.values(), inside).0
}

/// Arc marginals.
pub fn marginals_dep1(scores: &PartScoreTable) -> Marginals {
    let (inside, log_z) = inside_dep1(scores);
    let (_, m) = chart::outside(&FirstOrder::new(scores.n()), scores.values(), &inside);
    Marginals::new(scores.space().clone(), m, log_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{Direction, SpanItem};
    use crate::model::Part;

    #[test]
    fn two_word_decode() {
        let mut t = PartScoreTable::zeros(2, Factorization::Dep1);
        t.set(&Part::dep(1, 2), 2.0).unwrap();
        t.set(&Part::dep(2, 1), -1.0).unwrap();
        assert_eq!(decode_dep1(&t).heads(), &[0, 1]);
    }

    #[test]
    fn single_word() {
        let mut t = PartScoreTable::zeros(1, Factorization::Dep1);
        t.set(&Part::dep(0, 1), 1.5).unwrap();
        assert_eq!(decode_dep1(&t).heads(), &[0]);
        let (_, log_z) = inside_dep1(&t);
        assert!((log_z - 1.5).abs() < 1e-15);
        assert!((marginals_dep1(&t).get(&Part::dep(0, 1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_partition_counts() {
        for (n, count) in [(2usize, 3.0f64), (3, 12.0), (4, 55.0)] {
            let (_, log_z) = inside_dep1(&PartScoreTable::zeros(n, Factorization::Dep1));
            assert!((log_z - count.ln()).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn uniform_marginals_two_words() {
        let t = PartScoreTable::zeros(2, Factorization::Dep1);
        let m = marginals_dep1(&t);
        for (p, want) in [
            (Part::dep(0, 1), 2.0 / 3.0),
            (Part::dep(1, 2), 1.0 / 3.0),
            (Part::dep(0, 2), 2.0 / 3.0),
            (Part::dep(2, 1), 1.0 / 3.0),
        ] {
            assert!((m.get(&p) - want).abs() < 1e-12, "{p}");
        }
        let (inside, log_z) = inside_dep1(&t);
        let alpha = outside_dep1(&t, &inside);
        let item = SpanItem::incomplete(0, 1, Direction::HeadLeft, None);
        let lm = inside.get(&item) + alpha.get(&item) - log_z;
        assert!((lm - (2.0f64 / 3.0).ln()).abs() < 1e-12);
        let top = SpanItem::complete(0, 2, Direction::HeadLeft, None);
        assert_eq!(alpha.get(&top), 0.0);
    }

    #[test]
    fn chart_is_quadratic() {
        let (chart, _) = inside_dep1(&PartScoreTable::zeros(10, Factorization::Dep1));
        assert_eq!(chart.cell_count(), 5 * 11 * 11);
    }
}
