//! Factorization-independent entry points to the chart algorithms.

use std::collections::BTreeMap;

use crate::first_order::{decode_dep1, inside_dep1, marginals_dep1};
use crate::grandchild::{decode_gch2, inside_gch2, marginals_gch2};
use crate::grandsibling::{decode_gsib3, inside_gsib3, marginals_gsib3};
use crate::model::{Factorization, Part, PartScoreTable, PartSpace, ProjectiveTree};
use crate::sibling::{decode_sib2, inside_sib2, marginals_sib2};

/// Marginal probability of every candidate part, with the log partition
/// function it was normalized by.
#[derive(Debug, Clone)]
pub struct Marginals {
    space: PartSpace,
    values: Vec<f64>,
    log_partition: f64,
}

impl Marginals {
    pub(crate) fn new(space: PartSpace, values: Vec<f64>, log_partition: f64) -> Self {
        debug_assert_eq!(space.len(), values.len());
        Marginals { space, values, log_partition }
    }

    /// Probability of `part`; 0 for parts outside the space.
    pub fn get(&self, part: &Part) -> f64 {
        self.space.index(part).map_or(0.0, |i| self.values[i])
    }

    pub fn space(&self) -> &PartSpace {
        &self.space
    }

    /// Values in `PartSpace` index order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn to_map(&self) -> BTreeMap<Part, f64> {
        let mut map = BTreeMap::new();
        self.space.for_each_part(|i, p| {
            map.insert(p, self.values[i]);
        });
        map
    }
}

/// Highest-scoring projective tree for the table's factorization.
pub fn decode(scores: &PartScoreTable) -> ProjectiveTree {
    match scores.factorization() {
        Factorization::Dep1 => decode_dep1(scores),
        Factorization::Sib2 => decode_sib2(scores),
        Factorization::Gch2 => decode_gch2(scores),
        Factorization::GSib3 => decode_gsib3(scores),
    }
}

/// `log Z` for the table's factorization.
pub fn log_partition(scores: &PartScoreTable) -> f64 {
    match scores.factorization() {
        Factorization::Dep1 => inside_dep1(scores).1,
        Factorization::Sib2 => inside_sib2(scores).1,
        Factorization::Gch2 => inside_gch2(scores).1,
        Factorization::GSib3 => inside_gsib3(scores).1,
    }
}

/// Part marginals for the table's factorization.
pub fn marginals(scores: &PartScoreTable) -> Marginals {
    match scores.factorization() {
        Factorization::Dep1 => marginals_dep1(scores),
        Factorization::Sib2 => marginals_sib2(scores),
        Factorization::Gch2 => marginals_gch2(scores),
        Factorization::GSib3 => marginals_gsib3(scores),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_counts_every_factorization() {
        for f in Factorization::ALL {
            for (n, count) in [(1usize, 1.0f64), (2, 3.0), (3, 12.0), (4, 55.0)] {
                let t = PartScoreTable::zeros(n, f);
                assert!((log_partition(&t) - count.ln()).abs() < 1e-10, "{f} n={n}");
            }
        }
    }

    #[test]
    fn marginals_absent_part_is_zero() {
        let m = marginals(&PartScoreTable::zeros(2, Factorization::Dep1));
        assert_eq!(m.get(&Part::sib(0, None, 1)), 0.0);
        assert_eq!(m.to_map().len(), m.space().parts().len());
    }
}
