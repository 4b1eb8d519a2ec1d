//! Brute-force reference inference by exhaustive enumeration of projective
//! trees. Slow by design; every chart algorithm is tested against it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{decompose, is_projective, tree_score, Part, PartScoreTable, ProjectiveTree};

/// Largest sentence length [`enumerate_projective`] accepts.
pub const MAX_ENUMERATION_N: usize = 8;

/// Everything the oracle knows about one score table.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub trees: Vec<ProjectiveTree>,
    pub log_partition: f64,
    /// Marginal of every valid part of the factorization, including zeros.
    pub marginals: BTreeMap<Part, f64>,
    pub best_tree: ProjectiveTree,
    pub best_score: f64,
}

/// All multi-root projective trees over `n` words, in lexicographic order of
/// head arrays.
pub fn enumerate_projective(n: usize) -> Result<Vec<ProjectiveTree>> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::EnumerationGuard { n, max: MAX_ENUMERATION_N });
    }
    let mut heads = vec![0usize; n];
    let mut trees = Vec::new();
    loop {
        if is_projective(&heads).unwrap_or(false) {
            trees.push(ProjectiveTree::new(heads.clone()).expect("validated above"));
        }
        // Odometer increment, last position fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(trees);
            }
            i -= 1;
            heads[i] += 1;
            if heads[i] <= n {
                break;
            }
            heads[i] = 0;
        }
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.compensation
    }
}

/// Partition function, marginals, and argmax by enumerating every tree.
pub fn brute_force(scores: &PartScoreTable) -> Result<EnumerationResult> {
    let trees = enumerate_projective(scores.n())?;
    let tree_scores: Vec<f64> = trees.iter().map(|t| tree_score(t, scores)).collect();

    let mut best = 0;
    for (i, &s) in tree_scores.iter().enumerate() {
        if s > tree_scores[best] {
            best = i;
        }
    }
    let best_score = tree_scores[best];

    let mut total = CompensatedSum::default();
    for &s in &tree_scores {
        total.add((s - best_score).exp());
    }
    let log_partition = best_score + total.value().ln();

    let mut sums: BTreeMap<Part, CompensatedSum> = scores
        .space()
        .parts()
        .into_iter()
        .map(|(_, p)| (p, CompensatedSum::default()))
        .collect();
    for (tree, &s) in trees.iter().zip(&tree_scores) {
        let prob = (s - log_partition).exp();
        for part in decompose(tree, scores.factorization()) {
            sums.get_mut(&part).expect("decomposition yields valid parts").add(prob);
        }
    }
    let marginals = sums.into_iter().map(|(p, s)| (p, s.value())).collect();

    Ok(EnumerationResult {
        best_tree: trees[best].clone(),
        trees,
        log_partition,
        marginals,
        best_score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Factorization;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Multi-root projective trees over n words are in bijection with
    // ternary trees on n nodes: C(3n, n) / (2n + 1).
    fn ternary(n: u64) -> u64 {
        let mut c: u64 = 1;
        for i in 0..n {
            c = c * (3 * n - i) / (i + 1);
        }
        c / (2 * n + 1)
    }

    #[test]
    fn tree_counts_match_ternary_numbers() {
        for n in 1..=6 {
            assert_eq!(enumerate_projective(n).unwrap().len() as u64, ternary(n as u64), "n={n}");
        }
    }

    #[test]
    fn two_word_trees_in_order() {
        let trees: Vec<Vec<usize>> = enumerate_projective(2)
            .unwrap()
            .into_iter()
            .map(|t| t.into_heads())
            .collect();
        assert_eq!(trees, vec![vec![0, 0], vec![0, 1], vec![2, 0]]);
    }

    #[test]
    fn guard_rejects_out_of_range() {
        assert!(enumerate_projective(0).is_err());
        assert!(enumerate_projective(9).is_err());
    }

    #[test]
    fn uniform_dep1_two_words() {
        let r = brute_force(&PartScoreTable::zeros(2, Factorization::Dep1)).unwrap();
        assert!((r.log_partition - 3f64.ln()).abs() < 1e-15);
        assert!((r.marginals[&Part::dep(0, 1)] - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.marginals[&Part::dep(1, 2)] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.best_tree.heads(), &[0, 0]);
    }

    #[test]
    fn single_word_any_factorization() {
        for f in Factorization::ALL {
            let mut t = PartScoreTable::zeros(1, f);
            for v in t.values_mut() {
                *v = 0.7;
            }
            let r = brute_force(&t).unwrap();
            let expected: f64 = decompose(&r.best_tree, f).iter().map(|_| 0.7).sum();
            assert!((r.log_partition - expected).abs() < 1e-15);
            for p in decompose(&r.best_tree, f) {
                assert!((r.marginals[&p] - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn grandchild_worked_case() {
        let mut t = PartScoreTable::zeros(2, Factorization::Gch2);
        t.set(&Part::gch(0, 1, 2), 1.0).unwrap();
        let r = brute_force(&t).unwrap();
        assert!((r.log_partition - (2.0 + 1f64.exp()).ln()).abs() < 1e-15);
    }

    #[test]
    fn invariants_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in Factorization::ALL {
            for n in 1..=4 {
                let t = PartScoreTable::from_fn(n, f, |_| rng.gen_range(-2.0..2.0));
                let r = brute_force(&t).unwrap();
                let mass: f64 = r.trees.iter().map(|y| (tree_score(y, &t) - r.log_partition).exp()).sum();
                assert!((mass - 1.0).abs() < 1e-12);
                assert!(r.best_score <= r.log_partition);
                assert!(r.marginals.values().all(|&m| (0.0..=1.0 + 1e-12).contains(&m)));
                if f == Factorization::Dep1 {
                    for m in 1..=n {
                        let s: f64 = (0..=n).filter(|&h| h != m).map(|h| r.marginals[&Part::dep(h, m)]).sum();
                        assert!((s - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
