//! Randomized equivalence checks between the chart algorithms and the
//! enumeration oracle.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::inference::{decode, marginals};
use crate::model::{is_projective, tree_score, Factorization, PartScoreTable};
use crate::oracle::brute_force;

/// Relative tolerance on `log Z`.
pub const LOG_PARTITION_TOL: f64 = 1e-9;
/// Absolute tolerance on every part marginal and on per-modifier mass.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Worst deviations seen for one factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub factorization: Factorization,
    pub max_n: usize,
    pub tables: usize,
    /// `|log Z_chart - log Z_oracle| / max(1, |log Z_oracle|)`.
    pub log_partition_error: f64,
    pub marginal_error: f64,
    /// Largest `|1 - sum of marginals over parts with modifier t|`; `None`
    /// for factorizations where a word is not the outer modifier of exactly
    /// one part.
    pub modifier_mass_error: Option<f64>,
    /// Largest `oracle best - score(decoded tree)`; must be exactly zero.
    pub decode_gap: f64,
    pub invalid_decodes: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.log_partition_error < LOG_PARTITION_TOL
            && self.marginal_error < MARGINAL_TOL
            && self.modifier_mass_error.is_none_or(|e| e < MARGINAL_TOL)
            && self.decode_gap == 0.0
            && self.invalid_decodes == 0
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<6} n<={} tables={} logz_rel={:.3e} marginal={:.3e} mass={} decode_gap={:.3e} invalid={} {}",
            self.factorization,
            self.max_n,
            self.tables,
            self.log_partition_error,
            self.marginal_error,
            self.modifier_mass_error.map_or("-".to_string(), |e| format!("{e:.3e}")),
            self.decode_gap,
            self.invalid_decodes,
            if self.passed() { "ok" } else { "FAILED" },
        )
    }
}

/// Score table with entries drawn uniformly from `[-range, range]`.
pub fn random_table(n: usize, factorization: Factorization, range: f64, rng: &mut impl Rng) -> PartScoreTable {
    PartScoreTable::from_fn(n, factorization, |_| rng.gen_range(-range..=range))
}

fn has_unit_modifier_mass(f: Factorization) -> bool {
    !matches!(f, Factorization::Gch2)
}

/// Checks `trials` random tables for every length `1..=max_n`.
pub fn verify_factorization(factorization: Factorization, max_n: usize, trials: usize, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        factorization,
        max_n,
        tables: 0,
        log_partition_error: 0.0,
        marginal_error: 0.0,
        modifier_mass_error: has_unit_modifier_mass(factorization).then_some(0.0),
        decode_gap: 0.0,
        invalid_decodes: 0,
    };
    for n in 1..=max_n {
        let stream = seed ^ ((factorization as u64) << 32 | n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        for _ in 0..trials {
            let table = random_table(n, factorization, 2.0, &mut rng);
            let oracle = brute_force(&table)?;
            let chart = marginals(&table);

            let lz = (chart.log_partition() - oracle.log_partition).abs() / oracle.log_partition.abs().max(1.0);
            report.log_partition_error = report.log_partition_error.max(lz);

            let mut mass = vec![0.0; n + 1];
            for (part, &expected) in &oracle.marginals {
                let got = chart.get(part);
                report.marginal_error = report.marginal_error.max((got - expected).abs());
                mass[part.modifier()] += got;
            }
            if let Some(e) = report.modifier_mass_error.as_mut() {
                for &m in &mass[1..] {
                    *e = e.max((1.0 - m).abs());
                }
            }

            let tree = decode(&table);
            if !is_projective(tree.heads()).unwrap_or(false) {
                report.invalid_decodes += 1;
            }
            report.decode_gap = report.decode_gap.max(oracle.best_score - tree_score(&tree, &table));
            report.tables += 1;
        }
    }
    Ok(report)
}

/// Runs [`verify_factorization`] for all four factorizations.
pub fn verify_all(max_n: usize, trials: usize, seed: u64) -> Result<Vec<VerifyReport>> {
    Factorization::ALL
        .iter()
        .map(|&f| verify_factorization(f, max_n, trials, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_reproducible() {
        let a = verify_all(4, 10, 3).unwrap();
        assert!(a.iter().all(VerifyReport::passed), "{a:?}");
        assert_eq!(a, verify_all(4, 10, 3).unwrap());
    }
}
