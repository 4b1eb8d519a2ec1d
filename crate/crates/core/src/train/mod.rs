//! Maximum conditional likelihood training with L2 regularization.

mod lbfgs;
mod model_file;

pub use lbfgs::{minimize, Iterate, LbfgsConfig, LbfgsOutcome};
pub use model_file::{Model, MODEL_FORMAT_VERSION};

use std::cell::Cell;

use log::{debug, info};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::{build_dictionary, FeatureDictionary, SentenceFeatures, WeightVector};
use crate::inference::marginals;
use crate::model::{decompose, Factorization, Part, ProjectiveTree, Sentence};

/// Sentences are evaluated in chunks of this size so that at most this many
/// marginal tables are alive at once.
const CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// L2 coefficient `C` in `L(lambda) - C/2 |lambda|^2`.
    pub regularizer_c: f64,
    pub max_iterations: usize,
    pub lbfgs_history: usize,
    pub convergence_rel_tol: f64,
    pub worker_count: usize,
    /// Training sentences with more words are skipped.
    pub max_len: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            regularizer_c: 0.01,
            max_iterations: 200,
            lbfgs_history: 10,
            convergence_rel_tol: 1e-6,
            worker_count: 1,
            max_len: 100,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.regularizer_c >= 0.0 && self.regularizer_c.is_finite()) {
            return Err(Error::Config(format!("regularizer C must be a finite non-negative number, got {}", self.regularizer_c)));
        }
        if self.lbfgs_history == 0 {
            return Err(Error::Config("L-BFGS history must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        if self.convergence_rel_tol.is_nan() || self.convergence_rel_tol < 0.0 {
            return Err(Error::Config("convergence tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub log_likelihood: f64,
    pub regularized_objective: f64,
    pub gradient_norm: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveReport {
    pub log_likelihood: f64,
    /// `log_likelihood - C/2 |lambda|^2`.
    pub regularized_objective: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub excluded_sentences: usize,
    /// One entry per accepted iteration; entry 0 is the starting point.
    pub history: Vec<IterationRecord>,
}

/// Value and gradient of the regularized log-likelihood at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub log_likelihood: f64,
    pub objective: f64,
    pub gradient: Vec<f64>,
}

/// The training objective over a fixed corpus, with per-sentence features
/// resolved once.
pub struct Objective {
    factorization: Factorization,
    regularizer_c: f64,
    dim: usize,
    features: Vec<SentenceFeatures>,
    gold_parts: Vec<Vec<Part>>,
    /// Summed gold feature counts `sum_k F(y_k, x_k)`.
    empirical: Vec<f64>,
    pool: rayon::ThreadPool,
}

impl Objective {
    pub fn new(
        corpus: &[(Sentence, ProjectiveTree)],
        dictionary: &FeatureDictionary,
        factorization: Factorization,
        config: &TrainConfig,
    ) -> Result<Self> {
        config.validate()?;
        for (sentence, tree) in corpus {
            if sentence.len() != tree.len() {
                return Err(Error::DimensionMismatch {
                    expected: sentence.len(),
                    found: tree.len(),
                });
            }
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.worker_count)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        let features: Vec<SentenceFeatures> = pool.install(|| {
            corpus
                .par_iter()
                .map(|(s, _)| SentenceFeatures::new(s, factorization, dictionary))
                .collect()
        });
        let gold_parts: Vec<Vec<Part>> = corpus.iter().map(|(_, t)| decompose(t, factorization)).collect();
        let mut empirical = vec![0.0; dictionary.len()];
        for (sf, parts) in features.iter().zip(&gold_parts) {
            sf.accumulate_parts(parts, 1.0, &mut empirical);
        }
        debug!(
            "cached {} feature occurrences for {} sentences",
            features.iter().map(SentenceFeatures::feature_occurrences).sum::<usize>(),
            features.len()
        );
        Ok(Objective {
            factorization,
            regularizer_c: config.regularizer_c,
            dim: dictionary.len(),
            features,
            gold_parts,
            empirical,
            pool,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factorization(&self) -> Factorization {
        self.factorization
    }

    /// Per-sentence inference runs on the worker pool; results are reduced
    /// in sentence order, so the output does not depend on the worker count.
    pub fn evaluate(&self, weights: &[f64]) -> Result<Evaluation> {
        if weights.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: weights.len(),
            });
        }
        let mut log_likelihood = 0.0;
        let mut gradient = self.empirical.clone();
        let indices: Vec<usize> = (0..self.features.len()).collect();
        for chunk in indices.chunks(CHUNK) {
            let results: Vec<(f64, Vec<f64>)> = self.pool.install(|| {
                chunk
                    .par_iter()
                    .map(|&k| {
                        let table = self.features[k].score(weights);
                        let gold: f64 = self.gold_parts[k]
                            .iter()
                            .map(|p| table.get(p).expect("gold part in space"))
                            .sum();
                        let m = marginals(&table);
                        (gold - m.log_partition(), m.values().to_vec())
                    })
                    .collect()
            });
            for (&k, (ll, mass)) in chunk.iter().zip(results) {
                log_likelihood += ll;
                self.features[k].accumulate(&mass, -1.0, &mut gradient);
            }
        }
        let c = self.regularizer_c;
        let mut norm_sq = 0.0;
        for (g, &w) in gradient.iter_mut().zip(weights) {
            *g -= c * w;
            norm_sq += w * w;
        }
        Ok(Evaluation {
            log_likelihood,
            objective: log_likelihood - 0.5 * c * norm_sq,
            gradient,
        })
    }
}

/// Regularized log-likelihood and its gradient at `weights`.
pub fn objective_and_gradient(
    corpus: &[(Sentence, ProjectiveTree)],
    dictionary: &FeatureDictionary,
    weights: &WeightVector,
    factorization: Factorization,
    config: &TrainConfig,
) -> Result<(f64, Vec<f64>)> {
    let e = Objective::new(corpus, dictionary, factorization, config)?.evaluate(weights.as_slice())?;
    Ok((e.objective, e.gradient))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Builds the feature dictionary and maximizes the regularized
/// log-likelihood from `lambda = 0` with L-BFGS.
pub fn train(
    corpus: &[(Sentence, ProjectiveTree)],
    factorization: Factorization,
    config: &TrainConfig,
) -> Result<(WeightVector, FeatureDictionary, ObjectiveReport)> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut kept = Vec::with_capacity(corpus.len());
    for (k, example) in corpus.iter().enumerate() {
        if example.0.len() > config.max_len {
            info!(
                "excluding training sentence {} ({} words > max length {})",
                k + 1,
                example.0.len(),
                config.max_len
            );
        } else {
            kept.push(example.clone());
        }
    }
    let excluded_sentences = corpus.len() - kept.len();
    if excluded_sentences > 0 {
        info!("excluded {excluded_sentences} of {} training sentences by length", corpus.len());
    }
    let dictionary = build_dictionary(&kept, factorization)?;
    info!("{} sentences, {} features, factorization {factorization}", kept.len(), dictionary.len());
    let objective = Objective::new(&kept, &dictionary, factorization, config)?;

    let start = objective.evaluate(&vec![0.0; dictionary.len()])?;
    let mut history = vec![IterationRecord {
        iteration: 0,
        log_likelihood: start.log_likelihood,
        regularized_objective: start.objective,
        gradient_norm: norm(&start.gradient),
        step: 0.0,
    }];
    let last_ll = Cell::new(start.log_likelihood);
    let lbfgs = LbfgsConfig {
        history: config.lbfgs_history,
        max_iterations: config.max_iterations,
        rel_tol: config.convergence_rel_tol,
        ..LbfgsConfig::default()
    };
    let outcome = minimize(
        vec![0.0; dictionary.len()],
        |w| {
            let e = objective.evaluate(w)?;
            last_ll.set(e.log_likelihood);
            Ok((-e.objective, e.gradient.into_iter().map(|g| -g).collect()))
        },
        &lbfgs,
        |it| {
            // The accepted point is always the last one evaluated.
            let rec = IterationRecord {
                iteration: it.iteration,
                log_likelihood: last_ll.get(),
                regularized_objective: -it.value,
                gradient_norm: it.gradient_norm,
                step: it.step,
            };
            info!(
                "iteration {:>3}: objective {:.6e} log-likelihood {:.6e} |grad| {:.3e} step {:.3e}",
                rec.iteration, rec.regularized_objective, rec.log_likelihood, rec.gradient_norm, rec.step
            );
            history.push(rec);
        },
    )?;
    let last = *history.last().expect("history starts with the initial point");
    let report = ObjectiveReport {
        log_likelihood: last.log_likelihood,
        regularized_objective: -outcome.value,
        gradient_norm: norm(&outcome.gradient),
        iterations: outcome.iterations,
        converged: outcome.converged,
        excluded_sentences,
        history,
    };
    info!(
        "finished after {} iterations ({}), objective {:.6e}",
        report.iterations,
        if report.converged { "converged" } else { "iteration limit" },
        report.regularized_objective
    );
    Ok((WeightVector::from_vec(outcome.x)?, dictionary, report))
}
