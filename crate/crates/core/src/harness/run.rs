use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{invalid, Error, Result};
use crate::geometry::ClassId;
use crate::learners::{agnostic_wrap, Classifier, Diagnostics, Learned};
use crate::problems::{draw_heldout, draw_sample, HeldOutSet, LabeledOracle};
use crate::rng;

/// Fraction of `heldout` points whose prediction differs from the true label.
pub fn estimate_error(classifier: &Classifier, heldout: &HeldOutSet) -> Result<f64> {
    error_against(classifier, heldout, &heldout.labels)
}

/// Fraction of `heldout` points whose prediction differs from `labels`.
pub fn error_against(classifier: &Classifier, heldout: &HeldOutSet, labels: &[ClassId]) -> Result<f64> {
    if heldout.points.is_empty() {
        return Err(invalid("held-out set is empty"));
    }
    if labels.len() != heldout.points.len() {
        return Err(invalid("label count differs from held-out size"));
    }
    Ok(disagreement(&classifier.predict_all(&heldout.points)?, labels))
}

fn disagreement(predicted: &[ClassId], labels: &[ClassId]) -> f64 {
    let wrong = predicted.iter().zip(labels).filter(|(p, y)| p != y).count();
    wrong as f64 / labels.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub config_digest: String,
    pub repetition: usize,
    pub seed: u64,
    pub kind: String,
    pub algorithm: String,
    pub d: usize,
    pub n: usize,
    pub labels_used: usize,
    /// Held-out error against the noiseless labeling; `None` if the run failed.
    pub error: Option<f64>,
    /// Held-out error against noisy labels drawn like the oracle's.
    pub noisy_error: Option<f64>,
    pub success: bool,
    pub status: RunStatus,
    pub message: String,
    pub runtime_ms: f64,
    pub diagnostics: Diagnostics,
}

/// Seeds of one repetition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepetitionSeeds {
    pub root: u64,
    pub sample: u64,
    pub heldout: u64,
    pub noise: u64,
    pub learner: u64,
}

impl RepetitionSeeds {
    pub fn new(seed_base: u64, repetition: usize) -> Self {
        let root = rng::derive_indexed(seed_base, repetition as u64);
        RepetitionSeeds {
            root,
            sample: rng::derive_seed(root, "sample"),
            heldout: rng::derive_seed(root, "heldout"),
            noise: rng::derive_seed(root, "noise"),
            learner: rng::derive_seed(root, "learner"),
        }
    }
}

/// Everything produced by one repetition, for callers that need more than
/// the summary row.
#[derive(Debug, Clone)]
pub struct RepetitionOutput {
    pub result: RunResult,
    pub learned: Option<Learned>,
    pub oracle: Option<LabeledOracle>,
}

/// Runs one repetition of `config`.
pub fn run_repetition(config: &ExperimentConfig, repetition: usize) -> Result<RepetitionOutput> {
    config.validate()?;
    let digest = config.digest()?;
    let seeds = RepetitionSeeds::new(config.seed_base, repetition);
    let start = Instant::now();
    let mut result = RunResult {
        config_digest: digest,
        repetition,
        seed: seeds.root,
        kind: String::new(),
        algorithm: config.algorithm.id().to_string(),
        d: 0,
        n: config.n,
        labels_used: 0,
        error: None,
        noisy_error: None,
        success: false,
        status: RunStatus::Failed,
        message: String::new(),
        runtime_ms: 0.0,
        diagnostics: Diagnostics::default(),
    };
    let mut oracle_out = None;
    let outcome = (|| -> Result<(Learned, f64, f64)> {
        let instance = Arc::new(config.instance(seeds.root)?);
        result.kind = instance.kind.as_str().to_string();
        result.d = instance.dim;
        if let Some(kind) = config.expected_kind() {
            instance.require_kind(kind)?;
        }
        let learner = config.algorithm.resolve(&instance, seeds.learner)?;
        let points = Arc::new(draw_sample(&instance, config.n, seeds.sample)?.points);
        let mut oracle = LabeledOracle::new(instance.clone(), points, config.eta, seeds.noise)?;
        let learned = match config.t_per_group {
            None => learner.learn(&mut oracle),
            Some(t) => agnostic_wrap(&learner, &mut oracle, t, seeds.learner),
        };
        result.labels_used = oracle.query_count() as usize;
        oracle_out = Some(oracle);
        let learned = learned?;
        let heldout = draw_heldout(&instance, config.heldout_size, seeds.heldout)?;
        let predicted = learned.classifier.predict_all(&heldout.points)?;
        let error = disagreement(&predicted, &heldout.labels);
        let held_points = Arc::new(heldout.points.clone());
        let mut noisy = LabeledOracle::new(instance, held_points, config.eta, rng::derive_seed(seeds.noise, "heldout"))?;
        let noisy_labels = (0..heldout.points.len()).map(|i| noisy.query(i)).collect::<Result<Vec<_>>>()?;
        let noisy_error = disagreement(&predicted, &noisy_labels);
        Ok((learned, error, noisy_error))
    })();
    result.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let learned = match outcome {
        Ok((learned, error, noisy_error)) => {
            debug_assert_eq!(learned.ledger.total(), result.labels_used);
            result.error = Some(error);
            result.noisy_error = Some(noisy_error);
            result.status = RunStatus::Ok;
            result.diagnostics = learned.diagnostics;
            result.success = config.target_error.is_none_or(|e| error <= e)
                && config.label_cap.is_none_or(|c| result.labels_used <= c);
            Some(learned)
        }
        Err(e) => {
            if let Error::Partial { ledger, .. } = &e {
                result.labels_used = ledger.total();
            }
            result.message = e.to_string();
            None
        }
    };
    Ok(RepetitionOutput { result, learned, oracle: oracle_out })
}

/// All repetitions of `config`, in repetition order. Errors inside a
/// repetition are recorded in its row; only an invalid config fails the call.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    (0..config.repetitions)
        .into_par_iter()
        .map(|i| run_repetition(config, i).map(|o| o.result))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{AlgorithmConfig, InstanceSource};
    use crate::problems::{generate_ecoc, GeneratorSpec, RegionShape};

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            name: String::new(),
            instance: InstanceSource::Generate {
                spec: GeneratorSpec::Ecoc { d: 2, components: 2, margin: 0.3, shape: RegionShape::Ball },
                seed: 1,
                per_repetition: false,
            },
            n: 800,
            algorithm: AlgorithmConfig::Sl { r_c: 0.15, epsilon: 0.1 },
            eta: 0.0,
            t_per_group: None,
            heldout_size: 1000,
            repetitions: 3,
            seed_base: 5,
            target_error: Some(0.1),
            label_cap: Some(2),
        }
    }

    #[test]
    fn perfect_and_constant_classifiers() {
        use crate::clustering::{LabeledClustering, Metric};
        let inst = generate_ecoc(2, 2, 0.3, RegionShape::Ball, 1).unwrap();
        let held = draw_heldout(&inst, 4000, 2).unwrap();
        let exact = LabeledClustering::new(Metric::Euclidean, held.points.clone(), held.labels.clone(), vec![Some(0), Some(1)]).unwrap();
        assert_eq!(estimate_error(&Classifier::Clusters(exact), &held).unwrap(), 0.0);
        let constant = LabeledClustering::new(Metric::Euclidean, held.points.clone(), vec![0; 4000], vec![Some(0)]).unwrap();
        let e = estimate_error(&Classifier::Clusters(constant), &held).unwrap();
        let mass1 = inst.certified.class_masses[1];
        let se = (mass1 * (1.0 - mass1) / 4000.0).sqrt();
        assert!((e - mass1).abs() <= 4.0 * se, "{e} vs {mass1}");
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run_experiment(&config()).unwrap();
        let b = run_experiment(&config()).unwrap();
        assert_eq!(a.len(), 3);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.error, y.error);
            assert_eq!(x.labels_used, y.labels_used);
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.status, RunStatus::Ok);
            assert!(x.success);
        }
    }

    #[test]
    fn generator_errors_are_recorded() {
        let mut cfg = config();
        cfg.instance = InstanceSource::Generate {
            spec: GeneratorSpec::Ecoc { d: 2, components: 2, margin: 5.0, shape: RegionShape::Ball },
            seed: 1,
            per_repetition: false,
        };
        let rows = run_experiment(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.status == RunStatus::Failed && !r.success && !r.message.is_empty()));
    }
}
