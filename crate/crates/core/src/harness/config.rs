use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::geometry::unit_ball_volume;
use crate::learners::{choose_connection_radius, detection_threshold, BaseLearner, DirectionSearch};
use crate::problems::{generate, read_instance, GeneratorSpec, InstanceKind, ProblemInstance};

/// Where the instance of an experiment comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InstanceSource {
    Generate {
        #[serde(flatten)]
        spec: GeneratorSpec,
        #[serde(with = "crate::rng::seed_serde")]
        seed: u64,
        /// Draw a fresh instance seed for every repetition.
        #[serde(default)]
        per_repetition: bool,
    },
    File { path: PathBuf },
}

/// Learner parameters; unset values are derived from the instance certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum AlgorithmConfig {
    Sl {
        r_c: f64,
        epsilon: f64,
    },
    Hier {
        t: usize,
    },
    Sphere {
        epsilon: f64,
        /// Defaults to the analytic connection radius.
        r_c: Option<f64>,
        tau: Option<f64>,
    },
    Planes {
        /// Defaults to half the certified witness radius.
        r: Option<f64>,
        tau: Option<f64>,
        /// Used for `tau` when `tau` is unset; defaults to [`default_alpha`].
        alpha: Option<f64>,
        /// Target error used by the default `alpha`.
        #[serde(default = "default_planes_epsilon")]
        epsilon: f64,
        /// Defaults to the number of classes.
        cells: Option<usize>,
        #[serde(default = "default_directions")]
        directions: usize,
        #[serde(default = "default_refine_steps")]
        refine_steps: usize,
    },
}

fn default_planes_epsilon() -> f64 {
    0.1
}

fn default_directions() -> usize {
    64
}

fn default_refine_steps() -> usize {
    100
}

impl AlgorithmConfig {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmConfig::Sl { .. } => "sl",
            AlgorithmConfig::Hier { .. } => "hier",
            AlgorithmConfig::Sphere { .. } => "sphere",
            AlgorithmConfig::Planes { .. } => "planes",
        }
    }

    /// Concrete learner for `instance`; `learner_seed` drives any randomness.
    pub fn resolve(&self, instance: &ProblemInstance, learner_seed: u64) -> Result<BaseLearner> {
        let cert = &instance.certified;
        Ok(match *self {
            AlgorithmConfig::Sl { r_c, epsilon } => BaseLearner::SingleLinkage { r_c, epsilon },
            AlgorithmConfig::Hier { t } => BaseLearner::Hierarchical { t, seed: learner_seed },
            AlgorithmConfig::Sphere { epsilon, r_c, tau } => {
                let r_c = match r_c {
                    Some(r) => r,
                    None => choose_connection_radius(instance, epsilon)?,
                };
                BaseLearner::RobustSphere { r_c, epsilon, c_lb: cert.c_lb, c_ub: cert.c_ub, tau }
            }
            AlgorithmConfig::Planes { r, tau, alpha, epsilon, cells, directions, refine_steps } => {
                let big_r = cert.scale_r;
                let r = match (r, big_r) {
                    (Some(r), _) => r,
                    (None, Some(big_r)) => big_r / 2.0,
                    (None, None) => return Err(invalid("instance has no certified witness radius; pass r")),
                };
                let tau = match tau {
                    Some(t) => t,
                    None => {
                        let alpha = match alpha {
                            Some(a) => a,
                            None => default_alpha(
                                epsilon,
                                instance.planes.len(),
                                instance.dim,
                                big_r.unwrap_or(2.0 * r),
                                cert.diameter,
                                cert.c_lb,
                            )?,
                        };
                        detection_threshold(instance.dim, r, cert.c_lb, alpha)?
                    }
                };
                BaseLearner::PlaneDetection {
                    r,
                    tau,
                    cells: cells.unwrap_or_else(|| instance.num_classes()),
                    domain: instance.domain.clone(),
                    search: DirectionSearch { directions, refine_steps, seed: learner_seed },
                }
            }
        })
    }
}

/// `eps^2 / (m^2 2^d R^2 D^(2d) v_d^2 c_lb^2)`, the order of the detection
/// constant in the edge-detection analysis with its hidden constant set to 1.
pub fn default_alpha(epsilon: f64, m: usize, d: usize, big_r: f64, diameter: f64, c_lb: f64) -> Result<f64> {
    let v = unit_ball_volume(d)?;
    let denom = (m * m) as f64 * 2f64.powi(d as i32) * big_r * big_r * diameter.powi(2 * d as i32) * v * v * c_lb * c_lb;
    Ok((epsilon * epsilon / denom).min(0.5))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub instance: InstanceSource,
    pub n: usize,
    #[serde(flatten)]
    pub algorithm: AlgorithmConfig,
    #[serde(default)]
    pub eta: f64,
    /// Majority-vote queries per group; unset runs the realizable learner.
    pub t_per_group: Option<usize>,
    #[serde(default = "default_heldout")]
    pub heldout_size: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(with = "crate::rng::seed_serde")]
    pub seed_base: u64,
    /// Success threshold on held-out error.
    pub target_error: Option<f64>,
    /// Success threshold on labels used.
    pub label_cap: Option<usize>,
}

fn default_heldout() -> usize {
    10_000
}

fn default_repetitions() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(invalid("repetitions must be at least 1"));
        }
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if self.heldout_size == 0 {
            return Err(invalid("heldout_size must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.eta) {
            return Err(invalid(format!("eta must lie in [0, 1), got {}", self.eta)));
        }
        if self.t_per_group == Some(0) {
            return Err(invalid("t_per_group must be at least 1"));
        }
        match self.algorithm {
            AlgorithmConfig::Hier { t } if t == 0 || t > self.n => {
                Err(invalid(format!("t must be in 1..={}, got {t}", self.n)))
            }
            _ => Ok(()),
        }
    }

    /// Hex SHA-256 prefix of the canonical TOML form.
    pub fn digest(&self) -> Result<String> {
        let text = toml::to_string(self)?;
        Ok(hex::encode(&Sha256::digest(text.as_bytes())[..8]))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// The instance of repetition seed `rep_seed`.
    pub fn instance(&self, rep_seed: u64) -> Result<ProblemInstance> {
        match &self.instance {
            InstanceSource::Generate { spec, seed, per_repetition } => {
                let seed = if *per_repetition { crate::rng::derive_seed(rep_seed, "instance") } else { *seed };
                generate(spec, seed)
            }
            InstanceSource::File { path } => read_instance(path),
        }
    }

    pub fn expected_kind(&self) -> Option<InstanceKind> {
        match self.algorithm {
            AlgorithmConfig::Sphere { .. } => Some(InstanceKind::OneVsAll),
            _ => None,
        }
    }
}

/// A list of experiments run by `bench`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub experiment: Vec<ExperimentConfig>,
}

impl BenchConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: Self = toml::from_str(&std::fs::read_to_string(path)?)?;
        if cfg.experiment.is_empty() {
            return Err(Error::Format("bench file lists no [[experiment]]".into()));
        }
        for e in &cfg.experiment {
            e.validate()?;
        }
        Ok(cfg)
    }
}
