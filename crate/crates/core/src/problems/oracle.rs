use std::sync::Arc;

use rand::Rng as _;

use super::instance::ProblemInstance;
use crate::error::{invalid, Error, Result};
use crate::geometry::{ClassId, PointSet};
use crate::rng;

/// Metered label oracle over a fixed sample.
///
/// With `eta > 0` each index's label is flipped, with probability `eta`, to a
/// uniformly random other class. The decision is keyed by `(noise_seed, index)`
/// so repeated queries of an index always agree.
#[derive(Debug, Clone)]
pub struct LabeledOracle {
    instance: Arc<ProblemInstance>,
    points: Arc<PointSet>,
    eta: f64,
    noise_seed: u64,
    query_count: u64,
    budget: Option<u64>,
}

impl LabeledOracle {
    pub fn new(instance: Arc<ProblemInstance>, points: Arc<PointSet>, eta: f64, noise_seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&eta) {
            return Err(invalid(format!("noise rate {eta} must lie in [0, 1)")));
        }
        Ok(Self { instance, points, eta, noise_seed, query_count: 0, budget: None })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn num_classes(&self) -> usize {
        self.instance.num_classes()
    }

    /// Label of sample point `index`.
    pub fn query(&mut self, index: usize) -> Result<ClassId> {
        if index >= self.points.len() {
            return Err(invalid(format!("sample index {index} out of range")));
        }
        self.charge()?;
        let truth = self.instance.label(self.points.row(index))?;
        Ok(self.noisy(truth, rng::derive_indexed(self.noise_seed, index as u64)))
    }

    /// Label of an arbitrary point; noise is keyed by the coordinates' bit patterns.
    pub fn query_point(&mut self, x: &[f64]) -> Result<ClassId> {
        self.charge()?;
        let truth = self.instance.label(x)?;
        let key = x.iter().fold(rng::derive_seed(self.noise_seed, "point"), |h, v| rng::mix64(h ^ v.to_bits()));
        Ok(self.noisy(truth, key))
    }

    /// Whether the label of `index` is flipped away from the truth; never metered.
    pub fn is_flipped(&self, index: usize) -> bool {
        self.flip_decision(rng::derive_indexed(self.noise_seed, index as u64)).is_some()
    }

    fn charge(&mut self) -> Result<()> {
        if let Some(budget) = self.budget {
            if self.query_count >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        self.query_count += 1;
        Ok(())
    }

    fn flip_decision(&self, key: u64) -> Option<usize> {
        let classes = self.instance.num_classes();
        if self.eta == 0.0 || classes < 2 {
            return None;
        }
        let mut r = rng::indexed_stream(key, 0);
        (r.random::<f64>() < self.eta).then(|| r.random_range(0..classes - 1))
    }

    fn noisy(&self, truth: ClassId, key: u64) -> ClassId {
        match self.flip_decision(key) {
            // Skip over the true class so the draw is uniform over the others.
            Some(k) if k >= truth => k + 1,
            Some(k) => k,
            None => truth,
        }
    }
}
