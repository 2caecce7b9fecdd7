use serde::{Deserialize, Serialize};

use super::hierarchical::hierarchical_with;
use super::labeling::LabelPolicy;
use super::planes::{plane_detection_with, DirectionSearch};
use super::single_linkage::single_linkage_with;
use super::sphere::robust_sphere_with;
use super::Learned;
use crate::error::{invalid, Result};
use crate::problems::{Domain, LabeledOracle};

/// Purity a pruning node's labels need under noisy labels.
pub const AGNOSTIC_PURITY: f64 = 0.75;

/// A base learner with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum BaseLearner {
    SingleLinkage { r_c: f64, epsilon: f64 },
    Hierarchical { t: usize, seed: u64 },
    RobustSphere { r_c: f64, epsilon: f64, c_lb: f64, c_ub: f64, tau: Option<f64> },
    PlaneDetection { r: f64, tau: f64, cells: usize, domain: Domain, search: DirectionSearch },
}

impl BaseLearner {
    pub fn id(&self) -> &'static str {
        match self {
            BaseLearner::SingleLinkage { .. } => "sl",
            BaseLearner::Hierarchical { .. } => "hier",
            BaseLearner::RobustSphere { .. } => "sphere",
            BaseLearner::PlaneDetection { .. } => "planes",
        }
    }

    /// Runs the learner in its realizable form.
    pub fn learn(&self, oracle: &mut LabeledOracle) -> Result<Learned> {
        run(self, oracle, LabelPolicy::First, 1.0)
    }
}

fn run(base: &BaseLearner, oracle: &mut LabeledOracle, policy: LabelPolicy, purity: f64) -> Result<Learned> {
    match base {
        BaseLearner::SingleLinkage { r_c, epsilon } => single_linkage_with(oracle, *r_c, *epsilon, policy),
        BaseLearner::Hierarchical { t, seed } => hierarchical_with(oracle, *t, *seed, purity),
        BaseLearner::RobustSphere { r_c, epsilon, c_lb, c_ub, tau } => {
            robust_sphere_with(oracle, *r_c, *epsilon, *c_lb, *c_ub, *tau, policy)
        }
        BaseLearner::PlaneDetection { r, tau, cells, domain, search } => {
            plane_detection_with(oracle, *r, *tau, *cells, domain, *search, policy, search.seed)
        }
    }
}

/// Runs `base` with `t_per_group` majority-vote queries per labeled group.
/// The hierarchical learner instead queries its random subset once per point
/// and requires a 3/4 majority in each pruning node (exact purity when
/// `t_per_group == 1`).
pub fn agnostic_wrap(base: &BaseLearner, oracle: &mut LabeledOracle, t_per_group: usize, seed: u64) -> Result<Learned> {
    if t_per_group == 0 {
        return Err(invalid("t_per_group must be at least 1"));
    }
    let policy = LabelPolicy::Majority { t: t_per_group, seed };
    let purity = if t_per_group == 1 { 1.0 } else { AGNOSTIC_PURITY };
    run(base, oracle, policy, purity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::geometry::PointSet;
    use crate::problems::{draw_sample, generate_ecoc, RegionShape};

    #[test]
    fn t1_noiseless_equals_base() {
        let inst = Arc::new(generate_ecoc(2, 3, 0.3, RegionShape::Ball, 2).unwrap());
        let pts = Arc::new(draw_sample(&inst, 1500, 2).unwrap().points);
        let probe: PointSet = draw_sample(&inst, 300, 99).unwrap().points;
        for base in [BaseLearner::SingleLinkage { r_c: 0.15, epsilon: 0.1 }, BaseLearner::Hierarchical { t: 20, seed: 4 }] {
            let mut o1 = LabeledOracle::new(inst.clone(), pts.clone(), 0.0, 1).unwrap();
            let mut o2 = LabeledOracle::new(inst.clone(), pts.clone(), 0.0, 1).unwrap();
            let a = base.learn(&mut o1).unwrap();
            let b = agnostic_wrap(&base, &mut o2, 1, 77).unwrap();
            assert_eq!(a.classifier, b.classifier);
            assert_eq!(a.ledger, b.ledger);
            assert_eq!(a.classifier.predict_all(&probe).unwrap(), b.classifier.predict_all(&probe).unwrap());
        }
    }

    #[test]
    fn majority_queries_are_counted() {
        let inst = Arc::new(generate_ecoc(2, 2, 0.3, RegionShape::Ball, 2).unwrap());
        let pts = Arc::new(draw_sample(&inst, 1500, 2).unwrap().points);
        let mut o = LabeledOracle::new(inst, pts, 0.05, 1).unwrap();
        let out = agnostic_wrap(&BaseLearner::SingleLinkage { r_c: 0.15, epsilon: 0.1 }, &mut o, 25, 3).unwrap();
        assert_eq!(out.ledger.total(), 50);
        assert_eq!(o.query_count(), 50);
    }
}
