use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::instance::{Domain, InstanceKind, ProblemInstance, Region};
use crate::error::{invalid, Error, Result};
use crate::geometry::sampling::uniform_in_ball;
use crate::geometry::{ClassId, PointSet};
use crate::rng::{self, Rng};

/// An unlabeled i.i.d. sample from an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub points: PointSet,
    pub seed: u64,
    pub instance_seed: u64,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Points with their ground-truth labels, drawn from a stream disjoint from training.
#[derive(Debug, Clone, PartialEq)]
pub struct HeldOutSet {
    pub points: PointSet,
    pub labels: Vec<ClassId>,
}

const MIN_ACCEPTANCE: f64 = 1e-4;
const MIN_ATTEMPTS_BEFORE_GIVING_UP: u64 = 100_000;

/// Draws `n` i.i.d. points from the uniform density on the instance support.
pub fn draw_sample(instance: &ProblemInstance, n: usize, seed: u64) -> Result<Sample> {
    if n == 0 {
        return Err(invalid("sample size must be at least 1"));
    }
    let mut rng = rng::stream(seed, "sample");
    let points = draw_points(instance, n, &mut rng)?;
    Ok(Sample { points, seed, instance_seed: instance.seed })
}

/// Held-out points use their own seed stream so they never coincide with training draws.
pub fn draw_heldout(instance: &ProblemInstance, n: usize, seed: u64) -> Result<HeldOutSet> {
    if n == 0 {
        return Err(invalid("held-out size must be at least 1"));
    }
    let mut rng = rng::stream(seed, "heldout");
    let points = draw_points(instance, n, &mut rng)?;
    let labels = points.rows().map(|x| instance.label(x)).collect::<Result<Vec<_>>>()?;
    Ok(HeldOutSet { points, labels })
}

fn draw_points(instance: &ProblemInstance, n: usize, rng: &mut Rng) -> Result<PointSet> {
    let mut points = PointSet::with_capacity(instance.dim, n);
    match instance.kind {
        InstanceKind::Ecoc => {
            // Regions are disjoint: pick one by measure, then draw uniformly inside it.
            let weights: Vec<f64> = instance.regions.iter().map(Region::measure).collect();
            let total: f64 = weights.iter().sum();
            for _ in 0..n {
                let mut u = rng.random::<f64>() * total;
                let mut pick = weights.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    if u < *w {
                        pick = i;
                        break;
                    }
                    u -= w;
                }
                points.push(&uniform_in_region(&instance.regions[pick], rng))?;
            }
        }
        InstanceKind::OneVsAll | InstanceKind::BoundaryFeatures => {
            let mut attempts = 0u64;
            while points.len() < n {
                attempts += 1;
                let x = uniform_in_domain(&instance.domain, rng);
                if instance.in_support(&x) {
                    points.push(&x)?;
                }
                if attempts >= MIN_ATTEMPTS_BEFORE_GIVING_UP {
                    let rate = points.len() as f64 / attempts as f64;
                    if rate < MIN_ACCEPTANCE {
                        return Err(Error::SamplerEfficiency { rate });
                    }
                }
            }
        }
    }
    Ok(points)
}

pub(crate) fn uniform_in_region(region: &Region, rng: &mut Rng) -> Vec<f64> {
    match region {
        Region::Ball { center, radius } => uniform_in_ball(center, *radius, rng),
        Region::Cube { center, half_side } => center
            .iter()
            .map(|c| c + half_side * (2.0 * rng.random::<f64>() - 1.0))
            .collect(),
        Region::Patch { center, basis, half_width } => {
            let mut p = center.clone();
            for b in basis {
                let t = half_width * (2.0 * rng.random::<f64>() - 1.0);
                p.iter_mut().zip(b).for_each(|(x, bv)| *x += t * bv);
            }
            p
        }
    }
}

pub(crate) fn uniform_in_domain(domain: &Domain, rng: &mut Rng) -> Vec<f64> {
    match domain {
        Domain::Ball { center, radius } => uniform_in_ball(center, *radius, rng),
        Domain::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| l + (h - l) * rng.random::<f64>()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{generate_ecoc, generate_one_vs_all, RegionShape};

    #[test]
    fn deterministic_and_in_support() {
        let inst = generate_ecoc(2, 3, 0.3, RegionShape::Ball, 5).unwrap();
        let a = draw_sample(&inst, 500, 11).unwrap();
        let b = draw_sample(&inst, 500, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.points.rows().all(|x| inst.in_support(x)));
        let c = draw_sample(&inst, 500, 12).unwrap();
        assert_ne!(a.points, c.points);
        assert!(draw_sample(&inst, 0, 1).is_err());
        assert_eq!(draw_sample(&inst, 1, 1).unwrap().len(), 1);
    }

    #[test]
    fn heldout_stream_differs_from_training() {
        let inst = generate_one_vs_all(3, 2, 0.5, 0).unwrap();
        let s = draw_sample(&inst, 50, 3).unwrap();
        let h = draw_heldout(&inst, 50, 3).unwrap();
        assert_ne!(s.points, h.points);
        assert_eq!(h.labels.len(), 50);
    }

    #[test]
    fn thin_instance_is_rejected() {
        let inst = generate_one_vs_all(3, 1, 0.999_9, 0).unwrap();
        assert!(matches!(draw_sample(&inst, 10, 0), Err(Error::SamplerEfficiency { .. })));
    }

    /// Empirical mass of a reference ball inside one region against `c * vol`.
    #[test]
    fn reference_ball_mass() {
        let inst = generate_ecoc(2, 2, 0.3, RegionShape::Ball, 0).unwrap();
        let center = inst.regions[0].center().to_vec();
        let n = 200_000;
        let s = draw_sample(&inst, n, 8).unwrap();
        let r = 0.05;
        let hits = s.points.rows().filter(|x| crate::geometry::dist(x, &center) <= r).count();
        let p = inst.certified.c_lb * std::f64::consts::PI * r * r;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() < 4.0 * se);
    }
}
