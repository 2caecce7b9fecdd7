use rayon::prelude::*;

use super::metric::{Metric, SweepIndex};
use crate::error::{invalid, Result};
use crate::geometry::{norm, PointSet};

const UNIT_TOL: f64 = 1e-9;

/// Robust-linkage activity flags on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityMask {
    pub active: Vec<bool>,
    /// Angular neighbor count of every point, itself included.
    pub counts: Vec<usize>,
    pub r_a: f64,
    pub tau: f64,
}

impl ActivityMask {
    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.active.len()).filter(|&i| self.active[i]).collect()
    }

    pub fn num_active(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }
}

/// Marks point `i` active iff at least `tau * n` points lie within angle `r_a` of it.
pub fn mark_active(points: &PointSet, r_a: f64, tau: f64) -> Result<ActivityMask> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(invalid(format!("tau must be in (0, 1], got {tau}")));
    }
    if !(r_a >= 0.0) {
        return Err(invalid(format!("r_a must be nonnegative, got {r_a}")));
    }
    if let Some(i) = points.rows().position(|x| (norm(x) - 1.0).abs() > UNIT_TOL) {
        return Err(invalid(format!("point {i} is not on the unit sphere")));
    }
    let index = SweepIndex::new(points, Metric::Angular);
    let mut counts = vec![0usize; points.len()];
    let by_position: Vec<usize> = (0..points.len()).into_par_iter().map(|p| index.count_within(p, r_a)).collect();
    for (p, &i) in index.order().iter().enumerate() {
        counts[i] = by_position[p];
    }
    let need = tau * points.len() as f64;
    Ok(ActivityMask {
        active: counts.iter().map(|&c| c as f64 >= need).collect(),
        counts,
        r_a,
        tau,
    })
}
