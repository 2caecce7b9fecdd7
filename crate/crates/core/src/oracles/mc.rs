//! Monte Carlo counterparts of the analytic geometry. The samplers here are
//! deliberately separate from `geometry::sampling`.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::{ball_slice_probability, cap_measure, unit_ball_volume};
use crate::problems::{InstanceKind, ProblemInstance};
use crate::rng::{self, Rng};

/// Acceptance band in standard errors.
pub const K_SE: f64 = 4.0;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCReport {
    pub estimate: f64,
    pub standard_error: f64,
    pub sample_count: usize,
    /// Target interval; a point target has `lo == hi`.
    pub target_lo: f64,
    pub target_hi: f64,
    pub passed: bool,
}

impl MCReport {
    /// Compares a Bernoulli mean against `[lo, hi]` with a `K_SE` band. A zero
    /// standard error (all hits or no hits) requires the estimate to lie in
    /// the interval up to rounding.
    pub fn from_hits(hits: usize, count: usize, lo: f64, hi: f64) -> Self {
        let n = count as f64;
        let p = hits as f64 / n;
        let var = if count > 1 { p * (1.0 - p) * n / (n - 1.0) } else { 0.0 };
        let se = (var / n).sqrt();
        Self::from_estimate(p, se, count, lo, hi)
    }

    pub fn from_estimate(estimate: f64, se: f64, count: usize, lo: f64, hi: f64) -> Self {
        let slack = (K_SE * se).max(1e-12);
        MCReport {
            estimate,
            standard_error: se,
            sample_count: count,
            target_lo: lo,
            target_hi: hi,
            passed: estimate >= lo - slack && estimate <= hi + slack,
        }
    }

    /// Distance from the target interval in standard errors.
    pub fn z(&self) -> f64 {
        let gap = if self.estimate < self.target_lo {
            self.target_lo - self.estimate
        } else if self.estimate > self.target_hi {
            self.estimate - self.target_hi
        } else {
            0.0
        };
        if self.standard_error > 0.0 {
            gap / self.standard_error
        } else if gap > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

/// Counts `hit` over `count` draws split into seeded chunks.
fn count_hits<F>(count: usize, seed: u64, draw: F) -> usize
where
    F: Fn(&mut Rng) -> bool + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::indexed_stream(seed, c as u64);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).filter(|_| draw(&mut r)).count()
        })
        .sum()
}

fn gaussian_direction(d: usize, r: &mut Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            return g.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Uniform point in the radius-`radius` ball by direction times `U^(1/d)`.
fn ball_point(d: usize, radius: f64, r: &mut Rng) -> Vec<f64> {
    let s = radius * r.random::<f64>().powf(1.0 / d as f64);
    gaussian_direction(d, r).into_iter().map(|x| x * s).collect()
}

/// Fraction of uniform points in `B(0, r)` whose first coordinate lies in `[0, rho]`.
pub fn mc_ball_slice(d: usize, r: f64, rho: f64, count: usize, seed: u64) -> Result<MCReport> {
    if count == 0 {
        return Err(invalid("Monte Carlo needs at least one sample"));
    }
    let target = ball_slice_probability(d, r, rho)?;
    let hits = count_hits(count, rng::derive_seed(seed, "mc/slice"), |g| {
        let x = ball_point(d, r, g);
        x[0] >= 0.0 && x[0] <= rho
    });
    Ok(MCReport::from_hits(hits, count, target, target))
}

/// Fraction of uniform sphere points within angle `radius` of a fixed pole.
pub fn mc_cap_measure(d: usize, radius: f64, count: usize, seed: u64) -> Result<MCReport> {
    let target = cap_measure(d, radius)?;
    let cos_r = radius.cos();
    let hits = count_hits(count, rng::derive_seed(seed, "mc/cap"), |g| gaussian_direction(d, g)[0] >= cos_r);
    Ok(MCReport::from_hits(hits, count, target, target))
}

/// `2^d` times the fraction of cube `[-1, 1]^d` points inside the unit ball.
pub fn mc_ball_volume(d: usize, count: usize, seed: u64) -> Result<MCReport> {
    let target = unit_ball_volume(d)?;
    let hits = count_hits(count, rng::derive_seed(seed, "mc/volume"), |g| {
        (0..d).map(|_| (2.0 * g.random::<f64>() - 1.0).powi(2)).sum::<f64>() <= 1.0
    });
    let scale = 2f64.powi(d as i32);
    let base = MCReport::from_hits(hits, count, target / scale, target / scale);
    Ok(MCReport::from_estimate(base.estimate * scale, base.standard_error * scale, count, target, target))
}

/// Uniform point of the support of a uniform one-vs-all instance, by
/// rejection from the cube around the unit ball.
fn one_vs_all_point(instance: &ProblemInstance, r: &mut Rng) -> Vec<f64> {
    let d = instance.dim;
    loop {
        let x: Vec<f64> = (0..d).map(|_| 2.0 * r.random::<f64>() - 1.0).collect();
        if x.iter().map(|v| v * v).sum::<f64>() > 1.0 {
            continue;
        }
        if instance.planes.iter().any(|p| p.w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() > p.b) {
            return x;
        }
    }
}

/// Band mass `{rho1 <= ang(w_i, x/|x|) <= rho2}` of the instance data, against
/// the quadrature of the lower and upper projected-density bounds over the band.
pub fn mc_projected_density(
    instance: &ProblemInstance,
    class: usize,
    band: (f64, f64),
    count: usize,
    seed: u64,
) -> Result<MCReport> {
    instance.require_kind(InstanceKind::OneVsAll)?;
    let plane = instance.planes.get(class).ok_or_else(|| invalid(format!("class {class} out of range")))?;
    let (rho1, rho2) = band;
    if !(0.0 <= rho1 && rho1 <= rho2 && rho2 <= plane.b.acos() + 1e-12) {
        return Err(invalid(format!("band [{rho1}, {rho2}] outside [0, arccos b]")));
    }
    let (lo, hi) = band_target(instance, class, band)?;
    let w = plane.w.clone();
    let hits = count_hits(count, rng::derive_seed(seed, "mc/projected"), |g| {
        let x = one_vs_all_point(instance, g);
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let c = (x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / n).clamp(-1.0, 1.0);
        let a = c.acos();
        a >= rho1 && a <= rho2
    });
    Ok(MCReport::from_hits(hits, count, lo, hi))
}

/// `int_band q dsigma` for the lower and upper bound, by polar-angle quadrature.
pub fn band_target(instance: &ProblemInstance, class: usize, band: (f64, f64)) -> Result<(f64, f64)> {
    use crate::geometry::quadrature::adaptive_simpson;
    let d = instance.dim;
    let w = &instance.planes[class].w;
    // Unit vector orthogonal to w.
    let mut u = vec![0.0; d];
    let k = (0..d).min_by(|&a, &b| w[a].abs().total_cmp(&w[b].abs())).unwrap_or(0);
    u[k] = 1.0;
    let proj: f64 = w[k];
    for (ui, wi) in u.iter_mut().zip(w) {
        *ui -= proj * wi;
    }
    let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    u.iter_mut().for_each(|v| *v /= un);
    let weight = |t: f64| t.sin().powi(d as i32 - 2);
    let total = adaptive_simpson(weight, 0.0, std::f64::consts::PI, 1e-12);
    let q = |t: f64, upper: bool| {
        let v: Vec<f64> = w.iter().zip(&u).map(|(a, b)| t.cos() * a + t.sin() * b).collect();
        let (l, h) = instance.projected_density_bounds(&v).unwrap_or((0.0, 0.0));
        (if upper { h } else { l }) * weight(t)
    };
    let lo = adaptive_simpson(|t| q(t, false), band.0, band.1, 1e-12) / total;
    let hi = adaptive_simpson(|t| q(t, true), band.0, band.1, 1e-12) / total;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::generate_one_vs_all;

    #[test]
    fn slice_edges() {
        let r = mc_ball_slice(3, 1.0, 0.0, 20_000, 1).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert!(r.passed);
        let r = mc_ball_slice(3, 1.0, 1.0, 20_000, 1).unwrap();
        assert!((r.estimate - 0.5).abs() < 0.02);
        assert!(r.passed);
    }

    #[test]
    fn slice_disk() {
        let r = mc_ball_slice(2, 1.0, 0.5f64.sqrt(), 200_000, 2).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.target_lo - 0.40915).abs() < 1e-5);
    }

    #[test]
    fn wrong_target_is_caught() {
        let r = mc_ball_slice(2, 1.0, 0.5, 200_000, 2).unwrap();
        let shifted = MCReport::from_estimate(r.estimate, r.standard_error, r.sample_count, r.target_lo + 0.01, r.target_lo + 0.01);
        assert!(!shifted.passed);
    }

    #[test]
    fn cap_and_volume() {
        assert!(mc_cap_measure(3, 0.7, 100_000, 3).unwrap().passed);
        assert!(mc_ball_volume(4, 100_000, 3).unwrap().passed);
    }

    #[test]
    fn projected_band_full_cap_is_class_mass() {
        let inst = generate_one_vs_all(3, 2, 0.5, 1).unwrap();
        let (lo, _) = band_target(&inst, 0, (0.0, 0.5f64.acos())).unwrap();
        assert!((lo - inst.certified.class_masses[0]).abs() < 1e-8);
        let r = mc_projected_density(&inst, 0, (0.2, 0.4), 100_000, 4).unwrap();
        assert!(r.passed, "{r:?}");
        let rim = mc_projected_density(&inst, 0, (0.5f64.acos() - 1e-3, 0.5f64.acos()), 20_000, 4).unwrap();
        assert!(rim.estimate < 1e-3);
    }
}
