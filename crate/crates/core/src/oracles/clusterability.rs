//! Numerical re-check of the clusterability properties for the canonical
//! one-vs-all construction: `A_i = {q_u^i >= eps}`, separating set
//! `S = {v : ang(v, w_i) >= rho_u^i(0) - r_a for all i}`.

use std::fmt;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::geometry::{cap_measure, Side};
use crate::learners::choose_connection_radius;
use crate::problems::{InstanceKind, ProblemInstance};
use crate::rng::{self, Rng};

/// Azimuths probed per class and property.
const PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterabilityParams {
    pub epsilon: f64,
    pub r_c: f64,
    pub r_a: f64,
    pub tau: f64,
    pub gamma: f64,
}

impl ClusterabilityParams {
    /// `r_c` from `choose_connection_radius`, `r_a = r_c / 2`,
    /// `tau = eps~ V(r_a) / 2`, `gamma = eps~ V(r_c / 3) / 4`.
    pub fn for_instance(instance: &ProblemInstance, epsilon: f64) -> Result<Self> {
        let r_c = choose_connection_radius(instance, epsilon)?;
        let d = instance.dim;
        let eps_t = instance.certified.c_lb / instance.certified.c_ub * epsilon;
        let r_a = r_c / 2.0;
        Ok(ClusterabilityParams {
            epsilon,
            r_c,
            r_a,
            tau: eps_t * cap_measure(d, r_a)? / 2.0,
            gamma: eps_t * cap_measure(d, r_c / 3.0)? / 4.0,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub property: u8,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterabilityReport {
    pub params: ClusterabilityParams,
    pub properties: Vec<PropertyOutcome>,
}

impl ClusterabilityReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn property(&self, k: u8) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.property == k)
    }
}

impl fmt::Display for ClusterabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            writeln!(f, "({}) {} {}", p.property, if p.passed { "pass" } else { "FAIL" }, p.detail)?;
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unit vector orthogonal to `v`, uniformly random.
fn tangent(v: &[f64], r: &mut Rng) -> Vec<f64> {
    loop {
        let mut g: Vec<f64> = v.iter().map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let p = dot(&g, v);
        g.iter_mut().zip(v).for_each(|(a, b)| *a -= p * b);
        let n = dot(&g, &g).sqrt();
        if n > 1e-9 {
            return g.into_iter().map(|x| x / n).collect();
        }
    }
}

fn rotate_towards(v: &[f64], u: &[f64], theta: f64) -> Vec<f64> {
    v.iter().zip(u).map(|(a, b)| theta.cos() * a + theta.sin() * b).collect()
}

/// Uniform point of the spherical cap `cap(v, radius)`: polar angle with density
/// proportional to `sin^(d-2)` by rejection from `theta^(d-2)`.
fn cap_point(v: &[f64], radius: f64, r: &mut Rng) -> Vec<f64> {
    let d = v.len();
    let theta = loop {
        let t = radius * r.random::<f64>().powf(1.0 / (d as f64 - 1.0));
        let accept = if t > 0.0 { (t.sin() / t).powi(d as i32 - 2) } else { 1.0 };
        if r.random::<f64>() <= accept {
            break t;
        }
    };
    rotate_towards(v, &tangent(v, r), theta)
}

/// Projected density of the uniform-on-caps construction at a unit vector,
/// from the radial integral `c int_{b/(w.u)}^1 t^(d-1) dt` scaled by `d v_d`.
fn radial_density(instance: &ProblemInstance, c: f64, u: &[f64]) -> f64 {
    let d = instance.dim as i32;
    let vd = std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half(d);
    instance
        .planes
        .iter()
        .map(|p| {
            let s = dot(&p.w, u);
            if s > p.b {
                c * vd * (1.0 - (p.b / s).powi(d))
            } else {
                0.0
            }
        })
        .sum()
}

/// `Gamma(d/2 + 1)` by the half-integer recurrence.
fn gamma_half(d: i32) -> f64 {
    let (mut g, mut x) = if d % 2 == 0 { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt() / 2.0, 1.5) };
    while x < d as f64 / 2.0 + 1.0 - 1e-9 {
        g *= x;
        x += 1.0;
    }
    g
}

/// `P(cap(v, radius))` by averaging the density over uniform cap points.
fn cap_mass(instance: &ProblemInstance, c: f64, v: &[f64], radius: f64, count: usize, r: &mut Rng) -> Result<f64> {
    let mean = (0..count).map(|_| radial_density(instance, c, &cap_point(v, radius, r))).sum::<f64>() / count as f64;
    Ok(cap_measure(instance.dim, radius)? * mean)
}

/// Spot-checks properties (1)-(5) with `mc_budget` density evaluations per probe.
pub fn check_clusterability(
    instance: &ProblemInstance,
    params: ClusterabilityParams,
    mc_budget: usize,
    seed: u64,
) -> Result<ClusterabilityReport> {
    instance.require_kind(InstanceKind::OneVsAll)?;
    let ClusterabilityParams { epsilon, r_c, r_a, tau, gamma } = params;
    let (c_lb, c_ub) = (instance.certified.c_lb, instance.certified.c_ub);
    let count = mc_budget.max(1);
    let mut r = rng::stream(seed, "oracle/clusterability");
    let classes = instance.num_classes();
    let outer: Vec<f64> = (0..classes).map(|i| instance.cap_radius(i, 0.0, Side::Upper)).collect::<Result<_>>()?;
    let level: Vec<f64> = (0..classes).map(|i| instance.cap_radius(i, epsilon, Side::Upper)).collect::<Result<_>>()?;
    let mut properties = Vec::new();

    // (1) each A_i is a nonempty cap.
    let empty: Vec<usize> = (0..classes).filter(|&i| !(level[i] > 0.0)).collect();
    properties.push(PropertyOutcome {
        property: 1,
        passed: empty.is_empty(),
        detail: if empty.is_empty() { "every A_i is a nonempty cap".into() } else { format!("empty A_i for classes {empty:?}") },
    });

    // (2) probes at angle rho_u(eps) + r_c/3 from w_i.
    let mut worst2 = f64::INFINITY;
    // (3) probes on the rim of A_i.
    let mut worst3 = f64::INFINITY;
    // (5) probes on the inner edge of S.
    let mut worst5 = f64::NEG_INFINITY;
    for (i, p) in instance.planes.iter().enumerate() {
        for _ in 0..PROBES {
            let u = tangent(&p.w, &mut r);
            let near = rotate_towards(&p.w, &u, level[i] + r_c / 3.0);
            worst2 = worst2.min(cap_mass(instance, c_lb, &near, r_a, count, &mut r)?);
            let rim = rotate_towards(&p.w, &u, level[i]);
            worst3 = worst3.min(cap_mass(instance, c_lb, &rim, r_c / 3.0, count, &mut r)?);
            let edge = rotate_towards(&p.w, &u, outer[i] - r_a);
            worst5 = worst5.max(cap_mass(instance, c_ub, &edge, r_a, count, &mut r)?);
        }
    }
    properties.push(PropertyOutcome {
        property: 2,
        passed: worst2 > tau + gamma,
        detail: format!("min P(B(x, r_a)) near A_i = {worst2:.4e}, needs > tau + gamma = {:.4e}", tau + gamma),
    });
    properties.push(PropertyOutcome {
        property: 3,
        passed: worst3 > gamma,
        detail: format!("min P(B(x, r_c/3)) in A_i = {worst3:.4e}, needs > gamma = {gamma:.4e}"),
    });

    // (4) each annulus of width r_a lies outside A_i and inside S; two of them
    // give crossing length 2 r_a, which must reach r_c.
    let mut reasons = Vec::new();
    for i in 0..classes {
        if outer[i] - r_a <= level[i] {
            reasons.push(format!("annulus of class {i} meets A_{i}"));
        }
        for j in i + 1..classes {
            let sep = dot(&instance.planes[i].w, &instance.planes[j].w).clamp(-1.0, 1.0).acos();
            if sep < outer[i] + outer[j] {
                reasons.push(format!("caps {i} and {j} overlap"));
            }
        }
    }
    if r_c > 2.0 * r_a * (1.0 + 1e-12) {
        reasons.push(format!("r_c = {r_c:.4e} exceeds twice the annulus width {r_a:.4e}"));
    }
    properties.push(PropertyOutcome {
        property: 4,
        passed: reasons.is_empty(),
        detail: if reasons.is_empty() { format!("S has width >= 2 r_a = {:.4e}", 2.0 * r_a) } else { reasons.join("; ") },
    });

    properties.push(PropertyOutcome {
        property: 5,
        passed: worst5 < tau - gamma,
        detail: format!("max P(B(x, r_a)) in S = {worst5:.4e}, needs < tau - gamma = {:.4e}", tau - gamma),
    });
    Ok(ClusterabilityReport { params, properties })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::unit_ball_volume;
    use crate::problems::generate_one_vs_all;

    #[test]
    fn gamma_matches_ball_volume() {
        for d in 1..9 {
            let vd = std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half(d);
            assert!((vd - unit_ball_volume(d as usize).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_density_matches_lemma() {
        let inst = generate_one_vs_all(3, 3, 0.5, 2).unwrap();
        let mut r = rng::stream(1, "t");
        for _ in 0..50 {
            let u = cap_point(&inst.planes[0].w, 1.0, &mut r);
            let (lo, _) = inst.projected_density_bounds(&u).unwrap();
            assert!((radial_density(&inst, inst.certified.c_lb, &u) - lo).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_points_stay_in_cap() {
        let v = vec![0.0, 0.0, 1.0, 0.0];
        let mut r = rng::stream(3, "t");
        for _ in 0..1000 {
            let p = cap_point(&v, 0.3, &mut r);
            assert!((dot(&p, &p) - 1.0).abs() < 1e-12);
            assert!(dot(&p, &v).clamp(-1.0, 1.0).acos() <= 0.3 + 1e-12);
        }
    }

    #[test]
    fn certified_instance_is_clusterable() {
        let inst = generate_one_vs_all(3, 3, 0.5, 1).unwrap();
        let params = ClusterabilityParams::for_instance(&inst, 0.15).unwrap();
        let report = check_clusterability(&inst, params, 2_000, 1).unwrap();
        assert!(report.all_passed(), "{report}");

        let inflated = ClusterabilityParams { tau: params.tau * 10.0, ..params };
        let report = check_clusterability(&inst, inflated, 2_000, 1).unwrap();
        assert!(!report.property(2).unwrap().passed);

        let wide = ClusterabilityParams { r_c: params.r_a * 2.5, ..params };
        let report = check_clusterability(&inst, wide, 2_000, 1).unwrap();
        assert!(!report.property(4).unwrap().passed);
    }
}
