use super::labeling::LabelPolicy;
use super::ledger::QueryLedger;
use super::single_linkage::{check_epsilon, label_by_size, stopping_mass};
use super::{Classifier, Diagnostics, Learned};
use crate::clustering::{mark_active, radius_components_strict, LabeledClustering, Metric};
use crate::error::{invalid, Error, Result};
use crate::geometry::{cap_measure, normalize, PointSet, Side};
use crate::problems::{InstanceKind, LabeledOracle, ProblemInstance};

/// Activity threshold `(c_lb / (2 c_ub)) V^d(r_a) epsilon`.
pub fn activity_threshold(d: usize, r_a: f64, epsilon: f64, c_lb: f64, c_ub: f64) -> Result<f64> {
    Ok(c_lb / (2.0 * c_ub) * cap_measure(d, r_a)? * epsilon)
}

/// Connection radius from the two activation-radius constraints of the
/// one-vs-all analysis, `r_c = 2 min_i r_a,i`.
pub fn choose_connection_radius(instance: &ProblemInstance, epsilon: f64) -> Result<f64> {
    instance.require_kind(InstanceKind::OneVsAll)?;
    check_epsilon(epsilon)?;
    let cert = &instance.certified;
    let eps_t = cert.c_lb / cert.c_ub * epsilon;
    let infeasible = |e: Error| match e {
        Error::EmptyLevelSet(msg) => Error::Infeasible(format!("{msg}; use a smaller epsilon")),
        other => other,
    };
    let mut r_a = f64::INFINITY;
    for class in 0..instance.num_classes() {
        let rho = |level: f64, side: Side| instance.cap_radius(class, level, side).map_err(infeasible);
        let first = 0.6 * (rho(0.75 * eps_t, Side::Lower)? - rho(epsilon, Side::Upper)?);
        let second = 0.5 * (rho(0.0, Side::Upper)? - rho(0.25 * eps_t, Side::Upper)?);
        r_a = r_a.min(first).min(second);
    }
    if !(r_a > 0.0) {
        return Err(Error::Infeasible(format!(
            "no positive activation radius satisfies both constraints at epsilon {epsilon}; use a smaller epsilon"
        )));
    }
    Ok(2.0 * r_a)
}

pub(crate) fn project(points: &PointSet) -> Result<PointSet> {
    let mut out = PointSet::with_capacity(points.dim(), points.len());
    for (i, x) in points.rows().enumerate() {
        let v = normalize(x).ok_or_else(|| invalid(format!("sample point {i} is the origin")))?;
        out.push(&v)?;
    }
    Ok(out)
}

pub(crate) fn robust_sphere_with(
    oracle: &mut LabeledOracle,
    r_c: f64,
    epsilon: f64,
    c_lb: f64,
    c_ub: f64,
    tau_override: Option<f64>,
    policy: LabelPolicy,
) -> Result<Learned> {
    oracle.instance().require_kind(InstanceKind::OneVsAll)?;
    check_epsilon(epsilon)?;
    if !(r_c > 0.0) {
        return Err(invalid(format!("connection radius must be positive, got {r_c}")));
    }
    if !(c_lb > 0.0 && c_lb <= c_ub) {
        return Err(invalid(format!("density bounds must satisfy 0 < c_lb <= c_ub, got {c_lb}, {c_ub}")));
    }
    let sphere = project(oracle.points())?;
    let d = sphere.dim();
    let n = sphere.len();
    let r_a = r_c / 2.0;
    let tau = match tau_override {
        Some(t) => t,
        None => activity_threshold(d, r_a, epsilon, c_lb, c_ub)?,
    };
    let mask = mark_active(&sphere, r_a, tau)?;
    let active = mask.active_indices();
    if active.is_empty() {
        return Err(Error::Degenerate(format!("no point has {tau:.3e} n neighbors within angle {r_a:.3e}")));
    }
    let active_points = sphere.select(&active);
    let clusters = radius_components_strict(&active_points, r_c, Metric::Angular)?;
    let members: Vec<Vec<usize>> = clusters
        .members()
        .into_iter()
        .map(|m| m.into_iter().map(|k| active[k]).collect())
        .collect();
    let mut ledger = QueryLedger::new();
    let stop = stopping_mass(epsilon, n);
    let (labels, sources) = label_by_size(&clusters, &members, stop, oracle, &mut ledger, policy)?;
    let mut clustering = LabeledClustering::new(Metric::Angular, active_points, clusters.assignment.clone(), labels)?;
    clustering.label_sources = sources;
    let diagnostics = Diagnostics {
        clusters: clusters.num_clusters(),
        active: Some(active.len()),
        ..Diagnostics::default()
    };
    Ok(Learned { classifier: Classifier::Clusters(clustering), ledger, diagnostics })
}

/// Robust single-linkage learning on the unit sphere for one-vs-all instances.
pub fn robust_sphere_learn(oracle: &mut LabeledOracle, r_c: f64, epsilon: f64, c_lb: f64, c_ub: f64) -> Result<Learned> {
    robust_sphere_with(oracle, r_c, epsilon, c_lb, c_ub, None, LabelPolicy::First)
}

/// As [`robust_sphere_learn`] with an explicit activity threshold.
pub fn robust_sphere_learn_with_tau(
    oracle: &mut LabeledOracle,
    r_c: f64,
    epsilon: f64,
    tau: f64,
) -> Result<Learned> {
    let (c_lb, c_ub) = (oracle.instance().certified.c_lb, oracle.instance().certified.c_ub);
    robust_sphere_with(oracle, r_c, epsilon, c_lb, c_ub, Some(tau), LabelPolicy::First)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::problems::{draw_sample, generate_one_vs_all};

    fn oracle(classes: usize, n: usize) -> LabeledOracle {
        let inst = Arc::new(generate_one_vs_all(3, classes, 0.5, 3).unwrap());
        let pts = Arc::new(draw_sample(&inst, n, 3).unwrap().points);
        LabeledOracle::new(inst, pts, 0.0, 3).unwrap()
    }

    #[test]
    fn single_cap_one_query() {
        let mut o = oracle(1, 2000);
        let out = robust_sphere_learn(&mut o, 0.3, 0.15, 1.0, 1.0).unwrap();
        assert_eq!(out.diagnostics.clusters, 1);
        assert_eq!(out.ledger.total(), 1);
    }

    #[test]
    fn inflated_tau_is_degenerate() {
        let mut o = oracle(2, 500);
        assert!(matches!(robust_sphere_learn_with_tau(&mut o, 0.2, 0.1, 1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn two_caps_with_workable_radius() {
        let mut o = oracle(2, 4000);
        let out = robust_sphere_learn(&mut o, 0.2, 0.15, 1.0, 1.0).unwrap();
        assert_eq!(out.ledger.total(), 2);
        let labels: std::collections::BTreeSet<_> = out.ledger.entries.iter().map(|e| e.label).collect();
        assert_eq!(labels.len(), 2);
    }

    #[test]
    fn connection_radius_matches_grid_search() {
        let inst = generate_one_vs_all(3, 2, 0.5, 1).unwrap();
        let eps = 0.1;
        let r_c = choose_connection_radius(&inst, eps).unwrap();
        let cert = &inst.certified;
        let et = cert.c_lb / cert.c_ub * eps;
        let ok = |ra: f64| {
            (0..2).all(|i| {
                let rho = |l: f64, s: Side| inst.cap_radius(i, l, s).unwrap();
                5.0 / 3.0 * ra <= rho(0.75 * et, Side::Lower) - rho(eps, Side::Upper)
                    && 2.0 * ra <= rho(0.0, Side::Upper) - rho(0.25 * et, Side::Upper)
            })
        };
        let mut best = 0.0;
        let mut ra = 0.0;
        while ra < 0.05 {
            if ok(ra) {
                best = ra;
            }
            ra += 1e-7;
        }
        assert!((r_c / 2.0 - best).abs() <= 1e-6, "{} vs {best}", r_c / 2.0);
    }

    #[test]
    fn tiny_caps_give_tiny_radius() {
        let wide = generate_one_vs_all(3, 2, 0.5, 1).unwrap();
        let narrow = generate_one_vs_all(3, 2, 0.95, 1).unwrap();
        let a = choose_connection_radius(&wide, 0.01).unwrap();
        let b = choose_connection_radius(&narrow, 0.01).unwrap();
        assert!(b < a);
    }
}
