use super::labeling::LabelPolicy;
use super::ledger::QueryLedger;
use super::{Classifier, Diagnostics, Learned};
use crate::clustering::{radius_components, LabeledClustering, Metric, RadiusGraphClusters};
use crate::error::{invalid, Result};
use crate::geometry::ClassId;
use crate::problems::LabeledOracle;

/// `ceil(epsilon * n / 4)`, the unlabeled mass at which querying stops.
pub fn stopping_mass(epsilon: f64, n: usize) -> usize {
    (epsilon * n as f64 / 4.0).ceil() as usize
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon must be in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// Labels clusters in decreasing size order until at most `stop` points
/// remain in unlabeled clusters. `members[c]` are original sample indices.
pub(crate) fn label_by_size(
    clusters: &RadiusGraphClusters,
    members: &[Vec<usize>],
    stop: usize,
    oracle: &mut LabeledOracle,
    ledger: &mut QueryLedger,
    policy: LabelPolicy,
) -> Result<(Vec<Option<ClassId>>, Vec<Vec<usize>>)> {
    let mut labels = vec![None; clusters.num_clusters()];
    let mut sources = vec![Vec::new(); clusters.num_clusters()];
    let mut unlabeled: usize = clusters.cluster_sizes.iter().sum();
    for c in 0..clusters.num_clusters() {
        if unlabeled <= stop {
            break;
        }
        let before = ledger.total();
        labels[c] = policy.label_group(oracle, ledger, &members[c], c as u64, &format!("cluster:{c}"))?;
        sources[c] = (before..ledger.total()).collect();
        unlabeled -= clusters.cluster_sizes[c];
    }
    Ok((labels, sources))
}

pub(crate) fn single_linkage_with(oracle: &mut LabeledOracle, r_c: f64, epsilon: f64, policy: LabelPolicy) -> Result<Learned> {
    check_epsilon(epsilon)?;
    let points = oracle.points().clone();
    let clusters = radius_components(&points, r_c, Metric::Euclidean)?;
    let members = clusters.members();
    let mut ledger = QueryLedger::new();
    let stop = stopping_mass(epsilon, points.len());
    let (labels, sources) = label_by_size(&clusters, &members, stop, oracle, &mut ledger, policy)?;
    let mut clustering = LabeledClustering::new(Metric::Euclidean, points, clusters.assignment.clone(), labels)?;
    clustering.label_sources = sources;
    let diagnostics = Diagnostics { clusters: clusters.num_clusters(), ..Diagnostics::default() };
    Ok(Learned { classifier: Classifier::Clusters(clustering), ledger, diagnostics })
}

/// Single-linkage learning: radius-`r_c` components, queried largest first.
pub fn single_linkage_learn(oracle: &mut LabeledOracle, r_c: f64, epsilon: f64) -> Result<Learned> {
    single_linkage_with(oracle, r_c, epsilon, LabelPolicy::First)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::problems::{draw_heldout, draw_sample, generate_ecoc, RegionShape};

    fn oracle(components: usize, n: usize, seed: u64) -> LabeledOracle {
        let inst = Arc::new(generate_ecoc(2, components, 0.3, RegionShape::Ball, seed).unwrap());
        let pts = Arc::new(draw_sample(&inst, n, seed).unwrap().points);
        LabeledOracle::new(inst, pts, 0.0, seed).unwrap()
    }

    #[test]
    fn two_components_two_queries() {
        let mut o = oracle(2, 2000, 3);
        let out = single_linkage_learn(&mut o, 0.15, 0.1).unwrap();
        assert_eq!(out.ledger.total(), 2);
        assert_eq!(o.query_count(), 2);
        let inst = generate_ecoc(2, 2, 0.3, RegionShape::Ball, 3).unwrap();
        let held = draw_heldout(&inst, 2000, 4).unwrap();
        let wrong = held
            .points
            .rows()
            .zip(&held.labels)
            .filter(|(x, y)| out.classifier.predict(x).unwrap() != **y)
            .count();
        assert!(wrong as f64 / 2000.0 <= 0.1);
    }

    #[test]
    fn single_class_one_query() {
        let mut o = oracle(1, 500, 1);
        let out = single_linkage_learn(&mut o, 0.15, 0.1).unwrap();
        assert_eq!(out.ledger.total(), 1);
    }

    #[test]
    fn huge_radius_merges_everything() {
        let mut o = oracle(3, 600, 2);
        let out = single_linkage_learn(&mut o, 2.0, 0.1).unwrap();
        assert_eq!(out.diagnostics.clusters, 1);
        assert_eq!(out.ledger.total(), 1);
    }

    #[test]
    fn stopping_mass_rounds_up() {
        assert_eq!(stopping_mass(0.1, 4000), 100);
        assert_eq!(stopping_mass(0.1, 4001), 101);
        assert!(check_epsilon(0.0).is_err());
    }
}
