use rand::seq::index::sample as sample_indices;

use super::ledger::QueryLedger;
use super::{Classifier, Diagnostics, Learned};
use crate::clustering::{coarsest_pure_pruning, single_linkage_dendrogram, LabeledClustering, Metric};
use crate::error::{invalid, Result};
use crate::geometry::ClassId;
use crate::problems::LabeledOracle;
use crate::rng;

/// Indices of the `t` points queried, in query order.
pub fn label_subset(n: usize, t: usize, seed: u64) -> Vec<usize> {
    let mut r = rng::stream(seed, "hierarchical/labels");
    sample_indices(&mut r, n, t).into_vec()
}

pub(crate) fn hierarchical_with(oracle: &mut LabeledOracle, t: usize, seed: u64, purity: f64) -> Result<Learned> {
    let points = oracle.points().clone();
    let n = points.len();
    if t == 0 || t > n {
        return Err(invalid(format!("label count t must be in 1..={n}, got {t}")));
    }
    let tree = single_linkage_dendrogram(&points, Metric::Euclidean)?;
    let mut ledger = QueryLedger::new();
    let mut labeled: Vec<(usize, ClassId)> = Vec::with_capacity(t);
    for i in label_subset(n, t, seed) {
        labeled.push((i, ledger.query(oracle, i, "random")?));
    }
    let pruning = coarsest_pure_pruning(&tree, &labeled, purity)?;
    let assignment = pruning.assignment(&tree);
    let mut sources = vec![Vec::new(); pruning.nodes.len()];
    for (step, (i, _)) in labeled.iter().enumerate() {
        sources[assignment[*i]].push(step);
    }
    let clusters = pruning.nodes.len();
    let mut clustering = LabeledClustering::new(Metric::Euclidean, points, assignment, pruning.labels)?;
    clustering.label_sources = sources;
    let diagnostics = Diagnostics { clusters, ..Diagnostics::default() };
    Ok(Learned { classifier: Classifier::Clusters(clustering), ledger, diagnostics })
}

/// Hierarchical single-linkage learning: label `t` random points and keep
/// the coarsest label-pure pruning of the single-linkage tree.
pub fn hierarchical_learn(oracle: &mut LabeledOracle, t: usize, seed: u64) -> Result<Learned> {
    hierarchical_with(oracle, t, seed, 1.0)
}
