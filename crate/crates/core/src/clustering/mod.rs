//! Radius graphs, single-linkage trees, prunings and activity marking.

mod activity;
mod dendrogram;
mod labeled;
mod metric;
mod radius;
mod union_find;

pub use activity::{mark_active, ActivityMask};
pub use dendrogram::{coarsest_pure_pruning, single_linkage_dendrogram, Dendrogram, Merge, Pruning};
pub use labeled::{write_clustering_csv, ClusterRow, LabeledClustering};
pub use metric::Metric;
pub use radius::{radius_components, radius_components_strict, RadiusGraphClusters};
pub use union_find::UnionFind;

pub(crate) use dendrogram::majority;
pub(crate) use metric::SweepIndex;
