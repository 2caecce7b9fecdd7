use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metric::Metric;
use crate::error::{invalid, Result};
use crate::geometry::{normalize, ClassId, PointSet};

/// Clustered points with an optional label per cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledClustering {
    pub metric: Metric,
    pub points: PointSet,
    /// Cluster id of every row of `points`.
    pub cluster_of: Vec<usize>,
    /// Stored as `-1` for unlabeled clusters in files.
    #[serde(with = "optional_labels")]
    pub labels: Vec<Option<ClassId>>,
    /// Ledger steps whose answers produced each cluster's label.
    pub label_sources: Vec<Vec<usize>>,
}

impl LabeledClustering {
    pub fn new(metric: Metric, points: PointSet, cluster_of: Vec<usize>, labels: Vec<Option<ClassId>>) -> Result<Self> {
        if cluster_of.len() != points.len() {
            return Err(invalid("cluster assignment length differs from point count"));
        }
        if let Some(&c) = cluster_of.iter().find(|&&c| c >= labels.len()) {
            return Err(invalid(format!("cluster id {c} has no label slot")));
        }
        let k = labels.len();
        Ok(LabeledClustering { metric, points, cluster_of, labels, label_sources: vec![Vec::new(); k] })
    }

    pub fn num_clusters(&self) -> usize {
        self.labels.len()
    }

    pub fn num_labeled(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Label of the labeled cluster nearest to `x` (point-to-set distance),
    /// ties to the smaller cluster id. Under the angular metric `x` is first
    /// projected to the unit sphere.
    pub fn nearest_cluster_classify(&self, x: &[f64]) -> Result<ClassId> {
        if x.len() != self.points.dim() {
            return Err(invalid(format!("point has dimension {}, expected {}", x.len(), self.points.dim())));
        }
        let projected;
        let x = match self.metric {
            Metric::Euclidean => x,
            Metric::Angular => {
                projected = normalize(x).ok_or_else(|| invalid("cannot project the zero vector to the sphere"))?;
                &projected[..]
            }
        };
        let mut best: Option<(f64, usize)> = None;
        for (i, p) in self.points.rows().enumerate() {
            let c = self.cluster_of[i];
            if self.labels[c].is_none() {
                continue;
            }
            let d = self.metric.order_key(x, p);
            let better = match best {
                None => true,
                Some((bd, bc)) => d < bd || (d == bd && c < bc),
            };
            if better {
                best = Some((d, c));
            }
        }
        let (_, c) = best.ok_or_else(|| invalid("no labeled cluster"))?;
        Ok(self.labels[c].expect("labeled"))
    }

    pub fn classify_all(&self, points: &PointSet) -> Result<Vec<ClassId>> {
        (0..points.len()).into_par_iter().map(|i| self.nearest_cluster_classify(points.row(i))).collect()
    }
}

mod optional_labels {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::geometry::ClassId;

    pub fn serialize<S: Serializer>(labels: &[Option<ClassId>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(labels.iter().map(|l| l.map_or(-1, |c| c as i64)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Option<ClassId>>, D::Error> {
        let raw = Vec::<i64>::deserialize(d)?;
        Ok(raw.into_iter().map(|v| usize::try_from(v).ok()).collect())
    }
}

/// One row of a clustering export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub point_index: usize,
    pub cluster_id: Option<usize>,
    pub active: bool,
    pub label: Option<ClassId>,
}

pub fn write_clustering_csv<W: Write>(out: W, rows: &[ClusterRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["point_index", "cluster_id", "active", "label"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
