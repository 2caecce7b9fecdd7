//! Label-efficient learners and their query accounting.

mod agnostic;
mod hierarchical;
mod labeling;
mod ledger;
mod planes;
mod single_linkage;
mod sphere;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use agnostic::{agnostic_wrap, BaseLearner, AGNOSTIC_PURITY};
pub use hierarchical::{hierarchical_learn, label_subset};
pub use labeling::LabelPolicy;
pub use ledger::{LedgerEntry, QueryLedger};
pub use planes::{
    approximation_bound, detect_planes, detection_threshold, min_halfball_direction, plane_detection_learn,
    DetectedPlane, DirectionSearch, PlaneSet, DEDUP_ANGLE_DEG, DEDUP_OFFSET_FRACTION,
};
pub use single_linkage::{single_linkage_learn, stopping_mass};
pub use sphere::{activity_threshold, choose_connection_radius, robust_sphere_learn, robust_sphere_learn_with_tau};

use crate::clustering::LabeledClustering;
use crate::error::Result;
use crate::geometry::{ClassId, PointSet};

/// A trained predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classifier {
    /// Nearest labeled cluster (single linkage, pruning, sphere clusters).
    Clusters(LabeledClustering),
    /// Cell of the detected plane arrangement.
    Cells {
        planes: PlaneSet,
        cell_labels: BTreeMap<String, ClassId>,
        num_classes: usize,
        #[serde(with = "crate::rng::seed_serde")]
        fallback_seed: u64,
    },
}

impl Classifier {
    pub fn predict(&self, x: &[f64]) -> Result<ClassId> {
        match self {
            Classifier::Clusters(c) => c.nearest_cluster_classify(x),
            Classifier::Cells { planes, cell_labels, num_classes, fallback_seed } => {
                let key = planes.cell_key(x);
                Ok(match cell_labels.get(&key) {
                    Some(&y) => y,
                    None => planes::fallback_label(&key, *num_classes, *fallback_seed),
                })
            }
        }
    }

    pub fn predict_all(&self, points: &PointSet) -> Result<Vec<ClassId>> {
        (0..points.len()).into_par_iter().map(|i| self.predict(points.row(i))).collect()
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

/// Per-run structural counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Clusters, pruning nodes or nonempty cells.
    pub clusters: usize,
    pub active: Option<usize>,
    pub raw_planes: Option<usize>,
    pub planes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Learned {
    pub classifier: Classifier,
    pub ledger: QueryLedger,
    pub diagnostics: Diagnostics,
}
