//! Independent brute-force and Monte Carlo references for the analytic
//! formulas and the clustering outputs.

mod clusterability;
mod margin;
mod mc;
mod suite;

pub use clusterability::{check_clusterability, ClusterabilityParams, ClusterabilityReport, PropertyOutcome};
pub use margin::{brute_margin, segment_crossings, CrossingReport};
pub use mc::{band_target, mc_ball_slice, mc_ball_volume, mc_cap_measure, mc_projected_density, MCReport, K_SE};
pub use suite::{run_suite, slice_bounds_check, slice_grid, SuiteLine, SuiteReport};
