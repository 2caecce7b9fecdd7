//! Problem instances with certified assumptions, samplers and label oracles.

mod boundary;
mod ecoc;
mod instance;
mod io;
mod one_vs_all;
mod oracle;
mod sample;
mod verify;

pub use boundary::generate_boundary_features;
pub use ecoc::{generate_ecoc, generate_ecoc_manifold};
pub use instance::{
    Certificate, Domain, GeneratorSpec, InstanceKind, Layout, ProblemInstance, Region, RegionShape, Witness,
    SCHEMA_VERSION,
};
pub use io::{
    instance_from_str, instance_to_string, read_instance, read_points_csv, read_sample, write_instance,
    write_points_csv, write_sample,
};
pub use one_vs_all::{ball_cap_volume, generate_one_vs_all};
pub use oracle::LabeledOracle;
pub use sample::{draw_heldout, draw_sample, HeldOutSet, Sample};
pub use verify::{verify_assumptions, AssumptionReport, CheckOutcome, MARGIN_TOL};


use crate::error::Result;

/// Builds the instance described by `spec`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<ProblemInstance> {
    match *spec {
        GeneratorSpec::Ecoc { d, components, margin, shape } => generate_ecoc(d, components, margin, shape, seed),
        GeneratorSpec::EcocManifold { ambient, intrinsic, components, margin } => {
            generate_ecoc_manifold(ambient, intrinsic, components, margin, seed)
        }
        GeneratorSpec::OneVsAll { d, classes, b_min } => generate_one_vs_all(d, classes, b_min, seed),
        GeneratorSpec::BoundaryFeatures { d, layout, scale } => generate_boundary_features(d, layout, scale, seed),
    }
}
