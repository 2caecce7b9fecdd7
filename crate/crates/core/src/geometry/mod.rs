//! Exact geometric primitives.

mod codeword;
pub mod measure;
mod plane;
mod points;
pub mod projected;
pub mod quadrature;
pub mod sampling;

pub use codeword::{decode, hamming_distance, ClassId, CodeMatrix, Codeword};
pub use measure::{ball_slice_bounds, ball_slice_probability, cap_measure, unit_ball_volume, unit_sphere_area};
pub use plane::{predict_codeword, HalfBall, Hyperplane, SphericalCap};
pub use points::{angle, dist, dot, norm, normalize, sq_dist, PointSet};
pub use projected::{cap_radius, peak_density, projected_density_bounds, Side};
