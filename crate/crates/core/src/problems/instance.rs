use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{
    self, dot, predict_codeword, sq_dist, ClassId, CodeMatrix, Codeword, Hyperplane, Side,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Ecoc,
    OneVsAll,
    BoundaryFeatures,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Ecoc => "ecoc",
            InstanceKind::OneVsAll => "one_vs_all",
            InstanceKind::BoundaryFeatures => "boundary_features",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RegionShape {
    #[default]
    Ball,
    Cube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Staircase2d,
    Grid2d,
    AxisGridD,
    SingleCell,
}

impl std::str::FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "staircase2d" => Ok(Layout::Staircase2d),
            "grid2d" => Ok(Layout::Grid2d),
            "axis_grid_d" => Ok(Layout::AxisGridD),
            "single_cell" => Ok(Layout::SingleCell),
            other => Err(invalid(format!("unknown layout {other:?}"))),
        }
    }
}

/// Parameters that regenerate an instance; stored verbatim in instance files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Ecoc {
        d: usize,
        components: usize,
        margin: f64,
        #[serde(default)]
        shape: RegionShape,
    },
    EcocManifold {
        ambient: usize,
        intrinsic: usize,
        components: usize,
        margin: f64,
    },
    OneVsAll {
        d: usize,
        classes: usize,
        b_min: f64,
    },
    BoundaryFeatures {
        d: usize,
        layout: Layout,
        scale: f64,
    },
}

/// One class region of an ECOC instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    Ball { center: Vec<f64>, radius: f64 },
    Cube { center: Vec<f64>, half_side: f64 },
    /// Flat patch `center + sum_j t_j basis_j` with `|t_j| <= half_width`.
    Patch { center: Vec<f64>, basis: Vec<Vec<f64>>, half_width: f64 },
}

impl Region {
    pub fn center(&self) -> &[f64] {
        match self {
            Region::Ball { center, .. } | Region::Cube { center, .. } | Region::Patch { center, .. } => center,
        }
    }

    /// Lebesgue measure (balls, cubes) or intrinsic measure (patches).
    pub fn measure(&self) -> f64 {
        match self {
            Region::Ball { center, radius } => {
                geometry::measure::ball_volume(center.len()) * radius.powi(center.len() as i32)
            }
            Region::Cube { center, half_side } => (2.0 * half_side).powi(center.len() as i32),
            Region::Patch { basis, half_width, .. } => (2.0 * half_width).powi(basis.len() as i32),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        const TOL: f64 = 1e-9;
        match self {
            Region::Ball { center, radius } => sq_dist(x, center) <= radius * radius * (1.0 + TOL),
            Region::Cube { center, half_side } => {
                x.iter().zip(center).all(|(a, c)| (a - c).abs() <= half_side * (1.0 + TOL))
            }
            Region::Patch { center, basis, half_width } => {
                let off: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let mut residual = off.clone();
                for b in basis {
                    let t = dot(&off, b);
                    if t.abs() > half_width * (1.0 + TOL) {
                        return false;
                    }
                    residual.iter_mut().zip(b).for_each(|(r, bv)| *r -= t * bv);
                }
                residual.iter().map(|r| r * r).sum::<f64>() <= TOL * TOL
            }
        }
    }

    /// Axis-aligned bounding interval `[lo, hi]` per coordinate.
    pub fn projection(&self, axis: usize) -> (f64, f64) {
        match self {
            Region::Ball { center, radius } => (center[axis] - radius, center[axis] + radius),
            Region::Cube { center, half_side } => (center[axis] - half_side, center[axis] + half_side),
            Region::Patch { center, basis, half_width } => {
                let spread: f64 = basis.iter().map(|b| b[axis].abs()).sum::<f64>() * half_width;
                (center[axis] - spread, center[axis] + spread)
            }
        }
    }
}

/// The instance space `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Domain {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Domain {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Ball { center, radius } => sq_dist(x, center) <= radius * radius,
            Domain::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *l <= *v && *v <= *h),
        }
    }

    /// Distance from an interior point to the domain boundary (negative outside).
    pub fn depth(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Ball { center, radius } => radius - sq_dist(x, center).sqrt(),
            Domain::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| (v - l).min(h - v))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Ball { radius, .. } => 2.0 * radius,
            Domain::Box { lo, hi } => sq_dist(lo, hi).sqrt(),
        }
    }
}

/// A witness ball `B(center, R)` centered on plane `plane`, half inside class `class`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub plane: usize,
    pub class: ClassId,
    pub center: Vec<f64>,
}

/// Assumption parameters asserted by the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// Minimum distance between points of different classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub beta: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_r: Option<f64>,
    pub c_lb: f64,
    pub c_ub: f64,
    pub support_volume: f64,
    pub support_volume_se: f64,
    pub diameter: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_lambda0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_sigma0: Option<f64>,
    pub component_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doubling_dimension: Option<usize>,
    /// Class masses under the data distribution.
    pub class_masses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub schema_version: u32,
    pub kind: InstanceKind,
    pub dim: usize,
    #[serde(with = "crate::rng::seed_serde")]
    pub seed: u64,
    pub spec: GeneratorSpec,
    pub domain: Domain,
    pub planes: Vec<Hyperplane>,
    pub code: CodeMatrix,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<Region>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    pub certified: Certificate,
}

impl ProblemInstance {
    pub fn num_classes(&self) -> usize {
        self.code.num_classes()
    }

    pub fn codeword(&self, x: &[f64]) -> Result<Codeword> {
        predict_codeword(&self.planes, x)
    }

    /// Whether `x` is in the support `K` of the data distribution.
    pub fn in_support(&self, x: &[f64]) -> bool {
        self.label(x).is_ok()
    }

    /// Ground-truth labeler `f*`.
    pub fn label(&self, x: &[f64]) -> Result<ClassId> {
        if x.len() != self.dim {
            return Err(invalid(format!("point has dimension {}, expected {}", x.len(), self.dim)));
        }
        match self.kind {
            InstanceKind::Ecoc => self
                .regions
                .iter()
                .position(|r| r.contains(x))
                .ok_or(Error::NoClass),
            InstanceKind::OneVsAll => {
                if dot(x, x) > 1.0 {
                    return Err(Error::NoClass);
                }
                let mut hit = None;
                for (i, p) in self.planes.iter().enumerate() {
                    if p.eval(x) > 0.0 {
                        if hit.is_some() {
                            return Err(Error::InstanceInvariant("point lies in two caps".into()));
                        }
                        hit = Some(i);
                    }
                }
                hit.ok_or(Error::NoClass)
            }
            InstanceKind::BoundaryFeatures => {
                if !self.domain.contains(x) {
                    return Err(Error::NoClass);
                }
                self.code.class_of(&self.codeword(x)?).ok_or(Error::NoClass)
            }
        }
    }

    /// `(q_l(v), q_u(v))` for one-vs-all instances.
    pub fn projected_density_bounds(&self, v: &[f64]) -> Result<(f64, f64)> {
        self.require_kind(InstanceKind::OneVsAll)?;
        geometry::projected_density_bounds(&self.planes, self.certified.c_lb, self.certified.c_ub, v)
    }

    /// Angular radius of the level-`level` set of the upper or lower projected
    /// density bound of class `class`.
    pub fn cap_radius(&self, class: ClassId, level: f64, side: Side) -> Result<f64> {
        self.require_kind(InstanceKind::OneVsAll)?;
        let plane = self
            .planes
            .get(class)
            .ok_or_else(|| invalid(format!("class {class} out of range")))?;
        let c = match side {
            Side::Upper => self.certified.c_ub,
            Side::Lower => self.certified.c_lb,
        };
        geometry::cap_radius(self.dim, plane.b, c, level)
    }

    pub(crate) fn require_kind(&self, kind: InstanceKind) -> Result<()> {
        if self.kind != kind {
            return Err(invalid(format!(
                "operation needs a {} instance, got {}",
                kind.as_str(),
                self.kind.as_str()
            )));
        }
        Ok(())
    }
}
