use serde::{Deserialize, Serialize};

use super::codeword::Codeword;
use super::points::{angle, dot, norm, normalize, sq_dist};
use crate::error::{invalid, Result};

const UNIT_TOL: f64 = 1e-12;

/// Affine function `h(x) = w.x - b` with `|w| = 1`; its zero set is the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub w: Vec<f64>,
    pub b: f64,
}

impl Hyperplane {
    pub fn new(w: Vec<f64>, b: f64) -> Result<Self> {
        if (norm(&w) - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("plane normal has norm {}, expected 1", norm(&w))));
        }
        Ok(Self { w, b })
    }

    /// Scales `(w, b)` so that `w` has unit norm.
    pub fn from_unnormalized(w: &[f64], b: f64) -> Result<Self> {
        let n = norm(w);
        let unit = normalize(w).ok_or_else(|| invalid("plane normal must be nonzero"))?;
        Ok(Self { w: unit, b: b / n })
    }

    /// The plane `x_axis = offset` with positive side `x_axis > offset`.
    pub fn axis(dim: usize, axis: usize, offset: f64) -> Self {
        let mut w = vec![0.0; dim];
        w[axis] = 1.0;
        Self { w, b: offset }
    }

    /// Plane through `point` with normal `direction`, i.e. `h(x) = w.(x - point)`.
    pub fn through(point: &[f64], direction: &[f64]) -> Result<Self> {
        let w = normalize(direction).ok_or_else(|| invalid("plane normal must be nonzero"))?;
        let b = dot(&w, point);
        Ok(Self { w, b })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// Signed distance from `x` to the plane.
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) - self.b
    }

    /// Sign with `sign(0) = +1`.
    pub fn side(&self, x: &[f64]) -> bool {
        self.eval(x) >= 0.0
    }

    pub fn negated(&self) -> Self {
        Self { w: self.w.iter().map(|x| -x).collect(), b: -self.b }
    }
}

/// Predicted codeword `(sign h_1(x), ..., sign h_m(x))`, with `sign(0) = +1`.
pub fn predict_codeword(planes: &[Hyperplane], x: &[f64]) -> Result<Codeword> {
    if let Some(p) = planes.iter().find(|p| p.dim() != x.len()) {
        return Err(invalid(format!(
            "point has dimension {}, plane has dimension {}",
            x.len(),
            p.dim()
        )));
    }
    Ok(Codeword::from_bools(planes.iter().map(|p| p.side(x))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCap {
    pub center: Vec<f64>,
    pub angular_radius: f64,
}

impl SphericalCap {
    pub fn new(center: Vec<f64>, angular_radius: f64) -> Result<Self> {
        if (norm(&center) - 1.0).abs() > UNIT_TOL {
            return Err(invalid("cap center must be a unit vector"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&angular_radius) {
            return Err(invalid(format!("angular radius {angular_radius} outside [0, pi]")));
        }
        Ok(Self { center, angular_radius })
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        angle(&self.center, v) <= self.angular_radius
    }
}

/// `{y in B(center, radius) : direction.(y - center) > 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfBall {
    pub center: Vec<f64>,
    pub radius: f64,
    pub direction: Vec<f64>,
}

impl HalfBall {
    pub fn new(center: Vec<f64>, radius: f64, direction: Vec<f64>) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(invalid(format!("half-ball radius {radius} must be positive")));
        }
        if (norm(&direction) - 1.0).abs() > UNIT_TOL {
            return Err(invalid("half-ball direction must be a unit vector"));
        }
        if direction.len() != center.len() {
            return Err(invalid("half-ball direction and center dimensions differ"));
        }
        Ok(Self { center, radius, direction })
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        if sq_dist(y, &self.center) > self.radius * self.radius {
            return false;
        }
        let offset: f64 = self
            .direction
            .iter()
            .zip(y.iter().zip(&self.center))
            .map(|(w, (a, c))| w * (a - c))
            .sum();
        offset > 0.0
    }

    /// The face of the half-ball as a plane, `h(x) = direction.(x - center)`.
    pub fn face(&self) -> Hyperplane {
        Hyperplane { w: self.direction.clone(), b: dot(&self.direction, &self.center) }
    }
}
