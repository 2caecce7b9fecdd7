//! Density of one-vs-all data projected onto the unit sphere.
//!
//! For data with density in `[c_lb, c_ub]` on `K = U_i {|x| <= 1, w_i.x > b_i}`,
//! the projected density (relative to the normalized uniform measure on the
//! sphere) at `v` in cap `i` is `v_d * d * integral_{b_i / w_i.v}^1 p(rv) r^(d-1) dr`,
//! which lies between `q_l(v) = c_lb v_d (1 - (b_i / w_i.v)^d)` and
//! `q_u(v) = c_ub / c_lb * q_l(v)`. (The radial integral contributes the factor
//! `1/d` that cancels the sphere area `d v_d`; with it, `q` integrates to one.)

use serde::{Deserialize, Serialize};

use super::measure::ball_volume;
use super::plane::Hyperplane;
use super::points::{dot, norm};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// `(q_l(v), q_u(v))` for the cap family `planes` and density bounds.
pub fn projected_density_bounds(
    planes: &[Hyperplane],
    c_lb: f64,
    c_ub: f64,
    v: &[f64],
) -> Result<(f64, f64)> {
    if (norm(v) - 1.0).abs() > 1e-9 {
        return Err(invalid("projected density is defined on the unit sphere"));
    }
    let d = v.len();
    let mut hit: Option<(usize, f64)> = None;
    for (i, plane) in planes.iter().enumerate() {
        if plane.dim() != d {
            return Err(invalid("direction and plane dimensions differ"));
        }
        let proj = dot(&plane.w, v);
        if proj > plane.b {
            if let Some((j, _)) = hit {
                return Err(Error::InstanceInvariant(format!(
                    "direction lies in caps {j} and {i} simultaneously"
                )));
            }
            hit = Some((i, proj));
        }
    }
    let Some((i, proj)) = hit else {
        return Ok((0.0, 0.0));
    };
    let shape = 1.0 - (planes[i].b / proj).powi(d as i32);
    let low = c_lb * ball_volume(d) * shape;
    Ok((low, c_ub / c_lb * low))
}

/// Angular radius of the level set `{q >= level}` restricted to one cap, where `q`
/// is the lower (`c = c_lb`) or upper (`c = c_ub`) bound:
/// `arccos(b (1 - level / (c v_d))^(-1/d))`.
pub fn cap_radius(d: usize, offset: f64, density: f64, level: f64) -> Result<f64> {
    if d < 2 {
        return Err(invalid("cap radius needs d >= 2"));
    }
    if !(level >= 0.0) {
        return Err(invalid(format!("level {level} must be nonnegative")));
    }
    if !(density > 0.0) {
        return Err(invalid("density bound must be positive"));
    }
    let remaining = 1.0 - level / (density * ball_volume(d));
    if remaining <= 0.0 {
        return Err(Error::EmptyLevelSet(format!("level {level} exceeds the peak density")));
    }
    let arg = offset * remaining.powf(-1.0 / d as f64);
    if arg > 1.0 {
        return Err(Error::EmptyLevelSet(format!(
            "level {level} is above the peak density {}",
            peak_density(d, offset, density)
        )));
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// Density bound at the cap center, `c v_d (1 - b^d)`.
pub fn peak_density(d: usize, offset: f64, density: f64) -> f64 {
    density * ball_volume(d) * (1.0 - offset.powi(d as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::measure::ball_volume;

    fn caps() -> Vec<Hyperplane> {
        vec![
            Hyperplane::new(vec![0.0, 0.0, 1.0], 0.5).unwrap(),
            Hyperplane::new(vec![0.0, 0.0, -1.0], 0.5).unwrap(),
        ]
    }

    #[test]
    fn density_at_center_boundary_and_outside() {
        let c = 0.3;
        let (lo, hi) = projected_density_bounds(&caps(), c, c, &[0.0, 0.0, 1.0]).unwrap();
        let expected = c * ball_volume(3) * (1.0 - 0.125);
        assert!((lo - expected).abs() < 1e-14 && (hi - expected).abs() < 1e-14);

        let rim = [(0.75f64).sqrt(), 0.0, 0.5];
        let (lo, hi) = projected_density_bounds(&caps(), c, c, &rim).unwrap();
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12);

        assert_eq!(projected_density_bounds(&caps(), c, c, &[1.0, 0.0, 0.0]).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn overlapping_caps_are_rejected() {
        let planes = vec![
            Hyperplane::new(vec![0.0, 0.0, 1.0], 0.2).unwrap(),
            Hyperplane::new(vec![0.0, 1.0, 0.0], 0.2).unwrap(),
        ];
        let v = [0.0, 0.5f64.sqrt(), 0.5f64.sqrt()];
        assert!(matches!(
            projected_density_bounds(&planes, 1.0, 1.0, &v),
            Err(Error::InstanceInvariant(_))
        ));
    }

    #[test]
    fn upper_bound_scales() {
        let (lo, hi) = projected_density_bounds(&caps(), 0.2, 0.5, &[0.0, 0.0, 1.0]).unwrap();
        assert!((hi / lo - 2.5).abs() < 1e-12);
    }

    #[test]
    fn radius_at_zero_level() {
        assert!((cap_radius(3, 0.5, 1.0, 0.0).unwrap() - 0.5f64.acos()).abs() < 1e-15);
    }

    /// Evaluating the density bound on the rim of the level-set cap recovers the level.
    #[test]
    fn radius_round_trip() {
        let (d, b, c) = (2usize, 0.5, 1.0);
        let level = ball_volume(2) * (1.0 - (0.5f64 / 0.6).powi(2));
        let rho = cap_radius(d, b, c, level).unwrap();
        let plane = Hyperplane::new(vec![1.0, 0.0], b).unwrap();
        let v = [rho.cos(), rho.sin()];
        let (lo, _) = projected_density_bounds(&[plane], c, c, &v).unwrap();
        assert!((lo - level).abs() < 1e-9);
        assert!((rho.cos() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn radius_near_peak_and_beyond() {
        let peak = peak_density(3, 0.5, 1.0);
        let r = cap_radius(3, 0.5, 1.0, peak * (1.0 - 1e-12)).unwrap();
        assert!(r < 1e-4);
        assert!(matches!(cap_radius(3, 0.5, 1.0, peak * 1.01), Err(Error::EmptyLevelSet(_))));
    }

    /// Uniform density on one cap: the projected density integrates to one over
    /// the sphere (polar-angle quadrature against the normalized surface measure).
    #[test]
    fn uniform_cap_density_is_normalized() {
        use crate::geometry::quadrature::adaptive_simpson;
        for (d, b) in [(2usize, 0.3), (3, 0.5), (5, 0.2)] {
            // Volume of {|x| <= 1, x_1 > b} by slicing.
            let vol = ball_volume(d - 1) * adaptive_simpson(&|t: f64| (1.0 - t * t).powf((d as f64 - 1.0) / 2.0), b, 1.0, 1e-12);
            let c = 1.0 / vol;
            let plane = Hyperplane::new({ let mut w = vec![0.0; d]; w[0] = 1.0; w }, b).unwrap();
            let sin_pow = |t: f64| t.sin().powi(d as i32 - 2);
            let norm_const = adaptive_simpson(&sin_pow, 0.0, std::f64::consts::PI, 1e-12);
            let q = |t: f64| {
                let mut v = vec![0.0; d];
                v[0] = t.cos();
                v[1] = t.sin();
                projected_density_bounds(std::slice::from_ref(&plane), c, c, &v).unwrap().0 * sin_pow(t)
            };
            let total = adaptive_simpson(&q, 0.0, b.acos(), 1e-12) / norm_const;
            assert!((total - 1.0).abs() < 1e-7, "d={d}: {total}");
        }
    }

    #[test]
    fn radius_decreasing_and_upper_side_wider() {
        let (c_lb, c_ub) = (0.4, 0.9);
        let peak = peak_density(4, 0.3, c_lb);
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let level = peak * i as f64 / 50.0;
            let lower = cap_radius(4, 0.3, c_lb, level).unwrap();
            let upper = cap_radius(4, 0.3, c_ub, level).unwrap();
            assert!(lower <= prev);
            // {q_u >= level} contains {q_l >= level}.
            assert!(upper >= lower);
            prev = lower;
        }
    }
}
