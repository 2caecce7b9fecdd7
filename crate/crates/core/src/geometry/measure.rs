//! Volumes and probabilities of balls, spherical caps and ball slices.

use std::f64::consts::PI;

use super::quadrature::{adaptive_simpson, DEFAULT_TOL};
use crate::error::{invalid, Result};

/// Volume of the unit ball, `pi^(d/2) / Gamma(d/2 + 1)`, defined for `d >= 0`.
///
/// Uses the exact recurrence `v_d = 2 pi / d * v_(d-2)` from `v_0 = 1`, `v_1 = 2`,
/// which is exact up to one rounding per step.
pub(crate) fn ball_volume(d: usize) -> f64 {
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

pub fn unit_ball_volume(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    Ok(ball_volume(d))
}

/// Surface area of the unit sphere in `R^d`, `d v_d`.
pub fn unit_sphere_area(d: usize) -> f64 {
    d as f64 * ball_volume(d)
}

/// Probability that a uniform point on the sphere in `R^d` lands in a cap of
/// angular radius `r`: the ratio of `int_0^r sin^(d-2)` to `int_0^pi sin^(d-2)`.
pub fn cap_measure(d: usize, r: f64) -> Result<f64> {
    if d < 2 {
        return Err(invalid("cap measure needs d >= 2"));
    }
    if !(0.0..=PI).contains(&r) {
        return Err(invalid(format!("angular radius {r} outside [0, pi]")));
    }
    if d == 2 {
        return Ok(r / PI);
    }
    // int_0^pi sin^(d-2) = S_(d-1) / S_(d-2) = d v_d / ((d-1) v_(d-1)).
    let total = unit_sphere_area(d) / unit_sphere_area(d - 1);
    let k = (d - 2) as i32;
    let part = adaptive_simpson(|t: f64| t.sin().powi(k), 0.0, r, DEFAULT_TOL * total);
    Ok((part / total).clamp(0.0, 1.0))
}

/// Probability that the first coordinate of a uniform point in the
/// radius-`r` ball of `R^d` lands in `[0, rho]`.
pub fn ball_slice_probability(d: usize, r: f64, rho: f64) -> Result<f64> {
    check_slice_args(d, r, rho)?;
    if rho > r {
        return Err(invalid(format!("slice width {rho} exceeds radius {r}")));
    }
    let ratio = ball_volume(d - 1) / ball_volume(d);
    let half_power = (d as f64 - 1.0) / 2.0;
    let integral = adaptive_simpson(
        |u: f64| (1.0 - u * u).max(0.0).powf(half_power),
        0.0,
        rho / r,
        DEFAULT_TOL / ratio,
    );
    Ok(ratio * integral)
}

/// Lower and upper bounds `sqrt(d / (2^d pi)) rho/r` and `sqrt((d+1)/(2 pi)) rho/r`
/// on [`ball_slice_probability`], valid for `rho <= r / sqrt(2)`.
pub fn ball_slice_bounds(d: usize, r: f64, rho: f64) -> Result<(f64, f64)> {
    check_slice_args(d, r, rho)?;
    if rho > r / 2f64.sqrt() * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "slice width {rho} exceeds r/sqrt(2) = {}",
            r / 2f64.sqrt()
        )));
    }
    let t = rho / r;
    let df = d as f64;
    let lower = (df / (2f64.powi(d as i32) * PI)).sqrt() * t;
    let upper = ((df + 1.0) / (2.0 * PI)).sqrt() * t;
    Ok((lower, upper))
}

fn check_slice_args(d: usize, r: f64, rho: f64) -> Result<()> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(invalid(format!("radius {r} must be positive")));
    }
    if !(rho >= 0.0) {
        return Err(invalid(format!("slice width {rho} must be nonnegative")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert!((unit_ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!(unit_ball_volume(0).is_err());
    }

    /// Closed forms pi^k / k! and 2 (k!) (4 pi)^k / (2k+1)! at relative error 1e-12.
    #[test]
    fn ball_volume_matches_gamma_closed_forms() {
        let mut fact = 1.0f64;
        for k in 0..=12usize {
            if k > 0 {
                fact *= k as f64;
            }
            let even = PI.powi(k as i32) / fact;
            let mut odd_fact = 1.0f64;
            for j in 1..=(2 * k + 1) {
                odd_fact *= j as f64;
            }
            let odd = 2.0 * fact * (4.0 * PI).powi(k as i32) / odd_fact;
            assert!((ball_volume(2 * k) / even - 1.0).abs() < 1e-12, "d={}", 2 * k);
            assert!((ball_volume(2 * k + 1) / odd - 1.0).abs() < 1e-12, "d={}", 2 * k + 1);
        }
    }

    #[test]
    fn cap_measure_examples() {
        for d in 2..=9 {
            assert!((cap_measure(d, PI / 2.0).unwrap() - 0.5).abs() < 1e-9, "d={d}");
            assert!(cap_measure(d, 0.0).unwrap().abs() < 1e-12);
            assert!((cap_measure(d, PI).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!((cap_measure(3, PI / 3.0).unwrap() - 0.25).abs() < 1e-9);
        assert!((cap_measure(2, PI / 4.0).unwrap() - 0.25).abs() < 1e-12);
        assert!(cap_measure(3, -0.1).is_err());
        assert!(cap_measure(3, 3.5).is_err());
        assert!(cap_measure(1, 1.0).is_err());
    }

    #[test]
    fn cap_measure_closed_form_on_two_sphere() {
        for i in 0..=50 {
            let r = PI * i as f64 / 50.0;
            let exact = (1.0 - r.cos()) / 2.0;
            assert!((cap_measure(3, r).unwrap() - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn cap_measure_monotone_and_symmetric() {
        for d in 2..=8 {
            let mut prev = 0.0;
            for i in 0..=40 {
                let r = PI * i as f64 / 40.0;
                let v = cap_measure(d, r).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
                let mirrored = cap_measure(d, PI - r).unwrap();
                assert!((v + mirrored - 1.0).abs() < 2e-9, "d={d} r={r}");
            }
        }
    }

    #[test]
    fn slice_examples() {
        for d in 1..=6 {
            assert_eq!(ball_slice_probability(d, 1.0, 0.0).unwrap(), 0.0);
            assert!((ball_slice_probability(d, 2.0, 2.0).unwrap() - 0.5).abs() < 1e-9);
        }
        assert!((ball_slice_probability(1, 1.0, 0.3).unwrap() - 0.15).abs() < 1e-12);
        // Disk segment: (1/pi) (t sqrt(1-t^2) + asin t) at t = 1/sqrt(2) = 1/(2 pi) + 1/4.
        let exact = 0.25 + 1.0 / (2.0 * PI);
        let got = ball_slice_probability(2, 1.0, 1.0 / 2f64.sqrt()).unwrap();
        assert!((got - exact).abs() < 1e-9);
        assert!((exact - 0.40915).abs() < 1e-5);
        assert!(ball_slice_probability(2, 1.0, 1.1).is_err());
    }

    #[test]
    fn slice_bounds_examples() {
        let (lo, hi) = ball_slice_bounds(1, 1.0, 0.5).unwrap();
        assert!((lo - 0.5 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((hi - 0.5 / PI.sqrt()).abs() < 1e-15);
        assert!((lo - 0.1995).abs() < 1e-4 && (hi - 0.2821).abs() < 1e-4);
        assert_eq!(ball_slice_bounds(4, 1.0, 0.0).unwrap(), (0.0, 0.0));
        let (lo, hi) = ball_slice_bounds(2, 1.0, 1.0 / 2f64.sqrt()).unwrap();
        assert!((lo - 0.2821).abs() < 1e-4 && (hi - 0.4886).abs() < 1e-4);
        let exact = 0.25 + 1.0 / (2.0 * PI);
        assert!(lo <= exact && exact <= hi);
        assert!(ball_slice_bounds(2, 1.0, 0.8).is_err());
    }

    #[test]
    fn slice_within_bounds_grid() {
        for d in 1..=10 {
            for k in 1..=12 {
                let t = k as f64 / 12.0 / 2f64.sqrt();
                let p = ball_slice_probability(d, 1.0, t).unwrap();
                let (lo, hi) = ball_slice_bounds(d, 1.0, t).unwrap();
                assert!(lo <= p && p <= hi, "d={d} t={t}: {lo} {p} {hi}");
            }
        }
    }
}
