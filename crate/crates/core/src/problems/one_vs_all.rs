//! One-vs-all instances: disjoint caps `K_i = {|x| <= 1, w_i.x > b_i}` of the
//! unit ball with uniform density on their union.

use std::f64::consts::PI;

use super::instance::{Certificate, Domain, GeneratorSpec, InstanceKind, ProblemInstance, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::geometry::quadrature::adaptive_simpson;
use crate::geometry::sampling::{apply, random_rotation, uniform_on_sphere};
use crate::geometry::{angle, measure::ball_volume, normalize, CodeMatrix, Hyperplane};
use crate::rng;

/// Angular slack kept between neighbouring caps.
pub const CAP_SLACK: f64 = 0.05;

pub fn generate_one_vs_all(d: usize, classes: usize, b_min: f64, seed: u64) -> Result<ProblemInstance> {
    if d < 2 {
        return Err(Error::InvalidInput("one-vs-all instances need d >= 2".into()));
    }
    if classes == 0 {
        return Err(Error::InvalidInput("need at least one class".into()));
    }
    if !(b_min > 0.0 && b_min < 1.0) {
        return Err(Error::InvalidInput(format!("b_min {b_min} must lie in (0, 1)")));
    }
    let directions = spread_directions(d, classes, seed);
    let mut planes = Vec::with_capacity(classes);
    for (i, w) in directions.iter().enumerate() {
        let nearest = directions
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| angle(w, v))
            .fold(PI, f64::min);
        // arccos(b_i) <= nearest/2 - slack/2 keeps every pair apart by the slack.
        let half = 0.5 * (nearest - CAP_SLACK);
        if half <= 0.0 {
            return Err(Error::Generation(format!(
                "cannot place {classes} disjoint caps in dimension {d}"
            )));
        }
        let b = if half >= PI / 2.0 { b_min } else { half.cos().max(b_min) };
        if b >= 1.0 {
            return Err(Error::Generation(format!(
                "cannot place {classes} disjoint caps in dimension {d}"
            )));
        }
        planes.push(Hyperplane::new(w.clone(), b)?);
    }
    for i in 0..classes {
        for j in i + 1..classes {
            let gap = angle(&planes[i].w, &planes[j].w) - planes[i].b.acos() - planes[j].b.acos();
            if gap < CAP_SLACK * (1.0 - 1e-9) {
                return Err(Error::Generation(format!("caps {i} and {j} are not separated")));
            }
        }
    }

    let cap_volumes: Vec<f64> = planes.iter().map(|p| ball_cap_volume(d, p.b)).collect();
    let volume: f64 = cap_volumes.iter().sum();
    let density = 1.0 / volume;
    let diameter = if classes == 1 {
        let b = planes[0].b;
        // Widest chord of a single cap: its base disk or, if taller than wide, the ball arc.
        (2.0 * (1.0 - b * b).sqrt()).max(((1.0 - b) * (1.0 - b) + (1.0 - b * b)).sqrt())
    } else {
        2.0
    };
    let certified = Certificate {
        margin: None,
        beta: 0,
        b_min: Some(planes.iter().map(|p| p.b).fold(f64::INFINITY, f64::min)),
        scale_r: None,
        c_lb: density,
        c_ub: density,
        support_volume: volume,
        support_volume_se: 0.0,
        diameter,
        thickness: None,
        level_lambda0: None,
        radius_sigma0: None,
        component_count: classes,
        doubling_dimension: None,
        class_masses: cap_volumes.iter().map(|v| v / volume).collect(),
    };
    Ok(ProblemInstance {
        schema_version: SCHEMA_VERSION,
        kind: InstanceKind::OneVsAll,
        dim: d,
        seed,
        spec: GeneratorSpec::OneVsAll { d, classes, b_min },
        domain: Domain::Ball { center: vec![0.0; d], radius: 1.0 },
        planes,
        code: CodeMatrix::one_vs_all(classes),
        regions: Vec::new(),
        witnesses: Vec::new(),
        certified,
    })
}

/// Volume of `{|x| <= 1, x_1 > b}`: `v_(d-1) int_b^1 (1 - t^2)^((d-1)/2) dt`.
pub fn ball_cap_volume(d: usize, b: f64) -> f64 {
    let power = (d as f64 - 1.0) / 2.0;
    let vd1 = ball_volume(d - 1);
    vd1 * adaptive_simpson(|t: f64| (1.0 - t * t).max(0.0).powf(power), b, 1.0, 1e-13)
}

/// Unit directions with large pairwise angles: a randomly rotated regular
/// simplex when `classes <= d + 1`, otherwise repulsion from a random start.
fn spread_directions(d: usize, classes: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng::stream(seed, "one_vs_all/directions");
    let rotation = random_rotation(d, &mut rng);
    if classes == 1 {
        return vec![apply(&rotation, &unit(d, 0))];
    }
    if classes <= d + 1 {
        return simplex(classes, d).iter().map(|v| apply(&rotation, v)).collect();
    }
    let mut dirs: Vec<Vec<f64>> = (0..classes).map(|_| uniform_on_sphere(d, &mut rng)).collect();
    let mut step = 0.1;
    for _ in 0..2000 {
        let mut next = dirs.clone();
        for (i, v) in dirs.iter().enumerate() {
            let mut force = vec![0.0; d];
            for (j, u) in dirs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let diff: Vec<f64> = v.iter().zip(u).map(|(a, b)| a - b).collect();
                let r2: f64 = diff.iter().map(|x| x * x).sum::<f64>().max(1e-12);
                force.iter_mut().zip(&diff).for_each(|(f, x)| *f += x / (r2 * r2));
            }
            let moved: Vec<f64> = v.iter().zip(&force).map(|(a, f)| a + step * f / classes as f64).collect();
            next[i] = normalize(&moved).unwrap_or_else(|| v.clone());
        }
        dirs = next;
        step *= 0.998;
    }
    dirs
}

fn unit(d: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[k] = 1.0;
    v
}

/// Vertices of a regular simplex with `k` vertices on the unit sphere of `R^d`
/// (`k <= d + 1`), pairwise cosine `-1/(k-1)`.
fn simplex(k: usize, d: usize) -> Vec<Vec<f64>> {
    // Center the standard basis of R^k, then express it in an orthonormal basis
    // of the (k-1)-dimensional subspace orthogonal to the all-ones vector.
    let centered: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / k as f64).collect())
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in &centered {
        let mut r = v.clone();
        for b in &basis {
            let p: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        if let Some(u) = normalize(&r) {
            if basis.len() < k - 1 {
                basis.push(u);
            }
        }
    }
    centered
        .iter()
        .map(|v| {
            let mut coords: Vec<f64> = basis.iter().map(|b| b.iter().zip(v).map(|(x, y)| x * y).sum()).collect();
            coords.resize(d, 0.0);
            normalize(&coords).expect("simplex vertex is nonzero")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dot;

    #[test]
    fn antipodal_pair() {
        let inst = generate_one_vs_all(3, 2, 0.5, 4).unwrap();
        assert!((dot(&inst.planes[0].w, &inst.planes[1].w) + 1.0).abs() < 1e-12);
        assert_eq!(inst.planes[0].b, 0.5);
        assert_eq!(inst.code.min_pairwise_distance(), Some(2));
    }

    #[test]
    fn three_caps_in_three_dimensions() {
        let inst = generate_one_vs_all(3, 3, 0.5, 9).unwrap();
        for i in 0..3 {
            assert!(inst.planes[i].b >= 0.5);
            for j in i + 1..3 {
                let a = angle(&inst.planes[i].w, &inst.planes[j].w);
                assert!((a - 2.0 * PI / 3.0).abs() < 1e-9);
                assert!(a > inst.planes[i].b.acos() + inst.planes[j].b.acos());
            }
        }
    }

    #[test]
    fn many_caps_by_repulsion() {
        let inst = generate_one_vs_all(3, 6, 0.3, 2).unwrap();
        assert_eq!(inst.planes.len(), 6);
    }

    #[test]
    fn cap_volume_closed_form() {
        // 3-d cap of height h: pi h^2 (3 - h) / 3.
        let h: f64 = 0.5;
        let exact = PI * h * h * (3.0 - h) / 3.0;
        assert!((ball_cap_volume(3, 0.5) - exact).abs() < 1e-12);
        assert!((ball_cap_volume(2, 0.0) - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn single_class_and_bad_inputs() {
        let inst = generate_one_vs_all(4, 1, 0.4, 0).unwrap();
        assert_eq!(inst.planes[0].b, 0.4);
        assert!(generate_one_vs_all(1, 2, 0.5, 0).is_err());
        assert!(generate_one_vs_all(3, 2, 1.5, 0).is_err());
    }
}
