use rand::Rng as _;
use rand_distr::StandardNormal;

use super::points::normalize;
use crate::rng::Rng;

pub fn uniform_on_sphere(d: usize, rng: &mut Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if let Some(u) = normalize(&g) {
            return u;
        }
    }
}

/// Uniform point in the ball `B(center, radius)`: direction times `U^(1/d)`.
pub fn uniform_in_ball(center: &[f64], radius: f64, rng: &mut Rng) -> Vec<f64> {
    let d = center.len();
    let u = uniform_on_sphere(d, rng);
    let s = radius * rng.random::<f64>().powf(1.0 / d as f64);
    center.iter().zip(&u).map(|(c, x)| c + s * x).collect()
}

/// A random orthogonal `d x d` matrix (rows orthonormal), by Gram-Schmidt on
/// Gaussian rows.
pub fn random_rotation(d: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
    while rows.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        for r in &rows {
            let p: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(r).for_each(|(x, a)| *x -= p * a);
        }
        if let Some(u) = normalize(&v) {
            if u.iter().all(|x| x.is_finite()) {
                rows.push(u);
            }
        }
    }
    rows
}

pub fn apply(matrix: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::points::{dot, norm};
    use rand::SeedableRng;

    #[test]
    fn sphere_and_ball_points() {
        let mut rng = Rng::seed_from_u64(1);
        for d in 1..6 {
            let u = uniform_on_sphere(d, &mut rng);
            assert!((norm(&u) - 1.0).abs() < 1e-12);
            let x = uniform_in_ball(&vec![1.0; d], 0.5, &mut rng);
            let off: Vec<f64> = x.iter().map(|v| v - 1.0).collect();
            assert!(norm(&off) <= 0.5);
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        let mut rng = Rng::seed_from_u64(3);
        let q = random_rotation(5, &mut rng);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&q[i], &q[j]) - expect).abs() < 1e-12);
            }
        }
    }
}
