//! Brute-force margin and segment-crossing checks on freshly drawn points.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::geometry::ClassId;
use crate::problems::{Domain, InstanceKind, ProblemInstance, Region};
use crate::rng::{self, Rng};

fn gaussian_unit(d: usize, r: &mut Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| r.sample::<f64, _>(StandardNormal)).collect();
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            return g.into_iter().map(|x| x / n).collect();
        }
    }
}

fn region_point(region: &Region, r: &mut Rng) -> Vec<f64> {
    match region {
        Region::Ball { center, radius } => {
            let d = center.len();
            let s = radius * r.random::<f64>().powf(1.0 / d as f64);
            gaussian_unit(d, r).iter().zip(center).map(|(u, c)| c + s * u).collect()
        }
        Region::Cube { center, half_side } => {
            center.iter().map(|c| c + half_side * (2.0 * r.random::<f64>() - 1.0)).collect()
        }
        Region::Patch { center, basis, half_width } => {
            let mut x = center.clone();
            for b in basis {
                let t = half_width * (2.0 * r.random::<f64>() - 1.0);
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += t * bi);
            }
            x
        }
    }
}

/// Draws one labeled support point. ECOC regions are sampled directly in
/// proportion to their measure; other kinds by rejection from the domain's
/// bounding box.
fn labeled_point(instance: &ProblemInstance, weights: &[f64], r: &mut Rng) -> Result<(Vec<f64>, ClassId)> {
    if instance.kind == InstanceKind::Ecoc {
        let total: f64 = weights.iter().sum();
        let mut u = r.random::<f64>() * total;
        let mut k = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                k = i;
                break;
            }
            u -= w;
        }
        let x = region_point(&instance.regions[k], r);
        return Ok((x, k));
    }
    let (lo, hi): (Vec<f64>, Vec<f64>) = match &instance.domain {
        Domain::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        ),
        Domain::Box { lo, hi } => (lo.clone(), hi.clone()),
    };
    for _ in 0..10_000_000 {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| l + (h - l) * r.random::<f64>()).collect();
        match instance.label(&x) {
            Ok(c) => return Ok((x, c)),
            Err(Error::NoClass) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplerEfficiency { rate: 0.0 })
}

fn draw_labeled(instance: &ProblemInstance, k: usize, seed: u64) -> Result<Vec<(Vec<f64>, ClassId)>> {
    let weights: Vec<f64> = instance.regions.iter().map(Region::measure).collect();
    let mut r = rng::stream(seed, "oracle/support");
    (0..k).map(|_| labeled_point(instance, &weights, &mut r)).collect()
}

/// Minimum distance over all cross-class pairs among `ceil(sqrt(2 pair_count))`
/// fresh support points, so at least `pair_count` pairs are examined.
/// Returns `+inf` when there is no cross-class pair to constrain.
pub fn brute_margin(instance: &ProblemInstance, pair_count: usize, seed: u64) -> Result<f64> {
    if instance.num_classes() < 2 {
        return Ok(f64::INFINITY);
    }
    let k = ((2.0 * pair_count as f64).sqrt().ceil() as usize).max(2);
    let pts = draw_labeled(instance, k, seed)?;
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].1 == pts[j].1 {
                continue;
            }
            let d2: f64 = pts[i].0.iter().zip(&pts[j].0).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2);
        }
    }
    Ok(best.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingReport {
    pub segments: usize,
    /// Segments whose endpoints agree in sign on some plane where their classes' codewords differ.
    pub violations: usize,
}

/// Draws `segments` cross-class pairs and checks that for every plane on which
/// the two classes' codewords disagree, the endpoint values have opposite signs.
pub fn segment_crossings(instance: &ProblemInstance, segments: usize, seed: u64) -> Result<CrossingReport> {
    if instance.num_classes() < 2 {
        return Err(invalid("segment crossings need at least two classes"));
    }
    let weights: Vec<f64> = instance.regions.iter().map(Region::measure).collect();
    let mut r = rng::stream(seed, "oracle/segments");
    let mut checked = 0;
    let mut violations = 0;
    while checked < segments {
        let (x, a) = labeled_point(instance, &weights, &mut r)?;
        let (y, b) = labeled_point(instance, &weights, &mut r)?;
        if a == b {
            continue;
        }
        checked += 1;
        let (ca, cb) = (instance.code.row(a).bits(), instance.code.row(b).bits());
        let bad = instance.planes.iter().enumerate().any(|(k, p)| {
            if ca[k] == cb[k] {
                return false;
            }
            let hx: f64 = p.w.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() - p.b;
            let hy: f64 = p.w.iter().zip(&y).map(|(w, v)| w * v).sum::<f64>() - p.b;
            hx * hy >= 0.0
        });
        violations += usize::from(bad);
    }
    Ok(CrossingReport { segments: checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Hyperplane;
    use crate::problems::{generate_ecoc, generate_one_vs_all, RegionShape};

    #[test]
    fn ecoc_margin_respects_certificate() {
        let inst = generate_ecoc(2, 3, 0.3, RegionShape::Ball, 5).unwrap();
        let g = inst.certified.margin.unwrap();
        let m = brute_margin(&inst, 20_000, 1).unwrap();
        assert!(m >= 0.95 * g, "{m} vs {g}");
        let c = segment_crossings(&inst, 2_000, 1).unwrap();
        assert_eq!(c.violations, 0);
    }

    #[test]
    fn touching_caps_margin_collapses() {
        let mut inst = generate_one_vs_all(2, 2, 0.5, 1).unwrap();
        let a = std::f64::consts::FRAC_PI_4;
        inst.planes[0] = Hyperplane::new(vec![a.cos(), a.sin()], a.cos()).unwrap();
        inst.planes[1] = Hyperplane::new(vec![a.cos(), -a.sin()], a.cos()).unwrap();
        let coarse = brute_margin(&inst, 20_000, 2).unwrap();
        let fine = brute_margin(&inst, 2_000_000, 2).unwrap();
        assert!(fine < coarse && fine < 0.1, "{coarse} {fine}");
    }

    #[test]
    fn single_class_is_unconstrained() {
        let inst = generate_ecoc(2, 1, 0.3, RegionShape::Ball, 5).unwrap();
        assert_eq!(brute_margin(&inst, 100, 1).unwrap(), f64::INFINITY);
    }
}
