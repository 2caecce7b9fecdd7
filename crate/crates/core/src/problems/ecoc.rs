//! Error-correcting output-code instances: disjoint regions laid out along the
//! main diagonal, separated by axis-aligned planes in general position.

use super::instance::{
    Certificate, Domain, GeneratorSpec, InstanceKind, ProblemInstance, Region, RegionShape,
    SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::geometry::{hamming_distance, sq_dist, CodeMatrix, Hyperplane};

/// Fraction of the per-axis spacing kept free between region projections.
const AXIS_CLEARANCE: f64 = 0.2;

pub fn generate_ecoc(d: usize, components: usize, margin: f64, shape: RegionShape, seed: u64) -> Result<ProblemInstance> {
    check_common(d, components, margin)?;
    let n = components as f64;
    let sd = (d as f64).sqrt();
    let u = diagonal(d);
    let packing = (1.0 - (n - 1.0) * margin) / (2.0 * n);

    let (regions, size, thickness) = match shape {
        RegionShape::Ball => {
            let axis_limit = if d == 1 {
                f64::INFINITY
            } else {
                (1.0 - AXIS_CLEARANCE) * margin / (2.0 * sd - 2.0 * (1.0 - AXIS_CLEARANCE))
            };
            let radius = (margin / 2.0).min(packing).min(axis_limit);
            let spacing = margin + 2.0 * radius;
            let regions = centers(&u, components, spacing)
                .into_iter()
                .map(|center| Region::Ball { center, radius })
                .collect::<Vec<_>>();
            (regions, radius, 1.0)
        }
        RegionShape::Cube => {
            let half_side = (margin / 2.0).min(packing / sd);
            let spacing = margin + 2.0 * half_side * sd;
            let regions = centers(&u, components, spacing)
                .into_iter()
                .map(|center| Region::Cube { center, half_side })
                .collect::<Vec<_>>();
            (regions, half_side, sd)
        }
    };
    if !(size > 0.0) {
        return Err(Error::Generation(format!(
            "{components} regions with gap {margin} do not fit in a unit-diameter domain"
        )));
    }
    let planes = separating_planes(&regions, d)?;
    let spec = GeneratorSpec::Ecoc { d, components, margin, shape };
    assemble(spec, d, seed, regions, planes, margin, Some(thickness), size, None)
}

/// Data on `components` flat `intrinsic`-dimensional patches in `R^ambient`.
pub fn generate_ecoc_manifold(
    ambient: usize,
    intrinsic: usize,
    components: usize,
    margin: f64,
    seed: u64,
) -> Result<ProblemInstance> {
    if intrinsic == 0 || intrinsic > ambient {
        return Err(Error::InvalidInput(format!(
            "intrinsic dimension {intrinsic} must be in 1..={ambient}"
        )));
    }
    if intrinsic == ambient {
        let mut inst = generate_ecoc(ambient, components, margin, RegionShape::Ball, seed)?;
        inst.certified.doubling_dimension = Some(ambient);
        return Ok(inst);
    }
    check_common(ambient, components, margin)?;
    let u = diagonal(ambient);
    let mut basis = vec![u.clone()];
    // Helmert vectors: orthonormal, orthogonal to the diagonal.
    for j in 1..intrinsic {
        let mut h = vec![0.0; ambient];
        let norm = ((j * (j + 1)) as f64).sqrt();
        for item in h.iter_mut().take(j) {
            *item = 1.0 / norm;
        }
        h[j] = -(j as f64) / norm;
        basis.push(h);
    }

    let mut half_width = margin / 2.0;
    loop {
        if half_width < 1e-6 {
            return Err(Error::Generation(format!(
                "{components} patches with gap {margin} do not fit in a unit-diameter domain"
            )));
        }
        // Consecutive patches differ by a translation along `u`, orthogonal to
        // every other basis direction, so their distance is spacing - 2 * half_width.
        let spacing = margin + 2.0 * half_width;
        let regions: Vec<Region> = centers(&u, components, spacing)
            .into_iter()
            .map(|center| Region::Patch { center, basis: basis.clone(), half_width })
            .collect();
        let fits = support_diameter(&regions) <= 1.0 && axis_gaps(&regions, ambient) >= AXIS_CLEARANCE * spacing / (ambient as f64).sqrt();
        if fits {
            let planes = separating_planes(&regions, ambient)?;
            let spec = GeneratorSpec::EcocManifold { ambient, intrinsic, components, margin };
            return assemble(spec, ambient, seed, regions, planes, margin, None, half_width, Some(intrinsic));
        }
        half_width *= 0.9;
    }
}

fn check_common(d: usize, components: usize, margin: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if components == 0 {
        return Err(Error::InvalidInput("need at least one component".into()));
    }
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::InvalidInput(format!("margin {margin} must be positive")));
    }
    if (components as f64 - 1.0) * margin >= 1.0 {
        return Err(Error::Generation(format!(
            "{components} regions with gap {margin} do not fit in a unit-diameter domain"
        )));
    }
    Ok(())
}

fn diagonal(d: usize) -> Vec<f64> {
    vec![1.0 / (d as f64).sqrt(); d]
}

fn centers(u: &[f64], count: usize, spacing: f64) -> Vec<Vec<f64>> {
    let mid = (count as f64 - 1.0) / 2.0;
    (0..count)
        .map(|i| u.iter().map(|x| (i as f64 - mid) * spacing * x).collect())
        .collect()
}

/// Smallest gap between consecutive region projections over all axes.
fn axis_gaps(regions: &[Region], d: usize) -> f64 {
    let mut best = f64::INFINITY;
    for pair in regions.windows(2) {
        for k in 0..d {
            let gap = pair[1].projection(k).0 - pair[0].projection(k).1;
            best = best.min(gap);
        }
    }
    best
}

/// For each gap between consecutive regions: one plane per axis at the middle of
/// the projection gap, plus a second axis-0 plane, so consecutive codewords differ
/// in exactly d + 1 bits.
fn separating_planes(regions: &[Region], d: usize) -> Result<Vec<Hyperplane>> {
    let mut planes = Vec::new();
    for pair in regions.windows(2) {
        for k in 0..d {
            let hi = pair[0].projection(k).1;
            let lo = pair[1].projection(k).0;
            if lo <= hi {
                return Err(Error::Generation(format!(
                    "region projections overlap on axis {k}; no separating plane"
                )));
            }
            if k == 0 {
                planes.push(Hyperplane::axis(d, 0, hi + (lo - hi) / 3.0));
                planes.push(Hyperplane::axis(d, 0, hi + 2.0 * (lo - hi) / 3.0));
            } else {
                planes.push(Hyperplane::axis(d, k, 0.5 * (hi + lo)));
            }
        }
    }
    Ok(planes)
}

/// Exact support diameter: the farthest pair of region extreme points.
fn support_diameter(regions: &[Region]) -> f64 {
    let extremes: Vec<Vec<f64>> = regions.iter().flat_map(extreme_points).collect();
    let mut best: f64 = 0.0;
    for (i, a) in extremes.iter().enumerate() {
        for b in &extremes[i..] {
            best = best.max(sq_dist(a, b));
        }
    }
    best.sqrt()
}

fn extreme_points(region: &Region) -> Vec<Vec<f64>> {
    match region {
        Region::Ball { center, radius } => {
            // Along the layout diagonal the farthest points of two balls are the
            // centers pushed out by the radius.
            let u = diagonal(center.len());
            vec![
                center.iter().zip(&u).map(|(c, x)| c + radius * x).collect(),
                center.iter().zip(&u).map(|(c, x)| c - radius * x).collect(),
            ]
        }
        Region::Cube { center, half_side } => corners(center, &identity(center.len()), *half_side),
        Region::Patch { center, basis, half_width } => corners(center, basis, *half_width),
    }
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn corners(center: &[f64], basis: &[Vec<f64>], half: f64) -> Vec<Vec<f64>> {
    (0..1u32 << basis.len())
        .map(|mask| {
            let mut p = center.to_vec();
            for (j, b) in basis.iter().enumerate() {
                let s = if mask >> j & 1 == 1 { half } else { -half };
                p.iter_mut().zip(b).for_each(|(x, bv)| *x += s * bv);
            }
            p
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    spec: GeneratorSpec,
    d: usize,
    seed: u64,
    regions: Vec<Region>,
    planes: Vec<Hyperplane>,
    margin: f64,
    thickness: Option<f64>,
    sigma0: f64,
    doubling: Option<usize>,
) -> Result<ProblemInstance> {
    let rows = regions
        .iter()
        .map(|r| crate::geometry::predict_codeword(&planes, r.center()))
        .collect::<Result<Vec<_>>>()?;
    let code = CodeMatrix::new(rows)
        .map_err(|e| Error::Generation(format!("region codewords collide: {e}")))?;
    for (i, a) in code.rows().iter().enumerate() {
        for b in &code.rows()[i + 1..] {
            if hamming_distance(a, b)? < d + 1 {
                return Err(Error::Generation("codeword distance below d + 1".into()));
            }
        }
    }
    let volume: f64 = regions.iter().map(Region::measure).sum();
    let density = 1.0 / volume;
    let diameter = support_diameter(&regions);
    if diameter > 1.0 + 1e-12 {
        return Err(Error::Generation(format!("support diameter {diameter} exceeds 1")));
    }
    let class_masses = regions.iter().map(|r| r.measure() / volume).collect();
    let certified = Certificate {
        margin: (regions.len() > 1).then_some(margin),
        beta: 0,
        b_min: None,
        scale_r: None,
        c_lb: density,
        c_ub: density,
        support_volume: volume,
        support_volume_se: 0.0,
        diameter,
        thickness,
        level_lambda0: Some(density),
        radius_sigma0: Some(sigma0),
        component_count: regions.len(),
        doubling_dimension: doubling,
        class_masses,
    };
    Ok(ProblemInstance {
        schema_version: SCHEMA_VERSION,
        kind: InstanceKind::Ecoc,
        dim: d,
        seed,
        spec,
        domain: Domain::Ball { center: vec![0.0; d], radius: 0.5 },
        planes,
        code,
        regions,
        witnesses: Vec::new(),
        certified,
    })
}
