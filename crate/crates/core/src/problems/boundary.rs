//! Boundary-features instances: axis-aligned planes cutting a box of diameter 1
//! into cells; occupied cells are classes and every plane borders an empty cell
//! along a certified witness ball.

use super::instance::{
    Certificate, Domain, GeneratorSpec, InstanceKind, Layout, ProblemInstance, Witness, SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::geometry::{CodeMatrix, Codeword, Hyperplane};

pub fn generate_boundary_features(d: usize, layout: Layout, scale: f64, seed: u64) -> Result<ProblemInstance> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if matches!(layout, Layout::Staircase2d | Layout::Grid2d) && d != 2 {
        return Err(Error::InvalidInput(format!("layout {layout:?} is two-dimensional")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidInput(format!("scale R = {scale} must be positive")));
    }
    let side = 1.0 / (d as f64).sqrt();
    let third = side / 3.0;
    let max_scale = side / 6.0;
    if scale > max_scale {
        return Err(Error::Generation(format!(
            "scale R = {scale} exceeds {max_scale:.6} for layout {layout:?}"
        )));
    }

    // Planes x_k = side/3 and x_k = 2 side/3 for every axis (single_cell: one plane).
    let planes: Vec<Hyperplane> = match layout {
        Layout::SingleCell => vec![Hyperplane::axis(d, 0, side / 2.0)],
        _ => (0..d)
            .flat_map(|k| [Hyperplane::axis(d, k, third), Hyperplane::axis(d, k, 2.0 * third)])
            .collect(),
    };

    // Cells are indexed by a digit in {0, 1, 2} per axis (position relative to the
    // two planes of that axis); single_cell uses {0, 1} on axis 0 only.
    let (occupied, witnesses_at): (Vec<Vec<u8>>, Vec<(usize, Vec<f64>)>) = match layout {
        Layout::SingleCell => {
            let mut center = vec![side / 2.0; d];
            center[0] = side / 2.0;
            (vec![vec![0]], vec![(0, center)])
        }
        Layout::Staircase2d => {
            let empty = [vec![0u8, 0], vec![2, 2]];
            let cells = all_cells(2).into_iter().filter(|c| !empty.contains(c)).collect();
            let s6 = side / 6.0;
            let witnesses = vec![
                (0, vec![third, s6]),
                (1, vec![2.0 * third, side - s6]),
                (2, vec![s6, third]),
                (3, vec![side - s6, 2.0 * third]),
            ];
            (cells, witnesses)
        }
        Layout::Grid2d | Layout::AxisGridD => {
            let empty = vec![1u8; d];
            let cells = all_cells(d).into_iter().filter(|c| *c != empty).collect();
            let mut witnesses = Vec::new();
            for k in 0..d {
                for (j, offset) in [third, 2.0 * third].into_iter().enumerate() {
                    let mut center = vec![side / 2.0; d];
                    center[k] = offset;
                    witnesses.push((2 * k + j, center));
                }
            }
            (cells, witnesses)
        }
    };

    let rows: Vec<Codeword> = occupied.iter().map(|cell| cell_codeword(layout, cell)).collect();
    let code = CodeMatrix::new(rows)?;
    let witnesses = witnesses_at
        .into_iter()
        .map(|(plane, center)| {
            let class = class_touching(&planes, &code, plane, &center, scale)?;
            Ok(Witness { plane, class, center })
        })
        .collect::<Result<Vec<_>>>()?;

    let cell_volume = match layout {
        Layout::SingleCell => side.powi(d as i32) / 2.0,
        _ => third.powi(d as i32),
    };
    let volume = cell_volume * occupied.len() as f64;
    let density = 1.0 / volume;
    let certified = Certificate {
        margin: None,
        beta: 0,
        b_min: None,
        scale_r: Some(scale),
        c_lb: density,
        c_ub: density,
        support_volume: volume,
        support_volume_se: 0.0,
        diameter: 1.0,
        thickness: Some((d as f64).sqrt()),
        level_lambda0: Some(density),
        radius_sigma0: None,
        component_count: occupied.len(),
        doubling_dimension: None,
        class_masses: vec![1.0 / occupied.len() as f64; occupied.len()],
    };
    Ok(ProblemInstance {
        schema_version: SCHEMA_VERSION,
        kind: InstanceKind::BoundaryFeatures,
        dim: d,
        seed,
        spec: GeneratorSpec::BoundaryFeatures { d, layout, scale },
        domain: Domain::Box { lo: vec![0.0; d], hi: vec![side; d] },
        planes,
        code,
        regions: Vec::new(),
        witnesses,
        certified,
    })
}

fn all_cells(d: usize) -> Vec<Vec<u8>> {
    let mut cells = vec![vec![]];
    for _ in 0..d {
        cells = cells
            .into_iter()
            .flat_map(|c: Vec<u8>| (0..3u8).map(move |v| [c.clone(), vec![v]].concat()))
            .collect();
    }
    cells
}

/// Signs of the planes on a cell: digit 0 is below both planes of its axis,
/// 1 between, 2 above.
fn cell_codeword(layout: Layout, cell: &[u8]) -> Codeword {
    match layout {
        Layout::SingleCell => Codeword::from_bools([cell[0] == 1]),
        _ => Codeword::from_bools(cell.iter().flat_map(|&v| [v >= 1, v >= 2])),
    }
}

/// The class on the occupied side of a witness ball; the other side must be empty.
fn class_touching(
    planes: &[Hyperplane],
    code: &CodeMatrix,
    plane: usize,
    center: &[f64],
    scale: f64,
) -> Result<usize> {
    let probe = |sign: f64| {
        let p: Vec<f64> = center.iter().zip(&planes[plane].w).map(|(c, w)| c + sign * 0.5 * scale * w).collect();
        crate::geometry::predict_codeword(planes, &p).map(|cw| code.class_of(&cw))
    };
    match (probe(1.0)?, probe(-1.0)?) {
        (Some(c), None) | (None, Some(c)) => Ok(c),
        _ => Err(Error::Generation(format!("plane {plane} has no class/empty witness"))),
    }
}
