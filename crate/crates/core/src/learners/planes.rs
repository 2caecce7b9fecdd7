use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::labeling::LabelPolicy;
use super::ledger::QueryLedger;
use super::{Classifier, Diagnostics, Learned};
use crate::clustering::{Metric, SweepIndex};
use crate::error::{invalid, Error, Result};
use crate::geometry::sampling::uniform_on_sphere;
use crate::geometry::{dot, normalize, ClassId, PointSet};
use crate::problems::{Domain, LabeledOracle};
use crate::rng::{self, Rng};

/// Planes whose directions differ by at most this angle (and whose centers lie
/// close to each other's plane) are merged.
pub const DEDUP_ANGLE_DEG: f64 = 2.0;
pub const DEDUP_OFFSET_FRACTION: f64 = 0.1;

/// Randomized direction search used when `d >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionSearch {
    pub directions: usize,
    pub refine_steps: usize,
    pub seed: u64,
}

impl Default for DirectionSearch {
    fn default() -> Self {
        DirectionSearch { directions: 64, refine_steps: 100, seed: 0 }
    }
}

/// A detected plane `{x : w . (x - center) = 0}` with its half-ball count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectedPlane {
    pub center: Vec<f64>,
    pub direction: Vec<f64>,
    pub radius: f64,
    pub count: usize,
}

impl DetectedPlane {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.direction.iter().zip(x.iter().zip(&self.center)).map(|(w, (a, c))| w * (a - c)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneSet {
    pub planes: Vec<DetectedPlane>,
    pub tau: f64,
    pub n: usize,
}

impl PlaneSet {
    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    /// Sign vector of `x`, one `+` (`eval >= 0`) or `-` per plane.
    pub fn cell_key(&self, x: &[f64]) -> String {
        self.planes.iter().map(|p| if p.eval(x) >= 0.0 { '+' } else { '-' }).collect()
    }

    /// Member indices of every nonempty cell, keyed by sign vector.
    pub fn cells(&self, points: &PointSet) -> BTreeMap<String, Vec<usize>> {
        let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, x) in points.rows().enumerate() {
            out.entry(self.cell_key(x)).or_default().push(i);
        }
        out
    }
}

/// Number of offsets strictly on the positive side of `w`.
fn halfball_count(offsets: &[Vec<f64>], w: &[f64]) -> usize {
    offsets.iter().filter(|o| dot(o, w) > 0.0).count()
}

/// Direction minimizing the number of `samples` in the open half-ball
/// `{y in B(center, r) : w . (y - center) > 0}`, and that count. Exact in the
/// plane; randomized search plus coordinate descent otherwise.
pub fn min_halfball_direction(samples: &PointSet, center: &[f64], r: f64, search: DirectionSearch) -> (Vec<f64>, usize) {
    let offsets: Vec<Vec<f64>> = samples
        .rows()
        .filter(|y| crate::geometry::dist(y, center) <= r)
        .map(|y| y.iter().zip(center).map(|(a, c)| a - c).collect())
        .collect();
    let mut rng = rng::stream(search.seed, "halfball");
    min_direction(&offsets, center.len(), search, &mut rng)
}

fn min_direction(offsets: &[Vec<f64>], d: usize, search: DirectionSearch, rng: &mut Rng) -> (Vec<f64>, usize) {
    let mut axis = vec![0.0; d];
    axis[0] = 1.0;
    if offsets.is_empty() {
        return (axis, 0);
    }
    if d == 2 {
        return sweep_2d(offsets);
    }
    if d == 1 {
        let pos = offsets.iter().filter(|o| o[0] > 0.0).count();
        let neg = offsets.iter().filter(|o| o[0] < 0.0).count();
        return if pos <= neg { (vec![1.0], pos) } else { (vec![-1.0], neg) };
    }
    let mut best = (axis.clone(), halfball_count(offsets, &axis));
    for _ in 0..search.directions {
        if best.1 == 0 {
            break;
        }
        let w = uniform_on_sphere(d, rng);
        let c = halfball_count(offsets, &w);
        if c < best.1 {
            best = (w, c);
        }
    }
    let mut step = 0.5;
    for _ in 0..search.refine_steps {
        if best.1 == 0 {
            break;
        }
        let mut improved = false;
        for j in 0..d {
            for sign in [1.0, -1.0] {
                let mut w = best.0.clone();
                w[j] += sign * step;
                let Some(w) = normalize(&w) else { continue };
                let c = halfball_count(offsets, &w);
                if c < best.1 {
                    best = (w, c);
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best
}

/// Exact angular sweep: the count changes only where the boundary line passes
/// through an in-ball point, so each arc between consecutive events has a
/// constant count. Returns the midpoint of the longest minimizing arc.
fn sweep_2d(offsets: &[Vec<f64>]) -> (Vec<f64>, usize) {
    let wrap = |a: f64| a.rem_euclid(TAU);
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * offsets.len());
    for o in offsets {
        if o[0] == 0.0 && o[1] == 0.0 {
            continue;
        }
        let phi = o[1].atan2(o[0]);
        events.push((wrap(phi - PI / 2.0), 1));
        events.push((wrap(phi + PI / 2.0), -1));
    }
    if events.is_empty() {
        return (vec![1.0, 0.0], 0);
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<(f64, i64)> = Vec::new();
    for (a, delta) in events {
        match groups.last_mut() {
            Some(g) if g.0 == a => g.1 += delta,
            _ => groups.push((a, delta)),
        }
    }
    let unit = |t: f64| vec![t.cos(), t.sin()];
    let last = groups.len() - 1;
    let wrap_mid = (groups[last].0 + groups[0].0 + TAU) / 2.0;
    let mut count = halfball_count(offsets, &unit(wrap_mid)) as i64;
    // (count, start, end) of the best arc so far.
    let mut best: Option<(i64, f64, f64)> = None;
    let mut consider = |c: i64, start: f64, end: f64| {
        let len = end - start;
        let better = match best {
            None => true,
            Some((bc, bs, be)) => c < bc || (c == bc && len > be - bs),
        };
        if better {
            best = Some((c, start, end));
        }
    };
    for k in 0..groups.len() {
        count += groups[k].1;
        let end = if k == last { groups[0].0 + TAU } else { groups[k + 1].0 };
        consider(count, groups[k].0, end);
    }
    let (_, start, end) = best.expect("at least one arc");
    let w = unit(wrap((start + end) / 2.0));
    let c = halfball_count(offsets, &w);
    (w, c)
}

fn merge_planes(candidates: Vec<(usize, DetectedPlane)>, r: f64) -> Vec<DetectedPlane> {
    let mut sorted = candidates;
    sorted.sort_by(|a, b| a.1.count.cmp(&b.1.count).then(a.0.cmp(&b.0)));
    let cos_tol = DEDUP_ANGLE_DEG.to_radians().cos();
    let offset_tol = DEDUP_OFFSET_FRACTION * r;
    let mut reps: Vec<DetectedPlane> = Vec::new();
    for (_, p) in sorted {
        let dup = reps.iter().any(|q| {
            dot(&p.direction, &q.direction).abs() >= cos_tol
                && q.eval(&p.center).abs() <= offset_tol
                && p.eval(&q.center).abs() <= offset_tol
        });
        if !dup {
            reps.push(p);
        }
    }
    reps
}

/// Finds every sample center (with its `r`-ball inside `domain`) whose emptiest
/// half-ball holds fewer than `tau * n` samples, without merging.
pub fn detect_planes(points: &PointSet, r: f64, tau: f64, domain: &Domain, search: DirectionSearch) -> Vec<(usize, DetectedPlane)> {
    let n = points.len();
    let index = SweepIndex::new(points, Metric::Euclidean);
    (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let x = points.row(i);
            if domain.depth(x) < r {
                return None;
            }
            let offsets: Vec<Vec<f64>> = index
                .within_of(x, r)
                .into_iter()
                .map(|j| points.row(j).iter().zip(x).map(|(a, c)| a - c).collect())
                .collect();
            let mut rng = rng::indexed_stream(rng::derive_seed(search.seed, "halfball"), i as u64);
            let (w, count) = min_direction(&offsets, points.dim(), search, &mut rng);
            ((count as f64) / (n as f64) < tau).then(|| {
                (i, DetectedPlane { center: x.to_vec(), direction: w, radius: r, count })
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn plane_detection_with(
    oracle: &mut LabeledOracle,
    r: f64,
    tau: f64,
    cells_to_query: usize,
    domain: &Domain,
    search: DirectionSearch,
    policy: LabelPolicy,
    fallback_seed: u64,
) -> Result<Learned> {
    if !(r > 0.0) {
        return Err(invalid(format!("scale r must be positive, got {r}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(invalid(format!("tau must be in (0, 1), got {tau}")));
    }
    if cells_to_query == 0 {
        return Err(invalid("must query at least one cell"));
    }
    let points = oracle.points().clone();
    let raw = detect_planes(&points, r, tau, domain, search);
    let raw_count = raw.len();
    let planes = merge_planes(raw, r);
    if planes.is_empty() {
        return Err(Error::NoPlanesDetected);
    }
    let set = PlaneSet { planes, tau, n: points.len() };
    let cells = set.cells(&points);
    let mut ranked: Vec<(&String, &Vec<usize>)> = cells.iter().collect();
    ranked.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));

    let mut ledger = QueryLedger::new();
    if ranked.len() < cells_to_query {
        ledger.note(format!("only {} nonempty cells for {} requested queries", ranked.len(), cells_to_query));
    }
    let mut cell_labels = BTreeMap::new();
    for (k, (key, members)) in ranked.iter().take(cells_to_query).enumerate() {
        if let Some(y) = policy.label_group(oracle, &mut ledger, members, k as u64, &format!("cell:{key}"))? {
            cell_labels.insert((*key).clone(), y);
        }
    }
    let diagnostics = Diagnostics {
        clusters: cells.len(),
        active: None,
        raw_planes: Some(raw_count),
        planes: Some(set.len()),
    };
    let classifier = Classifier::Cells { planes: set, cell_labels, num_classes: oracle.num_classes(), fallback_seed };
    Ok(Learned { classifier, ledger, diagnostics })
}

/// Plane-detection learning: detect empty half-balls, partition by the
/// detected planes, label the `cells_to_query` most populated cells.
pub fn plane_detection_learn(
    oracle: &mut LabeledOracle,
    r: f64,
    tau: f64,
    cells_to_query: usize,
    domain: &Domain,
    search: DirectionSearch,
) -> Result<Learned> {
    plane_detection_with(oracle, r, tau, cells_to_query, domain, search, LabelPolicy::First, search.seed)
}

/// Deterministic stand-in for a random label on a cell that was never queried.
pub(crate) fn fallback_label(key: &str, num_classes: usize, seed: u64) -> ClassId {
    let mut h = rng::derive_seed(seed, "cell");
    for b in key.bytes() {
        h = rng::mix64(h ^ u64::from(b));
    }
    (h % num_classes.max(1) as u64) as ClassId
}

/// Rejection threshold `alpha * hbp(r) / 2` with `hbp(r) = c_lb r^d v_d / 2`.
pub fn detection_threshold(d: usize, r: f64, c_lb: f64, alpha: f64) -> Result<f64> {
    let hbp = 0.5 * c_lb * r.powi(d as i32) * crate::geometry::unit_ball_volume(d)?;
    Ok(alpha * hbp / 2.0)
}

/// Uniform bound on `|h(x) -/+ h_hat(x)|` for an alpha-approximating half-ball.
pub fn approximation_bound(d: usize, diameter: f64, r: f64, alpha: f64) -> f64 {
    let df = d as f64;
    (2.0 * diameter + (2f64.powi(d as i32) * PI / df).sqrt() * r / 2.0) * alpha.sqrt()
}
