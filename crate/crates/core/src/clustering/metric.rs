use serde::{Deserialize, Serialize};

use crate::geometry::{angle, dist, dot, norm, sq_dist, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    /// Angle between unit vectors, in radians.
    Angular,
}

impl Metric {
    #[inline]
    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => dist(a, b),
            Metric::Angular => angle(a, b),
        }
    }

    /// Increasing function of `dist(a, b)` that is cheaper to evaluate.
    #[inline]
    pub(crate) fn order_key(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => sq_dist(a, b),
            Metric::Angular => -dot(a, b) / (norm(a) * norm(b)),
        }
    }

    /// Upper bound on `|a[0] - b[0]|` for any pair within distance `r`.
    fn coordinate_window(self, r: f64) -> f64 {
        let w = match self {
            Metric::Euclidean => r,
            Metric::Angular if r >= std::f64::consts::PI => f64::INFINITY,
            Metric::Angular => 2.0 * (r / 2.0).sin(),
        };
        w * (1.0 + 1e-9) + 1e-12
    }
}

/// Points sorted by their first coordinate, so that candidate neighbors of a
/// point form a contiguous window. Every candidate is then tested with the
/// exact metric, so results equal an all-pairs scan.
pub(crate) struct SweepIndex<'a> {
    points: &'a PointSet,
    order: Vec<usize>,
    keys: Vec<f64>,
    metric: Metric,
}

impl<'a> SweepIndex<'a> {
    pub(crate) fn new(points: &'a PointSet, metric: Metric) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let key = |i: usize| if points.dim() == 0 { 0.0 } else { points.row(i)[0] };
        order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        let keys = order.iter().map(|&i| key(i)).collect();
        SweepIndex { points, order, keys, metric }
    }

    /// Calls `f(i, j, dist)` once for every unordered pair with `dist <= r`
    /// (or `< r` when `strict`), `i < j` not guaranteed.
    pub(crate) fn for_each_pair(&self, r: f64, strict: bool, mut f: impl FnMut(usize, usize, f64)) {
        let window = self.metric.coordinate_window(r);
        for a in 0..self.order.len() {
            let i = self.order[a];
            let xi = self.points.row(i);
            for b in a + 1..self.order.len() {
                if self.keys[b] - self.keys[a] > window {
                    break;
                }
                let j = self.order[b];
                let d = self.metric.dist(xi, self.points.row(j));
                if within(d, r, strict) {
                    f(i, j, d);
                }
            }
        }
    }

    /// Number of points `j` (including `i` itself) with `dist(i, j) <= r`.
    pub(crate) fn count_within(&self, position: usize, r: f64) -> usize {
        let window = self.metric.coordinate_window(r);
        let i = self.order[position];
        let xi = self.points.row(i);
        let key = self.keys[position];
        let mut count = 1;
        for b in (0..position).rev() {
            if key - self.keys[b] > window {
                break;
            }
            count += usize::from(self.metric.dist(xi, self.points.row(self.order[b])) <= r);
        }
        for b in position + 1..self.order.len() {
            if self.keys[b] - key > window {
                break;
            }
            count += usize::from(self.metric.dist(xi, self.points.row(self.order[b])) <= r);
        }
        count
    }

    /// Indices of all points within distance `r` of `x` (inclusive), ascending.
    pub(crate) fn within_of(&self, x: &[f64], r: f64) -> Vec<usize> {
        let window = self.metric.coordinate_window(r);
        let key = if x.is_empty() { 0.0 } else { x[0] };
        let start = self.keys.partition_point(|&k| k < key - window);
        let mut out = Vec::new();
        for b in start..self.order.len() {
            if self.keys[b] > key + window {
                break;
            }
            let j = self.order[b];
            if self.metric.dist(x, self.points.row(j)) <= r {
                out.push(j);
            }
        }
        out.sort_unstable();
        out
    }

    pub(crate) fn order(&self) -> &[usize] {
        &self.order
    }
}

#[inline]
pub(crate) fn within(d: f64, r: f64, strict: bool) -> bool {
    if strict {
        d < r
    } else {
        d <= r
    }
}
