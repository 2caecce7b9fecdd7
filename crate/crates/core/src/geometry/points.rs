use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Row-major `n x d` matrix of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Self { dim, data: Vec::with_capacity(dim * n) }
    }

    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(invalid(format!(
                "flat buffer of length {} is not a multiple of dimension {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut set = Self::with_capacity(dim, rows.len());
        for row in rows {
            set.push(row)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(invalid(format!(
                "point has dimension {}, expected {}",
                point.len(),
                self.dim
            )));
        }
        self.data.extend_from_slice(point);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Subset in the given index order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut out = PointSet::with_capacity(self.dim, indices.len());
        for &i in indices {
            out.data.extend_from_slice(self.row(i));
        }
        out
    }

    /// Each row scaled to unit Euclidean norm. Zero rows are left unchanged.
    pub fn normalized(&self) -> PointSet {
        let mut out = self.clone();
        for row in out.data.chunks_exact_mut(self.dim) {
            let norm = norm(row);
            if norm > 0.0 {
                row.iter_mut().for_each(|x| *x /= norm);
            }
        }
        out
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Angle between two unit vectors, with the cosine clipped to [-1, 1].
pub fn angle(u: &[f64], v: &[f64]) -> f64 {
    dot(u, v).clamp(-1.0, 1.0).acos()
}

pub fn normalize(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|x| x / n).collect())
}
