use super::metric::{Metric, SweepIndex};
use super::union_find::UnionFind;
use crate::error::{invalid, Result};
use crate::geometry::PointSet;

/// Connected components of a radius graph.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusGraphClusters {
    /// Cluster id of every point; ids are ordered by decreasing size, ties by
    /// smallest member index.
    pub assignment: Vec<usize>,
    pub cluster_sizes: Vec<usize>,
    pub radius: f64,
    pub metric: Metric,
}

impl RadiusGraphClusters {
    pub fn num_clusters(&self) -> usize {
        self.cluster_sizes.len()
    }

    /// Member indices of every cluster, each sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.cluster_sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// Builds the canonical ordering from arbitrary component representatives.
    pub(crate) fn from_roots(roots: &[usize], radius: f64, metric: Metric) -> Self {
        let n = roots.len();
        // (size, first member) per representative.
        let mut size = vec![0usize; n];
        let mut first = vec![usize::MAX; n];
        for (i, &r) in roots.iter().enumerate() {
            size[r] += 1;
            first[r] = first[r].min(i);
        }
        let mut reps: Vec<usize> = (0..n).filter(|&r| size[r] > 0).collect();
        reps.sort_by(|&a, &b| size[b].cmp(&size[a]).then(first[a].cmp(&first[b])));
        let mut id = vec![usize::MAX; n];
        for (k, &r) in reps.iter().enumerate() {
            id[r] = k;
        }
        RadiusGraphClusters {
            assignment: roots.iter().map(|&r| id[r]).collect(),
            cluster_sizes: reps.iter().map(|&r| size[r]).collect(),
            radius,
            metric,
        }
    }
}

/// Components of the graph joining points at distance `<= r_c`.
pub fn radius_components(points: &PointSet, r_c: f64, metric: Metric) -> Result<RadiusGraphClusters> {
    components(points, r_c, metric, false)
}

/// Components of the graph joining points at distance `< r_c`.
pub fn radius_components_strict(points: &PointSet, r_c: f64, metric: Metric) -> Result<RadiusGraphClusters> {
    components(points, r_c, metric, true)
}

fn components(points: &PointSet, r_c: f64, metric: Metric, strict: bool) -> Result<RadiusGraphClusters> {
    if !(r_c > 0.0) {
        return Err(invalid(format!("connection radius must be positive, got {r_c}")));
    }
    if points.is_empty() {
        return Err(invalid("radius_components needs at least one point"));
    }
    let mut uf = UnionFind::new(points.len());
    SweepIndex::new(points, metric).for_each_pair(r_c, strict, |i, j, _| {
        uf.union(i, j);
    });
    let roots: Vec<usize> = (0..points.len()).map(|i| uf.find(i)).collect();
    Ok(RadiusGraphClusters::from_roots(&roots, r_c, metric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    fn bfs_partition(points: &PointSet, r: f64) -> Vec<usize> {
        let n = points.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if comp[v] == usize::MAX {
                        let d: f64 = points.row(u).iter().zip(points.row(v)).map(|(a, b)| (a - b) * (a - b)).sum();
                        if d.sqrt() <= r {
                            comp[v] = next;
                            stack.push(v);
                        }
                    }
                }
            }
            next += 1;
        }
        comp
    }

    fn same_partition(a: &[usize], b: &[usize]) -> bool {
        let n = a.len();
        (0..n).all(|i| (0..n).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
    }

    #[test]
    fn single_edge() {
        let p = PointSet::from_rows(1, &[vec![0.0], vec![0.5]]).unwrap();
        assert_eq!(radius_components(&p, 0.6, Metric::Euclidean).unwrap().num_clusters(), 1);
        assert_eq!(radius_components(&p, 0.4, Metric::Euclidean).unwrap().num_clusters(), 2);
        assert_eq!(radius_components(&p, 0.5, Metric::Euclidean).unwrap().num_clusters(), 1);
        assert_eq!(radius_components_strict(&p, 0.5, Metric::Euclidean).unwrap().num_clusters(), 2);
    }

    #[test]
    fn two_blobs_match_bfs() {
        let mut rng = crate::rng::stream(5, "blobs");
        let mut p = PointSet::new(2);
        for k in 0..200 {
            let cx = if k < 100 { 0.0 } else { 0.5 };
            p.push(&[cx + rng.random::<f64>() * 0.2, rng.random::<f64>() * 0.2]).unwrap();
        }
        let c = radius_components(&p, 0.1, Metric::Euclidean).unwrap();
        assert_eq!(c.num_clusters(), 2);
        assert!(same_partition(&c.assignment, &bfs_partition(&p, 0.1)));
        assert_eq!(c.cluster_sizes, vec![100, 100]);
        assert_eq!(c.assignment[0], 0);
    }

    #[test]
    fn ordering_by_size_then_member() {
        let p = PointSet::from_rows(1, &[vec![10.0], vec![0.0], vec![0.1], vec![5.0], vec![20.0]]).unwrap();
        let c = radius_components(&p, 0.5, Metric::Euclidean).unwrap();
        assert_eq!(c.cluster_sizes, vec![2, 1, 1, 1]);
        assert_eq!(c.assignment, vec![1, 0, 0, 2, 3]);
    }

    #[test]
    fn large_radius_gives_one_cluster() {
        let mut rng = crate::rng::stream(1, "big");
        let rows: Vec<Vec<f64>> = (0..50).map(|_| vec![rng.random(), rng.random(), rng.random()]).collect();
        let p = PointSet::from_rows(3, &rows).unwrap();
        assert_eq!(radius_components(&p, 2.0, Metric::Euclidean).unwrap().num_clusters(), 1);
    }

    #[test]
    fn angular_metric() {
        let p = PointSet::from_rows(2, &[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let c = radius_components(&p, std::f64::consts::FRAC_PI_2 + 1e-9, Metric::Angular).unwrap();
        assert_eq!(c.num_clusters(), 1);
        let c = radius_components(&p, 1.0, Metric::Angular).unwrap();
        assert_eq!(c.num_clusters(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        let p = PointSet::from_rows(1, &[vec![0.0]]).unwrap();
        assert!(radius_components(&p, 0.0, Metric::Euclidean).is_err());
        assert!(radius_components(&PointSet::new(1), 1.0, Metric::Euclidean).is_err());
    }
}
