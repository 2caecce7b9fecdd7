use std::collections::BTreeMap;

use super::metric::Metric;
use super::radius::RadiusGraphClusters;
use super::union_find::UnionFind;
use crate::error::{invalid, Result};
use crate::geometry::{ClassId, PointSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub height: f64,
    pub left: usize,
    pub right: usize,
    pub size: usize,
}

/// Single-linkage merge tree. Node `i < n` is leaf `i`; node `n + k` is the
/// result of `merges[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub n_leaves: usize,
    pub merges: Vec<Merge>,
    pub metric: Metric,
}

impl Dendrogram {
    pub fn root(&self) -> usize {
        if self.merges.is_empty() {
            0
        } else {
            self.n_leaves + self.merges.len() - 1
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.n_leaves + self.merges.len()
    }

    pub fn children(&self, node: usize) -> Option<(usize, usize)> {
        (node >= self.n_leaves).then(|| {
            let m = &self.merges[node - self.n_leaves];
            (m.left, m.right)
        })
    }

    pub fn height(&self, node: usize) -> f64 {
        if node < self.n_leaves {
            0.0
        } else {
            self.merges[node - self.n_leaves].height
        }
    }

    pub fn size(&self, node: usize) -> usize {
        if node < self.n_leaves {
            1
        } else {
            self.merges[node - self.n_leaves].size
        }
    }

    /// Parent of every node; the root maps to `None`.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.num_nodes()];
        for (k, m) in self.merges.iter().enumerate() {
            p[m.left] = Some(self.n_leaves + k);
            p[m.right] = Some(self.n_leaves + k);
        }
        p
    }

    /// Leaves under `node`, ascending.
    pub fn leaves(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size(node));
        let mut stack = vec![node];
        while let Some(u) = stack.pop() {
            match self.children(u) {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => out.push(u),
            }
        }
        out.sort_unstable();
        out
    }

    /// Flat clustering obtained by applying every merge of height `<= r`.
    pub fn cut(&self, r: f64) -> RadiusGraphClusters {
        let mut uf = UnionFind::new(self.num_nodes());
        for (k, m) in self.merges.iter().enumerate() {
            if m.height <= r {
                uf.union(m.left, self.n_leaves + k);
                uf.union(m.right, self.n_leaves + k);
            }
        }
        let roots: Vec<usize> = (0..self.n_leaves).map(|i| uf.find(i)).collect();
        // Representatives may be internal node ids; compress to leaf ids.
        let mut rep_of = BTreeMap::new();
        let leaf_roots: Vec<usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| *rep_of.entry(*r).or_insert(i))
            .collect();
        RadiusGraphClusters::from_roots(&leaf_roots, r, self.metric)
    }
}

/// Minimum-spanning-tree construction (Prim, O(n^2)) followed by Kruskal
/// ordering of the tree edges.
pub fn single_linkage_dendrogram(points: &PointSet, metric: Metric) -> Result<Dendrogram> {
    let n = points.len();
    if n == 0 {
        return Err(invalid("dendrogram needs at least one point"));
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut link = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let x = points.row(current);
        let mut next = usize::MAX;
        let mut next_d = f64::INFINITY;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = metric.dist(x, points.row(j));
            if d < best[j] {
                best[j] = d;
                link[j] = current;
            }
            if best[j] < next_d || next == usize::MAX {
                next_d = best[j];
                next = j;
            }
        }
        in_tree[next] = true;
        edges.push((next_d, link[next], next));
        current = next;
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.min(a.2).cmp(&b.1.min(b.2))));

    let mut uf = UnionFind::new(n);
    let mut node_of = (0..n).collect::<Vec<usize>>();
    let mut merges = Vec::with_capacity(edges.len());
    for (h, a, b) in edges {
        let (ra, rb) = (uf.find(a), uf.find(b));
        let (na, nb) = (node_of[ra], node_of[rb]);
        let size = size_of(n, &merges, na) + size_of(n, &merges, nb);
        uf.union(ra, rb);
        let id = n + merges.len();
        merges.push(Merge { height: h, left: na.min(nb), right: na.max(nb), size });
        node_of[uf.find(a)] = id;
    }
    Ok(Dendrogram { n_leaves: n, merges, metric })
}

fn size_of(n: usize, merges: &[Merge], node: usize) -> usize {
    if node < n {
        1
    } else {
        merges[node - n].size
    }
}

/// An antichain of dendrogram nodes covering every leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct Pruning {
    pub nodes: Vec<usize>,
    /// Majority label of each node's labeled members; `None` when it has none.
    pub labels: Vec<Option<ClassId>>,
}

impl Pruning {
    /// Cluster id of every leaf (the position of its node in `nodes`).
    pub fn assignment(&self, tree: &Dendrogram) -> Vec<usize> {
        let mut out = vec![usize::MAX; tree.n_leaves];
        for (k, &node) in self.nodes.iter().enumerate() {
            for leaf in tree.leaves(node) {
                out[leaf] = k;
            }
        }
        out
    }
}

/// Majority class of `counts`, ties to the smaller class id, and its fraction.
pub(crate) fn majority(counts: &BTreeMap<ClassId, usize>) -> Option<(ClassId, f64)> {
    let total: usize = counts.values().sum();
    let mut best: Option<(ClassId, usize)> = None;
    for (&c, &k) in counts {
        if best.is_none_or(|(_, bk)| k > bk) {
            best = Some((c, k));
        }
    }
    best.map(|(c, k)| (c, k as f64 / total as f64))
}

/// Shallowest antichain whose nodes each have a labeled-member majority of
/// fraction `>= purity_threshold`. Nodes without labeled members are kept
/// as unlabeled pruning members. `labeled` may list a point more than once.
pub fn coarsest_pure_pruning(
    tree: &Dendrogram,
    labeled: &[(usize, ClassId)],
    purity_threshold: f64,
) -> Result<Pruning> {
    if labeled.is_empty() {
        return Err(invalid("pruning needs at least one labeled point"));
    }
    if !(purity_threshold > 0.0 && purity_threshold <= 1.0) {
        return Err(invalid(format!("purity threshold {purity_threshold} outside (0, 1]")));
    }
    let mut by_leaf: BTreeMap<usize, Vec<ClassId>> = BTreeMap::new();
    for &(i, y) in labeled {
        if i >= tree.n_leaves {
            return Err(invalid(format!("labeled index {i} out of range")));
        }
        by_leaf.entry(i).or_default().push(y);
    }
    // Label histogram per node, bottom-up (children precede parents).
    let mut hist: Vec<BTreeMap<ClassId, usize>> = vec![BTreeMap::new(); tree.num_nodes()];
    for (&i, ys) in &by_leaf {
        for &y in ys {
            *hist[i].entry(y).or_default() += 1;
        }
    }
    for (k, m) in tree.merges.iter().enumerate() {
        let mut h = hist[m.left].clone();
        for (&c, &v) in &hist[m.right] {
            *h.entry(c).or_default() += v;
        }
        hist[tree.n_leaves + k] = h;
    }

    let mut nodes = Vec::new();
    let mut labels = Vec::new();
    let mut stack = vec![tree.root()];
    while let Some(u) = stack.pop() {
        match majority(&hist[u]) {
            None => {
                nodes.push(u);
                labels.push(None);
            }
            Some((c, frac)) if frac >= purity_threshold - 1e-12 => {
                nodes.push(u);
                labels.push(Some(c));
            }
            Some((c, _)) => match tree.children(u) {
                Some((l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
                // A single point queried repeatedly with conflicting answers.
                None => {
                    nodes.push(u);
                    labels.push(Some(c));
                }
            },
        }
    }
    Ok(Pruning { nodes, labels })
}
