//! Re-verification of a generator's certificate by exact checks and Monte Carlo.

use std::fmt;

use super::instance::{InstanceKind, ProblemInstance};
use super::sample::draw_sample;
use crate::error::Result;
use crate::geometry::sampling::uniform_in_ball;
use crate::geometry::{angle, hamming_distance, sq_dist, ClassId, PointSet};
use crate::rng;

/// Relative slack allowed between the sampled and the certified margin.
pub const MARGIN_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// `None` when the check does not apply to this kind of instance.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AssumptionReport {
    pub checks: Vec<CheckOutcome>,
}

impl AssumptionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: Option<bool>, detail: impl Into<String>) {
        self.checks.push(CheckOutcome { name, passed, detail: detail.into() });
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match c.passed {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "n/a",
            };
            writeln!(f, "{:<20} {:<5} {}", c.name, status, c.detail)?;
        }
        Ok(())
    }
}

/// Runs checks (a)-(f) with roughly `mc_budget` Monte Carlo evaluations each.
pub fn verify_assumptions(instance: &ProblemInstance, mc_budget: usize, seed: u64) -> Result<AssumptionReport> {
    let mut report = AssumptionReport::default();
    let points = draw_sample(instance, mc_budget.clamp(2, 200_000), rng::derive_seed(seed, "verify/sample"))?.points;
    let labels: Vec<ClassId> = points.rows().map(|x| instance.label(x)).collect::<Result<_>>()?;

    check_margin(instance, mc_budget, seed, &mut report)?;
    check_codewords(instance, &mut report)?;
    check_general_position(instance, &mut report);
    check_caps(instance, &points, &mut report);
    check_witnesses(instance, mc_budget, seed, &mut report)?;
    check_density(instance, &labels, &mut report);
    Ok(report)
}

/// Minimum distance over all cross-class pairs of a fresh sample of about
/// `sqrt(2 * pair_count)` points (brute force), `+inf` with one class.
pub(crate) fn sampled_margin(instance: &ProblemInstance, pair_count: usize, seed: u64) -> Result<f64> {
    if instance.num_classes() < 2 {
        return Ok(f64::INFINITY);
    }
    let k = ((2.0 * pair_count as f64).sqrt().ceil() as usize).max(2);
    let pts = draw_sample(instance, k, rng::derive_seed(seed, "margin"))?.points;
    let labels: Vec<ClassId> = pts.rows().map(|x| instance.label(x)).collect::<Result<_>>()?;
    let mut best = f64::INFINITY;
    for i in 0..k {
        for j in i + 1..k {
            if labels[i] != labels[j] {
                best = best.min(sq_dist(pts.row(i), pts.row(j)));
            }
        }
    }
    Ok(best.sqrt())
}

fn check_margin(instance: &ProblemInstance, budget: usize, seed: u64, report: &mut AssumptionReport) -> Result<()> {
    let Some(g) = instance.certified.margin else {
        report.push("a:margin", None, "no certified margin");
        return Ok(());
    };
    let observed = sampled_margin(instance, budget, seed)?;
    report.push(
        "a:margin",
        Some(observed >= g * (1.0 - MARGIN_TOL)),
        format!("sampled min cross-class distance {observed:.6} vs certified {g}"),
    );
    Ok(())
}

fn check_codewords(instance: &ProblemInstance, report: &mut AssumptionReport) -> Result<()> {
    let min = instance.code.min_pairwise_distance();
    let (passed, need) = match instance.kind {
        InstanceKind::Ecoc => {
            let need = 2 * instance.certified.beta as usize + instance.dim + 1;
            (min.map_or(true, |h| h >= need), format!(">= {need}"))
        }
        InstanceKind::OneVsAll => (min.map_or(true, |h| h == 2), "== 2".into()),
        InstanceKind::BoundaryFeatures => (true, "distinct".into()),
    };
    // Consistency: every region or cell center maps to its own codeword.
    let mut consistent = true;
    for (i, r) in instance.regions.iter().enumerate() {
        let cw = instance.codeword(r.center())?;
        consistent &= hamming_distance(&cw, instance.code.row(i))? <= instance.certified.beta as usize;
    }
    report.push(
        "b:codewords",
        Some(passed && consistent),
        format!("min Hamming distance {min:?} (need {need}), consistent={consistent}"),
    );
    Ok(())
}

fn check_general_position(instance: &ProblemInstance, report: &mut AssumptionReport) {
    let d = instance.dim;
    let axis_of = |w: &[f64]| {
        let nz: Vec<usize> = (0..w.len()).filter(|&k| w[k] != 0.0).collect();
        (nz.len() == 1).then(|| nz[0])
    };
    let axes: Option<Vec<(usize, f64)>> = instance
        .planes
        .iter()
        .map(|p| axis_of(&p.w).map(|k| (k, p.b * p.w[k])))
        .collect();
    match axes {
        Some(axes) => {
            // Axis-aligned planes meet only across distinct axes, so at most d meet
            // at a point unless two planes coincide.
            let mut dup = false;
            for (i, a) in axes.iter().enumerate() {
                dup |= axes[i + 1..].iter().any(|b| b.0 == a.0 && b.1 == a.1);
            }
            report.push("c:general_position", Some(!dup), format!("{} axis-aligned planes, coincident={dup}", axes.len()));
        }
        None if instance.planes.len() <= d => {
            report.push("c:general_position", Some(true), format!("{} planes <= d", instance.planes.len()));
        }
        None => report.push("c:general_position", None, "non-axis-aligned planes not checked"),
    }
}

fn check_caps(instance: &ProblemInstance, points: &PointSet, report: &mut AssumptionReport) {
    if instance.kind != InstanceKind::OneVsAll {
        report.push("d:cap_disjoint", None, "not a one-vs-all instance");
        return;
    }
    let planes = &instance.planes;
    let mut geometric = true;
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            geometric &= angle(&planes[i].w, &planes[j].w) > planes[i].b.acos() + planes[j].b.acos();
        }
    }
    let overlaps = points
        .rows()
        .filter(|x| planes.iter().filter(|p| p.eval(x) > 0.0).count() > 1)
        .count();
    report.push(
        "d:cap_disjoint",
        Some(geometric && overlaps == 0),
        format!("angular separation ok={geometric}, sampled points in two caps={overlaps}"),
    );
}

fn check_witnesses(instance: &ProblemInstance, budget: usize, seed: u64, report: &mut AssumptionReport) -> Result<()> {
    if instance.kind != InstanceKind::BoundaryFeatures {
        report.push("e:witness_balls", None, "not a boundary-features instance");
        return Ok(());
    }
    let r = instance.certified.scale_r.unwrap_or(0.0);
    let per_ball = budget.clamp(100, 10_000);
    let mut covered = vec![false; instance.planes.len()];
    let mut bad = 0usize;
    for (w_index, w) in instance.witnesses.iter().enumerate() {
        let home = instance.code.row(w.class);
        let flipped = home.flipped(w.plane);
        let flipped_is_code = instance.code.class_of(&flipped).is_some();
        let mut rng = rng::indexed_stream(rng::derive_seed(seed, "verify/witness"), w_index as u64);
        for _ in 0..per_ball {
            let x = uniform_in_ball(&w.center, r, &mut rng);
            let cw = instance.codeword(&x)?;
            if cw != *home && cw != flipped {
                bad += 1;
            }
        }
        let on_plane = instance.planes[w.plane].eval(&w.center).abs() < 1e-12;
        covered[w.plane] = !flipped_is_code && on_plane;
    }
    let ok = bad == 0 && covered.iter().all(|c| *c);
    report.push(
        "e:witness_balls",
        Some(ok),
        format!("{} witnesses, {bad} off-codeword samples, every plane covered={}", instance.witnesses.len(), covered.iter().all(|c| *c)),
    );
    Ok(())
}

fn check_density(instance: &ProblemInstance, labels: &[ClassId], report: &mut AssumptionReport) {
    let n = labels.len() as f64;
    let mut counts = vec![0usize; instance.num_classes()];
    for &y in labels {
        counts[y] += 1;
    }
    let mut worst: f64 = 0.0;
    for (count, mass) in counts.iter().zip(&instance.certified.class_masses) {
        let se = (mass * (1.0 - mass) / n).sqrt().max(1e-12);
        worst = worst.max((*count as f64 / n - mass).abs() / se);
    }
    report.push(
        "f:density",
        Some(worst <= 4.0),
        format!("class-mass histogram, worst deviation {worst:.2} standard errors"),
    );
}
