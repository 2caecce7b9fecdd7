//! The full oracle suite behind `oclearn verify`.

use std::fmt;

use super::{
    brute_margin, check_clusterability, mc_ball_slice, mc_ball_volume, mc_cap_measure, mc_projected_density,
    segment_crossings, ClusterabilityParams, MCReport,
};
use crate::error::Result;
use crate::geometry::{ball_slice_bounds, ball_slice_probability};
use crate::problems::{generate_ecoc, generate_one_vs_all, RegionShape};
use crate::rng;

/// `rho / r` grid for the ball-slice bounds.
pub fn slice_grid() -> Vec<f64> {
    (1..=12).map(|k| k as f64 / 12.0 * std::f64::consts::FRAC_1_SQRT_2).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub lines: Vec<SuiteLine>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed).count()
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.lines.push(SuiteLine { name: name.into(), passed, detail: detail.into() });
    }

    fn push_mc(&mut self, name: impl Into<String>, r: &MCReport) {
        let detail = format!(
            "est {:.6} se {:.2e} target [{:.6}, {:.6}] z {:.2}",
            r.estimate,
            r.standard_error,
            r.target_lo,
            r.target_hi,
            r.z()
        );
        self.push(name, r.passed, detail);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{:<4} {:<40} {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail)?;
        }
        Ok(())
    }
}

/// Exact check that the slice probability lies within its bounds on the grid.
pub fn slice_bounds_check(max_d: usize) -> Result<(bool, String)> {
    let mut worst = String::new();
    let mut ok = true;
    for d in 1..=max_d {
        for t in slice_grid() {
            let p = ball_slice_probability(d, 1.0, t)?;
            let (lo, hi) = ball_slice_bounds(d, 1.0, t)?;
            if !(lo <= p && p <= hi) {
                ok = false;
                worst = format!("d={d} rho/r={t:.4}: {p} not in [{lo}, {hi}]");
            }
        }
    }
    Ok((ok, if ok { format!("d=1..{max_d}, {} rho values", slice_grid().len()) } else { worst }))
}

/// Runs every oracle with `samples` Monte Carlo draws per estimate.
pub fn run_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    let s = |label: &str| rng::derive_seed(seed, label);

    let (ok, detail) = slice_bounds_check(10)?;
    report.push("ball_slice_bounds", ok, detail);
    for d in [2, 3, 5, 8] {
        for t in [0.25, 0.5, std::f64::consts::FRAC_1_SQRT_2] {
            let r = mc_ball_slice(d, 1.0, t, samples, rng::derive_indexed(s("slice"), (d * 100) as u64 + (t * 64.0) as u64))?;
            report.push_mc(format!("mc_ball_slice d={d} rho={t:.3}"), &r);
        }
    }
    for d in [2, 3, 5] {
        let r = mc_cap_measure(d, 0.6, samples, rng::derive_indexed(s("cap"), d as u64))?;
        report.push_mc(format!("mc_cap_measure d={d} r=0.6"), &r);
    }
    for d in [2, 3, 5, 8] {
        let r = mc_ball_volume(d, samples, rng::derive_indexed(s("volume"), d as u64))?;
        report.push_mc(format!("mc_ball_volume d={d}"), &r);
    }

    let ova = generate_one_vs_all(3, 3, 0.5, s("ova"))?;
    let rim = ova.planes[0].b.acos();
    for k in 0..5 {
        let band = (rim * k as f64 / 5.0, rim * (k + 1) as f64 / 5.0);
        let r = mc_projected_density(&ova, 0, band, samples, rng::derive_indexed(s("band"), k))?;
        report.push_mc(format!("mc_projected_density band {}", k), &r);
    }

    let pairs = (samples / 10).max(1000);
    for k in 0..10u64 {
        let d = 2 + (k % 2) as usize;
        let inst = generate_ecoc(d, 3, 0.3, RegionShape::Ball, rng::derive_indexed(s("ecoc"), k))?;
        let g = inst.certified.margin.unwrap_or(0.0);
        let m = brute_margin(&inst, pairs, rng::derive_indexed(s("margin"), k))?;
        report.push(format!("brute_margin ecoc #{k} d={d}"), m >= 0.95 * g, format!("sampled {m:.4} certified {g:.4}"));
        let c = segment_crossings(&inst, pairs / 10, rng::derive_indexed(s("segments"), k))?;
        report.push(
            format!("segment_crossings ecoc #{k} d={d}"),
            c.violations == 0,
            format!("{} segments, {} violations", c.segments, c.violations),
        );
    }

    let params = ClusterabilityParams::for_instance(&ova, 0.15)?;
    let c = check_clusterability(&ova, params, (samples / 100).max(500), s("clusterability"))?;
    for p in &c.properties {
        report.push(format!("clusterability property ({})", p.property), p.passed, p.detail.clone());
    }
    Ok(report)
}
