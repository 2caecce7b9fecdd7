//! Adaptive Simpson quadrature.

pub const DEFAULT_TOL: f64 = 1e-9;
pub const MAX_DEPTH: u32 = 60;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = simpson(lo, hi, fa, fm, fb);
    let min_width = (hi - lo) * 1e-15;
    sign * recurse(&f, lo, hi, fa, fm, fb, whole, tol, MAX_DEPTH, min_width)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    min_width: f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || (b - a) <= min_width {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_width)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_width)
}
