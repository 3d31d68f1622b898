//! Shared helpers for the integration suites. These deliberately avoid
//! the crate's own numeric paths so they can serve as independent
//! oracles.
#![allow(dead_code)] // each test target compiles its own copy

/// Adaptive Simpson quadrature with an absolute tolerance.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }

    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth)
}

/// Integrate piecewise over consecutive breakpoints. Guards against the
/// classic adaptive-quadrature failure where a spike sits between the
/// coarse initial sample points and the whole integral collapses to zero.
pub fn adaptive_simpson_piecewise(
    f: &dyn Fn(f64) -> f64,
    breakpoints: &[f64],
    tol: f64,
    max_depth: u32,
) -> f64 {
    breakpoints
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol, max_depth))
        .sum()
}

/// Sample standard deviation (n - 1), written independently of the crate.
pub fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}
