//! Bracketing root finders and grid scans.

/// A feature found while scanning a function on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Candidate {
    /// Sign change between `lo` and `hi`.
    Crossing { lo: f64, hi: f64, flo: f64, fhi: f64 },
    /// Grid point exactly on a root.
    Exact(f64),
    /// Local minimum of `|f|` without a sign change, inside `[lo, hi]`.
    Touch { lo: f64, hi: f64 },
}

/// Samples `f` on `xs` and reports crossings, exact hits and touching minima.
pub fn scan<F: Fn(f64) -> f64>(f: F, xs: &[f64]) -> Vec<Candidate> {
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    scan_values(xs, &vals)
}

pub fn scan_values(xs: &[f64], vals: &[f64]) -> Vec<Candidate> {
    let mut out = Vec::new();
    for i in 0..xs.len() {
        if !vals[i].is_finite() {
            continue;
        }
        if vals[i] == 0.0 {
            out.push(Candidate::Exact(xs[i]));
            continue;
        }
        if i + 1 < xs.len() && vals[i + 1].is_finite() && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0) {
            out.push(Candidate::Crossing {
                lo: xs[i],
                hi: xs[i + 1],
                flo: vals[i],
                fhi: vals[i + 1],
            });
        }
        if i > 0 && i + 1 < xs.len() {
            let (a, b, c) = (vals[i - 1], vals[i], vals[i + 1]);
            let finite = a.is_finite() && c.is_finite();
            let same = finite && (a < 0.0) == (b < 0.0) && (b < 0.0) == (c < 0.0) && a != 0.0 && c != 0.0;
            if same && b.abs() < a.abs() && b.abs() <= c.abs() {
                out.push(Candidate::Touch { lo: xs[i - 1], hi: xs[i + 1] });
            }
        }
    }
    out
}

/// Bisection on a sign-changing bracket; stops when the bracket is below `tol`
/// or cannot be split further in floating point.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal `g` on `[lo, hi]`.
pub fn golden_min<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if g1 < g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = g(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Uniform grid from `lo` to `hi` (inclusive) with spacing at most `step`.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}
