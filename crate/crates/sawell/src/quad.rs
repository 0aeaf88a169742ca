//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 32;

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let roundoff = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= (15.0 * tol).max(roundoff) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The interval is split into 16 panels first so oscillatory integrands are
/// not mistaken for converged on the initial three samples.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + h * k as f64;
        let hi = if k + 1 == panels { b } else { lo + h };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_step(&f, lo, hi, fa, fm, fb, whole, tol / panels as f64, MAX_DEPTH);
    }
    total
}

/// Integrates `f` to a tolerance relative to a composite-Simpson estimate of
/// the integral.
pub fn integrate_relative<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    let n = 256;
    let h = (b - a) / n as f64;
    let mut rough = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        rough += w * f(a + h * k as f64);
    }
    rough *= h / 3.0;
    integrate(f, a, b, rel * rough.abs().max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_trig() {
        assert!((integrate(|x| x * x, 0.0, 3.0, 1e-12) - 9.0).abs() < 1e-12);
        let v = integrate(|x: f64| (5.0 * x).cos().powi(2), -0.5, 0.5, 1e-13);
        let exact = 0.5 + 5f64.sin() / 10.0;
        assert!((v - exact).abs() < 1e-12);
        let big = integrate_relative(|x: f64| 1e20 * x.exp(), 0.0, 1.0, 1e-12);
        assert!((big / (1e20 * (1f64.exp() - 1.0)) - 1.0).abs() < 1e-11);
    }
}
