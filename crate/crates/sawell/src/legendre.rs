//! Associated Legendre functions at `z = -i tan θ`.
//!
//! For `n ≥ ℓ + 1`, `Q_ℓ^n(-i tan θ)` is a finite sum of positive powers of
//! `cos θ` and is square integrable on `(-π/2, π/2)`. `P_ℓ^n` carries
//! negative powers of `cos θ` and only serves as a diagnostic.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::integrate_relative;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LegendreError {
    #[error("Q_{ell}^{n} is not square integrable (needs n ≥ ell + 1)")]
    NotNormalizable { ell: u32, n: u32 },
    #[error("theta = {0} is outside the admissible interval")]
    OutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LegendreIndex {
    pub ell: u32,
    pub n: u32,
}

impl LegendreIndex {
    pub fn new(ell: u32, n: u32) -> Self {
        Self { ell, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    P,
    Q,
}

/// `ln Γ(k)` for a positive integer `k`.
fn ln_gamma_int(k: u32) -> f64 {
    (2..k).map(|i| (i as f64).ln()).sum()
}

/// `ln |1/Γ(k)|` for integer `k`, or `None` when `k ≤ 0` (the reciprocal vanishes).
fn ln_recip_gamma(k: i64) -> Option<f64> {
    (k > 0).then(|| -ln_gamma_int(k as u32))
}

fn sign(power: i64) -> f64 {
    if power.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Q_ℓ^n(-i tan θ)` by the finite sum over `j = ℓ+1..=n`, for `|θ| ≤ π/2`.
pub fn q_trig(idx: LegendreIndex, theta: f64) -> Result<Complex64, LegendreError> {
    let LegendreIndex { ell, n } = idx;
    if n <= ell {
        return Err(LegendreError::NotNormalizable { ell, n });
    }
    if !(theta.abs() <= FRAC_PI_2 + 1e-15) {
        return Err(LegendreError::OutOfRange(theta));
    }
    let c = theta.cos().max(0.0);
    let ln_pref = ln_gamma_int(n - ell) + ln_gamma_int(ell + n + 1) - LN_2;
    let pref_sign = sign(n as i64 - ell as i64 + 1);
    let mut total = Complex64::new(0.0, 0.0);
    for j in (ell + 1)..=n {
        let ln_mag = ln_pref + ln_gamma_int(j) + j as f64 * LN_2
            - ln_gamma_int(j - ell)
            - ln_gamma_int(j + ell + 1)
            - ln_gamma_int(n - j + 1);
        let weight = pref_sign * sign(j as i64) * ln_mag.exp() * c.powi(j as i32);
        total += Complex64::from_polar(weight, (j as f64 - n as f64) * theta);
    }
    Ok(total)
}

/// `P_ℓ^n(-i tan θ)` by the finite sum over `j = 0..=ℓ`, for `|θ| < π/2`.
///
/// Terms whose `1/Γ(ℓ - j - n + 1)` has a non-positive argument vanish, so
/// `P_ℓ^n ≡ 0` for `n > ℓ`.
pub fn p_trig(idx: LegendreIndex, theta: f64) -> Result<Complex64, LegendreError> {
    let LegendreIndex { ell, n } = idx;
    if !(theta.abs() < FRAC_PI_2) {
        return Err(LegendreError::OutOfRange(theta));
    }
    let c = theta.cos();
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..=ell {
        let Some(ln_last) = ln_recip_gamma(ell as i64 - j as i64 - n as i64 + 1) else {
            continue;
        };
        let ln_mag = (j as f64 - ell as f64) * LN_2 + ln_gamma_int(2 * ell - j + 1)
            - ln_gamma_int(j + 1)
            - ln_gamma_int(ell - j + 1)
            + ln_last;
        let weight = sign(j as i64 + ell as i64) * ln_mag.exp() * c.powi(j as i32 - ell as i32);
        total += Complex64::from_polar(weight, -theta * (j as f64 - ell as f64 + n as f64));
    }
    Ok(total)
}

/// Whether the family yields a bound state: only `Q_ℓ^n` with `n ≥ ℓ + 1`.
pub fn is_normalizable(family: Family, idx: LegendreIndex) -> bool {
    match family {
        Family::Q => idx.n > idx.ell,
        Family::P => false,
    }
}

/// `∫ |f(θ)|² dθ` over `[-π/2 + ε, π/2 - ε]`.
pub fn truncated_norm_sqr(family: Family, idx: LegendreIndex, eps: f64) -> Result<f64, LegendreError> {
    let f = |t: f64| match family {
        Family::Q => q_trig(idx, t),
        Family::P => p_trig(idx, t),
    };
    f(0.0)?;
    // distance to the edge c = ε·e^u, so a power law in c becomes an exponential in u
    let top = (FRAC_PI_2 / eps).ln();
    let half = |side: f64| {
        let g = |u: f64| {
            let c = eps * u.exp();
            f(side * (FRAC_PI_2 - c)).map(|v| v.norm_sqr() * c).unwrap_or(0.0)
        };
        integrate_relative(g, 0.0, top, 1e-10)
    };
    let value = half(1.0) + half(-1.0);
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_closed_forms() {
        for k in 0..40 {
            let t = -1.5 + 3.0 * k as f64 / 39.0;
            let q12 = q_trig(LegendreIndex::new(1, 2), t).unwrap();
            assert!((q12 - Complex64::new(2.0 * t.cos().powi(2), 0.0)).norm() < 1e-14);
            let q23 = q_trig(LegendreIndex::new(2, 3), t).unwrap();
            assert!((q23 + Complex64::new(8.0 * t.cos().powi(3), 0.0)).norm() < 1e-13);
            let p00 = p_trig(LegendreIndex::new(0, 0), t).unwrap();
            assert!((p00 - 1.0).norm() < 1e-15);
            let p10 = p_trig(LegendreIndex::new(1, 0), t).unwrap();
            assert!((p10 - Complex64::new(0.0, -t.tan())).norm() < 1e-12 * (1.0 + t.tan().abs()));
            let p11 = p_trig(LegendreIndex::new(1, 1), t).unwrap();
            assert!((p11 + 1.0 / t.cos()).norm() < 1e-12 / t.cos());
        }
        assert!(q_trig(LegendreIndex::new(1, 2), FRAC_PI_2).unwrap().norm() < 1e-30);
        assert!(p_trig(LegendreIndex::new(1, 2), 0.4).unwrap().norm() == 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            q_trig(LegendreIndex::new(1, 1), 0.0),
            Err(LegendreError::NotNormalizable { .. })
        ));
        assert!(q_trig(LegendreIndex::new(1, 2), 1.6).is_err());
        assert!(p_trig(LegendreIndex::new(1, 0), FRAC_PI_2).is_err());
    }

    #[test]
    fn normalizability_rule() {
        assert!(!is_normalizable(Family::Q, LegendreIndex::new(1, 1)));
        assert!(is_normalizable(Family::Q, LegendreIndex::new(2, 3)));
        assert!(is_normalizable(Family::Q, LegendreIndex::new(5, 6)));
        assert!(!is_normalizable(Family::Q, LegendreIndex::new(5, 5)));
        assert!(!is_normalizable(Family::P, LegendreIndex::new(0, 0)));
    }

    #[test]
    fn large_indices_stay_finite() {
        let v = q_trig(LegendreIndex::new(40, 90), 0.3).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }
}
