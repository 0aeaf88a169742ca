//! Eigenfunctions of the extensions.
//!
//! A positive level has `φ(x) = A cos(kx) + B sin(kx)` with `k = s/2a`.
//! Negative levels use `cosh(κx)` and `sinh(κx)` with `κ = r/2a`, both
//! divided by `cosh(r/2)` so deep levels stay finite; zero energy uses
//! `1` and `x/a`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extensions::{BoundaryTrace, ExtensionParams};
use crate::grid::GridFunction;
use crate::spectral::{self, det2, system_matrix, EnergyLevel, LevelKind, Mat2};

pub const ROOT_TOL: f64 = 1e-8;
pub const PHASE_TOL: f64 = 1e-8;
const DEGENERATE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigenError {
    #[error("s = {s} is not a root: |F(s)| = {residual:e}")]
    NotASpectralRoot { s: f64, residual: f64 },
    #[error("coefficients vanish")]
    ZeroFunction,
    #[error("A and B phases differ by {0} (mod π)")]
    PhaseMismatch(f64),
    #[error("the phase-δ form needs a positive level")]
    NotPositive,
}

/// Coefficients `(A, B)` of an eigenfunction in the basis of its level kind.
/// `s` holds the trigonometric root, or `r` for negative levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    #[serde(rename = "A")]
    pub a: Complex64,
    #[serde(rename = "B")]
    pub b: Complex64,
    pub s: f64,
    pub kind: LevelKind,
}

impl Coefficients {
    pub fn new(a: Complex64, b: Complex64, s: f64) -> Self {
        Self {
            a,
            b,
            s,
            kind: LevelKind::Positive,
        }
    }

    fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr()).sqrt()
    }
}

/// Basis pair for a level, as wall traces.
pub fn basis_traces(kind: LevelKind, root: f64, a: f64) -> [BoundaryTrace; 2] {
    match kind {
        LevelKind::Positive => spectral::trig_traces(Complex64::new(root, 0.0), a),
        LevelKind::Negative => scaled_hyperbolic_traces(root, a),
        LevelKind::Zero => spectral::linear_traces(a),
    }
}

fn scaled_hyperbolic_traces(r: f64, a: f64) -> [BoundaryTrace; 2] {
    let t = (r / 2.0).tanh();
    let k = r / (2.0 * a);
    let re = |v: f64| Complex64::new(v, 0.0);
    [
        BoundaryTrace {
            phi_minus: re(1.0),
            phi_plus: re(1.0),
            dphi_minus: re(-k * t),
            dphi_plus: re(k * t),
        },
        BoundaryTrace {
            phi_minus: re(-t),
            phi_plus: re(t),
            dphi_minus: re(k),
            dphi_plus: re(k),
        },
    ]
}

fn system_for(kind: LevelKind, root: f64, p: &ExtensionParams) -> Mat2 {
    system_matrix(&p.unitary(), &basis_traces(kind, root, p.a), p.a)
}

/// Null vectors of a 2×2 matrix: one cofactor row, or both unit vectors
/// when the matrix vanishes on the scale `scale`.
fn null_vectors(n: &Mat2, scale: f64, degenerate: bool) -> Vec<[Complex64; 2]> {
    let max_entry = n.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let limit = if degenerate { DEGENERATE_TOL } else { 1e-14 };
    if max_entry <= limit * scale {
        return vec![[one, zero], [zero, one]];
    }
    let v0 = [n[0][1], -n[0][0]];
    let v1 = [n[1][1], -n[1][0]];
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&v0) >= norm(&v1) { v0 } else { v1 };
    let nv = norm(&v);
    vec![[v[0] / nv, v[1] / nv]]
}

/// Coefficients for a positive root `s`, from the cofactors of `N(s)`.
pub fn coefficients_ab(s: f64, p: &ExtensionParams) -> Result<Coefficients, EigenError> {
    let residual = spectral::reduced_det(s, p).abs();
    if residual > ROOT_TOL * (1.0 + s * s) {
        return Err(EigenError::NotASpectralRoot { s, residual });
    }
    let n = system_for(LevelKind::Positive, s, p);
    let v = null_vectors(&n, 1.0 + s, false)[0];
    Ok(Coefficients::new(v[0], v[1], s))
}

/// Relative null-vector residual `‖N c‖ / (‖N‖ ‖c‖)`.
pub fn null_residual(c: &Coefficients, p: &ExtensionParams) -> f64 {
    let n = system_for(c.kind, c.s, p);
    let r0 = n[0][0] * c.a + n[0][1] * c.b;
    let r1 = n[1][0] * c.a + n[1][1] * c.b;
    let nn = n.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    (r0.norm_sqr() + r1.norm_sqr()).sqrt() / (nn.max(1e-300) * c.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SinZeroParity {
    /// `s = 2qπ`.
    Even,
    /// `s = (2q + 1)π`.
    Odd,
}

/// Closed-form coefficients on `sin s = 0` for the β chart.
pub fn coefficients_sin_zero(q: u32, parity: SinZeroParity, b0: f64, b1: f64) -> Coefficients {
    let i = Complex64::i();
    let e_plus = Complex64::from_polar(b0.sin(), b1);
    let e_minus = Complex64::from_polar(b0.sin(), -b1);
    let c0 = b0.cos();
    match parity {
        SinZeroParity::Even => {
            let s = 2.0 * q as f64 * PI;
            Coefficients::new((e_plus + 1.0 - c0) * (2.0 * PI * q as f64), i * (e_minus + 1.0 + c0), s)
        }
        SinZeroParity::Odd => {
            let s = (2 * q + 1) as f64 * PI;
            Coefficients::new(i * (1.0 - e_plus + c0), (e_minus - 1.0 + c0) * s, s)
        }
    }
}

/// Normalized eigenfunction `scale · (A f1 + B f2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenfunction {
    pub coefficients: Coefficients,
    pub a: f64,
    pub scale: f64,
}

/// `∫ f1²` and `∫ f2²` over `[-a, a]`; the cross term vanishes by parity.
fn basis_norms(kind: LevelKind, root: f64, a: f64) -> (f64, f64) {
    match kind {
        LevelKind::Positive => {
            let sc = if root.abs() < 1e-4 { 1.0 - root * root / 6.0 } else { root.sin() / root };
            (a * (1.0 + sc), a * (1.0 - sc))
        }
        LevelKind::Negative => {
            let t = if root.abs() < 1e-4 { 0.5 - root * root / 24.0 } else { (root / 2.0).tanh() / root };
            let sech2 = 1.0 / (root / 2.0).cosh().powi(2);
            (a * sech2 + 2.0 * a * t, 2.0 * a * t - a * sech2)
        }
        LevelKind::Zero => (2.0 * a, 2.0 * a / 3.0),
    }
}

impl Eigenfunction {
    pub fn kind(&self) -> LevelKind {
        self.coefficients.kind
    }

    /// Basis values and derivatives at `x`.
    fn basis(&self, x: f64) -> ([f64; 2], [f64; 2]) {
        let root = self.coefficients.s;
        let a = self.a;
        match self.kind() {
            LevelKind::Positive => {
                let k = root / (2.0 * a);
                let (sn, cs) = (k * x).sin_cos();
                ([cs, sn], [-k * sn, k * cs])
            }
            LevelKind::Negative => {
                let k = root / (2.0 * a);
                let half = root / 2.0;
                // cosh(kx)/cosh(r/2) and sinh(kx)/cosh(r/2) without overflow
                let ax = (k * x).abs();
                let lead = (ax - half).exp() / (1.0 + (-root).exp());
                let ch = lead * (1.0 + (-2.0 * ax).exp());
                let sh = lead * (1.0 - (-2.0 * ax).exp()) * x.signum();
                ([ch, sh], [k * sh, k * ch])
            }
            LevelKind::Zero => ([1.0, x / a], [0.0, 1.0 / a]),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let (f, _) = self.basis(x);
        (self.coefficients.a * f[0] + self.coefficients.b * f[1]) * self.scale
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        let (_, d) = self.basis(x);
        (self.coefficients.a * d[0] + self.coefficients.b * d[1]) * self.scale
    }

    pub fn energy(&self) -> f64 {
        let k = self.coefficients.s / (2.0 * self.a);
        match self.kind() {
            LevelKind::Positive => k * k,
            LevelKind::Negative => -k * k,
            LevelKind::Zero => 0.0,
        }
    }

    pub fn trace(&self) -> BoundaryTrace {
        BoundaryTrace {
            phi_minus: self.eval(-self.a),
            phi_plus: self.eval(self.a),
            dphi_minus: self.derivative(-self.a),
            dphi_plus: self.derivative(self.a),
        }
    }

    /// `|φ(a)|² - |φ(-a)|²`.
    pub fn boundary_asymmetry(&self) -> f64 {
        self.eval(self.a).norm_sqr() - self.eval(-self.a).norm_sqr()
    }

    /// Exact `∫ |φ|²`.
    pub fn norm_sqr(&self) -> f64 {
        let (n1, n2) = basis_norms(self.kind(), self.coefficients.s, self.a);
        self.scale * self.scale * (self.coefficients.a.norm_sqr() * n1 + self.coefficients.b.norm_sqr() * n2)
    }

    /// Exact `⟨self, other⟩` for two functions of the same level.
    fn inner_same_level(&self, other: &Self) -> Complex64 {
        let (n1, n2) = basis_norms(self.kind(), self.coefficients.s, self.a);
        (self.coefficients.a.conj() * other.coefficients.a * n1 + self.coefficients.b.conj() * other.coefficients.b * n2)
            * (self.scale * other.scale)
    }

    pub fn sample(&self, x: Vec<f64>) -> GridFunction {
        GridFunction::sample(x, |t| self.eval(t))
    }
}

/// Rescales to unit `L²` norm on `[-a, a]` using exact integrals.
pub fn normalize(c: Coefficients, a: f64) -> Result<Eigenfunction, EigenError> {
    if c.norm() == 0.0 {
        return Err(EigenError::ZeroFunction);
    }
    let f = Eigenfunction {
        coefficients: c,
        a,
        scale: 1.0,
    };
    let n = f.norm_sqr();
    if !(n > 0.0) {
        return Err(EigenError::ZeroFunction);
    }
    Ok(Eigenfunction {
        scale: 1.0 / n.sqrt(),
        ..f
    })
}

/// Orthonormal eigenfunctions of `level`: one, or two for a degenerate level.
pub fn eigenfunctions_for_level(level: &EnergyLevel, p: &ExtensionParams) -> Result<Vec<Eigenfunction>, EigenError> {
    let root = level.root();
    let n = system_for(level.kind, root, p);
    let scale = 1.0 + root;
    if level.kind == LevelKind::Positive && level.multiplicity == 1 {
        return Ok(vec![normalize(coefficients_ab(root, p)?, p.a)?]);
    }
    if level.kind == LevelKind::Zero && det2(&n).norm() > spectral::ZERO_ENERGY_TOL {
        return Err(EigenError::NotASpectralRoot {
            s: 0.0,
            residual: det2(&n).norm(),
        });
    }
    let mut out: Vec<Eigenfunction> = Vec::new();
    for v in null_vectors(&n, scale, level.multiplicity == 2) {
        let c = Coefficients {
            a: v[0],
            b: v[1],
            s: root,
            kind: level.kind,
        };
        let mut f = normalize(c, p.a)?;
        for g in &out {
            let proj = g.inner_same_level(&f);
            let ca = f.coefficients.a * f.scale - g.coefficients.a * g.scale * proj;
            let cb = f.coefficients.b * f.scale - g.coefficients.b * g.scale * proj;
            f = normalize(Coefficients { a: ca, b: cb, ..c }, p.a)?;
        }
        out.push(f);
    }
    Ok(out)
}

/// Ground state written as `amplitude · e^{iφ} cos(s0 x/(2a) + δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalGroundState {
    pub phase: f64,
    pub delta: f64,
    pub s0: f64,
    pub a: f64,
    pub amplitude: f64,
}

impl CanonicalGroundState {
    pub fn wavenumber(&self) -> f64 {
        self.s0 / (2.0 * self.a)
    }

    /// `θ = s0 x/(2a) + δ`.
    pub fn theta(&self, x: f64) -> f64 {
        self.wavenumber() * x + self.delta
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase) * self.theta(x).cos()
    }
}

/// Phase alignment of a positive eigenfunction.
///
/// Requires `arg A ≡ arg B (mod π)`. The common phase is taken from the
/// larger coefficient, so `δ ∈ (-π/2, π/2)` when `|A| ≥ |B|` and
/// `δ ∈ (-π, 0)` otherwise.
pub fn phase_delta(c: Coefficients, a: f64) -> Result<CanonicalGroundState, EigenError> {
    if c.kind != LevelKind::Positive {
        return Err(EigenError::NotPositive);
    }
    let f = normalize(c, a)?;
    let (ca, cb) = (c.a * f.scale, c.b * f.scale);
    if ca.norm() > 0.0 && cb.norm() > 0.0 {
        let mismatch = (ca.conj() * cb).im / (ca.norm() * cb.norm());
        if mismatch.abs() > PHASE_TOL {
            return Err(EigenError::PhaseMismatch(mismatch.asin()));
        }
    }
    let phase = if ca.norm() >= cb.norm() { ca.arg() } else { cb.arg() };
    let rot = Complex64::from_polar(1.0, -phase);
    let (cc, dd) = ((ca * rot).re, (cb * rot).re);
    Ok(CanonicalGroundState {
        phase,
        delta: (-dd).atan2(cc),
        s0: c.s,
        a,
        amplitude: cc.hypot(dd),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::{boundary_residual, params_from_beta, params_from_theta};
    use crate::quad::integrate;
    use crate::spectral::{positive_levels, RootFindConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn textbook_normalization() {
        for coeffs in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0))] {
            let f = normalize(Coefficients::new(coeffs.0, coeffs.1, PI), 0.5).unwrap();
            assert!((f.scale - 2f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(
            normalize(Coefficients::new(c(0.0, 0.0), c(0.0, 0.0), PI), 0.5),
            Err(EigenError::ZeroFunction)
        );
    }

    #[test]
    fn normalization_matches_quadrature() {
        let f = normalize(Coefficients::new(c(0.3, -1.2), c(0.7, 0.4), 2.7), 0.8).unwrap();
        let q = integrate(|x| f.eval(x).norm_sqr(), -0.8, 0.8, 1e-13);
        assert!((q - 1.0).abs() < 1e-9);
        let g = normalize(
            Coefficients {
                a: c(0.3, 0.1),
                b: c(-0.5, 2.0),
                s: 7.5,
                kind: LevelKind::Negative,
            },
            0.5,
        )
        .unwrap();
        let q = integrate(|x| g.eval(x).norm_sqr(), -0.5, 0.5, 1e-13);
        assert!((q - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parity_time_coefficients() {
        let (phi1, phi2) = (0.3, 0.7);
        let p = crate::spectral::parity_time_params(phi1, phi2, 0.5).unwrap();
        let levels = crate::spectral::levels_parity_time(phi1, phi2, 0.5, &RootFindConfig::default()).unwrap();
        for l in levels.iter().take(6) {
            let co = coefficients_ab(l.s.unwrap(), &p).unwrap();
            let ratio = match l.branch {
                crate::spectral::Branch::Eq19Even => co.b.norm() / co.a.norm(),
                _ => co.a.norm() / co.b.norm(),
            };
            assert!(ratio < 1e-8, "{:?} {}", l, ratio);
        }
    }

    #[test]
    fn sin_zero_coefficients_solve_boundary() {
        for &(b0, b1, psi) in &[(PI / 2.0, 0.0, 0.3), (0.4, 1.1, 0.9), (1.3, -0.6, 2.0)] {
            for q in 1..4u32 {
                let co = coefficients_sin_zero(q, SinZeroParity::Even, b0, b1);
                let p = params_from_beta(b0, b1, psi, 2 * q as i64, 0.5).unwrap();
                let f = normalize(co, 0.5).unwrap();
                assert!(boundary_residual(&p.unitary(), &f.trace(), 0.5).residual < 1e-10);
                let co = coefficients_sin_zero(q, SinZeroParity::Odd, b0, b1);
                let p = params_from_beta(b0, b1, psi, 2 * q as i64 + 1, 0.5).unwrap();
                let f = normalize(co, 0.5).unwrap();
                assert!(boundary_residual(&p.unitary(), &f.trace(), 0.5).residual < 1e-10);
            }
        }
        let co = coefficients_sin_zero(2, SinZeroParity::Even, 0.0, 0.0);
        assert!(co.a.norm() < 1e-15 && (co.b - c(0.0, 2.0)).norm() < 1e-15);
        let co = coefficients_sin_zero(2, SinZeroParity::Odd, 0.0, 0.0);
        assert!((co.a - c(0.0, 2.0)).norm() < 1e-15 && co.b.norm() < 1e-15);
        let co = coefficients_sin_zero(1, SinZeroParity::Even, PI / 2.0, 0.0);
        assert!((co.a - c(4.0 * PI, 0.0)).norm() < 1e-14 && (co.b - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_delta_examples() {
        let g = phase_delta(Coefficients::new(c(1.0, 0.0), c(0.0, 0.0), PI), 0.5).unwrap();
        assert_eq!((g.phase, g.delta), (0.0, 0.0));
        let g = phase_delta(Coefficients::new(c(0.0, 0.0), c(1.0, 0.0), PI), 0.5).unwrap();
        assert!(g.phase.abs() < 1e-15 && (g.delta + PI / 2.0).abs() < 1e-15);
        let w = Complex64::from_polar(0.5f64.sqrt(), PI / 4.0);
        let co = Coefficients::new(w, w, 2.0);
        let g = phase_delta(co, 0.5).unwrap();
        assert!((g.phase - PI / 4.0).abs() < 1e-14 && (g.delta + PI / 4.0).abs() < 1e-14);
        let f = normalize(co, 0.5).unwrap();
        for k in 0..50 {
            let x = -0.5 + k as f64 / 49.0;
            assert!((f.eval(x) - g.eval(x)).norm() < 1e-12);
        }
        assert!(matches!(
            phase_delta(Coefficients::new(c(1.0, 0.0), c(0.0, 1.0), 2.0), 0.5),
            Err(EigenError::PhaseMismatch(_))
        ));
    }

    #[test]
    fn not_a_root() {
        let t = crate::extensions::ExtensionParams::textbook(0.5);
        assert!(matches!(coefficients_ab(1.0, &t), Err(EigenError::NotASpectralRoot { .. })));
    }

    #[test]
    fn eigenfunctions_admissible_and_orthogonal() {
        let p = params_from_theta(0.9, 0.7, -1.3, 1.9, 0.5).unwrap();
        let cfg = RootFindConfig::default();
        let spec = crate::spectral::spectrum(&p, &cfg).unwrap();
        let fs: Vec<Eigenfunction> = spec
            .levels
            .iter()
            .take(6)
            .flat_map(|l| eigenfunctions_for_level(l, &p).unwrap())
            .collect();
        for f in &fs {
            assert!(boundary_residual(&p.unitary(), &f.trace(), p.a).residual < 1e-8);
            assert!(null_residual(&f.coefficients, &p) < 1e-8);
        }
        for i in 0..fs.len() {
            for j in 0..i {
                let re = integrate(|x| (fs[i].eval(x).conj() * fs[j].eval(x)).re, -0.5, 0.5, 1e-13);
                let im = integrate(|x| (fs[i].eval(x).conj() * fs[j].eval(x)).im, -0.5, 0.5, 1e-13);
                assert!(re.hypot(im) < 1e-8);
            }
        }
        let _ = positive_levels(&p, &cfg).unwrap();
    }
}
