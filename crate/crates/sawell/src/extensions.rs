//! Unitary boundary matrices and their parametrizations.
//!
//! An extension is fixed by the boundary condition
//!
//! ```text
//! (2aφ'(-a) - iφ(-a), 2aφ'(a) + iφ(a)) = U (2aφ'(-a) + iφ(-a), 2aφ'(a) - iφ(a))
//! ```
//!
//! with `U = e^{iψ} [[m0 - i m3, -m2 - i m1], [m2 - i m1, m0 + i m3]]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigenfunctions;
use crate::spectral::{EnergyLevel, LevelKind};

pub const UNIT_SPHERE_TOL: f64 = 1e-12;
pub const CLASSIFY_TOL: f64 = 1e-12;

const ASYMMETRY_TOL: f64 = 1e-8;
const SIN_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("m is not a unit vector: |m|² - 1 = {0:e}")]
    NotOnUnitSphere(f64),
    #[error("psi = {0} lies outside [0, π]")]
    PsiOutOfRange(f64),
    #[error("half-width a = {0} must be positive and finite")]
    BadHalfWidth(f64),
    #[error("non-finite parameter")]
    NonFinite,
    #[error("parametrization {0:?} expects {1} angles, got {2}")]
    AngleCount(Parametrization, usize, usize),
    #[error("beta parametrization needs the level index n")]
    MissingLevelIndex,
}

/// One point `(ψ, m, a)` of the four-parameter family of extensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtensionInput")]
pub struct ExtensionParams {
    pub psi: f64,
    pub m: [f64; 4],
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    Theta,
    Beta,
    Omega,
}

fn default_half_width() -> f64 {
    0.5
}

/// Accepted JSON shapes for an extension.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ExtensionInput {
    Angles {
        parametrization: Parametrization,
        angles: Vec<f64>,
        psi: f64,
        #[serde(default = "default_half_width")]
        a: f64,
        #[serde(default)]
        n: Option<i64>,
    },
    Direct {
        psi: f64,
        m: [f64; 4],
        #[serde(default = "default_half_width")]
        a: f64,
    },
}

impl TryFrom<ExtensionInput> for ExtensionParams {
    type Error = ExtensionError;

    fn try_from(input: ExtensionInput) -> Result<Self, Self::Error> {
        match input {
            ExtensionInput::Direct { psi, m, a } => ExtensionParams::new(psi, m, a),
            ExtensionInput::Angles {
                parametrization,
                angles,
                psi,
                a,
                n,
            } => {
                let want = match parametrization {
                    Parametrization::Beta => 2,
                    _ => 3,
                };
                if angles.len() != want {
                    return Err(ExtensionError::AngleCount(parametrization, want, angles.len()));
                }
                match parametrization {
                    Parametrization::Theta => params_from_theta(angles[0], angles[1], angles[2], psi, a),
                    Parametrization::Omega => params_from_omega(angles[0], angles[1], angles[2], psi, a),
                    Parametrization::Beta => {
                        let n = n.ok_or(ExtensionError::MissingLevelIndex)?;
                        params_from_beta(angles[0], angles[1], psi, n, a)
                    }
                }
            }
        }
    }
}

impl ExtensionParams {
    pub fn new(psi: f64, m: [f64; 4], a: f64) -> Result<Self, ExtensionError> {
        if !psi.is_finite() || m.iter().any(|v| !v.is_finite()) {
            return Err(ExtensionError::NonFinite);
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(ExtensionError::BadHalfWidth(a));
        }
        if !(-UNIT_SPHERE_TOL..=PI + UNIT_SPHERE_TOL).contains(&psi) {
            return Err(ExtensionError::PsiOutOfRange(psi));
        }
        let defect = m.iter().map(|v| v * v).sum::<f64>() - 1.0;
        if defect.abs() > UNIT_SPHERE_TOL {
            return Err(ExtensionError::NotOnUnitSphere(defect));
        }
        Ok(Self { psi, m, a })
    }

    /// Builds the extension with the same `U` for any real `ψ`.
    ///
    /// `ψ` is reduced modulo 2π and then folded into `[0, π]` using
    /// `e^{i(ψ - π)}(-M) = e^{iψ}M`.
    pub fn normalized(psi: f64, m: [f64; 4], a: f64) -> Result<Self, ExtensionError> {
        if !psi.is_finite() {
            return Err(ExtensionError::NonFinite);
        }
        let mut psi = psi.rem_euclid(2.0 * PI);
        let mut m = m;
        if psi > PI + UNIT_SPHERE_TOL {
            psi -= PI;
            m = m.map(|v| -v);
        }
        Self::new(psi.clamp(0.0, PI), m, a)
    }

    /// Dirichlet walls, `U = I`.
    pub fn textbook(a: f64) -> Self {
        Self {
            psi: 0.0,
            m: [1.0, 0.0, 0.0, 0.0],
            a,
        }
    }

    pub fn unitary(&self) -> BoundaryMatrix {
        unitary_from_params(self)
    }

    pub fn m0(&self) -> f64 {
        self.m[0]
    }
    pub fn m1(&self) -> f64 {
        self.m[1]
    }
    pub fn m2(&self) -> f64 {
        self.m[2]
    }
    pub fn m3(&self) -> f64 {
        self.m[3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMatrix {
    pub u: [[Complex64; 2]; 2],
}

impl BoundaryMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            u: [[one, zero], [zero, one]],
        }
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.u[0][0] * v[0] + self.u[0][1] * v[1],
            self.u[1][0] * v[0] + self.u[1][1] * v[1],
        ]
    }

    pub fn adjoint(&self) -> Self {
        let u = &self.u;
        Self {
            u: [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]],
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (x, y) = (&self.u, &other.u);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        Self { u: out }
    }

    /// Max-entry norm of `U†U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for (i, row) in p.u.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((cell - target).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        self.u[0][0] + self.u[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.u[0][0] * self.u[1][1] - self.u[0][1] * self.u[1][0]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.u[0][1] - self.u[1][0]).norm() <= tol
    }

    /// Eigenvalues of the (normal) matrix, ordered by argument.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let t = self.trace();
        let d = self.det();
        let disc = (t * t - 4.0 * d).sqrt();
        let mut ev = [(t + disc) / 2.0, (t - disc) / 2.0];
        ev.sort_by(|x, y| x.arg().total_cmp(&y.arg()));
        ev
    }

    /// Unit eigenvector for `lambda`, where `other` is the remaining eigenvalue.
    ///
    /// Returns `None` when `U - other·I` vanishes, i.e. `U` is a multiple of
    /// the identity and every vector qualifies.
    pub fn eigenvector(&self, other: Complex64) -> Option<[Complex64; 2]> {
        let u = &self.u;
        let c0 = [u[0][0] - other, u[1][0]];
        let c1 = [u[0][1], u[1][1] - other];
        let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
        let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
        let (col, norm) = if n0 >= n1 { (c0, n0) } else { (c1, n1) };
        if norm <= 1e-14 {
            return None;
        }
        Some([col[0] / norm, col[1] / norm])
    }
}

/// Wall values and derivatives of a candidate wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryTrace {
    pub phi_minus: Complex64,
    pub phi_plus: Complex64,
    pub dphi_minus: Complex64,
    pub dphi_plus: Complex64,
}

impl BoundaryTrace {
    /// The two sides of the boundary condition, `(lhs, rhs)` with `lhs = U rhs` required.
    pub fn sides(&self, a: f64) -> ([Complex64; 2], [Complex64; 2]) {
        let i = Complex64::i();
        let dm = self.dphi_minus * (2.0 * a);
        let dp = self.dphi_plus * (2.0 * a);
        (
            [dm - i * self.phi_minus, dp + i * self.phi_plus],
            [dm + i * self.phi_minus, dp - i * self.phi_plus],
        )
    }

    /// Trace whose sides are `(U r, r)` for an arbitrary vector `r`; it
    /// always satisfies the boundary condition of `u`.
    pub fn admissible(u: &BoundaryMatrix, r: [Complex64; 2], a: f64) -> Self {
        let l = u.apply(r);
        let two_i = Complex64::new(0.0, 2.0);
        Self {
            phi_minus: (r[0] - l[0]) / two_i,
            phi_plus: (l[1] - r[1]) / two_i,
            dphi_minus: (l[0] + r[0]) / (4.0 * a),
            dphi_plus: (l[1] + r[1]) / (4.0 * a),
        }
    }

    /// `B(φ, φ) = φ'(a)φ̄(a) - φ(a)φ̄'(a) - φ'(-a)φ̄(-a) + φ(-a)φ̄'(-a)`.
    pub fn boundary_form(&self) -> Complex64 {
        self.dphi_plus * self.phi_plus.conj() - self.phi_plus * self.dphi_plus.conj()
            - self.dphi_minus * self.phi_minus.conj()
            + self.phi_minus * self.dphi_minus.conj()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCheck {
    pub residual: f64,
    pub form: Complex64,
}

pub fn unitary_from_params(p: &ExtensionParams) -> BoundaryMatrix {
    let [m0, m1, m2, m3] = p.m;
    let phase = Complex64::from_polar(1.0, p.psi);
    BoundaryMatrix {
        u: [
            [phase * Complex64::new(m0, -m3), phase * Complex64::new(-m2, -m1)],
            [phase * Complex64::new(m2, -m1), phase * Complex64::new(m0, m3)],
        ],
    }
}

pub fn params_from_theta(t0: f64, t1: f64, t2: f64, psi: f64, a: f64) -> Result<ExtensionParams, ExtensionError> {
    let m = [t1.cos() * t0.cos(), t1.cos() * t0.sin(), t1.sin() * t2.cos(), t1.sin() * t2.sin()];
    ExtensionParams::normalized(psi, m, a)
}

/// β-chart of the `sin s = 0` family. `n` only enters through the sign of `m1`.
pub fn params_from_beta(b0: f64, b1: f64, psi: f64, n: i64, a: f64) -> Result<ExtensionParams, ExtensionError> {
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let c = psi.cos();
    let m = [c * b0.cos(), sign * psi.sin(), c * b0.sin() * b1.cos(), c * b0.sin() * b1.sin()];
    ExtensionParams::normalized(psi, m, a)
}

pub fn params_from_omega(w0: f64, w1: f64, w2: f64, psi: f64, a: f64) -> Result<ExtensionParams, ExtensionError> {
    let m = [w1.sin() * w2.cos(), w1.cos() * w0.sin(), w1.cos() * w0.cos(), w1.sin() * w2.sin()];
    ExtensionParams::normalized(psi, m, a)
}

pub fn boundary_residual(u: &BoundaryMatrix, t: &BoundaryTrace, a: f64) -> BoundaryCheck {
    let (lhs, rhs) = t.sides(a);
    let ur = u.apply(rhs);
    let residual = ((lhs[0] - ur[0]).norm_sqr() + (lhs[1] - ur[1]).norm_sqr()).sqrt();
    BoundaryCheck {
        residual,
        form: t.boundary_form(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParityMechanism {
    M3Zero,
    SinSZero,
    #[serde(rename = "EQ_21C")]
    Eq21c,
    None,
    /// Only a spectrum can decide; none was supplied.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionClass {
    pub time_reversal: bool,
    /// `None` when the mechanism is `Unknown`.
    pub parity: Option<bool>,
    pub parity_mechanism: ParityMechanism,
}

/// Classifies time reversal and parity.
///
/// Parity means `|φ(a)|² = |φ(-a)|²` for every eigenfunction. With `m3 = 0`
/// this holds identically. Otherwise it is decided level by level from the
/// supplied spectrum: every root on `sin s = 0` gives `SIN_S_ZERO`, every
/// root with a balanced eigenfunction gives `EQ_21C`.
pub fn classify(p: &ExtensionParams, spectrum: Option<&[EnergyLevel]>) -> ExtensionClass {
    let time_reversal = p.m2().abs() <= CLASSIFY_TOL;
    if p.m3().abs() <= CLASSIFY_TOL {
        return ExtensionClass {
            time_reversal,
            parity: Some(true),
            parity_mechanism: ParityMechanism::M3Zero,
        };
    }
    let Some(levels) = spectrum else {
        return ExtensionClass {
            time_reversal,
            parity: None,
            parity_mechanism: ParityMechanism::Unknown,
        };
    };
    let mut all_sin_zero = true;
    let mut all_balanced = true;
    for level in levels {
        if level.kind == LevelKind::Positive && (level.s.unwrap_or(0.0)).sin().abs() > SIN_ZERO_TOL {
            all_sin_zero = false;
        }
        if level.kind != LevelKind::Positive {
            all_sin_zero = false;
        }
        let balanced = match eigenfunctions::eigenfunctions_for_level(level, p) {
            Ok(fs) => fs.iter().all(|f| f.boundary_asymmetry().abs() <= ASYMMETRY_TOL),
            Err(_) => false,
        };
        all_balanced &= balanced;
    }
    let mechanism = if all_sin_zero && !levels.is_empty() {
        ParityMechanism::SinSZero
    } else if all_balanced {
        ParityMechanism::Eq21c
    } else {
        ParityMechanism::None
    };
    ExtensionClass {
        time_reversal,
        parity: Some(mechanism != ParityMechanism::None),
        parity_mechanism: mechanism,
    }
}
