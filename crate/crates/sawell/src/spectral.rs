//! Spectra of the extensions.
//!
//! A positive level `E = s²/(2a)²` belongs to a root of
//! `F(s) = (m0 + cos ψ) sin s + 2s(m1 - cos s sin ψ) - s²(m0 - cos ψ) sin s`.
//! The boundary system `N(s)` acting on the coefficients of
//! `A cos(sx/2a) + B sin(sx/2a)` satisfies `det N(s) = 2 e^{iψ} F(s)`.
//! Negative levels `E = -r²/(2a)²` are the roots of `G(r)` with
//! `F(-ir) = -i G(r)`, and zero energy is tested directly on `c1 + c2 x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extensions::{params_from_theta, BoundaryMatrix, BoundaryTrace, ExtensionError, ExtensionParams};
use crate::grid::fmt_real;
use crate::roots::{bisect, golden_min, scan_values, uniform_grid, Candidate};

pub type Mat2 = [[Complex64; 2]; 2];

/// Tolerance on `|det|` of the linear-ansatz system (entries are O(1)).
pub const ZERO_ENERGY_TOL: f64 = 1e-10;
/// Relative threshold for accepting a touching minimum as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-8;
/// Residual accepted when checking that a candidate solves `F(s) = 0`.
pub const ROOT_CHECK_TOL: f64 = 1e-8;
const DENOMINATOR_TOL: f64 = 1e-10;
const PRECONDITION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid root-finding configuration: {0}")]
    Config(String),
    #[error("m0 - cos(psi) = {0:e} is too small for the branch form")]
    DegenerateDenominator(f64),
    #[error("branch radicand is negative at s = {0}")]
    ComplexBranch(f64),
    #[error("found {0} negative levels; at most two can exist")]
    TooManyNegativeLevels(usize),
    #[error("precondition of the {0:?} family fails by {1:e}")]
    PreconditionViolated(OmegaVariant, f64),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LevelKind {
    Positive,
    Zero,
    Negative,
}

/// Which equation produced (or is satisfied by) a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    Det,
    Eq13Plus,
    Eq13Minus,
    Eq19Even,
    Eq19Odd,
    Eq21b,
    Eq31a,
    Eq31c,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Det => "DET",
            Branch::Eq13Plus => "EQ13_PLUS",
            Branch::Eq13Minus => "EQ13_MINUS",
            Branch::Eq19Even => "EQ19_EVEN",
            Branch::Eq19Odd => "EQ19_ODD",
            Branch::Eq21b => "EQ21B",
            Branch::Eq31a => "EQ31A",
            Branch::Eq31c => "EQ31C",
        }
    }
}

impl LevelKind {
    pub fn label(&self) -> &'static str {
        match self {
            LevelKind::Positive => "POSITIVE",
            LevelKind::Zero => "ZERO",
            LevelKind::Negative => "NEGATIVE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub kind: LevelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(rename = "E")]
    pub energy: f64,
    pub branch: Branch,
    pub multiplicity: u8,
}

impl EnergyLevel {
    pub fn positive(s: f64, a: f64, branch: Branch, multiplicity: u8) -> Self {
        Self {
            kind: LevelKind::Positive,
            s: Some(s),
            r: None,
            energy: (s / (2.0 * a)).powi(2),
            branch,
            multiplicity,
        }
    }

    pub fn negative(r: f64, a: f64, multiplicity: u8) -> Self {
        Self {
            kind: LevelKind::Negative,
            s: None,
            r: Some(r),
            energy: -(r / (2.0 * a)).powi(2),
            branch: Branch::Det,
            multiplicity,
        }
    }

    pub fn zero(multiplicity: u8) -> Self {
        Self {
            kind: LevelKind::Zero,
            s: None,
            r: None,
            energy: 0.0,
            branch: Branch::Det,
            multiplicity,
        }
    }

    /// `s`, `r` or 0 depending on the kind.
    pub fn root(&self) -> f64 {
        self.s.or(self.r).unwrap_or(0.0)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.kind.label(),
            fmt_real(self.root()),
            fmt_real(self.energy),
            self.branch.label(),
            self.multiplicity
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<EnergyLevel>,
}

pub const SPECTRUM_CSV_HEADER: &str = "kind,s_or_r,E,branch,multiplicity";

impl Spectrum {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SPECTRUM_CSV_HEADER);
        out.push('\n');
        for level in &self.levels {
            out.push_str(&level.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn ground(&self) -> Option<&EnergyLevel> {
        self.levels.first()
    }

    /// Energies repeated according to multiplicity.
    pub fn energies_with_multiplicity(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity as usize))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootFindConfig {
    pub s_max: f64,
    pub grid_step: f64,
    pub tol: f64,
    pub r_max: f64,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        Self {
            s_max: 20.0 * PI,
            grid_step: 0.01,
            tol: 1e-12,
            r_max: 50.0,
        }
    }
}

impl RootFindConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.s_max) || !ok(self.grid_step) || !ok(self.tol) || !ok(self.r_max) {
            return Err(SpectralError::Config("all fields must be positive and finite".into()));
        }
        if self.grid_step >= self.s_max || self.grid_step >= self.r_max {
            return Err(SpectralError::Config("grid_step must be below s_max and r_max".into()));
        }
        Ok(())
    }
}

/// Wall traces of `cos(sx/2a)` and `sin(sx/2a)`, valid for complex `s`.
pub fn trig_traces(s: Complex64, a: f64) -> [BoundaryTrace; 2] {
    let half = s / 2.0;
    let (c, n) = (half.cos(), half.sin());
    let k = s / (2.0 * a);
    [
        BoundaryTrace {
            phi_minus: c,
            phi_plus: c,
            dphi_minus: k * n,
            dphi_plus: -k * n,
        },
        BoundaryTrace {
            phi_minus: -n,
            phi_plus: n,
            dphi_minus: k * c,
            dphi_plus: k * c,
        },
    ]
}

/// Wall traces of `cosh(rx/2a)` and `sinh(rx/2a)`.
pub fn hyperbolic_traces(r: f64, a: f64) -> [BoundaryTrace; 2] {
    let (ch, sh) = ((r / 2.0).cosh(), (r / 2.0).sinh());
    let k = r / (2.0 * a);
    let re = |v: f64| Complex64::new(v, 0.0);
    [
        BoundaryTrace {
            phi_minus: re(ch),
            phi_plus: re(ch),
            dphi_minus: re(-k * sh),
            dphi_plus: re(k * sh),
        },
        BoundaryTrace {
            phi_minus: re(-sh),
            phi_plus: re(sh),
            dphi_minus: re(k * ch),
            dphi_plus: re(k * ch),
        },
    ]
}

/// Wall traces of `1` and `x/a`.
pub fn linear_traces(a: f64) -> [BoundaryTrace; 2] {
    let re = |v: f64| Complex64::new(v, 0.0);
    [
        BoundaryTrace {
            phi_minus: re(1.0),
            phi_plus: re(1.0),
            dphi_minus: re(0.0),
            dphi_plus: re(0.0),
        },
        BoundaryTrace {
            phi_minus: re(-1.0),
            phi_plus: re(1.0),
            dphi_minus: re(1.0 / a),
            dphi_plus: re(1.0 / a),
        },
    ]
}

/// Matrix of the boundary condition acting on the coefficients of `basis`.
///
/// Column `j` is `lhs(f_j) - U rhs(f_j)`; a combination `Σ c_j f_j` is
/// admissible iff the matrix annihilates `c`.
pub fn system_matrix(u: &BoundaryMatrix, basis: &[BoundaryTrace; 2], a: f64) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, t) in basis.iter().enumerate() {
        let (lhs, rhs) = t.sides(a);
        let ur = u.apply(rhs);
        out[0][j] = lhs[0] - ur[0];
        out[1][j] = lhs[1] - ur[1];
    }
    out
}

/// `N(s)` for the trigonometric basis.
pub fn boundary_system(s: Complex64, p: &ExtensionParams) -> Mat2 {
    system_matrix(&p.unitary(), &trig_traces(s, p.a), p.a)
}

pub fn det2(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Trace of `N(s)`. At a simple root the eigenvalues of `N(s)` are `{0, tr N}`.
pub fn trace_n(s: f64, p: &ExtensionParams) -> Complex64 {
    let n = boundary_system(Complex64::new(s, 0.0), p);
    n[0][0] + n[1][1]
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

fn tanhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 3.0 + 2.0 * x.powi(4) / 15.0
    } else {
        x.tanh() / x
    }
}

/// `F(s)`, real for real `s`, odd in `s`.
pub fn reduced_det(s: f64, p: &ExtensionParams) -> f64 {
    let (m0, m1) = (p.m0(), p.m1());
    let (cp, sp) = (p.psi.cos(), p.psi.sin());
    (m0 + cp) * s.sin() + 2.0 * s * (m1 - s.cos() * sp) - s * s * (m0 - cp) * s.sin()
}

/// `F(s)/s`, continuous at 0 with value `F'(0) = m0 + cos ψ + 2(m1 - sin ψ)`.
pub fn reduced_det_scaled(s: f64, p: &ExtensionParams) -> f64 {
    let (m0, m1) = (p.m0(), p.m1());
    let (cp, sp) = (p.psi.cos(), p.psi.sin());
    (m0 + cp) * sinc(s) + 2.0 * (m1 - s.cos() * sp) - s * (m0 - cp) * s.sin()
}

/// `G(r) = (m0 + cos ψ) sinh r + 2r(m1 - cosh r sin ψ) + r²(m0 - cos ψ) sinh r`.
pub fn hyperbolic_det(r: f64, p: &ExtensionParams) -> f64 {
    let (m0, m1) = (p.m0(), p.m1());
    let (cp, sp) = (p.psi.cos(), p.psi.sin());
    (m0 + cp) * r.sinh() + 2.0 * r * (m1 - r.cosh() * sp) + r * r * (m0 - cp) * r.sinh()
}

/// `G(r) / (r cosh r)`, finite for all `r ≥ 0` and equal to `F'(0)` at 0.
pub fn hyperbolic_det_scaled(r: f64, p: &ExtensionParams) -> f64 {
    let (m0, m1) = (p.m0(), p.m1());
    let (cp, sp) = (p.psi.cos(), p.psi.sin());
    tanhc(r) * ((m0 + cp) + r * r * (m0 - cp)) + 2.0 * (m1 / r.cosh() - sp)
}

/// Largest relative deviation of `det N` from `2e^{iψ}F(s)` on the real
/// axis and from `-2i e^{iψ}G(r)` on the negative imaginary axis, over
/// `samples` quasi-random extensions.
pub fn continuation_self_test(samples: usize) -> f64 {
    let golden = [0.754_877_666_246_692_7, 0.569_840_290_998_053_3, 0.430_159_709_001_946_7, 0.324_717_957_244_746];
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let u: Vec<f64> = golden.iter().map(|g| (0.5 + g * (k + 1) as f64).fract()).collect();
        let p = match params_from_theta(2.0 * PI * u[0], PI * u[1], 2.0 * PI * u[2], PI * u[3], 0.5) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let x = 0.1 + 9.9 * ((k as f64) * 0.618_033_988_749_895).fract();
        let phase = Complex64::from_polar(1.0, p.psi);

        let det_real = det2(&boundary_system(Complex64::new(x, 0.0), &p));
        let want_real = phase * 2.0 * reduced_det(x, &p);
        let scale_real = 1.0 + x * x;
        worst = worst.max((det_real - want_real).norm() / scale_real);

        let det_imag = det2(&boundary_system(Complex64::new(0.0, -x), &p));
        let want_imag = phase * Complex64::new(0.0, -2.0) * hyperbolic_det(x, &p);
        let scale_imag = (1.0 + x * x) * x.cosh();
        worst = worst.max((det_imag - want_imag).norm() / scale_imag);
    }
    worst
}

/// Right-hand side `R ± sqrt(R² + Q sin² s)` of the branch form
/// `s sin s = R ± sqrt(R² + Q sin² s)`, where `R = (m1 - cos s sin ψ)/D`,
/// `Q = (m0 + cos ψ)/D` and `D = m0 - cos ψ`.
pub fn rhs_eq13(s: f64, p: &ExtensionParams, plus: bool) -> Result<f64, SpectralError> {
    let d = p.m0() - p.psi.cos();
    if d.abs() <= DENOMINATOR_TOL {
        return Err(SpectralError::DegenerateDenominator(d));
    }
    let r = (p.m1() - s.cos() * p.psi.sin()) / d;
    let q = (p.m0() + p.psi.cos()) / d;
    let radicand = r * r + q * s.sin().powi(2);
    if radicand < 0.0 {
        return Err(SpectralError::ComplexBranch(s));
    }
    let root = radicand.sqrt();
    Ok(if plus { r + root } else { r - root })
}

/// Scaled residual `(s sin s - rhs) / (1 + |R| + |s sin s|)` of one branch;
/// `None` where the branch is complex or the denominator degenerates.
pub fn eq13_residual(s: f64, p: &ExtensionParams, plus: bool) -> Option<f64> {
    let rhs = rhs_eq13(s, p, plus).ok()?;
    let d = p.m0() - p.psi.cos();
    let r = (p.m1() - s.cos() * p.psi.sin()) / d;
    let x = s * s.sin();
    Some((x - rhs) / (1.0 + r.abs() + x.abs()))
}

/// The branch of the `s sin s` form best satisfied at `s`, if any within `tol`.
pub fn eq13_branch(s: f64, p: &ExtensionParams, tol: f64) -> Option<Branch> {
    let plus = eq13_residual(s, p, true).map(f64::abs);
    let minus = eq13_residual(s, p, false).map(f64::abs);
    match (plus, minus) {
        (Some(a), Some(b)) if a <= b && a <= tol => Some(Branch::Eq13Plus),
        (_, Some(b)) if b <= tol => Some(Branch::Eq13Minus),
        (Some(a), _) if a <= tol => Some(Branch::Eq13Plus),
        _ => None,
    }
}

/// A zero of one branch of the `s sin s` form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSolution {
    pub s: f64,
    pub branch: Branch,
    /// Points with `sin s = 0` solve the squared form for free; they are
    /// levels only when `F` also vanishes there.
    pub on_sin_zero: bool,
}

/// All zeros of one branch on `(0, s_max]`.
pub fn eq13_branch_solutions(p: &ExtensionParams, plus: bool, cfg: &RootFindConfig) -> Result<Vec<BranchSolution>, SpectralError> {
    cfg.validate()?;
    let d = p.m0() - p.psi.cos();
    if d.abs() <= DENOMINATOR_TOL {
        return Err(SpectralError::DegenerateDenominator(d));
    }
    let g = |s: f64| eq13_residual(s, p, plus).unwrap_or(f64::NAN);
    let xs = uniform_grid(cfg.grid_step * 1e-3, cfg.s_max + cfg.grid_step, cfg.grid_step);
    let vals: Vec<f64> = xs.iter().map(|&s| g(s)).collect();
    let branch = if plus { Branch::Eq13Plus } else { Branch::Eq13Minus };
    let limit = cfg.s_max * (1.0 + 1e-12);
    let mut out = Vec::new();
    for (s, _) in locate(&g, &xs, &vals, cfg.tol, &|s| g(s).abs() <= DOUBLE_ROOT_TOL) {
        if s > limit {
            continue;
        }
        let on_sin_zero = (s / PI - (s / PI).round()).abs() * PI <= 1e-9;
        out.push(BranchSolution { s, branch, on_sin_zero });
    }
    Ok(out)
}

/// Roots of `f` from its samples: crossings are bisected, touching minima
/// are either split into two crossings or accepted as double roots when
/// `accept_touch` holds at the minimizer.
fn locate<F: Fn(f64) -> f64>(f: &F, xs: &[f64], vals: &[f64], tol: f64, accept_touch: &dyn Fn(f64) -> bool) -> Vec<(f64, u8)> {
    let mut out = Vec::new();
    for cand in scan_values(xs, vals) {
        match cand {
            Candidate::Exact(x) => out.push((x, 1)),
            Candidate::Crossing { lo, hi, flo, .. } => out.push((bisect(f, lo, hi, flo, tol), 1)),
            Candidate::Touch { lo, hi } => {
                let sign = f(0.5 * (lo + hi)).signum();
                let g = |x: f64| sign * f(x);
                let x = golden_min(g, lo, hi, tol);
                let gx = g(x);
                if gx < 0.0 {
                    out.push((bisect(f, lo, x, f(lo), tol), 1));
                    out.push((bisect(f, x, hi, f(x), tol), 1));
                } else if accept_touch(x) {
                    out.push((x, 2));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Result of testing the linear ansatz `c1 + c2 x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroEnergy {
    pub exists: bool,
    pub dimension: u8,
}

pub fn zero_energy_system(p: &ExtensionParams) -> Mat2 {
    system_matrix(&p.unitary(), &linear_traces(p.a), p.a)
}

/// Zero energy exists iff `det Z = 0` for the linear-ansatz system `Z`.
/// `det Z = 4 e^{iψ} F'(0)`.
pub fn zero_energy_exists(p: &ExtensionParams) -> ZeroEnergy {
    let z = zero_energy_system(p);
    if det2(&z).norm() > ZERO_ENERGY_TOL {
        return ZeroEnergy { exists: false, dimension: 0 };
    }
    let all_small = z.iter().flatten().all(|v| v.norm() <= ZERO_ENERGY_TOL);
    ZeroEnergy {
        exists: true,
        dimension: if all_small { 2 } else { 1 },
    }
}

/// Positive levels on `(0, s_max]`, ascending.
pub fn positive_levels(p: &ExtensionParams, cfg: &RootFindConfig) -> Result<Vec<EnergyLevel>, SpectralError> {
    cfg.validate()?;
    let f = |s: f64| reduced_det_scaled(s, p);
    // one step past s_max so a root sitting on s_max is bracketed
    let xs = uniform_grid(0.0, cfg.s_max + cfg.grid_step, cfg.grid_step);
    let mut vals: Vec<f64> = xs.iter().map(|&s| f(s)).collect();
    if zero_energy_exists(p).exists {
        vals[0] = 0.0;
    }
    let accept = |s: f64| reduced_det(s, p).abs() <= DOUBLE_ROOT_TOL * (1.0 + s * s);
    let limit = cfg.s_max * (1.0 + 1e-12);
    let levels = locate(&f, &xs, &vals, cfg.tol, &accept)
        .into_iter()
        .filter(|&(s, _)| s > 0.0 && s <= limit)
        .map(|(s, mult)| {
            let branch = eq13_branch(s, p, ROOT_CHECK_TOL).unwrap_or(Branch::Det);
            EnergyLevel::positive(s, p.a, branch, mult)
        })
        .collect();
    Ok(levels)
}

/// Negative levels, deepest first. Roots beyond `r_max` are taken from the
/// large-`r` limit `D r² - 2 r sin ψ + (m0 + cos ψ) = 0`, whose corrections
/// are of order `e^{-r}`.
pub fn negative_levels(p: &ExtensionParams, cfg: &RootFindConfig) -> Result<Vec<EnergyLevel>, SpectralError> {
    cfg.validate()?;
    let h = |r: f64| hyperbolic_det_scaled(r, p);
    let xs = uniform_grid(0.0, cfg.r_max, cfg.grid_step);
    let mut vals: Vec<f64> = xs.iter().map(|&r| h(r)).collect();
    if zero_energy_exists(p).exists {
        vals[0] = 0.0;
    }
    let accept = |r: f64| h(r).abs() <= DOUBLE_ROOT_TOL * (1.0 + r);
    let mut roots: Vec<(f64, u8)> = locate(&h, &xs, &vals, cfg.tol, &accept)
        .into_iter()
        .filter(|&(r, _)| r > 0.0)
        .collect();

    let d = p.m0() - p.psi.cos();
    let sp = p.psi.sin();
    let disc = (1.0 - p.m0() * p.m0()).max(0.0).sqrt();
    let q = sp + disc;
    if d != 0.0 && q != 0.0 {
        let far: Vec<f64> = [q / d, (p.m0() + p.psi.cos()) / q]
            .into_iter()
            .filter(|r| r.is_finite() && *r > cfg.r_max)
            .collect();
        match far.as_slice() {
            [r1, r2] if (r1 - r2).abs() <= DOUBLE_ROOT_TOL * r1.max(*r2) => roots.push((0.5 * (r1 + r2), 2)),
            _ => roots.extend(far.iter().map(|&r| (r, 1))),
        }
    }

    let count: usize = roots.iter().map(|&(_, m)| m as usize).sum();
    if count > 2 {
        return Err(SpectralError::TooManyNegativeLevels(count));
    }
    roots.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(roots.into_iter().map(|(r, m)| EnergyLevel::negative(r, p.a, m)).collect())
}

/// Every level below `s_max`, ascending in energy.
pub fn spectrum(p: &ExtensionParams, cfg: &RootFindConfig) -> Result<Spectrum, SpectralError> {
    let mut levels = negative_levels(p, cfg)?;
    let zero = zero_energy_exists(p);
    if zero.exists {
        levels.push(EnergyLevel::zero(zero.dimension));
    }
    levels.extend(positive_levels(p, cfg)?);
    Ok(Spectrum { levels })
}

/// Extension with `m2 = m3 = 0`, `θ0 = φ2 - φ1`, `ψ = φ1 + φ2`.
pub fn parity_time_params(phi1: f64, phi2: f64, a: f64) -> Result<ExtensionParams, SpectralError> {
    Ok(params_from_theta(phi2 - phi1, 0.0, 0.0, phi1 + phi2, a)?)
}

/// Even-branch function `s sin(s/2) sin φ2 + cos(s/2) cos φ2`.
pub fn even_branch(s: f64, phi2: f64) -> f64 {
    s * (s / 2.0).sin() * phi2.sin() + (s / 2.0).cos() * phi2.cos()
}

/// Odd-branch function divided by `s`: `cos(s/2) sin φ1 - sin(s/2) cos φ1 / s`.
pub fn odd_branch_scaled(s: f64, phi1: f64) -> f64 {
    (s / 2.0).cos() * phi1.sin() - 0.5 * sinc(s / 2.0) * phi1.cos()
}

fn branch_roots<F: Fn(f64) -> f64>(f: F, cfg: &RootFindConfig) -> Vec<(f64, u8)> {
    let xs = uniform_grid(0.0, cfg.s_max + cfg.grid_step, cfg.grid_step);
    let vals: Vec<f64> = xs.iter().map(|&s| f(s)).collect();
    let limit = cfg.s_max * (1.0 + 1e-12);
    locate(&f, &xs, &vals, cfg.tol, &|s| f(s).abs() <= DOUBLE_ROOT_TOL * (1.0 + s))
        .into_iter()
        .filter(|&(s, _)| s > 0.0 && s <= limit)
        .collect()
}

/// Positive levels of the `m2 = m3 = 0` family, with the even roots of
/// `s tan(s/2) = -cot φ2` and the odd roots of `s cot(s/2) = cot φ1`.
pub fn levels_parity_time(phi1: f64, phi2: f64, a: f64, cfg: &RootFindConfig) -> Result<Vec<EnergyLevel>, SpectralError> {
    cfg.validate()?;
    let mut levels: Vec<EnergyLevel> = branch_roots(|s| even_branch(s, phi2), cfg)
        .into_iter()
        .map(|(s, m)| EnergyLevel::positive(s, a, Branch::Eq19Even, m))
        .chain(
            branch_roots(|s| odd_branch_scaled(s, phi1), cfg)
                .into_iter()
                .map(|(s, m)| EnergyLevel::positive(s, a, Branch::Eq19Odd, m)),
        )
        .collect();
    levels.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(levels)
}

/// `s = nπ` for `n = 1..=count`.
pub fn levels_sin_zero(count: usize, a: f64) -> Vec<EnergyLevel> {
    (1..=count)
        .map(|n| EnergyLevel::positive(n as f64 * PI, a, Branch::Eq21b, 1))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaVariant {
    /// `sin ω1 = 0`.
    Eq31a,
    /// `sin(ω2 - ψ) = 0`.
    Eq31c,
}

/// Closed-form candidates `cos s = ±cos ω1 cos(ω0 + ψ)` on `(0, s_max]`,
/// every arccos branch of both signs.
///
/// Both variants reduce to this relation. Candidates are not all levels;
/// see [`levels_omega`].
pub fn omega_candidates(w0: f64, w1: f64, w2: f64, psi: f64, variant: OmegaVariant, s_max: f64) -> Result<Vec<f64>, SpectralError> {
    let defect = match variant {
        OmegaVariant::Eq31a => w1.sin().abs(),
        OmegaVariant::Eq31c => (w2 - psi).sin().abs(),
    };
    if defect > PRECONDITION_TOL {
        return Err(SpectralError::PreconditionViolated(variant, defect));
    }
    let c = (w1.cos() * (w0 + psi).cos()).clamp(-1.0, 1.0);
    let limit = s_max * (1.0 + 1e-12);
    let mut out = Vec::new();
    for alpha in [c.acos(), (-c).acos()] {
        let mut k = 0.0;
        while 2.0 * PI * k - alpha <= limit {
            for s in [2.0 * PI * k - alpha, 2.0 * PI * k + alpha] {
                if s > 1e-12 && s <= limit && !out.iter().any(|&t: &f64| (t - s).abs() <= 1e-12 * (1.0 + s)) {
                    out.push(s);
                }
            }
            k += 1.0;
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Levels of the ω families: the closed-form candidates that are true roots
/// of `F`. Generic points of either family keep only part of the candidate
/// set; `ψ = π/2` keeps all of it.
pub fn levels_omega(
    w0: f64,
    w1: f64,
    w2: f64,
    psi: f64,
    a: f64,
    variant: OmegaVariant,
    cfg: &RootFindConfig,
) -> Result<Vec<EnergyLevel>, SpectralError> {
    cfg.validate()?;
    let p = crate::extensions::params_from_omega(w0, w1, w2, psi, a)?;
    let branch = match variant {
        OmegaVariant::Eq31a => Branch::Eq31a,
        OmegaVariant::Eq31c => Branch::Eq31c,
    };
    let mut out = Vec::new();
    for s in omega_candidates(w0, w1, w2, psi, variant, cfg.s_max)? {
        let scale = 1.0 + s * s;
        if reduced_det(s, &p).abs() > ROOT_CHECK_TOL * scale {
            continue;
        }
        let h = 1e-5 * (1.0 + s);
        let slope = (reduced_det(s + h, &p) - reduced_det(s - h, &p)) / (2.0 * h);
        let mult = if slope.abs() <= 1e-6 * scale { 2 } else { 1 };
        out.push(EnergyLevel::positive(s, a, branch, mult));
    }
    Ok(out)
}

/// Value of `sec ω1 sin(ω2 - ψ)` for the `cos(ω0 + ω2) = 0` family, where
/// `cos s = ±` this value; only a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq31bDiagnostic {
    pub cos_s: f64,
    pub admissible: bool,
}

pub fn eq31b_diagnostic(w1: f64, w2: f64, psi: f64) -> Eq31bDiagnostic {
    let cos_s = (w2 - psi).sin() / w1.cos();
    Eq31bDiagnostic {
        cos_s,
        admissible: cos_s.is_finite() && cos_s.abs() <= 1.0,
    }
}
