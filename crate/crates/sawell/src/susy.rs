//! Supersymmetric partner chain of a positive-ground-state extension.
//!
//! With the ground state `e^{iφ} cos θ`, `θ = kx + δ`, `k = s0/(2a)`, the
//! order-`L` superpotential is `W_L = L k tan θ` and
//!
//! ```text
//! V^(L,1) = W_L² - W_L' = k² L (-1 + (L-1) tan²θ)
//! V^(L,2) = W_L² + W_L' = k² L ( 1 + (L+1) tan²θ)
//! ```
//!
//! Both partners at order `L` share the levels `E = k²(n² - L²)`. The
//! `(L,2)` states are `Q_L^n(-i tan θ)` for `n ≥ L + 1`; the `(L,1)` states
//! are the `(L-1,2)` states, `Q_{L-1}^n`, with `Q_0^n` the base spectrum.
//! Orders are counted from 1 throughout this module.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigenfunctions::{coefficients_ab, phase_delta, CanonicalGroundState, EigenError};
use crate::extensions::ExtensionParams;
use crate::grid::{d1_fourth, d2_fourth, GridFunction};
use crate::legendre::{self, Family, LegendreIndex};
use crate::quad::integrate_relative;
use crate::spectral::{spectrum, LevelKind, RootFindConfig, SpectralError};

pub const POLE_TOL: f64 = 1e-12;
pub const SPACING_TOL: f64 = 1e-8;
/// Guard band around poles, as a fraction of the well width `2a`.
pub const GUARD_BAND: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SusyError {
    #[error("x = {0} sits on a pole of the superpotential")]
    PoleAtNode(f64),
    #[error("order must be at least 1, got {0}")]
    InvalidOrder(u32),
    #[error("Q_{degree}^{n} is not a bound state")]
    NotNormalizable { degree: u32, n: u32 },
    #[error("the extension has a negative level")]
    NegativeGroundState,
    #[error("the extension has a zero-energy level")]
    ZeroEnergyGroundState,
    #[error("the ground level is degenerate")]
    DegenerateGroundState,
    #[error("level {index} has s/s0 = {ratio}, expected {expected}")]
    NonUniformSpectrum { index: usize, ratio: f64, expected: f64 },
    #[error("grid with {0} points is too coarse for the stencil")]
    GridTooCoarse(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partner {
    /// `V^(L,1) = W² - W'`.
    First,
    /// `V^(L,2) = W² + W'`.
    Second,
}

impl Partner {
    pub fn index(&self) -> u8 {
        match self {
            Partner::First => 1,
            Partner::Second => 2,
        }
    }
}

fn check_order(order: u32) -> Result<(), SusyError> {
    if order == 0 {
        return Err(SusyError::InvalidOrder(order));
    }
    Ok(())
}

fn tan_theta(g: &CanonicalGroundState, x: f64) -> Result<f64, SusyError> {
    let th = g.theta(x);
    if th.cos().abs() <= POLE_TOL {
        return Err(SusyError::PoleAtNode(x));
    }
    Ok(th.tan())
}

/// `W_L(x) = L k tan θ`.
pub fn superpotential(order: u32, g: &CanonicalGroundState, x: f64) -> Result<f64, SusyError> {
    check_order(order)?;
    Ok(order as f64 * g.wavenumber() * tan_theta(g, x)?)
}

pub fn partner_potential(order: u32, which: Partner, g: &CanonicalGroundState, x: f64) -> Result<f64, SusyError> {
    check_order(order)?;
    let t2 = tan_theta(g, x)?.powi(2);
    let l = order as f64;
    let k2 = g.wavenumber().powi(2);
    Ok(match which {
        Partner::First => k2 * l * (-1.0 + (l - 1.0) * t2),
        Partner::Second => k2 * l * (1.0 + (l + 1.0) * t2),
    })
}

/// `z = i tan θ`, so `k z = i W_1`.
pub fn z_map(g: &CanonicalGroundState, x: f64) -> Result<Complex64, SusyError> {
    Ok(Complex64::new(0.0, tan_theta(g, x)?))
}

/// Legendre degree of a partner family at `order`.
pub fn state_degree(order: u32, which: Partner) -> u32 {
    match which {
        Partner::First => order - 1,
        Partner::Second => order,
    }
}

/// `θ` folded into `[-π/2, π/2]`; the states depend on `θ` only through `tan θ`.
fn principal(theta: f64) -> f64 {
    theta - PI * (theta / PI).round()
}

/// Unnormalized partner state `Q_d^n(-i tan θ)` with `d` from [`state_degree`].
pub fn partner_state(order: u32, which: Partner, n: u32, g: &CanonicalGroundState, x: f64) -> Result<Complex64, SusyError> {
    check_order(order)?;
    let degree = state_degree(order, which);
    let idx = LegendreIndex::new(degree, n);
    if !legendre::is_normalizable(Family::Q, idx) {
        return Err(SusyError::NotNormalizable { degree, n });
    }
    let th = principal(g.theta(x)).clamp(-FRAC_PI_2, FRAC_PI_2);
    legendre::q_trig(idx, th).map_err(|_| SusyError::NotNormalizable { degree, n })
}

/// `E = k²(n² - L²)`.
pub fn partner_energy(order: u32, n: u32, g: &CanonicalGroundState) -> f64 {
    g.wavenumber().powi(2) * ((n as f64).powi(2) - (order as f64).powi(2))
}

/// Partner state scaled to unit norm on `[-a, a]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPartnerState {
    pub order: u32,
    pub which: Partner,
    pub n: u32,
    pub scale: f64,
    pub ground: CanonicalGroundState,
}

impl NormalizedPartnerState {
    pub fn eval(&self, x: f64) -> Result<Complex64, SusyError> {
        Ok(partner_state(self.order, self.which, self.n, &self.ground, x)? * self.scale)
    }
}

pub fn partner_state_normalized(order: u32, which: Partner, n: u32, g: &CanonicalGroundState) -> Result<NormalizedPartnerState, SusyError> {
    partner_state(order, which, n, g, 0.0).or_else(|e| match e {
        SusyError::PoleAtNode(_) => Ok(Complex64::new(0.0, 0.0)),
        other => Err(other),
    })?;
    let a = g.a;
    let f = |x: f64| partner_state(order, which, n, g, x).map(|v| v.norm_sqr()).unwrap_or(0.0);
    let norm = integrate_relative(f, -a, a, 1e-13);
    Ok(NormalizedPartnerState {
        order,
        which,
        n,
        scale: 1.0 / norm.sqrt(),
        ground: *g,
    })
}

/// One order of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SusyLevel {
    pub order: u32,
    pub ground: CanonicalGroundState,
}

impl SusyLevel {
    pub fn potential(&self, which: Partner, x: f64) -> Result<f64, SusyError> {
        partner_potential(self.order, which, &self.ground, x)
    }

    pub fn energy(&self, n: u32) -> f64 {
        partner_energy(self.order, n, &self.ground)
    }

    /// Smallest `n` of the `(L,2)` family.
    pub fn lowest_admissible_n(&self) -> u32 {
        self.order + 1
    }

    pub fn state(&self, which: Partner, n: u32, x: f64) -> Result<Complex64, SusyError> {
        partner_state(self.order, which, n, &self.ground, x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SusyChain {
    pub base: ExtensionParams,
    pub ground: CanonicalGroundState,
    pub orders: Vec<SusyLevel>,
    /// Poles of `W` in `[-a, a]` (endpoints included).
    pub poles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub n: u32,
    #[serde(rename = "E")]
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: u32,
    pub lowest_n: u32,
    pub energies: Vec<EnergyRow>,
}

/// JSON view of a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub base: ExtensionParams,
    pub s0: f64,
    pub delta: f64,
    pub phase: f64,
    pub amplitude: f64,
    pub poles: Vec<f64>,
    pub orders: Vec<OrderReport>,
}

impl SusyChain {
    pub fn level(&self, order: u32) -> Option<&SusyLevel> {
        self.orders.iter().find(|l| l.order == order)
    }

    /// Energy table with `states` admissible levels per order.
    pub fn report(&self, states: u32) -> ChainReport {
        let orders = self
            .orders
            .iter()
            .map(|l| OrderReport {
                order: l.order,
                lowest_n: l.lowest_admissible_n(),
                energies: (l.lowest_admissible_n()..l.lowest_admissible_n() + states)
                    .map(|n| EnergyRow { n, energy: l.energy(n) })
                    .collect(),
            })
            .collect();
        ChainReport {
            base: self.base,
            s0: self.ground.s0,
            delta: self.ground.delta,
            phase: self.ground.phase,
            amplitude: self.ground.amplitude,
            poles: self.poles.clone(),
            orders,
        }
    }

    /// Interior interval `[-a + g, a - g]` shrunk by the guard band where a
    /// pole sits on the wall.
    pub fn guarded_interval(&self) -> (f64, f64) {
        let a = self.base.a;
        let band = GUARD_BAND * 2.0 * a;
        let near = |x: f64| self.poles.iter().any(|p| (p - x).abs() <= band);
        let lo = if near(-a) { -a + band } else { -a };
        let hi = if near(a) { a - band } else { a };
        (lo, hi)
    }
}

/// Poles `θ = π/2 + mπ` of `W` with `|x| ≤ a`.
pub fn poles_in_domain(g: &CanonicalGroundState) -> Vec<f64> {
    let k = g.wavenumber();
    let a = g.a;
    let slack = 1e-12 * (1.0 + a);
    let lo = ((k * (-a) + g.delta - FRAC_PI_2) / PI).floor() as i64 - 1;
    let hi = ((k * a + g.delta - FRAC_PI_2) / PI).ceil() as i64 + 1;
    (lo..=hi)
        .map(|m| (FRAC_PI_2 + m as f64 * PI - g.delta) / k)
        .filter(|x| x.abs() <= a + slack)
        .collect()
}

/// Builds the chain up to `max_order` after checking that the spectrum is
/// positive, simple and of the form `s_n = (n + 1) s0`.
pub fn build_chain(p: &ExtensionParams, max_order: u32, cfg: &RootFindConfig) -> Result<SusyChain, SusyError> {
    check_order(max_order)?;
    let spec = spectrum(p, cfg)?;
    if spec.levels.iter().any(|l| l.kind == LevelKind::Negative) {
        return Err(SusyError::NegativeGroundState);
    }
    if spec.levels.iter().any(|l| l.kind == LevelKind::Zero) {
        return Err(SusyError::ZeroEnergyGroundState);
    }
    let Some(first) = spec.levels.first() else {
        return Err(SusyError::NonUniformSpectrum {
            index: 0,
            ratio: f64::NAN,
            expected: 1.0,
        });
    };
    if first.multiplicity != 1 {
        return Err(SusyError::DegenerateGroundState);
    }
    let s0 = first.root();
    for (i, l) in spec.levels.iter().enumerate() {
        let expected = (i + 1) as f64;
        let ratio = l.root() / s0;
        if l.multiplicity != 1 || (ratio - expected).abs() > SPACING_TOL * expected {
            return Err(SusyError::NonUniformSpectrum { index: i, ratio, expected });
        }
    }
    let ground = phase_delta(coefficients_ab(s0, p)?, p.a)?;
    let orders = (1..=max_order).map(|order| SusyLevel { order, ground }).collect();
    Ok(SusyChain {
        base: *p,
        ground,
        orders,
        poles: poles_in_domain(&ground),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `A = ∂x + W`.
    Annihilate,
    /// `A† = -∂x + W`.
    Create,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderOperator {
    pub order: u32,
    pub direction: Direction,
    pub ground: CanonicalGroundState,
}

/// Applies `±∂x + W` with fourth-order differences; the result lives on the
/// nodes `2..n-2` of the input grid.
pub fn ladder_apply(op: &LadderOperator, f: &GridFunction) -> Result<GridFunction, SusyError> {
    check_order(op.order)?;
    let n = f.len();
    if n < 7 {
        return Err(SusyError::GridTooCoarse(n));
    }
    let h = f.spacing();
    let sign = match op.direction {
        Direction::Annihilate => 1.0,
        Direction::Create => -1.0,
    };
    let mut x = Vec::with_capacity(n - 4);
    let mut values = Vec::with_capacity(n - 4);
    for i in 2..n - 2 {
        let w = superpotential(op.order, &op.ground, f.x[i])?;
        x.push(f.x[i]);
        values.push(d1_fourth(&f.values, i, h) * sign + f.values[i] * w);
    }
    Ok(GridFunction { x, values })
}

/// `-f'' + V f` with fourth-order differences on nodes `2..n-2`.
pub fn hamiltonian_apply(order: u32, which: Partner, g: &CanonicalGroundState, f: &GridFunction) -> Result<GridFunction, SusyError> {
    check_order(order)?;
    let n = f.len();
    if n < 7 {
        return Err(SusyError::GridTooCoarse(n));
    }
    let h = f.spacing();
    let mut x = Vec::with_capacity(n - 4);
    let mut values = Vec::with_capacity(n - 4);
    for i in 2..n - 2 {
        let v = partner_potential(order, which, g, f.x[i])?;
        x.push(f.x[i]);
        values.push(-d2_fourth(&f.values, i, h) + f.values[i] * v);
    }
    Ok(GridFunction { x, values })
}
