//! Finite-element oracle for the spectra.
//!
//! The boundary condition is rewritten as `(I - U) d = i (I + U) v` with
//! `d = (2aφ'(-a), 2aφ'(a))` and `v = (φ(-a), -φ(a))`. Eigendirections of
//! `U` with eigenvalue 1 pin `v` to zero; every other direction carries the
//! Robin weight `κ = i(1 + λ)/(1 - λ)`, so the quadratic form is
//! `∫|φ'|² + v†Kv/(2a)`. Order 2 uses linear elements with a lumped mass
//! (the ghost-point scheme), order 4 uses quadratic elements with the
//! midpoints condensed. Eigenvalues come from inertia counts of the shifted
//! pencil and bisection, so each count costs O(n).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extensions::{BoundaryMatrix, ExtensionParams};
use crate::susy::{partner_potential, Partner, SusyChain, SusyError};

pub const MIN_POINTS: usize = 64;
pub const MAX_POINTS: usize = 4001;
/// `|1 - λ|` below this makes an eigendirection of `U` a Dirichlet direction.
pub const DIRICHLET_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("n_points = {0} is below the minimum of {MIN_POINTS}")]
    TooFewPoints(usize),
    #[error("n_points = {0} exceeds the maximum of {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("fourth-order elements need an odd n_points, got {0}")]
    EvenPointCount(usize),
    #[error("asked for {k} eigenvalues on {n} points (at most n/4)")]
    TooManyEigenvalues { k: usize, n: usize },
    #[error("boundary matrix is not unitary (defect {0:e})")]
    SingularConstraint(f64),
    #[error("pole at x = {0} lies strictly inside the domain")]
    PoleInsideDomain(f64),
    #[error("stencil order {0:?} is not available for partner potentials")]
    UnsupportedOrder(StencilOrder),
    #[error("grid with {0} points is too coarse for the stencil")]
    GridTooCoarse(usize),
    #[error("eigenvalue bracket search failed")]
    NoBracket,
    #[error(transparent)]
    Susy(#[from] SusyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn power(&self) -> i32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub n_points: usize,
    pub a: f64,
    pub order: StencilOrder,
}

impl Discretization {
    pub fn new(n_points: usize, a: f64, order: StencilOrder) -> Self {
        Self { n_points, a, order }
    }

    pub fn h(&self) -> f64 {
        2.0 * self.a / (self.n_points - 1) as f64
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.n_points < MIN_POINTS {
            return Err(OracleError::TooFewPoints(self.n_points));
        }
        if self.n_points > MAX_POINTS {
            return Err(OracleError::TooManyPoints(self.n_points));
        }
        if self.order == StencilOrder::Fourth && self.n_points.is_multiple_of(2) {
            return Err(OracleError::EvenPointCount(self.n_points));
        }
        Ok(())
    }

    /// Grid with half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub richardson: Option<Vec<f64>>,
}

impl OracleSpectrum {
    /// Extrapolated values when present, else the raw ones.
    pub fn best(&self) -> &[f64] {
        self.richardson.as_deref().unwrap_or(&self.eigenvalues)
    }
}

/// Non-Dirichlet part of the boundary condition: `v = P c` with
/// orthonormal columns `P` and boundary form `c† G c`, `G = P†KP`.
#[derive(Debug, Clone, PartialEq)]
pub struct WallModel {
    pub columns: Vec<[Complex64; 2]>,
    pub form: Vec<Vec<Complex64>>,
}

impl WallModel {
    pub fn from_unitary(u: &BoundaryMatrix) -> Result<Self, OracleError> {
        let defect = u.unitarity_defect();
        if defect > 1e-10 {
            return Err(OracleError::SingularConstraint(defect));
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let ev = u.eigenvalues();
        let pinned: Vec<bool> = ev.iter().map(|l| (one - l).norm() <= DIRICHLET_TOL).collect();
        let kappa = |l: Complex64| (Complex64::i() * (one + l) / (one - l)).re;
        match (pinned[0], pinned[1]) {
            (true, true) => Ok(Self {
                columns: Vec::new(),
                form: Vec::new(),
            }),
            (false, false) => {
                // K = i (I - U)^{-1} (I + U); Hermitian for unitary U
                let m = [[one - u.u[0][0], -u.u[0][1]], [-u.u[1][0], one - u.u[1][1]]];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
                let plus = [[one + u.u[0][0], u.u[0][1]], [u.u[1][0], one + u.u[1][1]]];
                let mut k = vec![vec![zero; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        k[i][j] = Complex64::i() * (inv[i][0] * plus[0][j] + inv[i][1] * plus[1][j]);
                    }
                }
                let off = 0.5 * (k[0][1] + k[1][0].conj());
                let form = vec![vec![Complex64::new(k[0][0].re, 0.0), off], vec![off.conj(), Complex64::new(k[1][1].re, 0.0)]];
                Ok(Self {
                    columns: vec![[one, zero], [zero, one]],
                    form,
                })
            }
            (p0, _) => {
                let (free, fixed) = if p0 { (ev[1], ev[0]) } else { (ev[0], ev[1]) };
                let v = u.eigenvector(fixed).ok_or(OracleError::SingularConstraint(0.0))?;
                Ok(Self {
                    columns: vec![v],
                    form: vec![vec![Complex64::new(kappa(free), 0.0)]],
                })
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }
}

/// Shifted pencil reduced to wall vertices: a real symmetric tridiagonal
/// over the interior vertices, identical boundary-vertex diagonals, and the
/// wall coupling.
struct ReducedPencil {
    diag: Vec<f64>,
    off: Vec<f64>,
    boundary_diag: f64,
    boundary_off_first: f64,
    boundary_off_last: f64,
    condensed_negatives: usize,
}

fn reduce(d: &Discretization, sigma: f64) -> ReducedPencil {
    let h = d.h();
    match d.order {
        StencilOrder::Second => {
            let m = d.n_points - 2;
            ReducedPencil {
                diag: vec![2.0 / h - sigma * h; m],
                off: vec![-1.0 / h; m.saturating_sub(1)],
                boundary_diag: 1.0 / h - sigma * h / 2.0,
                boundary_off_first: -1.0 / h,
                boundary_off_last: -1.0 / h,
                condensed_negatives: 0,
            }
        }
        StencilOrder::Fourth => {
            let elements = (d.n_points - 1) / 2;
            let big_h = 2.0 * h;
            let ks = 1.0 / (3.0 * big_h);
            let ms = big_h / 30.0;
            let a_ll = 7.0 * ks - sigma * 4.0 * ms;
            let a_lm = -8.0 * ks - sigma * 2.0 * ms;
            let a_lr = ks + sigma * ms;
            let mut p = 16.0 * ks - sigma * 16.0 * ms;
            if p == 0.0 {
                p = f64::MIN_POSITIVE;
            }
            let s_diag = a_ll - a_lm * a_lm / p;
            let s_off = a_lr - a_lm * a_lm / p;
            let m = elements - 1;
            ReducedPencil {
                diag: vec![2.0 * s_diag; m],
                off: vec![s_off; m.saturating_sub(1)],
                boundary_diag: s_diag,
                boundary_off_first: s_off,
                boundary_off_last: s_off,
                condensed_negatives: if p < 0.0 { elements } else { 0 },
            }
        }
    }
}

/// Number of eigenvalues below `sigma`, counted with multiplicity.
fn count_below(d: &Discretization, wall: &WallModel, sigma: f64) -> usize {
    let pencil = reduce(d, sigma);
    let r = wall.rank();
    let m = pencil.diag.len();
    let mut negatives = pencil.condensed_negatives;
    // couplings of the first and last interior vertices to the wall unknowns
    let first: Vec<Complex64> = wall.columns.iter().map(|c| c[0] * pencil.boundary_off_first).collect();
    let last: Vec<Complex64> = wall.columns.iter().map(|c| -c[1] * pencil.boundary_off_last).collect();
    let mut schur: Vec<Vec<Complex64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mass = if i == j { pencil.boundary_diag } else { 0.0 };
                    wall.form[i][j] / (2.0 * d.a) + mass
                })
                .collect()
        })
        .collect();
    let mut coupling = vec![Complex64::new(0.0, 0.0); r];
    let mut q_prev = 1.0;
    let tiny = f64::MIN_POSITIVE * 1e10;
    for j in 0..m {
        let mut q = pencil.diag[j];
        if j > 0 {
            let e = pencil.off[j - 1];
            q -= e * e / q_prev;
            for c in coupling.iter_mut() {
                *c *= -e / q_prev;
            }
        }
        if j == 0 {
            for (c, f) in coupling.iter_mut().zip(&first) {
                *c += f;
            }
        }
        if j + 1 == m {
            for (c, l) in coupling.iter_mut().zip(&last) {
                *c += l;
            }
        }
        if q == 0.0 {
            q = tiny;
        }
        if q < 0.0 {
            negatives += 1;
        }
        for a in 0..r {
            for b in 0..r {
                schur[a][b] -= coupling[a].conj() * coupling[b] / q;
            }
        }
        q_prev = q;
    }
    negatives + hermitian_negatives(&schur)
}

fn hermitian_negatives(m: &[Vec<Complex64>]) -> usize {
    match m.len() {
        0 => 0,
        1 => usize::from(m[0][0].re < 0.0),
        _ => {
            let (a, dd) = (m[0][0].re, m[1][1].re);
            let det = a * dd - m[0][1].norm_sqr();
            if det < 0.0 {
                1
            } else if det > 0.0 {
                if a + dd < 0.0 {
                    2
                } else {
                    0
                }
            } else {
                usize::from(a + dd < 0.0)
            }
        }
    }
}

/// Lowest `k` eigenvalues of a pencil given its counting function.
fn eigenvalues_by_count<F: Fn(f64) -> usize>(count: F, k: usize, scale: f64) -> Result<Vec<f64>, OracleError> {
    let mut lo = -scale;
    let mut iter = 0;
    while count(lo) > 0 {
        lo *= 2.0;
        iter += 1;
        if iter > 2000 || !lo.is_finite() {
            return Err(OracleError::NoBracket);
        }
    }
    let mut hi = scale;
    iter = 0;
    while count(hi) < k {
        hi *= 2.0;
        iter += 1;
        if iter > 2000 || !hi.is_finite() {
            return Err(OracleError::NoBracket);
        }
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b || (b - a) <= 2e-16 * (a.abs().max(b.abs())) {
                break;
            }
            if count(mid) > i {
                b = mid;
            } else {
                a = mid;
            }
        }
        let value = 0.5 * (a + b);
        lo = lo.max(a.min(value));
        out.push(value);
    }
    Ok(out)
}

/// Lowest `k` eigenvalues of the extension on one grid.
pub fn fd_spectrum(p: &ExtensionParams, d: &Discretization, k: usize) -> Result<OracleSpectrum, OracleError> {
    d.validate()?;
    if k > d.n_points / 4 {
        return Err(OracleError::TooManyEigenvalues { k, n: d.n_points });
    }
    let wall = WallModel::from_unitary(&p.unitary())?;
    let scale = 1.0 / (d.a * d.a);
    let eigenvalues = eigenvalues_by_count(|s| count_below(d, &wall, s), k, scale)?;
    Ok(OracleSpectrum {
        eigenvalues,
        h: d.h(),
        richardson: None,
    })
}

/// Number of oracle eigenvalues below `e` on one grid.
pub fn fd_count_below(p: &ExtensionParams, d: &Discretization, e: f64) -> Result<usize, OracleError> {
    d.validate()?;
    let wall = WallModel::from_unitary(&p.unitary())?;
    Ok(count_below(d, &wall, e))
}

fn richardson(coarse: &[f64], fine: &[f64], power: i32) -> Vec<f64> {
    let f = 2f64.powi(power);
    coarse.iter().zip(fine).map(|(c, x)| (f * x - c) / (f - 1.0)).collect()
}

/// Spectra on `d` and on its refinement, with the Richardson combination.
pub fn fd_spectrum_extrapolated(p: &ExtensionParams, d: &Discretization, k: usize) -> Result<OracleSpectrum, OracleError> {
    let coarse = fd_spectrum(p, d, k)?;
    let fine = fd_spectrum(p, &d.refined(), k)?;
    let extrapolated = richardson(&coarse.eigenvalues, &fine.eigenvalues, d.order.power());
    Ok(OracleSpectrum {
        richardson: Some(extrapolated),
        ..fine
    })
}

/// Dense stiffness and mass matrices over the unknowns (interior nodes,
/// quadratic-element midpoints included, then wall unknowns).
#[derive(Debug, Clone, PartialEq)]
pub struct DensePencil {
    pub stiffness: Vec<Vec<Complex64>>,
    pub mass: Vec<Vec<Complex64>>,
}

pub fn assemble_dense(p: &ExtensionParams, d: &Discretization) -> Result<DensePencil, OracleError> {
    d.validate()?;
    let wall = WallModel::from_unitary(&p.unitary())?;
    let n = d.n_points;
    let h = d.h();
    let r = wall.rank();
    let interior = n - 2;
    let size = interior + r;
    let zero = Complex64::new(0.0, 0.0);
    let mut k = vec![vec![zero; size]; size];
    let mut m = vec![vec![zero; size]; size];
    // node j as a combination of unknowns
    let node = |j: usize| -> Vec<(usize, Complex64)> {
        if j == 0 {
            (0..r).map(|c| (interior + c, wall.columns[c][0])).collect()
        } else if j == n - 1 {
            (0..r).map(|c| (interior + c, -wall.columns[c][1])).collect()
        } else {
            vec![(j - 1, Complex64::new(1.0, 0.0))]
        }
    };
    let add = |target: &mut Vec<Vec<Complex64>>, i: usize, j: usize, v: f64| {
        for &(a, wa) in &node(i) {
            for &(b, wb) in &node(j) {
                target[a][b] += wa.conj() * wb * v;
            }
        }
    };
    match d.order {
        StencilOrder::Second => {
            for e in 0..n - 1 {
                let (i, j) = (e, e + 1);
                add(&mut k, i, i, 1.0 / h);
                add(&mut k, j, j, 1.0 / h);
                add(&mut k, i, j, -1.0 / h);
                add(&mut k, j, i, -1.0 / h);
                add(&mut m, i, i, h / 2.0);
                add(&mut m, j, j, h / 2.0);
            }
        }
        StencilOrder::Fourth => {
            let big_h = 2.0 * h;
            let ke = [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]];
            let me = [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]];
            for e in 0..(n - 1) / 2 {
                let nodes = [2 * e, 2 * e + 1, 2 * e + 2];
                for a in 0..3 {
                    for b in 0..3 {
                        add(&mut k, nodes[a], nodes[b], ke[a][b] / (3.0 * big_h));
                        add(&mut m, nodes[a], nodes[b], me[a][b] * big_h / 30.0);
                    }
                }
            }
        }
    }
    for a in 0..r {
        for b in 0..r {
            k[interior + a][interior + b] += wall.form[a][b] / (2.0 * d.a);
        }
    }
    Ok(DensePencil { stiffness: k, mass: m })
}

/// Max-entry asymmetry `|A - A†|`.
pub fn hermitian_defect(a: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            worst = worst.max((a[i][j] - a[j][i].conj()).norm());
        }
    }
    worst
}

/// Interval between the poles that enclose the chain's shifted origin.
pub fn partner_cell(chain: &SusyChain) -> Result<(f64, f64), OracleError> {
    let g = &chain.ground;
    let k = g.wavenumber();
    let a = chain.base.a;
    let x0 = -g.delta / k;
    let half = std::f64::consts::FRAC_PI_2 / k;
    let (lo, hi) = (x0 - half, x0 + half);
    let slack = 1e-9 * a;
    for x in [lo, hi] {
        if x > -a + slack && x < a - slack {
            return Err(OracleError::PoleInsideDomain(x));
        }
    }
    Ok((lo, hi))
}

/// Sampled partner potential and spacing for a Dirichlet cell.
fn partner_grid(chain: &SusyChain, order: u32, d: &Discretization) -> Result<(Vec<f64>, Vec<f64>, f64), OracleError> {
    if d.order != StencilOrder::Second {
        return Err(OracleError::UnsupportedOrder(d.order));
    }
    if d.n_points < MIN_POINTS {
        return Err(OracleError::TooFewPoints(d.n_points));
    }
    if d.n_points > MAX_POINTS {
        return Err(OracleError::TooManyPoints(d.n_points));
    }
    let (lo, hi) = partner_cell(chain)?;
    let n = d.n_points;
    let h = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (1..n - 1).map(|j| lo + h * j as f64).collect();
    let vs = xs
        .iter()
        .map(|&x| partner_potential(order, Partner::Second, &chain.ground, x))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok((xs, vs, h))
}

fn tridiagonal_count(vs: &[f64], h: f64, sigma: f64) -> usize {
    let off2 = 1.0 / h.powi(4);
    let mut q_prev = 0.0;
    let mut negatives = 0;
    for (j, v) in vs.iter().enumerate() {
        let mut q = 2.0 / (h * h) + v - sigma;
        if j > 0 {
            q -= off2 / q_prev;
        }
        if q == 0.0 {
            q = f64::MIN_POSITIVE * 1e10;
        }
        if q < 0.0 {
            negatives += 1;
        }
        q_prev = q;
    }
    negatives
}

/// Lowest `k` eigenvalues of `-d²/dx² + V^(L,2)` with Dirichlet walls at
/// the enclosing poles.
pub fn fd_partner_spectrum(chain: &SusyChain, order: u32, d: &Discretization, k: usize) -> Result<OracleSpectrum, OracleError> {
    if k > d.n_points / 4 {
        return Err(OracleError::TooManyEigenvalues { k, n: d.n_points });
    }
    let (_, vs, h) = partner_grid(chain, order, d)?;
    let scale = chain.ground.wavenumber().powi(2).max(1.0);
    let eigenvalues = eigenvalues_by_count(|s| tridiagonal_count(&vs, h, s), k, scale)?;
    Ok(OracleSpectrum {
        eigenvalues,
        h,
        richardson: None,
    })
}

pub fn fd_partner_spectrum_extrapolated(chain: &SusyChain, order: u32, d: &Discretization, k: usize) -> Result<OracleSpectrum, OracleError> {
    let coarse = fd_partner_spectrum(chain, order, d, k)?;
    let fine = fd_partner_spectrum(chain, order, &d.refined(), k)?;
    let extrapolated = richardson(&coarse.eigenvalues, &fine.eigenvalues, 2);
    Ok(OracleSpectrum {
        richardson: Some(extrapolated),
        ..fine
    })
}

/// Solves a tridiagonal system with partial pivoting.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    du.push(0.0);
    let mut dl = sub.to_vec();
    let mut du2 = vec![0.0; n];
    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = f64::MIN_POSITIVE * 1e10;
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            du2[i] = du[i + 1];
            du[i + 1] *= -f;
            du[i] = tmp;
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = f64::MIN_POSITIVE * 1e10;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = b[i];
        if i + 1 < n {
            v -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= du2[i] * x[i + 2];
        }
        x[i] = v / d[i];
    }
    x
}

/// Eigenvector of the partner problem for eigenvalue index `index`, on the
/// interior nodes of the Dirichlet cell, by inverse iteration.
pub fn fd_partner_eigenvector(chain: &SusyChain, order: u32, d: &Discretization, index: usize) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
    let spectrum = fd_partner_spectrum(chain, order, d, index + 1)?;
    let lambda = spectrum.eigenvalues[index];
    let (xs, vs, h) = partner_grid(chain, order, d)?;
    let m = vs.len();
    let off = vec![-1.0 / (h * h); m - 1];
    let shift = lambda * (1.0 + 1e-13);
    let diag: Vec<f64> = vs.iter().map(|v| 2.0 / (h * h) + v - shift).collect();
    let mut y: Vec<f64> = (0..m).map(|j| 1.0 + 0.1 * ((j * 7919) % 13) as f64).collect();
    for _ in 0..3 {
        y = solve_tridiagonal(&off, &diag, &off, &y);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
    }
    Ok((xs, y))
}

/// Grid for pointwise residual checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
    pub order: StencilOrder,
}

/// `sup |-φ'' + Vφ - Eφ|` over interior nodes, relative to the larger of
/// `sup |-φ'' + Vφ|` and `sup |φ''|`, with `φ''` from the central stencil
/// of the grid's order. The second term keeps zero-energy states scaled.
pub fn schrodinger_residual<V, P>(v: V, phi: P, e: f64, grid: &ResidualGrid) -> Result<f64, OracleError>
where
    V: Fn(f64) -> f64,
    P: Fn(f64) -> Complex64,
{
    let reach = match grid.order {
        StencilOrder::Second => 1,
        StencilOrder::Fourth => 2,
    };
    if grid.n_points < 2 * reach + 3 {
        return Err(OracleError::GridTooCoarse(grid.n_points));
    }
    let xs = crate::grid::linspace(grid.lo, grid.hi, grid.n_points);
    let h = (grid.hi - grid.lo) / (grid.n_points - 1) as f64;
    let values: Vec<Complex64> = xs.iter().map(|&x| phi(x)).collect();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in reach..grid.n_points - reach {
        let d2 = match grid.order {
            StencilOrder::Second => crate::grid::d2_second(&values, i, h),
            StencilOrder::Fourth => crate::grid::d2_fourth(&values, i, h),
        };
        let h_phi = values[i] * v(xs[i]) - d2;
        worst = worst.max((h_phi - values[i] * e).norm());
        scale = scale.max(h_phi.norm()).max(d2.norm());
    }
    Ok(worst / scale.max(1e-300))
}
