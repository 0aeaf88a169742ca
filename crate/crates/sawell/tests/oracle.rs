mod common;

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use sawell::oracle::*;
use sawell::spectral::{spectrum, zero_energy_exists, RootFindConfig};
use sawell::susy::{build_chain, partner_energy, partner_potential, partner_state, Partner};
use sawell::ExtensionParams;

fn to_matrix(a: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.len(), a.len(), |i, j| a[i][j])
}

/// Lowest generalized eigenvalues of `K x = λ M x` through a Cholesky factor of `M`.
fn dense_eigenvalues(pencil: &DensePencil, k: usize) -> Vec<f64> {
    let kmat = to_matrix(&pencil.stiffness);
    let mmat = to_matrix(&pencil.mass);
    let l = mmat.cholesky().expect("mass is positive definite").l();
    let linv = l.clone().try_inverse().expect("invertible factor");
    let mut reduced = &linv * kmat * linv.adjoint();
    // symmetrize the rounding noise away
    reduced = (&reduced + reduced.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(reduced).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.truncate(k);
    ev
}

#[test]
fn assembled_matrices_are_hermitian() {
    let mut r = common::rng(101);
    for _ in 0..20 {
        let p = common::random_extension(&mut r, 0.5);
        for order in [StencilOrder::Second, StencilOrder::Fourth] {
            let pencil = assemble_dense(&p, &Discretization::new(65, 0.5, order)).unwrap();
            let scale = pencil.stiffness.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(hermitian_defect(&pencil.stiffness) <= 1e-12 * scale);
            assert!(hermitian_defect(&pencil.mass) <= 1e-15);
        }
    }
}

#[test]
fn inertia_counts_agree_with_dense_eigensolver() {
    let mut r = common::rng(102);
    let mut cases: Vec<ExtensionParams> = (0..8).map(|_| common::random_extension(&mut r, 0.5)).collect();
    cases.push(ExtensionParams::textbook(0.5));
    cases.push(ExtensionParams::new(PI, [1.0, 0.0, 0.0, 0.0], 0.5).unwrap());
    // one Dirichlet direction and one Robin direction
    cases.push(ExtensionParams::new(PI / 2.0, [0.0, 0.0, 0.0, 1.0], 0.5).unwrap());
    for p in &cases {
        for order in [StencilOrder::Second, StencilOrder::Fourth] {
            let d = Discretization::new(129, 0.5, order);
            let dense = dense_eigenvalues(&assemble_dense(p, &d).unwrap(), 6);
            let fast = fd_spectrum(p, &d, 6).unwrap().eigenvalues;
            for (x, y) in dense.iter().zip(&fast) {
                assert!((x - y).abs() <= 1e-8 * (1.0 + x.abs()), "{p:?} {order:?}: {x} vs {y}");
            }
        }
    }
}

fn slope(order: StencilOrder) -> f64 {
    let p = ExtensionParams::textbook(0.5);
    let exact = PI * PI;
    let sizes = [129usize, 257, 513];
    let errs: Vec<f64> = sizes
        .iter()
        .map(|&n| (fd_spectrum(&p, &Discretization::new(n, 0.5, order), 1).unwrap().eigenvalues[0] - exact).abs())
        .collect();
    let hs: Vec<f64> = sizes.iter().map(|&n| 1.0 / (n - 1) as f64).collect();
    // least-squares slope of log err against log h
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

#[test]
fn convergence_orders() {
    assert!((slope(StencilOrder::Second) - 2.0).abs() <= 0.2);
    assert!((slope(StencilOrder::Fourth) - 4.0).abs() <= 0.2);
}

#[test]
fn zero_mode_matches_zero_energy_predicate() {
    let mut r = common::rng(103);
    let d = Discretization::new(513, 0.5, StencilOrder::Fourth);
    for _ in 0..30 {
        let p = common::random_extension(&mut r, 0.5);
        let spec = spectrum(&p, &RootFindConfig::default()).unwrap();
        let negatives = spec.levels.iter().filter(|l| l.energy < 0.0).map(|l| l.multiplicity as usize).sum::<usize>();
        let fd = fd_spectrum(&p, &d, negatives + 1).unwrap();
        let near_zero = fd.eigenvalues[negatives].abs() <= 1e-6;
        if zero_energy_exists(&p).exists {
            assert!(near_zero);
        }
    }
    let minus = ExtensionParams::new(PI, [1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
    assert!(zero_energy_exists(&minus).exists);
    assert!(fd_spectrum(&minus, &d, 1).unwrap().eigenvalues[0].abs() <= 1e-6);
}

#[test]
fn random_extensions_agree_with_closed_forms() {
    let mut r = common::rng(104);
    let d = Discretization::new(1001, 0.5, StencilOrder::Fourth);
    for _ in 0..10 {
        let p = common::random_extension(&mut r, 0.5);
        let exact = spectrum(&p, &RootFindConfig::default()).unwrap().energies_with_multiplicity();
        let fd = fd_spectrum_extrapolated(&p, &d, 6).unwrap();
        for (e, f) in exact.iter().zip(fd.best()) {
            assert!((e - f).abs() / e.abs().max(1.0) <= 1e-4, "{p:?}: {e} vs {f}");
        }
    }
}

#[test]
fn partner_spectra() {
    let chain = build_chain(&ExtensionParams::textbook(0.5), 3, &RootFindConfig::default()).unwrap();
    let d = Discretization::new(1001, 0.5, StencilOrder::Second);
    for (order, want) in [(1u32, vec![3.0, 8.0, 15.0]), (2, vec![5.0, 12.0])] {
        let fd = fd_partner_spectrum_extrapolated(&chain, order, &d, want.len()).unwrap();
        for (got, w) in fd.best().iter().zip(&want) {
            let e = w * PI * PI;
            assert!((got - e).abs() / e <= 1e-4);
        }
    }
    assert!(matches!(
        fd_partner_spectrum(&chain, 1, &Discretization::new(1001, 0.5, StencilOrder::Fourth), 2),
        Err(OracleError::UnsupportedOrder(_))
    ));
}

#[test]
fn partner_eigenvector_matches_state() {
    let chain = build_chain(&ExtensionParams::textbook(0.5), 2, &RootFindConfig::default()).unwrap();
    for order in [1u32, 2] {
        let d = Discretization::new(2001, 0.5, StencilOrder::Second);
        let (xs, v) = fd_partner_eigenvector(&chain, order, &d, 0).unwrap();
        let s: Vec<f64> = xs
            .iter()
            .map(|&x| partner_state(order, Partner::Second, order + 1, &chain.ground, x).unwrap().re)
            .collect();
        let dot: f64 = v.iter().zip(&s).map(|(a, b)| a * b).sum();
        let ns: f64 = s.iter().map(|b| b * b).sum::<f64>().sqrt();
        assert!(dot.abs() / ns >= 1.0 - 1e-5);
    }
}

#[test]
fn poles_inside_domain_are_reported() {
    // a chain whose ground state is shifted puts a pole inside the interval
    let chain = build_chain(&ExtensionParams::textbook(0.5), 1, &RootFindConfig::default()).unwrap();
    let mut shifted = chain.clone();
    shifted.ground.delta = 0.4;
    assert!(matches!(partner_cell(&shifted), Err(OracleError::PoleInsideDomain(_))));
    assert!(partner_cell(&chain).is_ok());
}

#[test]
fn residual_examples() {
    let chain = build_chain(&ExtensionParams::textbook(0.5), 1, &RootFindConfig::default()).unwrap();
    let g = chain.ground;
    let (lo, hi) = chain.guarded_interval();
    let grid = ResidualGrid {
        lo,
        hi,
        n_points: 2001,
        order: StencilOrder::Fourth,
    };
    let res = schrodinger_residual(
        |x| partner_potential(1, Partner::Second, &g, x).unwrap(),
        |x| partner_state(1, Partner::Second, 2, &g, x).unwrap(),
        partner_energy(1, 2, &g),
        &grid,
    )
    .unwrap();
    assert!(res <= 1e-6);
    let coarse = ResidualGrid { n_points: 5, ..grid };
    assert!(matches!(
        schrodinger_residual(|_| 0.0, |x| Complex64::new(x, 0.0), 0.0, &coarse),
        Err(OracleError::GridTooCoarse(5))
    ));
}

#[test]
fn report_serializes() {
    let fd = fd_spectrum_extrapolated(&ExtensionParams::textbook(0.5), &Discretization::new(257, 0.5, StencilOrder::Fourth), 2).unwrap();
    let text = serde_json::to_string(&fd).unwrap();
    let back: OracleSpectrum = serde_json::from_str(&text).unwrap();
    assert_eq!(back, fd);
}
