mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use sawell::eigenfunctions::*;
use sawell::extensions::boundary_residual;
use sawell::quad::integrate;
use sawell::spectral::{spectrum, RootFindConfig};
use sawell::{ExtensionParams, LevelKind};

fn inner(f: &Eigenfunction, g: &Eigenfunction) -> Complex64 {
    let a = f.a;
    let re = integrate(|x| (f.eval(x).conj() * g.eval(x)).re, -a, a, 1e-12);
    let im = integrate(|x| (f.eval(x).conj() * g.eval(x)).im, -a, a, 1e-12);
    Complex64::new(re, im)
}

fn cfg() -> RootFindConfig {
    RootFindConfig {
        s_max: 8.0 * PI,
        ..RootFindConfig::default()
    }
}

#[test]
fn eigenfunctions_are_normalized_admissible_solutions() {
    let mut r = common::rng(301);
    for _ in 0..25 {
        let p = common::random_extension(&mut r, 0.5);
        let u = p.unitary();
        for level in spectrum(&p, &cfg()).unwrap().levels {
            let fs = eigenfunctions_for_level(&level, &p).unwrap();
            assert_eq!(fs.len(), level.multiplicity as usize);
            for f in &fs {
                assert!((f.norm_sqr() - 1.0).abs() <= 1e-10);
                assert!((inner(f, f).re - 1.0).abs() <= 1e-9);
                let scale = 1.0 + level.energy.abs().sqrt();
                assert!(boundary_residual(&u, &f.trace(), p.a).residual <= 1e-7 * scale, "{p:?} {level:?}");
                // -φ'' = Eφ by a central difference
                let h = 1e-3;
                for x in [-0.31, 0.0, 0.17, 0.42] {
                    let d2 = (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
                    let err = (-d2 - f.eval(x) * level.energy).norm();
                    assert!(err <= 1e-4 * (1.0 + level.energy.abs()) * f.eval(x).norm().max(1.0));
                }
            }
            if fs.len() == 2 {
                assert!(inner(&fs[0], &fs[1]).norm() <= 1e-8);
            }
        }
    }
}

#[test]
fn derivative_matches_difference_quotient() {
    let p = ExtensionParams::new(0.7, [0.5, 0.5, 0.5, 0.5], 1.3).unwrap();
    for level in spectrum(&p, &cfg()).unwrap().levels {
        for f in eigenfunctions_for_level(&level, &p).unwrap() {
            let h = 1e-5;
            for x in [-1.0, 0.2, 0.9] {
                let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                assert!((fd - f.derivative(x)).norm() <= 1e-5 * (1.0 + f.derivative(x).norm()));
            }
        }
    }
}

#[test]
fn textbook_ground_state_is_a_cosine() {
    let p = ExtensionParams::textbook(0.5);
    let c = coefficients_ab(PI, &p).unwrap();
    assert!(null_residual(&c, &p) <= 1e-12);
    let g = phase_delta(c, 0.5).unwrap();
    assert!((g.wavenumber() - PI).abs() <= 1e-12);
    for x in [-0.4, 0.0, 0.3] {
        let want = (PI * x).cos();
        assert!((g.eval(x).norm() - g.amplitude * want.abs()).abs() <= 1e-12);
    }
    let f = normalize(c, 0.5).unwrap();
    for x in [-0.4, 0.0, 0.3] {
        assert!((f.eval(x).norm() - 2f64.sqrt() * (PI * x).cos().abs()).abs() <= 1e-12);
    }
}

#[test]
fn negative_levels_decay_from_the_walls() {
    // choose an extension with a bound state below zero
    let mut r = common::rng(302);
    let mut seen = 0;
    while seen < 5 {
        let p = common::random_extension(&mut r, 0.5);
        let spec = spectrum(&p, &cfg()).unwrap();
        for level in spec.levels.iter().filter(|l| l.kind == LevelKind::Negative) {
            seen += 1;
            for f in eigenfunctions_for_level(level, &p).unwrap() {
                assert_eq!(f.kind(), LevelKind::Negative);
                assert!((f.norm_sqr() - 1.0).abs() <= 1e-10);
                assert!((f.energy() - level.energy).abs() <= 1e-9 * level.energy.abs());
            }
        }
    }
}
