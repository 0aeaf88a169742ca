mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use sawell::spectral::*;
use sawell::ExtensionParams;

/// The spectral function written out directly from the boundary condition.
fn f_direct(s: f64, p: &ExtensionParams) -> f64 {
    let [m0, m1, _, _] = p.m;
    let (sp, cp) = p.psi.sin_cos();
    (m0 + cp) * s.sin() + 2.0 * s * (m1 - s.cos() * sp) - s * s * (m0 - cp) * s.sin()
}

fn params() -> impl Strategy<Value = ExtensionParams> {
    (0.0..PI, prop::array::uniform4(-1.0..1.0f64), 0.2..3.0f64).prop_filter_map("nonzero m", |(psi, g, a)| {
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| ExtensionParams::new(psi, g.map(|x| x / norm), a).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_matches_spectral_function(p in params(), s in 0.05..40.0f64) {
        let det = det2(&boundary_system(Complex64::new(s, 0.0), &p));
        let want = 2.0 * Complex64::from_polar(1.0, p.psi) * f_direct(s, &p);
        prop_assert!((det - want).norm() <= 1e-9 * (1.0 + s * s));
        prop_assert!((reduced_det(s, &p) - f_direct(s, &p)).abs() <= 1e-10 * (1.0 + s * s));
    }

    #[test]
    fn continuation_to_imaginary_axis(p in params(), r in 0.05..20.0f64) {
        let det = det2(&boundary_system(Complex64::new(0.0, -r), &p));
        let want = -2.0 * Complex64::i() * Complex64::from_polar(1.0, p.psi) * hyperbolic_det(r, &p);
        prop_assert!((det - want).norm() <= 1e-9 * (1.0 + r * r) * r.cosh());
    }

    #[test]
    fn levels_are_roots_and_sorted(p in params()) {
        let cfg = RootFindConfig { s_max: 12.0 * PI, ..RootFindConfig::default() };
        let spec = spectrum(&p, &cfg).unwrap();
        let e = spec.energies_with_multiplicity();
        prop_assert!(e.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        for l in &spec.levels {
            match l.kind {
                LevelKind::Positive => {
                    let s = l.root();
                    prop_assert!(f_direct(s, &p).abs() <= 1e-7 * (1.0 + s * s));
                    prop_assert!((l.energy - s * s / (4.0 * p.a * p.a)).abs() <= 1e-12 * l.energy);
                }
                LevelKind::Negative => {
                    let r = l.root();
                    prop_assert!(hyperbolic_det_scaled(r, &p).abs() <= 1e-6);
                    prop_assert!(l.energy < 0.0);
                }
                LevelKind::Zero => prop_assert!(zero_energy_exists(&p).exists),
            }
        }
        let negatives: u32 = spec.levels.iter().filter(|l| l.energy < 0.0).map(|l| l.multiplicity as u32).sum();
        prop_assert!(negatives <= 2);
    }

    #[test]
    fn roots_do_not_depend_on_width(p in params()) {
        let cfg = RootFindConfig { s_max: 8.0 * PI, ..RootFindConfig::default() };
        let q = ExtensionParams::new(p.psi, p.m, 2.0 * p.a).unwrap();
        let a = spectrum(&p, &cfg).unwrap();
        let b = spectrum(&q, &cfg).unwrap();
        prop_assert_eq!(a.levels.len(), b.levels.len());
        for (x, y) in a.levels.iter().zip(&b.levels) {
            prop_assert!((x.root() - y.root()).abs() <= 1e-10 * (1.0 + x.root()));
            prop_assert!((x.energy - 4.0 * y.energy).abs() <= 1e-9 * (1.0 + x.energy.abs()));
        }
    }
}

#[test]
fn textbook_levels() {
    let spec = spectrum(&ExtensionParams::textbook(0.5), &RootFindConfig::default()).unwrap();
    let e = spec.energies_with_multiplicity();
    for (n, en) in e.iter().take(15).enumerate() {
        let want = ((n + 1) as f64 * PI).powi(2);
        assert!((en - want).abs() <= 1e-10 * want, "{n}: {en}");
    }
    assert_eq!(spec.ground().unwrap().kind, LevelKind::Positive);
}

#[test]
fn periodic_levels_are_doubled() {
    // U = σ1 is the periodic condition
    let p = ExtensionParams::new(PI / 2.0, [0.0, 1.0, 0.0, 0.0], 0.5).unwrap();
    let u = p.unitary();
    assert!((u.u[0][1] - 1.0).norm() <= 1e-15 && u.u[0][0].norm() <= 1e-15);
    let spec = spectrum(&p, &RootFindConfig { s_max: 10.0 * PI, ..RootFindConfig::default() }).unwrap();
    let doubled: Vec<_> = spec.levels.iter().filter(|l| l.multiplicity == 2).collect();
    assert!(!doubled.is_empty());
    for l in doubled {
        assert!((l.root() / (2.0 * PI)).fract().min(1.0 - (l.root() / (2.0 * PI)).fract()) <= 1e-8);
    }
}

#[test]
fn minus_identity_has_zero_mode() {
    let p = ExtensionParams::new(PI, [1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
    let z = zero_energy_exists(&p);
    assert!(z.exists);
    let spec = spectrum(&p, &RootFindConfig::default()).unwrap();
    assert_eq!(spec.ground().unwrap().kind, LevelKind::Zero);
}

#[test]
fn csv_has_header_and_rows() {
    let spec = spectrum(&ExtensionParams::textbook(0.5), &RootFindConfig { s_max: 3.5 * PI, ..RootFindConfig::default() }).unwrap();
    let text = spec.to_csv();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(SPECTRUM_CSV_HEADER));
    assert_eq!(lines.count(), 3);
}

#[test]
fn bad_configs_are_rejected() {
    let p = ExtensionParams::textbook(0.5);
    for cfg in [
        RootFindConfig { s_max: -1.0, ..RootFindConfig::default() },
        RootFindConfig { grid_step: 0.0, ..RootFindConfig::default() },
    ] {
        assert!(spectrum(&p, &cfg).is_err());
    }
}

#[test]
fn parity_time_branches_cover_the_spectrum() {
    let cfg = RootFindConfig { s_max: 10.0 * PI, ..RootFindConfig::default() };
    for (phi1, phi2) in [(0.3, 0.0), (0.9, 1.1), (1.4, -0.6)] {
        let p = parity_time_params(phi1, phi2, 0.5).unwrap();
        let direct: Vec<f64> = positive_levels(&p, &cfg).unwrap().iter().map(|l| l.root()).collect();
        let branched: Vec<f64> = levels_parity_time(phi1, phi2, 0.5, &cfg).unwrap().iter().filter(|l| l.kind == LevelKind::Positive).map(|l| l.root()).collect();
        assert_eq!(direct.len(), branched.len(), "{phi1} {phi2}");
        for (x, y) in direct.iter().zip(&branched) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn continuation_identity_holds() {
    assert!(continuation_self_test(64) <= 1e-10);
}
