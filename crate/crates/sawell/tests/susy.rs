mod common;

use std::f64::consts::PI;

use sawell::grid::{linspace, GridFunction};
use sawell::quad::integrate;
use sawell::spectral::{spectrum, RootFindConfig};
use sawell::susy::*;
use sawell::ExtensionParams;

fn chain(a: f64, order: u32) -> SusyChain {
    build_chain(&ExtensionParams::textbook(a), order, &RootFindConfig::default()).unwrap()
}

#[test]
fn textbook_chain_energies() {
    for a in [0.5, 1.7] {
        let c = chain(a, 3);
        let k = PI / (2.0 * a);
        assert!((c.ground.wavenumber() - k).abs() <= 1e-12 * k);
        for level in &c.orders {
            let l = level.order;
            assert_eq!(level.lowest_admissible_n(), l + 1);
            for n in l + 1..l + 5 {
                let want = k * k * ((n * n) as f64 - (l * l) as f64);
                assert!((level.energy(n) - want).abs() <= 1e-12 * want);
            }
        }
    }
}

#[test]
fn potentials_factorize_through_the_superpotential() {
    let c = chain(0.5, 4);
    let g = c.ground;
    let h = 1e-5;
    for order in 1..=4u32 {
        for x in linspace(-0.45, 0.45, 19) {
            let w = superpotential(order, &g, x).unwrap();
            let dw = (superpotential(order, &g, x + h).unwrap() - superpotential(order, &g, x - h).unwrap()) / (2.0 * h);
            let first = partner_potential(order, Partner::First, &g, x).unwrap();
            let second = partner_potential(order, Partner::Second, &g, x).unwrap();
            let scale = 1.0 + w * w + dw.abs();
            assert!((first - (w * w - dw)).abs() <= 1e-6 * scale);
            assert!((second - (w * w + dw)).abs() <= 1e-6 * scale);
        }
    }
}

#[test]
fn neighbouring_orders_differ_by_a_constant() {
    let c = chain(0.8, 5);
    let g = c.ground;
    let k2 = g.wavenumber().powi(2);
    for l in 1..5u32 {
        for x in linspace(-0.75, 0.75, 31) {
            let up = partner_potential(l + 1, Partner::First, &g, x).unwrap();
            let here = partner_potential(l, Partner::Second, &g, x).unwrap();
            let scale = k2.max(here.abs());
            assert!((up - here + (2 * l + 1) as f64 * k2).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn states_are_eigenfunctions_of_their_partner() {
    let c = chain(0.5, 3);
    let g = c.ground;
    let (lo, hi) = c.guarded_interval();
    let xs = linspace(lo + 0.01, hi - 0.01, 1601);
    for order in 1..=3u32 {
        for which in [Partner::First, Partner::Second] {
            for n in order + 1..order + 4 {
                let f = GridFunction::sample(xs.clone(), |x| partner_state(order, which, n, &g, x).unwrap());
                let hf = hamiltonian_apply(order, which, &g, &f).unwrap();
                let e = partner_energy(order, n, &g);
                let ef = f.slice(2, f.len() - 2);
                let err = hf.values.iter().zip(&ef.values).map(|(a, b)| (a - b * e).norm()).fold(0.0, f64::max);
                assert!(err <= 1e-6 * e.abs() * ef.sup_norm(), "{order} {which:?} {n}: {err}");
            }
        }
    }
}

#[test]
fn normalized_states_have_unit_norm() {
    let c = chain(0.5, 2);
    for order in 1..=2u32 {
        let s = partner_state_normalized(order, Partner::Second, order + 1, &c.ground).unwrap();
        let norm = integrate(|x| s.eval(x).map(|v| v.norm_sqr()).unwrap_or(0.0), -0.5, 0.5, 1e-12);
        assert!((norm - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn ladder_lowers_onto_the_partner() {
    let c = chain(0.5, 2);
    let g = c.ground;
    let xs = linspace(-0.49, 0.49, 2001);
    for order in 1..=2u32 {
        let op = LadderOperator {
            order,
            direction: Direction::Annihilate,
            ground: g,
        };
        let first = GridFunction::sample(xs.clone(), |x| partner_state(order, Partner::First, order + 2, &g, x).unwrap());
        let second = GridFunction::sample(xs.clone(), |x| partner_state(order, Partner::Second, order + 2, &g, x).unwrap());
        let mapped = ladder_apply(&op, &first).unwrap();
        assert!(mapped.cosine_similarity(&second.slice(2, xs.len() - 2)) >= 1.0 - 1e-8);
    }
}

#[test]
fn gates() {
    let cfg = RootFindConfig::default();
    let minus = ExtensionParams::new(PI, [1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
    assert_eq!(build_chain(&minus, 1, &cfg).unwrap_err(), SusyError::ZeroEnergyGroundState);
    assert!(matches!(build_chain(&ExtensionParams::textbook(0.5), 0, &cfg), Err(SusyError::InvalidOrder(0))));
    let mut r = common::rng(401);
    let negative = loop {
        let p = common::random_extension(&mut r, 0.5);
        if spectrum(&p, &cfg).unwrap().ground().is_some_and(|l| l.energy < 0.0) {
            break p;
        }
    };
    assert_eq!(build_chain(&negative, 1, &cfg).unwrap_err(), SusyError::NegativeGroundState);
    assert!(matches!(partner_state(2, Partner::Second, 2, &chain(0.5, 2).ground, 0.1), Err(SusyError::NotNormalizable { .. })));
}

#[test]
fn report_round_trips() {
    let report = chain(0.5, 3).report(3);
    assert_eq!(report.orders.len(), 3);
    assert!(report.orders.iter().all(|o| o.energies.len() == 3 && o.lowest_n == o.order + 1));
    let text = serde_json::to_string(&report).unwrap();
    let back: ChainReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
