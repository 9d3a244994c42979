use std::f64::consts::PI;

use dirac_su11::params::{algebra_params, ConfigFile, Spacetime};
use dirac_su11::radial::{
    build_operator, rayleigh_energy, sturmian_basis, verify_algebra, GridOptions, OperatorLabel, RadialGrid,
};
use dirac_su11::spectrum::energy;
use dirac_su11::OscillatorConfig;

/// Configurations with Γ_eff ∈ {0, ±1, ±13/4} over both spins and both backgrounds.
fn sweep() -> Vec<(OscillatorConfig, f64)> {
    let ms = |s: i32, ml: i32, phi: f64| ConfigFile { s, ml_numerator: ml, phi_ac: phi, omega: 1.1, m0: 0.8, ..ConfigFile::default() };
    let css = |s: i32, ml: i32, phi: f64| ConfigFile {
        spacetime: Spacetime::CosmicString,
        eta: 0.5,
        ..ms(s, ml, phi)
    };
    let cases = [
        (ms(1, 1, 0.0), 0.0),
        (ms(-1, -1, 0.0), 0.0),
        (ms(1, 3, 0.0), 1.0),
        (ms(-1, -3, 0.0), -1.0),
        (ms(1, 1, 3.25 * PI), 13.0 / 4.0),
        (ms(-1, -1, 3.25 * PI), -13.0 / 4.0),
        (css(1, 1, 0.75 * PI), 2.0),
        (css(-1, -1, 0.25 * PI), -1.0),
        (css(1, 1, -0.25 * PI), 0.0),
        (css(1, 1, 1.375 * PI), 13.0 / 4.0),
    ];
    cases.into_iter().map(|(c, g)| (c.validate().unwrap(), g)).collect()
}

#[test]
fn sweep_hits_the_intended_angular_numbers() {
    for (cfg, g) in sweep() {
        assert!((algebra_params(&cfg).gamma_eff - g).abs() < 1e-12, "{cfg:?}");
    }
}

#[test]
fn algebra_closes_on_the_default_grid() {
    for (cfg, _) in sweep() {
        let p = algebra_params(&cfg);
        let grid = RadialGrid::for_basis(&p, 12, &GridOptions::default()).unwrap();
        let r = verify_algebra(&cfg, &grid, 8).unwrap();
        assert!(r.passed(), "{cfg:?}: {:?}", r.first_failure());
        assert_eq!(r.checks.len(), 7);
    }
}

#[test]
fn residuals_shrink_at_the_stencil_order() {
    let cfg = ConfigFile { ml_numerator: 3, omega: 1.3, ..ConfigFile::default() }.validate().unwrap();
    let p = algebra_params(&cfg);
    let residual = |npoints: usize| {
        let grid = RadialGrid::for_basis(&p, 12, &GridOptions { npoints, ..GridOptions::default() }).unwrap();
        verify_algebra(&cfg, &grid, 6).unwrap().get("commutator [B-,B+] - 2B3'").unwrap().residual
    };
    let coarse = residual(512);
    let fine = residual(2048);
    let ratio = coarse / fine;
    println!("coarse {coarse:e} fine {fine:e} ratio {ratio}");
    assert!((128.0..512.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn unit_eta_cosmic_string_residuals_equal_minkowski() {
    for (s, ml, phi) in [(1, 1, 0.3), (-1, 5, -1.1)] {
        let base = ConfigFile { s, ml_numerator: ml, phi_ac: phi, ..ConfigFile::default() };
        let ms = base.clone().validate().unwrap();
        let css = ConfigFile { spacetime: Spacetime::CosmicString, ..base }.validate().unwrap();
        let p = algebra_params(&ms);
        let grid = RadialGrid::for_basis(&p, 12, &GridOptions::default()).unwrap();
        let a = verify_algebra(&ms, &grid, 8).unwrap();
        let b = verify_algebra(&css, &grid, 8).unwrap();
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.residual.to_bits(), y.residual.to_bits(), "{}", x.name);
        }
        let spin = if s == 1 { "1" } else { "2" };
        let ms_op = build_operator(&ms, &grid, format!("Bplus{spin}").parse().unwrap()).unwrap();
        let css_op = build_operator(&css, &grid, format!("Splus{spin}").parse().unwrap()).unwrap();
        let phi = &sturmian_basis(&p, 2, &grid).unwrap()[2].values;
        assert_eq!(ms_op.apply(phi), css_op.apply(phi));
    }
}

#[test]
fn operator_labels_respect_background_and_spin() {
    let (cfg, _) = &sweep()[0];
    let grid = RadialGrid::for_basis(&algebra_params(cfg), 4, &GridOptions::default()).unwrap();
    assert!(build_operator(cfg, &grid, OperatorLabel::Bplus1).is_ok());
    assert!(build_operator(cfg, &grid, OperatorLabel::Bplus2).is_err());
    assert!(build_operator(cfg, &grid, OperatorLabel::Splus1).is_err());
    assert!(build_operator(cfg, &grid, OperatorLabel::Hr).is_ok());
}

#[test]
fn rayleigh_quotients_reproduce_the_spectrum() {
    for (cfg, _) in sweep() {
        let grid = RadialGrid::for_basis(&algebra_params(&cfg), 12, &GridOptions::default()).unwrap();
        for n_r in 0..=5 {
            let closed = energy(&cfg, n_r).unwrap();
            let r = rayleigh_energy(&cfg, n_r, &grid).unwrap();
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs();
            assert!(rel(closed.e_plus, r.energies.e_plus) < 1e-6, "{cfg:?} n_r={n_r}");
            assert!(rel(closed.e_minus, r.energies.e_minus) < 1e-6);
            let p = algebra_params(&cfg);
            assert!((r.b3prime_expectation - (p.k + n_r as f64)).abs() < 1e-6 * (p.k + n_r as f64));
        }
    }
}

#[test]
fn coarse_grid_fails_calibration() {
    let cfg = ConfigFile::default().validate().unwrap();
    let grid = RadialGrid::for_basis(&algebra_params(&cfg), 12, &GridOptions { npoints: 32, ..GridOptions::default() })
        .unwrap();
    assert!(grid.check_calibration().is_err() || !verify_algebra(&cfg, &grid, 8).unwrap().passed());
}
