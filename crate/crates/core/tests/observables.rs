use std::f64::consts::PI;

use dirac_su11::observables::{
    generator_expectations, generator_expectations_oracle, rho2_elements, rho2_matrix, rho2_quadrature,
    rho_ddrho_elements, rho_ddrho_matrix, rho_ddrho_quadrature, similarity_oracle, uncertainty_closed_form,
    uncertainty_report,
};
use dirac_su11::params::{algebra_params, gamma_css, AlgebraParams, ConfigFile, Spacetime};
use dirac_su11::radial::{GridOptions, RadialGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn configs() -> Vec<ConfigFile> {
    vec![
        ConfigFile { ml_numerator: 3, omega: 1.4, m0: 0.7, ..ConfigFile::default() },
        ConfigFile { s: -1, ml_numerator: -5, phi_ac: 0.9, ..ConfigFile::default() },
        ConfigFile { spacetime: Spacetime::CosmicString, eta: 0.5, ml_numerator: 1, phi_ac: 1.375 * PI, ..ConfigFile::default() },
        ConfigFile { spacetime: Spacetime::CosmicString, eta: 0.3, s: -1, ml_numerator: 7, omega_ac: 0.6, ..ConfigFile::default() },
    ]
}

/// ⟨m|x|n⟩ for orthonormal Laguerre functions, from the recurrence
/// xℓ_n = (2n+α+1)ℓ_n − √(n(n+α))ℓ_{n−1} − √((n+1)(n+α+1))ℓ_{n+1}.
fn x_matrix_oracle(alpha: f64, m: usize, n: usize) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    if m == n {
        2.0 * nf + alpha + 1.0
    } else if m == n + 1 {
        -(mf * (mf + alpha)).sqrt()
    } else if n == m + 1 {
        -(nf * (nf + alpha)).sqrt()
    } else {
        0.0
    }
}

#[test]
fn matrix_elements_three_ways() {
    for file in configs() {
        let cfg = file.validate().unwrap();
        let p = algebra_params(&cfg);
        let grid = RadialGrid::for_basis(&p, 12, &GridOptions::default()).unwrap();
        let alg = rho2_elements(&cfg, 7).unwrap();
        let quad = rho2_quadrature(&p, 7, &grid).unwrap();
        assert_eq!(alg.shape(), (8, 8));
        assert!((&alg - &quad).abs().max() <= 1e-8, "{cfg:?}");
        for m in 0..8 {
            for n in 0..8 {
                let o = x_matrix_oracle(p.alpha(), m, n) / p.scale();
                assert!((alg[(m, n)] - o).abs() < 1e-13 * o.abs().max(1.0));
            }
        }
        let alg = rho_ddrho_elements(&cfg, 7).unwrap();
        let quad = rho_ddrho_quadrature(&p, 7, &grid).unwrap();
        assert!((&alg - &quad).abs().max() <= 1e-8, "{cfg:?}");
        // Antisymmetric part plus −1 on the diagonal: ρ d/dρ + ½ is anti-Hermitian.
        let sym = &alg + alg.transpose();
        for m in 0..8 {
            for n in 0..8 {
                let expect = if m == n { -2.0 } else { 0.0 };
                assert!((sym[(m, n)] - expect).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn both_parameter_paths_give_the_same_elements() {
    for file in configs() {
        let cfg = file.validate().unwrap();
        let p = algebra_params(&cfg);
        let gamma = match cfg.spacetime() {
            Spacetime::Minkowski => dirac_su11::params::gamma_ms(&cfg).unwrap(),
            Spacetime::CosmicString => gamma_css(&cfg).unwrap().ratio,
        };
        let q = AlgebraParams::from_gamma(gamma, cfg.m0(), cfg.omega_bar(), p.mu_b_eff, cfg.spin().sign());
        assert_eq!(rho2_matrix(&q, 9).unwrap(), rho2_elements(&cfg, 9).unwrap());
        assert_eq!(rho_ddrho_matrix(&q, 9).unwrap(), rho_ddrho_elements(&cfg, 9).unwrap());
    }
}

#[test]
fn degenerate_frequency_has_no_matrix_elements() {
    let cfg = ConfigFile { omega: 1.0, omega_ac: 2.0, ..ConfigFile::default() }.validate().unwrap();
    assert!(rho2_elements(&cfg, 3).is_err());
}

const KS: [f64; 5] = [0.5, 1.0, 1.5, 2.125, 3.0];

fn z_grid() -> Vec<Complex64> {
    vec![c(0.0, 0.0), c(0.4, 0.0), c(-0.9, 0.0), c(0.3, 0.6), Complex64::from_polar(1.2, -2.1)]
}

#[test]
fn uncertainty_is_minimal_on_the_grid() {
    for k in KS {
        for z in z_grid() {
            let r = uncertainty_report(k, z).unwrap();
            assert!(r.is_minimal(), "k={k} z={z}: {r:?}");
            assert!(r.satisfies_relation());
            assert!(r.oracle_residual <= 1e-9, "k={k} z={z}: {}", r.oracle_residual);
            assert!(r.oracle_deviation <= 1e-9, "k={k} z={z}: {}", r.oracle_deviation);
            if z.norm() == 0.0 {
                assert!((r.lhs - 4.0 * k * k).abs() < 1e-14 && (r.rhs - 4.0 * k * k).abs() < 1e-14);
            }
            if z.im == 0.0 {
                assert_eq!(r.f, 0.0);
            }
        }
    }
}

#[test]
fn expectations_and_similarity_against_the_matrix_oracle() {
    for k in KS {
        for z in z_grid() {
            let cf = generator_expectations(k, z);
            let or = generator_expectations_oracle(k, z).unwrap();
            assert!((cf.kplus - or.kplus).norm() < 1e-8);
            assert!((cf.kminus - or.kminus).norm() < 1e-8);
            assert!((cf.kthree - or.kthree).abs() < 1e-8);
            let sim = similarity_oracle(k, z, 8).unwrap();
            assert!(sim.dim >= 64);
            assert!(sim.max() <= 1e-8, "k={k} z={z}: {sim:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_saturates_the_bound(k in 0.5f64..6.0, r in 0.0f64..2.0, theta in -3.2f64..3.2) {
        let t = uncertainty_closed_form(k, Complex64::from_polar(r, theta));
        prop_assert!(t.dx2 > 0.0 && t.dy2 > 0.0);
        prop_assert!((t.lhs() - t.rhs()).abs() <= 1e-9 * t.rhs());
        // ⟨C⟩ = 4⟨K₃⟩.
        prop_assert!((t.c - 4.0 * generator_expectations(k, Complex64::from_polar(r, theta)).kthree).abs() <= 1e-12 * t.c);
    }
}
