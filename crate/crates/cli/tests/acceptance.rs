//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use dirac_su11::coherent::{
    closed_form, density_period, evolve_params, laguerre_power_sum, reconstruction, series, sup_distance,
};
use dirac_su11::observables::{
    generator_expectations, generator_expectations_oracle, rho2_elements, rho2_quadrature, rho_ddrho_elements,
    rho_ddrho_quadrature, similarity_oracle, uncertainty_report,
};
use dirac_su11::params::{algebra_params, AlgebraParams, ConfigFile, Spacetime};
use dirac_su11::radial::{laguerre, rayleigh_energy, verify_algebra, GridOptions, RadialGrid};
use dirac_su11::spectrum::{energy, periodicity_tolerance, phase_sweep, spectrum_from_b3};
use dirac_su11::su11::{ladder_down_coeff, ladder_up_coeff, truncated_rep};
use dirac_su11::OscillatorConfig;
use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Spin ±1, Γ_eff ∈ {0, ±1, ±13/4}, Minkowski and cosmic string with η = 1/2.
fn sweep_configs() -> Vec<OscillatorConfig> {
    let ms = |s: i32, ml: i32, phi: f64| ConfigFile {
        s,
        ml_numerator: ml,
        phi_ac: phi,
        omega: 1.1,
        omega_ac: 0.2,
        m0: 0.8,
        mu_moment: 0.3,
        b_field: 0.5,
        ..ConfigFile::default()
    };
    let css = |s: i32, ml: i32, phi: f64| ConfigFile { spacetime: Spacetime::CosmicString, eta: 0.5, ..ms(s, ml, phi) };
    [
        ms(1, 1, 0.0),
        ms(-1, -1, 0.0),
        ms(1, 3, 0.0),
        ms(-1, -3, 0.0),
        ms(1, 1, 3.25 * PI),
        ms(-1, -1, 3.25 * PI),
        css(1, 1, -0.25 * PI),
        css(-1, -1, 0.25 * PI),
        css(1, 1, 1.375 * PI),
        css(-1, -1, 1.375 * PI),
    ]
    .into_iter()
    .map(|f| f.validate().expect("sweep configuration is valid"))
    .collect()
}

fn algebra_sweep(names: &[&str]) -> Outcome {
    let mut worst = 0.0f64;
    let mut gammas = Vec::new();
    for cfg in sweep_configs() {
        let p = algebra_params(&cfg);
        gammas.push(p.gamma_eff);
        let grid = RadialGrid::for_basis(&p, 12, &GridOptions::default()).map_err(|e| e.to_string())?;
        let r = verify_algebra(&cfg, &grid, 8).map_err(|e| e.to_string())?;
        for name in names {
            let chk = r.get(name).ok_or(format!("missing check {name}"))?;
            worst = worst.max(chk.residual);
        }
    }
    let expected = [0.0, 0.0, 1.0, -1.0, 3.25, -3.25, 0.0, -1.0, 3.25, -3.25];
    if gammas.iter().zip(expected).any(|(g, e)| (g - e).abs() > 1e-12) {
        return Err(format!("sweep gammas {gammas:?}"));
    }
    check(worst <= 1e-5, format!("worst residual {worst:.3e} over 10 configs, phi_0..phi_8 (limit 1e-5)"))
}

fn criterion_1() -> Outcome {
    algebra_sweep(&["commutator [B3',B+] - B+", "commutator [B-,B+] - 2B3'"])
}

fn criterion_2() -> Outcome {
    algebra_sweep(&["casimir C^2 - k(k-1)"])
}

fn criterion_3() -> Outcome {
    let mut rayleigh = 0.0f64;
    let mut inversion = 0.0f64;
    for cfg in sweep_configs() {
        let grid = RadialGrid::for_basis(&algebra_params(&cfg), 12, &GridOptions::default()).map_err(|e| e.to_string())?;
        for n_r in 0..=5 {
            let e = energy(&cfg, n_r).map_err(|e| e.to_string())?;
            let r = rayleigh_energy(&cfg, n_r, &grid).map_err(|e| e.to_string())?;
            let b = spectrum_from_b3(&cfg, n_r).map_err(|e| e.to_string())?;
            for (x, y, z) in [(e.e_plus, r.energies.e_plus, b.e_plus), (e.e_minus, r.energies.e_minus, b.e_minus)] {
                rayleigh = rayleigh.max((x - y).abs() / x.abs());
                inversion = inversion.max((x - z).abs() / x.abs());
            }
        }
    }
    check(
        rayleigh <= 1e-6 && inversion <= 1e-12,
        format!("Rayleigh rel {rayleigh:.3e} (limit 1e-6), B3 inversion rel {inversion:.3e} (limit 1e-12)"),
    )
}

fn criterion_4() -> Outcome {
    let phis: Vec<f64> = (0..41).map(|i| 4.0 * PI * i as f64 / 40.0).collect();
    let mut ratio = 0.0f64;
    let mut rows = 0;
    for cfg in sweep_configs() {
        for n_r in 0..=3 {
            let sw = phase_sweep(&cfg, n_r, &phis).map_err(|e| e.to_string())?;
            if !sw.all_periodic() {
                return Err(format!("non-periodic row for {cfg:?}"));
            }
            for row in &sw.periodicity {
                ratio = ratio.max(row.residual / periodicity_tolerance(row.e_phase_shifted));
                rows += 1;
            }
        }
    }
    check(ratio <= 1.0, format!("{rows} rows, worst residual {ratio:.3} x (16 eps max(1,|E|))"))
}

fn criterion_5() -> Outcome {
    let mut algebraic = 0.0f64;
    for k in [0.5, 1.0, 1.5, 2.5, 3.625] {
        let rep = truncated_rep(k, 52).map_err(|e| e.to_string())?;
        let cas = k * (k - 1.0);
        for n in 0..=50usize {
            let w = k + n as f64;
            let up = (w * (w + 1.0) - cas).sqrt();
            let down = (w * (w - 1.0) - cas).max(0.0).sqrt();
            algebraic = algebraic
                .max((ladder_up_coeff(k, n) - up).abs() / up)
                .max((rep.kplus[(n + 1, n)].re - up).abs() / up)
                .max((ladder_down_coeff(k, n) - down).abs() / down.max(1.0));
            if n > 0 {
                algebraic = algebraic.max((rep.kminus[(n - 1, n)].re - down).abs() / down);
            }
        }
    }
    let mut grid_worst = 0.0f64;
    for cfg in sweep_configs() {
        let grid = RadialGrid::for_basis(&algebra_params(&cfg), 12, &GridOptions::default()).map_err(|e| e.to_string())?;
        let r = verify_algebra(&cfg, &grid, 8).map_err(|e| e.to_string())?;
        for name in ["ladder B+ - Q+", "ladder B- - Q-"] {
            grid_worst = grid_worst.max(r.get(name).ok_or("missing ladder check")?.residual);
        }
    }
    check(
        algebraic <= 1e-12 && grid_worst <= 1e-5,
        format!("algebraic {algebraic:.3e} (limit 1e-12), grid {grid_worst:.3e} (limit 1e-5)"),
    )
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for gamma in [0.0, -1.0, 2.0, 4.0, 13.0 / 4.0] {
        let p = AlgebraParams::from_gamma(gamma, 0.9, 1.2, 0.3, 1);
        let grid = RadialGrid::for_coherent(&p, 0.8, &GridOptions::default()).map_err(|e| e.to_string())?;
        for xi in [c(0.0, 0.0), c(0.35, 0.0), c(-0.2, 0.45), c(0.0, -0.65), Complex64::from_polar(0.8, 2.4)] {
            let a = closed_form(&p, xi, &grid).map_err(|e| e.to_string())?;
            let b = series(&p, xi, &grid, None).map_err(|e| e.to_string())?;
            let r = reconstruction(&p, xi, &grid, None).map_err(|e| e.to_string())?;
            worst = worst
                .max(sup_distance(&a.samples, &b.samples))
                .max(sup_distance(&a.samples, &r.samples))
                .max(sup_distance(&b.samples, &r.samples));
        }
    }
    let mut gen = 0.0f64;
    for &(nu, x, y) in &[(1.0, 2.0, c(0.4, 0.0)), (0.0, 0.7, c(-0.3, 0.5)), (3.25, 5.5, c(0.1, -0.6))] {
        let one = c(1.0, 0.0);
        let closed = (one - y).powf(-(nu + 1.0)) * (-(x * y) / (one - y)).exp();
        let direct: Complex64 = (0..=200).map(|n| y.powu(n as u32) * laguerre(n, nu, x)).sum();
        let lib = laguerre_power_sum(y, 200, nu, x) * (0.5 * x).exp();
        gen = gen.max((direct - closed).norm() / closed.norm()).max((lib - closed).norm() / closed.norm());
    }
    check(
        worst <= 1e-7 && gen <= 1e-10,
        format!("three-way sup {worst:.3e} on 5x5 (k, xi) grid (limit 1e-7), generating function {gen:.3e} (limit 1e-10)"),
    )
}

fn criterion_7() -> Outcome {
    let mut drift = 0.0f64;
    let mut periodic = 0.0f64;
    for (gamma, xi) in [(0.0, c(0.5, 0.3)), (2.0, c(-0.7, 0.1)), (-13.0 / 4.0, c(0.0, 0.6))] {
        let p = AlgebraParams::from_gamma(gamma, 0.7, 0.9, 0.0, 1);
        let grid = RadialGrid::for_coherent(&p, xi.norm(), &GridOptions::default()).map_err(|e| e.to_string())?;
        let period = density_period(&p);
        if (period - PI / (2.0 * p.m0 * p.omega_bar.abs())).abs() > 1e-15 {
            return Err(format!("period {period}"));
        }
        let start = evolve_params(&p, xi, 0.0, &grid).map_err(|e| e.to_string())?;
        for i in 0..20 {
            let t = 0.29 * i as f64;
            let now = evolve_params(&p, xi, t, &grid).map_err(|e| e.to_string())?;
            let later = evolve_params(&p, xi, t + period, &grid).map_err(|e| e.to_string())?;
            drift = drift.max((grid.norm_complex(&now.samples) - grid.norm_complex(&start.samples)).abs());
            drift = drift.max((now.raw_norm - start.raw_norm).abs());
            let d = now.abs2().iter().zip(later.abs2()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            periodic = periodic.max(d);
        }
    }
    check(
        drift <= 1e-8 && periodic <= 1e-10,
        format!("norm drift {drift:.3e} (limit 1e-8), |phi(t+T)|^2 - |phi(t)|^2 sup {periodic:.3e} (limit 1e-10)"),
    )
}

fn criterion_8() -> Outcome {
    let mut sim = 0.0f64;
    let mut expect = 0.0f64;
    let mut min_dim = usize::MAX;
    for k in [0.5, 1.0, 1.5, 2.125, 3.0] {
        for z in [c(0.0, 0.0), c(0.4, 0.0), c(-0.9, 0.0), c(0.3, 0.6), Complex64::from_polar(1.2, -2.1)] {
            let s = similarity_oracle(k, z, 8).map_err(|e| e.to_string())?;
            sim = sim.max(s.max());
            min_dim = min_dim.min(s.dim);
            let cf = generator_expectations(k, z);
            let or = generator_expectations_oracle(k, z).map_err(|e| e.to_string())?;
            expect = expect
                .max((cf.kplus - or.kplus).norm())
                .max((cf.kminus - or.kminus).norm())
                .max((cf.kthree - or.kthree).abs());
        }
    }
    check(
        sim <= 1e-8 && expect <= 1e-8 && min_dim >= 64,
        format!("similarity {sim:.3e}, expectations {expect:.3e} (limit 1e-8), smallest dim {min_dim}"),
    )
}

fn criterion_9() -> Outcome {
    let mut closed = 0.0f64;
    let mut oracle = 0.0f64;
    for k in [0.5, 1.0, 1.5, 2.125, 3.0] {
        for z in [c(0.0, 0.0), c(0.4, 0.0), c(-0.9, 0.0), c(0.3, 0.6), Complex64::from_polar(1.2, -2.1)] {
            let r = uncertainty_report(k, z).map_err(|e| e.to_string())?;
            closed = closed.max(r.residual.abs() / r.rhs.abs());
            oracle = oracle.max(r.oracle_residual).max(r.oracle_deviation);
        }
    }
    check(
        closed <= 1e-9 && oracle <= 1e-9,
        format!("closed form rel {closed:.3e}, oracle rel {oracle:.3e} (limit 1e-9) on 5x5 (k, z)"),
    )
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    let mut spacetimes = Vec::new();
    for cfg in sweep_configs() {
        let p = algebra_params(&cfg);
        spacetimes.push(cfg.spacetime());
        let grid = RadialGrid::for_basis(&p, 12, &GridOptions::default()).map_err(|e| e.to_string())?;
        let a = rho2_elements(&cfg, 7).map_err(|e| e.to_string())?;
        let q = rho2_quadrature(&p, 7, &grid).map_err(|e| e.to_string())?;
        worst = worst.max((a - q).abs().max());
        let a = rho_ddrho_elements(&cfg, 7).map_err(|e| e.to_string())?;
        let q = rho_ddrho_quadrature(&p, 7, &grid).map_err(|e| e.to_string())?;
        worst = worst.max((a - q).abs().max());
    }
    let both = spacetimes.contains(&Spacetime::Minkowski) && spacetimes.contains(&Spacetime::CosmicString);
    check(both && worst <= 1e-8, format!("8x8 blocks, worst |algebra - quadrature| {worst:.3e} (limit 1e-8)"))
}

fn criterion_11() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dirac-su11");
    let dir = std::env::temp_dir().join(format!("dirac-su11-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let base = ConfigFile {
        s: -1,
        ml_numerator: 3,
        phi_ac: 0.7,
        omega: 1.3,
        omega_ac: 0.4,
        m0: 0.9,
        mu_moment: 0.25,
        b_field: 1.5,
        ..ConfigFile::default()
    };
    let ms = dir.join("ms.json");
    let css = dir.join("css.json");
    let write = |path: &std::path::Path, f: &ConfigFile| std::fs::write(path, serde_json::to_string(f).unwrap());
    write(&ms, &base).map_err(|e| e.to_string())?;
    write(&css, &ConfigFile { spacetime: Spacetime::CosmicString, eta: 1.0, ..base.clone() }).map_err(|e| e.to_string())?;
    let commands: [&[&str]; 9] = [
        &["spectrum", "--n-max", "8"],
        &["sweep-phase", "--n-r", "1"],
        &["wavefunction", "--n-r", "3"],
        &["coherent", "--xi-re", "0.3", "--xi-im", "0.4", "--time", "0.2"],
        &["uncertainty", "--z-re", "0.5", "--z-im", "-0.3"],
        &["matrix-elements", "--operator", "rho2"],
        &["matrix-elements", "--operator", "rho-ddrho", "--method", "quadrature"],
        &["verify", "--level", "full"],
        &["verify", "--level", "algebra-only"],
    ];
    let mut compared = 0usize;
    for args in commands {
        for format in ["csv", "json"] {
            let go = |cfg: &std::path::Path| {
                Command::new(bin)
                    .arg("--config")
                    .arg(cfg)
                    .args(["--format", format])
                    .args(args)
                    .env_remove("SU11_GRID_POINTS")
                    .output()
            };
            let a = go(&ms).map_err(|e| e.to_string())?;
            let b = go(&css).map_err(|e| e.to_string())?;
            if !a.status.success() || !b.status.success() {
                return Err(format!("{args:?} {format}: exit {:?} / {:?}", a.status.code(), b.status.code()));
            }
            if a.stdout != b.stdout || a.stdout.is_empty() {
                return Err(format!("{args:?} {format}: outputs differ"));
            }
            compared += a.stdout.len();
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("9 commands x 2 formats byte-identical ({compared} bytes each side)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("algebra closure", criterion_1),
        ("Casimir", criterion_2),
        ("spectrum consistency", criterion_3),
        ("periodicity", criterion_4),
        ("ladder coefficients", criterion_5),
        ("coherent-state equivalence", criterion_6),
        ("time evolution", criterion_7),
        ("similarity and expectation values", criterion_8),
        ("uncertainty minimality", criterion_9),
        ("matrix elements", criterion_10),
        ("cosmic string to Minkowski reduction via CLI", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
