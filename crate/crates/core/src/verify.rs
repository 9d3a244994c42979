//! Aggregated verification of one configuration.
//!
//! `Full` runs, in order: the grid algebra (commutators, Casimir, weight,
//! ladder, adjointness), orthonormality, calibration, Rayleigh energies,
//! periodicity, coherent-state equivalence and evolution, similarity
//! transformations and uncertainty minimality. `AlgebraOnly` skips everything
//! that needs a radial grid.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherent::{closed_form, density_period, evolve_params, reconstruction, series, sup_distance};
use crate::error::{Error, Result};
use crate::observables::{similarity_oracle, uncertainty_report};
use crate::params::{algebra_params, AlgebraParams, OscillatorConfig};
use crate::radial::basis::basis_unchecked;
use crate::radial::grid::{GridOptions, RadialGrid, CALIBRATION_TOL};
use crate::radial::operators::{rayleigh_energy, verify_algebra_params};
use crate::report::VerificationReport;
use crate::spectrum::{energy, periodicity_tolerance, phase_sweep, spectrum_from_b3};
use crate::su11::{casimir_eigenvalue, interior, ladder_down_coeff, ladder_up_coeff, truncated_rep};

/// Highest basis index used by the grid checks.
pub const VERIFY_NMAX: usize = 8;
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
pub const RAYLEIGH_TOL: f64 = 1e-6;
pub const INVERSION_TOL: f64 = 1e-12;
pub const EXACT_TOL: f64 = 1e-12;
pub const COHERENT_TOL: f64 = 1e-7;
pub const NORM_DRIFT_TOL: f64 = 1e-8;
pub const PERIOD_TOL: f64 = 1e-10;
pub const SIMILARITY_TOL: f64 = 1e-8;
pub const UNCERTAINTY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyLevel {
    Full,
    AlgebraOnly,
}

impl fmt::Display for VerifyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifyLevel::Full => "full",
            VerifyLevel::AlgebraOnly => "algebra-only",
        })
    }
}

impl FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(VerifyLevel::Full),
            "algebra-only" => Ok(VerifyLevel::AlgebraOnly),
            other => Err(Error::InvalidArgument(format!("unknown verification level {other:?}"))),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const COHERENT_XI: [(f64, f64); 4] = [(0.0, 0.0), (0.3, 0.2), (-0.55, 0.0), (0.0, 0.8)];
const DISPLACEMENTS: [(f64, f64); 4] = [(0.0, 0.0), (0.7, 0.0), (0.3, -0.5), (-0.6, 1.0)];

pub fn run_verification(cfg: &OscillatorConfig, level: VerifyLevel, opts: &GridOptions) -> Result<VerificationReport> {
    let p = algebra_params(cfg);
    p.require_frequency()?;
    let mut report = VerificationReport::new();
    if level == VerifyLevel::Full {
        grid_checks(cfg, &p, opts, &mut report)?;
    }
    exact_checks(cfg, &p, &mut report)?;
    periodicity_check(cfg, &mut report)?;
    if level == VerifyLevel::Full {
        coherent_checks(&p, opts, &mut report)?;
    }
    matrix_oracle_checks(&p, &mut report)?;
    Ok(report)
}

fn grid_checks(cfg: &OscillatorConfig, p: &AlgebraParams, opts: &GridOptions, report: &mut VerificationReport) -> Result<()> {
    let grid = RadialGrid::for_basis(p, VERIFY_NMAX + 4, opts)?;
    report.extend(verify_algebra_params(p, &grid, VERIFY_NMAX)?);

    let basis = basis_unchecked(p, VERIFY_NMAX, &grid);
    let mut gram = 0.0f64;
    for m in 0..=VERIFY_NMAX {
        for n in 0..=VERIFY_NMAX {
            let expect = if m == n { 1.0 } else { 0.0 };
            gram = gram.max((grid.inner(&basis[m].values, &basis[n].values) - expect).abs());
        }
    }
    report.record("orthonormality", gram, ORTHONORMALITY_TOL);
    let raw = basis.iter().map(|b| (b.raw_norm - 1.0).abs()).fold(0.0, f64::max);
    report.record_detail(
        "analytic normalization",
        raw,
        ORTHONORMALITY_TOL,
        "deviation of the analytically normalized samples from unit norm",
    );
    report.record("calibration", grid.calibration_error(), CALIBRATION_TOL);
    rayleigh_check(cfg, &grid, report);
    Ok(())
}

/// Identities of the truncated representation and the closed-form spectrum.
fn exact_checks(cfg: &OscillatorConfig, p: &AlgebraParams, report: &mut VerificationReport) -> Result<()> {
    let k = p.k;
    let dim = 64;
    let rep = truncated_rep(k, dim)?;
    let block = dim - 1;
    let comm = |a: &nalgebra::DMatrix<Complex64>, b: &nalgebra::DMatrix<Complex64>| a * b - b * a;
    let c1 = interior(&(comm(&rep.kthree, &rep.kplus) - &rep.kplus), block);
    let c2 = interior(&(comm(&rep.kminus, &rep.kplus) - &rep.kthree * c(2.0, 0.0)), block);
    let max_abs = |m: &nalgebra::DMatrix<Complex64>| m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // Relative to the largest entry, 2(k + dim − 1).
    let size = 2.0 * max_abs(&rep.kthree);
    report.record("exact commutator [K3,K+] - K+", max_abs(&c1) / size, EXACT_TOL);
    report.record("exact commutator [K-,K+] - 2K3", max_abs(&c2) / size, EXACT_TOL);
    let cas = interior(&rep.casimir_matrix(), block)
        - nalgebra::DMatrix::<Complex64>::identity(block, block) * c(casimir_eigenvalue(k), 0.0);
    report.record("exact casimir C^2 - k(k-1)", max_abs(&cas) / (size * size), EXACT_TOL);

    // Q₊(n) = Q₋(n+1) and Q₋Q₊ − Q₊Q₋ telescopes to 2(k+n).
    let mut ladder = 0.0f64;
    for n in 0..=50 {
        let up = ladder_up_coeff(k, n);
        let down = ladder_down_coeff(k, n + 1);
        ladder = ladder.max((up - down).abs() / up.max(1.0));
        let prev = if n == 0 { 0.0 } else { ladder_up_coeff(k, n - 1) };
        let lhs = up * up - prev * prev;
        ladder = ladder.max((lhs - 2.0 * (k + n as f64)).abs() / lhs.abs().max(1.0));
    }
    report.record("exact ladder coefficients", ladder, EXACT_TOL);

    let mut inversion = 0.0f64;
    for n_r in 0..=5 {
        let direct = energy(cfg, n_r)?;
        let via = spectrum_from_b3(cfg, n_r)?;
        for (a, b) in [(direct.e_plus, via.e_plus), (direct.e_minus, via.e_minus)] {
            inversion = inversion.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    report.record("spectrum from B3 eigenvalue", inversion, INVERSION_TOL);
    Ok(())
}

fn rayleigh_check(cfg: &OscillatorConfig, grid: &RadialGrid, report: &mut VerificationReport) {
    let mut worst = 0.0f64;
    let mut detail = String::from("n_r <= 5, both branches");
    for n_r in 0..=5 {
        let closed = match energy(cfg, n_r) {
            Ok(e) => e,
            Err(e) => {
                worst = f64::NAN;
                detail = e.to_string();
                break;
            }
        };
        match rayleigh_energy(cfg, n_r, grid) {
            Ok(r) => {
                for (a, b) in [(closed.e_plus, r.energies.e_plus), (closed.e_minus, r.energies.e_minus)] {
                    worst = worst.max((a - b).abs() / a.abs().max(f64::MIN_POSITIVE));
                }
            }
            Err(e) => {
                worst = f64::NAN;
                detail = e.to_string();
                break;
            }
        }
    }
    report.record_detail("rayleigh energies", worst, RAYLEIGH_TOL, detail);
}

fn periodicity_check(cfg: &OscillatorConfig, report: &mut VerificationReport) -> Result<()> {
    let phis: Vec<f64> = (0..41).map(|i| 4.0 * std::f64::consts::PI * i as f64 / 40.0).collect();
    let mut ratio = 0.0f64;
    for n_r in 0..=3 {
        let sweep = phase_sweep(cfg, n_r, &phis)?;
        for row in &sweep.periodicity {
            let tol = periodicity_tolerance(row.e_phase_shifted);
            ratio = ratio.max(row.residual / tol);
        }
    }
    report.record_detail(
        "periodicity residual / tolerance",
        ratio,
        1.0,
        "41 phases on [0, 4pi], n_r <= 3, m_l shifted by 2s per 2pi",
    );
    Ok(())
}

fn coherent_checks(p: &AlgebraParams, opts: &GridOptions, report: &mut VerificationReport) -> Result<()> {
    let grid = RadialGrid::for_coherent(p, 0.8, opts)?;
    let mut equiv = 0.0f64;
    for (re, im) in COHERENT_XI {
        let xi = c(re, im);
        let a = closed_form(p, xi, &grid)?;
        let b = series(p, xi, &grid, None)?;
        let r = reconstruction(p, xi, &grid, None)?;
        equiv = equiv
            .max(sup_distance(&a.samples, &b.samples))
            .max(sup_distance(&a.samples, &r.samples))
            .max(sup_distance(&b.samples, &r.samples));
    }
    report.record_detail("coherent three-way equivalence", equiv, COHERENT_TOL, "|xi| <= 0.8, sup norm");

    let xi = c(0.45, -0.35);
    let period = density_period(p);
    let start = evolve_params(p, xi, 0.0, &grid)?;
    let mut drift = 0.0f64;
    let mut periodic = 0.0f64;
    for i in 0..20 {
        let t = period * i as f64 / 7.0;
        let now = evolve_params(p, xi, t, &grid)?;
        let later = evolve_params(p, xi, t + period, &grid)?;
        drift = drift.max((now.raw_norm - start.raw_norm).abs());
        let d = now
            .abs2()
            .iter()
            .zip(later.abs2())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        periodic = periodic.max(d);
    }
    report.record("coherent norm drift", drift, NORM_DRIFT_TOL);
    report.record("coherent density period", periodic, PERIOD_TOL);
    Ok(())
}

fn matrix_oracle_checks(p: &AlgebraParams, report: &mut VerificationReport) -> Result<()> {
    let mut sim = 0.0f64;
    let mut dim = 0;
    for (re, im) in DISPLACEMENTS {
        let chk = similarity_oracle(p.k, c(re, im), 8)?;
        sim = sim.max(chk.max());
        dim = dim.max(chk.dim);
    }
    report.record_detail(
        "similarity transformations",
        sim,
        SIMILARITY_TOL,
        format!("|z| <= 1.17, 8x8 block of a dim-{dim} truncation"),
    );

    let mut minimal = 0.0f64;
    let mut oracle = 0.0f64;
    for (re, im) in DISPLACEMENTS {
        let r = uncertainty_report(p.k, c(re, im))?;
        minimal = minimal.max(r.residual.abs() / r.rhs.abs()).max(r.oracle_residual);
        oracle = oracle.max(r.oracle_deviation);
    }
    report.record("uncertainty minimality", minimal, UNCERTAINTY_TOL);
    report.record("uncertainty oracle agreement", oracle, UNCERTAINTY_TOL);
    Ok(())
}
