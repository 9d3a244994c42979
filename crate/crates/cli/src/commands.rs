use std::fmt;
use std::fs;
use std::time::Instant;

use anyhow::{Context, Result};
use dirac_su11::coherent::{closed_form, evolved_xi, reconstruction, series};
use dirac_su11::observables::{
    rho2_matrix, rho2_quadrature, rho_ddrho_matrix, rho_ddrho_quadrature, uncertainty_report,
};
use dirac_su11::params::{algebra_params, AlgebraParams, ConfigFile};
use dirac_su11::radial::{sturmian_basis, GridOptions, RadialGrid};
use dirac_su11::spectrum::{energy, phase_sweep};
use dirac_su11::verify::{run_verification, VerifyLevel};
use dirac_su11::{Error, OscillatorConfig};
use num_complex::Complex64;
use serde::Serialize;

use crate::output::{emit, pretty, Cell, Format, GridManifest, RunManifest, Table};
use crate::{Command, Common};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BranchFilter {
    Both,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CoherentMethod {
    ClosedForm,
    Series,
    Reconstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatrixOperator {
    Rho2,
    RhoDdrho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatrixMethod {
    Algebra,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Full,
    AlgebraOnly,
}

/// A verification run completed but at least one check failed.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: first failing check is `{}`", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

/// Reads a configuration file; a run manifest contributes its config snapshot.
pub fn load_config(common: &Common) -> Result<OscillatorConfig> {
    let Some(path) = &common.config else {
        return Ok(ConfigFile::default().validate()?);
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    let file = if value.get("command").is_some() && value.get("config").is_some() {
        serde_json::from_value::<RunManifest>(value)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
            .config
    } else {
        serde_json::from_value::<ConfigFile>(value)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
    };
    Ok(file.validate()?)
}

fn grid_options(common: &Common) -> GridOptions {
    GridOptions { npoints: common.grid_points, rmax_scale: common.rmax_scale, ..GridOptions::default() }
}

fn grid_manifest(opts: &GridOptions) -> GridManifest {
    GridManifest { npoints: opts.npoints, rmax_scale: opts.rmax_scale, fd_order: opts.fd_order }
}

fn frequency(cfg: &OscillatorConfig) -> Result<AlgebraParams> {
    let p = algebra_params(cfg);
    p.require_frequency()?;
    Ok(p)
}

struct Rendered {
    body: String,
    uses_grid: bool,
    failure: Option<String>,
}

impl Rendered {
    fn plain(body: String) -> Self {
        Rendered { body, uses_grid: false, failure: None }
    }

    fn gridded(body: String) -> Self {
        Rendered { body, uses_grid: true, failure: None }
    }
}

pub fn run(common: &Common, command: &Command, arguments: Vec<String>) -> Result<()> {
    let start = Instant::now();
    let cfg = load_config(common)?;
    let opts = grid_options(common);
    let (name, rendered) = match command {
        Command::Spectrum { n_max, branch } => ("spectrum", spectrum(&cfg, *n_max, *branch, common.format)?),
        Command::SweepPhase { n_r, phi_min, phi_max, points } => {
            ("sweep-phase", sweep(&cfg, *n_r, *phi_min, *phi_max, *points, common.format)?)
        }
        Command::Wavefunction { n_r } => ("wavefunction", wavefunction(&cfg, *n_r, &opts, common.format)?),
        Command::Coherent { xi_re, xi_im, time, method } => (
            "coherent",
            coherent(&cfg, Complex64::new(*xi_re, *xi_im), *time, *method, &opts, common.format)?,
        ),
        Command::Uncertainty { z_re, z_im } => {
            ("uncertainty", uncertainty(&cfg, Complex64::new(*z_re, *z_im), common.format)?)
        }
        Command::MatrixElements { operator, n_max, method } => {
            ("matrix-elements", matrix_elements(&cfg, *operator, *n_max, *method, &opts, common.format)?)
        }
        Command::Verify { level } => ("verify", verify(&cfg, *level, &opts, common.format)?),
    };
    emit(
        &rendered.body,
        common.out.as_deref(),
        name,
        arguments,
        cfg.to_file(),
        rendered.uses_grid.then(|| grid_manifest(&opts)),
        start.elapsed(),
    )
    .context("writing output")?;
    match rendered.failure {
        Some(check) => Err(VerificationFailed(check).into()),
        None => Ok(()),
    }
}

fn spectrum(cfg: &OscillatorConfig, n_max: usize, branch: BranchFilter, format: Format) -> Result<Rendered> {
    frequency(cfg)?;
    let columns = match branch {
        BranchFilter::Both => vec!["n_r", "n_s", "e_plus", "e_minus"],
        BranchFilter::Plus => vec!["n_r", "n_s", "e_plus"],
        BranchFilter::Minus => vec!["n_r", "n_s", "e_minus"],
    };
    let mut t = Table::new(columns);
    for n_r in 0..=n_max {
        let e = energy(cfg, n_r)?;
        let mut row = vec![Cell::Int(n_r as i64), Cell::Int(e.n_s as i64)];
        if branch != BranchFilter::Minus {
            row.push(Cell::Float(e.e_plus));
        }
        if branch != BranchFilter::Plus {
            row.push(Cell::Float(e.e_minus));
        }
        t.push(row);
    }
    Ok(Rendered::plain(t.render(format)))
}

fn sweep(cfg: &OscillatorConfig, n_r: usize, lo: f64, hi: f64, points: usize, format: Format) -> Result<Rendered> {
    frequency(cfg)?;
    if points < 2 || !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("a phase sweep needs finite bounds and at least 2 points".into()).into());
    }
    let phis: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let sw = phase_sweep(cfg, n_r, &phis)?;
    let body = match format {
        Format::Json => pretty(&sw),
        Format::Csv => {
            let mut t = Table::new(vec![
                "phi_ac",
                "n_r",
                "s",
                "e_plus",
                "e_minus",
                "ml_numerator_shift",
                "residual_plus_2pi",
                "residual_minus_2pi",
                "unit_shift_residual",
                "status",
            ]);
            for (row, pair) in sw.rows.iter().zip(sw.periodicity.chunks(2)) {
                let unit = pair[0].unit_shift_residual.max(pair[1].unit_shift_residual);
                let status = if pair.iter().all(|r| r.pass) { "PASS" } else { "FAIL" };
                t.push(vec![
                    Cell::Float(row.phi_ac),
                    Cell::Int(row.n_r as i64),
                    Cell::Int(row.s as i64),
                    Cell::Float(row.e_plus),
                    Cell::Float(row.e_minus),
                    Cell::Int(pair[0].ml_numerator_shift as i64),
                    Cell::Float(pair[0].residual),
                    Cell::Float(pair[1].residual),
                    Cell::Float(unit),
                    Cell::Text(status.into()),
                ]);
            }
            t.csv()
        }
    };
    Ok(Rendered::plain(body))
}

fn wavefunction(cfg: &OscillatorConfig, n_r: usize, opts: &GridOptions, format: Format) -> Result<Rendered> {
    let p = frequency(cfg)?;
    let grid = RadialGrid::for_basis(&p, n_r.max(12), opts)?;
    let phi = sturmian_basis(&p, n_r, &grid)?.pop().expect("basis is never empty");
    let mut t = Table::new(vec!["rho", "phi"]);
    for (r, v) in grid.points().iter().zip(&phi.values) {
        t.push(vec![Cell::Float(*r), Cell::Float(*v)]);
    }
    let body = match format {
        Format::Csv => t.csv(),
        Format::Json => pretty(&serde_json::json!({
            "n_r": n_r,
            "gamma_eff": phi.gamma_eff,
            "k": p.k,
            "raw_norm": phi.raw_norm,
            "samples": t.json_records(),
        })),
    };
    Ok(Rendered::gridded(body))
}

#[derive(Serialize)]
struct CoherentHeader {
    k: f64,
    xi_re: f64,
    xi_im: f64,
    time: f64,
    xi_t_re: f64,
    xi_t_im: f64,
    method: &'static str,
    raw_norm: f64,
}

fn coherent(
    cfg: &OscillatorConfig,
    xi: Complex64,
    time: f64,
    method: CoherentMethod,
    opts: &GridOptions,
    format: Format,
) -> Result<Rendered> {
    let p = frequency(cfg)?;
    if !(time.is_finite() && xi.re.is_finite() && xi.im.is_finite()) {
        return Err(Error::InvalidArgument("xi and time must be finite".into()).into());
    }
    if xi.norm() >= 1.0 {
        return Err(Error::OutsideUnitDisk { modulus: xi.norm(), limit: 1.0 }.into());
    }
    let grid = RadialGrid::for_coherent(&p, xi.norm(), opts)?;
    grid.check_calibration()?;
    // e^{−iH_r t} maps ξ to ξ_t up to the global phase e^{−4iakt}.
    let xi_t = evolved_xi(&p, xi, time);
    let mut prof = match method {
        CoherentMethod::ClosedForm => closed_form(&p, xi_t, &grid)?,
        CoherentMethod::Series => series(&p, xi_t, &grid, None)?,
        CoherentMethod::Reconstruction => reconstruction(&p, xi_t, &grid, None)?,
    };
    if time != 0.0 {
        let phase = Complex64::from_polar(1.0, -4.0 * p.scale() * p.k * time);
        for v in &mut prof.samples {
            *v *= phase;
        }
    }
    let header = CoherentHeader {
        k: p.k,
        xi_re: xi.re,
        xi_im: xi.im,
        time,
        xi_t_re: xi_t.re,
        xi_t_im: xi_t.im,
        method: match method {
            CoherentMethod::ClosedForm => "closed-form",
            CoherentMethod::Series => "series",
            CoherentMethod::Reconstruction => "reconstruction",
        },
        raw_norm: prof.raw_norm,
    };
    let mut t = Table::new(vec!["rho", "re", "im", "abs2"]);
    for (r, v) in grid.points().iter().zip(&prof.samples) {
        t.push(vec![Cell::Float(*r), Cell::Float(v.re), Cell::Float(v.im), Cell::Float(v.norm_sqr())]);
    }
    let body = match format {
        Format::Csv => {
            let head = serde_json::to_string(&header).expect("header is serializable");
            format!("# {head}\n{}", t.csv())
        }
        Format::Json => pretty(&serde_json::json!({ "header": header, "samples": t.json_records() })),
    };
    Ok(Rendered::gridded(body))
}

fn uncertainty(cfg: &OscillatorConfig, z: Complex64, format: Format) -> Result<Rendered> {
    let p = frequency(cfg)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("z must be finite".into()).into());
    }
    let r = uncertainty_report(p.k, z)?;
    let body = match format {
        Format::Json => pretty(&serde_json::json!({
            "k": r.k,
            "z_re": z.re,
            "z_im": z.im,
            "dx2": r.dx2,
            "dy2": r.dy2,
            "f": r.f,
            "c": r.c,
            "lhs": r.lhs,
            "rhs": r.rhs,
            "residual": r.residual,
            "minimal": r.is_minimal(),
            "oracle": r.oracle,
            "oracle_deviation": r.oracle_deviation,
            "oracle_residual": r.oracle_residual,
        })),
        Format::Csv => {
            let mut t = Table::new(vec!["quantity", "value"]);
            for (name, v) in [
                ("k", r.k),
                ("z_re", z.re),
                ("z_im", z.im),
                ("dx2", r.dx2),
                ("dy2", r.dy2),
                ("f", r.f),
                ("c", r.c),
                ("lhs", r.lhs),
                ("rhs", r.rhs),
                ("residual", r.residual),
                ("oracle_deviation", r.oracle_deviation),
                ("oracle_residual", r.oracle_residual),
            ] {
                t.push(vec![Cell::Text(name.into()), Cell::Float(v)]);
            }
            t.csv()
        }
    };
    Ok(Rendered::plain(body))
}

fn matrix_elements(
    cfg: &OscillatorConfig,
    operator: MatrixOperator,
    n_max: usize,
    method: MatrixMethod,
    opts: &GridOptions,
    format: Format,
) -> Result<Rendered> {
    let p = frequency(cfg)?;
    let (m, uses_grid) = match method {
        MatrixMethod::Algebra => {
            let m = match operator {
                MatrixOperator::Rho2 => rho2_matrix(&p, n_max)?,
                MatrixOperator::RhoDdrho => rho_ddrho_matrix(&p, n_max)?,
            };
            (m, false)
        }
        MatrixMethod::Quadrature => {
            let grid = RadialGrid::for_basis(&p, n_max.max(12), opts)?;
            let m = match operator {
                MatrixOperator::Rho2 => rho2_quadrature(&p, n_max, &grid)?,
                MatrixOperator::RhoDdrho => rho_ddrho_quadrature(&p, n_max, &grid)?,
            };
            (m, true)
        }
    };
    let mut t = Table::new(vec!["m", "n", "value"]);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            t.push(vec![Cell::Int(i as i64), Cell::Int(j as i64), Cell::Float(m[(i, j)])]);
        }
    }
    Ok(Rendered { body: t.render(format), uses_grid, failure: None })
}

fn verify(cfg: &OscillatorConfig, level: Level, opts: &GridOptions, format: Format) -> Result<Rendered> {
    let level = match level {
        Level::Full => VerifyLevel::Full,
        Level::AlgebraOnly => VerifyLevel::AlgebraOnly,
    };
    let report = run_verification(cfg, level, opts)?;
    let failure = report.first_failure().map(|c| c.name.clone());
    let body = match format {
        Format::Json => pretty(&serde_json::json!({
            "level": level.to_string(),
            "passed": report.passed(),
            "checks": report.checks,
        })),
        Format::Csv => {
            let mut t = Table::new(vec!["check", "residual", "threshold", "status"]);
            for c in &report.checks {
                t.push(vec![
                    Cell::Text(format!("\"{}\"", c.name)),
                    Cell::Float(c.residual),
                    Cell::Float(c.threshold),
                    Cell::Text(if c.pass { "PASS" } else { "FAIL" }.into()),
                ]);
            }
            t.csv()
        }
    };
    Ok(Rendered { body, uses_grid: level == VerifyLevel::Full, failure })
}
