//! Radial Perelomov coherent states and their time evolution.
//!
//! The state D(z)|k,0⟩ has the closed form
//!
//! φ(ρ, ξ) = (1−|ξ|²)^k √(2a/Γ(2k)) (1−ξ)^{−2k} x^{α/2} exp[(x/2)(ξ+1)/(ξ−1)]
//!
//! with a = m₀|ω̄|, x = aρ², α = 2k − 1. It is the resummation of
//! Σ c_n(ξ) φ_n(ρ) through the Laguerre generating function; both sums are
//! provided as independent checks. Evolution under H_r = 4a·B₃′ maps
//! ξ → ξ·e^{−4iat} up to the global phase e^{−4iakt}.

use num_complex::Complex64;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::params::{algebra_params, AlgebraParams, OscillatorConfig};
use crate::radial::grid::RadialGrid;
use crate::radial::laguerre::{alpha_ln, orthonormal_laguerre};
use crate::su11::perelomov_coefficients;

/// Largest |ξ| accepted by the series resummation.
pub const SERIES_DISK_LIMIT: f64 = 0.95;
/// Relative tail mass allowed when truncating Σ ξⁿ L_n.
pub const SERIES_TAIL_TOL: f64 = 1e-14;
pub const SERIES_MAX_TERMS: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentProfile {
    /// Disk variable at t = 0.
    pub xi: Complex64,
    /// Disk variable at `time`, ξ·e^{−4iat}.
    pub xi_t: Complex64,
    pub k: f64,
    pub time: f64,
    pub samples: Vec<Complex64>,
    /// Quadrature norm of `samples`.
    pub norm: f64,
    /// Quadrature norm before rescaling; 1 up to quadrature and truncation error.
    pub raw_norm: f64,
}

impl CoherentProfile {
    pub fn abs2(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v.norm_sqr()).collect()
    }

    /// The same state evolved for a further `dt`.
    pub fn advance(&self, p: &AlgebraParams, dt: f64, grid: &RadialGrid) -> Result<CoherentProfile> {
        let rot = Complex64::from_polar(1.0, -4.0 * p.scale() * dt);
        let phase = global_phase(p, self.time) * Complex64::from_polar(1.0, -4.0 * p.scale() * p.k * dt);
        let mut out = closed_form_raw(p, self.xi_t * rot, grid)?;
        for v in &mut out.samples {
            *v *= phase;
        }
        out.xi = self.xi;
        out.time = self.time + dt;
        Ok(out)
    }
}

fn check_xi(xi: Complex64, limit: f64) -> Result<()> {
    let m = xi.norm();
    if m.is_nan() || m >= limit {
        return Err(Error::OutsideUnitDisk { modulus: m, limit });
    }
    Ok(())
}

fn prepare(p: &AlgebraParams, grid: &RadialGrid) -> Result<()> {
    p.require_frequency()?;
    grid.require_match(p)
}

fn finish(xi: Complex64, k: f64, time: f64, mut samples: Vec<Complex64>, grid: &RadialGrid) -> Result<CoherentProfile> {
    let raw_norm = grid.norm_complex(&samples);
    if !(raw_norm.is_finite() && raw_norm > 0.0) {
        return Err(Error::GridResolution(format!("coherent state has quadrature norm {raw_norm}")));
    }
    for v in &mut samples {
        *v /= raw_norm;
    }
    let norm = grid.norm_complex(&samples);
    Ok(CoherentProfile { xi, xi_t: xi, k, time, samples, norm, raw_norm })
}

fn closed_form_raw(p: &AlgebraParams, xi: Complex64, grid: &RadialGrid) -> Result<CoherentProfile> {
    check_xi(xi, 1.0)?;
    let k = p.k;
    let alpha = p.alpha();
    let one = Complex64::new(1.0, 0.0);
    let mobius = (xi + one) / (xi - one);
    let constant = Complex64::new(
        k * (1.0 - xi.norm_sqr()).ln() + 0.5 * (2.0 * p.scale()).ln() - 0.5 * ln_gamma(2.0 * k),
        0.0,
    ) - (one - xi).ln() * (2.0 * k);
    let samples = grid
        .s_nodes()
        .iter()
        .map(|s| {
            let x = s * s;
            (constant + 0.5 * alpha_ln(alpha, x) + mobius * (0.5 * x)).exp()
        })
        .collect();
    finish(xi, k, 0.0, samples, grid)
}

pub fn closed_form(p: &AlgebraParams, xi: Complex64, grid: &RadialGrid) -> Result<CoherentProfile> {
    prepare(p, grid)?;
    closed_form_raw(p, xi, grid)
}

pub fn coherent_closed_form(cfg: &OscillatorConfig, xi: Complex64, grid: &RadialGrid) -> Result<CoherentProfile> {
    closed_form(&algebra_params(cfg), xi, grid)
}

/// Fraction of Σ|ξ|ⁿ C(n+2k−1, n) carried by the terms n > nmax.
pub fn series_tail(k: f64, xi_modulus: f64, nmax: usize) -> f64 {
    if xi_modulus == 0.0 {
        return 0.0;
    }
    beta_reg(nmax as f64 + 1.0, 2.0 * k, xi_modulus)
}

/// Truncation order: ⌈ln(tol(1−|ξ|))/ln|ξ|⌉ + 2k + 10, doubled until the tail
/// bound holds.
pub fn series_order(k: f64, xi_modulus: f64) -> Result<usize> {
    if xi_modulus == 0.0 {
        return Ok(0);
    }
    let first = ((SERIES_TAIL_TOL * (1.0 - xi_modulus)).ln() / xi_modulus.ln()).ceil() + (2.0 * k).ceil() + 10.0;
    let mut n = (first as usize).min(SERIES_MAX_TERMS);
    loop {
        if series_tail(k, xi_modulus, n) <= SERIES_TAIL_TOL {
            return Ok(n);
        }
        if n == SERIES_MAX_TERMS {
            return Err(Error::NonConvergence(format!(
                "coherent series for |xi| = {xi_modulus}, k = {k} needs more than {SERIES_MAX_TERMS} terms"
            )));
        }
        n = (2 * n).min(SERIES_MAX_TERMS);
    }
}

/// Σ_{n≤nmax} ξⁿ e^{−x/2} L_n^α(x) times the common factor, normalized.
pub fn series(p: &AlgebraParams, xi: Complex64, grid: &RadialGrid, nmax: Option<usize>) -> Result<CoherentProfile> {
    prepare(p, grid)?;
    check_xi(xi, SERIES_DISK_LIMIT)?;
    let m = xi.norm();
    let nmax = match nmax {
        Some(n) => {
            let tail = series_tail(p.k, m, n);
            if tail > SERIES_TAIL_TOL {
                return Err(Error::NonConvergence(format!(
                    "{n} terms leave a relative tail of {tail:.3e} (tolerance {SERIES_TAIL_TOL:.0e})"
                )));
            }
            n
        }
        None => series_order(p.k, m)?,
    };
    let alpha = p.alpha();
    let k = p.k;
    let common = (k * (1.0 - m * m).ln() + 0.5 * (2.0 * p.scale()).ln() - 0.5 * ln_gamma(2.0 * k)).exp();
    let samples = grid
        .s_nodes()
        .iter()
        .map(|s| {
            let x = s * s;
            laguerre_power_sum(xi, nmax, alpha, x) * (0.5 * alpha_ln(alpha, x)).exp() * common
        })
        .collect();
    finish(xi, k, 0.0, samples, grid)
}

pub fn coherent_series(
    cfg: &OscillatorConfig,
    xi: Complex64,
    grid: &RadialGrid,
    nmax: Option<usize>,
) -> Result<CoherentProfile> {
    series(&algebra_params(cfg), xi, grid, nmax)
}

/// Σ_{n≤nmax} yⁿ e^{−x/2} L_n^α(x) by the three-term recurrence with rescaling.
pub fn laguerre_power_sum(y: Complex64, nmax: usize, alpha: f64, x: f64) -> Complex64 {
    const BIG: f64 = 1e150;
    let mut log_scale = -0.5 * x;
    let mut prev = 1.0;
    let mut sum = Complex64::new(1.0, 0.0);
    if nmax == 0 {
        return sum * log_scale.exp();
    }
    let mut cur = 1.0 + alpha - x;
    let mut power = y;
    sum += power * cur;
    for n in 1..nmax {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + alpha - x) * cur - (nf + alpha) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        power *= y;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            sum /= BIG;
            log_scale += BIG.ln();
        }
        sum += power * cur;
    }
    sum * log_scale.exp()
}

/// Σ c_n(ξ) φ_n with c_n from the representation theory and φ_n the
/// analytically normalized Sturmian functions.
pub fn reconstruction(p: &AlgebraParams, xi: Complex64, grid: &RadialGrid, nmax: Option<usize>) -> Result<CoherentProfile> {
    prepare(p, grid)?;
    check_xi(xi, 1.0)?;
    let nmax = match nmax {
        Some(n) => n,
        None => series_order(p.k, xi.norm())?,
    };
    let coeffs = perelomov_coefficients(p.k, xi, nmax)?;
    let alpha = p.alpha();
    let log_norm = 0.5 * (2.0 * p.scale()).ln();
    let samples = grid
        .s_nodes()
        .iter()
        .map(|s| {
            let x = s * s;
            let pre = log_norm + 0.5 * alpha_ln(alpha, x) - 0.5 * x;
            orthonormal_laguerre(nmax, alpha, x, pre)
                .iter()
                .zip(&coeffs)
                .map(|(phi, c)| c * phi)
                .sum()
        })
        .collect();
    finish(xi, p.k, 0.0, samples, grid)
}

pub fn coherent_reconstruction(
    cfg: &OscillatorConfig,
    xi: Complex64,
    grid: &RadialGrid,
    nmax: Option<usize>,
) -> Result<CoherentProfile> {
    reconstruction(&algebra_params(cfg), xi, grid, nmax)
}

fn global_phase(p: &AlgebraParams, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -4.0 * p.scale() * p.k * t)
}

/// Disk variable after time t: ξ·e^{−4iat}.
pub fn evolved_xi(p: &AlgebraParams, xi: Complex64, t: f64) -> Complex64 {
    xi * Complex64::from_polar(1.0, -4.0 * p.scale() * t)
}

/// e^{−iH_r t} applied to the coherent state ξ.
pub fn evolve_params(p: &AlgebraParams, xi: Complex64, t: f64, grid: &RadialGrid) -> Result<CoherentProfile> {
    prepare(p, grid)?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("evolution time must be finite, got {t}")));
    }
    check_xi(xi, 1.0)?;
    let mut out = closed_form_raw(p, evolved_xi(p, xi, t), grid)?;
    let phase = global_phase(p, t);
    for v in &mut out.samples {
        *v *= phase;
    }
    out.xi = xi;
    out.time = t;
    Ok(out)
}

pub fn evolve(cfg: &OscillatorConfig, xi: Complex64, t: f64, grid: &RadialGrid) -> Result<CoherentProfile> {
    evolve_params(&algebra_params(cfg), xi, t, grid)
}

/// Time after which |φ(ρ, t)|² repeats: π/(2m₀|ω̄|).
pub fn density_period(p: &AlgebraParams) -> f64 {
    std::f64::consts::PI / (2.0 * p.scale())
}

pub fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
