//! Sturmian (Laguerre–Gaussian) basis functions sampled on a grid.

use super::grid::RadialGrid;
use super::laguerre::{alpha_ln, orthonormal_laguerre};
use crate::error::Result;
use crate::params::{algebra_params, AlgebraParams, OscillatorConfig};

/// φ_n(ρ) ∝ ρ^{2k−1} e^{−m₀|ω̄|ρ²/2} L_n^{2k−1}(m₀|ω̄|ρ²), normalized under ρ dρ.
#[derive(Debug, Clone, PartialEq)]
pub struct SturmianFunction {
    pub n_r: usize,
    pub gamma_eff: f64,
    pub values: Vec<f64>,
    /// Quadrature norm of `values`.
    pub norm: f64,
    /// Quadrature norm of the analytically normalized samples before rescaling.
    pub raw_norm: f64,
}

/// Samples of √(2a)·x^{α/2}e^{−x/2}·ℓ_n(x) for n = 0..=nmax; row index n.
fn analytic_samples(p: &AlgebraParams, nmax: usize, grid: &RadialGrid, alpha: f64) -> Vec<Vec<f64>> {
    let mut rows = vec![Vec::with_capacity(grid.npoints()); nmax + 1];
    let log_norm = 0.5 * (2.0 * p.scale()).ln();
    for s in grid.s_nodes() {
        let x = s * s;
        let pre = log_norm + 0.5 * alpha_ln(alpha, x) - 0.5 * x;
        for (n, v) in orthonormal_laguerre(nmax, alpha, x, pre).into_iter().enumerate() {
            rows[n].push(v);
        }
    }
    rows
}

pub(crate) fn basis_unchecked(p: &AlgebraParams, nmax: usize, grid: &RadialGrid) -> Vec<SturmianFunction> {
    analytic_samples(p, nmax, grid, p.alpha())
        .into_iter()
        .enumerate()
        .map(|(n, raw)| {
            let raw_norm = grid.norm(&raw);
            let values: Vec<f64> = raw.iter().map(|v| v / raw_norm).collect();
            let norm = grid.norm(&values);
            SturmianFunction { n_r: n, gamma_eff: p.gamma_eff, values, norm, raw_norm }
        })
        .collect()
}

/// φ_0 … φ_nmax for the given parameters; the grid must be built for them and
/// pass its calibration check.
pub fn sturmian_basis(p: &AlgebraParams, nmax: usize, grid: &RadialGrid) -> Result<Vec<SturmianFunction>> {
    p.require_frequency()?;
    grid.require_match(p)?;
    grid.check_calibration()?;
    Ok(basis_unchecked(p, nmax, grid))
}

pub fn sturmian(cfg: &OscillatorConfig, n_r: usize, grid: &RadialGrid) -> Result<SturmianFunction> {
    let p = algebra_params(cfg);
    let mut all = sturmian_basis(&p, n_r, grid)?;
    Ok(all.pop().expect("basis has n_r + 1 entries"))
}

/// ρ·dφ_n/dρ from the derivative of the Laguerre polynomial, scaled like
/// [`sturmian_basis`]. Independent of any finite-difference stencil.
pub fn rho_derivatives(p: &AlgebraParams, nmax: usize, grid: &RadialGrid) -> Result<Vec<Vec<f64>>> {
    p.require_frequency()?;
    grid.require_match(p)?;
    let alpha = p.alpha();
    let base = analytic_samples(p, nmax, grid, alpha);
    let shifted = if nmax > 0 {
        analytic_samples(p, nmax - 1, grid, alpha + 1.0)
    } else {
        Vec::new()
    };
    // ρ d/dρ = 2x d/dx and d/dx L_n^α = −L_{n−1}^{α+1}; in orthonormal form
    // ρφ_n' = (α − x)φ_n − 2x√n·ψ_{n−1}, with ψ built on ℓ^{(α+1)}.
    let out = (0..=nmax)
        .map(|n| {
            let raw_norm = grid.norm(&base[n]);
            grid.s_nodes()
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    let x = s * s;
                    let mut v = (alpha - x) * base[n][j];
                    if n > 0 {
                        v -= 2.0 * x * (n as f64).sqrt() * shifted[n - 1][j] / s;
                    }
                    v / raw_norm
                })
                .collect()
        })
        .collect();
    Ok(out)
}
