//! Radial grid, quadrature weights and derivative stencils.
//!
//! Nodes sit at cell centres of a uniform grid in the dimensionless variable
//! s = √(m₀|ω̄|)·ρ, s_j = (j + ½)h. Every function handled here has the form
//! s^α·G(s) with G smooth and even, so derivative stencils reaching past the
//! origin use the mirror nodes −s_j with the same values of G.
//!
//! Quadrature is product integration: on panels of [`PANEL_DEGREE`] cells, G
//! is replaced by its interpolant on the panel's nodes and the weight s^{2α+1}
//! is integrated exactly (to double precision). The resulting weights are
//! exact for such integrands but are not all positive. Residual norms, which
//! are not of that form, use a positive midpoint rule instead.

use num_complex::Complex64;
use statrs::function::gamma::{gamma, gamma_lr};

use super::fd::fornberg_weights;
use crate::error::{Error, Result};
use crate::params::AlgebraParams;
use crate::quadrature::{gauss_legendre, mapped};

pub const PANEL_DEGREE: usize = 8;
const GL_POINTS: usize = 20;
const DYADIC_LEVELS: usize = 60;
/// Relative tolerance of the calibration integral.
pub const CALIBRATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub npoints: usize,
    /// Multiplies the default outer radius.
    pub rmax_scale: f64,
    /// Order of the centred derivative stencils (even).
    pub fd_order: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { npoints: 2048, rmax_scale: 1.0, fd_order: 4 }
    }
}

/// One row of the first and second derivative matrices, in units of s.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilRow {
    pub cols: Vec<usize>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    points: Vec<f64>,
    s: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
    scale: f64,
    h: f64,
    fd_order: usize,
    stencils: Vec<StencilRow>,
}

/// x = m₀|ω̄|ρ² beyond which every basis function up to `nmax` is negligible.
pub fn basis_x_max(alpha: f64, nmax: usize) -> f64 {
    4.0 * nmax as f64 + 2.0 * alpha + 64.0
}

/// x beyond which |x^α e^{−c x}| has fallen by e^{−46} from its peak, where c
/// is the slowest Gaussian decay rate over the disk |ξ| ≤ `xi_modulus`.
pub fn coherent_x_max(alpha: f64, xi_modulus: f64) -> f64 {
    let c = (1.0 - xi_modulus) / (1.0 + xi_modulus);
    let f = |x: f64| super::laguerre::alpha_ln(alpha, x) - c * x;
    let peak_x = if alpha > 0.0 { alpha / c } else { 0.0 };
    let target = f(peak_x.max(f64::MIN_POSITIVE)) - 46.0;
    let mut lo = peak_x;
    let mut hi = peak_x.max(1.0);
    while f(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

impl RadialGrid {
    /// Grid on [0, s_max/√scale] for functions ρ^α·G.
    pub fn new(alpha: f64, scale: f64, s_max: f64, opts: &GridOptions) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid exponent must be >= 0, got {alpha}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid scale must be positive, got {scale}")));
        }
        if !(opts.rmax_scale > 0.0 && opts.rmax_scale.is_finite() && s_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "outer radius must be positive (rmax_scale = {})",
                opts.rmax_scale
            )));
        }
        if opts.fd_order < 2 || !opts.fd_order.is_multiple_of(2) || opts.fd_order > 12 {
            return Err(Error::InvalidArgument(format!(
                "finite-difference order must be even and in 2..=12, got {}",
                opts.fd_order
            )));
        }
        let min_points = (2 * (opts.fd_order + 1)).max(2 * PANEL_DEGREE);
        if opts.npoints < min_points {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {min_points} points, got {}",
                opts.npoints
            )));
        }
        let n = opts.npoints;
        let h = s_max / n as f64;
        let s: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * h).collect();
        let root = scale.sqrt();
        let points: Vec<f64> = s.iter().map(|v| v / root).collect();
        let sw = product_weights(&s, 2.0 * alpha + 1.0);
        let weights = sw
            .iter()
            .zip(&s)
            .map(|(w, sj)| w / (scale * sj.powf(2.0 * alpha)))
            .collect();
        let stencils = derivative_stencils(n, h, opts.fd_order);
        Ok(RadialGrid { points, s, weights, alpha, scale, h, fd_order: opts.fd_order, stencils })
    }

    /// Grid for the Sturmian functions φ_0 … φ_nmax of `p`.
    pub fn for_basis(p: &AlgebraParams, nmax: usize, opts: &GridOptions) -> Result<Self> {
        p.require_frequency()?;
        let alpha = p.alpha();
        let s_max = opts.rmax_scale * basis_x_max(alpha, nmax).sqrt();
        Self::new(alpha, p.scale(), s_max, opts)
    }

    /// Grid for coherent states with |ξ| ≤ `xi_modulus`; also resolves φ_0 … φ_12.
    pub fn for_coherent(p: &AlgebraParams, xi_modulus: f64, opts: &GridOptions) -> Result<Self> {
        p.require_frequency()?;
        if !(0.0..1.0).contains(&xi_modulus) {
            return Err(Error::OutsideUnitDisk { modulus: xi_modulus, limit: 1.0 });
        }
        let alpha = p.alpha();
        let x_max = coherent_x_max(alpha, xi_modulus).max(basis_x_max(alpha, 12));
        Self::new(alpha, p.scale(), opts.rmax_scale * x_max.sqrt(), opts)
    }

    /// ρ values, strictly increasing in (0, R].
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Dimensionless nodes s = √(m₀|ω̄|)·ρ.
    pub fn s_nodes(&self) -> &[f64] {
        &self.s
    }

    /// Quadrature weights for ∫ f g ρ dρ with f, g of the form ρ^α·(smooth even).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn r_max(&self) -> f64 {
        *self.points.last().expect("grid is never empty")
    }

    pub fn npoints(&self) -> usize {
        self.points.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Spacing in s.
    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn fd_order(&self) -> usize {
        self.fd_order
    }

    pub fn stencils(&self) -> &[StencilRow] {
        &self.stencils
    }

    /// True when the grid was built for the exponent and scale of `p`.
    pub fn matches(&self, p: &AlgebraParams) -> bool {
        self.alpha == p.alpha() && self.scale == p.scale()
    }

    pub fn require_match(&self, p: &AlgebraParams) -> Result<()> {
        if self.matches(p) {
            Ok(())
        } else {
            Err(Error::GridResolution(format!(
                "grid built for alpha = {}, scale = {} but parameters have alpha = {}, scale = {}",
                self.alpha,
                self.scale,
                p.alpha(),
                p.scale()
            )))
        }
    }

    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights.iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum()
    }

    /// ∫ conj(f)·g ρ dρ.
    pub fn inner_complex(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(f).zip(g).map(|((w, a), b)| a.conj() * b * *w).sum()
    }

    pub fn norm(&self, f: &[f64]) -> f64 {
        self.inner(f, f).max(0.0).sqrt()
    }

    pub fn norm_complex(&self, f: &[Complex64]) -> f64 {
        self.inner_complex(f, f).re.max(0.0).sqrt()
    }

    /// Midpoint-rule L²(ρ dρ) norm with positive weights, for residuals.
    pub fn residual_norm(&self, f: &[f64]) -> f64 {
        let dr = self.h / self.scale.sqrt();
        self.points.iter().zip(f).map(|(r, v)| dr * r * v * v).sum::<f64>().sqrt()
    }

    /// Relative error of Σ w_j e^{−aρ_j²}ρ_j^{2α} against γ(α+1, aR²)/(2a^{α+1}).
    pub fn calibration_error(&self) -> f64 {
        let a = self.scale;
        let alpha = self.alpha;
        let numeric: f64 = self
            .weights
            .iter()
            .zip(&self.points)
            .zip(&self.s)
            .map(|((w, r), s)| w * (-s * s).exp() * r.powf(2.0 * alpha))
            .sum();
        let x_r = a * self.r_max() * self.r_max();
        let exact = gamma_lr(alpha + 1.0, x_r) * gamma(alpha + 1.0) / (2.0 * a.powf(alpha + 1.0));
        ((numeric - exact) / exact).abs()
    }

    pub fn check_calibration(&self) -> Result<()> {
        let err = self.calibration_error();
        if err <= CALIBRATION_TOL {
            Ok(())
        } else {
            Err(Error::GridResolution(format!(
                "calibration integral off by {err:.3e} (tolerance {CALIBRATION_TOL:.0e})"
            )))
        }
    }
}

fn lagrange_basis(nodes: &[f64], j: usize, t: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &ni)| (t - ni) / (nodes[j] - ni))
        .product()
}

/// Weights W_j with Σ W_j G(s_j) ≈ ∫_0^{s_N} s^e G(s) ds.
fn product_weights(s: &[f64], e: f64) -> Vec<f64> {
    let n = s.len();
    let p = PANEL_DEGREE;
    let (gx, gw) = gauss_legendre(GL_POINTS);
    let mut bounds = vec![(0.0, 0usize)];
    let mut i = p;
    while i < n {
        bounds.push((s[i], i));
        i += p;
    }
    if bounds.last().map(|b| b.1) != Some(n - 1) {
        bounds.push((s[n - 1], n - 1));
    }
    let mut w = vec![0.0; n];
    for pair in bounds.windows(2) {
        let (a0, ia) = pair[0];
        let (b0, _) = pair[1];
        let i0 = ia.min(n - 1 - p);
        let nodes = &s[i0..=i0 + p];
        let mut panel_points: Vec<(f64, f64)> = Vec::new();
        if a0 == 0.0 {
            // Dyadic refinement towards the origin, where s^e may be non-smooth.
            for level in 0..DYADIC_LEVELS {
                let hi = b0 / 2f64.powi(level as i32);
                let lo = hi / 2.0;
                panel_points.extend(mapped(&gx, &gw, lo, hi));
            }
        } else {
            panel_points.extend(mapped(&gx, &gw, a0, b0));
        }
        for (jj, wj) in w[i0..=i0 + p].iter_mut().enumerate() {
            *wj += panel_points
                .iter()
                .map(|&(t, wt)| wt * t.powf(e) * lagrange_basis(nodes, jj, t))
                .sum::<f64>();
        }
    }
    w
}

fn derivative_stencils(n: usize, h: f64, order: usize) -> Vec<StencilRow> {
    let half = (order / 2) as isize;
    let width = order + 1;
    (0..n)
        .map(|i| {
            let lo = (i as isize - half).min(n as isize - width as isize);
            let idx: Vec<isize> = (lo..lo + width as isize).collect();
            let pos: Vec<f64> = idx.iter().map(|&j| j as f64 + 0.5).collect();
            let c = fornberg_weights(i as f64 + 0.5, &pos, 2);
            let mut row = StencilRow { cols: Vec::new(), d1: Vec::new(), d2: Vec::new() };
            for (&j, cj) in idx.iter().zip(&c) {
                // Mirror node −s_j carries the value at s_j.
                let col = if j >= 0 { j as usize } else { (-j - 1) as usize };
                match row.cols.iter().position(|&k| k == col) {
                    Some(k) => {
                        row.d1[k] += cj[1] / h;
                        row.d2[k] += cj[2] / (h * h);
                    }
                    None => {
                        row.cols.push(col);
                        row.d1.push(cj[1] / h);
                        row.d2.push(cj[2] / (h * h));
                    }
                }
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(rows: &[StencilRow], f: &[f64], second: bool) -> Vec<f64> {
        rows.iter()
            .map(|r| {
                let w = if second { &r.d2 } else { &r.d1 };
                r.cols.iter().zip(w).map(|(&c, wi)| wi * f[c]).sum()
            })
            .collect()
    }

    #[test]
    fn calibration_for_several_exponents() {
        for &alpha in &[0.0, 0.5, 1.0, 3.25, 6.5] {
            for &scale in &[1.0, 0.37, 2.5] {
                let s_max = basis_x_max(alpha, 12).sqrt();
                let g = RadialGrid::new(alpha, scale, s_max, &GridOptions::default()).unwrap();
                assert!(g.calibration_error() < 1e-12, "alpha={alpha} scale={scale}: {}", g.calibration_error());
            }
        }
    }

    #[test]
    fn points_increase_from_positive() {
        let g = RadialGrid::new(1.0, 2.0, 10.0, &GridOptions { npoints: 64, ..Default::default() }).unwrap();
        assert!(g.points()[0] > 0.0);
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.npoints(), 64);
    }

    #[test]
    fn stencils_differentiate_even_functions_through_the_origin() {
        let g = RadialGrid::new(0.0, 1.0, 8.0, &GridOptions { npoints: 1024, ..Default::default() }).unwrap();
        let f: Vec<f64> = g.s_nodes().iter().map(|s| (-s * s).exp()).collect();
        let d1 = apply(g.stencils(), &f, false);
        let d2 = apply(g.stencils(), &f, true);
        for (i, s) in g.s_nodes().iter().enumerate().take(200) {
            let e = (-s * s).exp();
            assert!((d1[i] + 2.0 * s * e).abs() < 1e-7);
            assert!((d2[i] - (4.0 * s * s - 2.0) * e).abs() < 1e-7);
        }
    }

    #[test]
    fn rejects_bad_options() {
        let bad = [
            GridOptions { npoints: 8, ..Default::default() },
            GridOptions { fd_order: 3, ..Default::default() },
            GridOptions { rmax_scale: 0.0, ..Default::default() },
        ];
        for o in bad {
            assert!(RadialGrid::new(0.0, 1.0, 10.0, &o).is_err());
        }
    }

    #[test]
    fn coherent_radius_grows_with_xi() {
        let a = coherent_x_max(1.0, 0.2);
        let b = coherent_x_max(1.0, 0.8);
        assert!(b > a);
        let c = (1.0 - 0.8) / 1.8;
        let f = |x: f64| x.ln() - c * x;
        assert!(f(b) <= f(1.0 / c) - 46.0 + 1e-9);
    }
}
