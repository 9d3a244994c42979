//! Matrix elements in the Sturmian basis, generator expectation values in
//! coherent states and the Schrödinger uncertainty relation.
//!
//! In the basis where B₊φ_n = +√((n+1)(2k+n))φ_{n+1}:
//!
//! * ρ² = (2B₃′ − B₊ − B₋)/(m₀|ω̄|)
//! * ρ d/dρ = B₊ − B₋ − 1

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::{algebra_params, AlgebraParams, OscillatorConfig};
use crate::radial::basis::{rho_derivatives, sturmian_basis};
use crate::radial::grid::RadialGrid;
use crate::su11::{displacement_converged, interior, ladder_up_coeff, TruncatedRep};

/// Tridiagonal ⟨m|ρ²|n⟩ for m, n ≤ nmax.
pub fn rho2_matrix(p: &AlgebraParams, nmax: usize) -> Result<DMatrix<f64>> {
    p.require_frequency()?;
    let a = p.scale();
    let dim = nmax + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = 2.0 * (p.k + n as f64) / a;
        if n + 1 < dim {
            let q = -ladder_up_coeff(p.k, n) / a;
            m[(n + 1, n)] = q;
            m[(n, n + 1)] = q;
        }
    }
    Ok(m)
}

pub fn rho2_elements(cfg: &OscillatorConfig, nmax: usize) -> Result<DMatrix<f64>> {
    rho2_matrix(&algebra_params(cfg), nmax)
}

/// ⟨m|ρ d/dρ|n⟩ for m, n ≤ nmax.
pub fn rho_ddrho_matrix(p: &AlgebraParams, nmax: usize) -> Result<DMatrix<f64>> {
    p.require_frequency()?;
    let dim = nmax + 1;
    let mut m = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = -1.0;
        if n + 1 < dim {
            let q = ladder_up_coeff(p.k, n);
            m[(n + 1, n)] = q;
            m[(n, n + 1)] = -q;
        }
    }
    Ok(m)
}

pub fn rho_ddrho_elements(cfg: &OscillatorConfig, nmax: usize) -> Result<DMatrix<f64>> {
    rho_ddrho_matrix(&algebra_params(cfg), nmax)
}

/// ⟨φ_m, ρ² φ_n⟩ by quadrature.
pub fn rho2_quadrature(p: &AlgebraParams, nmax: usize, grid: &RadialGrid) -> Result<DMatrix<f64>> {
    let basis = sturmian_basis(p, nmax, grid)?;
    let r2: Vec<f64> = grid.points().iter().map(|r| r * r).collect();
    let weighted: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| b.values.iter().zip(&r2).map(|(v, r)| v * r).collect())
        .collect();
    Ok(DMatrix::from_fn(nmax + 1, nmax + 1, |m, n| grid.inner(&basis[m].values, &weighted[n])))
}

/// ⟨φ_m, ρ dφ_n/dρ⟩ by quadrature of the analytic derivative.
pub fn rho_ddrho_quadrature(p: &AlgebraParams, nmax: usize, grid: &RadialGrid) -> Result<DMatrix<f64>> {
    let basis = sturmian_basis(p, nmax, grid)?;
    let d = rho_derivatives(p, nmax, grid)?;
    Ok(DMatrix::from_fn(nmax + 1, nmax + 1, |m, n| grid.inner(&basis[m].values, &d[n])))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorExpectations {
    pub kplus: Complex64,
    pub kminus: Complex64,
    pub kthree: f64,
}

/// z/|z|, taken as 1 at z = 0 where every term it multiplies vanishes.
fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// ⟨K₊⟩ = (z̄/|z|)·sinh(2|z|)·k, ⟨K₋⟩ = conj, ⟨K₃⟩ = k·cosh(2|z|).
pub fn generator_expectations(k: f64, z: Complex64) -> GeneratorExpectations {
    let r = z.norm();
    let u = unit_phase(z);
    let kplus = u.conj() * ((2.0 * r).sinh() * k);
    GeneratorExpectations { kplus, kminus: kplus.conj(), kthree: k * (2.0 * r).cosh() }
}

/// Expectations in the column D(z)|k,0⟩ of a converged displacement matrix.
pub fn generator_expectations_oracle(k: f64, z: Complex64) -> Result<GeneratorExpectations> {
    let d = displacement_converged(k, z)?;
    let v = d.matrix.column(0).into_owned();
    let ev = |m: &DMatrix<Complex64>| v.dotc(&(m * &v));
    Ok(GeneratorExpectations {
        kplus: ev(&d.rep.kplus),
        kminus: ev(&d.rep.kminus),
        kthree: ev(&d.rep.kthree).re,
    })
}

/// Right-hand sides of D†K₊D, D†K₋D, D†K₃D built from the truncated generators.
pub struct Similarity {
    pub kplus: DMatrix<Complex64>,
    pub kminus: DMatrix<Complex64>,
    pub kthree: DMatrix<Complex64>,
}

/// With α = sinh 2|z| and β = sinh²|z| = (cosh 2|z| − 1)/2:
///
/// * D†K₊D = (z̄/|z|)αK₃ + β(K₊ + (z̄/z)K₋) + K₊
/// * D†K₋D = (z/|z|)αK₃ + β(K₋ + (z/z̄)K₊) + K₋
/// * D†K₃D = (2β+1)K₃ + (αz/(2|z|))K₊ + (αz̄/(2|z|))K₋
pub fn similarity_closed_form(rep: &TruncatedRep, z: Complex64) -> Similarity {
    let r = z.norm();
    let u = unit_phase(z);
    let alpha = (2.0 * r).sinh();
    let beta = r.sinh().powi(2);
    let c = |x: f64| Complex64::new(x, 0.0);
    let u2 = u * u;
    let kplus = &rep.kthree * (u.conj() * alpha) + (&rep.kplus + &rep.kminus * u2.conj()) * c(beta) + &rep.kplus;
    let kminus = &rep.kthree * (u * alpha) + (&rep.kminus + &rep.kplus * u2) * c(beta) + &rep.kminus;
    let kthree = &rep.kthree * c(2.0 * beta + 1.0) + &rep.kplus * (u * (alpha / 2.0)) + &rep.kminus * (u.conj() * (alpha / 2.0));
    Similarity { kplus, kminus, kthree }
}

/// Largest entrywise deviation between D†K_iD and the closed forms over the
/// leading `block`×`block` entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityCheck {
    pub dim: usize,
    pub block: usize,
    pub kplus: f64,
    pub kminus: f64,
    pub kthree: f64,
}

impl SimilarityCheck {
    pub fn max(&self) -> f64 {
        self.kplus.max(self.kminus).max(self.kthree)
    }
}

pub fn similarity_oracle(k: f64, z: Complex64, block: usize) -> Result<SimilarityCheck> {
    let d = crate::su11::displacement_with_min_dim(k, z, 64.max(4 * block))?;
    let dd = d.matrix.adjoint();
    let closed = similarity_closed_form(&d.rep, z);
    let dev = |op: &DMatrix<Complex64>, cf: &DMatrix<Complex64>| {
        let conj = &dd * op * &d.matrix;
        interior(&(conj - cf), block).iter().map(|v| v.norm()).fold(0.0, f64::max)
    };
    Ok(SimilarityCheck {
        dim: d.rep.dim,
        block,
        kplus: dev(&d.rep.kplus, &closed.kplus),
        kminus: dev(&d.rep.kminus, &closed.kminus),
        kthree: dev(&d.rep.kthree, &closed.kthree),
    })
}

/// Quadratic deviations of X = K₊ + K₋ and Y = i(K₊ − K₋), the correlation
/// F = ½⟨{X,Y}⟩ − ⟨X⟩⟨Y⟩ and C = −i[X,Y].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyTerms {
    pub dx2: f64,
    pub dy2: f64,
    pub f: f64,
    pub c: f64,
}

impl UncertaintyTerms {
    pub fn lhs(&self) -> f64 {
        self.dx2 * self.dy2
    }

    pub fn rhs(&self) -> f64 {
        self.f * self.f + 0.25 * self.c * self.c
    }
}

/// Closed forms with λ = sinh²|z|, λ² + λ = ¼sinh²2|z| and θ = arg z.
pub fn uncertainty_closed_form(k: f64, z: Complex64) -> UncertaintyTerms {
    let r = z.norm();
    let lambda = r.sinh().powi(2);
    let mu = lambda * lambda + lambda;
    let u = unit_phase(z);
    // z̄/z + z/z̄ = 2cos 2θ, and sin 2θ = Im(z²)/|z|².
    let cos2 = (u * u).re;
    let sin2 = (u * u).im;
    UncertaintyTerms {
        dx2: 2.0 * k * ((2.0 + 2.0 * cos2) * mu + 1.0),
        dy2: 2.0 * k * ((2.0 - 2.0 * cos2) * mu + 1.0),
        f: k * (2.0 * r).sinh().powi(2) * sin2,
        c: 4.0 * k * (2.0 * lambda + 1.0),
    }
}

/// The same quantities from the converged displacement matrix.
pub fn uncertainty_oracle(k: f64, z: Complex64) -> Result<UncertaintyTerms> {
    let d = displacement_converged(k, z)?;
    let v = d.matrix.column(0).into_owned();
    let i = Complex64::new(0.0, 1.0);
    let x = &d.rep.kplus + &d.rep.kminus;
    let y = (&d.rep.kplus - &d.rep.kminus) * i;
    let xv = &x * &v;
    let yv = &y * &v;
    let mean_x = v.dotc(&xv).re;
    let mean_y = v.dotc(&yv).re;
    let xy = xv.dotc(&yv);
    Ok(UncertaintyTerms {
        dx2: xv.dotc(&xv).re - mean_x * mean_x,
        dy2: yv.dotc(&yv).re - mean_y * mean_y,
        f: xy.re - mean_x * mean_y,
        // −i(⟨Xv,Yv⟩ − ⟨Yv,Xv⟩) = 2 Im⟨Xv,Yv⟩
        c: 2.0 * xy.im,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub k: f64,
    pub z: Complex64,
    pub dx2: f64,
    pub dy2: f64,
    pub f: f64,
    pub c: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub oracle: UncertaintyTerms,
    /// Largest relative deviation of the oracle from the closed forms, over
    /// (ΔX)², (ΔY)², ⟨F⟩, ⟨C⟩, lhs and rhs (scaled by max(1, |closed form|)).
    pub oracle_deviation: f64,
    /// |lhs − rhs| of the oracle, relative to its rhs.
    pub oracle_residual: f64,
}

impl UncertaintyReport {
    /// lhs ≥ rhs up to 1e−9.
    pub fn satisfies_relation(&self) -> bool {
        self.residual >= -1e-9
    }

    /// |lhs − rhs| ≤ 1e−9·|rhs|.
    pub fn is_minimal(&self) -> bool {
        self.residual.abs() <= 1e-9 * self.rhs.abs()
    }
}

pub fn uncertainty_report(k: f64, z: Complex64) -> Result<UncertaintyReport> {
    let cf = uncertainty_closed_form(k, z);
    let oracle = uncertainty_oracle(k, z)?;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let oracle_deviation = [
        rel(oracle.dx2, cf.dx2),
        rel(oracle.dy2, cf.dy2),
        rel(oracle.f, cf.f),
        rel(oracle.c, cf.c),
        rel(oracle.lhs(), cf.lhs()),
        rel(oracle.rhs(), cf.rhs()),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(UncertaintyReport {
        k,
        z,
        dx2: cf.dx2,
        dy2: cf.dy2,
        f: cf.f,
        c: cf.c,
        lhs: cf.lhs(),
        rhs: cf.rhs(),
        residual: cf.lhs() - cf.rhs(),
        oracle,
        oracle_deviation,
        oracle_residual: (oracle.lhs() - oracle.rhs()).abs() / oracle.rhs().abs(),
    })
}
