//! Finite-difference realizations of B±, B₃′, B₃ and H_r.
//!
//! With s = √(m₀|ω̄|)·ρ and φ = s^α·g, the generators act on g as
//!
//! * B₃′g = −¼[g'' + ((2α+1)/s)g' − s²g]
//! * B±g = B₃′g − (s²/2)g ± ((α+1)g + s g')/2
//!
//! and B₃ = B₃′ − c, H_r = 4m₀|ω̄|·B₃′ with c from [`crate::spectrum::b3_offset`].
//! The stored matrices act on φ samples; the s^α conjugation is folded into
//! the entries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::basis::{basis_unchecked, SturmianFunction};
use super::grid::RadialGrid;
use crate::error::{Error, Result};
use crate::params::{algebra_params, AlgebraParams, OscillatorConfig, Spacetime};
use crate::report::VerificationReport;
use crate::spectrum::{b3_offset, energy_from_b3_eigenvalue, EnergyPair};
use crate::su11::{casimir_eigenvalue, ladder_down_coeff, ladder_up_coeff};

/// Residual threshold for the grid realization of the algebra.
pub const ALGEBRA_TOL: f64 = 1e-5;
/// Threshold for adjointness and symmetry under the ρ dρ inner product.
pub const ADJOINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Raising,
    Lowering,
    /// B₃′ (T₃′), eigenvalue k + n.
    Weight,
    /// B₃ (T₃), eigenvalue (μB_eff − E)²/(4m₀|ω̄|).
    Shifted,
    Hamiltonian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorLabel {
    Bplus1,
    Bminus1,
    Bplus2,
    Bminus2,
    B3,
    B3prime,
    Splus1,
    Sminus1,
    Splus2,
    Sminus2,
    T3,
    T3prime,
    Hr,
}

impl OperatorLabel {
    pub const ALL: [OperatorLabel; 13] = [
        OperatorLabel::Bplus1,
        OperatorLabel::Bminus1,
        OperatorLabel::Bplus2,
        OperatorLabel::Bminus2,
        OperatorLabel::B3,
        OperatorLabel::B3prime,
        OperatorLabel::Splus1,
        OperatorLabel::Sminus1,
        OperatorLabel::Splus2,
        OperatorLabel::Sminus2,
        OperatorLabel::T3,
        OperatorLabel::T3prime,
        OperatorLabel::Hr,
    ];

    pub fn kind(self) -> GeneratorKind {
        use OperatorLabel::*;
        match self {
            Bplus1 | Bplus2 | Splus1 | Splus2 => GeneratorKind::Raising,
            Bminus1 | Bminus2 | Sminus1 | Sminus2 => GeneratorKind::Lowering,
            B3prime | T3prime => GeneratorKind::Weight,
            B3 | T3 => GeneratorKind::Shifted,
            Hr => GeneratorKind::Hamiltonian,
        }
    }

    /// Spacetime the label belongs to; `None` for H_r.
    pub fn spacetime(self) -> Option<Spacetime> {
        use OperatorLabel::*;
        match self {
            Bplus1 | Bminus1 | Bplus2 | Bminus2 | B3 | B3prime => Some(Spacetime::Minkowski),
            Splus1 | Sminus1 | Splus2 | Sminus2 | T3 | T3prime => Some(Spacetime::CosmicString),
            Hr => None,
        }
    }

    /// Spin projection required by indexed ladder labels (1 ↔ s=+1, 2 ↔ s=−1).
    pub fn spin(self) -> Option<i32> {
        use OperatorLabel::*;
        match self {
            Bplus1 | Bminus1 | Splus1 | Sminus1 => Some(1),
            Bplus2 | Bminus2 | Splus2 | Sminus2 => Some(-1),
            _ => None,
        }
    }

    /// Label of the given kind for a spacetime and spin.
    pub fn for_kind(kind: GeneratorKind, spacetime: Spacetime, s: i32) -> Self {
        use OperatorLabel::*;
        let ms = spacetime == Spacetime::Minkowski;
        let up = s > 0;
        match (kind, ms, up) {
            (GeneratorKind::Raising, true, true) => Bplus1,
            (GeneratorKind::Raising, true, false) => Bplus2,
            (GeneratorKind::Raising, false, true) => Splus1,
            (GeneratorKind::Raising, false, false) => Splus2,
            (GeneratorKind::Lowering, true, true) => Bminus1,
            (GeneratorKind::Lowering, true, false) => Bminus2,
            (GeneratorKind::Lowering, false, true) => Sminus1,
            (GeneratorKind::Lowering, false, false) => Sminus2,
            (GeneratorKind::Weight, true, _) => B3prime,
            (GeneratorKind::Weight, false, _) => T3prime,
            (GeneratorKind::Shifted, true, _) => B3,
            (GeneratorKind::Shifted, false, _) => T3,
            (GeneratorKind::Hamiltonian, _, _) => Hr,
        }
    }
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for OperatorLabel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        use OperatorLabel::*;
        let label = match text {
            "Bplus1" => Bplus1,
            "Bminus1" => Bminus1,
            "Bplus2" => Bplus2,
            "Bminus2" => Bminus2,
            "B3" => B3,
            "B3prime" => B3prime,
            "Splus1" | "Tplus1" => Splus1,
            "Sminus1" | "Tminus1" => Sminus1,
            "Splus2" | "Tplus2" => Splus2,
            "Sminus2" | "Tminus2" => Sminus2,
            "T3" => T3,
            "T3prime" => T3prime,
            "Hr" => Hr,
            other => return Err(Error::UnknownLabel(other.to_string())),
        };
        Ok(label)
    }
}

/// Sparse matrix acting on φ samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedOperator {
    pub label: Option<OperatorLabel>,
    pub kind: GeneratorKind,
    pub order: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl DiscretizedOperator {
    pub fn dim(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.dim(), "operator and vector sizes differ");
        (0..self.dim())
            .map(|i| {
                let (a, b) = (self.indptr[i], self.indptr[i + 1]);
                self.indices[a..b].iter().zip(&self.values[a..b]).map(|(&j, w)| w * f[j]).sum()
            })
            .collect()
    }

    /// Stored entries of row `i` as (column, value).
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.indptr[i], self.indptr[i + 1]);
        self.indices[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }
}

/// Realization of one generator for the given algebra parameters.
pub fn build_generator(p: &AlgebraParams, grid: &RadialGrid, kind: GeneratorKind) -> Result<DiscretizedOperator> {
    p.require_frequency()?;
    grid.require_match(p)?;
    let alpha = p.alpha();
    let s = grid.s_nodes();
    let shift = b3_offset(p);
    let mut indptr = Vec::with_capacity(s.len() + 1);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    indptr.push(0);
    for (i, row) in grid.stencils().iter().enumerate() {
        let si = s[i];
        for ((&j, &d1), &d2) in row.cols.iter().zip(&row.d1).zip(&row.d2) {
            // B₃′ on g.
            let mut v = -0.25 * (d2 + (2.0 * alpha + 1.0) / si * d1);
            let mut diag = 0.25 * si * si;
            let sign = match kind {
                GeneratorKind::Raising => 1.0,
                GeneratorKind::Lowering => -1.0,
                _ => 0.0,
            };
            if sign != 0.0 {
                v += sign * 0.5 * si * d1;
                diag += -0.5 * si * si + sign * 0.5 * (alpha + 1.0);
            }
            if kind == GeneratorKind::Shifted {
                diag -= shift;
            }
            if j == i {
                v += diag;
            }
            if kind == GeneratorKind::Hamiltonian {
                v *= 4.0 * p.scale();
            }
            // φ = s^α g.
            let fold = if alpha == 0.0 { 1.0 } else { (si / s[j]).powf(alpha) };
            indices.push(j);
            values.push(v * fold);
        }
        indptr.push(indices.len());
    }
    Ok(DiscretizedOperator { label: None, kind, order: grid.fd_order(), indptr, indices, values })
}

/// Realization of a named operator; the label must fit the configuration's
/// spacetime and spin.
pub fn build_operator(cfg: &OscillatorConfig, grid: &RadialGrid, label: OperatorLabel) -> Result<DiscretizedOperator> {
    if let Some(st) = label.spacetime() {
        if st != cfg.spacetime() {
            return Err(Error::WrongSpacetime {
                operation: "build_operator",
                expected: if st == Spacetime::Minkowski { "Minkowski" } else { "CosmicString" },
            });
        }
    }
    if let Some(s) = label.spin() {
        if s != cfg.spin().sign() {
            return Err(Error::InvalidArgument(format!(
                "operator {label} belongs to s = {s}, configuration has s = {}",
                cfg.spin().sign()
            )));
        }
    }
    let mut op = build_generator(&algebra_params(cfg), grid, label.kind())?;
    op.label = Some(label);
    Ok(op)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn axpy(y: &[f64], c: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(yi, xi)| yi - c * xi).collect()
}

struct Generators {
    raise: DiscretizedOperator,
    lower: DiscretizedOperator,
    weight: DiscretizedOperator,
}

fn generators(p: &AlgebraParams, grid: &RadialGrid) -> Result<Generators> {
    Ok(Generators {
        raise: build_generator(p, grid, GeneratorKind::Raising)?,
        lower: build_generator(p, grid, GeneratorKind::Lowering)?,
        weight: build_generator(p, grid, GeneratorKind::Weight)?,
    })
}

/// Algebra, Casimir, ladder and adjointness residuals on φ_0 … φ_nmax.
///
/// Does not gate on the grid calibration, so a coarse grid reports large
/// residuals instead of an error.
pub fn verify_algebra_params(p: &AlgebraParams, grid: &RadialGrid, nmax: usize) -> Result<VerificationReport> {
    let g = generators(p, grid)?;
    let basis: Vec<SturmianFunction> = basis_unchecked(p, nmax + 1, grid);
    let k = p.k;
    let cas = casimir_eigenvalue(k);
    let mut worst = [(0.0f64, 0usize); 7];
    let mut bump = |slot: usize, value: f64, n: usize| {
        if !(value <= worst[slot].0) {
            worst[slot] = (value, n);
        }
    };
    let mut raised = Vec::with_capacity(nmax + 1);
    let mut lowered = Vec::with_capacity(nmax + 1);
    let mut weighted = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let phi = &basis[n].values;
        let bp = g.raise.apply(phi);
        let bm = g.lower.apply(phi);
        let b3 = g.weight.apply(phi);

        let c1 = sub(&sub(&g.weight.apply(&bp), &g.raise.apply(&b3)), &bp);
        bump(0, grid.residual_norm(&c1), n);

        let c2 = axpy(&sub(&g.lower.apply(&bp), &g.raise.apply(&bm)), 2.0, &b3);
        bump(1, grid.residual_norm(&c2), n);

        let pm = g.raise.apply(&bm);
        let mp = g.lower.apply(&bp);
        let b33 = g.weight.apply(&b3);
        let casimir: Vec<f64> = (0..phi.len())
            .map(|j| b33[j] - 0.5 * (pm[j] + mp[j]) - cas * phi[j])
            .collect();
        bump(2, grid.residual_norm(&casimir), n);

        bump(3, grid.residual_norm(&axpy(&b3, k + n as f64, phi)), n);
        bump(4, grid.residual_norm(&axpy(&bp, ladder_up_coeff(k, n), &basis[n + 1].values)), n);
        let down = if n == 0 {
            bm.clone()
        } else {
            axpy(&bm, ladder_down_coeff(k, n), &basis[n - 1].values)
        };
        bump(5, grid.residual_norm(&down), n);
        raised.push(bp);
        lowered.push(bm);
        weighted.push(b3);
    }
    for m in 0..=nmax {
        for n in 0..=nmax {
            let adj = (grid.inner(&raised[m], &basis[n].values) - grid.inner(&basis[m].values, &lowered[n])).abs();
            let sym = (grid.inner(&weighted[m], &basis[n].values) - grid.inner(&basis[m].values, &weighted[n])).abs();
            bump(6, adj.max(sym), m * (nmax + 1) + n);
        }
    }
    let names = [
        "commutator [B3',B+] - B+",
        "commutator [B-,B+] - 2B3'",
        "casimir C^2 - k(k-1)",
        "weight B3' - (k+n)",
        "ladder B+ - Q+",
        "ladder B- - Q-",
        "adjointness",
    ];
    let mut report = VerificationReport::new();
    for (slot, name) in names.iter().enumerate() {
        let (value, at) = worst[slot];
        let (threshold, detail) = if slot == 6 {
            (ADJOINT_TOL, format!("worst at (m, n) = ({}, {})", at / (nmax + 1), at % (nmax + 1)))
        } else {
            (ALGEBRA_TOL, format!("worst at n = {at}, nmax = {nmax}"))
        };
        report.record_detail(*name, value, threshold, detail);
    }
    Ok(report)
}

pub fn verify_algebra(cfg: &OscillatorConfig, grid: &RadialGrid, nmax: usize) -> Result<VerificationReport> {
    verify_algebra_params(&algebra_params(cfg), grid, nmax)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayleighEnergy {
    pub n_r: usize,
    /// ⟨φ_n, H_r φ_n⟩.
    pub hr_expectation: f64,
    /// ⟨φ_n, B₃′ φ_n⟩ = ⟨H_r⟩/(4m₀|ω̄|).
    pub b3prime_expectation: f64,
    /// ⟨φ_n, B₃ φ_n⟩ = (μB_eff − E)²/(4m₀|ω̄|).
    pub b3_expectation: f64,
    pub energies: EnergyPair,
}

/// Energies from the Rayleigh quotient of H_r on φ_{n_r}.
pub fn rayleigh_energy(cfg: &OscillatorConfig, n_r: usize, grid: &RadialGrid) -> Result<RayleighEnergy> {
    let p = algebra_params(cfg);
    p.require_frequency()?;
    grid.require_match(&p)?;
    grid.check_calibration()?;
    let basis = basis_unchecked(&p, n_r, grid);
    let phi = &basis[n_r].values;
    let hr = build_generator(&p, grid, GeneratorKind::Hamiltonian)?;
    let hr_expectation = grid.inner(phi, &hr.apply(phi));
    let q = hr_expectation / (4.0 * p.scale());
    Ok(RayleighEnergy {
        n_r,
        hr_expectation,
        b3prime_expectation: q,
        b3_expectation: q - b3_offset(&p),
        energies: energy_from_b3_eigenvalue(&p, n_r, q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ConfigFile;
    use crate::radial::grid::GridOptions;
    use crate::spectrum::energy;

    fn cfg(ml_numerator: i32, s: i32) -> OscillatorConfig {
        ConfigFile { ml_numerator, s, omega: 1.2, omega_ac: 0.4, m0: 0.9, ..ConfigFile::default() }
            .validate()
            .unwrap()
    }

    #[test]
    fn label_parsing() {
        for l in OperatorLabel::ALL {
            assert_eq!(l.to_string().parse::<OperatorLabel>().unwrap(), l);
        }
        assert_eq!("Tplus2".parse::<OperatorLabel>().unwrap(), OperatorLabel::Splus2);
        assert!(matches!("Bplus3".parse::<OperatorLabel>(), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn label_must_fit_configuration() {
        let c = cfg(1, 1);
        let p = algebra_params(&c);
        let g = RadialGrid::for_basis(&p, 3, &GridOptions { npoints: 256, ..Default::default() }).unwrap();
        assert!(build_operator(&c, &g, OperatorLabel::Bplus1).is_ok());
        assert!(build_operator(&c, &g, OperatorLabel::Bplus2).is_err());
        assert!(matches!(
            build_operator(&c, &g, OperatorLabel::T3prime),
            Err(Error::WrongSpacetime { .. })
        ));
    }

    #[test]
    fn algebra_closes_on_default_grid() {
        for (ml, s) in [(1, 1), (-1, 1), (-1, -1), (7, -1)] {
            let c = cfg(ml, s);
            let p = algebra_params(&c);
            let g = RadialGrid::for_basis(&p, 9, &GridOptions::default()).unwrap();
            let r = verify_algebra(&c, &g, 8).unwrap();
            assert!(r.passed(), "{:#?}", r);
        }
    }

    #[test]
    fn rayleigh_matches_closed_form() {
        for (ml, s) in [(1, 1), (-1, -1), (-5, 1)] {
            let c = cfg(ml, s);
            let p = algebra_params(&c);
            let g = RadialGrid::for_basis(&p, 5, &GridOptions::default()).unwrap();
            for n in 0..=5 {
                let r = rayleigh_energy(&c, n, &g).unwrap();
                let e = energy(&c, n).unwrap();
                assert!(((r.energies.e_plus - e.e_plus) / e.e_plus).abs() < 1e-6);
                assert!((r.b3prime_expectation - (p.k + n as f64)).abs() < 1e-6);
            }
        }
    }
}
