//! Closed-form energies, their algebraic inversion and the AC-phase periodicity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{algebra_params, AlgebraParams, OscillatorConfig, Spacetime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Particle,
    Antiparticle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub n_r: usize,
    pub n_s: usize,
    pub branch: Branch,
    pub value: f64,
}

/// Both branches of one radial level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPair {
    pub n_r: usize,
    pub n_s: usize,
    pub e_plus: f64,
    pub e_minus: f64,
}

impl EnergyPair {
    pub fn levels(&self) -> [EnergyLevel; 2] {
        [
            EnergyLevel { n_r: self.n_r, n_s: self.n_s, branch: Branch::Particle, value: self.e_plus },
            EnergyLevel { n_r: self.n_r, n_s: self.n_s, branch: Branch::Antiparticle, value: self.e_minus },
        ]
    }

    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Particle => self.e_plus,
            Branch::Antiparticle => self.e_minus,
        }
    }
}

/// n_s = n_r + (1 − s)/2.
pub fn shifted_index(n_r: usize, s: i32) -> usize {
    if s < 0 {
        n_r + 1
    } else {
        n_r
    }
}

/// n_s + |Γ|/2 − Γ/2.
pub fn bracket(p: &AlgebraParams, n_r: usize) -> f64 {
    shifted_index(n_r, p.s) as f64 + p.gamma_eff.abs() / 2.0 - p.gamma_eff / 2.0
}

/// E± = μB_eff ± √(m₀² + 4m₀|ω̄|·bracket).
pub fn energies(p: &AlgebraParams, n_r: usize) -> Result<EnergyPair> {
    p.require_frequency()?;
    let root = (p.m0 * p.m0 + 4.0 * p.scale() * bracket(p, n_r)).sqrt();
    Ok(EnergyPair {
        n_r,
        n_s: shifted_index(n_r, p.s),
        e_plus: p.mu_b_eff + root,
        e_minus: p.mu_b_eff - root,
    })
}

pub fn energy_ms(cfg: &OscillatorConfig, n_r: usize) -> Result<EnergyPair> {
    if cfg.spacetime() != Spacetime::Minkowski {
        return Err(Error::WrongSpacetime { operation: "energy_ms", expected: "Minkowski" });
    }
    energies(&algebra_params(cfg), n_r)
}

pub fn energy_css(cfg: &OscillatorConfig, n_r: usize) -> Result<EnergyPair> {
    if cfg.spacetime() != Spacetime::CosmicString {
        return Err(Error::WrongSpacetime { operation: "energy_css", expected: "CosmicString" });
    }
    energies(&algebra_params(cfg), n_r)
}

/// Dispatches on the configured spacetime.
pub fn energy(cfg: &OscillatorConfig, n_r: usize) -> Result<EnergyPair> {
    energies(&algebra_params(cfg), n_r)
}

/// Constant c with B₃′ = B₃ + c, where B₃ acts on the Sturmian functions as
/// (μB_eff − E)²/(4m₀|ω̄|): c = (Γ_eff + s)/2 − m₀/(4|ω̄|).
pub fn b3_offset(p: &AlgebraParams) -> f64 {
    (p.gamma_eff + f64::from(p.s)) / 2.0 - p.m0 / (4.0 * p.omega_bar.abs())
}

/// The same constant written through m_l and Φ_AC,
/// 1/4 − m₀/(4|ω̄|) + m_l/(2η) + Φ_AC/(2πη). Agrees with [`b3_offset`] only for s = +1.
pub fn b3_offset_explicit(cfg: &OscillatorConfig) -> f64 {
    let w = cfg.omega_bar().abs();
    let eta = cfg.eta();
    (w * eta * PI - cfg.m0() * eta * PI + 2.0 * w * cfg.ml().value() * PI + 2.0 * w * cfg.phi_ac())
        / (4.0 * PI * eta * w)
}

/// Energies from n + k = (μB_eff − E)²/(4m₀|ω̄|) + c, solved for E.
pub fn spectrum_from_b3(cfg: &OscillatorConfig, n_r: usize) -> Result<EnergyPair> {
    let p = algebra_params(cfg);
    p.require_frequency()?;
    let q = n_r as f64 + p.k;
    energy_from_b3_eigenvalue(&p, n_r, q)
}

/// Energies implied by a B₃′ eigenvalue q (exact: k + n_r).
pub fn energy_from_b3_eigenvalue(p: &AlgebraParams, n_r: usize, q: f64) -> Result<EnergyPair> {
    p.require_frequency()?;
    let sq = 4.0 * p.scale() * (q - b3_offset(p));
    if sq < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "B3' eigenvalue {q} implies a negative (muB - E)^2 = {sq}"
        )));
    }
    let root = sq.sqrt();
    Ok(EnergyPair {
        n_r,
        n_s: shifted_index(n_r, p.s),
        e_plus: p.mu_b_eff + root,
        e_minus: p.mu_b_eff - root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub phi_ac: f64,
    pub n_r: usize,
    pub s: i32,
    pub e_plus: f64,
    pub e_minus: f64,
}

/// Comparison of E(Φ ± 2π; m_l) with E(Φ; m_l ± 2s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityRow {
    pub phi_ac: f64,
    /// +1 for Φ + 2π, −1 for Φ − 2π.
    pub direction: i32,
    /// Shift of the ml numerator that compensates the phase step (±4s, i.e. m_l ± 2s).
    pub ml_numerator_shift: i32,
    pub e_phase_shifted: f64,
    pub e_ml_shifted: f64,
    pub residual: f64,
    /// Same comparison with the unit shift m_l ± 1 instead of m_l ± 2s.
    pub unit_shift_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSweep {
    pub rows: Vec<SweepRow>,
    pub periodicity: Vec<PeriodicityRow>,
}

impl PhaseSweep {
    pub fn all_periodic(&self) -> bool {
        self.periodicity.iter().all(|r| r.pass)
    }
}

/// Tolerance for energies that agree up to rounding in Γ_eff.
pub fn periodicity_tolerance(e: f64) -> f64 {
    16.0 * f64::EPSILON * e.abs().max(1.0)
}

pub fn phase_sweep(cfg: &OscillatorConfig, n_r: usize, phi_grid: &[f64]) -> Result<PhaseSweep> {
    let s = cfg.spin().sign();
    let mut rows = Vec::with_capacity(phi_grid.len());
    let mut periodicity = Vec::with_capacity(2 * phi_grid.len());
    for &phi in phi_grid {
        if !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("phase grid value {phi} is not finite")));
        }
        let here = cfg.with_phi_ac(phi)?;
        let e = energy(&here, n_r)?;
        rows.push(SweepRow { phi_ac: phi, n_r, s, e_plus: e.e_plus, e_minus: e.e_minus });
        for direction in [1, -1] {
            let stepped = energy(&cfg.with_phi_ac(phi + f64::from(direction) * 2.0 * PI)?, n_r)?;
            let shifted = energy(&here.with_ml(here.ml().shifted(2 * s * direction))?, n_r)?;
            let unit = energy(&here.with_ml(here.ml().shifted(direction))?, n_r)?;
            let residual = (stepped.e_plus - shifted.e_plus)
                .abs()
                .max((stepped.e_minus - shifted.e_minus).abs());
            let unit_shift_residual =
                (stepped.e_plus - unit.e_plus).abs().max((stepped.e_minus - unit.e_minus).abs());
            periodicity.push(PeriodicityRow {
                phi_ac: phi,
                direction,
                ml_numerator_shift: 4 * s * direction,
                e_phase_shifted: stepped.e_plus,
                e_ml_shifted: shifted.e_plus,
                residual,
                unit_shift_residual,
                pass: residual <= periodicity_tolerance(stepped.e_plus),
            });
        }
    }
    Ok(PhaseSweep { rows, periodicity })
}
