//! Physical parameters of the oscillator and the algebra data derived from them.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Background spacetime of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacetime {
    Minkowski,
    CosmicString,
}

impl fmt::Display for Spacetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spacetime::Minkowski => f.write_str("Minkowski"),
            Spacetime::CosmicString => f.write_str("CosmicString"),
        }
    }
}

/// Projection of the magnetic dipole moment on the z axis, s = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            other => Err(Error::InvalidConfig(format!("s must be +1 or -1, got {other}"))),
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn signf(self) -> f64 {
        f64::from(self.sign())
    }
}

/// A half-odd integer p/2 stored exactly through its odd numerator p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub fn new(numerator: i32) -> Result<Self> {
        if numerator.rem_euclid(2) != 1 {
            return Err(Error::InvalidConfig(format!(
                "ml_numerator must be odd (ml = p/2 with p odd), got {numerator}"
            )));
        }
        Ok(HalfInteger(numerator))
    }

    pub fn numerator(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Shifts by an integer amount: p/2 + n.
    pub fn shifted(self, n: i32) -> Self {
        HalfInteger(self.0 + 2 * n)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// On-disk configuration schema. Keys are exactly the field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub m0: f64,
    pub omega: f64,
    pub omega_ac: f64,
    pub phi_ac: f64,
    pub mu_moment: f64,
    pub b_field: f64,
    pub s: i32,
    pub ml_numerator: i32,
    pub eta: f64,
    pub spacetime: Spacetime,
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile {
            m0: 1.0,
            omega: 1.0,
            omega_ac: 0.0,
            phi_ac: 0.0,
            mu_moment: 0.0,
            b_field: 0.0,
            s: 1,
            ml_numerator: 1,
            eta: 1.0,
            spacetime: Spacetime::Minkowski,
        }
    }
}

impl ConfigFile {
    pub fn validate(self) -> Result<OscillatorConfig> {
        OscillatorConfig::try_from(self)
    }
}

/// Validated, immutable set of physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorConfig {
    m0: f64,
    omega: f64,
    omega_ac: f64,
    phi_ac: f64,
    mu_moment: f64,
    b_field: f64,
    s: Spin,
    ml: HalfInteger,
    eta: f64,
    spacetime: Spacetime,
}

impl TryFrom<ConfigFile> for OscillatorConfig {
    type Error = Error;

    fn try_from(c: ConfigFile) -> Result<Self> {
        let finite = [
            ("m0", c.m0),
            ("omega", c.omega),
            ("omega_ac", c.omega_ac),
            ("phi_ac", c.phi_ac),
            ("mu_moment", c.mu_moment),
            ("b_field", c.b_field),
            ("eta", c.eta),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite, got {v}")));
            }
        }
        if c.m0 <= 0.0 {
            return Err(Error::InvalidConfig(format!("m0 must be positive, got {}", c.m0)));
        }
        let omega_bar = c.omega - c.omega_ac / 2.0;
        if omega_bar < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "omega_bar = omega - omega_ac/2 must be >= 0, got {omega_bar}"
            )));
        }
        match c.spacetime {
            Spacetime::Minkowski if c.eta != 1.0 => {
                return Err(Error::InvalidConfig(format!(
                    "eta must be exactly 1 in Minkowski spacetime, got {}",
                    c.eta
                )));
            }
            Spacetime::CosmicString if !(c.eta > 0.0 && c.eta <= 1.0) => {
                return Err(Error::InvalidConfig(format!(
                    "eta must lie in (0, 1] for a cosmic string, got {}",
                    c.eta
                )));
            }
            _ => {}
        }
        Ok(OscillatorConfig {
            m0: c.m0,
            omega: c.omega,
            omega_ac: c.omega_ac,
            phi_ac: c.phi_ac,
            mu_moment: c.mu_moment,
            b_field: c.b_field,
            s: Spin::from_sign(c.s)?,
            ml: HalfInteger::new(c.ml_numerator)?,
            eta: c.eta,
            spacetime: c.spacetime,
        })
    }
}

impl OscillatorConfig {
    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            m0: self.m0,
            omega: self.omega,
            omega_ac: self.omega_ac,
            phi_ac: self.phi_ac,
            mu_moment: self.mu_moment,
            b_field: self.b_field,
            s: self.s.sign(),
            ml_numerator: self.ml.numerator(),
            eta: self.eta,
            spacetime: self.spacetime,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("malformed configuration JSON: {e}")))?;
        file.validate()
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn omega_ac(&self) -> f64 {
        self.omega_ac
    }
    pub fn phi_ac(&self) -> f64 {
        self.phi_ac
    }
    pub fn mu_moment(&self) -> f64 {
        self.mu_moment
    }
    pub fn b_field(&self) -> f64 {
        self.b_field
    }
    pub fn spin(&self) -> Spin {
        self.s
    }
    pub fn ml(&self) -> HalfInteger {
        self.ml
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn spacetime(&self) -> Spacetime {
        self.spacetime
    }

    /// ω̄ = ω − ω_AC/2.
    pub fn omega_bar(&self) -> f64 {
        self.omega - self.omega_ac / 2.0
    }

    /// True when ω̄ = 0; accepted by the constructor but rejected by every
    /// operation that divides by ω̄.
    pub fn is_degenerate(&self) -> bool {
        self.omega_bar() == 0.0
    }

    pub fn mu_b(&self) -> f64 {
        self.mu_moment * self.b_field
    }

    pub fn with_phi_ac(&self, phi_ac: f64) -> Result<Self> {
        ConfigFile { phi_ac, ..self.to_file() }.validate()
    }

    pub fn with_ml(&self, ml: HalfInteger) -> Result<Self> {
        ConfigFile { ml_numerator: ml.numerator(), ..self.to_file() }.validate()
    }

    /// The same physical parameters in another background. Minkowski forces η = 1.
    pub fn with_spacetime(&self, spacetime: Spacetime, eta: f64) -> Result<Self> {
        ConfigFile { spacetime, eta, ..self.to_file() }.validate()
    }
}

fn angular_number(ml: HalfInteger, s: Spin, phi_ac: f64, eta: f64) -> f64 {
    let s = s.signf();
    ml.value() + s * phi_ac / PI - s * eta / 2.0
}

/// Γ_s = m_l + sΦ_AC/π − s/2 for a Minkowski configuration.
pub fn gamma_ms(cfg: &OscillatorConfig) -> Result<f64> {
    if cfg.spacetime != Spacetime::Minkowski {
        return Err(Error::WrongSpacetime { operation: "gamma_ms", expected: "Minkowski" });
    }
    Ok(angular_number(cfg.ml, cfg.s, cfg.phi_ac, 1.0))
}

/// Angular number in the cosmic-string background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CssGamma {
    /// γ_s = m_l + sΦ_AC/π − sη/2
    pub gamma: f64,
    /// γ_s/η, the quantity entering the algebra.
    pub ratio: f64,
}

pub fn gamma_css(cfg: &OscillatorConfig) -> Result<CssGamma> {
    if cfg.spacetime != Spacetime::CosmicString {
        return Err(Error::WrongSpacetime { operation: "gamma_css", expected: "CosmicString" });
    }
    if !(cfg.eta > 0.0 && cfg.eta <= 1.0) {
        return Err(Error::InvalidConfig(format!("eta must lie in (0, 1], got {}", cfg.eta)));
    }
    let gamma = angular_number(cfg.ml, cfg.s, cfg.phi_ac, cfg.eta);
    Ok(CssGamma { gamma, ratio: gamma / cfg.eta })
}

/// Everything the representation theory needs from a configuration.
///
/// Minkowski and cosmic-string problems differ only in how `gamma_eff` and
/// `mu_b_eff` are obtained; downstream code never branches on spacetime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraParams {
    /// Γ_s (Minkowski) or γ_s/η (cosmic string).
    pub gamma_eff: f64,
    /// Bargmann index k = |gamma_eff|/2 + 1/2.
    pub k: f64,
    pub omega_bar: f64,
    pub m0: f64,
    /// μB (Minkowski) or μB/η (cosmic string).
    pub mu_b_eff: f64,
    /// Spin projection as ±1.
    pub s: i32,
}

impl AlgebraParams {
    /// Builds parameters directly from an effective angular number.
    pub fn from_gamma(gamma_eff: f64, m0: f64, omega_bar: f64, mu_b_eff: f64, s: i32) -> Self {
        AlgebraParams { gamma_eff, k: bargmann_index(gamma_eff), omega_bar, m0, mu_b_eff, s }
    }

    /// Laguerre order 2k − 1 = |gamma_eff|.
    pub fn alpha(&self) -> f64 {
        2.0 * self.k - 1.0
    }

    /// Oscillator scale m₀|ω̄| (inverse length squared); the Sturmian
    /// functions depend on ρ only through m₀|ω̄|ρ².
    pub fn scale(&self) -> f64 {
        self.m0 * self.omega_bar.abs()
    }

    pub fn require_frequency(&self) -> Result<()> {
        if self.omega_bar == 0.0 {
            Err(Error::DegenerateFrequency { omega_bar: self.omega_bar })
        } else {
            Ok(())
        }
    }

    /// Casimir value k(k − 1).
    pub fn casimir(&self) -> f64 {
        self.k * (self.k - 1.0)
    }
}

pub fn bargmann_index(gamma_eff: f64) -> f64 {
    gamma_eff.abs() / 2.0 + 0.5
}

pub fn algebra_params(cfg: &OscillatorConfig) -> AlgebraParams {
    let (gamma_eff, mu_b_eff) = match cfg.spacetime {
        Spacetime::Minkowski => (angular_number(cfg.ml, cfg.s, cfg.phi_ac, 1.0), cfg.mu_b()),
        Spacetime::CosmicString => {
            let g = angular_number(cfg.ml, cfg.s, cfg.phi_ac, cfg.eta);
            (g / cfg.eta, cfg.mu_b() / cfg.eta)
        }
    };
    AlgebraParams::from_gamma(gamma_eff, cfg.m0, cfg.omega_bar(), mu_b_eff, cfg.s.sign())
}
