//! su(1,1) algebraic treatment of the (2+1)-dimensional Dirac oscillator
//! with Aharonov–Casher coupling, in Minkowski and cosmic-string spacetimes.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`] validates physical inputs and derives the effective angular
//!   number and Bargmann index shared by every other module.
//! * [`su11`] is the abstract discrete-series representation: ladder
//!   coefficients, truncated matrices and the displacement-operator oracle.
//! * [`spectrum`] holds the closed-form energies and the phase periodicity.
//! * [`radial`] builds the Laguerre/Sturmian basis on a radial grid and the
//!   finite-difference realisation of the ladder operators.
//! * [`coherent`] constructs Perelomov coherent states and their evolution.
//! * [`observables`] covers matrix elements, generator expectation values and
//!   the Schrödinger uncertainty relation.
//! * [`verify`] aggregates all of the above into a [`report::VerificationReport`].
//!
//! Natural units (ħ = c = 1) are used throughout.

pub mod coherent;
pub mod error;
pub mod observables;
pub mod params;
pub mod quadrature;
pub mod radial;
pub mod report;
pub mod spectrum;
pub mod su11;
pub mod verify;

pub use error::{Error, Result};
pub use params::{AlgebraParams, HalfInteger, OscillatorConfig, Spacetime};
