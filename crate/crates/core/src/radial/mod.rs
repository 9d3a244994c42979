//! Sturmian basis on a radial grid and finite-difference realizations of the
//! factorization operators.

pub mod basis;
pub mod fd;
pub mod grid;
pub mod laguerre;
pub mod operators;

pub use basis::{rho_derivatives, sturmian, sturmian_basis, SturmianFunction};
pub use grid::{GridOptions, RadialGrid};
pub use laguerre::{laguerre, orthonormal_laguerre};
pub use operators::{
    build_generator, build_operator, rayleigh_energy, verify_algebra, verify_algebra_params,
    DiscretizedOperator, GeneratorKind, OperatorLabel, RayleighEnergy,
};
