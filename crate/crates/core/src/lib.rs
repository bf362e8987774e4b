//! Adiabatic elimination for two-timescale Lindblad master equations.

pub mod asymptotics;
pub mod error;
pub mod json;
pub mod models;
pub mod modelspec;
pub mod operators;
pub mod random;
pub mod reduction;
pub mod scalar;
pub mod simulate;
pub mod tolerances;

pub use error::{AssumptionCheck, Error, Result};
pub use scalar::{Real, C};
pub use tolerances::Tolerances;

pub type Operator64 = operators::Operator<f64>;
pub type Operator32 = operators::Operator<f32>;
pub type Generator64 = operators::LindbladGenerator<f64>;
pub type Generator32 = operators::LindbladGenerator<f32>;
pub type Superoperator64 = operators::Superoperator<f64>;
pub type Superoperator32 = operators::Superoperator<f32>;
pub type Density64 = operators::DensityMatrix<f64>;
pub type Density32 = operators::DensityMatrix<f32>;
pub type ReducedModel64 = reduction::ReducedModel<f64>;
pub type ReducedModel32 = reduction::ReducedModel<f32>;
pub type Trajectory64 = simulate::Trajectory<f64>;
pub type Trajectory32 = simulate::Trajectory<f32>;
