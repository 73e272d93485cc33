//! Frobenius manifolds from rational Landau-Ginzburg potentials: flat metric,
//! structure constants, canonical coordinates, rotation coefficients, the
//! Euler top reduction and Painlevé VI, each with residual-based verification.
//!
//! The numerical core is generic over the real scalar (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod algebra;
pub mod canonical;
pub mod error;
pub mod eulertop;
pub mod frobenius;
pub mod models;
pub mod painleve;
pub mod report;
pub mod scalar;

pub use error::{Degeneracy, Error, Result};
pub use models::Model;
pub use report::{LabeledValue, VerificationReport};
pub use scalar::{Dual, Field, Real};

pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;
pub type Poly64 = algebra::Poly<C64>;
pub type Potential64 = frobenius::RationalPotential<C64>;
pub type Frame64 = canonical::CanonicalFrame<f64>;
pub type Metric64 = algebra::Matrix<C64>;
