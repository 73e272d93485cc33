//! Flat structure of rational potentials: construction from flat coordinates,
//! residue metric and structure constants, WDVV, and the shipped prepotentials.

mod metric;
mod potential;
mod prepotential;

pub use metric::{
    critical_points, flat_metric, residue_data, structure_constants, tangent_values, wdvv_residual, ResidueData,
    TangentMethod, Tensor3,
};
pub use potential::{
    build_potential, flat_degrees, prepotential_degree, FlatPoint, RationalPotential, MAX_REVERSION_DEPTH,
};
pub use prepotential::{
    prepotential, prepotential_checks, prepotential_gradient, prepotential_third_derivatives, quasi_homogeneity_defect,
    second_derivative_fd, third_derivative_fd, QUASI_HOMOGENEITY_STEP, THIRD_DERIVATIVE_STEP,
};

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;

/// Builds `W` from a [`FlatPoint`].
pub fn build_potential_at<T: Real>(n: usize, m: usize, p: &FlatPoint<T>) -> Result<RationalPotential<Complex<T>>> {
    build_potential(n, m, &p.x, &p.xt)
}
