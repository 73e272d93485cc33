//! Darboux-Egoroff data of a rational potential: critical points, canonical
//! coordinates, Lamé and rotation coefficients, the `V` matrix, and the
//! identities they satisfy.

mod checks;
mod frame;

pub use checks::{
    darboux_egoroff, darboux_egoroff_residuals, frame_reports, lame_homogeneity_constant, lame_s_relations,
    omega_and_spectrum, rotation_coefficients, tau_gradient, tau_gradient_check, tau_gradient_reports,
    DarbouxEgoroff, RotationEstimate, Spectrum, TauGradient, U_STEP,
};
pub use frame::{
    canonical_frame, canonical_frame_aligned, gauge_search, invert_canonical, u_derivative, CanonicalFrame,
    LameChoice,
};
