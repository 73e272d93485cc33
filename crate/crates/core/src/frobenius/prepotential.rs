//! Prepotentials of the two shipped models and their finite-difference checks.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::frobenius::{structure_constants, wdvv_residual, Tensor3};
use crate::models::Model;
use crate::report::{labeled_point, VerificationReport};
use crate::scalar::{cr, Real};

/// Step for third derivatives of `F`.
pub const THIRD_DERIVATIVE_STEP: f64 = 1e-3;

/// Step for third differences of `E(F) - d_F F`; exact on quadratics, so only roundoff matters.
pub const QUASI_HOMOGENEITY_STEP: f64 = 1e-2;

fn check_branch<T: Real>(model: &Model, x: &[Complex<T>]) -> Result<()> {
    if !model.has_closed_forms() {
        return Err(Error::Unsupported(format!("no prepotential shipped for model {model}")));
    }
    if x.len() != 3 {
        return Err(Error::InvalidInput(format!("prepotential takes 3 coordinates, got {}", x.len())));
    }
    if !(x[1].im == T::zero() && x[1].re > T::zero()) {
        return Err(Error::Branch(format!(
            "x2 = {} must be real and positive for the logarithm",
            x[1]
        )));
    }
    Ok(())
}

/// `F` in model coordinates, principal logarithm.
pub fn prepotential<T: Real>(model: &Model, x: &[Complex<T>]) -> Result<Complex<T>> {
    check_branch(model, x)?;
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    let half = T::lit(0.5);
    Ok(match model {
        Model::Nm11 => {
            x2 * x3.powi(3) / T::lit(6.0) + x1.powi(3) / T::lit(6.0) + x1 * x2 * x3
                + x2 * x2 * (x2.ln() - T::lit(1.5)) * half
        }
        Model::Nm02 => x3 * x3 * x1 * half + x2 * x2 * x3 * half + x1 * x1 * x2.ln() * half,
        Model::Custom { .. } => unreachable!("rejected by check_branch"),
    })
}

/// Gradient of `F`, differentiated by hand.
pub fn prepotential_gradient<T: Real>(model: &Model, x: &[Complex<T>]) -> Result<[Complex<T>; 3]> {
    check_branch(model, x)?;
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    let half = T::lit(0.5);
    Ok(match model {
        Model::Nm11 => [
            x1 * x1 * half + x2 * x3,
            x3.powi(3) / T::lit(6.0) + x1 * x3 + x2 * x2.ln() - x2,
            x2 * x3 * x3 * half + x1 * x2,
        ],
        Model::Nm02 => [
            x3 * x3 * half + x1 * x2.ln(),
            x2 * x3 + x1 * x1 / (x2 + x2),
            x3 * x1 + x2 * x2 * half,
        ],
        Model::Custom { .. } => unreachable!("rejected by check_branch"),
    })
}

/// Mixed third derivative by the 8-point stencil with one Richardson step.
pub fn third_derivative_fd<T: Real>(
    f: &impl Fn(&[Complex<T>]) -> Result<Complex<T>>,
    x: &[Complex<T>],
    (a, b, c): (usize, usize, usize),
    h: T,
) -> Result<Complex<T>> {
    let stencil = |h: T| -> Result<Complex<T>> {
        let mut acc = Complex::zero();
        for mask in 0..8u8 {
            let signs = [mask & 1, mask & 2, mask & 4].map(|bit| if bit == 0 { T::one() } else { -T::one() });
            let mut p = x.to_vec();
            p[a] = p[a] + cr::<T>(1.0) * signs[0] * h;
            p[b] = p[b] + cr::<T>(1.0) * signs[1] * h;
            p[c] = p[c] + cr::<T>(1.0) * signs[2] * h;
            acc = acc + f(&p)? * (signs[0] * signs[1] * signs[2]);
        }
        Ok(acc / (T::lit(8.0) * h * h * h))
    };
    let coarse = stencil(h + h)?;
    let fine = stencil(h)?;
    Ok((fine * T::lit(4.0) - coarse) / T::lit(3.0))
}

/// Mixed second derivative by the 4-point stencil with one Richardson step.
pub fn second_derivative_fd<T: Real>(
    f: &impl Fn(&[Complex<T>]) -> Result<Complex<T>>,
    x: &[Complex<T>],
    (a, b): (usize, usize),
    h: T,
) -> Result<Complex<T>> {
    let stencil = |h: T| -> Result<Complex<T>> {
        let mut acc = Complex::zero();
        for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut p = x.to_vec();
            p[a] = p[a] + cr::<T>(sa) * h;
            p[b] = p[b] + cr::<T>(sb) * h;
            acc = acc + f(&p)? * T::lit(sa * sb);
        }
        Ok(acc / (T::lit(4.0) * h * h))
    };
    let coarse = stencil(h + h)?;
    let fine = stencil(h)?;
    Ok((fine * T::lit(4.0) - coarse) / T::lit(3.0))
}

/// Third derivatives of `F` at every index triple: central second differences of the analytic gradient.
pub fn prepotential_third_derivatives<T: Real>(model: &Model, x: &[Complex<T>], h: T) -> Result<Tensor3<Complex<T>>> {
    check_branch(model, x)?;
    let mut t = Tensor3::zeros(3);
    for a in 0..3 {
        for b in a..3 {
            for c in b..3 {
                let g = |p: &[Complex<T>]| prepotential_gradient(model, p).map(|g| g[c]);
                let v = second_derivative_fd(&g, x, (a, b), h)?;
                for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    t[(i, j, k)] = v;
                }
            }
        }
    }
    Ok(t)
}

/// `E(F) - d_F F` where `E = sum_a d_a x_a d/dx_a`.
pub fn quasi_homogeneity_defect<T: Real>(model: &Model, x: &[Complex<T>]) -> Result<Complex<T>> {
    let grad = prepotential_gradient(model, x)?;
    let f = prepotential(model, x)?;
    let to_t = |r: num_rational::Rational64| T::lit(*r.numer() as f64 / *r.denom() as f64);
    let euler = model
        .degrees()
        .into_iter()
        .zip(x.iter().zip(grad.iter()))
        .fold(Complex::<T>::zero(), |acc, (d, (xa, ga))| acc + xa * ga * to_t(d));
    Ok(euler - f * to_t(model.prepotential_degree()))
}

/// Third derivatives of `F` against the residue structure constants, quasi-homogeneity and WDVV.
pub fn prepotential_checks<T: Real>(model: &Model, x: &[Complex<T>]) -> Result<Vec<VerificationReport>> {
    check_branch(model, x)?;
    let h = T::lit(THIRD_DERIVATIVE_STEP);
    let point = labeled_point(&model.coordinate_labels(), x);
    let name = model.to_string();

    let fd = prepotential_third_derivatives(model, x, h)?;
    let residue = structure_constants(model, x)?;
    let mut third = T::zero();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                third = third.max((fd[(a, b, c)] - residue[(a, b, c)]).norm());
            }
        }
    }

    let g = |p: &[Complex<T>]| quasi_homogeneity_defect(model, p);
    let mut quasi = T::zero();
    for a in 0..3 {
        for b in a..3 {
            for c in b..3 {
                quasi = quasi.max(third_derivative_fd(&g, x, (a, b, c), T::lit(QUASI_HOMOGENEITY_STEP))?.norm());
            }
        }
    }

    let eta_inv = model.expected_metric::<T>().inverse()?;
    let wdvv = wdvv_residual(&fd, &eta_inv);

    Ok(vec![
        VerificationReport::new("prepotential-third-derivatives", &name, point.clone(), third, 1e-6)
            .with_meta("step", THIRD_DERIVATIVE_STEP),
        VerificationReport::new("quasi-homogeneity", &name, point.clone(), quasi, 1e-7)
            .with_meta("d_F", model.prepotential_degree()),
        VerificationReport::new("wdvv-prepotential", &name, point, wdvv, 1e-8),
    ])
}
