//! Closed forms for `W = z^2/2 + x1 + x2/(z - x3)` in the parameter `omega`,
//! where `q = x2/x3^3 = 4 (omega^2 - 1)^2 / (omega^2 + 3)^3`.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Degeneracy, Error, Result};
use crate::eulertop::{parametric_residual, Convention, ParametricOutcome, TopSample};
use crate::report::{labeled_point, VerificationReport};
use crate::scalar::{cr, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Nm11Data<T> {
    pub omega_param: Complex<T>,
    pub q: Complex<T>,
    /// Root ratios `a_i = alpha_i / x3`.
    pub a: [Complex<T>; 3],
    /// `(omega - 3)^3 (omega + 1) / ((omega + 3)^3 (omega - 1))`.
    pub s_printed: Complex<T>,
    /// `(u_2 - u_1)/(u_3 - u_1)` evaluated on the roots `a_i`.
    pub s_roots: Complex<T>,
    pub omega_sq: [Complex<T>; 3],
    /// `h_i^2 = (a_i - 1)/(3 a_i - 1)`.
    pub lame_sq: [Complex<T>; 3],
    /// Logarithm of the omega-form tau function at `x3 = 1`.
    pub log_tau: Complex<T>,
}

fn excluded<T: Real>(omega: Complex<T>) -> Option<&'static str> {
    let tol = T::lit(1e-10);
    let near = |v: f64| (omega - cr::<T>(v)).norm() < tol;
    if near(0.0) {
        Some("omega = 0 (s and the omega-form tau are singular)")
    } else if near(1.0) || near(-1.0) {
        Some("omega = +-1 (q = 0, roots coalesce)")
    } else if near(3.0) || near(-3.0) {
        Some("omega = +-3 (a_1 = a_2 or a_1 = a_3)")
    } else if (omega * omega + cr::<T>(3.0)).norm() < tol {
        Some("omega^2 = -3 (q has a pole)")
    } else {
        None
    }
}

pub fn nm11_closed_forms<T: Real>(omega: Complex<T>) -> Result<Nm11Data<T>> {
    if let Some(why) = excluded(omega) {
        return Err(Error::degenerate(Degeneracy::ExcludedParameter, why));
    }
    let one = Complex::<T>::one();
    let k = |v: f64| cr::<T>(v);
    let w2 = omega * omega;
    let d = w2 + k(3.0);
    let q = k(4.0) * (w2 - one).powi(2) / d.powi(3);
    let a = [k(4.0) / d, (omega + one).powi(2) / d, (omega - one).powi(2) / d];
    let s_printed = (omega - k(3.0)).powi(3) * (omega + one) / ((omega + k(3.0)).powi(3) * (omega - one));
    let s_roots = (a[1] - a[0]) / (a[2] - a[0]) * (k(3.0) * a[2] - k(4.0)) / (k(3.0) * a[1] - k(4.0));
    let quarter = k(0.25);
    let omega_sq = [
        -quarter * (w2 - one) / (w2 - k(9.0)),
        quarter * (omega + one) / (omega * (omega - k(3.0))),
        -quarter * (omega - one) / (omega * (omega + k(3.0))),
    ];
    let lame_sq = a.map(|ai| (ai - one) / (k(3.0) * ai - one));
    Ok(Nm11Data {
        omega_param: omega,
        q,
        a,
        s_printed,
        s_roots,
        omega_sq,
        lame_sq,
        log_tau: log_tau_omega(omega, one)?,
    })
}

/// Canonical coordinates `u_i = x1 + x3^2 a_i (3 a_i - 2)/2`.
pub fn nm11_canonical<T: Real>(data: &Nm11Data<T>, x1: Complex<T>, x3: Complex<T>) -> [Complex<T>; 3] {
    data.a
        .map(|a| x1 + x3 * x3 * a * (a * T::lit(3.0) - cr::<T>(2.0)) / T::lit(2.0))
}

/// Model coordinates `(x1, q x3^3, x3)` of the point with parameter `omega`.
pub fn nm11_point<T: Real>(omega: Complex<T>, x1: Complex<T>, x3: Complex<T>) -> Result<[Complex<T>; 3]> {
    let data = nm11_closed_forms(omega)?;
    Ok([x1, data.q * x3.powi(3), x3])
}

fn branch_check<T: Real>(q: Complex<T>) -> Result<()> {
    let tol = T::lit(1e-12);
    if q.norm() < tol || (q * T::lit(27.0) - cr::<T>(4.0)).norm() < tol {
        return Err(Error::degenerate(
            Degeneracy::BranchPoint,
            format!("q = {q} is a branch point of log tau (q = 0 or q = 4/27)"),
        ));
    }
    Ok(())
}

/// `log tau = (1/4) log x3^2 + (1/24) log(q^3 (27 q - 4))`, principal logarithms, `q = x2/x3^3`.
pub fn nm11_log_tau<T: Real>(x2: Complex<T>, x3: Complex<T>) -> Result<Complex<T>> {
    if x3.norm() == T::zero() {
        return Err(Error::degenerate(Degeneracy::SingularPoint, "x3 = 0"));
    }
    let q = x2 / x3.powi(3);
    branch_check(q)?;
    Ok((x3 * x3).ln() / T::lit(4.0) + (q.powi(3) * (q * T::lit(27.0) - cr::<T>(4.0))).ln() / T::lit(24.0))
}

/// `(d log tau / dx2, d log tau / dx3)`, differentiated by hand.
pub fn nm11_log_tau_gradient<T: Real>(x2: Complex<T>, x3: Complex<T>) -> Result<[Complex<T>; 2]> {
    if x3.norm() == T::zero() {
        return Err(Error::degenerate(Degeneracy::SingularPoint, "x3 = 0"));
    }
    let q = x2 / x3.powi(3);
    branch_check(q)?;
    let dq = (cr::<T>(3.0) / q + cr::<T>(27.0) / (q * T::lit(27.0) - cr::<T>(4.0))) / T::lit(24.0);
    Ok([dq / x3.powi(3), cr::<T>(0.5) / x3 - q * T::lit(3.0) / x3 * dq])
}

/// `(1/4) log(u_2 - u_3) + (1/24) log((w-1)^6 (w+1)^6 (w-3)^2 (w+3)^2 w^-16)` with
/// `u_2 - u_3 = 8 x3^2 w^3 / (w^2 + 3)^2`.
pub fn log_tau_omega<T: Real>(omega: Complex<T>, x3: Complex<T>) -> Result<Complex<T>> {
    if let Some(why) = excluded(omega) {
        return Err(Error::degenerate(Degeneracy::ExcludedParameter, why));
    }
    let one = Complex::<T>::one();
    let k = |v: f64| cr::<T>(v);
    let du = k(8.0) * x3 * x3 * omega.powi(3) / (omega * omega + k(3.0)).powi(2);
    let inner = (omega - one).powi(6) * (omega + one).powi(6) * (omega - k(3.0)).powi(2) * (omega + k(3.0)).powi(2)
        / omega.powi(16);
    Ok(du.ln() / T::lit(4.0) + inner.ln() / T::lit(24.0))
}

/// `tau^24` from the `(x2, x3)` form and from the omega form; their ratio is constant.
pub fn tau24_pair<T: Real>(omega: Complex<T>, x3: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    let data = nm11_closed_forms(omega)?;
    let q = data.q;
    let k = |v: f64| cr::<T>(v);
    let from_q = x3.powi(12) * q.powi(3) * (q * T::lit(27.0) - k(4.0));
    let one = Complex::<T>::one();
    let du = k(8.0) * x3 * x3 * omega.powi(3) / (omega * omega + k(3.0)).powi(2);
    let from_omega = du.powi(6) * (omega - one).powi(6) * (omega + one).powi(6) * (omega - k(3.0)).powi(2)
        * (omega + k(3.0)).powi(2)
        / omega.powi(16);
    Ok((from_q, from_omega))
}

/// `E(log tau) = 1/4` and `x3 d/dx3 log tau = (1/8)/(1 - 27 q/4)` at fixed `x2`, by central differences.
pub fn nm11_tau_reports<T: Real>(x2: Complex<T>, x3: Complex<T>) -> Result<Vec<VerificationReport>> {
    let point = labeled_point(&["x2".to_string(), "x3".to_string()], &[x2, x3]);
    let step = |x: Complex<T>| T::lit(1e-5) * T::one().max(x.norm());
    let (h2, h3) = (step(x2), step(x3));
    let d2 = (nm11_log_tau(x2 + cr::<T>(1.0) * h2, x3)? - nm11_log_tau(x2 - cr::<T>(1.0) * h2, x3)?) / (h2 + h2);
    let d3 = (nm11_log_tau(x2, x3 + cr::<T>(1.0) * h3)? - nm11_log_tau(x2, x3 - cr::<T>(1.0) * h3)?) / (h3 + h3);
    let euler = x2 * d2 * T::lit(1.5) + x3 * d3 * T::lit(0.5);
    let q = x2 / x3.powi(3);
    let expect = cr::<T>(0.125) / (cr::<T>(1.0) - q * T::lit(6.75));
    Ok(vec![
        VerificationReport::new("tau-euler-fd", "nm11", point.clone(), (euler - cr::<T>(0.25)).norm(), 1e-8),
        VerificationReport::new("tau-x3-scaling", "nm11", point, (x3 * d3 - expect).norm(), 1e-8)
            .with_meta("q", format!("{q}")),
    ])
}

/// Nine points `omega = i (0.8 + 0.05 k)` on which the closed forms are regular.
pub fn nm11_default_grid<T: Real>() -> Vec<Complex<T>> {
    (0..9).map(|k| Complex::new(T::zero(), T::lit(0.8 + 0.05 * k as f64))).collect()
}

/// Euler-top residual of `(s, omega_k^2)(omega)` with the printed `s`.
pub fn nm11_euler_top<T: Real>(grid: &[Complex<T>], conventions: &[Convention]) -> Result<ParametricOutcome> {
    let curve = |w: Complex<T>| -> Result<TopSample<T>> {
        let d = nm11_closed_forms(w)?;
        Ok(TopSample {
            s: d.s_printed,
            omega_sq: d.omega_sq,
        })
    };
    parametric_residual(&curve, grid, conventions, 1e-6)
}
