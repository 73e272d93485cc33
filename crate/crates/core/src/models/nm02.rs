//! Closed forms for `W = z + x1/(z - x3) + x2^2/(2 (z - x3)^2)` in terms of the
//! roots `f_i` of `f^3 - x1 f - x2^2 = 0`, with `f_i = alpha_i - x3`.

use num_complex::Complex;
use num_traits::Zero;

use crate::algebra::{ensure_simple, roots_all, Poly};
use crate::error::{Degeneracy, Error, Result};
use crate::eulertop::{parametric_residual, Convention, TopSample};
use crate::models::Model;
use crate::report::{labeled_point, VerificationReport};
use crate::scalar::{cr, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Nm02Data<T> {
    pub x: [Complex<T>; 3],
    /// `x2^2 / x1^{3/2}`, principal branch.
    pub r: Complex<T>,
    pub f: [Complex<T>; 3],
    /// `g_i = f_i / sqrt(x1)`.
    pub g: [Complex<T>; 3],
    pub u: [Complex<T>; 3],
    /// `f^3 / (3 f^2 - x1)`.
    pub lame_sq: [Complex<T>; 3],
    /// `f^2 / (3 f^2 - x1)`.
    pub lame_sq_tilde: [Complex<T>; 3],
    pub omega_sq: [Complex<T>; 3],
    /// `-h~^2 / 16`.
    pub omega_sq_tilde: [Complex<T>; 3],
}

pub fn nm02_closed_forms<T: Real>(x1: Complex<T>, x2: Complex<T>, x3: Complex<T>) -> Result<Nm02Data<T>> {
    if x2.norm() == T::zero() {
        return Err(Error::degenerate(Degeneracy::PoleOrder, "x2 = 0"));
    }
    if x1.norm() == T::zero() {
        return Err(Error::degenerate(Degeneracy::SingularPoint, "x1 = 0 (r undefined)"));
    }
    let cubic = Poly::new(vec![-x2 * x2, -x1, Complex::zero(), cr(1.0)]);
    let roots = roots_all(&cubic, T::epsilon() * T::lit(1e4))?;
    ensure_simple(&roots, Degeneracy::CoalescingCriticalPoints)?;
    let f = [roots[0], roots[1], roots[2]];
    Ok(from_roots([x1, x2, x3], f))
}

/// Closed forms evaluated on a given ordering of the roots `f_i`.
pub fn nm02_from_roots<T: Real>(x: [Complex<T>; 3], f: [Complex<T>; 3]) -> Nm02Data<T> {
    from_roots(x, f)
}

fn from_roots<T: Real>(x: [Complex<T>; 3], f: [Complex<T>; 3]) -> Nm02Data<T> {
    let [x1, x2, x3] = x;
    let k = |v: f64| cr::<T>(v);
    let sq1 = x1.sqrt();
    let r = x2 * x2 / (x1 * sq1);
    let g = f.map(|fi| fi / sq1);
    let u = f.map(|fi| x3 + fi * T::lit(1.5) + x1 / (fi * T::lit(2.0)));
    let lame_sq = f.map(|fi| fi.powi(3) / (fi * fi * T::lit(3.0) - x1));
    let lame_sq_tilde = f.map(|fi| fi * fi / (fi * fi * T::lit(3.0) - x1));
    let omega_sq = g.map(|gk| {
        let g2 = gk * gk;
        let bracket = g2 * g2 * T::lit(8.0) - g2 * T::lit(4.0) + r * r / g2;
        r / T::lit(4.0) * (g2 * T::lit(3.0) - k(4.0)) / ((gk - r * T::lit(3.0)) * (g2 * T::lit(3.0) - k(1.0)).powi(5))
            * bracket
            * bracket
    });
    let omega_sq_tilde = lame_sq_tilde.map(|h| -h / T::lit(16.0));
    Nm02Data {
        x,
        r,
        f,
        g,
        u,
        lame_sq,
        lame_sq_tilde,
        omega_sq,
        omega_sq_tilde,
    }
}

/// `(u_2 - u_1)/(u_3 - u_1)`.
pub fn cross_ratio<T: Real>(u: &[Complex<T>; 3]) -> Complex<T> {
    (u[1] - u[0]) / (u[2] - u[0])
}

/// Follows the roots along `x2 -> x2 (1 + t)`, keeping the labels of the base point.
pub fn nm02_family_sample<T: Real>(base: &Nm02Data<T>, t: Complex<T>) -> Result<Nm02Data<T>> {
    let [x1, x2, x3] = base.x;
    let moved = nm02_closed_forms(x1, x2 * (cr::<T>(1.0) + t), x3)?;
    let (perm, _) = crate::algebra::best_alignment(&base.f, &moved.f);
    let f = [moved.f[perm[0]], moved.f[perm[1]], moved.f[perm[2]]];
    Ok(from_roots(moved.x, f))
}

/// Sum rules for both omega families and their Euler-top residuals along the `x2` family.
pub fn nm02_omega_checks<T: Real>(data: &Nm02Data<T>, perm_search: bool) -> Result<Vec<VerificationReport>> {
    let point = labeled_point(&Model::Nm02.coordinate_labels(), &data.x);
    let model = Model::Nm02.to_string();
    let sum: Complex<T> = data.omega_sq.iter().copied().fold(Complex::zero(), |a, b| a + b);
    let sum_t: Complex<T> = data.omega_sq_tilde.iter().copied().fold(Complex::zero(), |a, b| a + b);
    let sum_h: Complex<T> = data.lame_sq_tilde.iter().copied().fold(Complex::zero(), |a, b| a + b);

    let mut out = vec![
        VerificationReport::new("nm02-omega-casimir", &model, point.clone(), (sum + cr::<T>(0.25)).norm(), 1e-9),
        VerificationReport::new(
            "nm02-omega-tilde-casimir",
            &model,
            point.clone(),
            (sum_t + cr::<T>(1.0 / 16.0)).norm(),
            1e-9,
        ),
        VerificationReport::new("nm02-lame-tilde-sum", &model, point.clone(), (sum_h - cr::<T>(1.0)).norm(), 1e-9),
    ];

    let grid: Vec<Complex<T>> = (0..9).map(|k| cr::<T>(-0.04 + 0.01 * k as f64)).collect();
    let conventions = if perm_search { Convention::all() } else { vec![Convention::identity()] };
    for (name, tilde) in [("nm02-euler-top", false), ("nm02-euler-top-tilde", true)] {
        let curve = |t: Complex<T>| -> Result<TopSample<T>> {
            let d = nm02_family_sample(data, t)?;
            Ok(TopSample {
                s: cross_ratio(&d.u),
                omega_sq: if tilde { d.omega_sq_tilde } else { d.omega_sq },
            })
        };
        let rep = parametric_residual(&curve, &grid, &conventions, 1e-6)?;
        out.push(rep.into_report(name, &model, point.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn at(x: [f64; 3]) -> Nm02Data<f64> {
        nm02_closed_forms(cr::<f64>(x[0]), cr::<f64>(x[1]), cr::<f64>(x[2])).unwrap()
    }

    #[test]
    fn reference_point_values() {
        let d = at([1.0, 1.0, 0.0]);
        // real root of f^3 - f - 1, found by bisection
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.powi(3) - mid - 1.0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((d.f[0] - cr::<f64>(lo)).norm() < 1e-13);
        assert!((d.f[0] - cr::<f64>(1.32471795724)).norm() < 1e-10);
        assert!((d.u[0] - cr::<f64>(2.364515769)).norm() < 1e-8);
        assert!((d.lame_sq[0] - cr::<f64>(0.5451155956)).norm() < 1e-9);
        let su: Complex64 = d.u.iter().sum();
        assert!((su + 0.5).norm() < 1e-12);
    }

    #[test]
    fn sum_rules() {
        for x in [[1.0, 1.0, 0.0], [2.0, 0.7, 1.5], [0.5, 1.3, -0.2]] {
            let d = at(x);
            let s: Complex64 = d.omega_sq.iter().sum();
            assert!((s + 0.25).norm() < 1e-9, "{x:?}: {s}");
            let st: Complex64 = d.lame_sq_tilde.iter().sum();
            assert!((st - 1.0).norm() < 1e-12);
            for (gk, fk) in d.g.iter().zip(d.f) {
                assert!((gk.powi(3) - gk - d.r).norm() < 1e-12);
                assert!((fk.powi(3) - fk * x[0] - x[1] * x[1]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn omega_checks_pass() {
        for r in nm02_omega_checks(&at([1.0, 1.0, 2.0]), true).unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }
}
