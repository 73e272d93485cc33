use num_complex::Complex;
use num_rational::Rational64;
use num_traits::Zero;

use super::frame::{canonical_frame_aligned, gauge_search, u_derivative, CanonicalFrame, LameChoice};
use crate::algebra::{roots_all, Matrix, Poly};
use crate::error::{Error, Result};
use crate::models::{nm11_log_tau_gradient, Model};
use crate::report::{labeled_point, VerificationReport};
use crate::scalar::{cr, sqrt_near, Real};

/// Default relative step for derivatives in canonical coordinates.
pub const U_STEP: f64 = 1e-6;

fn rational<T: Real>(r: Rational64) -> T {
    T::lit(*r.numer() as f64 / *r.denom() as f64)
}

fn point_of<T: Real>(frame: &CanonicalFrame<T>) -> Vec<crate::report::LabeledValue> {
    labeled_point(&frame.model.coordinate_labels(), &frame.coords)
}

/// Rotation coefficients from central differences of `h_i` in `u`, with the sign-gauge search.
#[derive(Clone, Debug)]
pub struct RotationEstimate<T> {
    pub beta: Matrix<Complex<T>>,
    pub symmetry_defect: T,
    pub gauge: Vec<i8>,
}

/// `beta_ij = (1/h_j) dh_i/du_j` with `x(u)` from Newton inversion and steps `h_step max(1, |u_j|)`.
pub fn rotation_coefficients<T: Real>(frame: &CanonicalFrame<T>, h_step: T) -> Result<RotationEstimate<T>> {
    if !(h_step > T::zero()) {
        return Err(Error::InvalidInput("h_step must be positive".into()));
    }
    let n = frame.dim();
    // principal roots, re-gauged by the search below
    let principal: Vec<Complex<T>> = frame.lame_sq.iter().map(|x| x.sqrt()).collect();
    let mut raw = Matrix::zeros(n, n);
    for j in 0..n {
        let dh = u_derivative(frame, j, h_step, &|f: &CanonicalFrame<T>| {
            f.lame_sq
                .iter()
                .zip(&principal)
                .map(|(&x, &p)| sqrt_near(x, p))
                .collect()
        })?;
        for i in 0..n {
            if i != j {
                raw[(i, j)] = dh[i] / principal[j];
            }
        }
    }
    let (gauge, symmetry_defect) = gauge_search(&raw);
    let beta = Matrix::from_fn(n, n, |i, j| raw[(i, j)] * T::from(gauge[i] * gauge[j]).expect("sign"));
    Ok(RotationEstimate {
        beta,
        symmetry_defect,
        gauge,
    })
}

/// Residuals of the Darboux-Egoroff system at a frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarbouxEgoroff<T> {
    pub symmetry: T,
    pub closure: T,
    pub identity_beta: T,
    pub euler_beta: T,
    pub identity_h: T,
    pub lame_homogeneity: T,
    pub homogeneity_constant: Rational64,
}

/// Homogeneity `c` with `E(h_i^2) = c h_i^2` for the frame's Lamé choice.
pub fn lame_homogeneity_constant(model: &Model, lame: LameChoice) -> Rational64 {
    match lame {
        LameChoice::Metric => model.lame_homogeneity(),
        LameChoice::Coordinate(k) => model.degrees()[k] - Rational64::from_integer(1),
    }
}

pub fn darboux_egoroff<T: Real>(frame: &CanonicalFrame<T>, h_step: T) -> Result<DarbouxEgoroff<T>> {
    let n = frame.dim();
    let beta_flat = |f: &CanonicalFrame<T>| -> Vec<Complex<T>> {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| f.beta[(i, j)]).collect()
    };
    // d_beta[k][(i, j)] = d beta_ij / du_k, dh[k][i] = d h_i / du_k, dh2[k][i] = d h_i^2 / du_k
    let mut d_beta = Vec::with_capacity(n);
    let mut dh = Vec::with_capacity(n);
    let mut dh2 = Vec::with_capacity(n);
    for k in 0..n {
        let v = u_derivative(frame, k, h_step, &|f: &CanonicalFrame<T>| {
            let mut out = beta_flat(f);
            out.extend(f.h.iter().copied());
            out.extend(f.lame_sq.iter().copied());
            out
        })?;
        d_beta.push(v[..n * n].to_vec());
        dh.push(v[n * n..n * n + n].to_vec());
        dh2.push(v[n * n + n..].to_vec());
    }
    let b = |i: usize, j: usize| frame.beta[(i, j)];

    let mut closure = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k {
                    closure = closure.max((d_beta[j][i * n + k] - b(i, j) * b(j, k)).norm());
                }
            }
        }
    }
    let mut identity_beta = T::zero();
    let mut euler_beta = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let idx = i * n + j;
            let ib = (0..n).fold(Complex::<T>::zero(), |acc, k| acc + d_beta[k][idx]);
            let eb = (0..n).fold(Complex::<T>::zero(), |acc, k| acc + frame.u[k] * d_beta[k][idx]);
            identity_beta = identity_beta.max(ib.norm());
            euler_beta = euler_beta.max((eb + b(i, j)).norm());
        }
    }
    let c = lame_homogeneity_constant(&frame.model, frame.lame);
    let mut identity_h = T::zero();
    let mut homog = T::zero();
    for i in 0..n {
        let ih = (0..n).fold(Complex::<T>::zero(), |acc, k| acc + dh[k][i]);
        identity_h = identity_h.max(ih.norm());
        let eh = (0..n).fold(Complex::<T>::zero(), |acc, k| acc + frame.u[k] * dh2[k][i]);
        homog = homog.max((eh - frame.lame_sq[i] * rational::<T>(c)).norm());
    }
    Ok(DarbouxEgoroff {
        symmetry: frame.symmetry_defect,
        closure,
        identity_beta,
        euler_beta,
        identity_h,
        lame_homogeneity: homog,
        homogeneity_constant: c,
    })
}

/// The Darboux-Egoroff residuals as reports.
pub fn darboux_egoroff_residuals<T: Real>(frame: &CanonicalFrame<T>) -> Result<Vec<VerificationReport>> {
    let de = darboux_egoroff(frame, T::lit(U_STEP))?;
    let model = frame.model.to_string();
    let point = point_of(frame);
    let lame = format!("{:?}", frame.lame);
    let rep = |name: &str, r: T, tol: f64| {
        VerificationReport::new(name, &model, point.clone(), r, tol).with_meta("lame", &lame)
    };
    Ok(vec![
        rep("beta-symmetry", de.symmetry, 1e-6),
        rep("beta-closure", de.closure, 1e-5),
        rep("identity-beta", de.identity_beta, 1e-5),
        rep("euler-beta", de.euler_beta, 1e-5),
        rep("identity-lame", de.identity_h, 1e-6),
        rep("lame-homogeneity", de.lame_homogeneity, 1e-5).with_meta("c", de.homogeneity_constant),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub omega: [Complex<T>; 3],
    pub omega_sq: [Complex<T>; 3],
    /// Roots of the characteristic polynomial of `V` in canonical order.
    pub eigenvalues: [Complex<T>; 3],
    /// `-sum omega_k^2`.
    pub r_squared: Complex<T>,
}

pub fn omega_and_spectrum<T: Real>(frame: &CanonicalFrame<T>) -> Result<Spectrum<T>> {
    let omega = frame
        .omega
        .ok_or_else(|| Error::Unsupported(format!("omega needs three dimensions, frame has {}", frame.dim())))?;
    let omega_sq = omega.map(|w| w * w);
    let r_squared = -(omega_sq[0] + omega_sq[1] + omega_sq[2]);
    let cp = frame.vmat.char_poly_3x3();
    let poly = Poly::new(cp.to_vec());
    let ev = roots_all(&poly, T::epsilon() * T::lit(1e4))?;
    Ok(Spectrum {
        omega,
        omega_sq,
        eigenvalues: [ev[0], ev[1], ev[2]],
        r_squared,
    })
}

/// Gauge-invariant checks on `h^2`, `V` and `omega` at a three-dimensional frame.
pub fn frame_reports<T: Real>(frame: &CanonicalFrame<T>) -> Result<Vec<VerificationReport>> {
    let model = frame.model.to_string();
    let point = point_of(frame);
    let mut out = Vec::new();
    let eta_ee = T::from(frame.model.eta_unit_unit()).expect("small integer");
    if frame.lame == LameChoice::Metric {
        out.push(VerificationReport::new(
            "lame-sum",
            &model,
            point.clone(),
            (frame.lame_sum() - cr::<T>(1.0) * eta_ee).norm(),
            1e-8,
        ));
    }
    out.push(VerificationReport::new(
        "v-antisymmetry",
        &model,
        point.clone(),
        frame.vmat.max_abs_diff(&frame.vmat.map(|x| -*x).transpose()),
        1e-10,
    ));
    if frame.dim() == 3 {
        let sp = omega_and_spectrum(frame)?;
        let half_trace = frame.vmat.matmul(&frame.vmat).trace() / T::lit(2.0);
        out.push(VerificationReport::new(
            "v-trace",
            &model,
            point.clone(),
            (half_trace - sp.r_squared).norm(),
            1e-10,
        ));
        let r2 = rational::<T>(crate::models::r_squared_from_degrees(
            &frame.model.degrees(),
            frame.model.prepotential_degree(),
        ));
        let cas = sp.omega_sq.iter().fold(Complex::<T>::zero(), |a, b| a + b);
        out.push(
            VerificationReport::new("omega-casimir", &model, point.clone(), (cas + cr::<T>(1.0) * r2).norm(), 1e-9)
                .with_meta("R^2", r2),
        );
        let r = r2.sqrt();
        let expect = [cr::<T>(0.0), cr(1.0) * r, -cr::<T>(1.0) * r];
        let ev_err = spectrum_mismatch(&sp.eigenvalues, &expect);
        out.push(VerificationReport::new("v-eigenvalues", &model, point.clone(), ev_err, 1e-8));
        if eta_ee != T::zero() {
            let mut worst = T::zero();
            for i in 0..3 {
                worst = worst.max((sp.omega_sq[i] + frame.lame_sq[i] * (r2 / eta_ee)).norm());
            }
            out.push(VerificationReport::new("omega-lame-proportionality", &model, point, worst, 1e-9));
        }
    }
    Ok(out)
}

/// Mismatch between two multisets of three values.
fn spectrum_mismatch<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> T {
    crate::algebra::best_alignment(a, b).1
}

/// `d_j log tau = sum_i beta_ij^2 (u_i - u_j)`.
pub fn tau_gradient<T: Real>(frame: &CanonicalFrame<T>) -> Vec<Complex<T>> {
    let n = frame.dim();
    (0..n)
        .map(|j| {
            (0..n).fold(Complex::zero(), |acc, i| {
                acc + frame.beta[(i, j)] * frame.beta[(i, j)] * (frame.u[i] - frame.u[j])
            })
        })
        .collect()
}

/// Compares the rotation-coefficient tau gradient with the closed form through the Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct TauGradient<T> {
    pub from_beta: Vec<Complex<T>>,
    pub from_closed_form: Vec<Complex<T>>,
    pub max_difference: T,
    pub identity_sum: T,
    pub euler_sum: Complex<T>,
}

pub fn tau_gradient_check<T: Real>(frame: &CanonicalFrame<T>) -> Result<TauGradient<T>> {
    if frame.model != Model::Nm11 || frame.lame != LameChoice::Metric {
        return Err(Error::Unsupported("closed-form tau is available for nm11 with metric Lamé coefficients".into()));
    }
    let a = tau_gradient(frame);
    let g = nm11_log_tau_gradient(frame.coords[1], frame.coords[2])?;
    let b: Vec<Complex<T>> = (0..3)
        .map(|j| g[0] * frame.jac_inv[(1, j)] + g[1] * frame.jac_inv[(2, j)])
        .collect();
    let max_difference = a.iter().zip(&b).fold(T::zero(), |m, (x, y)| m.max((x - y).norm()));
    let identity_sum = a.iter().fold(Complex::zero(), |s, x| s + x).norm();
    let euler_sum = a.iter().zip(&frame.u).fold(Complex::zero(), |s, (x, u)| s + x * u);
    Ok(TauGradient {
        from_beta: a,
        from_closed_form: b,
        max_difference,
        identity_sum,
        euler_sum,
    })
}

pub fn tau_gradient_reports<T: Real>(frame: &CanonicalFrame<T>) -> Result<Vec<VerificationReport>> {
    let tg = tau_gradient_check(frame)?;
    let model = frame.model.to_string();
    let point = point_of(frame);
    Ok(vec![
        VerificationReport::new("tau-gradient", &model, point.clone(), tg.max_difference, 1e-6),
        VerificationReport::new("tau-identity", &model, point.clone(), tg.identity_sum, 1e-10),
        VerificationReport::new("tau-euler", &model, point, (tg.euler_sum - cr::<T>(0.25)).norm(), 1e-8),
    ])
}

/// `s dh1^2/ds = s (s-1) dh2^2/ds = (1-s) dh3^2/ds`, and the square of the common value
/// against `-4 R^2/eta_11 h1^2 h2^2 h3^2`, along `x2 -> x2 (1 + t)`.
pub fn lame_s_relations<T: Real>(frame: &CanonicalFrame<T>, r_squared: T) -> Result<T> {
    if frame.dim() != 3 {
        return Err(Error::Unsupported("h^2(s) relations need three dimensions".into()));
    }
    let eta_ee = T::from(frame.model.eta_unit_unit()).expect("small integer");
    if eta_ee == T::zero() {
        return Err(Error::Unsupported("h^2(s) relations need eta(e, e) != 0".into()));
    }
    let coord = frame.model.degrees().iter().position(|d| *d != frame.model.degrees()[frame.model.unit().0]);
    let a = coord.ok_or_else(|| Error::Unsupported("no coordinate transverse to the orbits".into()))?;
    let h = T::lit(1e-5) * T::one().max(frame.coords[a].norm());
    let at = |sign: T| -> Result<CanonicalFrame<T>> {
        let mut x = frame.coords.clone();
        x[a] = x[a] + cr::<T>(1.0) * (sign * h);
        canonical_frame_aligned(&frame.model, &x, frame.lame, Some(frame))
    };
    let (p, m) = (at(T::one())?, at(-T::one())?);
    let s = frame.cross_ratio().expect("three dimensions");
    let ds = p.cross_ratio().expect("3") - m.cross_ratio().expect("3");
    let d = |i: usize| (p.lame_sq[i] - m.lame_sq[i]) / ds;
    let one = cr::<T>(1.0);
    let lhs = [s * d(0), (s - one) * s * d(1), (one - s) * d(2)];
    let prod = frame.lame_sq[0] * frame.lame_sq[1] * frame.lame_sq[2];
    let square = lhs[0] * lhs[0] + prod * (T::lit(4.0) * r_squared / eta_ee);
    Ok((lhs[0] - lhs[1]).norm().max((lhs[0] - lhs[2]).norm()).max(square.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_frame;
    use crate::scalar::c;
    use num_complex::Complex64;

    fn nm11_ref() -> CanonicalFrame<f64> {
        canonical_frame(&Model::Nm11, &[cr::<f64>(0.0), cr::<f64>(2.0), cr::<f64>(1.0)], LameChoice::Metric).unwrap()
    }

    #[test]
    fn reference_frame_values() {
        let f = nm11_ref();
        let alphas = [cr::<f64>(2.0), c::<f64>(0.0, -1.0), c::<f64>(0.0, 1.0)];
        let u = [cr::<f64>(4.0), c::<f64>(-1.5, 1.0), c::<f64>(-1.5, -1.0)];
        let h2 = [cr::<f64>(0.2), c::<f64>(0.4, -0.2), c::<f64>(0.4, 0.2)];
        for i in 0..3 {
            assert!((f.alphas[i] - alphas[i]).norm() < 1e-13);
            assert!((f.u[i] - u[i]).norm() < 1e-12);
            assert!((f.lame_sq[i] - h2[i]).norm() < 1e-13);
            // du_i/dx3 = alpha_i
            assert!((f.jac[(i, 2)] - alphas[i]).norm() < 1e-12);
        }
        assert!((f.lame_sum() - cr::<f64>(1.0)).norm() < 1e-13);
    }

    #[test]
    fn beta_squared_against_closed_form() {
        // labels 1, 2 are the roots 2 and -i here; closed form gives (-38 - 41 i)/15625 for (2, -i)
        let f = nm11_ref();
        let b2 = f.beta[(0, 1)] * f.beta[(0, 1)];
        let b2c = f.beta[(0, 2)] * f.beta[(0, 2)];
        assert!((b2c - c::<f64>(-38.0, 41.0) / 15625.0).norm() < 1e-14, "{b2c}");
        assert!((b2 - c::<f64>(-38.0, -41.0) / 15625.0).norm() < 1e-14, "{b2}");
        // (u_2 - u_1)^2 beta_12^2 = -h_3^2/4
        let lhs = (f.u[1] - f.u[0]).powi(2) * b2;
        assert!((lhs + f.lame_sq[2] / 4.0).norm() < 1e-14);
    }

    #[test]
    fn fd_rotation_matches_exact() {
        let f = nm11_ref();
        let est = rotation_coefficients(&f, 1e-6).unwrap();
        assert!(est.symmetry_defect < 1e-6);
        assert!(est.beta.max_abs_diff(&f.beta) < 1e-7);
        assert_eq!(est.gauge, vec![1, 1, 1]);
    }

    #[test]
    fn spectrum_at_reference() {
        let sp = omega_and_spectrum(&nm11_ref()).unwrap();
        assert!((sp.r_squared - cr::<f64>(0.25)).norm() < 1e-13);
        let expect = [cr::<f64>(0.5), cr::<f64>(0.0), cr::<f64>(-0.5)];
        for (e, x) in sp.eigenvalues.iter().zip(expect) {
            assert!((e - x).norm() < 1e-12);
        }
    }

    #[test]
    fn one_axis_rotation_spectrum() {
        let mut f = nm11_ref();
        let z = Complex64::zero();
        let cval = c::<f64>(0.7, 0.2);
        f.omega = Some([z, z, cval]);
        f.vmat = Matrix::from_rows(vec![vec![z, cval, z], vec![-cval, z, z], vec![z, z, z]]);
        let sp = omega_and_spectrum(&f).unwrap();
        assert!((sp.r_squared + cval * cval).norm() < 1e-15);
        let r = (-cval * cval).sqrt();
        assert!(spectrum_mismatch(&sp.eigenvalues, &[z, r, -r]) < 1e-14);
    }

    #[test]
    fn tau_gradient_at_reference() {
        let tg = tau_gradient_check(&nm11_ref()).unwrap();
        assert!(tg.max_difference < 1e-12);
        assert!(tg.identity_sum < 1e-12);
        assert!((tg.euler_sum - cr::<f64>(0.25)).norm() < 1e-12);
    }

    #[test]
    fn reports_pass_for_both_models() {
        for (model, x) in [
            (Model::Nm11, [cr::<f64>(0.0), cr::<f64>(2.0), cr::<f64>(1.0)]),
            (Model::Nm02, [cr::<f64>(1.0), cr::<f64>(1.0), cr::<f64>(2.0)]),
        ] {
            let f = canonical_frame(&model, &x, LameChoice::Metric).unwrap();
            for r in darboux_egoroff_residuals(&f).unwrap().into_iter().chain(frame_reports(&f).unwrap()) {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn lame_s_relations_nm11() {
        let f = nm11_ref();
        assert!(lame_s_relations(&f, 0.25).unwrap() < 1e-6);
    }
}
