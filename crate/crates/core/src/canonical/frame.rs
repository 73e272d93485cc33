use num_complex::Complex;
use num_traits::Zero;

use crate::algebra::{best_alignment, ensure_simple, lift_roots, Matrix};
use crate::error::{Degeneracy, Error, Result};
use crate::frobenius::critical_points;
use crate::models::Model;
use crate::scalar::{sqrt_near, Dual, Field, Real};

/// Which Lamé coefficients the rotation coefficients are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LameChoice {
    /// `h_i^2 = 1/W''(alpha_i)`, the diagonal of the flat metric in canonical coordinates.
    #[default]
    Metric,
    /// `h_i^2 = dx_k/du_i` for model coordinate `k`.
    Coordinate(usize),
}

#[derive(Clone, Debug)]
pub struct CanonicalFrame<T> {
    pub model: Model,
    pub coords: Vec<Complex<T>>,
    pub lame: LameChoice,
    pub alphas: Vec<Complex<T>>,
    pub u: Vec<Complex<T>>,
    /// `jac[(i, a)] = du_i/dx_a`.
    pub jac: Matrix<Complex<T>>,
    /// `jac_inv[(a, i)] = dx_a/du_i`.
    pub jac_inv: Matrix<Complex<T>>,
    pub lame_sq: Vec<Complex<T>>,
    /// Square roots of `lame_sq` in the chosen sign gauge.
    pub h: Vec<Complex<T>>,
    /// Symmetric rotation coefficients, zero diagonal.
    pub beta: Matrix<Complex<T>>,
    /// `V_ij = (u_j - u_i) beta_ij`.
    pub vmat: Matrix<Complex<T>>,
    /// `(omega_1, omega_2, omega_3)` with `omega_k = (u_j - u_i) beta_ij`, `(i, j, k)` cyclic; three dimensions only.
    pub omega: Option<[Complex<T>; 3]>,
    /// `|beta - beta^T|_max` before symmetrization.
    pub symmetry_defect: T,
    /// Sign applied to each principal root `h_i`.
    pub gauge: Vec<i8>,
}

/// Values shared by every field type: critical points, `u`, Jacobian, Lamé squares.
pub(crate) struct Core<F> {
    pub alphas: Vec<F>,
    pub u: Vec<F>,
    pub jac: Matrix<F>,
    pub lame_sq: Vec<F>,
}

/// Plain critical points, relabeled to follow `reference` when given.
pub(crate) fn ordered_roots<T: Real>(
    model: &Model,
    coords: &[Complex<T>],
    reference: Option<&[Complex<T>]>,
) -> Result<Vec<Complex<T>>> {
    let w = model.potential(coords)?;
    let roots = critical_points(&w)?;
    Ok(match reference {
        Some(r) if r.len() == roots.len() => {
            let (perm, _) = best_alignment(r, &roots);
            perm.iter().map(|&j| roots[j]).collect()
        }
        _ => roots,
    })
}

pub(crate) fn core<T: Real, F: Field<Real = T>>(
    model: &Model,
    coords: &[F],
    roots: &[Complex<T>],
    lame: LameChoice,
) -> Result<Core<F>> {
    let w = model.potential(coords)?;
    let alphas = lift_roots(&w.critical_numerator(), roots);
    let u: Vec<F> = alphas.iter().map(|a| w.eval(a)).collect();
    let dim = model.dim();
    let mut jac = Matrix::zeros(alphas.len(), dim);
    for a in 0..dim {
        let seeded: Vec<Dual<F>> = coords
            .iter()
            .enumerate()
            .map(|(b, x)| if a == b { Dual::variable(x.clone()) } else { Dual::lift(x.clone()) })
            .collect();
        let wa = model.potential(&seeded)?;
        for (i, al) in alphas.iter().enumerate() {
            jac[(i, a)] = wa.eval(&Dual::lift(al.clone())).eps;
        }
    }
    let lame_sq = match lame {
        LameChoice::Metric => {
            let pole = w.pole().clone();
            let order = w.m() as u32 + 1;
            (0..alphas.len())
                .map(|i| {
                    let num = (alphas[i].clone() - pole.clone()).powi(order);
                    let den = (0..alphas.len())
                        .filter(|&j| j != i)
                        .fold(F::one(), |acc, j| acc * (alphas[i].clone() - alphas[j].clone()));
                    num / den
                })
                .collect()
        }
        LameChoice::Coordinate(k) => {
            if k >= dim {
                return Err(Error::InvalidInput(format!("coordinate index {k} out of range for {model}")));
            }
            let inv = jac.inverse()?;
            (0..alphas.len()).map(|i| inv[(k, i)].clone()).collect()
        }
    };
    Ok(Core { alphas, u, jac, lame_sq })
}

fn check_u<T: Real>(u: &[Complex<T>]) -> Result<()> {
    ensure_simple(u, Degeneracy::CoalescingCanonicalCoordinates)
}

/// Exact `d(h_i^2)/du_j` via dual numbers in each model coordinate and the inverse Jacobian.
fn lame_gradient<T: Real>(
    model: &Model,
    coords: &[Complex<T>],
    roots: &[Complex<T>],
    lame: LameChoice,
    jac_inv: &Matrix<Complex<T>>,
) -> Result<Matrix<Complex<T>>> {
    let dim = model.dim();
    let n = roots.len();
    // dx[(i, a)] = d(h_i^2)/dx_a
    let mut dx = Matrix::zeros(n, dim);
    for a in 0..dim {
        let seeded: Vec<Dual<Complex<T>>> = coords
            .iter()
            .enumerate()
            .map(|(b, &x)| if a == b { Dual::variable(x) } else { Dual::lift(x) })
            .collect();
        let c = core(model, &seeded, roots, lame)?;
        for i in 0..n {
            dx[(i, a)] = c.lame_sq[i].eps;
        }
    }
    Ok(dx.matmul(jac_inv))
}

/// Frame at `coords`; with `reference`, critical points and square-root branches follow the reference frame.
pub fn canonical_frame_aligned<T: Real>(
    model: &Model,
    coords: &[Complex<T>],
    lame: LameChoice,
    reference: Option<&CanonicalFrame<T>>,
) -> Result<CanonicalFrame<T>> {
    let roots = ordered_roots(model, coords, reference.map(|r| r.alphas.as_slice()))?;
    let c = core(model, coords, &roots, lame)?;
    check_u(&c.u)?;
    let jac_inv = c.jac.inverse()?;
    let n = roots.len();

    let principal: Vec<Complex<T>> = match reference {
        Some(r) => c.lame_sq.iter().zip(&r.h).map(|(&x, &h)| sqrt_near(x, h)).collect(),
        None => c.lame_sq.iter().map(|x| x.sqrt()).collect(),
    };
    if principal.iter().any(|h| h.norm() == T::zero()) {
        return Err(Error::degenerate(Degeneracy::SingularPoint, "a Lamé coefficient vanishes"));
    }
    let grad = lame_gradient(model, coords, &roots, lame, &jac_inv)?;
    let raw = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::zero()
        } else {
            grad[(i, j)] / (principal[i] * principal[j] * T::lit(2.0))
        }
    });

    let (gauge, symmetry_defect) = if reference.is_some() {
        (vec![1i8; n], raw.max_abs_diff(&raw.transpose()))
    } else {
        gauge_search(&raw)
    };
    let h: Vec<_> = principal
        .iter()
        .zip(&gauge)
        .map(|(&h, &g)| if g < 0 { -h } else { h })
        .collect();
    let beta = Matrix::from_fn(n, n, |i, j| {
        let sign = T::from(gauge[i] * gauge[j]).expect("sign");
        (raw[(i, j)] + raw[(j, i)]) * sign / T::lit(2.0)
    });
    let vmat = Matrix::from_fn(n, n, |i, j| (c.u[j] - c.u[i]) * beta[(i, j)]);
    let omega = (n == 3).then(|| [vmat[(1, 2)], vmat[(2, 0)], vmat[(0, 1)]]);
    Ok(CanonicalFrame {
        model: *model,
        coords: coords.to_vec(),
        lame,
        alphas: c.alphas,
        u: c.u,
        jac: c.jac,
        jac_inv,
        lame_sq: c.lame_sq,
        h,
        beta,
        vmat,
        omega,
        symmetry_defect,
        gauge,
    })
}

/// Critical points, canonical coordinates, Jacobian, Lamé and rotation coefficients.
pub fn canonical_frame<T: Real>(model: &Model, coords: &[Complex<T>], lame: LameChoice) -> Result<CanonicalFrame<T>> {
    canonical_frame_aligned(model, coords, lame, None)
}

/// Sign vector `g` minimizing `|g_i g_j b_ij - g_j g_i b_ji|`; ties keep the earliest, starting from all plus.
pub fn gauge_search<T: Real>(raw: &Matrix<Complex<T>>) -> (Vec<i8>, T) {
    let n = raw.rows();
    let mut best: Option<(Vec<i8>, T)> = None;
    for mask in 0u32..(1 << n) {
        let g: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let mut defect = T::zero();
        for i in 0..n {
            for j in 0..n {
                let s = T::from(g[i] * g[j]).expect("sign");
                defect = defect.max((raw[(i, j)] * s - raw[(j, i)] * s).norm());
            }
        }
        if best.as_ref().is_none_or(|(_, d)| defect < *d) {
            best = Some((g, defect));
        }
    }
    best.expect("at least one gauge")
}

/// Newton iteration for `x` with `u(x) = target`, seeded at `seed`.
///
/// Stops when `|u(x) - target| <= 1e-12 max(1, |u|)` (one extra step is then taken) or fails after 50 iterations.
pub fn invert_canonical<T: Real>(
    model: &Model,
    seed: &[Complex<T>],
    target: &[Complex<T>],
    reference_alphas: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    let mut x = seed.to_vec();
    let scale = target.iter().fold(T::one(), |m, u| m.max(u.norm()));
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0)) * scale;
    let mut converged = false;
    let mut last = T::infinity();
    for _ in 0..50 {
        let roots = ordered_roots(model, &x, Some(reference_alphas))?;
        let c = core(model, &x, &roots, LameChoice::Metric)?;
        let du: Vec<Complex<T>> = target.iter().zip(&c.u).map(|(t, u)| t - u).collect();
        last = du.iter().fold(T::zero(), |m, d| m.max(d.norm()));
        let dx = c.jac.inverse()?.matvec(&du);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi = *xi + d;
        }
        if converged {
            return Ok(x);
        }
        if last <= tol {
            converged = true;
        }
    }
    if converged {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        iterations: 50,
        residual: last.to_f64_lossy(),
    })
}

/// `d/du_j` of a frame quantity by central differences with step `h_step max(1, |u_j|)`.
pub fn u_derivative<T: Real>(
    frame: &CanonicalFrame<T>,
    j: usize,
    h_step: T,
    f: &impl Fn(&CanonicalFrame<T>) -> Vec<Complex<T>>,
) -> Result<Vec<Complex<T>>> {
    let h = h_step * T::one().max(frame.u[j].norm());
    let shifted = |sign: T| -> Result<CanonicalFrame<T>> {
        let mut target = frame.u.clone();
        target[j] = target[j] + Complex::new(sign * h, T::zero());
        let x = invert_canonical(&frame.model, &frame.coords, &target, &frame.alphas)?;
        canonical_frame_aligned(&frame.model, &x, frame.lame, Some(frame))
    };
    let plus = f(&shifted(T::one())?);
    let minus = f(&shifted(-T::one())?);
    Ok(plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| (p - m) / (h + h))
        .collect())
}

impl<T: Real> CanonicalFrame<T> {
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// `(u_2 - u_1)/(u_3 - u_1)`.
    pub fn cross_ratio(&self) -> Option<Complex<T>> {
        (self.dim() == 3).then(|| (self.u[1] - self.u[0]) / (self.u[2] - self.u[0]))
    }

    pub fn lame_sum(&self) -> Complex<T> {
        self.lame_sq.iter().fold(Complex::zero(), |a, b| a + b)
    }

    /// `omega_k^2`, independent of the sign gauge.
    pub fn omega_sq(&self) -> Option<[Complex<T>; 3]> {
        self.omega.map(|w| w.map(|x| x * x))
    }

    /// `d x_a / du_i` recomputed by central differences through Newton inversion.
    pub fn inverse_jacobian_fd(&self, h_step: T) -> Result<Matrix<Complex<T>>> {
        let n = self.dim();
        let mut out = Matrix::zeros(self.coords.len(), n);
        for j in 0..n {
            let col = u_derivative(self, j, h_step, &|f| f.coords.clone())?;
            for (a, v) in col.into_iter().enumerate() {
                out[(a, j)] = v;
            }
        }
        Ok(out)
    }

    /// Identity check `jac * (dx/du) = 1`.
    pub fn jacobian_identity_defect(&self, h_step: T) -> Result<T> {
        let fd = self.inverse_jacobian_fd(h_step)?;
        Ok(self.jac.matmul(&fd).max_abs_diff(&Matrix::identity(self.dim())))
    }
}
