use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::algebra::{ensure_simple, roots_all, Matrix};
use crate::error::{Degeneracy, Error, Result};
use crate::frobenius::RationalPotential;
use crate::models::Model;
use crate::scalar::{Dual, Field, Real};

/// Dense rank-3 tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Field> Tensor3<F> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![F::zero(); dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> F) -> Self {
        let mut t = Self::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    t[(a, b, c)] = f(a, b, c);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl<T: Real> Tensor3<Complex<T>> {
    /// Largest deviation from full index symmetry.
    pub fn symmetry_defect(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let x = self[(a, b, c)];
                    for y in [self[(a, c, b)], self[(b, a, c)], self[(b, c, a)], self[(c, a, b)], self[(c, b, a)]] {
                        worst = worst.max((x - y).norm());
                    }
                }
            }
        }
        worst
    }
}

impl<F> Index<(usize, usize, usize)> for Tensor3<F> {
    type Output = F;
    fn index(&self, (a, b, c): (usize, usize, usize)) -> &F {
        &self.data[(a * self.dim + b) * self.dim + c]
    }
}

impl<F> IndexMut<(usize, usize, usize)> for Tensor3<F> {
    fn index_mut(&mut self, (a, b, c): (usize, usize, usize)) -> &mut F {
        &mut self.data[(a * self.dim + b) * self.dim + c]
    }
}

/// Residual tolerance handed to the root finder.
pub(crate) fn root_tol<T: Real>() -> T {
    T::epsilon() * T::lit(1e4)
}

/// How tangent fields `dW/dx_a` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TangentMethod {
    /// Dual-number differentiation of the potential coefficients.
    #[default]
    Exact,
    /// Central differences of the coefficients with step `1e-6 max(1, |x_a|)`.
    FiniteDifference,
}

/// Critical points of `W` with `W''` and the tangent fields evaluated there.
#[derive(Clone, Debug)]
pub struct ResidueData<T> {
    pub potential: RationalPotential<Complex<T>>,
    pub alphas: Vec<Complex<T>>,
    pub w2: Vec<Complex<T>>,
    /// `tangents[(a, i)] = (dW/dx_a)(alpha_i)`.
    pub tangents: Matrix<Complex<T>>,
}

/// Simple critical points of `W` in canonical order.
pub fn critical_points<T: Real>(w: &RationalPotential<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let alphas = roots_all(&w.critical_numerator(), root_tol())?;
    ensure_simple(&alphas, Degeneracy::CoalescingCriticalPoints)?;
    let pole = *w.pole();
    let scale = alphas.iter().fold(T::one(), |m, a| m.max(a.norm()));
    if alphas.iter().any(|a| (a - pole).norm() < T::lit(1e-8) * scale) {
        return Err(Error::degenerate(
            Degeneracy::CoalescingCriticalPoints,
            "critical point collides with the pole",
        ));
    }
    Ok(alphas)
}

/// `(dW/dx_a)(z)` for each model coordinate and each `z`, at fixed `z`.
pub fn tangent_values<T: Real>(
    model: &Model,
    coords: &[Complex<T>],
    points: &[Complex<T>],
    method: TangentMethod,
) -> Result<Matrix<Complex<T>>> {
    let dim = model.dim();
    let mut out = Matrix::zeros(dim, points.len());
    for a in 0..dim {
        let w = match method {
            TangentMethod::Exact => {
                let seeded: Vec<Dual<Complex<T>>> = coords
                    .iter()
                    .enumerate()
                    .map(|(b, &x)| if b == a { Dual::variable(x) } else { Dual::lift(x) })
                    .collect();
                model.potential(&seeded)?
            }
            TangentMethod::FiniteDifference => fd_tangent_potential(model, coords, a)?,
        };
        for (i, &z) in points.iter().enumerate() {
            out[(a, i)] = w.eval(&Dual::lift(z)).eps;
        }
    }
    Ok(out)
}

/// Potential whose coefficient infinitesimals are central differences along coordinate `a`.
fn fd_tangent_potential<T: Real>(
    model: &Model,
    coords: &[Complex<T>],
    a: usize,
) -> Result<RationalPotential<Dual<Complex<T>>>> {
    let h = T::lit(1e-6) * T::one().max(coords[a].norm());
    let shifted = |sign: T| {
        let mut c = coords.to_vec();
        c[a] = c[a] + Complex::new(sign * h, T::zero());
        model.potential(&c)
    };
    let (base, plus, minus) = (model.potential(coords)?, shifted(T::one())?, shifted(-T::one())?);
    let two_h = Complex::new(h + h, T::zero());
    let mix = |b: &[Complex<T>], p: &[Complex<T>], q: &[Complex<T>]| -> Vec<Dual<Complex<T>>> {
        b.iter()
            .zip(p.iter().zip(q))
            .map(|(&b, (&p, &q))| Dual::new(b, (p - q) / two_h))
            .collect()
    };
    RationalPotential::new(
        base.n(),
        base.m(),
        mix(base.a(), plus.a(), minus.a()),
        mix(base.v(), plus.v(), minus.v()),
        Dual::new(*base.pole(), (*plus.pole() - *minus.pole()) / two_h),
    )
}

pub fn residue_data<T: Real>(model: &Model, coords: &[Complex<T>], method: TangentMethod) -> Result<ResidueData<T>> {
    let potential = model.potential(coords)?;
    let alphas = critical_points(&potential)?;
    let w2: Vec<_> = alphas.iter().map(|a| potential.deriv2(a)).collect();
    let scale = w2.iter().fold(T::zero(), |m, x| m.max(x.norm()));
    if w2.iter().any(|x| x.norm() <= T::epsilon() * T::lit(1e3) * scale.max(T::one())) {
        return Err(Error::degenerate(Degeneracy::VanishingSecondDerivative, "W'' vanishes at a critical point"));
    }
    let tangents = tangent_values(model, coords, &alphas, method)?;
    Ok(ResidueData {
        potential,
        alphas,
        w2,
        tangents,
    })
}

impl<T: Real> ResidueData<T> {
    pub fn metric(&self) -> Matrix<Complex<T>> {
        let d = self.tangents.rows();
        Matrix::from_fn(d, d, |a, b| {
            (0..self.alphas.len()).fold(Complex::zero(), |acc, i| {
                acc + self.tangents[(a, i)] * self.tangents[(b, i)] / self.w2[i]
            })
        })
    }

    pub fn structure_constants(&self) -> Tensor3<Complex<T>> {
        let d = self.tangents.rows();
        Tensor3::from_fn(d, |a, b, c| {
            (0..self.alphas.len()).fold(Complex::zero(), |acc, i| {
                acc + self.tangents[(a, i)] * self.tangents[(b, i)] * self.tangents[(c, i)] / self.w2[i]
            })
        })
    }
}

/// `eta_ab = sum_i (dW/dx_a)(dW/dx_b)/W''` over critical points, in model coordinates.
pub fn flat_metric<T: Real>(model: &Model, coords: &[Complex<T>]) -> Result<Matrix<Complex<T>>> {
    Ok(residue_data(model, coords, TangentMethod::Exact)?.metric())
}

/// `c_abc = sum_i (dW/dx_a)(dW/dx_b)(dW/dx_c)/W''` over critical points.
pub fn structure_constants<T: Real>(model: &Model, coords: &[Complex<T>]) -> Result<Tensor3<Complex<T>>> {
    Ok(residue_data(model, coords, TangentMethod::Exact)?.structure_constants())
}

/// `max |c_{ab d} eta^{dg} c_{g s r} - c_{as d} eta^{dg} c_{g b r}|`.
pub fn wdvv_residual<T: Real>(c: &Tensor3<Complex<T>>, eta_inv: &Matrix<Complex<T>>) -> T {
    let d = c.dim();
    assert_eq!((eta_inv.rows(), eta_inv.cols()), (d, d), "dimension mismatch");
    // raised[(a, b, g)] = c_{ab d} eta^{d g}
    let raised = Tensor3::from_fn(d, |a, b, g| {
        (0..d).fold(Complex::<T>::zero(), |acc, k| acc + c[(a, b, k)] * eta_inv[(k, g)])
    });
    let mut worst = T::zero();
    for a in 0..d {
        for b in 0..d {
            for s in 0..d {
                for r in 0..d {
                    let mut lhs = Complex::<T>::zero();
                    let mut rhs = Complex::<T>::zero();
                    for g in 0..d {
                        lhs = lhs + raised[(a, b, g)] * c[(g, s, r)];
                        rhs = rhs + raised[(a, s, g)] * c[(g, b, r)];
                    }
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, cr};
    use num_complex::Complex64;

    fn pt(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| cr::<f64>(x)).collect()
    }

    #[test]
    fn nm11_metric_at_reference() {
        let eta = flat_metric(&Model::Nm11, &pt(&[0.0, 2.0, 1.0])).unwrap();
        assert!(eta.max_abs_diff(&Model::Nm11.expected_metric()) < 1e-12);
    }

    #[test]
    fn nm02_metric_is_antidiagonal() {
        let eta = flat_metric(&Model::Nm02, &pt(&[1.0, 1.0, 2.0])).unwrap();
        assert!(eta.max_abs_diff(&Model::Nm02.expected_metric()) < 1e-12);
    }

    #[test]
    fn nm11_structure_constants() {
        let x = [c::<f64>(0.3, 0.1), c::<f64>(2.0, -0.5), c::<f64>(1.2, 0.4)];
        let t = structure_constants(&Model::Nm11, &x).unwrap();
        assert!((t[(0, 0, 0)] - cr::<f64>(1.0)).norm() < 1e-12);
        assert!((t[(0, 1, 2)] - cr::<f64>(1.0)).norm() < 1e-12);
        assert!((t[(1, 1, 1)] - cr::<f64>(1.0) / x[1]).norm() < 1e-12);
        assert!((t[(1, 2, 2)] - x[2]).norm() < 1e-12);
        assert!((t[(2, 2, 2)] - x[1]).norm() < 1e-12);
        assert!(t.symmetry_defect() < 1e-12);
    }

    #[test]
    fn finite_difference_tangents_agree() {
        let x = [c::<f64>(0.3, 0.1), c::<f64>(2.0, -0.5), c::<f64>(1.2, 0.4)];
        let exact = residue_data(&Model::Nm11, &x, TangentMethod::Exact).unwrap();
        let fd = residue_data(&Model::Nm11, &x, TangentMethod::FiniteDifference).unwrap();
        assert!(exact.tangents.max_abs_diff(&fd.tangents) < 1e-8);
    }

    #[test]
    fn single_index_wdvv_is_zero() {
        let mut t = Tensor3::zeros(1);
        t[(0, 0, 0)] = cr::<f64>(1.0);
        assert_eq!(wdvv_residual(&t, &Matrix::identity(1)), 0.0);
    }

    #[test]
    fn custom_model_metric() {
        // n = 1, m = 2: x-block antidiagonal in 3 entries, x~-block [[1]]
        let model = Model::Custom { n: 1, m: 2 };
        let x = [c::<f64>(0.4, 0.2), c::<f64>(1.3, -0.1), c::<f64>(-0.7, 0.5), c::<f64>(0.25, 0.3)];
        let eta = flat_metric(&model, &x).unwrap();
        assert!(eta.max_abs_diff(&model.expected_metric()) < 1e-10);
    }
}
