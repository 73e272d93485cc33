//! Euler top in the cross-ratio variable `s`:
//!
//! ```text
//! dw1/ds = w2 w3 / s,   dw2/ds = w1 w3 / (s (s - 1)),   dw3/ds = w1 w2 / (1 - s)
//! ```
//!
//! with Casimir `w1^2 + w2^2 + w3^2`.

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Degeneracy, Error, Result};
use crate::report::{LabeledValue, VerificationReport};
use crate::scalar::{cr, sqrt_near, Real};

/// Minimal distance of `s` from the singular points 0 and 1 in [`top_rhs`].
pub const SINGULAR_TOL: f64 = 1e-8;
/// Required clearance of an integration path from 0 and 1.
pub const PATH_MARGIN: f64 = 0.05;
/// Relative parameter step for curve derivatives.
pub const CURVE_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerTopState<T> {
    pub s: Complex<T>,
    pub omega: [Complex<T>; 3],
}

impl<T: Real> EulerTopState<T> {
    pub fn new(s: Complex<T>, omega: [Complex<T>; 3]) -> Self {
        Self { s, omega }
    }

    pub fn casimir(&self) -> Complex<T> {
        self.omega.iter().fold(Complex::zero(), |acc, w| acc + w * w)
    }
}

pub fn top_rhs<T: Real>(state: &EulerTopState<T>) -> Result<[Complex<T>; 3]> {
    let s = state.s;
    let one = cr::<T>(1.0);
    let tol = T::lit(SINGULAR_TOL);
    if s.norm() <= tol || (s - one).norm() <= tol {
        return Err(Error::degenerate(
            Degeneracy::SingularPoint,
            format!("s = {s} is a singular point of the top equations"),
        ));
    }
    let [w1, w2, w3] = state.omega;
    Ok([w2 * w3 / s, w1 * w3 / (s * (s - one)), w1 * w2 / (one - s)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rk4Outcome<T> {
    pub state: EulerTopState<T>,
    pub casimir_drift: T,
    /// `drift / (|path| / steps)^4`.
    pub drift_constant: T,
}

fn distance_to_segment<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    let t = t.max(T::zero()).min(T::one());
    (p - (a + d * t)).norm()
}

/// Classical fourth-order Runge-Kutta along the straight segment from `initial.s` to `s_end`.
pub fn integrate_rk4<T: Real>(initial: &EulerTopState<T>, s_end: Complex<T>, steps: usize) -> Result<Rk4Outcome<T>> {
    if steps == 0 {
        return Err(Error::InvalidInput("RK4 needs at least one step".into()));
    }
    let margin = T::lit(PATH_MARGIN);
    for p in [cr::<T>(0.0), cr(1.0)] {
        if distance_to_segment(p, initial.s, s_end) < margin {
            return Err(Error::degenerate(
                Degeneracy::SingularPoint,
                format!("path from {} to {s_end} passes within {PATH_MARGIN} of s = {}", initial.s, p.re),
            ));
        }
    }
    let n = T::from_usize(steps).expect("step count");
    let h = (s_end - initial.s) / n;
    let mut st = *initial;
    let add = |st: &EulerTopState<T>, k: &[Complex<T>; 3], f: Complex<T>| EulerTopState {
        s: st.s + f,
        omega: [st.omega[0] + k[0] * f, st.omega[1] + k[1] * f, st.omega[2] + k[2] * f],
    };
    for _ in 0..steps {
        let k1 = top_rhs(&st)?;
        let k2 = top_rhs(&add(&st, &k1, h / T::lit(2.0)))?;
        let k3 = top_rhs(&add(&st, &k2, h / T::lit(2.0)))?;
        let k4 = top_rhs(&add(&st, &k3, h))?;
        let mut omega = st.omega;
        for i in 0..3 {
            omega[i] = omega[i] + (k1[i] + k2[i] * T::lit(2.0) + k3[i] * T::lit(2.0) + k4[i]) * h / T::lit(6.0);
        }
        st = EulerTopState { s: st.s + h, omega };
    }
    st.s = s_end;
    let drift = (st.casimir() - initial.casimir()).norm();
    let step = h.norm();
    Ok(Rk4Outcome {
        state: st,
        casimir_drift: drift,
        drift_constant: if step > T::zero() { drift / step.powi(4) } else { T::zero() },
    })
}

/// Relabeling `w'_k = w_{perm[k]}` together with the matching Möbius image of `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Convention {
    pub perm: [usize; 3],
}

impl Convention {
    pub fn identity() -> Self {
        Self { perm: [0, 1, 2] }
    }

    /// The six relabelings in lexicographic order.
    pub fn all() -> Vec<Self> {
        crate::algebra::permutations(3)
            .into_iter()
            .map(|p| Self { perm: [p[0], p[1], p[2]] })
            .collect()
    }

    /// `s` computed from `u' = (u_{p0}, u_{p1}, u_{p2})`.
    pub fn mobius<T: Real>(&self, s: Complex<T>) -> Complex<T> {
        let one = cr::<T>(1.0);
        match self.perm {
            [0, 1, 2] => s,
            [0, 2, 1] => one / s,
            [1, 0, 2] => s / (s - one),
            [1, 2, 0] => (s - one) / s,
            [2, 0, 1] => one / (one - s),
            [2, 1, 0] => one - s,
            _ => unreachable!("not a permutation of 0..3"),
        }
    }

    pub fn mobius_name(&self) -> &'static str {
        match self.perm {
            [0, 1, 2] => "s",
            [0, 2, 1] => "1/s",
            [1, 0, 2] => "s/(s-1)",
            [1, 2, 0] => "(s-1)/s",
            [2, 0, 1] => "1/(1-s)",
            [2, 1, 0] => "1-s",
            _ => unreachable!("not a permutation of 0..3"),
        }
    }

    pub fn apply<X: Copy>(&self, w: &[X; 3]) -> [X; 3] {
        [w[self.perm[0]], w[self.perm[1]], w[self.perm[2]]]
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.perm;
        write!(f, "omega'=(w{},w{},w{}), s'={}", a + 1, b + 1, c + 1, self.mobius_name())
    }
}

/// A point of a curve given through `omega_k^2`, which fixes `omega_k` up to sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopSample<T> {
    pub s: Complex<T>,
    pub omega_sq: [Complex<T>; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParametricOutcome {
    pub best: Convention,
    pub residual: f64,
    pub tolerance: f64,
    pub per_convention: Vec<(Convention, f64)>,
    pub grid_points: usize,
}

impl ParametricOutcome {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }

    pub fn into_report(self, check: &str, model: &str, point: Vec<LabeledValue>) -> VerificationReport {
        let mut rep = VerificationReport::new(check, model, point, self.residual, self.tolerance)
            .with_convention(self.best.to_string())
            .with_meta("grid_points", self.grid_points);
        for (c, r) in &self.per_convention {
            rep = rep.with_meta(format!("residual[{c}]"), format!("{r:.3e}"));
        }
        rep
    }
}

/// Top residual at one grid point for one convention, minimized over the sign parity of `omega`.
fn point_residual<T: Real>(
    curve: &impl Fn(Complex<T>) -> Result<TopSample<T>>,
    t: Complex<T>,
    conv: &Convention,
) -> Result<T> {
    let (state, minus, plus) = gauge_triplet(curve, t, conv)?;
    let ds = plus.s - minus.s;
    if ds.norm() <= T::epsilon() * T::lit(1e3) * T::one().max(state.s.norm()) {
        return Err(Error::InvalidInput(format!("ds/dt vanishes on the grid at t = {t}")));
    }
    let mut best = T::infinity();
    for flip in [false, true] {
        let sign = |w: Complex<T>| if flip { -w } else { w };
        let st = EulerTopState {
            s: state.s,
            omega: [sign(state.omega[0]), state.omega[1], state.omega[2]],
        };
        let rhs = top_rhs(&st)?;
        let mut worst = T::zero();
        for k in 0..3 {
            let (hi, lo) = if k == 0 {
                (sign(plus.omega[0]), sign(minus.omega[0]))
            } else {
                (plus.omega[k], minus.omega[k])
            };
            worst = worst.max(((hi - lo) / ds - rhs[k]).norm());
        }
        best = best.min(worst);
    }
    Ok(best)
}

/// The relabeled state at `t` (principal square roots) and its neighbours at `t -+ h`
/// on the continuous square-root branch.
fn gauge_triplet<T: Real>(
    curve: &impl Fn(Complex<T>) -> Result<TopSample<T>>,
    t: Complex<T>,
    conv: &Convention,
) -> Result<(EulerTopState<T>, EulerTopState<T>, EulerTopState<T>)> {
    let h = T::lit(CURVE_STEP) * T::one().max(t.norm());
    let centre = curve(t)?;
    let w0 = conv.apply(&centre.omega_sq).map(|w| w.sqrt());
    let at = |dt: T| -> Result<EulerTopState<T>> {
        let smp = curve(t + cr::<T>(1.0) * dt)?;
        let sq = conv.apply(&smp.omega_sq);
        Ok(EulerTopState {
            s: conv.mobius(smp.s),
            omega: [sqrt_near(sq[0], w0[0]), sqrt_near(sq[1], w0[1]), sqrt_near(sq[2], w0[2])],
        })
    };
    Ok((EulerTopState { s: conv.mobius(centre.s), omega: w0 }, at(-h)?, at(h)?))
}

/// State at `t` in convention `conv` with the sign parity that satisfies the top locally.
pub fn gauge_fixed_state<T: Real>(
    curve: &impl Fn(Complex<T>) -> Result<TopSample<T>>,
    t: Complex<T>,
    conv: &Convention,
) -> Result<EulerTopState<T>> {
    let (state, minus, plus) = gauge_triplet(curve, t, conv)?;
    let ds = plus.s - minus.s;
    let mut best = (T::infinity(), state);
    for flip in [false, true] {
        let mut st = state;
        let (mut hi, mut lo) = (plus.omega[0], minus.omega[0]);
        if flip {
            st.omega[0] = -st.omega[0];
            hi = -hi;
            lo = -lo;
        }
        let rhs = top_rhs(&st)?;
        let mut worst = ((hi - lo) / ds - rhs[0]).norm();
        for k in 1..3 {
            worst = worst.max(((plus.omega[k] - minus.omega[k]) / ds - rhs[k]).norm());
        }
        if worst < best.0 {
            best = (worst, st);
        }
    }
    Ok(best.1)
}

/// Residuals below this fraction of the tolerance are treated as ties.
pub const TIE_FRACTION: f64 = 1e-3;

/// Max top residual over the grid for each convention; the best convention is the
/// lexicographically smallest within a factor 2 of the minimum or below `TIE_FRACTION * tolerance`.
pub fn parametric_residual<T: Real>(
    curve: &impl Fn(Complex<T>) -> Result<TopSample<T>>,
    t_grid: &[Complex<T>],
    conventions: &[Convention],
    tolerance: f64,
) -> Result<ParametricOutcome> {
    if t_grid.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "parametric residual needs at least 5 grid points, got {}",
            t_grid.len()
        )));
    }
    if conventions.is_empty() {
        return Err(Error::InvalidInput("no conventions to test".into()));
    }
    let mut per_convention = Vec::with_capacity(conventions.len());
    for conv in conventions {
        let mut worst = T::zero();
        for &t in t_grid {
            let r = point_residual(curve, t, conv)?;
            worst = if r.is_nan() { T::nan() } else { worst.max(r) };
        }
        per_convention.push((*conv, worst.to_f64_lossy()));
    }
    let min = per_convention
        .iter()
        .map(|(_, r)| *r)
        .fold(f64::INFINITY, |a, b| if b < a { b } else { a });
    let mut ranked: Vec<_> = per_convention.clone();
    ranked.sort_by(|a, b| a.0.cmp(&b.0));
    let (best, residual) = ranked
        .iter()
        .find(|(_, r)| *r <= (2.0 * min).max(TIE_FRACTION * tolerance))
        .copied()
        .unwrap_or((ranked[0].0, f64::NAN));
    Ok(ParametricOutcome {
        best,
        residual,
        tolerance,
        per_convention,
        grid_points: t_grid.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use num_complex::Complex64;

    #[test]
    fn rhs_examples() {
        let st = EulerTopState::new(cr::<f64>(2.0), [cr::<f64>(1.0), cr::<f64>(1.0), cr::<f64>(1.0)]);
        assert_eq!(top_rhs(&st).unwrap(), [cr::<f64>(0.5), cr::<f64>(0.5), cr::<f64>(-1.0)]);
        let fixed = EulerTopState::new(cr::<f64>(2.0), [cr::<f64>(0.0), cr::<f64>(0.0), cr::<f64>(3.0)]);
        assert_eq!(top_rhs(&fixed).unwrap(), [cr::<f64>(0.0); 3]);
        assert!(top_rhs(&EulerTopState::new(cr::<f64>(1.0), [cr::<f64>(1.0); 3])).is_err());
    }

    #[test]
    fn fixed_point_integrates_to_itself() {
        let st = EulerTopState::new(c::<f64>(2.0, 0.5), [cr::<f64>(0.0), cr::<f64>(0.0), c::<f64>(0.3, 0.1)]);
        let out = integrate_rk4(&st, c::<f64>(3.0, -0.5), 100).unwrap();
        assert_eq!(out.state.omega, st.omega);
        assert_eq!(out.casimir_drift, 0.0);
    }

    #[test]
    fn path_near_singularity_is_rejected() {
        let st = EulerTopState::new(c::<f64>(1.0, 0.5), [cr::<f64>(0.1); 3]);
        assert!(integrate_rk4(&st, c::<f64>(1.02, -0.5), 10).is_err());
        assert!(integrate_rk4(&st, c::<f64>(0.5, -0.5), 10).is_ok());
    }

    #[test]
    fn fourth_order_convergence() {
        let st = EulerTopState::new(c::<f64>(2.0, 1.0), [c::<f64>(0.4, 0.1), c::<f64>(-0.3, 0.2), c::<f64>(0.5, -0.2)]);
        let end = c::<f64>(2.5, 1.8);
        let coarse = integrate_rk4(&st, end, 10).unwrap();
        let fine = integrate_rk4(&st, end, 20).unwrap();
        let ratio = coarse.casimir_drift / fine.casimir_drift;
        assert!((10.0..24.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn mobius_matches_relabeled_cross_ratio() {
        let u = [c::<f64>(0.3, 0.1), c::<f64>(1.7, -0.4), c::<f64>(-0.5, 0.9)];
        let s = (u[1] - u[0]) / (u[2] - u[0]);
        for conv in Convention::all() {
            let v = conv.apply(&u);
            let expect = (v[1] - v[0]) / (v[2] - v[0]);
            assert!((conv.mobius(s) - expect).norm() < 1e-14, "{conv}");
        }
    }

    #[test]
    fn constant_curve_has_zero_residual() {
        let curve = |t: Complex64| -> Result<TopSample<f64>> {
            Ok(TopSample {
                s: cr::<f64>(2.0) + t,
                omega_sq: [cr::<f64>(0.0), cr::<f64>(0.0), cr::<f64>(0.09)],
            })
        };
        let grid: Vec<_> = (0..5).map(|k| cr::<f64>(0.1 * k as f64)).collect();
        let out = parametric_residual(&curve, &grid, &Convention::all(), 1e-9).unwrap();
        assert!(out.per_convention.iter().all(|(_, r)| *r == 0.0));
        assert_eq!(out.best, Convention::identity());
    }
}
