//! Painlevé VI with coefficient bracket `1/8 - s/(8y^2) + (s-1)/(8(y-1)^2) + 3s(s-1)/(8(y-s)^2)`,
//! its k = 3 and k = 6 Poncelet polygon solutions, and the map to `omega_k^2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Degeneracy, Error, Result};
use crate::eulertop::Convention;
use crate::report::{LabeledValue, VerificationReport};
use crate::scalar::{cr, Dual, Field, Real};

/// Samples with `y` or `s` this close to a pole are rejected.
pub const POLE_RADIUS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PainleveSample<T> {
    pub s: Complex<T>,
    pub y: Complex<T>,
    /// `dy/ds`.
    pub dy: Complex<T>,
    /// `d^2y/ds^2`.
    pub d2y: Complex<T>,
    pub v: Option<Complex<T>>,
}

fn check_regular<T: Real>(s: Complex<T>, y: Complex<T>) -> Result<()> {
    let r = T::lit(POLE_RADIUS);
    let one = cr::<T>(1.0);
    if s.norm() < r || (s - one).norm() < r {
        return Err(Error::degenerate(Degeneracy::SingularPoint, format!("s = {s} is a pole")));
    }
    if y.norm() < r || (y - one).norm() < r || (y - s).norm() < r {
        return Err(Error::degenerate(
            Degeneracy::SingularPoint,
            format!("y = {y} is within {POLE_RADIUS} of a pole (0, 1, s = {s})"),
        ));
    }
    Ok(())
}

/// `d^2y/ds^2` minus the right-hand side of the equation.
pub fn pvi_residual<T: Real>(p: &PainleveSample<T>) -> Result<Complex<T>> {
    check_regular(p.s, p.y)?;
    let (s, y, dy) = (p.s, p.y, p.dy);
    let one = cr::<T>(1.0);
    let eighth = T::lit(0.125);
    let first = (one / y + one / (y - one) + one / (y - s)) * dy * dy / T::lit(2.0);
    let second = (one / s + one / (s - one) + one / (y - s)) * dy;
    let bracket = one * eighth - s * eighth / (y * y) + (s - one) * eighth / ((y - one) * (y - one))
        + s * (s - one) * T::lit(0.375) / ((y - s) * (y - s));
    let third = y * (y - one) * (y - s) / (s * s * (s - one) * (s - one)) * bracket;
    Ok(p.d2y - (first - second + third))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HitchinKind {
    /// `y = x^2 (x+2)/(x^2+x+1)`, `s = x^3 (x+2)/(2x+1)`.
    K3X,
    /// `y = x (x^2+x+1)/(2x+1)`, same `s`.
    K6X,
    /// `y = (w-3)^2 (w+1)/((w+3)(w^2+3))`, `s = (w-3)^3 (w+1)/((w+3)^3 (w-1))`.
    OmegaForm,
    /// `y = (w-3)(w^2+3)/((w-1)(w+3)^2)`, same `s` as the omega form.
    K6OmegaForm,
}

impl fmt::Display for HitchinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HitchinKind::K3X => "k3",
            HitchinKind::K6X => "k6",
            HitchinKind::OmegaForm => "k3-omega",
            HitchinKind::K6OmegaForm => "k6-omega",
        })
    }
}

impl FromStr for HitchinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k3" | "k3_x" => Ok(HitchinKind::K3X),
            "k6" | "k6_x" => Ok(HitchinKind::K6X),
            "k3-omega" | "omega_form" => Ok(HitchinKind::OmegaForm),
            "k6-omega" => Ok(HitchinKind::K6OmegaForm),
            _ => Err(Error::InvalidInput(format!("unknown solution '{s}'"))),
        }
    }
}

fn degeneracy<T: Real>(kind: HitchinKind, t: Complex<T>) -> Option<String> {
    let tol = T::lit(1e-10);
    let near = |v: f64| (t - cr::<T>(v)).norm() < tol;
    match kind {
        HitchinKind::K3X | HitchinKind::K6X => {
            for (v, why) in [
                (0.0, "x = 0 (s = 0)"),
                (-2.0, "x = -2 (s = 0)"),
                (-0.5, "x = -1/2 (s has a pole)"),
                (1.0, "x = 1 (s = 1)"),
            ] {
                if near(v) {
                    return Some(why.into());
                }
            }
            ((t * t + t + cr::<T>(1.0)).norm() < tol).then(|| "x^2 + x + 1 = 0".into())
        }
        HitchinKind::OmegaForm | HitchinKind::K6OmegaForm => {
            for (v, why) in [
                (0.0, "omega = 0"),
                (1.0, "omega = 1"),
                (-1.0, "omega = -1"),
                (3.0, "omega = 3"),
                (-3.0, "omega = -3"),
            ] {
                if near(v) {
                    return Some(why.into());
                }
            }
            ((t * t + cr::<T>(3.0)).norm() < tol).then(|| "omega^2 = -3".into())
        }
    }
}

/// `(y, s)` as functions of the parameter in any field, so dual numbers give exact derivatives.
pub fn hitchin_generic<F: Field>(kind: HitchinKind, t: &F) -> (F, F) {
    let k = |v: i64| F::from_int(v);
    let t = t.clone();
    match kind {
        HitchinKind::K3X | HitchinKind::K6X => {
            let s = t.powi(3) * (t.clone() + k(2)) / (k(2) * t.clone() + k(1));
            let y = if kind == HitchinKind::K3X {
                t.clone() * t.clone() * (t.clone() + k(2)) / (t.clone() * t.clone() + t.clone() + k(1))
            } else {
                t.clone() * (t.clone() * t.clone() + t.clone() + k(1)) / (k(2) * t.clone() + k(1))
            };
            (y, s)
        }
        HitchinKind::OmegaForm | HitchinKind::K6OmegaForm => {
            let s = (t.clone() - k(3)).powi(3) * (t.clone() + k(1)) / ((t.clone() + k(3)).powi(3) * (t.clone() - k(1)));
            let w2 = t.clone() * t.clone() + k(3);
            let y = if kind == HitchinKind::OmegaForm {
                (t.clone() - k(3)).powi(2) * (t.clone() + k(1)) / ((t.clone() + k(3)) * w2)
            } else {
                (t.clone() - k(3)) * w2 / ((t.clone() - k(1)) * (t.clone() + k(3)).powi(2))
            };
            (y, s)
        }
    }
}

pub fn hitchin_solution<T: Real>(kind: HitchinKind, t: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    if let Some(why) = degeneracy(kind, t) {
        return Err(Error::degenerate(Degeneracy::ExcludedParameter, why));
    }
    Ok(hitchin_generic(kind, &t))
}

/// `x = (w - 3)/(w + 3)`.
pub fn omega_to_x<T: Real>(omega: Complex<T>) -> Complex<T> {
    (omega - cr::<T>(3.0)) / (omega + cr::<T>(3.0))
}

fn chain<T: Real>(y: [Complex<T>; 3], s: [Complex<T>; 3]) -> Result<(Complex<T>, Complex<T>)> {
    if s[1].norm() == T::zero() {
        return Err(Error::degenerate(Degeneracy::SingularPoint, "ds/dt = 0"));
    }
    let dy = y[1] / s[1];
    let d2y = (y[2] * s[1] - y[1] * s[2]) / s[1].powi(3);
    Ok((dy, d2y))
}

/// Sample with `dy/ds` and `d^2y/ds^2` from second-order dual numbers.
pub fn sample_exact<T: Real>(kind: HitchinKind, t: Complex<T>) -> Result<PainleveSample<T>> {
    hitchin_solution(kind, t)?;
    let one = cr::<T>(1.0);
    let var = Dual::new(Dual::new(t, one), Dual::new(one, Complex::zero()));
    let (y, s) = hitchin_generic(kind, &var);
    let jets = |f: Dual<Dual<Complex<T>>>| [f.re.re, f.re.eps, f.eps.eps];
    let (y0, s0) = (y.re.re, s.re.re);
    let (dy, d2y) = chain(jets(y), jets(s))?;
    check_regular(s0, y0)?;
    Ok(PainleveSample {
        s: s0,
        y: y0,
        dy,
        d2y,
        v: Some(auxiliary_v(s0, y0, dy)),
    })
}

/// Sample with parameter derivatives from five-point central differences of step `h`.
pub fn sample_fd<T: Real>(kind: HitchinKind, t: Complex<T>, h: T) -> Result<PainleveSample<T>> {
    let (y0, s0) = hitchin_solution(kind, t)?;
    check_regular(s0, y0)?;
    let mut ys = [Complex::zero(); 5];
    let mut ss = [Complex::zero(); 5];
    for (k, off) in [-2.0, -1.0, 1.0, 2.0].iter().enumerate() {
        let idx = if k < 2 { k } else { k + 1 };
        let (y, s) = hitchin_solution(kind, t + cr::<T>(*off) * h)?;
        ys[idx] = y;
        ss[idx] = s;
    }
    ys[2] = y0;
    ss[2] = s0;
    let d1 = |f: &[Complex<T>; 5]| (f[0] - f[1] * T::lit(8.0) + f[3] * T::lit(8.0) - f[4]) / (h * T::lit(12.0));
    let d2 = |f: &[Complex<T>; 5]| {
        (-f[0] + f[1] * T::lit(16.0) - f[2] * T::lit(30.0) + f[3] * T::lit(16.0) - f[4]) / (h * h * T::lit(12.0))
    };
    let (dy, d2y) = chain([y0, d1(&ys), d2(&ys)], [s0, d1(&ss), d2(&ss)])?;
    Ok(PainleveSample {
        s: s0,
        y: y0,
        dy,
        d2y,
        v: Some(auxiliary_v(s0, y0, dy)),
    })
}

/// `v` solving `dy/ds = y(y-1)(y-s)/(s(s-1)) (2v - 1/(2y) - 1/(2(y-1)) + 1/(2(y-s)))`.
pub fn auxiliary_v<T: Real>(s: Complex<T>, y: Complex<T>, dy: Complex<T>) -> Complex<T> {
    let one = cr::<T>(1.0);
    let half = T::lit(0.5);
    let lead = dy * s * (s - one) / (y * (y - one) * (y - s));
    (lead + one * half / y + one * half / (y - one) - one * half / (y - s)) * half
}

/// The three `omega_k^2` expressed through `(s, y, v)`.
pub fn omega_sq_from_y<T: Real>(s: Complex<T>, y: Complex<T>, v: Complex<T>) -> [Complex<T>; 3] {
    let one = cr::<T>(1.0);
    let half = T::lit(0.5);
    let a = v - one * half / (y - s);
    let b = v - one * half / (y - one);
    let c = v - one * half / y;
    [
        -(y - s) * y * y * (y - one) / s * a * b,
        (y - s) * (y - s) * y * (y - one) / (s * (one - s)) * b * c,
        -(y - s) * y * (y - one) * (y - one) / (one - s) * c * a,
    ]
}

/// A curve `t -> (s, y, omega_k^2)` for comparing the two descriptions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaYSample<T> {
    pub s: Complex<T>,
    pub y: Complex<T>,
    pub omega_sq: [Complex<T>; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmtoyOutcome {
    pub best: Convention,
    pub matched: f64,
    pub sum_defect: f64,
    pub per_convention: Vec<(Convention, f64)>,
}

/// Compares the `y`-side expressions with `omega_k^2` along a curve, up to relabeling of `omega`.
pub fn omtoy_check<T: Real>(
    curve: &impl Fn(Complex<T>) -> Result<OmegaYSample<T>>,
    t_grid: &[Complex<T>],
) -> Result<OmtoyOutcome> {
    let mut rhs_all = Vec::with_capacity(t_grid.len());
    let mut sum_defect = T::zero();
    for &t in t_grid {
        let h = T::lit(1e-5) * T::one().max(t.norm());
        let c = curve(t)?;
        check_regular(c.s, c.y)?;
        let p = curve(t + cr::<T>(1.0) * h)?;
        let m = curve(t - cr::<T>(1.0) * h)?;
        let ds = p.s - m.s;
        if ds.norm() == T::zero() {
            return Err(Error::InvalidInput(format!("ds/dt vanishes at t = {t}")));
        }
        let dy = (p.y - m.y) / ds;
        let v = auxiliary_v(c.s, c.y, dy);
        let rhs = omega_sq_from_y(c.s, c.y, v);
        sum_defect = sum_defect.max((rhs[0] + rhs[1] + rhs[2] + cr::<T>(0.25)).norm());
        rhs_all.push((rhs, c.omega_sq));
    }
    let mut per_convention = Vec::new();
    for conv in Convention::all() {
        let worst = rhs_all.iter().fold(T::zero(), |m, (rhs, w)| {
            let w = conv.apply(w);
            (0..3).fold(m, |m, k| m.max((rhs[k] - w[k]).norm()))
        });
        per_convention.push((conv, worst.to_f64_lossy()));
    }
    let min = per_convention.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let (best, matched) = per_convention
        .iter()
        .find(|(_, r)| *r <= 2.0 * min)
        .copied()
        .unwrap_or((Convention::identity(), f64::NAN));
    Ok(OmtoyOutcome {
        best,
        matched,
        sum_defect: sum_defect.to_f64_lossy(),
        per_convention,
    })
}

impl OmtoyOutcome {
    pub fn reports(&self, model: &str, point: Vec<LabeledValue>) -> Vec<VerificationReport> {
        let mut matched = VerificationReport::new("omtoy-match", model, point.clone(), self.matched, 1e-5)
            .with_convention(self.best.to_string());
        for (c, r) in &self.per_convention {
            matched = matched.with_meta(format!("residual[{c}]"), format!("{r:.3e}"));
        }
        vec![matched, VerificationReport::new("omtoy-sum", model, point, self.sum_defect, 1e-6)]
    }
}

/// `omtoy_check` on the nm11 curve: printed `s`, the omega-form solution `y`, and the closed-form `omega_k^2`.
pub fn nm11_omtoy_check<T: Real>(grid: &[Complex<T>]) -> Result<OmtoyOutcome> {
    let curve = |w: Complex<T>| -> Result<OmegaYSample<T>> {
        let d = crate::models::nm11_closed_forms(w)?;
        let (y, _) = hitchin_solution(HitchinKind::OmegaForm, w)?;
        Ok(OmegaYSample {
            s: d.s_printed,
            y,
            omega_sq: d.omega_sq,
        })
    };
    omtoy_check(&curve, grid)
}

/// Largest `|pvi_residual|` over the parameter values; returns it with the number of rejected samples.
pub fn pvi_scan<T: Real>(kind: HitchinKind, params: &[Complex<T>]) -> Result<(T, usize)> {
    let mut worst = T::zero();
    let mut skipped = 0;
    for &t in params {
        match sample_exact(kind, t) {
            Ok(sample) => worst = worst.max(pvi_residual(&sample)?.norm()),
            Err(e) if e.is_numerical() => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((worst, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use num_complex::Complex64;

    #[test]
    fn constant_control() {
        let p = PainleveSample {
            s: cr::<f64>(3.0),
            y: cr::<f64>(2.0),
            dy: cr::<f64>(0.0),
            d2y: cr::<f64>(0.0),
            v: None,
        };
        assert!((pvi_residual(&p).unwrap() - cr::<f64>(9.0 / 64.0)).norm() < 1e-15);
    }

    #[test]
    fn k3_and_k6_at_two() {
        let (y, s) = hitchin_solution(HitchinKind::K3X, cr::<f64>(2.0)).unwrap();
        assert!((y - cr::<f64>(16.0 / 7.0)).norm() < 1e-14);
        assert!((s - cr::<f64>(32.0 / 5.0)).norm() < 1e-14);
        let (y6, s6) = hitchin_solution(HitchinKind::K6X, cr::<f64>(2.0)).unwrap();
        assert!((y6 - cr::<f64>(14.0 / 5.0)).norm() < 1e-14);
        assert_eq!(s6, s);
        for kind in [HitchinKind::K3X, HitchinKind::K6X] {
            let r = pvi_residual(&sample_exact(kind, cr::<f64>(2.0)).unwrap()).unwrap();
            assert!(r.norm() < 1e-12, "{kind}: {r}");
        }
    }

    #[test]
    fn omega_form_reduces_to_x_form() {
        let (y, s) = hitchin_solution(HitchinKind::OmegaForm, cr::<f64>(-9.0)).unwrap();
        assert!((omega_to_x(cr::<f64>(-9.0)) - cr::<f64>(2.0)).norm() < 1e-15);
        assert!((y - cr::<f64>(16.0 / 7.0)).norm() < 1e-13);
        assert!((s - cr::<f64>(32.0 / 5.0)).norm() < 1e-13);
    }

    #[test]
    fn inverse_and_flip_gives_k6() {
        for w in [c::<f64>(0.3, 1.1), c::<f64>(-2.0, 0.4), c::<f64>(5.0, -1.0)] {
            let (y3, _) = hitchin_solution(HitchinKind::OmegaForm, -w).unwrap();
            let (y6, _) = hitchin_solution(HitchinKind::K6OmegaForm, w).unwrap();
            assert!((cr::<f64>(1.0) / y3 - y6).norm() < 1e-12);
            let (y6x, _) = hitchin_solution(HitchinKind::K6X, omega_to_x(w)).unwrap();
            assert!((y6 - y6x).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_parameters() {
        for x in [0.0, -2.0, -0.5, 1.0] {
            assert!(hitchin_solution(HitchinKind::K3X, cr::<f64>(x)).is_err());
        }
        let root = c::<f64>(-0.5, 3f64.sqrt() / 2.0);
        assert!(hitchin_solution(HitchinKind::K6X, root).is_err());
        assert!(hitchin_solution(HitchinKind::OmegaForm, cr::<f64>(3.0)).is_err());
    }

    #[test]
    fn fd_and_exact_samples_agree() {
        let t = c::<f64>(1.7, 0.3);
        let e = sample_exact(HitchinKind::K3X, t).unwrap();
        let f = sample_fd(HitchinKind::K3X, t, 1e-3).unwrap();
        assert!((e.dy - f.dy).norm() < 1e-9);
        assert!((e.d2y - f.d2y).norm() < 1e-8);
    }

    #[test]
    fn omtoy_on_nm11_curve() {
        let out = nm11_omtoy_check(&crate::models::nm11_default_grid::<f64>()).unwrap();
        assert!(out.matched < 1e-5, "{out:?}");
        assert!(out.sum_defect < 1e-6);
        assert_eq!(out.best, Convention::identity());
    }

    #[test]
    fn richardson_stable_fd_route() {
        for t in [c::<f64>(1.7, 0.3), c::<f64>(-3.1, 0.9)] {
            let a = pvi_residual(&sample_fd(HitchinKind::K6X, t, 1e-3).unwrap()).unwrap();
            let b = pvi_residual(&sample_fd(HitchinKind::K6X, t, 5e-4).unwrap()).unwrap();
            assert!(a.norm() < 1e-8 && b.norm() < 1e-8 && (a - b).norm() < 1e-8, "{a} {b}");
        }
    }

    #[test]
    fn vanishing_factor_in_second_component() {
        let (s, y) = (c::<f64>(2.0, 0.5), c::<f64>(0.3, -0.7));
        let v = cr::<f64>(0.5) / (y - 1.0);
        assert_eq!(omega_sq_from_y(s, y, v)[1], Complex64::zero());
    }
}
