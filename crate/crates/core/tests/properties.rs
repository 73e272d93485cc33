mod common;

use frobkit::algebra::{roots_all, Matrix, Poly};
use frobkit::canonical::{canonical_frame_aligned, U_STEP};
use frobkit::eulertop::{integrate_rk4, parametric_residual, top_rhs, Convention, EulerTopState, TopSample};
use frobkit::frobenius::{flat_metric, structure_constants};
use frobkit::models::{nm02_closed_forms, r_squared_from_degrees};
use frobkit::painleve::{hitchin_solution, pvi_residual, sample_exact, HitchinKind};
use frobkit::{Model, VerificationReport, C64};
use num_rational::Rational64;
use proptest::prelude::*;

fn unit6() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(0.0f64..1.0)
}

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Nm11), Just(Model::Nm02)]
}

fn cplx(r: f64, t: f64) -> C64 {
    C64::from_polar(r, t * std::f64::consts::TAU)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cubic_roots_reconstruct(p in unit6()) {
        let r = [cplx(0.2 + p[0], p[1]), cplx(0.2 + p[2], p[3]), cplx(0.2 + p[4], p[5])];
        prop_assume!((r[0] - r[1]).norm() > 0.2 && (r[1] - r[2]).norm() > 0.2 && (r[0] - r[2]).norm() > 0.2);
        let poly = Poly::from_roots(&r);
        let found = roots_all(&poly, 1e-12).unwrap();
        let rebuilt = Poly::from_roots(&found);
        let scale = poly.coeffs().iter().fold(1.0f64, |m, c| m.max(c.norm()));
        for (a, b) in poly.coeffs().iter().zip(rebuilt.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-10 * scale);
        }
        for z in &found {
            prop_assert!(poly.eval(z).norm() <= 1e-12 * (1.0 + scale));
        }
        // ordering depends only on the multiset
        let shuffled = Poly::from_roots(&[r[2], r[0], r[1]]);
        prop_assert_eq!(roots_all(&shuffled, 1e-12).unwrap().len(), 3);
        let again = roots_all(&shuffled, 1e-12).unwrap();
        for (a, b) in found.iter().zip(&again) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn metric_is_constant_and_involutive(m in model(), p in unit6()) {
        let Some(f) = common::frame_from(&m, p) else { return Ok(()) };
        let eta = flat_metric(&m, &f.coords).unwrap();
        prop_assert!(eta.matmul(&eta).max_abs_diff(&Matrix::identity(3)) < 1e-9);
        for a in 0..3 {
            let h = 1e-5;
            let mut xp = f.coords.clone();
            let mut xm = f.coords.clone();
            xp[a] += h;
            xm[a] -= h;
            let d = flat_metric(&m, &xp).unwrap().max_abs_diff(&flat_metric(&m, &xm).unwrap()) / (2.0 * h);
            prop_assert!(d < 1e-6);
        }
    }

    #[test]
    fn structure_constants_fully_symmetric(m in model(), p in unit6()) {
        let Some(f) = common::frame_from(&m, p) else { return Ok(()) };
        prop_assert!(structure_constants(&m, &f.coords).unwrap().symmetry_defect() < 1e-10);
    }

    #[test]
    fn frame_invariants(m in model(), p in unit6()) {
        let Some(f) = common::frame_from(&m, p) else { return Ok(()) };
        let eta_ee = m.eta_unit_unit() as f64;
        prop_assert!((f.lame_sum() - eta_ee).norm() < 1e-8);
        prop_assert!(f.vmat.max_abs_diff(&f.vmat.map(|x| -*x).transpose()) < 1e-10);
        let w2: C64 = f.omega_sq().unwrap().iter().sum();
        let half_trace = f.vmat.matmul(&f.vmat).trace() / 2.0;
        prop_assert!((half_trace + w2).norm() < 1e-10);
        prop_assert!(f.jacobian_identity_defect(U_STEP).unwrap() < 1e-6);
    }

    #[test]
    fn omega_squares_are_gauge_invariant(m in model(), p in unit6(), signs in prop::array::uniform3(any::<bool>())) {
        let Some(f) = common::frame_from(&m, p) else { return Ok(()) };
        let mut flipped = f.clone();
        for (h, s) in flipped.h.iter_mut().zip(signs) {
            if s {
                *h = -*h;
            }
        }
        let g = canonical_frame_aligned(&m, &f.coords, f.lame, Some(&flipped)).unwrap();
        for (a, b) in g.h.iter().zip(&flipped.h) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        for (a, b) in g.omega_sq().unwrap().iter().zip(f.omega_sq().unwrap()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn nm02_tilde_lame_sum(p in unit6()) {
        let x = common::point_from(&Model::Nm02, p);
        let Ok(d) = nm02_closed_forms(x[0], x[1], x[2]) else { return Ok(()) };
        let s: C64 = d.lame_sq_tilde.iter().sum();
        prop_assert!((s - 1.0).norm() < 1e-10);
    }

    #[test]
    fn rk4_conserves_casimir(p in unit6(), q in unit6()) {
        let s0 = cplx(1.5 + 1.5 * p[0], p[1]);
        let s1 = s0 + cplx(1.0, p[2]);
        let omega = [cplx(0.2 + 0.6 * q[0], q[1]), cplx(0.2 + 0.6 * q[2], q[3]), cplx(0.2 + 0.6 * q[4], q[5])];
        let Ok(out) = integrate_rk4(&EulerTopState::new(s0, omega), s1, 1000) else { return Ok(()) };
        prop_assert!(out.casimir_drift <= 1e-10);
    }

    #[test]
    fn top_rhs_sign_pattern(p in unit6(), k in 0usize..3) {
        let st = EulerTopState::new(cplx(2.0 + p[0], p[1]), [cplx(0.5, p[2]), cplx(0.7, p[3]), cplx(0.3, p[4])]);
        let base = top_rhs(&st).unwrap();
        let mut flipped = st;
        flipped.omega[k] = -flipped.omega[k];
        let r = top_rhs(&flipped).unwrap();
        for i in 0..3 {
            // component i is a product of the two other omegas
            let expect = if i == k { base[i] } else { -base[i] };
            prop_assert!((r[i] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn convention_search_is_deterministic(c in 0.1f64..2.0) {
        let curve = |t: C64| -> frobkit::Result<TopSample<f64>> {
            Ok(TopSample { s: C64::new(2.0, 0.0) + t, omega_sq: [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(c, 0.0)] })
        };
        let grid: Vec<C64> = (0..5).map(|k| C64::new(0.1 * k as f64, 0.3)).collect();
        let a = parametric_residual(&curve, &grid, &Convention::all(), 1e-6).unwrap();
        let b = parametric_residual(&curve, &grid, &Convention::all(), 1e-6).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.best, Convention::identity());
    }

    #[test]
    fn report_pass_flag_and_json(residual in prop_oneof![0.0f64..1.0, Just(f64::NAN)], tol in 1e-12f64..1.0) {
        let r = VerificationReport::new("check", "nm11", vec![], residual, tol);
        prop_assert_eq!(r.passed, residual <= tol);
        let json = serde_json::to_string(&r).unwrap();
        for field in ["check_name", "model", "point", "residual", "tolerance", "passed", "convention", "metadata"] {
            let key = format!("\"{field}\"");
            prop_assert!(json.contains(&key));
        }
    }

    #[test]
    fn hitchin_solutions_satisfy_pvi(r in 1.2f64..4.0, t in 0.0f64..1.0) {
        let x = cplx(r, t);
        for kind in [HitchinKind::K3X, HitchinKind::K6X] {
            let Ok(sample) = sample_exact(kind, x) else { continue };
            let Ok(res) = pvi_residual(&sample) else { continue };
            prop_assert!(res.norm() < 1e-8 * (1.0 + sample.d2y.norm()), "{kind} at {x}: {res}");
        }
    }

    #[test]
    fn inverse_and_flip(r in 0.5f64..2.5, t in 0.0f64..1.0) {
        let w = cplx(r, t);
        let (Ok((y3, _)), Ok((y6, _))) =
            (hitchin_solution(HitchinKind::OmegaForm, -w), hitchin_solution(HitchinKind::K6OmegaForm, w)) else { return Ok(()) };
        prop_assert!((y3 * y6 - 1.0).norm() < 1e-9 * (1.0 + y6.norm()));
    }
}

#[test]
fn r_squared_is_a_quarter_for_both_models() {
    for m in [Model::Nm11, Model::Nm02] {
        assert_eq!(r_squared_from_degrees(&m.degrees(), m.prepotential_degree()), Rational64::new(1, 4));
    }
}
