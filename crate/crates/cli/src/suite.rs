//! Check suites assembled from the core library.

use frobkit::algebra::best_alignment;
use frobkit::canonical::{
    canonical_frame, darboux_egoroff_residuals, frame_reports, tau_gradient_reports, CanonicalFrame, LameChoice,
    U_STEP,
};
use frobkit::eulertop::Convention;
use frobkit::frobenius::{flat_metric, prepotential_checks, structure_constants, wdvv_residual};
use frobkit::models::{nm02_closed_forms, nm02_omega_checks, nm11_default_grid, nm11_euler_top, nm11_tau_reports};
use frobkit::report::labeled_point;
use frobkit::{Error, Model, Result, VerificationReport, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn default_point(model: &Model) -> Option<Vec<C64>> {
    let r = |v: f64| C64::new(v, 0.0);
    match model {
        Model::Nm11 => Some(vec![r(0.0), r(2.0), r(1.0)]),
        Model::Nm02 => Some(vec![r(1.0), r(1.0), r(2.0)]),
        Model::Custom { .. } => None,
    }
}

pub fn check_dimension(model: &Model, x: &[C64]) -> Result<()> {
    if x.len() != model.dim() {
        return Err(Error::InvalidInput(format!(
            "model {model} takes {} coordinates ({}), got {}",
            model.dim(),
            model.coordinate_labels().join(", "),
            x.len()
        )));
    }
    Ok(())
}

fn disc(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> C64 {
    C64::from_polar(rng.gen_range(r_min..r_max), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A random point with a non-degenerate frame; `x2` is real and positive for the shipped models.
pub fn random_point(model: &Model, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let x = match model {
            Model::Nm11 => vec![disc(rng, 0.0, 1.0), C64::new(rng.gen_range(0.4..3.0), 0.0), disc(rng, 0.7, 1.4)],
            Model::Nm02 => vec![disc(rng, 0.6, 1.5), C64::new(rng.gen_range(0.5..2.0), 0.0), disc(rng, 0.0, 1.0)],
            Model::Custom { .. } => (0..model.dim()).map(|_| disc(rng, 0.5, 1.5)).collect(),
        };
        if canonical_frame(model, &x, LameChoice::Metric).is_ok() {
            return x;
        }
    }
}

fn residue_reports(model: &Model, x: &[C64], point: &[frobkit::LabeledValue]) -> Result<Vec<VerificationReport>> {
    let name = model.to_string();
    let expected = model.expected_metric::<f64>();
    let eta = flat_metric(model, x)?;
    let cs = structure_constants(model, x)?;
    let (e, sign) = model.unit();
    let sign = sign as f64;
    let d = model.dim();
    let mut unit = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            unit = unit.max((cs[(a, b, e)] * sign - expected[(a, b)]).norm());
        }
    }
    Ok(vec![
        VerificationReport::new("flat-metric", &name, point.to_vec(), eta.max_abs_diff(&expected), 1e-9),
        VerificationReport::new("c-symmetry", &name, point.to_vec(), cs.symmetry_defect(), 1e-10),
        VerificationReport::new("c-unit", &name, point.to_vec(), unit, 1e-9),
        VerificationReport::new("wdvv-residue", &name, point.to_vec(), wdvv_residual(&cs, &expected.inverse()?), 1e-8),
    ])
}

fn nm02_oracle(frame: &CanonicalFrame<f64>, point: &[frobkit::LabeledValue]) -> Result<Vec<VerificationReport>> {
    let x = &frame.coords;
    let d = nm02_closed_forms(x[0], x[1], x[2])?;
    let alphas = d.f.map(|f| f + x[2]);
    let (perm, err) = best_alignment(&alphas, &frame.alphas);
    let omega_sq = frame.omega_sq().ok_or_else(|| Error::Unsupported("omega needs three dimensions".into()))?;
    let worst = |a: &[C64], b: &[C64; 3]| (0..3).fold(0.0f64, |m, k| m.max((a[perm[k]] - b[k]).norm()));
    let rep = |name: &str, r: f64| VerificationReport::new(name, "nm02", point.to_vec(), r, 1e-8);
    Ok(vec![
        rep("oracle-alpha", err),
        rep("oracle-u", worst(&frame.u, &d.u)),
        rep("oracle-lame", worst(&frame.lame_sq, &d.lame_sq)),
        rep("oracle-omega", worst(&omega_sq, &d.omega_sq)),
    ])
}

/// Every check that applies to the model at `x`.
pub fn verify_suite(model: &Model, x: &[C64], perm_search: bool) -> Result<Vec<VerificationReport>> {
    check_dimension(model, x)?;
    let point = labeled_point(&model.coordinate_labels(), x);
    let frame = canonical_frame(model, x, LameChoice::Metric)?;
    let mut out = residue_reports(model, x, &point)?;
    if model.has_closed_forms() {
        match prepotential_checks(model, x) {
            Ok(r) => out.extend(r),
            // the prepotential logarithm needs x2 > 0
            Err(Error::Branch(_)) => {}
            Err(e) => return Err(e),
        }
    }
    out.extend(darboux_egoroff_residuals(&frame)?);
    out.extend(frame_reports(&frame)?);
    out.push(VerificationReport::new(
        "jacobian-identity",
        model.to_string(),
        point.clone(),
        frame.jacobian_identity_defect(U_STEP)?,
        1e-6,
    ));
    match model {
        Model::Nm11 => {
            out.extend(tau_gradient_reports(&frame)?);
            out.extend(nm11_tau_reports(x[1], x[2])?);
        }
        Model::Nm02 => {
            out.extend(nm02_oracle(&frame, &point)?);
            let d = nm02_closed_forms(x[0], x[1], x[2])?;
            out.extend(nm02_omega_checks(&d, perm_search)?);
        }
        Model::Custom { .. } => {}
    }
    Ok(out)
}

/// Tau-function checks; nm11 only.
pub fn tau_suite(model: &Model, x: &[C64]) -> Result<Vec<VerificationReport>> {
    if *model != Model::Nm11 {
        return Err(Error::Unsupported(format!("tau checks are available for nm11, not {model}")));
    }
    check_dimension(model, x)?;
    let frame = canonical_frame(model, x, LameChoice::Metric)?;
    let mut out = tau_gradient_reports(&frame)?;
    out.extend(nm11_tau_reports(x[1], x[2])?);
    Ok(out)
}

/// Euler-top residual along the model's closed-form curve.
pub fn top_curve_suite(model: &Model, x: &[C64], perm_search: bool) -> Result<Vec<VerificationReport>> {
    let conventions = if perm_search { Convention::all() } else { vec![Convention::identity()] };
    match model {
        Model::Nm11 => {
            let out = nm11_euler_top(&nm11_default_grid::<f64>(), &conventions)?;
            let point = vec![
                frobkit::LabeledValue::new("omega-start", C64::new(0.0, 0.8)),
                frobkit::LabeledValue::new("omega-end", C64::new(0.0, 1.2)),
            ];
            Ok(vec![out.into_report("nm11-euler-top", "nm11", point)])
        }
        Model::Nm02 => {
            check_dimension(model, x)?;
            let d = nm02_closed_forms(x[0], x[1], x[2])?;
            Ok(nm02_omega_checks(&d, perm_search)?
                .into_iter()
                .filter(|r| r.check_name.contains("euler-top"))
                .collect())
        }
        Model::Custom { .. } => Err(Error::Unsupported("no closed-form Euler-top curve for custom models".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    #[test]
    fn reference_suites_pass() {
        for model in [Model::Nm11, Model::Nm02] {
            let reports = verify_suite(&model, &default_point(&model).unwrap(), true).unwrap();
            assert!(reports.len() >= 10);
            for r in &reports {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn custom_model_runs_generic_checks() {
        let model = Model::Custom { n: 1, m: 2 };
        let x = random_point(&model, &mut ChaCha8Rng::seed_from_u64(3));
        let reports = verify_suite(&model, &x, true).unwrap();
        assert!(reports.iter().any(|r| r.check_name == "flat-metric"));
        assert!(reports.iter().all(|r| r.passed), "{reports:?}");
    }

    #[test]
    fn wrong_dimension_is_invalid_input() {
        let err = verify_suite(&Model::Nm11, &[C64::new(1.0, 0.0)], true).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }
}
