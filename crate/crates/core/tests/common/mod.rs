#![allow(dead_code)]

use frobkit::canonical::{canonical_frame, CanonicalFrame, LameChoice};
use frobkit::{Model, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn disc(rng: &mut ChaCha8Rng, r_min: f64, r_max: f64) -> C64 {
    let r = rng.gen_range(r_min..r_max);
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, th)
}

/// A point with `x2` real and positive, so the prepotential logarithms are on the principal branch.
pub fn raw_point(model: &Model, rng: &mut ChaCha8Rng) -> Vec<C64> {
    match model {
        Model::Nm11 => vec![disc(rng, 0.0, 1.0), C64::new(rng.gen_range(0.4..3.0), 0.0), disc(rng, 0.7, 1.4)],
        Model::Nm02 => vec![disc(rng, 0.6, 1.5), C64::new(rng.gen_range(0.5..2.0), 0.0), disc(rng, 0.0, 1.0)],
        Model::Custom { .. } => (0..model.dim()).map(|_| disc(rng, 0.5, 1.5)).collect(),
    }
}

fn min_gap(v: &[C64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            g = g.min((v[i] - v[j]).norm());
        }
    }
    g
}

/// Frame at a point whose critical points, canonical coordinates and Lamé coefficients are well separated.
pub fn regular_frame(model: &Model, rng: &mut ChaCha8Rng) -> CanonicalFrame<f64> {
    loop {
        let x = raw_point(model, rng);
        let Ok(f) = canonical_frame(model, &x, LameChoice::Metric) else { continue };
        let h_ok = f.lame_sq.iter().all(|h| h.norm() > 0.05 && h.norm() < 20.0);
        if min_gap(&f.alphas) > 0.3 && min_gap(&f.u) > 0.3 && h_ok {
            return f;
        }
    }
}

pub fn regular_points(model: &Model, seed: u64, count: usize) -> Vec<CanonicalFrame<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| regular_frame(model, &mut r)).collect()
}

/// Point built from six numbers in `[0, 1)`, in the same ranges as `raw_point`.
pub fn point_from(model: &Model, p: [f64; 6]) -> Vec<C64> {
    let polar = |r: f64, t: f64| C64::from_polar(r, t * std::f64::consts::TAU);
    match model {
        Model::Nm11 => vec![polar(p[0], p[1]), C64::new(0.4 + 2.6 * p[2], 0.0), polar(0.7 + 0.7 * p[3], p[4])],
        Model::Nm02 => vec![polar(0.6 + 0.9 * p[0], p[1]), C64::new(0.5 + 1.5 * p[2], 0.0), polar(p[3], p[4])],
        Model::Custom { .. } => p.iter().take(model.dim()).map(|&v| polar(0.5 + v, v * 7.0)).collect(),
    }
}

/// Frame at `point_from(model, p)` if it is well separated.
pub fn frame_from(model: &Model, p: [f64; 6]) -> Option<CanonicalFrame<f64>> {
    let f = canonical_frame(model, &point_from(model, p), LameChoice::Metric).ok()?;
    let h_ok = f.lame_sq.iter().all(|h| h.norm() > 0.05 && h.norm() < 20.0);
    (min_gap(&f.alphas) > 0.3 && min_gap(&f.u) > 0.3 && h_ok).then_some(f)
}
