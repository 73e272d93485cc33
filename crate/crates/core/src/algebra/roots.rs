//! Roots of complex polynomials.
//!
//! Cubics (every N = 3 model) go through Cardano's formula plus one Newton
//! polish step; other degrees use Durand-Kerner (Weierstrass) simultaneous
//! iteration. Results are returned in a canonical order so that index-based
//! quantities downstream are reproducible.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Degeneracy, Error, Result};
use crate::scalar::Real;

const DK_MAX_ITER: usize = 2000;

/// Relative separation below which two roots count as coalescing.
pub const COALESCENCE_REL: f64 = 1e-8;

/// All roots of `p`, with multiplicity, in canonical order.
///
/// Every returned root satisfies `|p(root)| <= tol * (1 + max|coeff|)`.
pub fn roots_all<T: Real>(p: &Poly<Complex<T>>, tol: T) -> Result<Vec<Complex<T>>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!("root tolerance must be positive, got {tol}")));
    }
    let degree = p.degree();
    if degree == 0 {
        return Err(Error::degenerate(
            Degeneracy::ConstantPolynomial,
            "polynomial of degree 0 has no roots",
        ));
    }
    let monic = p.monic();
    let mut roots = match degree {
        1 => vec![-monic.coeffs()[0]],
        3 => {
            let seed = cardano(&monic);
            let polished: Vec<_> = seed.iter().map(|&r| newton_step(&monic, r)).collect();
            if max_residual(p, &polished) <= acceptance(p, tol) {
                polished
            } else {
                durand_kerner(&monic, Some(polished))
            }
        }
        _ => durand_kerner(&monic, None),
    };

    // A couple of Newton steps against the original polynomial; kept only when they help.
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let cand = newton_step(p, *r);
            if p.eval(&cand).norm() < p.eval(r).norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }

    let worst = max_residual(p, &roots);
    if !(worst <= acceptance(p, tol)) {
        return Err(Error::NoConvergence {
            iterations: DK_MAX_ITER,
            residual: worst.to_f64_lossy(),
        });
    }
    sort_canonical(&mut roots);
    Ok(roots)
}

fn acceptance<T: Real>(p: &Poly<Complex<T>>, tol: T) -> T {
    let max_coeff = p.coeffs().iter().fold(T::zero(), |m, c| m.max(c.norm()));
    tol * (T::one() + max_coeff)
}

fn max_residual<T: Real>(p: &Poly<Complex<T>>, roots: &[Complex<T>]) -> T {
    roots
        .iter()
        .fold(T::zero(), |m, r| m.max(p.eval(r).norm()))
}

fn newton_step<T: Real>(p: &Poly<Complex<T>>, z: Complex<T>) -> Complex<T> {
    let d = p.derivative().eval(&z);
    if d.norm() == T::zero() {
        return z;
    }
    z - p.eval(&z) / d
}

/// Canonical root order: descending real part; real parts equal up to
/// `1e-9 * max(1, max|root|)` are tied and ordered by ascending imaginary part.
pub fn sort_canonical<T: Real>(roots: &mut [Complex<T>]) {
    let scale = roots.iter().fold(T::one(), |m, r| m.max(r.norm()));
    let tie = T::lit(1e-9).max(T::epsilon() * T::lit(64.0)) * scale;
    roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal));
    let mut start = 0;
    while start < roots.len() {
        let mut end = start + 1;
        while end < roots.len() && (roots[end - 1].re - roots[end].re).abs() <= tie {
            end += 1;
        }
        roots[start..end]
            .sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal));
        start = end;
    }
}

/// Errors when two roots are closer than `1e-8 * max(1, max|root|)`.
pub fn ensure_simple<T: Real>(roots: &[Complex<T>], kind: Degeneracy) -> Result<()> {
    let scale = roots.iter().fold(T::one(), |m, r| m.max(r.norm()));
    let threshold = T::lit(COALESCENCE_REL).max(T::epsilon() * T::lit(100.0)) * scale;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let gap = (roots[i] - roots[j]).norm();
            if gap < threshold {
                return Err(Error::degenerate(
                    kind,
                    format!("roots {i} and {j} are {:.3e} apart", gap.to_f64_lossy()),
                ));
            }
        }
    }
    Ok(())
}

/// Cardano's formula for a monic cubic.
fn cardano<T: Real>(monic: &Poly<Complex<T>>) -> Vec<Complex<T>> {
    let k = monic.coeffs();
    let (c0, c1, c2) = (k[0], k[1], k[2]);
    let three = T::lit(3.0);
    let shift = c2 / three;
    let p = c1 - c2 * c2 / three;
    let q = c2 * c2 * c2 * T::lit(2.0 / 27.0) - c2 * c1 / three + c0;
    let disc = (q * q / T::lit(4.0) + p * p * p / T::lit(27.0)).sqrt();
    let half_q = q / T::lit(2.0);
    let cube = if (-half_q + disc).norm() >= (-half_q - disc).norm() {
        -half_q + disc
    } else {
        -half_q - disc
    };
    let unit = Complex::new(T::lit(-0.5), three.sqrt() / T::lit(2.0));
    if cube.norm() == T::zero() {
        // p = q = 0: triple root.
        return vec![-shift; 3];
    }
    let u = cube.powf(T::one() / three);
    let mut out = Vec::with_capacity(3);
    let mut rot = Complex::<T>::one();
    for _ in 0..3 {
        let ui = u * rot;
        let vi = if ui.norm() == T::zero() { Complex::zero() } else { -p / (ui * three) };
        out.push(ui + vi - shift);
        rot = rot * unit;
    }
    out
}

/// Durand-Kerner iteration on a monic polynomial.
fn durand_kerner<T: Real>(monic: &Poly<Complex<T>>, seed: Option<Vec<Complex<T>>>) -> Vec<Complex<T>> {
    let n = monic.degree();
    let coeffs = monic.coeffs();
    let mut z = seed.unwrap_or_else(|| {
        // Fujiwara-type bound on root moduli.
        let bound = (0..n).fold(T::zero(), |m, k| {
            let c = coeffs[k].norm();
            m.max(c.powf(T::one() / T::from_usize(n - k).unwrap()))
        });
        let radius = T::lit(2.0) * bound.max(T::lit(0.5));
        (0..n)
            .map(|k| {
                let angle = T::TAU() * T::from_usize(k).unwrap() / T::from_usize(n).unwrap() + T::lit(0.4);
                Complex::from_polar(radius, angle)
            })
            .collect()
    });
    for _ in 0..DK_MAX_ITER {
        let mut biggest = T::zero();
        for i in 0..n {
            let mut denom = Complex::<T>::one();
            for j in 0..n {
                if i != j {
                    denom = denom * (z[i] - z[j]);
                }
            }
            if denom.norm() == T::zero() {
                // Perturb off an exact collision.
                z[i] = z[i] + Complex::new(T::lit(1e-7), T::lit(1e-7));
                biggest = T::infinity();
                continue;
            }
            let delta = monic.eval(&z[i]) / denom;
            z[i] = z[i] - delta;
            biggest = biggest.max(delta.norm() / T::one().max(z[i].norm()));
        }
        if biggest <= T::epsilon() * T::lit(8.0) {
            break;
        }
    }
    z
}

/// Residue of `N / W'` at a simple zero of `W'`: `N(alpha) / W''(alpha)`.
pub fn residue_at_simple_zero<T: Real>(
    numerator_value: Complex<T>,
    second_derivative_value: Complex<T>,
    tol: T,
) -> Result<Complex<T>> {
    if !(second_derivative_value.norm() > tol) {
        return Err(Error::degenerate(
            Degeneracy::VanishingSecondDerivative,
            format!(
                "|W''| = {:.3e} at a critical point; critical points are coalescing",
                second_derivative_value.norm().to_f64_lossy()
            ),
        ));
    }
    Ok(numerator_value / second_derivative_value)
}
