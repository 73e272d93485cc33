//! Numeric substrate: polynomials, root finding, residues, small matrices.

mod linalg;
mod poly;
mod roots;

pub use linalg::Matrix;
pub use poly::Poly;
pub use roots::{ensure_simple, residue_at_simple_zero, roots_all, sort_canonical, COALESCENCE_REL};

use num_complex::Complex;

use crate::scalar::{Field, Real};

/// Lifts simple roots computed in plain complex arithmetic into the field of `poly`.
///
/// Runs Newton's method in `F` starting from the plain roots; each step doubles
/// the number of correct infinitesimal orders, so three steps are exact for
/// first and second order dual numbers.
pub fn lift_roots<T: Real, F: Field<Real = T>>(poly: &Poly<F>, roots: &[Complex<T>]) -> Vec<F> {
    let deriv = poly.derivative();
    roots
        .iter()
        .map(|&r| {
            let mut z = F::constant(r);
            for _ in 0..3 {
                z = z.clone() - poly.eval(&z) / deriv.eval(&z);
            }
            z
        })
        .collect()
}

/// Index permutation `perm` minimizing `max_i |a[i] - b[perm[i]]|`; ties go to the
/// lexicographically smallest permutation. Returns the permutation and the mismatch.
pub fn best_alignment<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> (Vec<usize>, T) {
    assert_eq!(a.len(), b.len());
    let mut best: Option<(Vec<usize>, T)> = None;
    for perm in permutations(a.len()) {
        let err = a
            .iter()
            .zip(perm.iter())
            .fold(T::zero(), |m, (x, &j)| m.max((*x - b[j]).norm()));
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((perm, err));
        }
    }
    best.expect("at least one permutation")
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cr, Dual};
    use num_complex::Complex64;

    #[test]
    fn lifted_root_derivative_matches_implicit_formula() {
        // p(z) = z^2 - t at t = 4: root 2, dz/dt = 1 / (2z) = 1/4
        let t = Dual::variable(cr::<f64>(4.0));
        let p = Poly::new(vec![-t, Dual::lift(cr::<f64>(0.0)), Dual::lift(cr::<f64>(1.0))]);
        let lifted = lift_roots(&p, &[cr::<f64>(2.0)]);
        assert!((lifted[0].re - cr::<f64>(2.0)).norm() < 1e-15);
        assert!((lifted[0].eps - cr::<f64>(0.25)).norm() < 1e-15);
    }

    #[test]
    fn permutation_enumeration() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn alignment_finds_permutation() {
        let a: Vec<Complex64> = vec![cr::<f64>(1.0), cr::<f64>(2.0), cr::<f64>(3.0)];
        let b = vec![cr::<f64>(3.0), cr::<f64>(1.0), cr::<f64>(2.0)];
        let (perm, err) = best_alignment(&a, &b);
        assert_eq!(perm, vec![1, 2, 0]);
        assert_eq!(err, 0.0);
    }
}
