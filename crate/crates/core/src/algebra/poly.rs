use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Field;

/// Dense polynomial, coefficients lowest degree first.
///
/// Trailing zero coefficients are trimmed on construction, so the last
/// coefficient is nonzero unless the polynomial is identically zero (which is
/// stored as the single coefficient `0`).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(F::zero());
        }
        Self { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z - root`.
    pub fn linear_factor(root: F) -> Self {
        Self::new(vec![-root, F::one()])
    }

    /// `(z - root)^k`.
    pub fn linear_power(root: F, k: u32) -> Self {
        let factor = Self::linear_factor(root);
        (0..k).fold(Self::constant(F::one()), |acc, _| &acc * &factor)
    }

    pub fn from_roots(roots: &[F]) -> Self {
        roots.iter().fold(Self::constant(F::one()), |acc, r| {
            &acc * &Self::linear_factor(r.clone())
        })
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &F {
        self.coeffs.last().expect("nonempty")
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(F::zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * F::from_int(k as i64))
            .collect();
        Self::new(coeffs)
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Self {
        let lead = self.leading().clone();
        Self::new(self.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
    }

    pub fn scale(&self, k: F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Self) -> Poly<F> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(F::zero);
                let b = rhs.coeffs.get(k).cloned().unwrap_or_else(F::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Self) -> Poly<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Self) -> Poly<F> {
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use num_complex::Complex64;

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly::new(vec![cr::<f64>(1.0), cr::<f64>(2.0), cr::<f64>(0.0), cr::<f64>(0.0)]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Poly::<Complex64>::new(vec![]).degree(), 0);
    }

    #[test]
    fn product_and_derivative() {
        // (z - 1)(z + 2) = z^2 + z - 2
        let p = Poly::from_roots(&[cr::<f64>(1.0), cr::<f64>(-2.0)]);
        assert_eq!(p.coeffs(), &[cr::<f64>(-2.0), cr::<f64>(1.0), cr::<f64>(1.0)]);
        assert_eq!(p.derivative().coeffs(), &[cr::<f64>(1.0), cr::<f64>(2.0)]);
        assert_eq!(p.eval(&cr::<f64>(3.0)), cr::<f64>(10.0));
        assert_eq!(Poly::linear_power(cr::<f64>(1.0), 2).coeffs(), &[cr::<f64>(1.0), cr::<f64>(-2.0), cr::<f64>(1.0)]);
    }
}
