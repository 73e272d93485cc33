//! Scalar traits shared by every module.
//!
//! [`Real`] is the floating point type the numerics are generic over (`f32` or
//! `f64`). [`Field`] is the arithmetic the algebraic routines need; it is
//! implemented by `Complex<T>` and by [`Dual`] numbers over any field, so the
//! same potential/frame code yields exact first (and, nested, second)
//! derivatives when fed dual inputs.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every `f64` is representable (possibly rounded) in `f32`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for `Complex::new(T::lit(re), T::lit(im))`.
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Real value embedded in the complex plane.
pub fn cr<T: Real>(re: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::zero())
}

/// Arithmetic required by polynomial, potential and small linear-algebra code.
pub trait Field:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    type Real: Real;

    fn from_int(k: i64) -> Self;

    /// Embeds a complex constant.
    fn constant(value: Complex<Self::Real>) -> Self;

    /// The plain complex value, dropping any infinitesimal parts.
    fn value(&self) -> Complex<Self::Real>;

    /// Magnitude used for pivoting and tolerance checks.
    fn modulus(&self) -> Self::Real {
        self.value().norm()
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T: Real> Field for Complex<T> {
    type Real = T;

    fn from_int(k: i64) -> Self {
        Complex::new(T::from_i64(k).expect("small integer"), T::zero())
    }

    fn constant(value: Complex<T>) -> Self {
        value
    }

    fn value(&self) -> Complex<T> {
        *self
    }
}

/// Forward-mode dual number `re + eps·ε` with `ε² = 0`.
///
/// Nesting (`Dual<Dual<Complex<T>>>`) gives mixed second derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<F> {
    pub re: F,
    pub eps: F,
}

impl<F: Field> Dual<F> {
    pub fn new(re: F, eps: F) -> Self {
        Self { re, eps }
    }

    /// A quantity that does not depend on the seeded variable.
    pub fn lift(re: F) -> Self {
        Self { re, eps: F::zero() }
    }

    /// The seeded variable itself.
    pub fn variable(re: F) -> Self {
        Self { re, eps: F::one() }
    }
}

impl<F: Field> Add for Dual<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<F: Field> Sub for Dual<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<F: Field> Mul for Dual<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = self.re.clone() * rhs.eps + self.eps * rhs.re.clone();
        Self::new(self.re * rhs.re, eps)
    }
}

impl<F: Field> Div for Dual<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let re = self.re.clone() / rhs.re.clone();
        let eps = (self.eps - re.clone() * rhs.eps) / rhs.re;
        Self::new(re, eps)
    }
}

impl<F: Field> Neg for Dual<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl<F: Field> Zero for Dual<F> {
    fn zero() -> Self {
        Self::lift(F::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<F: Field> One for Dual<F> {
    fn one() -> Self {
        Self::lift(F::one())
    }
}

impl<F: Field> Field for Dual<F> {
    type Real = F::Real;

    fn from_int(k: i64) -> Self {
        Self::lift(F::from_int(k))
    }

    fn constant(value: Complex<Self::Real>) -> Self {
        Self::lift(F::constant(value))
    }

    fn value(&self) -> Complex<Self::Real> {
        self.re.value()
    }
}

/// Principal square root, or the other branch when that one lies closer to `reference`.
pub fn sqrt_near<T: Real>(z: Complex<T>, reference: Complex<T>) -> Complex<T> {
    let r = z.sqrt();
    if (r - reference).norm() <= (-r - reference).norm() {
        r
    } else {
        -r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = Dual<Complex<f64>>;

    #[test]
    fn dual_quotient_rule() {
        // f(x) = (x^2 + 1) / (x - 3) at x = 2: f = -5, f' = (2x(x-3) - (x^2+1)) / (x-3)^2 = -9
        let x = D::variable(cr::<f64>(2.0));
        let f = (x.clone() * x.clone() + D::one()) / (x - D::from_int(3));
        assert!((f.re - cr::<f64>(-5.0)).norm() < 1e-14);
        assert!((f.eps - cr::<f64>(-9.0)).norm() < 1e-14);
    }

    #[test]
    fn nested_dual_gives_second_derivative() {
        // f(x) = x^3, f'' = 6x
        let x0 = c::<f64>(0.5, 0.25);
        let inner = Dual::variable(x0);
        let x = Dual::new(inner.clone(), Dual::lift(Complex::one()));
        let f = x.powi(3);
        let second = f.eps.eps;
        assert!((second - x0 * 6.0).norm() < 1e-14);
    }

    #[test]
    fn sqrt_near_picks_branch() {
        let z = c::<f64>(-1.0, 0.0);
        assert!((sqrt_near(z, c::<f64>(0.0, -1.0)) - c::<f64>(0.0, -1.0)).norm() < 1e-15);
        assert!((sqrt_near(z, c::<f64>(0.0, 2.0)) - c::<f64>(0.0, 1.0)).norm() < 1e-15);
    }
}
