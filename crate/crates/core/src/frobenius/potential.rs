//! Rational Landau-Ginzburg potentials
//!
//! ```text
//! W(z) = z^{n+1}/(n+1) + a_{n-1} z^{n-1} + ... + a_0 + sum_{j=1}^{m} v_j / (j (z - v_{m+1})^j)
//! ```
//!
//! and their construction from flat coordinates.

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::Zero;

use crate::algebra::Poly;
use crate::error::{Degeneracy, Error, Result};
use crate::scalar::{Field, Real};

/// Deepest polynomial sector handled by the series reversion.
pub const MAX_REVERSION_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalPotential<F> {
    n: usize,
    m: usize,
    /// `a_0 .. a_{n-1}`.
    a: Vec<F>,
    /// `v_1 .. v_m`.
    v: Vec<F>,
    /// `v_{m+1}`.
    pole: F,
}

impl<F: Field> RationalPotential<F> {
    pub fn new(n: usize, m: usize, a: Vec<F>, v: Vec<F>, pole: F) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("pole order m must be at least 1".into()));
        }
        if a.len() != n || v.len() != m {
            return Err(Error::InvalidInput(format!(
                "expected {n} polynomial and {m} pole coefficients, got {} and {}",
                a.len(),
                v.len()
            )));
        }
        if v[m - 1].value().norm() == F::Real::zero() {
            return Err(Error::degenerate(
                Degeneracy::PoleOrder,
                format!("v_{m} = 0, pole order drops below {m}"),
            ));
        }
        Ok(Self { n, m, a, v, pole })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &[F] {
        &self.a
    }

    pub fn v(&self) -> &[F] {
        &self.v
    }

    pub fn pole(&self) -> &F {
        &self.pole
    }

    /// `W(z)`.
    pub fn eval(&self, z: &F) -> F {
        let mut acc = z.powi(self.n as u32 + 1) / F::from_int(self.n as i64 + 1);
        for (k, a) in self.a.iter().enumerate() {
            acc = acc + a.clone() * z.powi(k as u32);
        }
        let inv = F::one() / (z.clone() - self.pole.clone());
        let mut inv_pow = F::one();
        for (j, v) in self.v.iter().enumerate() {
            inv_pow = inv_pow * inv.clone();
            acc = acc + v.clone() * inv_pow.clone() / F::from_int(j as i64 + 1);
        }
        acc
    }

    /// `W'(z)`.
    pub fn deriv(&self, z: &F) -> F {
        let mut acc = z.powi(self.n as u32);
        for (k, a) in self.a.iter().enumerate().skip(1) {
            acc = acc + a.clone() * F::from_int(k as i64) * z.powi(k as u32 - 1);
        }
        let inv = F::one() / (z.clone() - self.pole.clone());
        let mut inv_pow = inv.clone();
        for v in &self.v {
            inv_pow = inv_pow * inv.clone();
            acc = acc - v.clone() * inv_pow.clone();
        }
        acc
    }

    /// `W''(z)`.
    pub fn deriv2(&self, z: &F) -> F {
        let mut acc = if self.n == 0 {
            F::zero()
        } else {
            F::from_int(self.n as i64) * z.powi(self.n as u32 - 1)
        };
        for (k, a) in self.a.iter().enumerate().skip(2) {
            acc = acc + a.clone() * F::from_int((k * (k - 1)) as i64) * z.powi(k as u32 - 2);
        }
        let inv = F::one() / (z.clone() - self.pole.clone());
        let mut inv_pow = inv.clone() * inv.clone();
        for (j, v) in self.v.iter().enumerate() {
            inv_pow = inv_pow * inv.clone();
            acc = acc + v.clone() * F::from_int(j as i64 + 2) * inv_pow.clone();
        }
        acc
    }

    /// Monic numerator of `W'`: `W'(z) (z - v_{m+1})^{m+1}`, of degree `n + m + 1`.
    pub fn critical_numerator(&self) -> Poly<F> {
        let mut poly_part = vec![F::zero(); self.n + 1];
        poly_part[self.n] = F::one();
        for (k, a) in self.a.iter().enumerate().skip(1) {
            poly_part[k - 1] = poly_part[k - 1].clone() + a.clone() * F::from_int(k as i64);
        }
        let mut out = &Poly::new(poly_part) * &Poly::linear_power(self.pole.clone(), self.m as u32 + 1);
        for (j, v) in self.v.iter().enumerate() {
            // j is zero-based: v_{j+1} (z - p)^{m - j - 1}
            let term = Poly::linear_power(self.pole.clone(), (self.m - j - 1) as u32).scale(v.clone());
            out = &out - &term;
        }
        out
    }

    /// Drops infinitesimal parts.
    pub fn value(&self) -> RationalPotential<Complex<F::Real>> {
        RationalPotential {
            n: self.n,
            m: self.m,
            a: self.a.iter().map(Field::value).collect(),
            v: self.v.iter().map(Field::value).collect(),
            pole: self.pole.value(),
        }
    }
}

/// A point in flat coordinates `(x_1 .. x_{m+1}, x~_1 .. x~_n)` together with
/// the Euler degrees of those coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatPoint<T> {
    pub x: Vec<Complex<T>>,
    pub xt: Vec<Complex<T>>,
    pub degrees: Vec<Rational64>,
    pub d_f: Rational64,
}

impl<T: Real> FlatPoint<T> {
    pub fn new(n: usize, m: usize, x: Vec<Complex<T>>, xt: Vec<Complex<T>>) -> Result<Self> {
        if x.len() != m + 1 || xt.len() != n {
            return Err(Error::InvalidInput(format!(
                "flat point for (n={n}, m={m}) needs {} x and {n} x~ values, got {} and {}",
                m + 1,
                x.len(),
                xt.len()
            )));
        }
        Ok(Self {
            x,
            xt,
            degrees: flat_degrees(n, m),
            d_f: prepotential_degree(n),
        })
    }
}

/// Euler degrees of `(x_1 .. x_{m+1}, x~_1 .. x~_n)`, normalized so that `W` has degree 1.
///
/// Under `z -> lambda z`, `x_a` scales with `1 + (m + 1 - a)(n + 1)/m` and `x~_g` with `1 + g`.
pub fn flat_degrees(n: usize, m: usize) -> Vec<Rational64> {
    let n1 = n as i64 + 1;
    let m_ = m as i64;
    let mut out: Vec<Rational64> = (1..=m_ + 1)
        .map(|a| Rational64::new(1, n1) + Rational64::new(m_ + 1 - a, m_))
        .collect();
    out.extend((1..=n as i64).map(|g| Rational64::new(1 + g, n1)));
    out
}

/// Degree `d_F` of the prepotential: `d_unit + d_a + d_b` for any nonzero `eta_ab`, i.e. `(2n + 4)/(n + 1)`.
pub fn prepotential_degree(n: usize) -> Rational64 {
    Rational64::new(2 * n as i64 + 4, n as i64 + 1)
}

/// Builds `W` from flat coordinates.
///
/// Pole coefficients: `v_k = sum over (a_1..a_k) in {1..m}^k with sum (k-1)m + k of x_{a_1}...x_{a_k}`,
/// `v_{m+1} = x_{m+1}`. Polynomial coefficients: polynomial part of `w^{n+1}/(n+1)` where
/// `z = w + x~_1/w + ... + x~_n/w^n` is reverted as a series in `1/z`.
pub fn build_potential<F: Field>(n: usize, m: usize, x: &[F], xt: &[F]) -> Result<RationalPotential<F>> {
    if n > MAX_REVERSION_DEPTH {
        return Err(Error::Unsupported(format!(
            "series reversion implemented to depth n <= {MAX_REVERSION_DEPTH}, got n = {n}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput("pole order m must be at least 1".into()));
    }
    if x.len() != m + 1 || xt.len() != n {
        return Err(Error::InvalidInput(format!(
            "(n={n}, m={m}) needs {} x and {n} x~ coordinates, got {} and {}",
            m + 1,
            x.len(),
            xt.len()
        )));
    }
    if x[m - 1].value().norm() == F::Real::zero() {
        return Err(Error::degenerate(
            Degeneracy::PoleOrder,
            format!("x_{m} = 0 makes v_{m} = x_{m}^{m} vanish"),
        ));
    }
    let v = (1..=m).map(|k| pole_coefficient(k, m, &x[..m])).collect();
    let a = polynomial_coefficients(n, xt);
    RationalPotential::new(n, m, a, v, x[m].clone())
}

/// Sum over ordered k-tuples from `{1..m}` with index sum `(k-1)m + k` of the products, by dynamic programming.
fn pole_coefficient<F: Field>(k: usize, m: usize, x: &[F]) -> F {
    let target = (k - 1) * m + k;
    // table[s] = sum of products over tuples of the current length with index sum s
    let mut table = vec![F::zero(); target + 1];
    table[0] = F::one();
    for _ in 0..k {
        let mut next = vec![F::zero(); target + 1];
        for (s, acc) in table.iter().enumerate() {
            if acc.is_zero() {
                continue;
            }
            for (a, xa) in x.iter().enumerate() {
                let idx = s + a + 1;
                if idx <= target {
                    next[idx] = next[idx].clone() + acc.clone() * xa.clone();
                }
            }
        }
        table = next;
    }
    table[target].clone()
}

fn series_mul<F: Field>(a: &[F], b: &[F], order: usize) -> Vec<F> {
    let mut out = vec![F::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

/// Inverse of a series with constant term 1.
fn series_inv_unit<F: Field>(a: &[F], order: usize) -> Vec<F> {
    let mut out = vec![F::zero(); order + 1];
    out[0] = F::one();
    for k in 1..=order {
        let mut acc = F::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc = acc + a[i].clone() * out[k - i].clone();
        }
        out[k] = -acc;
    }
    out
}

fn series_pow<F: Field>(a: &[F], k: usize, order: usize) -> Vec<F> {
    let mut out = vec![F::zero(); order + 1];
    out[0] = F::one();
    for _ in 0..k {
        out = series_mul(&out, a, order);
    }
    out
}

/// `a_0 .. a_{n-1}` from the reversion of `z = w + sum_g x~_g w^{-g}`.
fn polynomial_coefficients<F: Field>(n: usize, xt: &[F]) -> Vec<F> {
    if n == 0 {
        return Vec::new();
    }
    let order = n + 1;
    // w = z S(t), t = 1/z; S = 1 - sum_g x~_g t^{g+1} S^{-g}
    let mut s = vec![F::zero(); order + 1];
    s[0] = F::one();
    for _ in 0..=order {
        let inv = series_inv_unit(&s, order);
        let mut next = vec![F::zero(); order + 1];
        next[0] = F::one();
        for (g, x) in xt.iter().enumerate() {
            let gamma = g + 1;
            if gamma + 1 > order {
                continue;
            }
            let inv_pow = series_pow(&inv, gamma, order);
            for (k, c) in inv_pow.iter().enumerate() {
                let idx = k + gamma + 1;
                if idx <= order {
                    next[idx] = next[idx].clone() - x.clone() * c.clone();
                }
            }
        }
        s = next;
    }
    // W = z^{n+1} S^{n+1} / (n+1); coefficient of z^j is [S^{n+1}]_{n+1-j} / (n+1)
    let sp = series_pow(&s, n + 1, order);
    let denom = F::from_int(n as i64 + 1);
    (0..n).map(|j| sp[n + 1 - j].clone() / denom.clone()).collect()
}
