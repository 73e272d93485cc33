//! Small dense matrices over a [`Field`]. Dimensions here never exceed a handful.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        })
    }

    pub fn matvec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(F::zero(), |acc, k| acc + self[(i, k)].clone() * v[k].clone()))
            .collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Gauss-Jordan inverse with partial pivoting on the plain complex modulus.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self
            .data
            .iter()
            .fold(F::Real::zero(), |m, x| if x.modulus() > m { x.modulus() } else { m });
        let floor = scale * F::Real::epsilon() * F::Real::lit(16.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .modulus()
                        .partial_cmp(&a[(j, col)].modulus())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if !(a[(pivot, col)].modulus() > floor) {
                return Err(Error::Chart(format!("singular {n}x{n} matrix (pivot column {col})")));
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / p.clone();
                inv[(col, j)] = inv[(col, j)].clone() / p.clone();
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(col, j)].clone();
                    inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(col, j)].clone();
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Characteristic polynomial `det(lambda I - A)` of a 3x3 matrix, lowest degree first.
    pub fn char_poly_3x3(&self) -> [F; 4] {
        assert!(self.rows == 3 && self.cols == 3);
        let a = |i: usize, j: usize| self[(i, j)].clone();
        let minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)
            + a(1, 1) * a(2, 2)
            - a(1, 2) * a(2, 1);
        let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        [-det, minors, -self.trace(), F::one()]
    }
}

impl<T: Real> Matrix<Complex<T>> {
    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, cr};
    use num_complex::Complex64;

    #[test]
    fn inverse_roundtrip() {
        let m: Matrix<Complex64> = Matrix::from_rows(vec![
            vec![c::<f64>(1.0, 1.0), cr::<f64>(2.0), cr::<f64>(0.5)],
            vec![cr::<f64>(0.0), c::<f64>(0.0, 3.0), cr::<f64>(1.0)],
            vec![cr::<f64>(4.0), cr::<f64>(-1.0), c::<f64>(2.0, -1.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).max_abs_diff(&Matrix::identity(3)) < 1e-14);
    }

    #[test]
    fn singular_matrix_is_chart_error() {
        let m: Matrix<Complex64> = Matrix::from_rows(vec![vec![cr::<f64>(1.0), cr::<f64>(2.0)], vec![cr::<f64>(2.0), cr::<f64>(4.0)]]);
        assert!(matches!(m.inverse(), Err(Error::Chart(_))));
    }

    #[test]
    fn antisymmetric_char_poly() {
        // V with omega = (1, 2, 3): lambda^3 + 14 lambda
        let (w1, w2, w3) = (cr::<f64>(1.0), cr::<f64>(2.0), cr::<f64>(3.0));
        let z = cr::<f64>(0.0);
        let v = Matrix::from_rows(vec![vec![z, w3, -w2], vec![-w3, z, w1], vec![w2, -w1, z]]);
        let p = v.char_poly_3x3();
        assert_eq!(p, [cr::<f64>(0.0), cr::<f64>(14.0), cr::<f64>(0.0), cr::<f64>(1.0)]);
    }
}
