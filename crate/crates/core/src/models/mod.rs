//! Model registry and closed forms for the two three-dimensional examples.
//!
//! [`Model`] fixes the coordinate chart of each model: which model coordinate
//! corresponds to which flat coordinate of the general `(n, m)` family, its
//! degree, and the unit field. The `nm11` and `nm02` submodules hold closed-form
//! expressions used as independent oracles for the generic pipeline.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::algebra::Matrix;
use crate::error::{Error, Result};
use crate::frobenius::{build_potential, flat_degrees, prepotential_degree, RationalPotential};
use crate::scalar::{Field, Real};

pub mod nm02;
pub mod nm11;

pub use nm02::{nm02_closed_forms, nm02_omega_checks, Nm02Data};
pub use nm11::{
    nm11_closed_forms, nm11_default_grid, nm11_euler_top, nm11_log_tau, nm11_log_tau_gradient, nm11_point,
    nm11_tau_reports, Nm11Data,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// `W = z^2/2 + x1 + x2/(z - x3)`.
    Nm11,
    /// `W = z + x1/(z - x3) + x2^2/(2 (z - x3)^2)`.
    Nm02,
    /// General `(n, m)` family in flat coordinates `(x_1 .. x_{m+1}, x~_1 .. x~_n)`.
    Custom { n: usize, m: usize },
}

impl Model {
    pub fn n(&self) -> usize {
        match self {
            Model::Nm11 => 1,
            Model::Nm02 => 0,
            Model::Custom { n, .. } => *n,
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Model::Nm11 => 1,
            Model::Nm02 => 2,
            Model::Custom { m, .. } => *m,
        }
    }

    /// Number of coordinates, equal to the number of critical points.
    pub fn dim(&self) -> usize {
        self.n() + self.m() + 1
    }

    pub fn has_closed_forms(&self) -> bool {
        matches!(self, Model::Nm11 | Model::Nm02)
    }

    /// Position in the general ordering `(x_1 .. x_{m+1}, x~_1 .. x~_n)` and sign of each model coordinate.
    pub fn flat_index(&self, a: usize) -> (usize, i64) {
        match self {
            Model::Nm11 => [(2, -1), (0, 1), (1, 1)][a],
            _ => (a, 1),
        }
    }

    pub fn coordinate_labels(&self) -> Vec<String> {
        match self {
            Model::Nm11 | Model::Nm02 => (1..=3).map(|k| format!("x{k}")).collect(),
            Model::Custom { n, m } => (1..=m + 1)
                .map(|k| format!("x{k}"))
                .chain((1..=*n).map(|k| format!("xt{k}")))
                .collect(),
        }
    }

    /// Builds `W` from model coordinates.
    pub fn potential<F: Field>(&self, coords: &[F]) -> Result<RationalPotential<F>> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "model {self} takes {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        let (n, m) = (self.n(), self.m());
        match self {
            Model::Nm11 => build_potential(1, 1, &coords[1..3], &[-coords[0].clone()]),
            _ => build_potential(n, m, &coords[..=m], &coords[m + 1..]),
        }
    }

    /// Euler degrees of the model coordinates.
    pub fn degrees(&self) -> Vec<Rational64> {
        let general = flat_degrees(self.n(), self.m());
        (0..self.dim()).map(|a| general[self.flat_index(a).0]).collect()
    }

    pub fn prepotential_degree(&self) -> Rational64 {
        prepotential_degree(self.n())
    }

    /// The constant flat metric `eta_ab` in model coordinates.
    pub fn expected_metric<T: Real>(&self) -> Matrix<Complex<T>> {
        let (n, m) = (self.n(), self.m());
        let general = |i: usize, j: usize| -> i64 {
            let (xi, xj) = (i <= m, j <= m);
            match (xi, xj) {
                (true, true) => i64::from(i + j + 2 == m + 2),
                (false, false) => i64::from((i - m) + (j - m) == n + 1),
                _ => 0,
            }
        };
        Matrix::from_fn(self.dim(), self.dim(), |a, b| {
            let (ga, sa) = self.flat_index(a);
            let (gb, sb) = self.flat_index(b);
            Complex::new(T::from(sa * sb * general(ga, gb)).expect("small integer"), T::zero())
        })
    }

    /// Model coordinate `e` and sign `s` with `dW/d(s x_e) = 1`, i.e. the unit vector field `s d/dx_e`.
    pub fn unit(&self) -> (usize, i64) {
        let (n, m) = (self.n(), self.m());
        let (g, s) = if n == 0 { (m, 1) } else { (m + n, -1) };
        (0..self.dim())
            .find_map(|a| {
                let (ga, sa) = self.flat_index(a);
                (ga == g).then_some((a, s * sa))
            })
            .expect("unit coordinate present")
    }

    /// Coordinate `t` with `eta(unit, d/dt) != 0`; the Lamé coefficients `h_i^2 = dt/du_i`.
    pub fn unit_dual(&self) -> usize {
        let eta = self.expected_metric::<f64>();
        let (e, _) = self.unit();
        (0..self.dim())
            .find(|&b| !eta[(e, b)].is_zero())
            .expect("nondegenerate metric")
    }

    /// `eta(e, e)`, which equals the sum of the squared Lamé coefficients.
    pub fn eta_unit_unit(&self) -> i64 {
        let (e, _) = self.unit();
        let eta = self.expected_metric::<f64>();
        eta[(e, e)].re as i64
    }

    /// Constant `c` with `E(h_i^2) = c h_i^2`: degree of the unit's dual coordinate minus one.
    pub fn lame_homogeneity(&self) -> Rational64 {
        self.degrees()[self.unit_dual()] - Rational64::one()
    }

    /// `sum_a d_a eta^{a e}`, the Euler degree read off against the unit.
    pub fn unit_weighted_degree(&self) -> Rational64 {
        let eta_inv = self
            .expected_metric::<f64>()
            .inverse()
            .expect("nondegenerate metric");
        let (e, s) = self.unit();
        self.degrees()
            .iter()
            .enumerate()
            .map(|(a, d)| *d * Rational64::from_integer(eta_inv[(a, e)].re.round() as i64 * s))
            .sum()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Nm11 => write!(f, "nm11"),
            Model::Nm02 => write!(f, "nm02"),
            Model::Custom { n, m } => write!(f, "custom:{n},{m}"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nm11" => Ok(Model::Nm11),
            "nm02" => Ok(Model::Nm02),
            _ => {
                let body = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::InvalidInput(format!("unknown model '{s}'")))?;
                let (n, m) = body
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidInput(format!("custom model needs 'n,m', got '{body}'")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad integer '{t}' in model '{s}'")))
                };
                let (n, m) = (parse(n)?, parse(m)?);
                if m == 0 {
                    return Err(Error::InvalidInput("custom model needs m >= 1".into()));
                }
                Ok(Model::Custom { n, m })
            }
        }
    }
}

/// `R^2 = (1/2) sum_a mu_a^2` with `mu_a = 1 - d_a + (d_F - 3)/2`.
pub fn r_squared_from_degrees(degrees: &[Rational64], d_f: Rational64) -> Rational64 {
    let shift = (d_f - Rational64::from_integer(3)) / Rational64::from_integer(2);
    let sum: Rational64 = degrees
        .iter()
        .map(|d| {
            let mu = Rational64::one() - *d + shift;
            mu * mu
        })
        .sum();
    sum / Rational64::from_integer(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use num_complex::Complex64;

    #[test]
    fn parse_roundtrip() {
        for s in ["nm11", "nm02", "custom:1,2"] {
            assert_eq!(s.parse::<Model>().unwrap().to_string(), s);
        }
        assert!("nm12".parse::<Model>().is_err());
        assert!("custom:1,0".parse::<Model>().is_err());
    }

    #[test]
    fn nm11_chart() {
        let w = Model::Nm11
            .potential(&[cr::<f64>(0.5), cr::<f64>(2.0), cr::<f64>(1.0)])
            .unwrap();
        // z^2/2 + 0.5 + 2/(z - 1) at z = 3
        assert!((w.eval(&cr::<f64>(3.0)) - cr::<f64>(4.5 + 0.5 + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn degrees_and_units() {
        let r = |a, b| Rational64::new(a, b);
        assert_eq!(Model::Nm11.degrees(), vec![r(1, 1), r(3, 2), r(1, 2)]);
        assert_eq!(Model::Nm02.degrees(), vec![r(2, 1), r(3, 2), r(1, 1)]);
        assert_eq!(Model::Nm11.unit(), (0, 1));
        assert_eq!(Model::Nm02.unit(), (2, 1));
        assert_eq!(Model::Nm11.eta_unit_unit(), 1);
        assert_eq!(Model::Nm02.eta_unit_unit(), 0);
        assert_eq!(Model::Nm11.lame_homogeneity(), r(0, 1));
        assert_eq!(Model::Nm02.lame_homogeneity(), r(1, 1));
        assert_eq!(Model::Nm11.unit_weighted_degree(), r(1, 1));
        assert_eq!(Model::Nm02.unit_weighted_degree(), r(2, 1));
    }

    #[test]
    fn expected_metrics() {
        let one = cr::<f64>(1.0);
        let z = Complex64::zero();
        let nm11 = Matrix::from_rows(vec![vec![one, z, z], vec![z, z, one], vec![z, one, z]]);
        assert_eq!(Model::Nm11.expected_metric::<f64>(), nm11);
        let nm02 = Matrix::from_rows(vec![vec![z, z, one], vec![z, one, z], vec![one, z, z]]);
        assert_eq!(Model::Nm02.expected_metric::<f64>(), nm02);
    }

    #[test]
    fn r_squared_is_quarter_for_both_models() {
        for model in [Model::Nm11, Model::Nm02] {
            assert_eq!(
                r_squared_from_degrees(&model.degrees(), model.prepotential_degree()),
                Rational64::new(1, 4)
            );
        }
    }
}
