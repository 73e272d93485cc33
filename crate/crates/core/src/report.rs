//! Serializable outcome of a single named check.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A labeled complex input value, serialized as `{"label": .., "value": [re, im]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledValue {
    pub label: String,
    pub value: [f64; 2],
}

impl LabeledValue {
    pub fn new<T: Real>(label: impl Into<String>, z: Complex<T>) -> Self {
        Self {
            label: label.into(),
            value: [z.re.to_f64_lossy(), z.im.to_f64_lossy()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub model: String,
    pub point: Vec<LabeledValue>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub convention: Option<String>,
    pub metadata: BTreeMap<String, String>,
}

impl VerificationReport {
    /// `passed` is `residual <= tolerance`; a NaN residual fails.
    pub fn new<T: Real>(
        check_name: impl Into<String>,
        model: impl Into<String>,
        point: Vec<LabeledValue>,
        residual: T,
        tolerance: f64,
    ) -> Self {
        let residual = residual.to_f64_lossy();
        Self {
            check_name: check_name.into(),
            model: model.into(),
            point,
            residual,
            tolerance,
            passed: residual <= tolerance,
            convention: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_convention(mut self, convention: impl Into<String>) -> Self {
        self.convention = Some(convention.into());
        self
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    /// Re-evaluates `passed` against a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.residual <= tolerance;
        self
    }
}

/// Labels a point by the given coordinate names.
pub fn labeled_point<T: Real>(labels: &[String], values: &[Complex<T>]) -> Vec<LabeledValue> {
    labels
        .iter()
        .zip(values)
        .map(|(l, &v)| LabeledValue::new(l.clone(), v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let r = VerificationReport::new("x", "nm11", vec![], f64::NAN, 1.0);
        assert!(!r.passed);
        let r = VerificationReport::new("x", "nm11", vec![], 1.0f64, 1.0);
        assert!(r.passed);
        assert!(!r.with_tolerance(0.5).passed);
    }
}
