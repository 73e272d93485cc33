use std::fmt;

/// Named numerical degeneracies. The CLI prints the name and exits with code 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Root finding was asked for a constant polynomial.
    ConstantPolynomial,
    /// Two critical points of W (zeros of W') coincide.
    CoalescingCriticalPoints,
    /// Two canonical coordinates coincide (s in {0, 1, infinity}).
    CoalescingCanonicalCoordinates,
    /// The top pole coefficient x_m vanishes, so the pole order drops.
    PoleOrder,
    /// W''(alpha) vanishes at a supposedly simple zero of W'.
    VanishingSecondDerivative,
    /// The cross-ratio or the Painleve variable sits on a pole of the equation.
    SingularPoint,
    /// A parameter value excluded by a closed-form parametrization.
    ExcludedParameter,
    /// A branch point of a logarithm or square root.
    BranchPoint,
}

impl Degeneracy {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ConstantPolynomial => "constant-polynomial",
            Self::CoalescingCriticalPoints => "coalescing-critical-points",
            Self::CoalescingCanonicalCoordinates => "coalescing-canonical-coordinates",
            Self::PoleOrder => "degenerate-pole-order",
            Self::VanishingSecondDerivative => "vanishing-second-derivative",
            Self::SingularPoint => "singular-point",
            Self::ExcludedParameter => "excluded-parameter",
            Self::BranchPoint => "branch-point",
        }
    }
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("degenerate configuration ({kind}): {detail}")]
    Degenerate { kind: Degeneracy, detail: String },

    #[error("iteration did not converge after {iterations} steps (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("coordinate chart failure: {0}")]
    Chart(String),

    #[error("branch inconsistency: {0}")]
    Branch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn degenerate(kind: Degeneracy, detail: impl Into<String>) -> Self {
        Self::Degenerate {
            kind,
            detail: detail.into(),
        }
    }

    /// True for failures caused by the numerical configuration rather than by the request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Self::Degenerate { .. } | Self::NoConvergence { .. } | Self::Chart(_) | Self::Branch(_)
        )
    }

    /// Short machine-readable name.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Degenerate { kind, .. } => kind.name(),
            Self::NoConvergence { .. } => "no-convergence",
            Self::Chart(_) => "chart-failure",
            Self::Branch(_) => "branch-inconsistency",
            Self::Unsupported(_) => "unsupported",
            Self::InvalidInput(_) => "invalid-input",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
