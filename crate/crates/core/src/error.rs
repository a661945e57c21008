use std::fmt;

use thiserror::Error;

/// Boundary statements that assign values to spectral functions on the edge
/// of the compactified half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitId {
    /// `gamma^b` limits at `x2 -> 0+` and `x2 -> +inf`.
    L4_1,
    /// `gamma^a` one-sided limits on the real axis.
    L5_1,
    /// `phi^a` at the corners `(+-inf, 0)`.
    L5_2,
    /// `phi^a` on the vertical edges `(+-inf, t2)`.
    L5_3,
    /// `phi^a` on the top edge, uniform in `t1`.
    L5_4,
    /// Vanishing of the ramp part `psi^alpha` as `alpha -> 0+`.
    PsiVanish,
}

impl LimitId {
    pub fn id(self) -> &'static str {
        match self {
            LimitId::L4_1 => "L4_1",
            LimitId::L5_1 => "L5_1",
            LimitId::L5_2 => "L5_2",
            LimitId::L5_3 => "L5_3",
            LimitId::L5_4 => "L5_4",
            LimitId::PsiVanish => "PsiVanish",
        }
    }
}

impl fmt::Display for LimitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("boundary value undefined at {point} ({lemma}: the symbol must be continuous at s = {at})")]
    BoundaryUndefined { lemma: LimitId, point: String, at: f64 },

    #[error("excluded point {point}{}", stage.map(|s| format!(" at chain stage {s}")).unwrap_or_default())]
    ExcludedPoint { point: String, stage: Option<usize> },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Tags an excluded-point error with the chain stage that raised it.
    pub(crate) fn at_stage(self, stage: usize) -> Self {
        match self {
            Error::ExcludedPoint { point, stage: None } => Error::ExcludedPoint { point, stage: Some(stage) },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
