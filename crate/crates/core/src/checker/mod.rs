//! Model checking on finite levels and the limit procedures built on it.

mod eval;
mod limit;
mod oi;
mod persistence;
mod report;
mod witness;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::DnfError;
use crate::presentation::{ElementHandle, PresentationError};

pub use eval::{eval_finite, eval_level, holds_at, Assignment};
pub use limit::qf_limit;
pub use oi::{decide_exists_oi, fv_stabilize, StabilizationReport};
pub use persistence::{check_persistence, persistence_suite, random_formula, SuiteReport};
pub use report::Report;
pub use witness::{witness_tree, WitnessLevel, WitnessTree};

pub(crate) use eval::{holds_compiled, Compiled};

/// Free variable name to the element path it denotes.
pub type Bindings = BTreeMap<String, ElementHandle>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("free variable {0:?} has no value")]
    Unassigned(String),
    #[error("value of {var:?}: {reason}")]
    Assignment { var: String, reason: String },
    #[error("{procedure} needs {expected}, got {formula}")]
    Shape {
        procedure: &'static str,
        expected: &'static str,
        formula: String,
    },
    #[error("refusing {procedure} on {kind}: {reason}")]
    Refused {
        procedure: &'static str,
        kind: String,
        reason: String,
    },
    #[error("level range {kmin}..={kmax} is empty")]
    Range { kmin: usize, kmax: usize },
    #[error(transparent)]
    Dnf(#[from] DnfError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Why a verdict is locked in from some level on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// A word that reduces to the empty word is trivial at every level.
    TrivialWord,
    /// A positive formula false at one level is false at every higher level.
    PositiveFailsUpward,
    /// A negative formula true at one level is true at every higher level.
    NegativeHoldsUpward,
    /// An existential witness at one level extends by the identity to a
    /// witness in the whole group when the levels form a full product.
    IdentityExtension,
    /// No tuple satisfies a positive matrix at some level.
    EmptyLevel,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::TrivialWord => "word reduces to 1",
            Certificate::PositiveFailsUpward => "positive literal false persists upward",
            Certificate::NegativeHoldsUpward => "negative literal true persists upward",
            Certificate::IdentityExtension => "witness extends by identity on later blocks",
            Certificate::EmptyLevel => "positive matrix unsatisfiable at a level",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedTrue { level: usize, certificate: Certificate },
    CertifiedFalse { level: usize, certificate: Certificate },
    UnknownUpTo(usize),
}

impl Verdict {
    pub fn certificate(&self) -> Option<Certificate> {
        match self {
            Verdict::CertifiedTrue { certificate, .. } | Verdict::CertifiedFalse { certificate, .. } => {
                Some(*certificate)
            }
            Verdict::UnknownUpTo(_) => None,
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::CertifiedTrue { .. })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::CertifiedFalse { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedTrue { level, .. } => write!(f, "CertifiedTrue({level})"),
            Verdict::CertifiedFalse { level, .. } => write!(f, "CertifiedFalse({level})"),
            Verdict::UnknownUpTo(k) => write!(f, "UnknownUpTo({k})"),
        }
    }
}
