//! Stage-by-stage constructions of profinite groups driven by step oracles.

mod builtins;
mod oracle;
mod pairing;
mod products;
mod sigma1;
mod sigma2;
mod sqrt;

use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::checker::CheckError;
use crate::presentation::{PresentationError, ProfinitePresentation};

pub use builtins::{builtin, BUILTINS};
pub use oracle::{Halt, Instr, MockTable, RegisterMachines, StepOracle};
pub use pairing::{pair, unpair};
pub use products::{cyclic_product, two_adic};
pub use sigma1::sigma1_group;
pub use sigma2::{low_order_elements_vanish, sigma2_group};
pub use sqrt::{good_path, sqrt_diag_group, square_root_search, SqrtSearchReport, StrategyOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("oracle table line {line}: {message}")]
    Oracle { line: usize, message: String },
    #[error("stage {stage}: {reason}")]
    Stage { stage: usize, reason: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// What a stage did with its block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageKind {
    /// A fixed point.
    Trivial,
    /// Cyclic group on the block, independent of the lower blocks.
    Cyclic,
    /// Cyclic group on the block, linked to the residue on block `linked_to`
    /// modulo `modulus`.
    Linked { linked_to: usize, modulus: usize },
    /// Four-point block whose half is chosen by the direction at `decides`.
    Widget { decides: usize, value: u64 },
}

/// One line of a construction log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    pub pair: Option<(usize, usize)>,
    pub block_start: usize,
    pub block_size: usize,
    pub kind: StageKind,
    pub note: String,
}

impl fmt::Display for StageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage={}", self.stage)?;
        if let Some((n, m)) = self.pair {
            write!(f, " pair=<{n},{m}>")?;
        }
        write!(f, " block={}+{}", self.block_start, self.block_size)?;
        match &self.kind {
            StageKind::Trivial => write!(f, " H=trivial")?,
            StageKind::Cyclic => write!(f, " H=C{}", self.block_size)?,
            StageKind::Linked { linked_to, modulus } => {
                write!(f, " H=C{} link=stage{linked_to}/mod{modulus}", self.block_size)?
            }
            StageKind::Widget { decides, value } => write!(f, " H=C4 widget=block{decides} value={value}")?,
        }
        if !self.note.is_empty() {
            write!(f, " note=\"{}\"", self.note)?;
        }
        Ok(())
    }
}

/// Records appended as levels are generated; shared with the builder.
#[derive(Debug, Clone, Default)]
pub struct ConstructionLog(Arc<Mutex<Vec<StageRecord>>>);

impl ConstructionLog {
    pub(crate) fn push(&self, r: StageRecord) {
        let mut v = self.0.lock().unwrap_or_else(|e| e.into_inner());
        // a failed build may be retried; keep one record per stage
        v.truncate(r.stage);
        v.push(r);
    }

    pub fn records(&self) -> Vec<StageRecord> {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn record(&self, stage: usize) -> Option<StageRecord> {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).get(stage).cloned()
    }

    pub fn to_text(&self) -> String {
        self.records().iter().map(|r| format!("{r}\n")).collect()
    }
}

/// A built presentation with the log of its stages.
#[derive(Debug)]
pub struct Construction {
    pub presentation: ProfinitePresentation,
    pub log: ConstructionLog,
}

impl Construction {
    /// Generates stages `0..stages` and returns the log text.
    pub fn run(&self, stages: usize) -> Result<String, ConstructionError> {
        if stages > 0 {
            self.presentation.level(stages - 1)?;
        }
        Ok(self.log.records()[..stages].iter().map(|r| format!("{r}\n")).collect())
    }
}
