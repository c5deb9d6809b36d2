use std::sync::Arc;

use crate::checker::{eval_finite, Assignment};
use crate::formula::{alpha_n, nth_prime};
use crate::group::{cyclic, direct_product, FinitePermGroup};
use crate::presentation::{extend_trivially, BuildContext, PresentationError, ProfinitePresentation};

use super::{Construction, ConstructionLog, Halt, StageKind, StageRecord, StepOracle};

/// Stage 0 is a fixed point. At stage `s ≥ 1` the least `e ≤ s` whose
/// program has halted by `s` and whose prime `p_e` is not yet an element
/// order of `G_{s-1}` gets a new cyclic block of size `p_e`; if there is no
/// such `e` the block is a fixed point. Every halted program is looked at
/// again at every stage until served.
pub fn sigma1_group(oracle: Arc<dyn StepOracle>) -> Construction {
    let log = ConstructionLog::default();
    let record = log.clone();
    let builder = move |ctx: &BuildContext<'_>| -> Result<FinitePermGroup, PresentationError> {
        let s = ctx.k;
        let start = ctx.next_point();
        let Some(prev) = ctx.previous() else {
            record.push(StageRecord {
                stage: 0,
                pair: None,
                block_start: 0,
                block_size: 1,
                kind: StageKind::Trivial,
                note: String::new(),
            });
            return Ok(FinitePermGroup::trivial(1));
        };
        let mut served = None;
        for e in 0..=s {
            if oracle.halts(e, s) == Halt::Running {
                continue;
            }
            let has_order = eval_finite(prev.group(), &alpha_n(e), &Assignment::new()).expect("alpha_n is a sentence");
            if !has_order {
                served = Some(e);
                break;
            }
        }
        match served {
            None => {
                record.push(StageRecord {
                    stage: s,
                    pair: None,
                    block_start: start,
                    block_size: 1,
                    kind: StageKind::Trivial,
                    note: String::new(),
                });
                Ok(extend_trivially(prev.group()))
            }
            Some(e) => {
                let p = nth_prime(e) as usize;
                ctx.ensure_within(prev.order().saturating_mul(p))?;
                record.push(StageRecord {
                    stage: s,
                    pair: None,
                    block_start: start,
                    block_size: p,
                    kind: StageKind::Cyclic,
                    note: format!("serves e={e}"),
                });
                Ok(direct_product(prev.group(), &cyclic(p)))
            }
        }
    };
    Construction {
        presentation: ProfinitePresentation::new("sigma1", true, builder),
        log,
    }
}
