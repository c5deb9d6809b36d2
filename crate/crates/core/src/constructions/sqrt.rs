use std::sync::Arc;

use crate::checker::{witness_tree, Bindings, CheckError};
use crate::formula::parse;
use crate::group::{cyclic, FinitePermGroup};
use crate::perm::Permutation;
use crate::presentation::{BuildContext, ElementHandle, PathStrategy, PresentationError, ProfinitePresentation};

use super::{Construction, ConstructionLog, Halt, StageKind, StageRecord, StepOracle};

fn triangle(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Program whose halting decides stage `t`, if `t` is a decision stage.
/// Stages `t(t+1)/2` are plain; the stages strictly between two of them go
/// to programs `0, 1, ..` in turn.
fn decision_program(t: usize) -> Option<usize> {
    let mut n = 0;
    while triangle(n + 1) <= t {
        n += 1;
    }
    (t > triangle(n)).then(|| t - triangle(n) - 1)
}

/// What stage `t` does: `Some((e, v))` for a four-point block steered by
/// program `e`'s value `v`, with a note when a decision is skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Plan {
    widget: Option<(usize, u64)>,
    note: String,
}

fn plan(oracle: &dyn StepOracle, upto: usize) -> Vec<Plan> {
    let mut plans: Vec<Plan> = Vec::with_capacity(upto + 1);
    for t in 0..=upto {
        let mut p = Plan {
            widget: None,
            note: String::new(),
        };
        if let Some(e) = (t > 0).then(|| decision_program(t)).flatten() {
            match oracle.halts(e, t - 1) {
                Halt::Running => {}
                Halt::Halted(v) if v > 1 => p.note = format!("e={e} halted with {v}; no widget"),
                Halt::Halted(v) => {
                    if plans[e + 1].widget.is_some() {
                        p.note = format!("e={e} halted but block {} has four points; skipped", e + 1);
                    } else {
                        p.widget = Some((e, v));
                    }
                }
            }
        }
        plans.push(p);
    }
    plans
}

/// Builds a group and an element `h` with a square root in the group but
/// none along any path that follows a halted program's choice of direction.
///
/// Stage 0 is `{0, 1}` with `C_2` and every plain stage adds another
/// two-point block with `C_2`. At the `e`-th decision stage, once program `e`
/// has halted with value `v ∈ {0, 1}`, a four-point block with `C_4` is added
/// instead: elements fixing the first point of block `e + 1` extend by even
/// powers of the 4-cycle, the others by odd powers; `h` extends by the square
/// of the 4-cycle when `v = 0` and by the identity when `v = 1`.
///
/// Handle `h` is the element `h`.
pub fn sqrt_diag_group(oracle: Arc<dyn StepOracle>) -> Construction {
    let log = ConstructionLog::default();
    let record = log.clone();
    let build_oracle = oracle.clone();
    let builder = move |ctx: &BuildContext<'_>| -> Result<FinitePermGroup, PresentationError> {
        let t = ctx.k;
        let start = ctx.next_point();
        let this = plan(build_oracle.as_ref(), t).pop().expect("plan covers t");
        let Some(prev) = ctx.previous() else {
            record.push(StageRecord {
                stage: 0,
                pair: None,
                block_start: 0,
                block_size: 2,
                kind: StageKind::Cyclic,
                note: String::new(),
            });
            return Ok(cyclic(2));
        };
        ctx.ensure_within(prev.order().saturating_mul(2))?;
        match this.widget {
            None => {
                record.push(StageRecord {
                    stage: t,
                    pair: None,
                    block_start: start,
                    block_size: 2,
                    kind: StageKind::Cyclic,
                    note: this.note,
                });
                Ok(crate::group::direct_product(prev.group(), &cyclic(2)))
            }
            Some((e, v)) => {
                let m_e = ctx.lower[e + 1].last_block().start;
                let c = Permutation::standard_cycle(4);
                let mut elements = Vec::with_capacity(prev.order() * 2);
                for g in prev.group().elements() {
                    let odd = (g.apply(m_e) != m_e) as i64;
                    elements.push(g.concat(&c.pow(odd)));
                    elements.push(g.concat(&c.pow(odd + 2)));
                }
                let mut blocks = prev.group().blocks().to_vec();
                blocks.push(start..start + 4);
                record.push(StageRecord {
                    stage: t,
                    pair: None,
                    block_start: start,
                    block_size: 4,
                    kind: StageKind::Widget {
                        decides: e + 1,
                        value: v,
                    },
                    note: format!("e={e}"),
                });
                Ok(FinitePermGroup::from_parts(start + 4, elements, blocks)?)
            }
        }
    };
    let h_oracle = oracle;
    let h = ElementHandle::new("h", move |p, k| {
        let level = p.level(k)?;
        let plans = plan(h_oracle.as_ref(), k);
        let c = Permutation::standard_cycle(4);
        let parts = level
            .group()
            .blocks()
            .iter()
            .zip(&plans)
            .map(|(b, pl)| match pl.widget {
                Some((_, 0)) => c.pow(2),
                _ => Permutation::identity(b.len()),
            });
        Ok(parts.reduce(|a, b| a.concat(&b)).expect("at least one block"))
    });
    Construction {
        presentation: ProfinitePresentation::new("sqrt_diag", false, builder).with_handle("h", h),
        log,
    }
}

/// The path that goes right (moves the first point) on block `k` exactly
/// when program `k - 1` has halted with value 0 by stage `horizon`, and
/// takes the first option everywhere else.
pub fn good_path(oracle: Arc<dyn StepOracle>, horizon: usize) -> PathStrategy {
    Arc::new(move |k, options| {
        if k == 0 || options.len() != 2 {
            return 0;
        }
        let plans = plan(oracle.as_ref(), k);
        if plans[k].widget.is_some() {
            return 0;
        }
        usize::from(oracle.halts(k - 1, horizon) == Halt::Halted(0))
    })
}

/// How one strategy fared against `x² = h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyOutcome {
    pub name: String,
    /// Least level where the path's square differs from `h`.
    pub first_failure: Option<usize>,
    /// Set when the strategy picked an option that does not exist.
    pub invalid: Option<String>,
}

impl StrategyOutcome {
    pub fn is_square_root(&self) -> bool {
        self.first_failure.is_none() && self.invalid.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct SqrtSearchReport {
    pub kmax: usize,
    pub outcomes: Vec<StrategyOutcome>,
    /// Widths of the tree of solutions to `x² = h` per level.
    pub witness_widths: Vec<usize>,
    /// A chain of solutions reaches `kmax` from below.
    pub witness_survives: bool,
}

/// Follows each strategy's path to `kmax`, comparing its square with `h`
/// level by level, and grows the tree of all solutions of `x² = h`.
pub fn square_root_search(
    p: &ProfinitePresentation,
    h: &ElementHandle,
    strategies: &[(String, PathStrategy)],
    kmax: usize,
) -> Result<SqrtSearchReport, CheckError> {
    let mut outcomes = Vec::with_capacity(strategies.len());
    for (name, strategy) in strategies {
        let path = ElementHandle::from_strategy(name.clone(), strategy.clone());
        let mut outcome = StrategyOutcome {
            name: name.clone(),
            first_failure: None,
            invalid: None,
        };
        for k in 0..=kmax {
            let g = match path.resolve(p, k) {
                Ok(g) => g,
                Err(PresentationError::Handle { reason, .. }) => {
                    outcome.invalid = Some(reason);
                    break;
                }
                Err(e) => return Err(e.into()),
            };
            let hk = h.resolve(p, k)?;
            if g.compose_unchecked(&g) != hk {
                outcome.first_failure = Some(k);
                break;
            }
        }
        outcomes.push(outcome);
    }
    let mut params = Bindings::new();
    params.insert("h".into(), h.clone());
    let tree = witness_tree(p, &parse("x*x = h").expect("fixed formula"), &params, kmax)?;
    Ok(SqrtSearchReport {
        kmax,
        outcomes,
        witness_widths: tree.widths(),
        witness_survives: tree.survives(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::MockTable;

    #[test]
    fn decision_schedule() {
        let kinds: Vec<Option<usize>> = (1..11).map(decision_program).collect();
        assert_eq!(
            kinds,
            vec![
                None,
                Some(0),
                None,
                Some(0),
                Some(1),
                None,
                Some(0),
                Some(1),
                Some(2),
                None
            ]
        );
    }

    #[test]
    fn stage_zero() {
        let c = sqrt_diag_group(Arc::new(MockTable::new()));
        let p = &c.presentation;
        assert_eq!(p.level(0).unwrap().group().listing(), "{(0)(1), (0 1)}");
        let h0 = p.handle("h").unwrap().resolve(p, 0).unwrap();
        assert_eq!(h0.full_cycles(), "(0)(1)");
    }

    #[test]
    fn empty_oracle_is_two_branching() {
        let c = sqrt_diag_group(Arc::new(MockTable::new()));
        let p = &c.presentation;
        for k in 0..8 {
            assert_eq!(p.level(k).unwrap().order(), 1 << (k + 1));
            assert!(p.handle("h").unwrap().resolve(p, k).unwrap().is_identity());
        }
        let left: PathStrategy = Arc::new(|_, _| 0);
        let r = square_root_search(p, p.handle("h").unwrap(), &[("left".into(), left)], 6).unwrap();
        assert!(r.outcomes[0].is_square_root());
        assert!(r.witness_survives);
    }

    #[test]
    fn widget_with_value_zero() {
        // program 0 halts with 0 before stage 2, its first decision stage
        let table = Arc::new(MockTable::new().halt(0, 1, 0));
        let c = sqrt_diag_group(table.clone());
        let p = &c.presentation;
        let level = p.level(2).unwrap();
        assert_eq!(level.last_block(), 4..8);
        let h = p.handle("h").unwrap();
        assert_eq!(h.resolve(p, 2).unwrap().to_string(), "(4 6)(5 7)");
        let good = good_path(table, 6);
        let forbidden: PathStrategy = Arc::new(|_, _| 0);
        let r = square_root_search(p, h, &[("good".into(), good), ("left".into(), forbidden)], 6).unwrap();
        assert!(r.outcomes[0].is_square_root(), "{:?}", r.outcomes[0]);
        assert_eq!(r.outcomes[1].first_failure, Some(2));
        assert!(r.witness_survives);
    }

    #[test]
    fn skips_decisions_on_four_point_blocks() {
        // program 0 widgets stage 2, so program 1's block is not two-point
        let c = sqrt_diag_group(Arc::new(MockTable::new().halt(0, 0, 1).halt(1, 0, 0)));
        let log = c.run(6).unwrap();
        assert!(log.contains("stage=2 block=4+4 H=C4 widget=block1 value=1"), "{log}");
        assert!(log.contains("stage=5"), "{log}");
        assert!(log.lines().nth(5).unwrap().contains("skipped"), "{log}");
    }
}
