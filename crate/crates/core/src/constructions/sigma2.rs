use std::sync::Arc;

use crate::formula::nth_prime;
use crate::group::{cyclic, direct_product, FinitePermGroup};
use crate::perm::Permutation;
use crate::presentation::{extend_trivially, BuildContext, PresentationError, ProfinitePresentation};

use super::{pair, unpair, Construction, ConstructionError, ConstructionLog, StageKind, StageRecord, StepOracle};

fn grew(oracle: &dyn StepOracle, n: usize, m: usize) -> bool {
    m > 0 && oracle.we_size(n, m) > oracle.we_size(n, m - 1)
}

/// Stage `⟨n, m⟩` works for prime `p = p_n`. Stage 0 is the block `{0, 1}`
/// with `C_2`; stage `⟨n, 0⟩` adds an independent `C_p` block. At `⟨n, m⟩`
/// with `m > 0` the `n`-th enumeration either stalled, giving a fixed point,
/// or grew for the `N`-th time, giving a cyclic block of size `p^{N+1}`
/// whose residue is tied modulo `p^N` to the residue on the previous block
/// of size `p^N` for the same `n`.
pub fn sigma2_group(oracle: Arc<dyn StepOracle>) -> Construction {
    let log = ConstructionLog::default();
    let record = log.clone();
    let builder = move |ctx: &BuildContext<'_>| -> Result<FinitePermGroup, PresentationError> {
        let s = ctx.k;
        let (n, m) = unpair(s);
        let start = ctx.next_point();
        let p = nth_prime(n) as usize;
        let mut rec = StageRecord {
            stage: s,
            pair: Some((n, m)),
            block_start: start,
            block_size: 1,
            kind: StageKind::Trivial,
            note: String::new(),
        };
        let Some(prev) = ctx.previous() else {
            rec.block_size = 2;
            rec.kind = StageKind::Cyclic;
            record.push(rec);
            return Ok(cyclic(2));
        };
        if m == 0 {
            ctx.ensure_within(prev.order().saturating_mul(p))?;
            rec.block_size = p;
            rec.kind = StageKind::Cyclic;
            record.push(rec);
            return Ok(direct_product(prev.group(), &cyclic(p)));
        }
        if !grew(oracle.as_ref(), n, m) {
            record.push(rec);
            return Ok(extend_trivially(prev.group()));
        }
        let earlier: Vec<usize> = (1..m).filter(|&x| grew(oracle.as_ref(), n, x)).collect();
        let big_n = 1 + earlier.len() as u32;
        let t = pair(n, earlier.last().copied().unwrap_or(0));
        let modulus = p.pow(big_n);
        let size = modulus * p;
        ctx.ensure_within(prev.order().saturating_mul(p))?;
        let link_start = ctx.lower[t].last_block().start;
        let c = Permutation::standard_cycle(size);
        let mut elements = Vec::with_capacity(prev.order() * p);
        for g in prev.group().elements() {
            let residue = g.apply(link_start) - link_start;
            for j in 0..p {
                let b = residue + j * modulus;
                elements.push(g.concat(&c.pow(b as i64)));
            }
        }
        let mut blocks = prev.group().blocks().to_vec();
        blocks.push(start..start + size);
        rec.block_size = size;
        rec.kind = StageKind::Linked { linked_to: t, modulus };
        rec.note = format!("growth N={big_n}");
        record.push(rec);
        Ok(FinitePermGroup::from_parts(start + size, elements, blocks)?)
    };
    Construction {
        presentation: ProfinitePresentation::new("sigma2", false, builder),
        log,
    }
}

/// At a growth stage `s` for `n`: every element of `G_s` of order dividing
/// `p_n` is the identity below the new block.
pub fn low_order_elements_vanish(c: &Construction, n: usize, s: usize) -> Result<bool, ConstructionError> {
    let level = c.presentation.level(s)?;
    let rec = c.log.record(s).expect("level s was just built");
    let growth = matches!(rec.kind, StageKind::Linked { .. }) && rec.pair.is_some_and(|(pn, _)| pn == n);
    if !growth {
        return Err(ConstructionError::Stage {
            stage: s,
            reason: format!("not a growth stage for n={n}"),
        });
    }
    let p = nth_prime(n) as i64;
    let below = level.last_block().start;
    Ok(level
        .group()
        .elements()
        .iter()
        .filter(|g| g.pow(p).is_identity())
        .all(|g| g.images()[..below].iter().enumerate().all(|(i, &v)| v as usize == i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::MockTable;

    #[test]
    fn stage_one_without_growth() {
        let c = sigma2_group(Arc::new(MockTable::new()));
        assert_eq!(
            c.presentation.level(1).unwrap().group().listing(),
            "{(0)(1)(2), (0 1)(2)}"
        );
    }

    #[test]
    fn stage_one_with_growth() {
        let c = sigma2_group(Arc::new(MockTable::new().wsize(0, 1, 1)));
        assert_eq!(
            c.presentation.level(1).unwrap().group().listing(),
            "{(0)(1)(2)(3)(4)(5), (0)(1)(2 4)(3 5), (0 1)(2 3 4 5), (0 1)(2 5 4 3)}"
        );
        assert!(low_order_elements_vanish(&c, 0, 1).unwrap());
        assert!(low_order_elements_vanish(&c, 0, 2).is_err());
    }

    #[test]
    fn repeated_growth_links_to_the_previous_block() {
        // n = 1 grows at m = 1 (stage 4) and m = 2 (stage 7)
        let c = sigma2_group(Arc::new(MockTable::new().wsize(1, 1, 1).wsize(1, 2, 2)));
        let log = c.run(8).unwrap();
        assert!(
            log.contains("stage=4 pair=<1,1> block=7+9 H=C9 link=stage2/mod3"),
            "{log}"
        );
        assert!(
            log.contains("stage=7 pair=<1,2> block=22+27 H=C27 link=stage4/mod9"),
            "{log}"
        );
        assert!(low_order_elements_vanish(&c, 1, 4).unwrap());
        assert!(low_order_elements_vanish(&c, 1, 7).unwrap());
        for k in 0..8 {
            assert!(c.presentation.level(k).unwrap().group().check_closed(), "level {k}");
        }
    }
}
