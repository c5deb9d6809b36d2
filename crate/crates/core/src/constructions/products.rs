use crate::group::{cyclic, direct_product, FinitePermGroup};
use crate::perm::Permutation;
use crate::presentation::{BuildContext, ElementHandle, PresentationError, ProfinitePresentation};

use super::ConstructionError;

/// Product of cyclic groups `C_{orders[0]} × C_{orders[1]} × ..` on
/// consecutive blocks. Past the list, blocks are fixed points, or the list
/// starts over when `repeat` is set.
///
/// Handle `gen` is the standard cycle on every block.
pub fn cyclic_product(orders: &[usize], repeat: bool) -> Result<ProfinitePresentation, ConstructionError> {
    if orders.contains(&0) {
        return Err(ConstructionError::Stage {
            stage: orders.iter().position(|&o| o == 0).expect("contains 0"),
            reason: "cyclic orders must be at least 1".into(),
        });
    }
    let orders = orders.to_vec();
    let size_at = move |k: usize| -> usize {
        match orders.get(k) {
            Some(&o) => o,
            None if repeat && !orders.is_empty() => orders[k % orders.len()],
            None => 1,
        }
    };
    let sizes = size_at.clone();
    let builder = move |ctx: &BuildContext<'_>| -> Result<FinitePermGroup, PresentationError> {
        let block = cyclic(size_at(ctx.k));
        match ctx.previous() {
            None => Ok(block),
            Some(prev) => {
                ctx.ensure_within(prev.order().saturating_mul(block.order()))?;
                Ok(direct_product(prev.group(), &block))
            }
        }
    };
    let gen = ElementHandle::new("gen", move |p, k| {
        let _ = p.level(k)?;
        Ok((0..=k)
            .map(|j| Permutation::standard_cycle(sizes(j)))
            .reduce(|a, b| a.concat(&b))
            .expect("at least one block"))
    });
    Ok(ProfinitePresentation::new("cyclic_product", true, builder).with_handle("gen", gen))
}

fn two_adic_block(j: usize) -> (usize, usize) {
    let size = 1usize << (j + 1);
    (size - 2, size)
}

/// Inverse limit of `Z/2^{k+1}`: block `j` has `2^{j+1}` points and the
/// element with residue `r` acts on it as the `r`-th power of the standard
/// cycle. Level `k` is cyclic of order `2^{k+1}`.
///
/// Handle `gen` is residue 1.
pub fn two_adic() -> ProfinitePresentation {
    let builder = |ctx: &BuildContext<'_>| -> Result<FinitePermGroup, PresentationError> {
        let k = ctx.k;
        if k >= usize::BITS as usize - 2 {
            return Err(PresentationError::ResourceLimit {
                stage: k,
                elements: usize::MAX,
                limit: ctx.max_elements,
            });
        }
        let count = 1usize << (k + 1);
        ctx.ensure_within(count)?;
        let cycles: Vec<Permutation> = (0..=k)
            .map(|j| Permutation::standard_cycle(two_adic_block(j).1))
            .collect();
        let mut elements: Vec<Permutation> = (0..count as i64)
            .map(|r| {
                cycles
                    .iter()
                    .map(|c| c.pow(r))
                    .reduce(|a, b| a.concat(&b))
                    .expect("at least one block")
            })
            .collect();
        elements.sort();
        let blocks = (0..=k)
            .map(|j| {
                let (start, size) = two_adic_block(j);
                start..start + size
            })
            .collect();
        let (start, size) = two_adic_block(k);
        Ok(FinitePermGroup::from_parts(start + size, elements, blocks)?)
    };
    let gen = ElementHandle::new("gen", |p, k| {
        let _ = p.level(k)?;
        Ok((0..=k)
            .map(|j| Permutation::standard_cycle(two_adic_block(j).1))
            .reduce(|a, b| a.concat(&b))
            .expect("at least one block"))
    });
    ProfinitePresentation::new("two_adic", false, builder).with_handle("gen", gen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_levels() {
        let p = cyclic_product(&[2, 3], false).unwrap();
        assert_eq!(p.level(0).unwrap().group().listing(), "{(0)(1), (0 1)}");
        let l1 = p.level(1).unwrap();
        assert_eq!((l1.order(), l1.support()), (6, 5));
        assert_eq!(p.branching(0, &Permutation::identity(2)).unwrap(), 3);
        assert_eq!(p.level(4).unwrap().order(), 6);
        let q = cyclic_product(&[2, 2], false).unwrap();
        assert!(q
            .level(1)
            .unwrap()
            .group()
            .contains(&Permutation::from_cycles(4, "(0 1)(2 3)").unwrap()));
        let r = cyclic_product(&[2], true).unwrap();
        assert_eq!(r.level(5).unwrap().order(), 64);
        assert!(r.is_orbit_independent_upto(5).unwrap());
        let ones = cyclic_product(&[1, 1], true).unwrap();
        assert_eq!(ones.level(6).unwrap().order(), 1);
        assert!(cyclic_product(&[2, 0], false).is_err());
        let g = p.handle("gen").unwrap().resolve(&p, 1).unwrap();
        assert_eq!(g.to_string(), "(0 1)(2 3 4)");
    }

    #[test]
    fn two_adic_levels() {
        let p = two_adic();
        assert_eq!(p.level(0).unwrap().group().listing(), "{(0)(1), (0 1)}");
        for k in 0..6 {
            let level = p.level(k).unwrap();
            assert_eq!(level.order(), 1 << (k + 1));
            assert!(level.group().check_closed());
        }
        assert_eq!(p.h_k(1).unwrap().order(), 4);
        assert_eq!(p.level(1).unwrap().last_block(), 2..6);
        assert!(!p.is_orbit_independent_upto(1).unwrap());
        let involutions = p
            .level(3)
            .unwrap()
            .group()
            .elements()
            .iter()
            .filter(|e| e.order() == 2)
            .count();
        assert_eq!(involutions, 1);
        let g = p.handle("gen").unwrap().resolve(&p, 1).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.prefix(2).unwrap().to_string(), "(0 1)");
        for e in p.level(2).unwrap().group().elements() {
            assert_eq!(p.branching(2, e).unwrap(), 2);
        }
    }
}
