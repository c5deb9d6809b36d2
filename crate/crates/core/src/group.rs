//! Finite permutation groups with an interval partition of the support into
//! invariant blocks.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Range;

use crate::perm::{PermError, Permutation};

/// A finite group of permutations on `{0, .., n-1}`.
///
/// Elements are kept sorted (lexicographic on image lists) and deduplicated.
/// `blocks` is an ordered partition of the support into contiguous intervals,
/// each setwise invariant under every element.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePermGroup {
    support: usize,
    elements: Vec<Permutation>,
    blocks: Vec<Range<usize>>,
}

impl FinitePermGroup {
    pub fn trivial(support: usize) -> Self {
        FinitePermGroup {
            support,
            elements: vec![Permutation::identity(support)],
            blocks: vec![0..support],
        }
    }

    /// Builds a group from an explicit element list and block partition.
    ///
    /// Checks support sizes, that the blocks tile the support, that every
    /// element fixes every block setwise and that the identity is present.
    /// Closure is not checked here; see [`FinitePermGroup::check_closed`].
    pub fn from_parts(
        support: usize,
        elements: impl IntoIterator<Item = Permutation>,
        blocks: Vec<Range<usize>>,
    ) -> Result<Self, PermError> {
        let mut elements: Vec<Permutation> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        for e in &elements {
            if e.len() != support {
                return Err(PermError::SupportMismatch {
                    left: support,
                    right: e.len(),
                });
            }
        }
        check_tiling(support, &blocks)?;
        for b in &blocks {
            if let Some(_bad) = elements.iter().find(|e| !e.is_invariant(b)) {
                return Err(PermError::BlockNotInvariant {
                    start: b.start,
                    end: b.end,
                });
            }
        }
        let id = Permutation::identity(support);
        if elements.binary_search(&id).is_err() {
            return Err(PermError::MissingIdentity);
        }
        Ok(FinitePermGroup {
            support,
            elements,
            blocks,
        })
    }

    /// Elements must already be sorted, deduplicated and block-preserving.
    pub(crate) fn from_sorted_unchecked(support: usize, elements: Vec<Permutation>, blocks: Vec<Range<usize>>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FinitePermGroup {
            support,
            elements,
            blocks,
        }
    }

    /// Smallest group containing `gens`, by breadth-first multiplication.
    ///
    /// Blocks are the finest interval partition whose parts are unions of orbits.
    pub fn closure(support: usize, gens: &[Permutation]) -> Result<Self, PermError> {
        for g in gens {
            if g.len() != support {
                return Err(PermError::SupportMismatch {
                    left: support,
                    right: g.len(),
                });
            }
        }
        let id = Permutation::identity(support);
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = g.compose_unchecked(&x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Permutation> = seen.into_iter().collect();
        let orbits = orbits_of(support, &elements);
        let blocks = interval_hull(support, &orbits);
        Ok(FinitePermGroup {
            support,
            elements,
            blocks,
        })
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.support)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    /// Orbits ordered by least element, each sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of(self.support, &self.elements)
    }

    /// Checks closure under composition and inverse. Quadratic in the order.
    pub fn check_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.compose_unchecked(b)))
        })
    }

    /// Image of the group under restriction to an invariant block, re-indexed
    /// from 0, with a single block.
    pub fn restrict_to(&self, block: Range<usize>) -> Result<FinitePermGroup, PermError> {
        let elements: BTreeSet<Permutation> = self
            .elements
            .iter()
            .map(|e| e.restrict(block.clone()))
            .collect::<Result<_, _>>()?;
        let n = block.end - block.start;
        Ok(FinitePermGroup {
            support: n,
            elements: elements.into_iter().collect(),
            blocks: vec![0..n],
        })
    }

    /// Image under restriction to the first `count` blocks.
    pub fn project_blocks(&self, count: usize) -> Result<FinitePermGroup, PermError> {
        assert!(count >= 1 && count <= self.blocks.len());
        let n = self.blocks[count - 1].end;
        let mut elements: Vec<Permutation> = self.elements.iter().map(|e| e.prefix(n)).collect::<Result<_, _>>()?;
        // restriction to a prefix keeps lexicographic order, so dedup suffices
        elements.dedup();
        Ok(FinitePermGroup {
            support: n,
            elements,
            blocks: self.blocks[..count].to_vec(),
        })
    }

    /// Whether the restricted image acts transitively on `block`.
    pub fn is_transitive_on(&self, block: &Range<usize>) -> bool {
        let start = block.start;
        let reached: BTreeSet<usize> = self.elements.iter().map(|e| e.apply(start)).collect();
        reached.len() == block.end - block.start
    }

    /// Elements printed in full cycle notation, in stored order: `{(0)(1), (0 1)}`.
    pub fn listing(&self) -> String {
        let parts: Vec<String> = self.elements.iter().map(|e| e.full_cycles()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Multiplication table over element indices of a [`FinitePermGroup`].
#[derive(Debug, Clone)]
pub struct CayleyTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl CayleyTable {
    /// Budget on `order² · support`, the work needed to fill the table.
    pub const WORK_LIMIT: usize = 400_000_000;

    pub fn affordable(group: &FinitePermGroup) -> bool {
        let n = group.order();
        n <= 8192 && n.saturating_mul(n).saturating_mul(group.support()) <= Self::WORK_LIMIT
    }

    pub fn build(group: &FinitePermGroup) -> CayleyTable {
        let n = group.order();
        let els = group.elements();
        let mut mul = Vec::with_capacity(n * n);
        for a in els {
            for b in els {
                let c = a.compose_unchecked(b);
                let idx = group.index_of(&c).expect("group is closed under composition");
                mul.push(idx as u32);
            }
        }
        let inv = els
            .iter()
            .map(|a| group.index_of(&a.inverse()).expect("group is closed under inverse") as u32)
            .collect();
        let identity = group.index_of(&group.identity()).expect("identity present") as u32;
        CayleyTable {
            order: n,
            mul,
            inv,
            identity,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of `elements[a] ∘ elements[b]`.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }
}

/// All pairs `a ⌢ b`; `b`'s support and blocks are shifted past `a`'s.
pub fn direct_product(a: &FinitePermGroup, b: &FinitePermGroup) -> FinitePermGroup {
    let mut elements = Vec::with_capacity(a.order() * b.order());
    // a outer, b inner keeps the concatenations sorted
    for x in &a.elements {
        for y in &b.elements {
            elements.push(x.concat(y));
        }
    }
    let shift = a.support;
    let mut blocks = a.blocks.clone();
    blocks.extend(b.blocks.iter().map(|r| r.start + shift..r.end + shift));
    FinitePermGroup {
        support: a.support + b.support,
        elements,
        blocks,
    }
}

/// Cyclic group generated by the standard `n`-cycle, one block.
pub fn cyclic(n: usize) -> FinitePermGroup {
    let c = Permutation::standard_cycle(n);
    let mut elements: Vec<Permutation> = (0..n as i64).map(|r| c.pow(r)).collect();
    elements.sort();
    FinitePermGroup {
        support: n,
        elements,
        blocks: vec![0..n],
    }
}

fn orbits_of(support: usize, elements: &[Permutation]) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; support];
    let mut out = Vec::new();
    for start in 0..support {
        if assigned[start] {
            continue;
        }
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        orbit.insert(start);
        let mut frontier = vec![start];
        while let Some(p) = frontier.pop() {
            for e in elements {
                let q = e.apply(p);
                if orbit.insert(q) {
                    frontier.push(q);
                }
            }
        }
        for &p in &orbit {
            assigned[p] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

fn interval_hull(support: usize, orbits: &[Vec<usize>]) -> Vec<Range<usize>> {
    // furthest[p] = largest point in the orbit of p
    let mut furthest = vec![0usize; support];
    for o in orbits {
        let hi = *o.last().unwrap();
        for &p in o {
            furthest[p] = hi;
        }
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    let mut reach = 0;
    for (i, &f) in furthest.iter().enumerate() {
        reach = reach.max(f);
        if reach == i {
            blocks.push(start..i + 1);
            start = i + 1;
        }
    }
    blocks
}

fn check_tiling(support: usize, blocks: &[Range<usize>]) -> Result<(), PermError> {
    let mut next = 0;
    for b in blocks {
        if b.start != next || b.end <= b.start || b.end > support {
            return Err(PermError::BlockOutOfRange {
                start: b.start,
                end: b.end,
                support,
            });
        }
        next = b.end;
    }
    if next != support {
        return Err(PermError::BlockOutOfRange {
            start: next,
            end: support,
            support,
        });
    }
    Ok(())
}

impl fmt::Debug for FinitePermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinitePermGroup(support={}, order={}, blocks={:?})",
            self.support,
            self.order(),
            self.blocks
        )
    }
}
