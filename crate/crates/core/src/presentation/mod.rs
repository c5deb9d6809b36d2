//! Profinite groups presented as lazily generated towers of level groups.
//!
//! Level `k` is the group `G_k` of restrictions of every element to the first
//! `k + 1` orbit blocks. Dropping the last block maps `G_{k+1}` onto `G_k`; the
//! tower is validated against that as each level is generated.

mod dump;
mod handle;
mod inverse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::group::{CayleyTable, FinitePermGroup};
use crate::perm::{PermError, Permutation};

pub use dump::{parse_dump, Encoding};
pub use handle::{ElementHandle, PathStrategy};
pub use inverse::{import_inverse_system, InverseSystem, TableGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("stage {stage}: level would hold {elements} elements, over the limit of {limit}")]
    ResourceLimit {
        stage: usize,
        elements: usize,
        limit: usize,
    },
    #[error("level {level} is incoherent with the level below: {reason}")]
    Incoherent { level: usize, reason: String },
    #[error("permutation {node} is not an element of level {level}")]
    NotInLevel { level: usize, node: String },
    #[error("handle {label:?} at level {level}: {reason}")]
    Handle {
        label: String,
        level: usize,
        reason: String,
    },
    #[error("inverse system: {0}")]
    Import(String),
    #[error("tree dump: {0}")]
    Dump(String),
    #[error("{0}")]
    Build(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Level `k` of a presentation: `G_k` with blocks `O_0, .., O_k`.
pub struct LevelGroup {
    index: usize,
    group: FinitePermGroup,
    table: OnceLock<Option<Arc<CayleyTable>>>,
    last_block_order: OnceLock<usize>,
}

impl LevelGroup {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn group(&self) -> &FinitePermGroup {
        &self.group
    }

    pub fn support(&self) -> usize {
        self.group.support()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn last_block(&self) -> Range<usize> {
        self.group.blocks()[self.index].clone()
    }

    /// Elements of this level restricting to `parent`, which lives one level down.
    /// Contiguous because elements are sorted lexicographically.
    pub fn children_of(&self, parent: &Permutation) -> &[Permutation] {
        let n = parent.len();
        let els = self.group.elements();
        let lo = els.partition_point(|e| &e.images()[..n] < parent.images());
        let hi = els.partition_point(|e| &e.images()[..n] <= parent.images());
        &els[lo..hi]
    }

    /// `|H_k|`: the number of distinct actions on the last block.
    pub fn last_block_order(&self) -> usize {
        *self.last_block_order.get_or_init(|| {
            let block = self.last_block();
            let actions: std::collections::HashSet<&[u32]> = self
                .group
                .elements()
                .iter()
                .map(|e| &e.images()[block.clone()])
                .collect();
            actions.len()
        })
    }

    /// Multiplication table, built on first use when affordable.
    pub fn table(&self) -> Option<&CayleyTable> {
        self.table
            .get_or_init(|| CayleyTable::affordable(&self.group).then(|| Arc::new(CayleyTable::build(&self.group))))
            .as_deref()
    }
}

impl fmt::Debug for LevelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LevelGroup({}, {:?})", self.index, self.group)
    }
}

/// Inputs a builder sees when asked for level `k`.
pub struct BuildContext<'a> {
    pub k: usize,
    pub lower: &'a [Arc<LevelGroup>],
    pub max_elements: usize,
}

impl BuildContext<'_> {
    pub fn previous(&self) -> Option<&LevelGroup> {
        self.lower.last().map(|l| &**l)
    }

    /// Support size of `G_{k-1}`, i.e. the first point of block `k`.
    pub fn next_point(&self) -> usize {
        self.previous().map_or(0, |l| l.support())
    }

    pub fn ensure_within(&self, elements: usize) -> Result<(), PresentationError> {
        if elements > self.max_elements {
            return Err(PresentationError::ResourceLimit {
                stage: self.k,
                elements,
                limit: self.max_elements,
            });
        }
        Ok(())
    }
}

/// Deterministic generator of level groups. Level `k` is requested only after
/// levels `0..k` exist, and at most once per presentation.
pub trait LevelBuilder: Send + Sync {
    fn build(&self, ctx: &BuildContext<'_>) -> Result<FinitePermGroup, PresentationError>;
}

impl<F> LevelBuilder for F
where
    F: Fn(&BuildContext<'_>) -> Result<FinitePermGroup, PresentationError> + Send + Sync,
{
    fn build(&self, ctx: &BuildContext<'_>) -> Result<FinitePermGroup, PresentationError> {
        self(ctx)
    }
}

pub struct ProfinitePresentation {
    kind: String,
    orbit_independent: bool,
    builder: Box<dyn LevelBuilder>,
    cache: Mutex<Vec<Arc<LevelGroup>>>,
    max_elements: usize,
    handles: BTreeMap<String, ElementHandle>,
}

impl fmt::Debug for ProfinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProfinitePresentation")
            .field("kind", &self.kind)
            .field("orbit_independent", &self.orbit_independent)
            .finish_non_exhaustive()
    }
}

impl ProfinitePresentation {
    pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 20;

    pub fn new(kind: impl Into<String>, orbit_independent: bool, builder: impl LevelBuilder + 'static) -> Self {
        ProfinitePresentation {
            kind: kind.into(),
            orbit_independent,
            builder: Box::new(builder),
            cache: Mutex::new(Vec::new()),
            max_elements: Self::DEFAULT_MAX_ELEMENTS,
            handles: BTreeMap::new(),
        }
    }

    pub fn with_max_elements(mut self, limit: usize) -> Self {
        self.max_elements = limit;
        self
    }

    pub fn with_handle(mut self, name: impl Into<String>, handle: ElementHandle) -> Self {
        self.handles.insert(name.into(), handle);
        self
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    /// Whether the construction declares itself orbit independent.
    pub fn declared_orbit_independent(&self) -> bool {
        self.orbit_independent
    }

    pub fn handle(&self, name: &str) -> Option<&ElementHandle> {
        self.handles.get(name)
    }

    pub fn handles(&self) -> &BTreeMap<String, ElementHandle> {
        &self.handles
    }

    /// `G_k`, generating and validating any missing levels first.
    pub fn level(&self, k: usize) -> Result<Arc<LevelGroup>, PresentationError> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        while cache.len() <= k {
            let j = cache.len();
            let ctx = BuildContext {
                k: j,
                lower: &cache,
                max_elements: self.max_elements,
            };
            let group = self.builder.build(&ctx)?;
            ctx.ensure_within(group.order())?;
            validate_level(j, &group, cache.last().map(|l| &**l))?;
            cache.push(Arc::new(LevelGroup {
                index: j,
                group,
                table: OnceLock::new(),
                last_block_order: OnceLock::new(),
            }));
        }
        Ok(cache[k].clone())
    }

    /// Levels `0..=k`.
    pub fn levels(&self, k: usize) -> Result<Vec<Arc<LevelGroup>>, PresentationError> {
        self.level(k)?;
        let cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        Ok(cache[..=k].to_vec())
    }

    /// `H_k`: the image of `G_k` restricted to its last block, re-indexed from 0.
    pub fn h_k(&self, k: usize) -> Result<FinitePermGroup, PresentationError> {
        let level = self.level(k)?;
        Ok(level.group().restrict_to(level.last_block())?)
    }

    /// Number of elements of `G_{k+1}` restricting to `node ∈ G_k`.
    pub fn branching(&self, k: usize, node: &Permutation) -> Result<usize, PresentationError> {
        let level = self.level(k)?;
        if !level.group().contains(node) {
            return Err(PresentationError::NotInLevel {
                level: k,
                node: node.to_string(),
            });
        }
        Ok(self.level(k + 1)?.children_of(node).len())
    }

    /// `|G_j| = ∏_{i≤j} |H_i|` for every `j ≤ k`: every blockwise combination occurs.
    pub fn is_orbit_independent_upto(&self, k: usize) -> Result<bool, PresentationError> {
        Ok(self.first_dependent_level(k)?.is_none())
    }

    /// Least `j ≤ k` with `|G_j| ≠ |G_{j-1}| · |H_j|`, if any.
    pub fn first_dependent_level(&self, k: usize) -> Result<Option<usize>, PresentationError> {
        let mut below = 1usize;
        for j in 0..=k {
            let level = self.level(j)?;
            if level.order() != below * level.last_block_order() {
                return Ok(Some(j));
            }
            below = level.order();
        }
        Ok(None)
    }

    /// Presentation of explicitly given levels, extended past the last one by
    /// fixed singleton blocks.
    pub fn from_levels(kind: impl Into<String>, levels: Vec<FinitePermGroup>) -> Result<Self, PresentationError> {
        if levels.is_empty() {
            return Err(PresentationError::Build("at least one level is required".into()));
        }
        let mut below = 1usize;
        let mut independent = true;
        for (j, g) in levels.iter().enumerate() {
            let h = g.restrict_to(g.blocks()[j].clone())?.order();
            independent &= g.order() == below * h;
            below = g.order();
        }
        let levels = Arc::new(levels);
        let builder = move |ctx: &BuildContext<'_>| -> Result<FinitePermGroup, PresentationError> {
            match levels.get(ctx.k) {
                Some(g) => Ok(g.clone()),
                None => Ok(extend_trivially(ctx.previous().expect("level 0 is explicit").group())),
            }
        };
        Ok(ProfinitePresentation::new(kind, independent, builder))
    }

    /// The closed group generated by `gens` on `{0, .., support-1}`, with every
    /// later point fixed. Orbits must be contiguous intervals.
    pub fn from_finite_group(support: usize, gens: &[Permutation]) -> Result<Self, PresentationError> {
        let closed = FinitePermGroup::closure(support, gens)?;
        let orbits = closed.orbits();
        let mut blocks = Vec::with_capacity(orbits.len());
        for o in &orbits {
            let (lo, hi) = (o[0], o[o.len() - 1]);
            if hi - lo + 1 != o.len() {
                return Err(PresentationError::Build(format!(
                    "orbit {o:?} is not a contiguous interval"
                )));
            }
            blocks.push(lo..hi + 1);
        }
        let g = FinitePermGroup::from_parts(support, closed.elements().to_vec(), blocks)?;
        let levels = (1..=orbits.len())
            .map(|count| g.project_blocks(count))
            .collect::<Result<Vec<_>, _>>()?;
        ProfinitePresentation::from_levels("finite", levels)
    }

    /// The trivial group: every level fixes every point, one point per block.
    pub fn trivial() -> Self {
        ProfinitePresentation::from_finite_group(1, &[]).expect("trivial group is well formed")
    }
}

/// `G ⌢ (N)`: one more fixed point as its own block.
pub(crate) fn extend_trivially(g: &FinitePermGroup) -> FinitePermGroup {
    let n = g.support();
    let fix = Permutation::identity(1);
    let elements = g.elements().iter().map(|e| e.concat(&fix)).collect();
    let mut blocks = g.blocks().to_vec();
    blocks.push(n..n + 1);
    FinitePermGroup::from_sorted_unchecked(n + 1, elements, blocks)
}

fn validate_level(k: usize, group: &FinitePermGroup, below: Option<&LevelGroup>) -> Result<(), PresentationError> {
    let incoherent = |reason: String| PresentationError::Incoherent { level: k, reason };
    if group.blocks().len() != k + 1 {
        return Err(incoherent(format!(
            "expected {} blocks, found {}",
            k + 1,
            group.blocks().len()
        )));
    }
    if let Some(below) = below {
        if group.blocks()[..k] != *below.group().blocks() {
            return Err(incoherent("lower blocks changed".into()));
        }
        // restriction keeps lexicographic order; compare the deduplicated image
        let n = below.support();
        let mut image: Vec<&[u32]> = group.elements().iter().map(|e| &e.images()[..n]).collect();
        image.dedup();
        let expected: Vec<&[u32]> = below.group().elements().iter().map(|e| e.images()).collect();
        if image != expected {
            return Err(incoherent("restriction does not map onto the level below".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::from_cycles(n, s).unwrap()
    }

    fn swap_pair() -> ProfinitePresentation {
        ProfinitePresentation::from_finite_group(4, &[cyc(4, "(0 1)(2 3)")]).unwrap()
    }

    #[test]
    fn finite_group_levels_and_h() {
        let p = swap_pair();
        assert_eq!(p.level(0).unwrap().order(), 2);
        assert_eq!(p.level(1).unwrap().order(), 2);
        assert_eq!(p.h_k(0).unwrap().order(), 2);
        assert_eq!(p.h_k(1).unwrap().order(), 2);
        assert_eq!(p.h_k(2).unwrap().order(), 1);
        assert_eq!(p.level(3).unwrap().support(), 6);
        assert!(!p.is_orbit_independent_upto(1).unwrap());
        assert!(p.is_orbit_independent_upto(0).unwrap());
        assert!(!p.declared_orbit_independent());

        let q = ProfinitePresentation::from_finite_group(2, &[cyc(2, "(0 1)")]).unwrap();
        assert!(q.is_orbit_independent_upto(5).unwrap());
        assert!(q.declared_orbit_independent());
    }

    #[test]
    fn trivial_presentation() {
        let t = ProfinitePresentation::trivial();
        for k in 0..4 {
            assert_eq!(t.level(k).unwrap().order(), 1);
            assert_eq!(t.h_k(k).unwrap().order(), 1);
            assert_eq!(t.branching(k, &Permutation::identity(k + 1)).unwrap(), 1);
        }
    }

    #[test]
    fn branching_rejects_foreign_nodes() {
        let p = swap_pair();
        assert_eq!(p.branching(0, &cyc(2, "(0 1)")).unwrap(), 1);
        let err = p.branching(1, &cyc(4, "(0 1)"));
        assert!(matches!(err, Err(PresentationError::NotInLevel { level: 1, .. })));
    }

    #[test]
    fn rejects_non_interval_orbits() {
        assert!(ProfinitePresentation::from_finite_group(3, &[cyc(3, "(0 2)")]).is_err());
    }

    #[test]
    fn incoherent_builder_is_caught() {
        let p = ProfinitePresentation::new("broken", false, |ctx: &BuildContext<'_>| {
            if ctx.k == 0 {
                Ok(crate::group::cyclic(2))
            } else {
                // drops the swap on block 0
                let g = FinitePermGroup::from_parts(3, vec![Permutation::identity(3)], vec![0..2, 2..3])?;
                Ok(g)
            }
        });
        assert!(p.level(0).is_ok());
        assert!(matches!(
            p.level(1),
            Err(PresentationError::Incoherent { level: 1, .. })
        ));
    }

    #[test]
    fn resource_limit_names_the_stage() {
        let p = ProfinitePresentation::new("big", true, |ctx: &BuildContext<'_>| {
            let base = ctx.previous().map(|l| l.group().clone());
            let c = crate::group::cyclic(3);
            Ok(match base {
                Some(b) => crate::group::direct_product(&b, &c),
                None => c,
            })
        })
        .with_max_elements(100);
        assert!(p.level(3).is_ok());
        assert_eq!(
            p.level(4).unwrap_err(),
            PresentationError::ResourceLimit {
                stage: 4,
                elements: 243,
                limit: 100
            }
        );
    }
}
