use std::fmt;
use std::sync::Arc;

use super::{PresentationError, ProfinitePresentation};
use crate::perm::Permutation;

type Resolver = dyn Fn(&ProfinitePresentation, usize) -> Result<Permutation, PresentationError> + Send + Sync;

/// Branch chooser for walking down the block tree: given level `k` and the
/// candidate extensions (sorted, so index 0 is the leftmost), pick one.
pub type PathStrategy = Arc<dyn Fn(usize, &[Permutation]) -> usize + Send + Sync>;

/// A coherent family `(g_k)_k`: one path through the block tree.
#[derive(Clone)]
pub struct ElementHandle {
    label: String,
    resolver: Arc<Resolver>,
}

impl fmt::Debug for ElementHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElementHandle({:?})", self.label)
    }
}

impl ElementHandle {
    pub fn new<F>(label: impl Into<String>, resolver: F) -> Self
    where
        F: Fn(&ProfinitePresentation, usize) -> Result<Permutation, PresentationError> + Send + Sync + 'static,
    {
        ElementHandle {
            label: label.into(),
            resolver: Arc::new(resolver),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity() -> Self {
        ElementHandle::new("1", |p, k| Ok(Permutation::identity(p.level(k)?.support())))
    }

    /// `γ ∈ G_j` extended by the identity on every later block. Belongs to the
    /// group whenever the presentation is orbit independent.
    pub fn identity_extension(label: impl Into<String>, level: usize, gamma: Permutation) -> Self {
        ElementHandle::new(label, move |p, k| {
            let lk = p.level(k)?;
            if k <= level {
                Ok(gamma.prefix(lk.support())?)
            } else {
                let rest = lk.support() - gamma.len();
                Ok(gamma.concat(&Permutation::identity(rest)))
            }
        })
    }

    /// The path that starts with `strategy`'s pick among `G_0` and at each
    /// level picks among the children of the previous pick.
    pub fn from_strategy(label: impl Into<String>, strategy: PathStrategy) -> Self {
        let label = label.into();
        let name = label.clone();
        ElementHandle::new(label, move |p, k| {
            let mut current: Option<Permutation> = None;
            for j in 0..=k {
                let level = p.level(j)?;
                let options = match &current {
                    None => level.group().elements(),
                    Some(parent) => level.children_of(parent),
                };
                let pick = strategy(j, options);
                let Some(next) = options.get(pick) else {
                    return Err(PresentationError::Handle {
                        label: name.clone(),
                        level: j,
                        reason: format!("strategy left the tree (pick {pick} of {})", options.len()),
                    });
                };
                current = Some(next.clone());
            }
            Ok(current.expect("k >= 0 iterations"))
        })
    }

    /// `g_k`, checked for membership in `G_k` and agreement with `g_{k-1}`.
    pub fn resolve(&self, p: &ProfinitePresentation, k: usize) -> Result<Permutation, PresentationError> {
        let level = p.level(k)?;
        let g = (self.resolver)(p, k)?;
        let fail = |reason: String| PresentationError::Handle {
            label: self.label.clone(),
            level: k,
            reason,
        };
        if !level.group().contains(&g) {
            return Err(fail(format!("{g} is not in G_{k}")));
        }
        if k > 0 {
            let below = (self.resolver)(p, k - 1)?;
            if g.prefix(below.len()).ok().as_ref() != Some(&below) {
                return Err(fail(format!("{g} does not extend {below}")));
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_tower() -> ProfinitePresentation {
        ProfinitePresentation::from_levels(
            "c2xc2",
            vec![
                crate::group::cyclic(2),
                crate::group::direct_product(&crate::group::cyclic(2), &crate::group::cyclic(2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_handle() {
        let p = c2_tower();
        for k in 0..4 {
            assert!(ElementHandle::identity().resolve(&p, k).unwrap().is_identity());
        }
    }

    #[test]
    fn identity_extension_is_coherent() {
        let p = c2_tower();
        let swap = Permutation::from_cycles(2, "(0 1)").unwrap();
        let h = ElementHandle::identity_extension("s", 0, swap);
        assert_eq!(h.resolve(&p, 1).unwrap().to_string(), "(0 1)");
        assert_eq!(h.resolve(&p, 3).unwrap().len(), 6);
    }

    #[test]
    fn strategy_paths() {
        let p = c2_tower();
        let right: PathStrategy = Arc::new(|_, opts| opts.len() - 1);
        let h = ElementHandle::from_strategy("right", right);
        assert_eq!(h.resolve(&p, 1).unwrap().to_string(), "(0 1)(2 3)");
        let off: PathStrategy = Arc::new(|_, opts| opts.len());
        let bad = ElementHandle::from_strategy("off", off);
        assert!(matches!(bad.resolve(&p, 0), Err(PresentationError::Handle { .. })));
    }

    #[test]
    fn incoherent_handle_is_reported() {
        let p = c2_tower();
        let h = ElementHandle::new("flip", |p, k| {
            let l = p.level(k)?;
            Ok(if k == 1 {
                Permutation::from_cycles(l.support(), "(2 3)")?
            } else if k == 0 {
                Permutation::from_cycles(2, "(0 1)")?
            } else {
                Permutation::identity(l.support())
            })
        });
        assert!(h.resolve(&p, 0).is_ok());
        assert!(matches!(
            h.resolve(&p, 1),
            Err(PresentationError::Handle { level: 1, .. })
        ));
    }
}
