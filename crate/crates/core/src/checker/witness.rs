use std::collections::HashMap;
use std::sync::Arc;

use super::eval::{resolve_indices, Model};
use super::{Bindings, Certificate, CheckError, Compiled, Verdict};
use crate::formula::Formula;
use crate::perm::Permutation;
use crate::presentation::{LevelGroup, PresentationError, ProfinitePresentation};

/// Upper bound on the number of candidate tuples examined at one level.
pub const MAX_CANDIDATES: usize = 1 << 24;

/// The satisfying tuples at one level.
#[derive(Debug, Clone)]
pub struct WitnessLevel {
    group: Arc<LevelGroup>,
    /// Element indices into `G_k`, one per witness variable.
    tuples: Vec<Vec<u32>>,
    /// Position of the restricted tuple one level down, if it is a node.
    parents: Vec<Option<usize>>,
    /// Whether the node starts a chain of nodes reaching the last level.
    alive: Vec<bool>,
}

impl WitnessLevel {
    pub fn level(&self) -> usize {
        self.group.index()
    }

    pub fn width(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, i: usize) -> Vec<Permutation> {
        let els = self.group.group().elements();
        self.tuples[i].iter().map(|&e| els[e as usize].clone()).collect()
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parents[i]
    }

    pub fn alive(&self, i: usize) -> bool {
        self.alive[i]
    }
}

/// Breadth-first tree of witness tuples for a quantifier-free matrix.
#[derive(Debug, Clone)]
pub struct WitnessTree {
    pub vars: Vec<String>,
    pub matrix: Formula,
    pub kmax: usize,
    pub levels: Vec<WitnessLevel>,
}

impl WitnessTree {
    pub fn widths(&self) -> Vec<usize> {
        self.levels.iter().map(WitnessLevel::width).collect()
    }

    /// Least level holding a node from which a chain of nodes reaches `kmax`.
    pub fn surviving_from(&self) -> Option<usize> {
        self.levels.iter().position(|l| l.alive.iter().any(|&a| a))
    }

    /// Some chain of nodes spans at least two levels and ends at `kmax`.
    pub fn survives(&self) -> bool {
        self.surviving_from().is_some_and(|j| j < self.kmax)
    }

    /// Number of levels in the longest chain of nodes linked by restriction.
    pub fn longest_chain(&self) -> usize {
        let mut best = 0;
        let mut below: Vec<usize> = Vec::new();
        for l in &self.levels {
            let here: Vec<usize> = l.parents.iter().map(|p| 1 + p.map_or(0, |i| below[i])).collect();
            best = best.max(here.iter().copied().max().unwrap_or(0));
            below = here;
        }
        best
    }

    /// `CertifiedFalse` when the matrix is positive and some level has no
    /// node; the search is otherwise inconclusive at a finite depth.
    pub fn verdict(&self) -> Verdict {
        if self.matrix.is_positive() {
            if let Some(level) = self.levels.iter().position(|l| l.tuples.is_empty()) {
                return Verdict::CertifiedFalse {
                    level,
                    certificate: Certificate::EmptyLevel,
                };
            }
        }
        Verdict::UnknownUpTo(self.kmax)
    }
}

/// Collects, for each level up to `kmax`, every tuple over the free variables
/// of `beta` not bound in `params` that satisfies `beta` there.
pub fn witness_tree(
    p: &ProfinitePresentation,
    beta: &Formula,
    params: &Bindings,
    kmax: usize,
) -> Result<WitnessTree, CheckError> {
    if !beta.is_quantifier_free() {
        return Err(CheckError::Shape {
            procedure: "witness_tree",
            expected: "a quantifier-free matrix",
            formula: beta.to_string(),
        });
    }
    let c = Compiled::new(beta);
    let free = c.free().to_vec();
    let vars: Vec<String> = free.iter().filter(|v| !params.contains_key(*v)).cloned().collect();
    let param_vars: Vec<String> = free.iter().filter(|v| params.contains_key(*v)).cloned().collect();
    let mut levels: Vec<WitnessLevel> = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let group = p.level(k)?;
        let n = group.order();
        let candidates = n.checked_pow(vars.len() as u32).filter(|&c| c <= MAX_CANDIDATES);
        let Some(candidates) = candidates else {
            return Err(PresentationError::ResourceLimit {
                stage: k,
                elements: n.saturating_pow(vars.len() as u32),
                limit: MAX_CANDIDATES,
            }
            .into());
        };
        let param_values = resolve_indices(p, k, &param_vars, params)?;
        let model = Model::for_level(
            &group,
            candidates.saturating_mul(n.pow(c.quantifier_depth() as u32)) >= n * n,
        );
        let mut values = vec![0u32; free.len()];
        let mut tuples = Vec::new();
        for mut code in 0..candidates {
            let mut tuple = vec![0u32; vars.len()];
            for t in tuple.iter_mut().rev() {
                *t = (code % n) as u32;
                code /= n;
            }
            let (mut wi, mut pi) = (0, 0);
            for (slot, v) in free.iter().enumerate() {
                if params.contains_key(v) {
                    values[slot] = param_values[pi];
                    pi += 1;
                } else {
                    values[slot] = tuple[wi];
                    wi += 1;
                }
            }
            if c.eval(&model, &values) {
                tuples.push(tuple);
            }
        }
        let parents = match levels.last() {
            None => vec![None; tuples.len()],
            Some(prev) => {
                let lower = prev.group.group();
                let m = lower.support();
                let down: Vec<u32> = group
                    .group()
                    .elements()
                    .iter()
                    .map(|e| {
                        let r = e.prefix(m).expect("levels grow");
                        lower.index_of(&r).expect("restriction lands in the level below") as u32
                    })
                    .collect();
                let index: HashMap<&[u32], usize> =
                    prev.tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
                tuples
                    .iter()
                    .map(|t| {
                        let r: Vec<u32> = t.iter().map(|&e| down[e as usize]).collect();
                        index.get(r.as_slice()).copied()
                    })
                    .collect()
            }
        };
        levels.push(WitnessLevel {
            group,
            alive: vec![false; tuples.len()],
            tuples,
            parents,
        });
    }
    for a in levels[kmax].alive.iter_mut() {
        *a = true;
    }
    for k in (1..=kmax).rev() {
        let (lower, upper) = levels.split_at_mut(k);
        let below = &mut lower[k - 1];
        for (i, parent) in upper[0].parents.iter().enumerate() {
            if let (Some(pi), true) = (parent, upper[0].alive[i]) {
                below.alive[*pi] = true;
            }
        }
    }
    Ok(WitnessTree {
        vars,
        matrix: beta.clone(),
        kmax,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn c2_power(levels: usize) -> ProfinitePresentation {
        let g = (0..levels)
            .map(|_| crate::group::cyclic(2))
            .reduce(|a, b| crate::group::direct_product(&a, &b))
            .unwrap();
        let levels = (1..=levels).map(|c| g.project_blocks(c).unwrap()).collect();
        ProfinitePresentation::from_levels("c2^n", levels).unwrap()
    }

    #[test]
    fn identity_chain() {
        let p = c2_power(3);
        let t = witness_tree(&p, &parse("x = 1").unwrap(), &Bindings::new(), 4).unwrap();
        assert_eq!(t.widths(), vec![1; 5]);
        assert_eq!(t.surviving_from(), Some(0));
        assert_eq!(t.longest_chain(), 5);
        assert!(t.survives());
    }

    #[test]
    fn involutions_in_a_product() {
        let p = c2_power(4);
        let t = witness_tree(&p, &parse("x != 1 & x^2 = 1").unwrap(), &Bindings::new(), 3).unwrap();
        assert_eq!(t.widths(), vec![1, 3, 7, 15]);
        assert_eq!(t.surviving_from(), Some(0));
        assert_eq!(t.verdict(), Verdict::UnknownUpTo(3));
    }

    #[test]
    fn empty_positive_level_certifies_falsity() {
        let p = c2_power(2);
        let swap = crate::perm::Permutation::from_cycles(2, "(0 1)").unwrap();
        let mut params = Bindings::new();
        params.insert(
            "h".into(),
            crate::presentation::ElementHandle::identity_extension("h", 0, swap),
        );
        let t = witness_tree(&p, &parse("x*x = h").unwrap(), &params, 2).unwrap();
        assert_eq!(t.widths(), vec![0, 0, 0]);
        assert!(matches!(t.verdict(), Verdict::CertifiedFalse { level: 0, .. }));
        // the same emptiness says nothing once the matrix has a negated literal
        let t = witness_tree(&p, &parse("x*x = h & x != 1").unwrap(), &params, 2).unwrap();
        assert_eq!(t.verdict(), Verdict::UnknownUpTo(2));
    }
}
