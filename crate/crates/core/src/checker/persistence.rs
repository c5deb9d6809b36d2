use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{holds_compiled, Bindings, CheckError, Compiled};
use crate::formula::{Formula, Letter, Polarity, Term};
use crate::presentation::{ElementHandle, ProfinitePresentation};

/// Checks the monotonicity of `f` along the tower up to `kmax`: a positive
/// formula true at level `l` is true at every `k < l`, and a negative formula
/// true at level `k` is true at every `l > k`.
pub fn check_persistence(
    p: &ProfinitePresentation,
    f: &Formula,
    bindings: &Bindings,
    kmax: usize,
) -> Result<bool, CheckError> {
    let polarity = f.classify().polarity;
    if polarity == Polarity::Neither {
        return Err(CheckError::Shape {
            procedure: "check_persistence",
            expected: "a positive or negative formula",
            formula: f.to_string(),
        });
    }
    let c = Compiled::new(f);
    let values = (0..=kmax)
        .map(|k| holds_compiled(p, k, &c, bindings))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(consistent(polarity, &values))
}

fn consistent(polarity: Polarity, values: &[bool]) -> bool {
    match polarity {
        // true at l forces true below, so the values never rise
        Polarity::Positive => values.windows(2).all(|w| w[0] || !w[1]),
        // true at k forces true above, so the values never fall
        Polarity::Negative => values.windows(2).all(|w| !w[0] || w[1]),
        Polarity::Neither => true,
    }
}

fn random_word<R: Rng>(rng: &mut R, vars: &[String]) -> Term {
    let len = rng.gen_range(1..=4);
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let v = &vars[rng.gen_range(0..vars.len())];
        let letter = if rng.gen_bool(0.5) {
            Letter::new(v.as_str())
        } else {
            Letter::inv(v.as_str())
        };
        for _ in 0..rng.gen_range(1..=2) {
            word.push(letter.clone());
        }
    }
    Term { word }
}

fn random_positive<R: Rng>(rng: &mut R, vars: &mut Vec<String>, depth: usize, quantifiers: usize) -> Formula {
    let choice = if depth == 0 || vars.is_empty() && quantifiers == 0 {
        0
    } else if vars.is_empty() {
        rng.gen_range(3..5)
    } else if quantifiers == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..5)
    };
    match choice {
        0 if vars.is_empty() => Formula::Atomic(Term::one()),
        0 => Formula::Atomic(random_word(rng, vars)),
        1 => Formula::and(
            random_positive(rng, vars, depth - 1, quantifiers),
            random_positive(rng, vars, depth - 1, quantifiers),
        ),
        2 => Formula::or(
            random_positive(rng, vars, depth - 1, quantifiers),
            random_positive(rng, vars, depth - 1, quantifiers),
        ),
        _ => {
            let name = format!("x{}", vars.len());
            vars.push(name.clone());
            let body = random_positive(rng, vars, depth.saturating_sub(1).max(1), quantifiers - 1);
            vars.pop();
            if choice == 3 {
                Formula::exists(name, body)
            } else {
                Formula::forall(name, body)
            }
        }
    }
}

/// A random positive (or, when `negative`, negated positive) formula of
/// quantifier rank at most 2 over the free variables `free`.
pub fn random_formula<R: Rng>(rng: &mut R, free: &[&str], negative: bool) -> Formula {
    let mut vars: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    let f = random_positive(rng, &mut vars, 3, 2);
    if negative {
        Formula::not(f)
    } else {
        f
    }
}

/// A path through the tree chosen pseudo-randomly but reproducibly per level.
pub(crate) fn random_path(label: &str, seed: u64) -> ElementHandle {
    ElementHandle::from_strategy(
        label,
        Arc::new(move |level, options| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (level as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            rng.gen_range(0..options.len())
        }),
    )
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Random trials of the persistence implications: each trial draws a
/// presentation, a positive or negative formula with two free variables
/// bound to random paths, and levels `k < l ≤ kmax`.
pub fn persistence_suite(
    groups: &[&ProfinitePresentation],
    trials: usize,
    kmax: usize,
    seed: u64,
) -> Result<SuiteReport, CheckError> {
    assert!(kmax >= 1, "need two levels to compare");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    for trial in 0..trials {
        let p = groups[trial % groups.len()];
        let negative = rng.gen_bool(0.5);
        let f = random_formula(&mut rng, &["a", "b"], negative);
        let mut bindings = Bindings::new();
        for name in ["a", "b"] {
            bindings.insert(name.to_string(), random_path(name, rng.gen()));
        }
        let k = rng.gen_range(0..kmax);
        let l = rng.gen_range(k + 1..=kmax);
        let c = Compiled::new(&f);
        let at_k = holds_compiled(p, k, &c, &bindings)?;
        let at_l = holds_compiled(p, l, &c, &bindings)?;
        let ok = if negative { !at_k || at_l } else { at_k || !at_l };
        if !ok {
            report.violations.push(format!(
                "{}: {f} is {at_k} at level {k} and {at_l} at level {l}",
                p.kind()
            ));
        }
        report.trials += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::perm::Permutation;

    #[test]
    fn random_formulas_have_the_requested_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..200 {
            let f = random_formula(&mut rng, &["a", "b"], i % 2 == 1);
            assert!(f.quantifier_rank() <= 2, "{f}");
            if i % 2 == 1 {
                assert!(f.is_negative(), "{f}");
            } else {
                assert!(f.is_positive(), "{f}");
            }
            assert!(f.free_vars().iter().all(|v| v == "a" || v == "b"), "{f}");
        }
    }

    #[test]
    fn persistence_on_a_non_product() {
        let g =
            ProfinitePresentation::from_finite_group(4, &[Permutation::from_cycles(4, "(0 1)(2 3)").unwrap()]).unwrap();
        assert!(check_persistence(&g, &parse("E x. x^2 = 1").unwrap(), &Bindings::new(), 4).unwrap());
        assert!(check_persistence(&g, &parse("!(A x. x = 1)").unwrap(), &Bindings::new(), 4).unwrap());
        assert!(matches!(
            check_persistence(&g, &parse("E x. x != 1").unwrap(), &Bindings::new(), 2),
            Err(CheckError::Shape { .. })
        ));
        let report = persistence_suite(&[&g], 50, 4, 1).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.trials, 50);
    }
}
