use serde::Serialize;

use super::{holds_compiled, Bindings, Certificate, CheckError, Compiled, Verdict};
use crate::formula::{Formula, Shape};
use crate::presentation::ProfinitePresentation;

fn require_orbit_independent(
    p: &ProfinitePresentation,
    procedure: &'static str,
    kmax: usize,
) -> Result<(), CheckError> {
    let refuse = |reason: String| CheckError::Refused {
        procedure,
        kind: p.kind().to_string(),
        reason,
    };
    if !p.declared_orbit_independent() {
        return Err(refuse("the presentation is not declared orbit independent".into()));
    }
    match p.first_dependent_level(kmax)? {
        Some(j) => Err(refuse(format!(
            "level {j} is not the full product of its blocks' actions"
        ))),
        None => Ok(()),
    }
}

/// Semi-decision of an existential sentence on an orbit-independent group:
/// the least level at which it holds, if any up to `kmax`.
pub fn decide_exists_oi(p: &ProfinitePresentation, s: &Formula, kmax: usize) -> Result<Verdict, CheckError> {
    let shape = s.classify().shape;
    if !s.is_sentence() || !matches!(shape, Shape::Existential | Shape::QuantifierFree) {
        return Err(CheckError::Shape {
            procedure: "decide_exists_oi",
            expected: "an existential sentence",
            formula: s.to_string(),
        });
    }
    require_orbit_independent(p, "decide_exists_oi", kmax)?;
    let c = Compiled::new(s);
    let holds = |k| holds_compiled(p, k, &c, &Bindings::new());
    // On a full product a witness at level k extends by the identity to every
    // higher level, so truth is monotone in k and the least level can be
    // found by bisection.
    if !holds(kmax)? {
        return Ok(Verdict::UnknownUpTo(kmax));
    }
    let (mut lo, mut hi) = (0, kmax);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Verdict::CertifiedTrue {
        level: lo,
        certificate: Certificate::IdentityExtension,
    })
}

/// Truth of a sentence at each level of a range, and the value it settles on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub kmin: usize,
    pub kmax: usize,
    /// `values[i]` is the truth value at level `kmin + i`.
    pub values: Vec<bool>,
    /// Value and first level of the longest constant suffix, when that suffix
    /// spans at least two levels.
    pub tail: Option<(bool, usize)>,
}

impl StabilizationReport {
    pub fn stabilized(&self) -> Option<bool> {
        self.tail.map(|(v, _)| v)
    }

    pub fn onset(&self) -> Option<usize> {
        self.tail.map(|(_, k)| k)
    }
}

/// Evaluates `s` on levels `kmin..=kmax` of an orbit-independent group.
pub fn fv_stabilize(
    p: &ProfinitePresentation,
    s: &Formula,
    kmin: usize,
    kmax: usize,
) -> Result<StabilizationReport, CheckError> {
    if kmin > kmax {
        return Err(CheckError::Range { kmin, kmax });
    }
    if !s.is_sentence() {
        return Err(CheckError::Shape {
            procedure: "fv_stabilize",
            expected: "a sentence",
            formula: s.to_string(),
        });
    }
    require_orbit_independent(p, "fv_stabilize", kmax)?;
    let c = Compiled::new(s);
    let values = (kmin..=kmax)
        .map(|k| holds_compiled(p, k, &c, &Bindings::new()))
        .collect::<Result<Vec<_>, _>>()?;
    let last = *values.last().expect("range is non-empty");
    let run = values.iter().rev().take_while(|&&v| v == last).count();
    let tail = (run >= 2).then(|| (last, kmin + values.len() - run));
    Ok(StabilizationReport {
        kmin,
        kmax,
        values,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{alpha_n, parse};
    use crate::perm::Permutation;

    fn product(orders: &[usize]) -> ProfinitePresentation {
        let levels = (0..orders.len())
            .map(|k| {
                orders[..=k]
                    .iter()
                    .map(|&n| crate::group::cyclic(n))
                    .reduce(|a, b| crate::group::direct_product(&a, &b))
                    .unwrap()
            })
            .collect();
        ProfinitePresentation::from_levels("product", levels).unwrap()
    }

    #[test]
    fn least_level_with_a_witness() {
        let p = product(&[2, 3, 5]);
        assert!(matches!(
            decide_exists_oi(&p, &alpha_n(2), 8).unwrap(),
            Verdict::CertifiedTrue { level: 2, .. }
        ));
        assert_eq!(decide_exists_oi(&p, &alpha_n(3), 10).unwrap(), Verdict::UnknownUpTo(10));
    }

    #[test]
    fn refuses_non_product_levels() {
        let g =
            ProfinitePresentation::from_finite_group(4, &[Permutation::from_cycles(4, "(0 1)(2 3)").unwrap()]).unwrap();
        assert!(matches!(
            decide_exists_oi(&g, &alpha_n(0), 3),
            Err(CheckError::Refused { .. })
        ));
        assert!(matches!(
            fv_stabilize(&g, &alpha_n(0), 0, 3),
            Err(CheckError::Refused { .. })
        ));
    }

    #[test]
    fn rejects_universal_sentences() {
        let p = product(&[2]);
        assert!(matches!(
            decide_exists_oi(&p, &parse("A x. x = 1").unwrap(), 2),
            Err(CheckError::Shape { .. })
        ));
    }

    #[test]
    fn stabilization_tail() {
        let p = product(&[2, 3]);
        let r = fv_stabilize(&p, &alpha_n(1), 0, 5).unwrap();
        assert_eq!(r.values, vec![false, true, true, true, true, true]);
        assert_eq!(r.tail, Some((true, 1)));
        let r = fv_stabilize(&p, &parse("1 = 1").unwrap(), 0, 4).unwrap();
        assert_eq!(r.tail, Some((true, 0)));
        let r = fv_stabilize(&p, &parse("1 = 1").unwrap(), 3, 3).unwrap();
        assert_eq!(r.tail, None);
    }
}
