use super::{holds_compiled, Bindings, Certificate, CheckError, Compiled, Verdict};
use crate::formula::{dnf_clauses, Formula, Literal};
use crate::presentation::ProfinitePresentation;

fn literal_verdict(
    p: &ProfinitePresentation,
    lit: &Literal,
    bindings: &Bindings,
    kmax: usize,
) -> Result<Verdict, CheckError> {
    if lit.term.reduced().is_one() {
        return Ok(if lit.positive {
            Verdict::CertifiedTrue {
                level: 0,
                certificate: Certificate::TrivialWord,
            }
        } else {
            Verdict::CertifiedFalse {
                level: 0,
                certificate: Certificate::TrivialWord,
            }
        });
    }
    let atom = Compiled::new(&Formula::Atomic(lit.term.clone()));
    for k in 0..=kmax {
        let word_trivial = holds_compiled(p, k, &atom, bindings)?;
        if lit.positive && !word_trivial {
            return Ok(Verdict::CertifiedFalse {
                level: k,
                certificate: Certificate::PositiveFailsUpward,
            });
        }
        if !lit.positive && !word_trivial {
            return Ok(Verdict::CertifiedTrue {
                level: k,
                certificate: Certificate::NegativeHoldsUpward,
            });
        }
    }
    Ok(Verdict::UnknownUpTo(kmax))
}

fn conjunction(parts: &[Verdict], kmax: usize) -> Verdict {
    let first_false = parts.iter().filter(|v| v.is_false()).min_by_key(|v| level_of(v));
    if let Some(v) = first_false {
        return *v;
    }
    if parts.iter().all(Verdict::is_true) {
        return *parts.iter().max_by_key(|v| level_of(v)).expect("clauses are non-empty");
    }
    Verdict::UnknownUpTo(kmax)
}

fn disjunction(parts: &[Verdict], kmax: usize) -> Verdict {
    let first_true = parts.iter().filter(|v| v.is_true()).min_by_key(|v| level_of(v));
    if let Some(v) = first_true {
        return *v;
    }
    if parts.iter().all(Verdict::is_false) {
        return *parts.iter().max_by_key(|v| level_of(v)).expect("at least one clause");
    }
    Verdict::UnknownUpTo(kmax)
}

fn level_of(v: &Verdict) -> usize {
    match v {
        Verdict::CertifiedTrue { level, .. } | Verdict::CertifiedFalse { level, .. } => *level,
        Verdict::UnknownUpTo(k) => *k,
    }
}

/// Limit truth of a quantifier-free formula along the handles' paths.
///
/// Each literal is watched level by level until it locks: a word that is
/// nontrivial at level `k` stays nontrivial at every level above. Verdicts
/// combine three-valuedly through the disjunctive normal form.
pub fn qf_limit(
    p: &ProfinitePresentation,
    f: &Formula,
    bindings: &Bindings,
    kmax: usize,
) -> Result<Verdict, CheckError> {
    if !f.is_quantifier_free() {
        return Err(CheckError::Shape {
            procedure: "qf_limit",
            expected: "a quantifier-free formula",
            formula: f.to_string(),
        });
    }
    if let Some(v) = f.free_vars().into_iter().find(|v| !bindings.contains_key(v)) {
        return Err(CheckError::Unassigned(v));
    }
    let clauses = dnf_clauses(f)?;
    let mut clause_verdicts = Vec::with_capacity(clauses.len());
    for clause in &clauses {
        let lits = clause
            .iter()
            .map(|l| literal_verdict(p, l, bindings, kmax))
            .collect::<Result<Vec<_>, _>>()?;
        clause_verdicts.push(conjunction(&lits, kmax));
    }
    Ok(disjunction(&clause_verdicts, kmax))
}
