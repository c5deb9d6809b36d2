use thiserror::Error;

use super::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("disjunctive normal form needs a quantifier-free formula, got {0}")]
pub struct DnfError(pub String);

/// `W = 1` when `positive`, `W != 1` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub term: Term,
}

impl Literal {
    pub fn to_formula(&self) -> Formula {
        let atom = Formula::Atomic(self.term.clone());
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

/// Clauses of the disjunctive normal form; each inner vector is a conjunction.
pub fn dnf_clauses(f: &Formula) -> Result<Vec<Vec<Literal>>, DnfError> {
    if !f.is_quantifier_free() {
        return Err(DnfError(f.to_string()));
    }
    Ok(clauses(f, false))
}

fn clauses(f: &Formula, negated: bool) -> Vec<Vec<Literal>> {
    match (f, negated) {
        (Formula::Atomic(t), neg) => vec![vec![Literal {
            positive: !neg,
            term: t.clone(),
        }]],
        (Formula::Not(inner), neg) => clauses(inner, !neg),
        (Formula::And(a, b), false) | (Formula::Or(a, b), true) => {
            let left = clauses(a, negated);
            let right = clauses(b, negated);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        (Formula::Or(a, b), false) | (Formula::And(a, b), true) => {
            let mut out = clauses(a, negated);
            out.extend(clauses(b, negated));
            out
        }
        (Formula::Exists(..) | Formula::Forall(..), _) => unreachable!("checked quantifier-free"),
    }
}

/// Disjunction of conjunctions of literals, logically equivalent to `f` in
/// every group.
pub fn to_dnf(f: &Formula) -> Result<Formula, DnfError> {
    let cs = dnf_clauses(f)?;
    let mut disjuncts = cs.into_iter().map(|c| {
        let mut lits = c.into_iter().map(|l| l.to_formula());
        let first = lits.next().expect("clauses are non-empty");
        lits.fold(first, Formula::and)
    });
    let first = disjuncts.next().expect("at least one clause");
    Ok(disjuncts.fold(first, Formula::or))
}
