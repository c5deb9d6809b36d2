//! First-order formulas in the language of groups.
//!
//! Atomic formulas are word equations `W = 1`; `t1 = t2` is stored as
//! `t1 · t2⁻¹ = 1` and `t1 != t2` as its negation.

mod dnf;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use dnf::{dnf_clauses, to_dnf, DnfError, Literal};
pub use parse::{parse, ParseError};

/// One letter of a word: a variable raised to `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub var: String,
    pub inverted: bool,
}

impl Letter {
    pub fn new(var: impl Into<String>) -> Self {
        Letter {
            var: var.into(),
            inverted: false,
        }
    }

    pub fn inv(var: impl Into<String>) -> Self {
        Letter {
            var: var.into(),
            inverted: true,
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            var: self.var.clone(),
            inverted: !self.inverted,
        }
    }
}

/// A group word. The empty word is the identity symbol `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub word: Vec<Letter>,
}

impl Term {
    pub fn one() -> Self {
        Term::default()
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term {
            word: vec![Letter::new(name)],
        }
    }

    /// `name^exp`, expanded into `|exp|` letters.
    pub fn power(name: &str, exp: i64) -> Self {
        let letter = if exp < 0 { Letter::inv(name) } else { Letter::new(name) };
        Term {
            word: vec![letter; exp.unsigned_abs() as usize],
        }
    }

    pub fn is_one(&self) -> bool {
        self.word.is_empty()
    }

    pub fn mul(&self, other: &Term) -> Term {
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Term { word }
    }

    pub fn inverse(&self) -> Term {
        Term {
            word: self.word.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> Term {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut word = Vec::with_capacity(base.word.len() * exp.unsigned_abs() as usize);
        for _ in 0..exp.unsigned_abs() {
            word.extend(base.word.iter().cloned());
        }
        Term { word }
    }

    /// Free reduction; words are otherwise kept as written.
    pub fn reduced(&self) -> Term {
        let mut out: Vec<Letter> = Vec::with_capacity(self.word.len());
        for l in &self.word {
            match out.last() {
                Some(top) if top.var == l.var && top.inverted != l.inverted => {
                    out.pop();
                }
                _ => out.push(l.clone()),
            }
        }
        Term { word: out }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.word.iter().map(|l| l.var.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `W = 1`
    Atomic(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    QuantifierFree,
    Existential,
    Universal,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub polarity: Polarity,
    pub shape: Shape,
}

impl Formula {
    pub fn atomic(t: Term) -> Self {
        Formula::Atomic(t)
    }

    /// `lhs = rhs`, normalized to `lhs · rhs⁻¹ = 1`.
    pub fn eq(lhs: &Term, rhs: &Term) -> Self {
        Formula::Atomic(lhs.mul(&rhs.inverse()))
    }

    pub fn neq(lhs: &Term, rhs: &Term) -> Self {
        Formula::not(Formula::eq(lhs, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Atomic(t) => t.vars(),
            Formula::Not(f) => f.free_vars(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut s = f.free_vars();
                s.remove(v);
                s
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atomic(_) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    fn has_negation(&self) -> bool {
        match self {
            Formula::Atomic(_) => false,
            Formula::Not(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.has_negation() || b.has_negation(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.has_negation(),
        }
    }

    pub fn is_positive(&self) -> bool {
        !self.has_negation()
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Formula::Not(inner) if inner.is_positive())
    }

    pub fn classify(&self) -> Classification {
        let polarity = if self.is_positive() {
            Polarity::Positive
        } else if self.is_negative() {
            Polarity::Negative
        } else {
            Polarity::Neither
        };
        let shape = if self.is_quantifier_free() {
            Shape::QuantifierFree
        } else if let Some((_, matrix)) = self.existential_prefix() {
            if matrix.is_quantifier_free() {
                Shape::Existential
            } else {
                Shape::General
            }
        } else if let Some((_, matrix)) = self.universal_prefix() {
            if matrix.is_quantifier_free() {
                Shape::Universal
            } else {
                Shape::General
            }
        } else {
            Shape::General
        };
        Classification { polarity, shape }
    }

    /// Leading block of existential quantifiers and the rest, if non-empty.
    pub fn existential_prefix(&self) -> Option<(Vec<String>, &Formula)> {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Exists(v, body) = cur {
            vars.push(v.clone());
            cur = body;
        }
        (!vars.is_empty()).then_some((vars, cur))
    }

    fn universal_prefix(&self) -> Option<(Vec<String>, &Formula)> {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Forall(v, body) = cur {
            vars.push(v.clone());
            cur = body;
        }
        (!vars.is_empty()).then_some((vars, cur))
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Atomic(_) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(a, b) | Formula::Or(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::term_to_string(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::formula_to_string(self))
    }
}

/// The `n`-th prime, counting from `p_0 = 2`.
pub fn nth_prime(n: usize) -> u64 {
    let mut count = 0;
    let mut candidate = 2u64;
    loop {
        if is_prime(candidate) {
            if count == n {
                return candidate;
            }
            count += 1;
        }
        candidate += 1;
    }
}

fn is_prime(m: u64) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// `∃x (x ≠ 1 ∧ x^p = 1)` with `p` the `n`-th prime: "some element has order `p`".
pub fn alpha_n(n: usize) -> Formula {
    Formula::exists("x", alpha_matrix(n, "x"))
}

/// The quantifier-free matrix of [`alpha_n`] in the variable `var`.
pub fn alpha_matrix(n: usize, var: &str) -> Formula {
    let p = nth_prime(n) as i64;
    Formula::and(
        Formula::not(Formula::Atomic(Term::var(var))),
        Formula::Atomic(Term::power(var, p)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = p("E x. x^2 = 1").classify();
        assert_eq!((c.polarity, c.shape), (Polarity::Positive, Shape::Existential));
        let c = p("E x. x != 1 & x^2 = 1").classify();
        assert_eq!((c.polarity, c.shape), (Polarity::Neither, Shape::Existential));
        let c = p("!(E x. x^2 = 1)").classify();
        assert_eq!((c.polarity, c.shape), (Polarity::Negative, Shape::General));
        let c = p("A x. x^2 = 1").classify();
        assert_eq!(c.shape, Shape::Universal);
        let c = p("x = 1 | y != 1").classify();
        assert_eq!((c.polarity, c.shape), (Polarity::Neither, Shape::QuantifierFree));
        let c = p("A x. E y. y*y = x").classify();
        assert_eq!((c.polarity, c.shape), (Polarity::Positive, Shape::General));
    }

    #[test]
    fn quantifier_rank_examples() {
        assert_eq!(p("x = 1").quantifier_rank(), 0);
        assert_eq!(p("E x. x^2 = 1").quantifier_rank(), 1);
        assert_eq!(p("A x. E y. y*y = x").quantifier_rank(), 2);
        assert_eq!(p("(E x. x = 1) & (A y. E z. y = z)").quantifier_rank(), 2);
    }

    #[test]
    fn alpha_n_examples() {
        assert_eq!(alpha_n(0), p("E x. x != 1 & x^2 = 1"));
        assert_eq!(alpha_n(1), p("E x. x != 1 & x^3 = 1"));
        assert_eq!(alpha_n(2), p("E x. x != 1 & x^5 = 1"));
        assert_eq!(nth_prime(4), 11);
    }

    #[test]
    fn free_vars_and_sentences() {
        let f = p("E x. x*y = z");
        assert_eq!(
            f.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["y".to_string(), "z".to_string()]
        );
        assert!(!f.is_sentence());
        assert!(p("A x. E y. y*y = x").is_sentence());
    }

    #[test]
    fn free_reduction() {
        let t = Term {
            word: vec![Letter::new("x"), Letter::new("y"), Letter::inv("y"), Letter::inv("x")],
        };
        assert!(t.reduced().is_one());
        assert_eq!(Term::power("x", 3).reduced(), Term::power("x", 3));
    }
}
