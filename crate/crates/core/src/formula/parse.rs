use thiserror::Error;

use super::{Formula, Term};

/// Syntax error with a 0-based character offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Exists,
    Forall,
    Ident(String),
    Int(i64),
    Dot,
    Bar,
    Amp,
    Bang,
    LParen,
    RParen,
    Eq,
    Neq,
    Star,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Exists => "'E'".into(),
            Tok::Forall => "'A'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Dot => "'.'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Bang => "'!'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eq => "'='".into(),
            Tok::Neq => "'!='".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '.' => Tok::Dot,
            '|' => Tok::Bar,
            '&' => Tok::Amp,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    i += 1;
                    Tok::Neq
                } else {
                    Tok::Bang
                }
            }
            '-' | '0'..='9' => {
                let neg = c == '-';
                if neg {
                    i += 1;
                }
                let digits_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == digits_start {
                    return Err(ParseError {
                        position: start,
                        message: "expected digits after '-'".into(),
                    });
                }
                let s: String = chars[digits_start..i].iter().collect();
                let v: i64 = s.parse().map_err(|_| ParseError {
                    position: start,
                    message: format!("integer {s} out of range"),
                })?;
                out.push((Tok::Int(if neg { -v } else { v }), start));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = match s.as_str() {
                    "E" => Tok::Exists,
                    "A" => Tok::Forall,
                    _ => Tok::Ident(s),
                };
                out.push((tok, start));
                continue;
            }
            other => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError {
            position: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Exists | Tok::Forall => {
                let universal = self.bump() == Tok::Forall;
                let var = match self.peek().clone() {
                    Tok::Ident(s) => {
                        self.bump();
                        s
                    }
                    _ => return self.error("a variable after the quantifier"),
                };
                self.expect(Tok::Dot, "'.' after the quantified variable")?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.disj(),
        }
    }

    fn disj(&mut self) -> PResult<Formula> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conj()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                // '(' opens either a parenthesized formula or a parenthesized term
                let save = self.pos;
                let as_atomic = self.atomic();
                let atomic_err = match as_atomic {
                    Ok(f) => return Ok(f),
                    Err(e) => e,
                };
                self.pos = save;
                self.bump();
                let inner = self.formula().and_then(|f| {
                    self.expect(Tok::RParen, "')'")?;
                    Ok(f)
                });
                match inner {
                    Ok(f) => Ok(f),
                    Err(e) if e.position >= atomic_err.position => Err(e),
                    Err(_) => Err(atomic_err),
                }
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::eq(&lhs, &rhs))
            }
            Tok::Neq => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::neq(&lhs, &rhs))
            }
            _ => self.error("'=' or '!='"),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            t = t.mul(&self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> PResult<Term> {
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.peek().clone() {
                Tok::Int(k) => {
                    self.bump();
                    Ok(base.pow(k))
                }
                _ => self.error("an integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Int(1) => {
                self.bump();
                Ok(Term::one())
            }
            Tok::Int(_) => Err(ParseError {
                position: self.offset(),
                message: "the only constant is 1".into(),
            }),
            Tok::Ident(s) => {
                self.bump();
                Ok(Term::var(s))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.error("a term"),
        }
    }
}

/// Parses the formula grammar:
///
/// ```text
/// formula := ('E'|'A') ident '.' formula | disj
/// disj    := conj ('|' conj)*
/// conj    := unary ('&' unary)*
/// unary   := '!' unary | '(' formula ')' | atomic
/// atomic  := term ('='|'!=') term
/// term    := factor ('*' factor)*
/// factor  := base ('^' int)?
/// base    := '1' | ident | '(' term ')'
/// ```
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error("end of input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Letter;

    #[test]
    fn parses_alpha_shape() {
        let f = parse("E x. x != 1 & x^5 = 1").unwrap();
        let expected = Formula::exists(
            "x",
            Formula::and(
                Formula::not(Formula::Atomic(Term::var("x"))),
                Formula::Atomic(Term::power("x", 5)),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_identity_equation() {
        assert_eq!(parse("1 = 1").unwrap(), Formula::Atomic(Term::one()));
    }

    #[test]
    fn parses_square_root_sentence() {
        let f = parse("A x. E y. y*y = x").unwrap();
        let word = Term {
            word: vec![Letter::new("y"), Letter::new("y"), Letter::inv("x")],
        };
        assert_eq!(f, Formula::forall("x", Formula::exists("y", Formula::Atomic(word))));
    }

    #[test]
    fn precedence_and_grouping() {
        let f = parse("a = 1 | b = 1 & c = 1").unwrap();
        assert!(matches!(f, Formula::Or(..)));
        let g = parse("(a = 1 | b = 1) & c = 1").unwrap();
        assert!(matches!(g, Formula::And(..)));
        let h = parse("(x*y)^-2 = 1").unwrap();
        assert_eq!(
            h,
            Formula::Atomic(Term {
                word: vec![Letter::inv("y"), Letter::inv("x"), Letter::inv("y"), Letter::inv("x")]
            })
        );
        assert_eq!(
            parse("!!x = 1").unwrap(),
            Formula::not(Formula::not(parse("x = 1").unwrap()))
        );
        // quantifier scope runs to the end
        let q = parse("E x. x = 1 | y = 1").unwrap();
        assert!(matches!(q, Formula::Exists(_, ref b) if matches!(**b, Formula::Or(..))));
    }

    #[test]
    fn positioned_errors() {
        let e = parse("E x x = 1").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("x = ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("x = 2").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("x = 1 )").unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse("x # 1").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse("(x = 1").unwrap_err();
        assert_eq!(e.position, 6);
    }
}
