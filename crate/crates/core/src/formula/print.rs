use super::{Formula, Term};

pub(super) fn term_to_string(t: &Term) -> String {
    if t.word.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < t.word.len() {
        let l = &t.word[i];
        let mut run = 1;
        while i + run < t.word.len() && t.word[i + run] == *l {
            run += 1;
        }
        parts.push(match (run, l.inverted) {
            (1, false) => l.var.clone(),
            (k, false) => format!("{}^{}", l.var, k),
            (k, true) => format!("{}^-{}", l.var, k),
        });
        i += run;
    }
    parts.join("*")
}

// binding strength: quantifier < '|' < '&' < unary
const QUANT: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

pub(super) fn formula_to_string(f: &Formula) -> String {
    let mut s = String::new();
    write(f, QUANT, &mut s);
    s
}

fn write(f: &Formula, ctx: u8, out: &mut String) {
    let (own, text) = match f {
        Formula::Atomic(t) => (UNARY, format!("{} = 1", term_to_string(t))),
        Formula::Not(inner) => match &**inner {
            Formula::Atomic(t) => (UNARY, format!("{} != 1", term_to_string(t))),
            other => {
                let mut s = String::from("!");
                write(other, UNARY, &mut s);
                (UNARY, s)
            }
        },
        Formula::And(a, b) => {
            let mut s = String::new();
            write(a, AND, &mut s);
            s.push_str(" & ");
            write(b, UNARY, &mut s);
            (AND, s)
        }
        Formula::Or(a, b) => {
            let mut s = String::new();
            write(a, OR, &mut s);
            s.push_str(" | ");
            write(b, AND, &mut s);
            (OR, s)
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let q = if matches!(f, Formula::Exists(..)) { "E" } else { "A" };
            let mut s = format!("{q} {v}. ");
            write(body, QUANT, &mut s);
            (QUANT, s)
        }
    };
    if own < ctx {
        out.push('(');
        out.push_str(&text);
        out.push(')');
    } else {
        out.push_str(&text);
    }
}
