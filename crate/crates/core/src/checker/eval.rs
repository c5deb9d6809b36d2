use std::collections::{BTreeMap, HashMap};

use super::{Bindings, CheckError};
use crate::formula::{Formula, Term};
use crate::group::{CayleyTable, FinitePermGroup};
use crate::perm::Permutation;
use crate::presentation::{LevelGroup, ProfinitePresentation};

/// Values of free variables.
pub type Assignment = BTreeMap<String, Permutation>;

fn check_assignment(g: &FinitePermGroup, f: &Formula, a: &Assignment) -> Result<(), CheckError> {
    for v in f.free_vars() {
        let Some(value) = a.get(&v) else {
            return Err(CheckError::Unassigned(v));
        };
        if value.len() != g.support() {
            return Err(CheckError::Assignment {
                var: v,
                reason: format!("support {} differs from the group's {}", value.len(), g.support()),
            });
        }
    }
    Ok(())
}

/// Truth of `f` in `g` by direct expansion: quantifiers range over every
/// element and words are multiplied out as permutations.
pub fn eval_finite(g: &FinitePermGroup, f: &Formula, assignment: &Assignment) -> Result<bool, CheckError> {
    check_assignment(g, f, assignment)?;
    let mut env = assignment.clone();
    Ok(naive(g, f, &mut env))
}

fn word_value(g: &FinitePermGroup, t: &Term, env: &Assignment) -> Permutation {
    let mut acc = Permutation::identity(g.support());
    for l in &t.word {
        let v = &env[&l.var];
        acc = if l.inverted {
            acc.compose_unchecked(&v.inverse())
        } else {
            acc.compose_unchecked(v)
        };
    }
    acc
}

fn naive(g: &FinitePermGroup, f: &Formula, env: &mut Assignment) -> bool {
    match f {
        Formula::Atomic(t) => word_value(g, t, env).is_identity(),
        Formula::Not(inner) => !naive(g, inner, env),
        Formula::And(a, b) => naive(g, a, env) && naive(g, b, env),
        Formula::Or(a, b) => naive(g, a, env) || naive(g, b, env),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let want = matches!(f, Formula::Exists(..));
            let saved = env.remove(v);
            let mut result = !want;
            for e in g.elements() {
                env.insert(v.clone(), e.clone());
                if naive(g, body, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(old) => env.insert(v.clone(), old),
                None => env.remove(v),
            };
            result
        }
    }
}

/// A level's group seen through its multiplication table, or through direct
/// composition when the table is unaffordable or not worth building.
pub(crate) enum Model<'a> {
    Table(&'a CayleyTable),
    Perm { group: &'a FinitePermGroup },
}

impl<'a> Model<'a> {
    /// `heavy` asks for the table: worth it once a formula multiplies
    /// roughly `|G|²` times.
    pub(crate) fn for_level(level: &'a LevelGroup, heavy: bool) -> Self {
        if heavy {
            if let Some(t) = level.table() {
                return Model::Table(t);
            }
        }
        Model::Perm { group: level.group() }
    }
}

impl Model<'_> {
    fn order(&self) -> usize {
        match self {
            Model::Table(t) => t.order(),
            Model::Perm { group, .. } => group.order(),
        }
    }

    /// Whether the word `∏ env[slot]^exp` is the identity. Powers are
    /// taken by repeated squaring, so `x^p` costs `O(log p)` products.
    fn word_is_identity(&self, word: &[(usize, i64)], env: &[u32]) -> bool {
        match self {
            Model::Table(t) => {
                let mut acc = t.identity();
                for &(slot, exp) in word {
                    let base = if exp < 0 { t.inv(env[slot]) } else { env[slot] };
                    let (mut e, mut sq, mut pow) = (exp.unsigned_abs(), base, t.identity());
                    while e > 0 {
                        if e & 1 == 1 {
                            pow = t.mul(pow, sq);
                        }
                        sq = t.mul(sq, sq);
                        e >>= 1;
                    }
                    acc = t.mul(acc, pow);
                }
                acc == t.identity()
            }
            Model::Perm { group, .. } => {
                let els = group.elements();
                let mut acc: Option<Permutation> = None;
                for &(slot, exp) in word {
                    let term = els[env[slot] as usize].pow(exp);
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.compose_unchecked(&term),
                    });
                }
                acc.is_none_or(|a| a.is_identity())
            }
        }
    }
}

/// Formula with variables replaced by environment slots.
#[derive(Debug, Clone)]
enum Node {
    /// Runs of one variable as `(slot, exponent)`.
    Atom(Vec<(usize, i64)>),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// A formula prepared for repeated evaluation on element indices. Free
/// variables occupy the first slots, in sorted order.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    root: Node,
    free: Vec<String>,
    slots: usize,
    depth: usize,
}

impl Compiled {
    pub(crate) fn new(f: &Formula) -> Self {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut scope: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, v) in free.iter().enumerate() {
            scope.insert(v.clone(), vec![i]);
        }
        let mut slots = free.len();
        let root = compile(f, &mut scope, &mut slots);
        Compiled {
            root,
            free,
            slots,
            depth: f.quantifier_rank(),
        }
    }

    pub(crate) fn free(&self) -> &[String] {
        &self.free
    }

    pub(crate) fn quantifier_depth(&self) -> usize {
        self.depth
    }

    /// `values[i]` is the element index bound to `free()[i]`.
    pub(crate) fn eval(&self, m: &Model<'_>, values: &[u32]) -> bool {
        let mut env = vec![0u32; self.slots];
        env[..values.len()].copy_from_slice(values);
        eval_node(m, &self.root, &mut env)
    }
}

fn compile(f: &Formula, scope: &mut HashMap<String, Vec<usize>>, slots: &mut usize) -> Node {
    match f {
        Formula::Atomic(t) => {
            let mut runs: Vec<(usize, i64)> = Vec::new();
            for l in &t.word {
                let slot = *scope[&l.var].last().expect("variable in scope");
                let step = if l.inverted { -1 } else { 1 };
                match runs.last_mut() {
                    Some((s, e)) if *s == slot && e.signum() == step => *e += step,
                    _ => runs.push((slot, step)),
                }
            }
            Node::Atom(runs)
        }
        Formula::Not(a) => Node::Not(Box::new(compile(a, scope, slots))),
        Formula::And(a, b) => Node::And(Box::new(compile(a, scope, slots)), Box::new(compile(b, scope, slots))),
        Formula::Or(a, b) => Node::Or(Box::new(compile(a, scope, slots)), Box::new(compile(b, scope, slots))),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let slot = *slots;
            *slots += 1;
            scope.entry(v.clone()).or_default().push(slot);
            let inner = Box::new(compile(body, scope, slots));
            scope.get_mut(v).expect("just pushed").pop();
            if matches!(f, Formula::Exists(..)) {
                Node::Exists(slot, inner)
            } else {
                Node::Forall(slot, inner)
            }
        }
    }
}

fn eval_node(m: &Model<'_>, node: &Node, env: &mut [u32]) -> bool {
    match node {
        Node::Atom(word) => m.word_is_identity(word, env),
        Node::Not(a) => !eval_node(m, a, env),
        Node::And(a, b) => eval_node(m, a, env) && eval_node(m, b, env),
        Node::Or(a, b) => eval_node(m, a, env) || eval_node(m, b, env),
        Node::Exists(slot, body) => (0..m.order() as u32).any(|e| {
            env[*slot] = e;
            eval_node(m, body, env)
        }),
        Node::Forall(slot, body) => (0..m.order() as u32).all(|e| {
            env[*slot] = e;
            eval_node(m, body, env)
        }),
    }
}

/// Evaluates a compiled formula once on a level.
pub(crate) fn eval_compiled(level: &LevelGroup, c: &Compiled, values: &[u32]) -> bool {
    let model = Model::for_level(level, c.quantifier_depth() >= 2);
    c.eval(&model, values)
}

/// Truth of `f` in `G_k` with free variables bound to `assignment`.
pub fn eval_level(level: &LevelGroup, f: &Formula, assignment: &Assignment) -> Result<bool, CheckError> {
    check_assignment(level.group(), f, assignment)?;
    let c = Compiled::new(f);
    let values = c
        .free()
        .iter()
        .map(|v| {
            level
                .group()
                .index_of(&assignment[v])
                .map(|i| i as u32)
                .ok_or_else(|| CheckError::Assignment {
                    var: v.clone(),
                    reason: format!("{} is not in G_{}", assignment[v], level.index()),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(eval_compiled(level, &c, &values))
}

/// Element indices of the handles bound to `vars`, resolved at level `k`.
pub(crate) fn resolve_indices(
    p: &ProfinitePresentation,
    k: usize,
    vars: &[String],
    bindings: &Bindings,
) -> Result<Vec<u32>, CheckError> {
    let level = p.level(k)?;
    vars.iter()
        .map(|v| {
            let h = bindings.get(v).ok_or_else(|| CheckError::Unassigned(v.clone()))?;
            let g = h.resolve(p, k)?;
            Ok(level.group().index_of(&g).expect("resolve checks membership") as u32)
        })
        .collect()
}

/// Truth of `f` at level `k` with free variables bound to handles.
pub fn holds_at(p: &ProfinitePresentation, k: usize, f: &Formula, bindings: &Bindings) -> Result<bool, CheckError> {
    let c = Compiled::new(f);
    holds_compiled(p, k, &c, bindings)
}

pub(crate) fn holds_compiled(
    p: &ProfinitePresentation,
    k: usize,
    c: &Compiled,
    bindings: &Bindings,
) -> Result<bool, CheckError> {
    let values = resolve_indices(p, k, c.free(), bindings)?;
    let level = p.level(k)?;
    Ok(eval_compiled(&level, c, &values))
}
