use std::fs;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use profinite::checker::{decide_exists_oi, fv_stabilize, holds_at, persistence_suite, qf_limit, witness_tree, Report};
use profinite::constructions::{sigma1_group, sigma2_group, sqrt_diag_group, MockTable, BUILTINS};
use profinite::formula::Shape;
use profinite::groupfile::GroupSpec;
use profinite::presentation::{parse_dump, Encoding};
use profinite::{Bindings, ProfinitePresentation};

use crate::{
    input, ConstructArgs, DecideArgs, DumpArgs, EvalArgs, FormulaArgs, Kind, Mode, RangeArgs, Suite, SuiteFailed,
    VerifyArgs,
};

fn check_range(r: &RangeArgs) -> Result<()> {
    if r.kmin > r.kmax {
        bail!("--kmin {} exceeds --kmax {}", r.kmin, r.kmax);
    }
    Ok(())
}

/// Binds each listed variable that names a handle of `p`; the rest are
/// errors when `strict`, otherwise left free.
fn bind_handles<'a>(
    p: &ProfinitePresentation,
    vars: impl IntoIterator<Item = &'a String>,
    strict: bool,
) -> Result<Bindings> {
    let mut bindings = Bindings::new();
    for v in vars {
        match p.handle(v) {
            Some(h) => {
                bindings.insert(v.clone(), h.clone());
            }
            None if strict => {
                let known: Vec<&str> = p.handles().keys().map(String::as_str).collect();
                bail!(
                    "free variable {v:?} is not a handle of this group (handles: {})",
                    known.join(", ")
                );
            }
            None => {}
        }
    }
    Ok(bindings)
}

pub fn eval(a: EvalArgs) -> Result<()> {
    check_range(&a.range)?;
    let (_, g) = input::group(&a.group)?;
    let (_, f) = input::formula(&a.formula)?;
    let p = &g.presentation;
    let bindings = bind_handles(p, &f.free_vars(), true)?;
    for k in a.range.kmin..=a.range.kmax {
        println!("level {k}: {}", holds_at(p, k, &f, &bindings)?);
    }
    Ok(())
}

pub fn decide(a: DecideArgs) -> Result<()> {
    check_range(&a.range)?;
    let (label, g) = input::group(&a.group)?;
    let (text, f) = input::formula(&a.formula)?;
    let p = &g.presentation;
    let kmax = a.range.kmax;
    let report = match a.mode {
        Mode::Oi => Report::from_verdict("decide_exists_oi", &label, &text, kmax, &decide_exists_oi(p, &f, kmax)?),
        Mode::Witness => {
            let params = bind_handles(p, &f.free_vars(), false)?;
            let matrix = f.existential_prefix().map_or(&f, |(_, m)| m);
            Report::from_witness_tree(&label, &witness_tree(p, matrix, &params, kmax)?)
        }
        Mode::Fv => Report::from_stabilization(&label, &text, &fv_stabilize(p, &f, a.range.kmin, kmax)?),
        Mode::Limit => {
            let bindings = bind_handles(p, &f.free_vars(), true)?;
            Report::from_verdict("qf_limit", &label, &text, kmax, &qf_limit(p, &f, &bindings, kmax)?)
        }
    };
    print!("{}", report.to_toml());
    Ok(())
}

pub fn construct(a: ConstructArgs) -> Result<()> {
    let table = match &a.oracle {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        None => String::new(),
    };
    let oracle = Arc::new(MockTable::parse(&table).context("parsing oracle table")?);
    let (kind, c) = match a.kind {
        Kind::Sigma1 => ("sigma1", sigma1_group(oracle)),
        Kind::Sigma2 => ("sigma2", sigma2_group(oracle)),
        Kind::SqrtDiag => ("sqrt_diag", sqrt_diag_group(oracle)),
    };
    let log = c.run(a.stages)?;
    print!("{log}");
    if let Some(out) = &a.output {
        let spec = GroupSpec {
            kind: kind.into(),
            oracle_table: Some(table),
            ..GroupSpec::default()
        };
        fs::write(out, spec.to_toml()).with_context(|| format!("writing {}", out.display()))?;
        let log_path = out.with_extension("log");
        fs::write(&log_path, &log).with_context(|| format!("writing {}", log_path.display()))?;
    }
    Ok(())
}

pub fn dump(a: DumpArgs) -> Result<()> {
    let (_, g) = input::group(&a.group)?;
    let text = g.presentation.dump_tree(a.depth, a.encoding)?;
    match &a.output {
        Some(out) => fs::write(out, text).with_context(|| format!("writing {}", out.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Level validation, branching counts, handle coherence and the block dump
/// round trip, up to `kmax`.
fn coherence(p: &ProfinitePresentation, kmax: usize) -> Vec<String> {
    let mut problems = Vec::new();
    for k in 0..=kmax {
        let level = match p.level(k) {
            Ok(l) => l,
            Err(e) => {
                problems.push(e.to_string());
                return problems;
            }
        };
        if k < kmax {
            let above = p.level(k + 1).map(|l| l.order()).unwrap_or(0);
            let total: usize = level
                .group()
                .elements()
                .iter()
                .map(|g| p.branching(k, g).unwrap_or(0))
                .sum();
            if total != above {
                problems.push(format!("level {k}: branching sums to {total}, |G_{}| = {above}", k + 1));
            }
        }
        for (name, h) in p.handles() {
            if let Err(e) = h.resolve(p, k) {
                problems.push(format!("handle {name}: {e}"));
            }
        }
    }
    let round_trip = p
        .dump_tree(kmax, Encoding::Block)
        .and_then(|d| parse_dump(&d))
        .and_then(|q| {
            (0..=kmax).try_for_each(|k| {
                if p.level(k)?.group() != q.level(k)?.group() {
                    problems.push(format!("dump round trip differs at level {k}"));
                }
                Ok(())
            })
        });
    if let Err(e) = round_trip {
        problems.push(format!("dump round trip: {e}"));
    }
    problems
}

pub fn verify(a: VerifyArgs) -> Result<()> {
    let specs: Vec<String> = if a.group.is_empty() {
        BUILTINS.iter().map(|n| format!("builtin:{n}")).collect()
    } else {
        a.group.clone()
    };
    let groups = specs.iter().map(|s| input::group(s)).collect::<Result<Vec<_>>>()?;
    let mut failed = Vec::new();
    if matches!(a.suite, Suite::Coherence | Suite::All) {
        for (label, g) in &groups {
            let problems = coherence(&g.presentation, a.kmax);
            println!(
                "coherence {label}: {}",
                if problems.is_empty() { "pass" } else { "FAIL" }
            );
            for p in &problems {
                println!("  {p}");
            }
            if !problems.is_empty() {
                failed.push(format!("coherence {label}"));
            }
        }
    }
    if matches!(a.suite, Suite::Persistence | Suite::All) {
        if a.kmax == 0 {
            bail!("the persistence suite compares two levels; use --kmax 1 or more");
        }
        let refs: Vec<&ProfinitePresentation> = groups.iter().map(|(_, g)| &g.presentation).collect();
        let r = persistence_suite(&refs, a.trials, a.kmax, a.seed)?;
        println!(
            "persistence: {} trials, {} violations (seed {}): {}",
            r.trials,
            r.violations.len(),
            a.seed,
            if r.passed() { "pass" } else { "FAIL" }
        );
        for v in &r.violations {
            println!("  {v}");
        }
        if !r.passed() {
            failed.push("persistence".into());
        }
    }
    if !failed.is_empty() {
        return Err(SuiteFailed(format!("failed: {}", failed.join(", "))).into());
    }
    Ok(())
}

pub fn parse(a: FormulaArgs) -> Result<()> {
    let (_, f) = input::formula(&a)?;
    let c = f.classify();
    let shape = match c.shape {
        Shape::QuantifierFree => "quantifier-free",
        Shape::Existential => "existential",
        Shape::Universal => "universal",
        Shape::General => "general",
    };
    let polarity = if f.is_positive() {
        "positive"
    } else if f.is_negative() {
        "negative"
    } else {
        "neither"
    };
    let free: Vec<String> = f.free_vars().into_iter().collect();
    println!("{f}");
    println!("shape: {shape}");
    println!("polarity: {polarity}");
    println!("quantifier rank: {}", f.quantifier_rank());
    if free.is_empty() {
        println!("free: none");
    } else {
        println!("free: {}", free.join(" "));
    }
    Ok(())
}
