use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use profinite::constructions::builtin;
use profinite::formula::{alpha_n, ParseError};
use profinite::groupfile::{load_group as load_file, LoadedGroup};
use profinite::{parse, Formula};

use crate::FormulaArgs;

/// Parse failure rendered with the offending input and a caret.
#[derive(Debug, thiserror::Error)]
#[error("{error}\n  {text}\n  {caret}^")]
pub struct Diagnostic {
    error: ParseError,
    text: String,
    caret: String,
}

impl Diagnostic {
    fn new(error: ParseError, text: &str) -> Self {
        let line = text.replace(['\n', '\t'], " ");
        Diagnostic {
            caret: " ".repeat(error.position.min(line.chars().count())),
            text: line,
            error,
        }
    }
}

/// Formula text, with `@alpha:N` expanded.
pub fn formula(args: &FormulaArgs) -> Result<(String, Formula)> {
    let text = match (&args.formula, &args.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .trim()
            .to_string(),
        (None, None) => bail!("no formula given"),
    };
    if let Some(n) = text.strip_prefix("@alpha:") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad macro argument in {text:?}"))?;
        let f = alpha_n(n);
        return Ok((f.to_string(), f));
    }
    let f = parse(&text).map_err(|e| Diagnostic::new(e, &text))?;
    Ok((text, f))
}

/// A group from `builtin:NAME`, a spec file, or a block dump, with a short
/// label for reports.
pub fn group(spec: &str) -> Result<(String, LoadedGroup)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let presentation = builtin(name).ok_or_else(|| anyhow!("unknown builtin {name:?}"))?;
        return Ok((
            name.to_string(),
            LoadedGroup {
                presentation,
                log: None,
            },
        ));
    }
    let path = Path::new(spec);
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    let loaded = load_file(path).with_context(|| format!("loading group {spec}"))?;
    Ok((label, loaded))
}
