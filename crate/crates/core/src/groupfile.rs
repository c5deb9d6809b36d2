//! Group spec files: one TOML document naming a construction and its
//! parameters.
//!
//! ```toml
//! kind = "cyclic_product"
//! orders = [2, 3, 5]
//! repeat = false
//! ```
//!
//! Kinds: `cyclic_product` (`orders`, `repeat`), `two_adic`, `sigma1`,
//! `sigma2` and `sqrt_diag` (`oracle`, a table path relative to the spec
//! file, or an inline `oracle_table`), `finite` (`support`, `generators` in
//! cycle notation) and `inverse_system` (`groups` as multiplication tables
//! with `maps`, or `cyclic_tower` moduli) and `builtin` (`name`, see
//! [`crate::constructions::BUILTINS`]).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{
    builtin, cyclic_product, sigma1_group, sigma2_group, sqrt_diag_group, two_adic, ConstructionError, ConstructionLog,
    MockTable, StepOracle,
};
use crate::perm::Permutation;
use crate::presentation::{parse_dump, InverseSystem, PresentationError, ProfinitePresentation, TableGroup};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("group spec: {0}")]
    Syntax(String),
    #[error("group spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic_tower: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_elements: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// A presentation loaded from disk, with the stage log of constructions.
#[derive(Debug)]
pub struct LoadedGroup {
    pub presentation: ProfinitePresentation,
    pub log: Option<ConstructionLog>,
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError::Syntax(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec fields serialize")
    }

    fn oracle(&self, base: &Path) -> Result<Arc<dyn StepOracle>, SpecError> {
        let text = match (&self.oracle, &self.oracle_table) {
            (Some(_), Some(_)) => return Err(SpecError::Invalid("give oracle or oracle_table, not both".into())),
            (Some(path), None) => read(&base.join(path))?,
            (None, Some(inline)) => inline.clone(),
            (None, None) => String::new(),
        };
        Ok(Arc::new(MockTable::parse(&text)?))
    }

    /// Builds the presentation; relative oracle paths resolve against `base`.
    pub fn build(&self, base: &Path) -> Result<LoadedGroup, SpecError> {
        let missing = |field: &str| SpecError::Invalid(format!("kind {} needs {field}", self.kind));
        let (presentation, log) = match self.kind.as_str() {
            "cyclic_product" => {
                let orders = self.orders.as_ref().ok_or_else(|| missing("orders"))?;
                (cyclic_product(orders, self.repeat.unwrap_or(false))?, None)
            }
            "two_adic" => (two_adic(), None),
            "builtin" => {
                let name = self.name.as_deref().ok_or_else(|| missing("name"))?;
                let p = builtin(name).ok_or_else(|| SpecError::Invalid(format!("unknown builtin {name:?}")))?;
                (p, None)
            }
            "sigma1" | "sigma2" | "sqrt_diag" => {
                let oracle = self.oracle(base)?;
                let c = match self.kind.as_str() {
                    "sigma1" => sigma1_group(oracle),
                    "sigma2" => sigma2_group(oracle),
                    _ => sqrt_diag_group(oracle),
                };
                (c.presentation, Some(c.log))
            }
            "finite" => {
                let support = self.support.ok_or_else(|| missing("support"))?;
                if support == 0 {
                    return Err(SpecError::Invalid("support must be positive".into()));
                }
                let gens = self
                    .generators
                    .iter()
                    .flatten()
                    .map(|g| Permutation::from_cycles(support, g).map_err(PresentationError::from))
                    .collect::<Result<Vec<_>, _>>()?;
                (ProfinitePresentation::from_finite_group(support, &gens)?, None)
            }
            "inverse_system" => {
                let sys = match (&self.groups, &self.cyclic_tower) {
                    (Some(groups), None) => {
                        let groups = groups
                            .iter()
                            .map(|t| TableGroup::new(t.clone()))
                            .collect::<Result<Vec<_>, _>>()?;
                        InverseSystem::new(groups, self.maps.clone().unwrap_or_default())?
                    }
                    (None, Some(moduli)) => InverseSystem::cyclic_tower(moduli)?,
                    _ => return Err(missing("exactly one of groups or cyclic_tower")),
                };
                (sys.import()?, None)
            }
            other => return Err(SpecError::Invalid(format!("unknown kind {other:?}"))),
        };
        let presentation = match self.max_elements {
            Some(limit) => presentation.with_max_elements(limit),
            None => presentation,
        };
        Ok(LoadedGroup { presentation, log })
    }
}

fn read(path: &Path) -> Result<String, SpecError> {
    std::fs::read_to_string(path).map_err(|e| SpecError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Loads a group spec file, or a block-mode tree dump (recognized by its
/// `levels=` header).
pub fn load_group(path: &Path) -> Result<LoadedGroup, SpecError> {
    let text = read(path)?;
    if text.trim_start().starts_with("levels=") {
        return Ok(LoadedGroup {
            presentation: parse_dump(&text)?,
            log: None,
        });
    }
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    GroupSpec::parse(&text)?.build(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(text: &str) -> Result<LoadedGroup, SpecError> {
        GroupSpec::parse(text)?.build(Path::new("."))
    }

    #[test]
    fn builds_each_kind() {
        let cp = build("kind = \"cyclic_product\"\norders = [2, 3]\n").unwrap();
        assert_eq!(cp.presentation.level(1).unwrap().order(), 6);
        let ta = build("kind = \"two_adic\"").unwrap();
        assert_eq!(ta.presentation.level(2).unwrap().order(), 8);
        let s2 = build("kind = \"sigma2\"\noracle_table = \"wsize 0 1 1\"\n").unwrap();
        assert_eq!(s2.presentation.level(1).unwrap().order(), 4);
        assert!(s2.log.is_some());
        let f = build("kind = \"finite\"\nsupport = 4\ngenerators = [\"(0 1)(2 3)\"]\n").unwrap();
        assert!(!f.presentation.declared_orbit_independent());
        assert!(build("kind = \"builtin\"\nname = \"s3\"").is_ok());
        let inv = build("kind = \"inverse_system\"\ncyclic_tower = [2, 4, 8]\n").unwrap();
        assert_eq!(inv.presentation.level(2).unwrap().order(), 8);
        let tables =
            build("kind = \"inverse_system\"\ngroups = [[[0, 1], [1, 0]], [[0, 1], [1, 0]]]\nmaps = [[0, 1]]\n")
                .unwrap();
        assert_eq!(tables.presentation.level(1).unwrap().order(), 2);
    }

    #[test]
    fn reports_bad_specs() {
        assert!(matches!(build("kind = \"cyclic_product\""), Err(SpecError::Invalid(_))));
        assert!(matches!(build("kind = \"nope\""), Err(SpecError::Invalid(_))));
        assert!(matches!(
            build("kind = \"two_adic\"\ncolour = 3"),
            Err(SpecError::Syntax(_))
        ));
        assert!(matches!(
            build("kind = \"sigma1\"\noracle_table = \"halt 0\""),
            Err(SpecError::Construction(_))
        ));
        assert!(matches!(
            build("kind = \"finite\"\nsupport = 3\ngenerators = [\"(0 2)\"]"),
            Err(SpecError::Presentation(_))
        ));
    }

    #[test]
    fn spec_round_trips() {
        let spec = GroupSpec {
            kind: "sigma1".into(),
            oracle: Some("mock.txt".into()),
            ..GroupSpec::default()
        };
        assert_eq!(GroupSpec::parse(&spec.to_toml()).unwrap(), spec);
    }
}
