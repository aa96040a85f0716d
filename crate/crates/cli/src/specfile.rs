//! The cocycle spec file: a UTF-8 JSON document describing a subshift, a
//! window cocycle (explicit operator tables or a compact-model truncation),
//! and the Hölder exponent. This is the only input format of the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use specrad::compact::{CoefficientFamily, CompactModel, ModelKind};
use specrad::dynamics::{admissible_words, parse_symbols, Subshift, WindowCocycle};
use specrad::Operator;

use crate::error::CliError;

/// Wire form of a compact-model entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactModelSpec {
    /// "diagonal" or "weighted-shift".
    pub kind: String,
    /// "geometric" or "power".
    pub family: String,
    /// Geometric: {"c": .., "q": ..}; power: {"c": .., "p": ..}.
    pub params: BTreeMap<String, f64>,
    /// Truncation rank used when the model is expanded into a cocycle.
    pub rank: usize,
}

/// Wire form of a cocycle system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpecFile {
    pub alphabet: usize,
    /// q x q 0/1 matrix; omitted means the full shift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default = "default_window")]
    pub window: usize,
    /// Map from w-symbol window strings ("01") to d x d row-major entries.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact_model: Option<CompactModelSpec>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_window() -> usize {
    1
}

fn default_alpha() -> f64 {
    1.0
}

/// A parsed and validated system: the cocycle plus, when the file declared
/// one, the compact model behind it.
#[derive(Debug)]
pub struct BuiltSystem {
    pub cocycle: WindowCocycle,
    pub compact: Option<(CompactModel, usize)>,
}

impl CocycleSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("malformed spec file: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read spec file {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    /// The built-in emitter; emitted documents re-parse to an equal value.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files serialize")
    }

    fn build_subshift(&self) -> Result<Subshift, CliError> {
        if self.alphabet == 0 {
            return Err(CliError::Validation("alphabet: must be >= 1".into()));
        }
        match &self.transition {
            None => Subshift::full(self.alphabet)
                .map_err(|e| CliError::Validation(format!("alphabet: {e}"))),
            Some(rows) => {
                if rows.len() != self.alphabet || rows.iter().any(|row| row.len() != self.alphabet)
                {
                    return Err(CliError::Validation(format!(
                        "transition: must be a {q}x{q} 0/1 matrix",
                        q = self.alphabet
                    )));
                }
                Subshift::from_zero_one(rows)
                    .map_err(|e| CliError::Validation(format!("transition: {e}")))
            }
        }
    }

    /// Validates the document and builds the in-memory system.
    pub fn build(&self) -> Result<BuiltSystem, CliError> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(CliError::Validation(format!(
                "alpha: must be a positive finite real, got {}",
                self.alpha
            )));
        }
        let subshift = self.build_subshift()?;
        match (&self.compact_model, self.operators.is_empty()) {
            (Some(spec), true) => self.build_compact(subshift, spec),
            (None, false) => self.build_tabulated(subshift),
            (Some(_), false) => Err(CliError::Validation(
                "operators: must be omitted when compact_model is given".into(),
            )),
            (None, true) => Err(CliError::Validation(
                "operators: required unless compact_model is given".into(),
            )),
        }
    }

    fn build_tabulated(&self, subshift: Subshift) -> Result<BuiltSystem, CliError> {
        let dim = self
            .dim
            .ok_or_else(|| CliError::Validation("dim: required with explicit operators".into()))?;
        if dim == 0 {
            return Err(CliError::Validation("dim: must be >= 1".into()));
        }
        if self.window == 0 {
            return Err(CliError::Validation("window: must be >= 1".into()));
        }
        let mut table = BTreeMap::new();
        for (key, entries) in &self.operators {
            let symbols = parse_symbols(key)
                .map_err(|e| CliError::Validation(format!("operators: window key {key:?}: {e}")))?;
            if symbols.len() != self.window {
                return Err(CliError::Validation(format!(
                    "operators: window key {key:?} has length {}, expected window = {}",
                    symbols.len(),
                    self.window
                )));
            }
            if !subshift.is_word_admissible(&symbols) {
                return Err(CliError::Validation(format!(
                    "operators: window {key:?} is not admissible under the transition matrix"
                )));
            }
            if entries.len() != dim * dim {
                return Err(CliError::Validation(format!(
                    "operators: entry {key:?} has {} numbers, expected dim^2 = {}",
                    entries.len(),
                    dim * dim
                )));
            }
            let op = Operator::new(dim, entries)
                .map_err(|e| CliError::Validation(format!("operators: entry {key:?}: {e}")))?;
            table.insert(symbols, op);
        }
        for word in admissible_words(&subshift, self.window)
            .map_err(|e| CliError::Validation(format!("window: {e}")))?
        {
            if !table.contains_key(word.symbols()) {
                return Err(CliError::Validation(format!(
                    "operators: missing entry for admissible window \"{word}\""
                )));
            }
        }
        let cocycle = WindowCocycle::new(subshift, self.window, dim, self.alpha, table)
            .map_err(|e| CliError::Validation(format!("operators: {e}")))?;
        Ok(BuiltSystem {
            cocycle,
            compact: None,
        })
    }

    fn build_compact(
        &self,
        subshift: Subshift,
        spec: &CompactModelSpec,
    ) -> Result<BuiltSystem, CliError> {
        if self.alphabet != 1 || !subshift.is_full() {
            return Err(CliError::Validation(
                "compact_model: expands to a 1-symbol constant cocycle; alphabet must be 1 \
                 with no transition restrictions"
                    .into(),
            ));
        }
        if self.window != 1 {
            return Err(CliError::Validation(
                "window: must be 1 (or omitted) when compact_model is given".into(),
            ));
        }
        let kind = match spec.kind.as_str() {
            "diagonal" => ModelKind::Diagonal,
            "weighted-shift" => ModelKind::WeightedShift,
            other => {
                return Err(CliError::Validation(format!(
                    "compact_model.kind: expected \"diagonal\" or \"weighted-shift\", got {other:?}"
                )))
            }
        };
        let param = |name: &str| {
            spec.params.get(name).copied().ok_or_else(|| {
                CliError::Validation(format!("compact_model.params: missing key \"{name}\""))
            })
        };
        let family = match spec.family.as_str() {
            "geometric" => CoefficientFamily::Geometric {
                c: param("c")?,
                q: param("q")?,
            },
            "power" => CoefficientFamily::Power {
                c: param("c")?,
                p: param("p")?,
            },
            other => {
                return Err(CliError::Validation(format!(
                    "compact_model.family: expected \"geometric\" or \"power\", got {other:?}"
                )))
            }
        };
        let expected: &[&str] = match family {
            CoefficientFamily::Geometric { .. } => &["c", "q"],
            CoefficientFamily::Power { .. } => &["c", "p"],
        };
        for key in spec.params.keys() {
            if !expected.contains(&key.as_str()) {
                return Err(CliError::Validation(format!(
                    "compact_model.params: unexpected key {key:?}"
                )));
            }
        }
        let model = CompactModel::new(kind, family)
            .map_err(|e| CliError::Validation(format!("compact_model: {e}")))?;
        if spec.rank == 0 {
            return Err(CliError::Validation(
                "compact_model.rank: must be >= 1".into(),
            ));
        }
        if let Some(dim) = self.dim {
            if dim != spec.rank {
                return Err(CliError::Validation(format!(
                    "dim: {dim} conflicts with compact_model.rank = {}",
                    spec.rank
                )));
            }
        }
        let truncation = model
            .truncate(spec.rank)
            .map_err(|e| CliError::Validation(format!("compact_model: {e}")))?;
        let cocycle = WindowCocycle::constant(subshift, truncation.matrix, self.alpha)
            .map_err(|e| CliError::Validation(format!("compact_model: {e}")))?;
        Ok(BuiltSystem {
            cocycle,
            compact: Some((model, spec.rank)),
        })
    }

    /// Re-encodes an in-memory cocycle as a spec file.
    pub fn from_cocycle(cocycle: &WindowCocycle) -> Self {
        let subshift = cocycle.subshift();
        let transition = if subshift.is_full() {
            None
        } else {
            Some(subshift.transition_rows())
        };
        let operators = cocycle
            .table()
            .iter()
            .map(|(key, op)| {
                (
                    specrad::dynamics::format_symbols(key),
                    op.entries_row_major(),
                )
            })
            .collect();
        Self {
            alphabet: subshift.alphabet(),
            transition,
            dim: Some(cocycle.dim()),
            window: cocycle.window(),
            operators,
            compact_model: None,
            alpha: cocycle.alpha(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_file() -> String {
        r#"{
            "alphabet": 2,
            "dim": 2,
            "operators": {
                "0": [1.0, 1.0, 0.0, 1.0],
                "1": [1.0, 0.0, 1.0, 1.0]
            }
        }"#
        .to_string()
    }

    #[test]
    fn parses_and_builds_golden_pair() {
        let file = CocycleSpecFile::parse(&golden_file()).unwrap();
        let system = file.build().unwrap();
        assert_eq!(system.cocycle.dim(), 2);
        assert_eq!(system.cocycle.window(), 1);
        assert!(system.cocycle.subshift().is_full());
        assert!(system.compact.is_none());
        assert_eq!(file.alpha, 1.0);
    }

    #[test]
    fn missing_operator_entry_names_the_key() {
        let text = r#"{"alphabet": 2, "dim": 2, "operators": {"0": [1.0, 0.0, 0.0, 1.0]}}"#;
        let err = CocycleSpecFile::parse(text).unwrap().build().unwrap_err();
        let message = err.to_string();
        assert!(message.contains("operators"), "{message}");
        assert!(message.contains('1'), "{message}");
    }

    #[test]
    fn rejects_bad_transition_entries() {
        let text = r#"{"alphabet": 2, "transition": [[1, 2], [1, 0]], "dim": 1,
                       "operators": {"0": [1.0], "1": [1.0]}}"#;
        let err = CocycleSpecFile::parse(text).unwrap().build().unwrap_err();
        assert!(err.to_string().contains("transition"));
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = r#"{"alphabet": 1, "dim": 1, "operators": {"0": [1.0]}, "extra": 3}"#;
        assert!(CocycleSpecFile::parse(text).is_err());
    }

    #[test]
    fn compact_model_expands_to_truncation() {
        let text = r#"{
            "alphabet": 1,
            "compact_model": {
                "kind": "diagonal",
                "family": "geometric",
                "params": {"c": 1.0, "q": 0.5},
                "rank": 3
            }
        }"#;
        let system = CocycleSpecFile::parse(text).unwrap().build().unwrap();
        assert_eq!(system.cocycle.dim(), 3);
        let op = system.cocycle.operator_for(&[0]).unwrap();
        assert_eq!(op.entry(0, 0), 0.5);
        assert_eq!(op.entry(2, 2), 0.125);
        assert!(system.compact.is_some());
    }

    #[test]
    fn compact_model_conflicts_are_rejected() {
        let with_ops = r#"{"alphabet": 1, "dim": 1, "operators": {"0": [1.0]},
            "compact_model": {"kind": "diagonal", "family": "geometric",
                              "params": {"c": 1.0, "q": 0.5}, "rank": 1}}"#;
        assert!(CocycleSpecFile::parse(with_ops).unwrap().build().is_err());

        let bad_alphabet = r#"{"alphabet": 2,
            "compact_model": {"kind": "diagonal", "family": "geometric",
                              "params": {"c": 1.0, "q": 0.5}, "rank": 1}}"#;
        assert!(CocycleSpecFile::parse(bad_alphabet)
            .unwrap()
            .build()
            .is_err());

        let bad_param = r#"{"alphabet": 1,
            "compact_model": {"kind": "diagonal", "family": "power",
                              "params": {"c": 1.0, "q": 0.5}, "rank": 1}}"#;
        let err = CocycleSpecFile::parse(bad_param)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("params"));
    }

    #[test]
    fn emitter_round_trips() {
        let file = CocycleSpecFile::parse(&golden_file()).unwrap();
        let emitted = file.to_json_string();
        assert_eq!(CocycleSpecFile::parse(&emitted).unwrap(), file);

        let rebuilt = CocycleSpecFile::from_cocycle(&file.build().unwrap().cocycle);
        assert_eq!(
            CocycleSpecFile::parse(&rebuilt.to_json_string()).unwrap(),
            rebuilt
        );
        assert_eq!(rebuilt.operators, file.operators);
    }
}
