//! The JSON instance format: explicit dimensions, 1-based nonzero lists,
//! the literal `"identity"` accepted for the input and output patterns,
//! and an optional feedback pattern.

use serde::{Deserialize, Serialize};
use sfselect_core::{FeedbackPattern, StructuredMatrix, StructuredSystem};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

/// Failures while reading, writing or validating instance files.
#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

/// An instance file as written on disk, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    /// State pattern nonzeros, 1-based [row, col].
    pub a: Vec<[usize; 2]>,
    pub b: MatrixSpec,
    pub c: MatrixSpec,
    /// Feedback pattern nonzeros, 1-based [input, output].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<[usize; 2]>>,
}

/// Either an explicit nonzero list or the literal `"identity"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Literal(String),
    Entries(Vec<[usize; 2]>),
}

/// A validated instance: the system plus the optional feedback pattern.
#[derive(Debug, Clone)]
pub struct Instance {
    pub system: StructuredSystem,
    pub k: Option<FeedbackPattern>,
}

/// Reads and validates an instance file.
pub fn load(path: &Path) -> Result<Instance, InstanceError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Read {
        path: shown.clone(),
        source,
    })?;
    let file: InstanceFile =
        serde_json::from_str(&text).map_err(|source| InstanceError::Json {
            path: shown.clone(),
            source,
        })?;
    file.validate().map_err(|message| InstanceError::Invalid {
        path: shown,
        message,
    })
}

impl InstanceFile {
    /// Checks dimensions and index ranges, returning the core types.
    pub fn validate(&self) -> Result<Instance, String> {
        for (name, value) in [("n", self.n), ("m", self.m), ("p", self.p)] {
            if value == 0 {
                return Err(format!("{name} must be a positive integer"));
            }
        }
        let a_entries = check_entries("a", &self.a, self.n, self.n)?;
        let a = StructuredMatrix::new(self.n, self.n, a_entries)
            .map_err(|e| format!("field a: {e}"))?;
        let b = matrix_of("b", &self.b, self.n, self.m)?;
        let c = matrix_of("c", &self.c, self.p, self.n)?;
        let system =
            StructuredSystem::new(a, b, c).map_err(|e| format!("inconsistent dimensions: {e}"))?;
        let k = match &self.k {
            None => None,
            Some(entries) => {
                let pairs = check_entries("k", entries, self.m, self.p)?;
                Some(
                    FeedbackPattern::from_entries(self.m, self.p, pairs)
                        .map_err(|e| format!("field k: {e}"))?,
                )
            }
        };
        Ok(Instance { system, k })
    }
}

fn check_entries(
    name: &str,
    entries: &[[usize; 2]],
    rows: usize,
    cols: usize,
) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::with_capacity(entries.len());
    for (idx, &[r, c]) in entries.iter().enumerate() {
        if r == 0 || r > rows {
            return Err(format!(
                "{name}[{idx}] = [{r}, {c}]: row {r} is out of range 1..={rows}"
            ));
        }
        if c == 0 || c > cols {
            return Err(format!(
                "{name}[{idx}] = [{r}, {c}]: column {c} is out of range 1..={cols}"
            ));
        }
        out.push((r - 1, c - 1));
    }
    Ok(out)
}

fn matrix_of(
    name: &str,
    spec: &MatrixSpec,
    rows: usize,
    cols: usize,
) -> Result<StructuredMatrix, String> {
    match spec {
        MatrixSpec::Literal(word) if word == "identity" => {
            if rows != cols {
                return Err(format!(
                    "field {name}: \"identity\" requires a square role, got {rows}x{cols}"
                ));
            }
            Ok(StructuredMatrix::identity(rows))
        }
        MatrixSpec::Literal(word) => Err(format!(
            "field {name}: unknown literal {word:?}; expected \"identity\" or an entry list"
        )),
        MatrixSpec::Entries(entries) => {
            let pairs = check_entries(name, entries, rows, cols)?;
            StructuredMatrix::new(rows, cols, pairs).map_err(|e| format!("field {name}: {e}"))
        }
    }
}

/// Builds the canonical on-disk form: sorted 1-based entries, with
/// `"identity"` used whenever a pattern is exactly the identity.
pub fn canonical_file(system: &StructuredSystem, k: Option<&FeedbackPattern>) -> InstanceFile {
    let spec = |m: &StructuredMatrix| {
        if m.is_identity() {
            MatrixSpec::Literal("identity".to_string())
        } else {
            MatrixSpec::Entries(one_based(m))
        }
    };
    InstanceFile {
        n: system.state_count(),
        m: system.input_count(),
        p: system.output_count(),
        a: one_based(system.a()),
        b: spec(system.b()),
        c: spec(system.c()),
        k: k.map(|k| k.entries().map(|(i, j)| [i + 1, j + 1]).collect()),
    }
}

fn one_based(m: &StructuredMatrix) -> Vec<[usize; 2]> {
    m.nonzeros().map(|(r, c)| [r + 1, c + 1]).collect()
}

/// Stable hand-formatted JSON: field order n, m, p, a, b, c, k; one entry
/// per line. Writing then re-reading then re-writing is byte-identical.
pub fn canonical_json(file: &InstanceFile) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"n\": {},", file.n);
    let _ = writeln!(out, "  \"m\": {},", file.m);
    let _ = writeln!(out, "  \"p\": {},", file.p);
    push_entry_list(&mut out, "a", &file.a);
    out.push_str(",\n");
    push_spec(&mut out, "b", &file.b);
    out.push_str(",\n");
    push_spec(&mut out, "c", &file.c);
    if let Some(k) = &file.k {
        out.push_str(",\n");
        push_entry_list(&mut out, "k", k);
    }
    out.push_str("\n}\n");
    out
}

fn push_spec(out: &mut String, name: &str, spec: &MatrixSpec) {
    match spec {
        MatrixSpec::Literal(word) => {
            let _ = write!(out, "  \"{name}\": \"{word}\"");
        }
        MatrixSpec::Entries(entries) => push_entry_list(out, name, entries),
    }
}

fn push_entry_list(out: &mut String, name: &str, entries: &[[usize; 2]]) {
    if entries.is_empty() {
        let _ = write!(out, "  \"{name}\": []");
        return;
    }
    let _ = writeln!(out, "  \"{name}\": [");
    for (idx, [r, c]) in entries.iter().enumerate() {
        let sep = if idx + 1 == entries.len() { "" } else { "," };
        let _ = writeln!(out, "    [{r}, {c}]{sep}");
    }
    let _ = write!(out, "  ]");
}

/// Writes the canonical form to disk.
pub fn save(path: &Path, file: &InstanceFile) -> Result<(), InstanceError> {
    std::fs::write(path, canonical_json(file)).map_err(|source| InstanceError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use sfselect_core::fixtures;

    fn parse(text: &str) -> Result<Instance, String> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        file.validate()
    }

    #[test]
    fn parses_identity_literals() {
        let inst = parse(
            r#"{"n": 2, "m": 2, "p": 2, "a": [[1, 1], [2, 1]],
                "b": "identity", "c": "identity", "k": [[1, 2]]}"#,
        )
        .unwrap();
        assert_eq!(inst.system.state_count(), 2);
        assert!(inst.system.b().is_identity());
        let k = inst.k.unwrap();
        assert_eq!(k.entries().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn parses_explicit_entry_lists() {
        let inst = parse(
            r#"{"n": 2, "m": 1, "p": 1, "a": [[1, 1], [2, 2]],
                "b": [[1, 1]], "c": [[1, 2]]}"#,
        )
        .unwrap();
        assert_eq!(inst.system.input_count(), 1);
        assert!(inst.k.is_none());
        assert!(inst.system.b().contains(0, 0));
        assert!(inst.system.c().contains(0, 1));
    }

    #[test]
    fn rejects_out_of_range_indices() {
        let err = parse(
            r#"{"n": 2, "m": 2, "p": 2, "a": [[3, 1]], "b": "identity", "c": "identity"}"#,
        )
        .unwrap_err();
        assert!(err.contains("a[0] = [3, 1]"), "{err}");
        assert!(err.contains("1..=2"), "{err}");
        let err = parse(
            r#"{"n": 2, "m": 2, "p": 2, "a": [[1, 0]], "b": "identity", "c": "identity"}"#,
        )
        .unwrap_err();
        assert!(err.contains("column 0"), "{err}");
    }

    #[test]
    fn rejects_bad_literals_and_shapes() {
        let err = parse(
            r#"{"n": 2, "m": 2, "p": 2, "a": [[1, 1]], "b": "Identity", "c": "identity"}"#,
        )
        .unwrap_err();
        assert!(err.contains("unknown literal"), "{err}");
        let err = parse(
            r#"{"n": 2, "m": 1, "p": 2, "a": [[1, 1]], "b": "identity", "c": "identity"}"#,
        )
        .unwrap_err();
        assert!(err.contains("requires a square role"), "{err}");
        let err = parse(
            r#"{"n": 0, "m": 1, "p": 1, "a": [], "b": [[1, 1]], "c": [[1, 1]]}"#,
        )
        .unwrap_err();
        assert!(err.contains("n must be a positive integer"), "{err}");
    }

    #[test]
    fn rejects_unknown_fields() {
        let err = parse(
            r#"{"n": 1, "m": 1, "p": 1, "a": [[1, 1]], "b": "identity", "c": "identity",
                "extra": 3}"#,
        )
        .unwrap_err();
        assert!(err.contains("extra"), "{err}");
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let sys = fixtures::merging_chains();
        let k = fixtures::merging_chains_feedback();
        let file = canonical_file(&sys, Some(&k));
        let text = canonical_json(&file);
        let reparsed: InstanceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(reparsed, file);
        assert_eq!(canonical_json(&reparsed), text);
        let inst = reparsed.validate().unwrap();
        assert_eq!(inst.system.a(), sys.a());
        assert_eq!(inst.k.unwrap().matrix(), k.matrix());
    }

    #[test]
    fn canonical_form_uses_identity_literals() {
        let sys = fixtures::chain_system(2);
        let file = canonical_file(&sys, None);
        let text = canonical_json(&file);
        assert!(text.contains("\"b\": \"identity\""));
        assert!(text.contains("\"c\": \"identity\""));
        assert!(!text.contains("\"k\""));
        assert!(text.ends_with("}\n"));
    }
}
