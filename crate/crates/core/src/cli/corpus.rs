//! Built-in regression corpus of worked examples with expected report values.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::spec::{NetworkSpec, SpecError};
use super::{cmd_ctrb, cmd_ep, cmd_laplacian, cmd_obsv, CliError, Mode, Options, Report};
use crate::linalg::BackendKind;
use crate::system::UnionAFactor;

const BUILTIN: [&str; 6] = [
    include_str!("../../corpus/example1.json"),
    include_str!("../../corpus/example2.json"),
    include_str!("../../corpus/example3.json"),
    include_str!("../../corpus/example4.json"),
    include_str!("../../corpus/example5.json"),
    include_str!("../../corpus/example6.json"),
];

/// One command invocation and the report fields it must produce, keyed by
/// JSON pointer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRun {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union_a_factor: Option<UnionAFactor>,
    pub expected: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub spec: NetworkSpec,
    pub runs: Vec<CorpusRun>,
}

/// Parses a corpus file holding one entry or an array of entries.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, SpecError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SpecError {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let entries: Vec<CorpusEntry> = match value {
        Value::Array(_) => serde_json::from_value(value),
        _ => serde_json::from_value(value).map(|e| vec![e]),
    }
    .map_err(|e| SpecError {
        location: "corpus".into(),
        message: e.to_string(),
    })?;
    for entry in &entries {
        entry.spec.validate().map_err(|e| SpecError {
            location: format!("{}.spec.{}", entry.name, e.location),
            message: e.message,
        })?;
    }
    Ok(entries)
}

pub fn builtin() -> Vec<CorpusEntry> {
    BUILTIN
        .iter()
        .flat_map(|text| parse_corpus(text).expect("built-in corpus is valid"))
        .collect()
}

fn run_one(
    entry: &CorpusEntry,
    run: &CorpusRun,
    backend: Option<BackendKind>,
) -> Result<Report, CliError> {
    let opts = Options {
        mode: run.mode.unwrap_or_default(),
        partition: run.partition.clone(),
        backend,
        union_a_factor: run.union_a_factor.unwrap_or_default(),
        spec_path: None,
    };
    match run.command.as_str() {
        "laplacian" => cmd_laplacian(&entry.spec, &opts),
        "ep" => cmd_ep(&entry.spec, &opts),
        "ctrb" => cmd_ctrb(&entry.spec, &opts),
        "obsv" => cmd_obsv(&entry.spec, &opts),
        other => Err(CliError::Usage(format!(
            "{}: unknown corpus command `{other}`",
            entry.name
        ))),
    }
}

/// Runs every entry and compares each expected field. `regression` is set
/// on the report when any comparison fails.
pub fn cmd_corpus(
    entries: &[CorpusEntry],
    backend: Option<BackendKind>,
    source: Option<&str>,
) -> Result<Report, CliError> {
    let mut examples = Vec::with_capacity(entries.len());
    let mut passed = 0;
    let mut failures = Vec::new();
    for entry in entries {
        let mut runs = Vec::with_capacity(entry.runs.len());
        let mut entry_ok = true;
        for run in &entry.runs {
            let report = run_one(entry, run, backend)?;
            let mut checks = Vec::with_capacity(run.expected.len());
            for (pointer, expected) in &run.expected {
                let actual = report.get(pointer).cloned().unwrap_or(Value::Null);
                let pass = &actual == expected;
                if !pass {
                    entry_ok = false;
                    failures.push(format!("{} {}{pointer}", entry.name, run.command));
                }
                checks.push(json!({
                    "field": pointer,
                    "expected": expected,
                    "actual": actual,
                    "pass": pass,
                }));
            }
            runs.push(json!({
                "command": run.command,
                "mode": run.mode.map(|m| m.to_string()),
                "backend": report.json["backend"],
                "checks": checks,
            }));
        }
        if entry_ok {
            passed += 1;
        }
        examples.push(json!({ "name": entry.name, "pass": entry_ok, "runs": runs }));
    }
    let total = entries.len();
    let mut header = Map::new();
    header.insert("command".into(), "corpus".into());
    header.insert("spec".into(), json!(source));
    header.insert(
        "backend".into(),
        json!(backend
            .map(|b| b.to_string())
            .unwrap_or_else(|| "auto".into())),
    );
    let mut body = Map::new();
    body.insert("passed".into(), passed.into());
    body.insert("total".into(), total.into());
    body.insert("failures".into(), json!(failures));
    body.insert("examples".into(), Value::Array(examples));
    let summary = if failures.is_empty() {
        format!("corpus: {passed}/{total} pass")
    } else {
        format!(
            "corpus: {passed}/{total} pass; failing: {}",
            failures.join(", ")
        )
    };
    let mut report = Report::new(header, body, summary);
    report.regression = !failures.is_empty();
    Ok(report)
}
