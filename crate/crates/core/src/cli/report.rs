use serde_json::{json, Map, Value};

use crate::analysis::{BoundReport, ControllabilityVerdict, QCertificate};
use crate::linalg::{Mat, Scalar};
use crate::partition::Partition;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "matnet.report/v1";

/// Certificates whose assembled `Q` is at most this wide are printed in full.
const MAX_PRINTED_Q: usize = 12;

/// Output of one command: a JSON document plus the side channels the bin
/// routes elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    /// Graphviz text for `--dot`.
    pub dot: Option<String>,
    /// One-line human summary for standard error.
    pub summary: String,
    /// Set by the corpus command when an expectation failed.
    pub regression: bool,
}

impl Report {
    pub(crate) fn new(
        header: Map<String, Value>,
        body: Map<String, Value>,
        summary: String,
    ) -> Self {
        let mut json = Map::new();
        json.insert("schema".into(), SCHEMA.into());
        json.extend(header);
        json.extend(body);
        Self {
            json: Value::Object(json),
            dot: None,
            summary,
            regression: false,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("report serialization cannot fail") + "\n"
    }

    /// Looks up a field by JSON pointer, e.g. `/controllability/subspace_dim`.
    pub fn get(&self, pointer: &str) -> Option<&Value> {
        self.json.pointer(pointer)
    }
}

pub(crate) fn matrix<T: Scalar>(m: &Mat<T>) -> Value {
    json!(m.to_json())
}

pub(crate) fn partition(pi: &Partition) -> Value {
    json!({
        "cells": pi.to_one_based(),
        "display": pi.to_string(),
    })
}

pub(crate) fn verdict<T: Scalar>(v: &ControllabilityVerdict<T>) -> Value {
    json!({
        "controllable": v.controllable,
        "subspace_dim": v.subspace_dim,
        "ambient_dim": v.ambient_dim,
    })
}

pub(crate) fn certificate<T: Scalar>(c: &QCertificate<T>) -> Value {
    let mut out = json!({
        "variant": c.variant,
        "exists": c.exists,
        "failing_equation": c.failing_equation,
    });
    if let Some(q) = c.q.as_ref().filter(|q| q.rows() <= MAX_PRINTED_Q) {
        out["q1_blocks"] = Value::Array(c.q1_blocks.iter().map(matrix).collect());
        out["q"] = matrix(q);
    }
    out
}

pub(crate) fn bound<T: Scalar>(b: &BoundReport<T>) -> Value {
    json!({
        "bound": b.bound,
        "achieved_dim": b.achieved_dim,
        "partition": partition(&b.partition_used),
        "tight": b.tight,
        "applicable": b.applicable,
        "leaders_isolated": b.leaders_isolated,
        "contained": b.contained,
        "violated": b.violated,
        "nontrivial_cells": b.nontrivial_cells,
        "uncontrollable_by_partition": b.uncontrollable_by_partition,
        "complete_control_input": b.complete_control_input,
    })
}
