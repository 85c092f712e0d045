//! Command layer behind the `matnet` binary: load a spec, run one analysis,
//! and shape the result into a JSON report.

pub mod corpus;
mod report;
pub mod spec;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::analysis::{
    observability, theorem1_bound, theorem2_bound, theorem3_bound, union_analysis,
};
use crate::graph::MatrixWeightedSignedGraph;
use crate::linalg::{Backend, BackendKind, ExactBackend, FloatBackend, Scalar};
use crate::partition::{coarsest_ep, is_equitable, quotient_dot, quotient_of_matrix, Partition};
use crate::system::{HeterogeneousDynamics, SwitchingFamily, UnionAFactor};

pub use corpus::{cmd_corpus, CorpusEntry};
pub use report::{Report, SCHEMA};
pub use spec::{BuiltSpec, NetworkSpec, SpecDynamics, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_REGRESSION: i32 = 3;

/// Environment variable naming the default backend.
pub const BACKEND_ENV: &str = "MATNET_BACKEND";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Fixed,
    Heterogeneous,
    Switching,
    Union,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fixed => "fixed",
            Mode::Heterogeneous => "heterogeneous",
            Mode::Switching => "switching",
            Mode::Union => "union",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fixed" => Ok(Mode::Fixed),
            "heterogeneous" => Ok(Mode::Heterogeneous),
            "switching" => Ok(Mode::Switching),
            "union" => Ok(Mode::Union),
            other => Err(format!(
                "unknown mode `{other}` (expected fixed, heterogeneous, switching or union)"
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub mode: Mode,
    /// `"1|2,3|4"` with 1-based ids.
    pub partition: Option<String>,
    /// Explicit choice; otherwise exact unless the spec contains floats.
    pub backend: Option<BackendKind>,
    pub union_a_factor: UnionAFactor,
    /// Echoed in the report header.
    pub spec_path: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid spec at {0}")]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Analysis(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_VALIDATION
    }
}

pub fn load_spec(path: &str) -> Result<NetworkSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    Ok(NetworkSpec::from_json(&text)?)
}

/// Exact unless a float appears in the spec, overridden by `requested`.
pub fn resolve_backend(requested: Option<BackendKind>, spec: &NetworkSpec) -> BackendKind {
    requested.unwrap_or(if spec.has_float_entries() {
        BackendKind::Float
    } else {
        BackendKind::Exact
    })
}

fn header(command: &str, opts: &Options, backend: BackendKind, extra: Value) -> Map<String, Value> {
    let mut options = Map::new();
    if let Some(p) = &opts.partition {
        options.insert("partition".into(), p.clone().into());
    }
    if let Value::Object(extra) = extra {
        options.extend(extra);
    }
    let mut h = Map::new();
    h.insert("command".into(), command.into());
    h.insert("spec".into(), json!(opts.spec_path));
    h.insert("backend".into(), backend.to_string().into());
    h.insert("options".into(), Value::Object(options));
    h
}

fn edge_warnings<T: Scalar>(g: &MatrixWeightedSignedGraph<T>, label: &str) -> Vec<String> {
    g.flagged_edges()
        .iter()
        .map(|e| {
            format!(
                "{label}edge ({}, {}) has a {} weight",
                e.i + 1,
                e.j + 1,
                serde_json::to_value(e.definiteness)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            )
        })
        .collect()
}

fn parse_partition(opts: &Options, n: usize) -> Result<Option<Partition>, CliError> {
    opts.partition
        .as_deref()
        .map(|s| Partition::parse(s, n))
        .transpose()
        .map_err(CliError::from)
}

macro_rules! dispatch {
    ($spec:expr, $opts:expr, $inner:ident) => {{
        let kind = resolve_backend($opts.backend, $spec);
        match kind {
            BackendKind::Exact => $inner(&ExactBackend, &$spec.build::<BigRational>()?, $opts),
            BackendKind::Float => $inner(&FloatBackend::default(), &$spec.build::<f64>()?, $opts),
        }
    }};
}

pub fn cmd_laplacian(spec: &NetworkSpec, opts: &Options) -> Result<Report, CliError> {
    dispatch!(spec, opts, laplacian_inner)
}

fn laplacian_inner<B: Backend>(
    backend: &B,
    built: &BuiltSpec<B::Scalar>,
    opts: &Options,
) -> Result<Report, CliError> {
    let net = &built.network;
    let g = &net.graph;
    let mut warnings = edge_warnings(g, "");
    let source = if net.laplacian_override.is_some() {
        warnings.push("printing the supplied Laplacian override, not D − A".into());
        "override"
    } else {
        "graph"
    };
    let mut body = Map::new();
    body.insert("n".into(), g.n().into());
    body.insert("d".into(), g.d().into());
    body.insert("source".into(), source.into());
    body.insert("laplacian".into(), report::matrix(&net.laplacian()));
    if !built.topologies.is_empty() {
        body.insert(
            "topologies".into(),
            Value::Array(
                built
                    .topologies
                    .iter()
                    .map(|t| report::matrix(&t.laplacian()))
                    .collect(),
            ),
        );
    }
    body.insert("warnings".into(), json!(warnings));
    let summary = format!("laplacian: {0}x{0} ({source})", g.n() * g.d());
    Ok(Report::new(
        header("laplacian", opts, backend.kind(), json!({})),
        body,
        summary,
    ))
}

pub fn cmd_ep(spec: &NetworkSpec, opts: &Options) -> Result<Report, CliError> {
    dispatch!(spec, opts, ep_inner)
}

fn ep_inner<B: Backend>(
    backend: &B,
    built: &BuiltSpec<B::Scalar>,
    opts: &Options,
) -> Result<Report, CliError> {
    let net = &built.network;
    let g = &net.graph;
    let init = Partition::isolating(g.n(), g.leaders());
    let (pi, source) = match parse_partition(opts, g.n())? {
        Some(p) => (p, "given"),
        None => (coarsest_ep(backend, g, &init)?, "coarsest"),
    };
    let witness = is_equitable(backend, g, &pi)?;
    let mut warnings = edge_warnings(g, "");
    let quotient = if witness.equitable {
        let q = quotient_of_matrix(backend, &net.laplacian(), &pi, g.d());
        if q.is_none() {
            warnings.push(
                "partition is equitable for the graph but not for the Laplacian override".into(),
            );
        }
        q.as_ref().map(report::matrix)
    } else {
        None
    };
    let violation = witness.violation.as_ref().map(|v| {
        json!({
            "cells": [v.cells.0 + 1, v.cells.1 + 1],
            "nodes": [v.nodes.0 + 1, v.nodes.1 + 1],
            "sign": v.sign,
            "lhs": report::matrix(&v.lhs),
            "rhs": report::matrix(&v.rhs),
            "message": v.to_string(),
        })
    });
    let mut body = Map::new();
    body.insert("partition".into(), report::partition(&pi));
    body.insert("source".into(), source.into());
    body.insert("equitable".into(), witness.equitable.into());
    body.insert("violation".into(), json!(violation));
    body.insert("nontrivial_cells".into(), pi.has_nontrivial_cell().into());
    body.insert("leaders_isolated".into(), pi.isolates(g.leaders()).into());
    body.insert("quotient_laplacian".into(), json!(quotient));
    if !built.topologies.is_empty() {
        let members = built
            .topologies
            .iter()
            .map(|t| coarsest_ep(backend, t, &init).map(|p| report::partition(&p)))
            .collect::<Result<Vec<_>, _>>()?;
        body.insert("members".into(), Value::Array(members));
    }
    body.insert("warnings".into(), json!(warnings));
    let summary = format!(
        "ep: {pi} ({source}) is {}equitable",
        if witness.equitable { "" } else { "not " }
    );
    let mut report = Report::new(header("ep", opts, backend.kind(), json!({})), body, summary);
    report.dot = Some(quotient_dot(g, &pi));
    Ok(report)
}

pub fn cmd_ctrb(spec: &NetworkSpec, opts: &Options) -> Result<Report, CliError> {
    dispatch!(spec, opts, ctrb_inner)
}

fn dims(controllable: bool, dim: usize, ambient: usize) -> String {
    format!(
        "dim {dim}/{ambient}, {}",
        if controllable {
            "controllable"
        } else {
            "uncontrollable"
        }
    )
}

fn ctrb_inner<B: Backend>(
    backend: &B,
    built: &BuiltSpec<B::Scalar>,
    opts: &Options,
) -> Result<Report, CliError> {
    let net = &built.network;
    let g = &net.graph;
    let mode = opts.mode;
    let mut extra = json!({ "mode": mode.to_string() });
    let mut warnings = edge_warnings(g, "");
    let mut body = Map::new();
    body.insert("mode".into(), mode.to_string().into());
    let summary;
    match mode {
        Mode::Fixed | Mode::Heterogeneous => {
            let pi = parse_partition(opts, g.n())?;
            let r =
                match (&built.dynamics, mode) {
                    (SpecDynamics::Homogeneous(dy), Mode::Fixed) => {
                        theorem1_bound(backend, net, dy, pi.as_ref())?
                    }
                    (SpecDynamics::Heterogeneous(_), Mode::Fixed) => return Err(CliError::Usage(
                        "mode fixed needs shared dynamics; use --mode heterogeneous for per_node"
                            .into(),
                    )),
                    (SpecDynamics::Homogeneous(dy), _) => {
                        let hetero = HeterogeneousDynamics::from_homogeneous(dy, g.n());
                        theorem3_bound(backend, net, &hetero, pi.as_ref())?
                    }
                    (SpecDynamics::Heterogeneous(hetero), _) => {
                        theorem3_bound(backend, net, hetero, pi.as_ref())?
                    }
                };
            if net.laplacian_override.is_some() {
                warnings.push("system assembled from the Laplacian override".into());
            }
            if r.violated {
                warnings.push(format!(
                    "controllable subspace (dim {}) is not contained in im(P̃π) of rank {}",
                    r.achieved_dim, r.bound
                ));
            }
            body.insert("controllability".into(), report::verdict(&r.verdict));
            body.insert("bound".into(), report::bound(&r));
            body.insert("certificate".into(), report::certificate(&r.certificate));
            summary = format!(
                "ctrb {mode}: {}",
                dims(
                    r.verdict.controllable,
                    r.verdict.subspace_dim,
                    r.verdict.ambient_dim
                )
            );
        }
        Mode::Switching | Mode::Union => {
            if opts.partition.is_some() {
                return Err(CliError::Usage(format!(
                    "--partition applies to fixed and heterogeneous modes, not {mode}"
                )));
            }
            let SpecDynamics::Homogeneous(dy) = &built.dynamics else {
                return Err(CliError::Usage(format!(
                    "mode {mode} needs shared dynamics"
                )));
            };
            if built.topologies.is_empty() {
                return Err(CliError::Usage(format!(
                    "mode {mode} needs `topologies` in the spec"
                )));
            }
            if net.laplacian_override.is_some() {
                warnings.push("Laplacian override ignored: members use their own edge sets".into());
            }
            for (idx, t) in built.topologies.iter().enumerate() {
                warnings.extend(edge_warnings(t, &format!("member {}: ", idx + 1)));
            }
            if mode == Mode::Switching {
                let family = SwitchingFamily::assemble(&built.topologies, dy)?;
                let r = theorem2_bound(backend, &family, dy, None)?;
                if r.violated {
                    warnings.push(format!(
                        "join bound card(π)·d = {} is below the switched dimension {}",
                        r.bound, r.achieved_dim
                    ));
                }
                let members: Vec<Value> = r
                    .member_partitions
                    .iter()
                    .zip(&r.certificates_exist)
                    .map(|(p, e)| json!({ "partition": report::partition(p), "certificate_exists": e }))
                    .collect();
                body.insert("controllability".into(), report::verdict(&r.verdict));
                body.insert("members".into(), Value::Array(members));
                body.insert(
                    "bound".into(),
                    json!({
                        "join": report::partition(&r.join),
                        "bound": r.bound,
                        "achieved_dim": r.achieved_dim,
                        "tight": r.tight,
                        "applicable": r.applicable,
                        "violated": r.violated,
                        "common_partition": report::partition(&r.common_partition),
                        "common_bound": r.common_bound,
                        "common_applicable": r.common_applicable,
                        "common_contained": r.common_contained,
                    }),
                );
                summary = format!(
                    "ctrb switching: {}",
                    dims(
                        r.verdict.controllable,
                        r.verdict.subspace_dim,
                        r.verdict.ambient_dim
                    )
                );
            } else {
                extra["union_a_factor"] = opts.union_a_factor.to_string().into();
                let r = union_analysis(backend, &built.topologies, dy, opts.union_a_factor)?;
                warnings.extend(edge_warnings(&r.union_graph, "union: "));
                let members: Vec<Value> = r
                    .member_partitions
                    .iter()
                    .zip(&r.member_certificates)
                    .map(|(p, e)| {
                        json!({
                            "partition": report::partition(p),
                            "certificate_exists": e,
                            "nontrivial_cells": p.has_nontrivial_cell(),
                        })
                    })
                    .collect();
                body.insert(
                    "union".into(),
                    json!({
                        "a_factor": r.a_factor.to_string(),
                        "edges": r.union_graph.edge_count(),
                        "controllability": report::verdict(&r.union_verdict),
                    }),
                );
                body.insert(
                    "switched".into(),
                    json!({ "controllability": report::verdict(&r.switched_verdict) }),
                );
                body.insert("members".into(), Value::Array(members));
                body.insert(
                    "theorems".into(),
                    json!({
                        "union_implies_switched": r.union_implies_switched,
                        "nontrivial_member_cell": r.nontrivial_member_cell,
                    }),
                );
                body.insert("indeterminate".into(), r.indeterminate.into());
                summary = format!(
                    "ctrb union: union {}, switched {}{}",
                    dims(
                        r.union_verdict.controllable,
                        r.union_verdict.subspace_dim,
                        r.union_verdict.ambient_dim
                    ),
                    dims(
                        r.switched_verdict.controllable,
                        r.switched_verdict.subspace_dim,
                        r.switched_verdict.ambient_dim
                    ),
                    if r.indeterminate {
                        " (indeterminate)"
                    } else {
                        ""
                    }
                );
            }
        }
    }
    body.insert("warnings".into(), json!(warnings));
    Ok(Report::new(
        header("ctrb", opts, backend.kind(), extra),
        body,
        summary,
    ))
}

pub fn cmd_obsv(spec: &NetworkSpec, opts: &Options) -> Result<Report, CliError> {
    dispatch!(spec, opts, obsv_inner)
}

fn obsv_inner<B: Backend>(
    backend: &B,
    built: &BuiltSpec<B::Scalar>,
    opts: &Options,
) -> Result<Report, CliError> {
    let net = &built.network;
    let SpecDynamics::Homogeneous(dy) = &built.dynamics else {
        return Err(CliError::Usage("obsv needs shared dynamics".into()));
    };
    let pi = parse_partition(opts, net.graph.n())?;
    let r = observability(backend, net, dy, pi.as_ref())?;
    let joint = r.first_order_joint.map(|j| {
        json!({ "status": j.status, "controllable": j.controllable, "observable": j.observable })
    });
    let mut body = Map::new();
    body.insert(
        "observability".into(),
        json!({ "observable": r.observable, "dual": report::verdict(&r.dual) }),
    );
    body.insert("partition".into(), report::partition(&r.partition_used));
    body.insert("certificate_exists".into(), r.certificate_exists.into());
    body.insert("nontrivial_cells".into(), r.nontrivial_cells.into());
    body.insert(
        "theorems".into(),
        json!({
            "nontrivial_cell_unobservable": r.nontrivial_cell_unobservable,
            "first_order_joint": joint,
        }),
    );
    body.insert("first_order".into(), r.first_order.into());
    body.insert("warnings".into(), json!(edge_warnings(&net.graph, "")));
    let summary = format!(
        "obsv: dual {}, {}",
        dims(r.dual.controllable, r.dual.subspace_dim, r.dual.ambient_dim),
        if r.observable {
            "observable"
        } else {
            "unobservable"
        }
    );
    Ok(Report::new(
        header("obsv", opts, backend.kind(), json!({})),
        body,
        summary,
    ))
}
