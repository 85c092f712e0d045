//! JSON network specification files.
//!
//! ```json
//! {
//!   "d": 2, "n": 3, "leaders": [1],
//!   "edges": [{"i": 1, "j": 2, "sign": "+", "weight": [[1, 2], [2, 1]]}],
//!   "dynamics": {"a": [[1, 0], [0, 1]], "b": [[2, 0], [0, 2]],
//!                "k": [[1, 0], [0, 1]], "c": [[2, 0], [0, 2]]}
//! }
//! ```
//!
//! Node ids and leaders are 1-based. Matrix entries are integers, `"p/q"`
//! strings or floats.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeSign, MatrixWeightedSignedGraph};
use crate::linalg::{Mat, Scalar};
use crate::system::{Dynamics, HeterogeneousDynamics, Network};

/// A matrix entry as written in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Entry {
    fn to_scalar<T: Scalar>(&self) -> Result<T, String> {
        match self {
            Entry::Int(v) => Ok(T::from_i64(*v)),
            Entry::Float(v) if v.is_finite() => Ok(T::from_f64(*v)),
            Entry::Float(v) => Err(format!("{v} is not a finite number")),
            Entry::Text(s) => {
                let r: BigRational = s
                    .trim()
                    .parse()
                    .map_err(|_| format!("`{s}` is not a rational number"))?;
                Ok(T::from_rational(&r))
            }
        }
    }
}

pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub i: usize,
    pub j: usize,
    pub sign: EdgeSign,
    pub weight: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDynamicsSpec {
    pub a: MatrixSpec,
    pub b: MatrixSpec,
}

/// Either shared `a`, `b` or a `per_node` list, plus shared `k` and `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_node: Option<Vec<NodeDynamicsSpec>>,
    pub k: MatrixSpec,
    pub c: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub d: usize,
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    pub leaders: Vec<usize>,
    pub dynamics: DynamicsSpec,
    /// Edge sets of the switching members.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topologies: Option<Vec<Vec<EdgeSpec>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laplacian_override: Option<MatrixSpec>,
}

/// Load-time failure with the offending location (`edges[2].weight`, `line 4, column 9`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub location: String,
    pub message: String,
}

impl SpecError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for SpecError {}

/// Dynamics in typed form.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecDynamics<T> {
    Homogeneous(Dynamics<T>),
    Heterogeneous(HeterogeneousDynamics<T>),
}

/// Everything a spec describes, converted to one scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltSpec<T> {
    pub network: Network<T>,
    pub dynamics: SpecDynamics<T>,
    pub topologies: Vec<MatrixWeightedSignedGraph<T>>,
}

fn matrix<T: Scalar>(m: &MatrixSpec, location: &str) -> Result<Mat<T>, SpecError> {
    let mut rows = Vec::with_capacity(m.len());
    for (r, row) in m.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (c, e) in row.iter().enumerate() {
            out.push(
                e.to_scalar()
                    .map_err(|msg| SpecError::at(format!("{location}[{r}][{c}]"), msg))?,
            );
        }
        rows.push(out);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(SpecError::at(location, "matrix is empty"));
    }
    Mat::from_rows(rows).map_err(|e| SpecError::at(location, e.to_string()))
}

fn expect_shape<T: Scalar>(
    m: &Mat<T>,
    shape: (usize, usize),
    location: &str,
) -> Result<(), SpecError> {
    if m.shape() != shape {
        return Err(SpecError::at(
            location,
            format!(
                "is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            ),
        ));
    }
    Ok(())
}

impl NetworkSpec {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let spec: NetworkSpec = serde_json::from_str(text).map_err(|e| {
            SpecError::at(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        self.build::<BigRational>().map(|_| ())
    }

    /// Whether any entry is written as a float.
    pub fn has_float_entries(&self) -> bool {
        let any = |m: &MatrixSpec| m.iter().flatten().any(|e| matches!(e, Entry::Float(_)));
        let edges = |es: &[EdgeSpec]| es.iter().any(|e| any(&e.weight));
        let dy = &self.dynamics;
        edges(&self.edges)
            || self.topologies.iter().flatten().any(|t| edges(t))
            || self.laplacian_override.as_ref().is_some_and(any)
            || dy.a.as_ref().is_some_and(any)
            || dy.b.as_ref().is_some_and(any)
            || any(&dy.k)
            || any(&dy.c)
            || dy.per_node.iter().flatten().any(|p| any(&p.a) || any(&p.b))
    }

    fn graph<T: Scalar>(
        &self,
        edges: &[EdgeSpec],
        location: &str,
    ) -> Result<MatrixWeightedSignedGraph<T>, SpecError> {
        let leaders = self.leaders.iter().map(|l| l.wrapping_sub(1)).collect();
        let mut g = MatrixWeightedSignedGraph::new(self.n, self.d, leaders).map_err(|e| {
            let loc = if self.n == 0 || self.d == 0 {
                "n"
            } else {
                "leaders"
            };
            SpecError::at(loc, e.to_string())
        })?;
        for (idx, e) in edges.iter().enumerate() {
            let loc = format!("{location}[{idx}]");
            for (name, id) in [("i", e.i), ("j", e.j)] {
                if id == 0 || id > self.n {
                    return Err(SpecError::at(
                        format!("{loc}.{name}"),
                        format!("node {id} is outside 1..={}", self.n),
                    ));
                }
            }
            let w = matrix::<T>(&e.weight, &format!("{loc}.weight"))?;
            g.add_edge(e.i - 1, e.j - 1, e.sign, w)
                .map_err(|err| SpecError::at(&loc, err.to_string()))?;
        }
        Ok(g)
    }

    /// Converts every field to scalar type `T`, validating as it goes.
    pub fn build<T: Scalar>(&self) -> Result<BuiltSpec<T>, SpecError> {
        if self.n == 0 {
            return Err(SpecError::at("n", "must be at least 1"));
        }
        if self.d == 0 {
            return Err(SpecError::at("d", "must be at least 1"));
        }
        if let Some(pos) = self.leaders.iter().position(|&l| l == 0 || l > self.n) {
            return Err(SpecError::at(
                format!("leaders[{pos}]"),
                format!("leader {} is outside 1..={}", self.leaders[pos], self.n),
            ));
        }
        let graph = self.graph::<T>(&self.edges, "edges")?;
        let (n, d) = (self.n, self.d);
        let network = match &self.laplacian_override {
            None => Network::new(graph),
            Some(m) => {
                let l = matrix::<T>(m, "laplacian_override")?;
                expect_shape(&l, (n * d, n * d), "laplacian_override")?;
                Network::with_override(graph, l)
                    .map_err(|e| SpecError::at("laplacian_override", e.to_string()))?
            }
        };
        let dynamics = self.build_dynamics::<T>()?;
        let topologies = match &self.topologies {
            None => Vec::new(),
            Some(ts) => {
                if ts.is_empty() {
                    return Err(SpecError::at(
                        "topologies",
                        "must list at least one edge set",
                    ));
                }
                ts.iter()
                    .enumerate()
                    .map(|(idx, t)| self.graph::<T>(t, &format!("topologies[{idx}]")))
                    .collect::<Result<_, _>>()?
            }
        };
        Ok(BuiltSpec {
            network,
            dynamics,
            topologies,
        })
    }

    fn build_dynamics<T: Scalar>(&self) -> Result<SpecDynamics<T>, SpecError> {
        let dy = &self.dynamics;
        let d = self.d;
        let k = matrix::<T>(&dy.k, "dynamics.k")?;
        let c = matrix::<T>(&dy.c, "dynamics.c")?;
        if c.rows() != d {
            return Err(SpecError::at(
                "dynamics.c",
                format!("has {} rows, expected {d}", c.rows()),
            ));
        }
        match (&dy.a, &dy.b, &dy.per_node) {
            (Some(a), Some(b), None) => {
                let a = matrix::<T>(a, "dynamics.a")?;
                expect_shape(&a, (d, d), "dynamics.a")?;
                let b = matrix::<T>(b, "dynamics.b")?;
                if b.rows() != d {
                    return Err(SpecError::at(
                        "dynamics.b",
                        format!("has {} rows, expected {d}", b.rows()),
                    ));
                }
                expect_shape(&k, (b.cols(), d), "dynamics.k")?;
                Dynamics::new(a, b, k, c)
                    .map(SpecDynamics::Homogeneous)
                    .map_err(|e| SpecError::at("dynamics", e.to_string()))
            }
            (None, None, Some(per_node)) => {
                if per_node.len() != self.n {
                    return Err(SpecError::at(
                        "dynamics.per_node",
                        format!("has {} entries, expected {}", per_node.len(), self.n),
                    ));
                }
                let mut pairs = Vec::with_capacity(per_node.len());
                for (idx, p) in per_node.iter().enumerate() {
                    let loc = format!("dynamics.per_node[{idx}]");
                    let a = matrix::<T>(&p.a, &format!("{loc}.a"))?;
                    expect_shape(&a, (d, d), &format!("{loc}.a"))?;
                    let b = matrix::<T>(&p.b, &format!("{loc}.b"))?;
                    expect_shape(&b, (d, k.rows()), &format!("{loc}.b"))?;
                    pairs.push((a, b));
                }
                expect_shape(&k, (k.rows(), d), "dynamics.k")?;
                HeterogeneousDynamics::new(pairs, k, c)
                    .map(SpecDynamics::Heterogeneous)
                    .map_err(|e| SpecError::at("dynamics", e.to_string()))
            }
            (_, _, Some(_)) => Err(SpecError::at(
                "dynamics",
                "give either shared `a` and `b` or `per_node`, not both",
            )),
            _ => Err(SpecError::at("dynamics", "`a` and `b` are both required")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "d": 1, "n": 3, "leaders": [1],
        "edges": [
            {"i": 1, "j": 2, "sign": "+", "weight": [[1]]},
            {"i": 2, "j": 3, "sign": "negative", "weight": [["1/2"]]}
        ],
        "dynamics": {"a": [[0]], "b": [[1]], "k": [[1]], "c": [[1]]}
    }"#;

    fn err(text: &str) -> SpecError {
        NetworkSpec::from_json(text).unwrap_err()
    }

    #[test]
    fn parses_mixed_entries() {
        let spec = NetworkSpec::from_json(SMALL).unwrap();
        assert_eq!(spec.edges[1].sign, EdgeSign::Negative);
        let built = spec.build::<BigRational>().unwrap();
        let l = built.network.laplacian();
        assert_eq!(l[(1, 2)], crate::linalg::ratio(1, 2));
        assert!(!spec.has_float_entries());
    }

    #[test]
    fn round_trip_is_identity() {
        let spec = NetworkSpec::from_json(SMALL).unwrap();
        let again = NetworkSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn reports_json_syntax_position() {
        let e = err("{\n  \"d\": 1,\n  oops }");
        assert!(e.location.starts_with("line 3"), "{e}");
    }

    #[test]
    fn locates_bad_edges() {
        let bad_node = SMALL.replace(r#""i": 2, "j": 3"#, r#""i": 2, "j": 4"#);
        assert_eq!(err(&bad_node).location, "edges[1].j");
        let asym = SMALL
            .replace(r#"[["1/2"]]"#, r#"[[1, 2], [3, 1]]"#)
            .replace(r#""d": 1"#, r#""d": 2"#);
        assert!(err(&asym).location.starts_with("edges[0]"));
        let bad_entry = SMALL.replace(r#""1/2""#, r#""one half""#);
        assert_eq!(err(&bad_entry).location, "edges[1].weight[0][0]");
        let dup = SMALL.replace(r#""i": 2, "j": 3"#, r#""i": 2, "j": 1"#);
        assert_eq!(err(&dup).location, "edges[1]");
    }

    #[test]
    fn locates_bad_leaders_and_dynamics() {
        assert_eq!(
            err(&SMALL.replace(r#""leaders": [1]"#, r#""leaders": [0]"#)).location,
            "leaders[0]"
        );
        assert_eq!(
            err(&SMALL.replace(r#""leaders": [1]"#, r#""leaders": []"#)).location,
            "leaders"
        );
        assert_eq!(
            err(&SMALL.replace(r#""a": [[0]]"#, r#""a": [[0, 1]]"#)).location,
            "dynamics.a"
        );
        let both = SMALL.replace(r#""a": [[0]]"#, r#""per_node": [], "a": [[0]]"#);
        assert_eq!(err(&both).location, "dynamics");
        let unknown = SMALL.replace(r#""d": 1"#, r#""d": 1, "extra": true"#);
        assert!(err(&unknown).message.contains("unknown field"));
    }

    #[test]
    fn heterogeneous_and_topologies() {
        let text = r#"{
            "d": 1, "n": 2, "leaders": [1],
            "dynamics": {"per_node": [{"a": [[1]], "b": [[1]]}, {"a": [[2]], "b": [[1]]}],
                         "k": [[1]], "c": [[1]]},
            "topologies": [[{"i": 1, "j": 2, "sign": "+", "weight": [[0.5]]}], []]
        }"#;
        let spec = NetworkSpec::from_json(text).unwrap();
        assert!(spec.has_float_entries());
        let built = spec.build::<f64>().unwrap();
        assert!(matches!(built.dynamics, SpecDynamics::Heterogeneous(_)));
        assert_eq!(built.topologies.len(), 2);
        assert_eq!(built.topologies[1].edge_count(), 0);
        let short = text.replace(r#", {"a": [[2]], "b": [[1]]}"#, "");
        assert_eq!(err(&short).location, "dynamics.per_node");
    }

    #[test]
    fn override_must_match_dimensions() {
        let text = SMALL.replace(
            r#""dynamics""#,
            r#""laplacian_override": [[1, -1], [-1, 1]], "dynamics""#,
        );
        assert_eq!(err(&text).location, "laplacian_override");
    }
}
