//! Node partitions, equitable-partition checks and quotient Laplacians.
//!
//! A partition is equitable when, for every pair of cells `(V_i, V_j)`, all
//! nodes of `V_i` see the same sum of positive adjacency blocks into `V_j`
//! and the same sum of negative adjacency blocks into `V_j`. Partitions are
//! ordered by refinement: `π₁ ≤ π₂` when every cell of `π₁` sits inside a
//! cell of `π₂`.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeSign, MatrixWeightedSignedGraph};
use crate::linalg::{Backend, Mat, Scalar};

/// Disjoint nonempty cells covering `0..n`, each sorted, cells ordered by
/// their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::InvalidPartition("empty cell".into()));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} is out of range for {n} nodes"
                    )));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} appears in more than one cell"
                    )));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "node {missing} is not covered"
            )));
        }
        Ok(Self::canonical(n, cells))
    }

    fn canonical(n: usize, mut cells: Vec<Vec<usize>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort_by_key(|c| c[0]);
        Self { n, cells }
    }

    /// One cell per distinct label.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut index: Vec<(usize, usize)> = Vec::new();
        for (node, &label) in labels.iter().enumerate() {
            match index.iter().find(|(l, _)| *l == label) {
                Some(&(_, c)) => cells[c].push(node),
                None => {
                    index.push((label, cells.len()));
                    cells.push(vec![node]);
                }
            }
        }
        Self::canonical(labels.len(), cells)
    }

    pub fn singletons(n: usize) -> Self {
        Self::canonical(n, (0..n).map(|v| vec![v]).collect())
    }

    pub fn single_cell(n: usize) -> Self {
        Self::canonical(n, vec![(0..n).collect()])
    }

    /// Every leader alone in its own cell, all other nodes in one cell.
    pub fn isolating(n: usize, leaders: &[usize]) -> Self {
        let labels: Vec<usize> = (0..n)
            .map(|v| if leaders.contains(&v) { v + 1 } else { 0 })
            .collect();
        Self::from_labels(&labels)
    }

    /// Parses `"1|2,3|4"` with 1-based node ids.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let mut cells = Vec::new();
        for part in s.split('|') {
            let mut cell = Vec::new();
            for tok in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let id: usize = tok
                    .parse()
                    .map_err(|_| Error::InvalidPartition(format!("`{tok}` is not a node id")))?;
                if id == 0 {
                    return Err(Error::InvalidPartition("node ids are 1-based".into()));
                }
                cell.push(id - 1);
            }
            cells.push(cell);
        }
        Self::new(n, cells)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Number of cells.
    pub fn card(&self) -> usize {
        self.cells.len()
    }

    /// Cell index of every node.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                labels[v] = c;
            }
        }
        labels
    }

    pub fn cell_of(&self, node: usize) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(&node))
    }

    pub fn nontrivial_cells(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.iter().filter(|c| c.len() > 1).map(Vec::as_slice)
    }

    pub fn has_nontrivial_cell(&self) -> bool {
        self.cells.iter().any(|c| c.len() > 1)
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.n
    }

    /// Whether every given node sits alone in its cell.
    pub fn isolates(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .all(|v| self.cells.iter().any(|c| c.len() == 1 && c[0] == *v))
    }

    /// `self ≤ other`: every cell of `self` lies inside one cell of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.n != other.n {
            return false;
        }
        let labels = other.labels();
        self.cells
            .iter()
            .all(|c| c.iter().all(|&v| labels[v] == labels[c[0]]))
    }

    /// Finest common coarsening: cells are the connected components of
    /// "same cell in `self` or in `other`".
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return Err(Error::InvalidPartition(format!(
                "cannot join partitions of {} and {} nodes",
                self.n, other.n
            )));
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut root = v;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = v;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        for cell in self.cells.iter().chain(&other.cells) {
            for &v in &cell[1..] {
                let (a, b) = (find(&mut parent, cell[0]), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let labels: Vec<usize> = (0..self.n).map(|v| find(&mut parent, v)).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// Coarsest partition that refines both (cells are pairwise intersections).
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return Err(Error::InvalidPartition(format!(
                "cannot intersect partitions of {} and {} nodes",
                self.n, other.n
            )));
        }
        let (a, b) = (self.labels(), other.labels());
        let labels: Vec<usize> = (0..self.n).map(|v| a[v] * self.n + b[v]).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// Cells with 1-based ids, as used in reports.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|c| c.iter().map(|v| v + 1).collect())
            .collect()
    }
}

impl fmt::Display for Partition {
    /// `1|2,3|4` with 1-based ids.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .cells
            .iter()
            .map(|c| {
                c.iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&cells.join("|"))
    }
}

/// Block 0/I lift `P_π` of a partition: block `(i, j)` is `I_d` when node
/// `i` lies in cell `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicMatrix<T> {
    pub p: Mat<T>,
    pub partition: Partition,
    pub d: usize,
}

pub fn characteristic_matrix<T: Scalar>(pi: &Partition, d: usize) -> CharacteristicMatrix<T> {
    let id = Mat::identity(d);
    let mut p = Mat::zeros(pi.n() * d, pi.card() * d);
    for (c, cell) in pi.cells().iter().enumerate() {
        for &v in cell {
            p.set_block(v * d, c * d, &id);
        }
    }
    CharacteristicMatrix {
        p,
        partition: pi.clone(),
        d,
    }
}

/// First place where a partition fails to be equitable.
#[derive(Debug, Clone, PartialEq)]
pub struct EpViolation<T> {
    /// `(i, j)`: nodes of cell `i` disagree on their sums into cell `j`.
    pub cells: (usize, usize),
    pub nodes: (usize, usize),
    pub sign: EdgeSign,
    pub lhs: Mat<T>,
    pub rhs: Mat<T>,
}

impl<T: Scalar> fmt::Display for EpViolation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            EdgeSign::Positive => "positive",
            EdgeSign::Negative => "negative",
        };
        write!(
            f,
            "nodes {} and {} (cell {}) have different {sign} sums into cell {}",
            self.nodes.0 + 1,
            self.nodes.1 + 1,
            self.cells.0 + 1,
            self.cells.1 + 1
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpWitness<T> {
    pub equitable: bool,
    pub violation: Option<EpViolation<T>>,
}

impl<T> EpWitness<T> {
    fn ok() -> Self {
        Self {
            equitable: true,
            violation: None,
        }
    }

    fn fail(v: EpViolation<T>) -> Self {
        Self {
            equitable: false,
            violation: Some(v),
        }
    }
}

/// `Σ A_{node,t}` over neighbours `t ∈ cell` joined by an edge of `sign`.
pub fn signed_sum_into<T: Scalar>(
    g: &MatrixWeightedSignedGraph<T>,
    node: usize,
    cell: &[usize],
    sign: EdgeSign,
) -> Mat<T> {
    let mut sum = Mat::zeros(g.d(), g.d());
    for (t, e) in g.neighbors(node) {
        if e.sign == sign && cell.contains(&t) {
            sum = &sum + &e.adjacency();
        }
    }
    sum
}

/// `d(v, Q) = Σ_{t ∈ Q} |A_vt|`.
pub fn magnitude_sum_into<T: Scalar>(
    g: &MatrixWeightedSignedGraph<T>,
    node: usize,
    cell: &[usize],
) -> Mat<T> {
    let mut sum = Mat::zeros(g.d(), g.d());
    for (t, e) in g.neighbors(node) {
        if cell.contains(&t) {
            sum = &sum + &e.weight;
        }
    }
    sum
}

const SIGNS: [EdgeSign; 2] = [EdgeSign::Positive, EdgeSign::Negative];

pub fn is_equitable<B: Backend>(
    backend: &B,
    g: &MatrixWeightedSignedGraph<B::Scalar>,
    pi: &Partition,
) -> Result<EpWitness<B::Scalar>> {
    if pi.n() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, graph has {}",
            pi.n(),
            g.n()
        )));
    }
    for (ci, cell) in pi.cells().iter().enumerate() {
        let r = cell[0];
        for &s in &cell[1..] {
            for (cj, target) in pi.cells().iter().enumerate() {
                for sign in SIGNS {
                    let lhs = signed_sum_into(g, r, target, sign);
                    let rhs = signed_sum_into(g, s, target, sign);
                    if !backend.mat_eq(&lhs, &rhs) {
                        return Ok(EpWitness::fail(EpViolation {
                            cells: (ci, cj),
                            nodes: (r, s),
                            sign,
                            lhs,
                            rhs,
                        }));
                    }
                }
            }
        }
    }
    Ok(EpWitness::ok())
}

/// Coarsest equitable partition refining `init`.
pub fn coarsest_ep<B: Backend>(
    backend: &B,
    g: &MatrixWeightedSignedGraph<B::Scalar>,
    init: &Partition,
) -> Result<Partition> {
    coarsest_common_ep(backend, std::slice::from_ref(g), init)
}

type Class<T> = (Vec<Mat<T>>, Vec<usize>);

/// Coarsest partition refining `init` that is equitable for every graph at once.
///
/// Iterative signature refinement: each round splits every cell by the tuple
/// of (positive, negative) sums each node sends into each current cell,
/// across all graphs, until no cell splits.
pub fn coarsest_common_ep<B: Backend>(
    backend: &B,
    graphs: &[MatrixWeightedSignedGraph<B::Scalar>],
    init: &Partition,
) -> Result<Partition> {
    for g in graphs {
        if g.n() != init.n() {
            return Err(Error::InvalidPartition(format!(
                "initial partition covers {} nodes, graph has {}",
                init.n(),
                g.n()
            )));
        }
    }
    let mut current = init.clone();
    loop {
        let signature = |v: usize| -> Vec<Mat<B::Scalar>> {
            let mut sig = Vec::with_capacity(graphs.len() * current.card() * 2);
            for g in graphs {
                for cell in current.cells() {
                    for sign in SIGNS {
                        sig.push(signed_sum_into(g, v, cell, sign));
                    }
                }
            }
            sig
        };
        let mut next_cells = Vec::with_capacity(current.card());
        for cell in current.cells() {
            // (signature of the first member, members)
            let mut classes: Vec<Class<B::Scalar>> = Vec::new();
            for &v in cell {
                let sig = signature(v);
                let same = |other: &Vec<Mat<B::Scalar>>| {
                    other.iter().zip(&sig).all(|(a, b)| backend.mat_eq(a, b))
                };
                match classes.iter_mut().find(|(rep, _)| same(rep)) {
                    Some((_, members)) => members.push(v),
                    None => classes.push((sig, vec![v])),
                }
            }
            next_cells.extend(classes.into_iter().map(|(_, members)| members));
        }
        let next = Partition::canonical(current.n(), next_cells);
        if next.card() == current.card() {
            return Ok(next);
        }
        current = next;
    }
}

/// Block-row sums of `l` over the cells of `pi`, provided they agree within
/// each cell (equivalently `l·P_π = P_π·Q` for some `Q`); returns that `Q`.
pub fn quotient_of_matrix<B: Backend>(
    backend: &B,
    l: &Mat<B::Scalar>,
    pi: &Partition,
    d: usize,
) -> Option<Mat<B::Scalar>> {
    assert_eq!(
        l.shape(),
        (pi.n() * d, pi.n() * d),
        "matrix does not match partition"
    );
    let k = pi.card();
    let row_sum = |r: usize, cell: &[usize]| {
        let mut s = Mat::zeros(d, d);
        for &t in cell {
            s = &s + &l.block(r * d, t * d, d, d);
        }
        s
    };
    let mut q = Mat::zeros(k * d, k * d);
    for (ci, cell) in pi.cells().iter().enumerate() {
        for (cj, target) in pi.cells().iter().enumerate() {
            let rep = row_sum(cell[0], target);
            if cell[1..]
                .iter()
                .any(|&s| !backend.mat_eq(&rep, &row_sum(s, target)))
            {
                return None;
            }
            q.set_block(ci * d, cj * d, &rep);
        }
    }
    Some(q)
}

/// Laplacian `L_π` of the quotient graph, the unique matrix with
/// `L·P_π = P_π·L_π`.
///
/// Off-diagonal block `(i, j)` is `−Σ_{t ∈ V_j} A_rt` and diagonal block `i`
/// is `d_r − Σ_{t ∈ V_i} A_rt` for any representative `r ∈ V_i`. With only
/// positive edges these are `−d(V_i, V_j)` and `Σ_{j ≠ i} d(V_i, V_j)`.
pub fn quotient_laplacian<B: Backend>(
    backend: &B,
    g: &MatrixWeightedSignedGraph<B::Scalar>,
    pi: &Partition,
) -> Result<Mat<B::Scalar>> {
    let witness = is_equitable(backend, g, pi)?;
    if let Some(v) = witness.violation {
        return Err(Error::NotEquitable(v.to_string()));
    }
    quotient_of_matrix(backend, &g.laplacian(), pi, g.d())
        .ok_or_else(|| Error::NotEquitable("block-row sums disagree within a cell".into()))
}

/// Graphviz rendering of the quotient graph: one node per cell and an arc
/// `V_i → V_j` labelled with `d(V_i, V_j)` whenever it is nonzero.
pub fn quotient_dot<T: Scalar>(g: &MatrixWeightedSignedGraph<T>, pi: &Partition) -> String {
    let mut out = String::from("digraph quotient {\n    node [shape=ellipse];\n");
    for (c, cell) in pi.cells().iter().enumerate() {
        let members: Vec<String> = cell.iter().map(|v| (v + 1).to_string()).collect();
        let leader = cell.iter().any(|&v| g.is_leader(v));
        let _ = writeln!(
            out,
            "    c{} [label=\"{{{}}}\"{}];",
            c + 1,
            members.join(","),
            if leader { ", shape=doublecircle" } else { "" }
        );
    }
    for (ci, cell) in pi.cells().iter().enumerate() {
        for (cj, target) in pi.cells().iter().enumerate() {
            if ci == cj {
                continue;
            }
            let w = magnitude_sum_into(g, cell[0], target);
            if w.is_zero() {
                continue;
            }
            let rows: Vec<String> = w
                .to_rows()
                .iter()
                .map(|r| {
                    let entries: Vec<String> = r.iter().map(ToString::to_string).collect();
                    format!("[{}]", entries.join(","))
                })
                .collect();
            let _ = writeln!(
                out,
                "    c{} -> c{} [label=\"[{}]\"];",
                ci + 1,
                cj + 1,
                rows.join(",")
            );
        }
    }
    out.push_str("}\n");
    out
}
