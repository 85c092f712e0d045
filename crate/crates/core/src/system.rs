//! Augmented state matrices for the network variants.
//!
//! Every variant has the form `ẋ = L̃·x + M̃·y`: node dynamics `A` on the
//! block diagonal, network coupling `−B·K·L`, and leader inputs entering
//! through `C` at the leader block rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MatrixWeightedSignedGraph;
use crate::linalg::{Mat, Scalar};
use crate::partition::CharacteristicMatrix;

/// Shared node dynamics `ẋ_i = A·x_i + B·u_i` with coupling gain `K` and
/// leader input matrix `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics<T> {
    pub a: Mat<T>,
    pub b: Mat<T>,
    pub k: Mat<T>,
    pub c: Mat<T>,
}

impl<T: Scalar> Dynamics<T> {
    pub fn new(a: Mat<T>, b: Mat<T>, k: Mat<T>, c: Mat<T>) -> Result<Self> {
        let d = a.rows();
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "A is {}x{}, must be square",
                a.rows(),
                a.cols()
            )));
        }
        check_input_pair(d, &b, &k, &c)?;
        Ok(Self { a, b, k, c })
    }

    /// `A = 0`, `B = K = C = I`: plain consensus over the network.
    pub fn first_order(d: usize) -> Self {
        Self {
            a: Mat::zeros(d, d),
            b: Mat::identity(d),
            k: Mat::identity(d),
            c: Mat::identity(d),
        }
    }

    pub fn is_first_order(&self) -> bool {
        let d = self.d();
        self.a.is_zero()
            && self.b == Mat::identity(d)
            && self.k == Mat::identity(d)
            && self.c == Mat::identity(d)
    }

    pub fn d(&self) -> usize {
        self.a.rows()
    }

    /// Input width of a leader, the column count of `C`.
    pub fn q(&self) -> usize {
        self.c.cols()
    }

    pub fn bk(&self) -> Mat<T> {
        &self.b * &self.k
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Dynamics<U> {
        Dynamics {
            a: self.a.map(&f),
            b: self.b.map(&f),
            k: self.k.map(&f),
            c: self.c.map(&f),
        }
    }
}

fn check_input_pair<T: Scalar>(d: usize, b: &Mat<T>, k: &Mat<T>, c: &Mat<T>) -> Result<()> {
    if b.rows() != d {
        return Err(Error::Dimension(format!(
            "B has {} rows, expected {d}",
            b.rows()
        )));
    }
    if k.shape() != (b.cols(), d) {
        return Err(Error::Dimension(format!(
            "K is {}x{}, expected {}x{d}",
            k.rows(),
            k.cols(),
            b.cols()
        )));
    }
    if c.rows() != d {
        return Err(Error::Dimension(format!(
            "C has {} rows, expected {d}",
            c.rows()
        )));
    }
    Ok(())
}

/// Per-node `(A_i, B_i)` with shared `K` and `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeterogeneousDynamics<T> {
    pub per_node: Vec<(Mat<T>, Mat<T>)>,
    pub k: Mat<T>,
    pub c: Mat<T>,
}

impl<T: Scalar> HeterogeneousDynamics<T> {
    pub fn new(per_node: Vec<(Mat<T>, Mat<T>)>, k: Mat<T>, c: Mat<T>) -> Result<Self> {
        let Some((a0, b0)) = per_node.first() else {
            return Err(Error::Dimension("no per-node dynamics given".into()));
        };
        let (d, p) = (a0.rows(), b0.cols());
        for (i, (a, b)) in per_node.iter().enumerate() {
            if a.shape() != (d, d) {
                return Err(Error::Dimension(format!(
                    "A_{} is {}x{}, expected {d}x{d}",
                    i + 1,
                    a.rows(),
                    a.cols()
                )));
            }
            if b.shape() != (d, p) {
                return Err(Error::Dimension(format!(
                    "B_{} is {}x{}, expected {d}x{p}",
                    i + 1,
                    b.rows(),
                    b.cols()
                )));
            }
        }
        check_input_pair(d, &b0.clone(), &k, &c)?;
        Ok(Self { per_node, k, c })
    }

    pub fn from_homogeneous(dynamics: &Dynamics<T>, n: usize) -> Self {
        Self {
            per_node: vec![(dynamics.a.clone(), dynamics.b.clone()); n],
            k: dynamics.k.clone(),
            c: dynamics.c.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.per_node.len()
    }

    pub fn d(&self) -> usize {
        self.per_node[0].0.rows()
    }

    pub fn q(&self) -> usize {
        self.c.cols()
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> HeterogeneousDynamics<U> {
        HeterogeneousDynamics {
            per_node: self
                .per_node
                .iter()
                .map(|(a, b)| (a.map(&f), b.map(&f)))
                .collect(),
            k: self.k.map(&f),
            c: self.c.map(&f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemVariant {
    Fixed,
    SwitchingMember,
    Heterogeneous,
    Union,
    Dual,
}

impl fmt::Display for SystemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemVariant::Fixed => "fixed",
            SystemVariant::SwitchingMember => "switching-member",
            SystemVariant::Heterogeneous => "heterogeneous",
            SystemVariant::Union => "union",
            SystemVariant::Dual => "dual",
        })
    }
}

/// `ẋ = L̃·x + M̃·y` over `n` nodes of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSystem<T> {
    pub l_tilde: Mat<T>,
    pub m_tilde: Mat<T>,
    pub variant: SystemVariant,
    pub n: usize,
    pub d: usize,
}

impl<T: Scalar> AugmentedSystem<T> {
    pub fn state_dim(&self) -> usize {
        self.n * self.d
    }
}

/// A graph with an optional explicit Laplacian that replaces `D − A` when
/// assembling systems. The graph still drives partitions and leaders.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    pub graph: MatrixWeightedSignedGraph<T>,
    pub laplacian_override: Option<Mat<T>>,
}

impl<T: Scalar> Network<T> {
    pub fn new(graph: MatrixWeightedSignedGraph<T>) -> Self {
        Self {
            graph,
            laplacian_override: None,
        }
    }

    pub fn with_override(graph: MatrixWeightedSignedGraph<T>, l: Mat<T>) -> Result<Self> {
        let dn = graph.n() * graph.d();
        if l.shape() != (dn, dn) {
            return Err(Error::Dimension(format!(
                "Laplacian override is {}x{}, expected {dn}x{dn}",
                l.rows(),
                l.cols()
            )));
        }
        Ok(Self {
            graph,
            laplacian_override: Some(l),
        })
    }

    pub fn laplacian(&self) -> Mat<T> {
        self.laplacian_override
            .clone()
            .unwrap_or_else(|| self.graph.laplacian())
    }
}

/// `M̃`: block `(leaders[c], c)` is `C`, everything else zero.
pub fn leader_selector<T: Scalar>(n: usize, leaders: &[usize], c: &Mat<T>) -> Mat<T> {
    let (d, q) = c.shape();
    let mut m = Mat::zeros(n * d, leaders.len() * q);
    for (col, &l) in leaders.iter().enumerate() {
        m.set_block(l * d, col * q, c);
    }
    m
}

fn check_graph_dim<T: Scalar>(g: &MatrixWeightedSignedGraph<T>, d: usize) -> Result<()> {
    if g.d() != d {
        return Err(Error::Dimension(format!(
            "graph weights are {}x{}, dynamics are {d}x{d}",
            g.d(),
            g.d()
        )));
    }
    Ok(())
}

/// `blockdiag(A) − blockdiag(BK)·L` for an explicit Laplacian `l`.
fn coupled<T: Scalar>(n: usize, a: &Mat<T>, bk: &Mat<T>, l: &Mat<T>) -> Mat<T> {
    let diag_a = Mat::repeat_diag(a, n);
    let diag_bk = Mat::repeat_diag(bk, n);
    &diag_a - &(&diag_bk * l)
}

pub fn assemble_fixed<T: Scalar>(
    g: &MatrixWeightedSignedGraph<T>,
    dynamics: &Dynamics<T>,
) -> Result<AugmentedSystem<T>> {
    assemble_network(&Network::new(g.clone()), dynamics)
}

/// Fixed-topology system using the network's Laplacian (override if present).
pub fn assemble_network<T: Scalar>(
    net: &Network<T>,
    dynamics: &Dynamics<T>,
) -> Result<AugmentedSystem<T>> {
    let g = &net.graph;
    check_graph_dim(g, dynamics.d())?;
    Ok(AugmentedSystem {
        l_tilde: coupled(g.n(), &dynamics.a, &dynamics.bk(), &net.laplacian()),
        m_tilde: leader_selector(g.n(), g.leaders(), &dynamics.c),
        variant: SystemVariant::Fixed,
        n: g.n(),
        d: g.d(),
    })
}

/// `diag(A_i) − [B_i·K·L_ij]`.
pub fn assemble_heterogeneous<T: Scalar>(
    net: &Network<T>,
    dynamics: &HeterogeneousDynamics<T>,
) -> Result<AugmentedSystem<T>> {
    let g = &net.graph;
    check_graph_dim(g, dynamics.d())?;
    if dynamics.n() != g.n() {
        return Err(Error::Dimension(format!(
            "{} per-node dynamics for {} nodes",
            dynamics.n(),
            g.n()
        )));
    }
    let (n, d) = (g.n(), g.d());
    let l = net.laplacian();
    let mut l_tilde = Mat::zeros(n * d, n * d);
    for (i, (a_i, b_i)) in dynamics.per_node.iter().enumerate() {
        let bk = b_i * &dynamics.k;
        l_tilde.set_block(i * d, i * d, a_i);
        for j in 0..n {
            let lij = l.block(i * d, j * d, d, d);
            if lij.is_zero() {
                continue;
            }
            l_tilde.add_block(i * d, j * d, &-&(&bk * &lij));
        }
    }
    Ok(AugmentedSystem {
        l_tilde,
        m_tilde: leader_selector(n, g.leaders(), &dynamics.c),
        variant: SystemVariant::Heterogeneous,
        n,
        d,
    })
}

/// Multiplier on `blockdiag(A)` in the union system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum UnionAFactor {
    /// Number of member graphs.
    #[default]
    #[serde(rename = "t")]
    MemberCount,
    #[serde(rename = "1")]
    One,
}

impl fmt::Display for UnionAFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnionAFactor::MemberCount => "t",
            UnionAFactor::One => "1",
        })
    }
}

impl FromStr for UnionAFactor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "t" | "T" => Ok(UnionAFactor::MemberCount),
            "1" => Ok(UnionAFactor::One),
            other => Err(format!(
                "unknown union A factor `{other}` (expected t or 1)"
            )),
        }
    }
}

/// `t·blockdiag(A) − blockdiag(BK)·L*` with `L*` the union Laplacian.
pub fn assemble_union<T: Scalar>(
    gs: &[MatrixWeightedSignedGraph<T>],
    dynamics: &Dynamics<T>,
    factor: UnionAFactor,
) -> Result<AugmentedSystem<T>> {
    let union = MatrixWeightedSignedGraph::union_graph(gs)?;
    check_graph_dim(&union, dynamics.d())?;
    let t = match factor {
        UnionAFactor::MemberCount => T::from_i64(gs.len() as i64),
        UnionAFactor::One => T::one(),
    };
    let n = union.n();
    Ok(AugmentedSystem {
        l_tilde: coupled(n, &dynamics.a.scale(&t), &dynamics.bk(), &union.laplacian()),
        m_tilde: leader_selector(n, union.leaders(), &dynamics.c),
        variant: SystemVariant::Union,
        n,
        d: union.d(),
    })
}

/// `L̃ᵀ` with the same `M̃`.
pub fn dualize<T: Scalar>(sys: &AugmentedSystem<T>) -> AugmentedSystem<T> {
    AugmentedSystem {
        l_tilde: sys.l_tilde.transpose(),
        m_tilde: sys.m_tilde.clone(),
        variant: SystemVariant::Dual,
        n: sys.n,
        d: sys.d,
    }
}

/// Member systems over a shared node set, leader set and input matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingFamily<T> {
    pub members: Vec<AugmentedSystem<T>>,
    pub source_graphs: Vec<MatrixWeightedSignedGraph<T>>,
}

impl<T: Scalar> SwitchingFamily<T> {
    pub fn assemble(gs: &[MatrixWeightedSignedGraph<T>], dynamics: &Dynamics<T>) -> Result<Self> {
        let first = gs.first().ok_or_else(|| {
            Error::Incompatible("switching family needs at least one graph".into())
        })?;
        for (idx, g) in gs.iter().enumerate().skip(1) {
            if !first.is_compatible(g) {
                return Err(Error::Incompatible(format!(
                    "member {} differs from member 1 in node count, dimension or leaders",
                    idx + 1
                )));
            }
        }
        let members = gs
            .iter()
            .map(|g| {
                assemble_fixed(g, dynamics).map(|mut s| {
                    s.variant = SystemVariant::SwitchingMember;
                    s
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            members,
            source_graphs: gs.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `P̃_π = P_π · blockdiag(C)`.
pub fn lifted_characteristic<T: Scalar>(
    pi: &CharacteristicMatrix<T>,
    c: &Mat<T>,
) -> Result<Mat<T>> {
    if c.rows() != pi.d {
        return Err(Error::Dimension(format!(
            "C has {} rows, partition blocks are {}x{}",
            c.rows(),
            pi.d,
            pi.d
        )));
    }
    Ok(&pi.p * &Mat::repeat_diag(c, pi.partition.card()))
}
