use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Backend, Mat};
use crate::partition::{characteristic_matrix, is_equitable, quotient_of_matrix, Partition};
use crate::system::{
    assemble_heterogeneous, assemble_network, dualize, lifted_characteristic, Dynamics,
    HeterogeneousDynamics, Network,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateVariant {
    Fixed,
    Heterogeneous,
    Dual,
}

/// Witness `Q` with `L̃·P̃_π = P̃_π·Q`, built block by block.
///
/// `q1_blocks` holds one block for the fixed and dual variants and one per
/// cell for the heterogeneous variant. `q` is the assembled
/// `blockdiag(Q1) − [Q_ij]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QCertificate<T> {
    pub variant: CertificateVariant,
    pub exists: bool,
    pub q1_blocks: Vec<Mat<T>>,
    pub qij_blocks: Vec<Vec<Mat<T>>>,
    pub q: Option<Mat<T>>,
    pub failing_equation: Option<String>,
}

impl<T> QCertificate<T> {
    fn missing(variant: CertificateVariant, equation: String) -> Self {
        Self {
            variant,
            exists: false,
            q1_blocks: Vec::new(),
            qij_blocks: Vec::new(),
            q: None,
            failing_equation: Some(equation),
        }
    }
}

/// Quotient of `l` over `pi`, failing when `pi` is not equitable for it.
fn quotient<B: Backend>(
    backend: &B,
    net: &Network<B::Scalar>,
    l: &Mat<B::Scalar>,
    pi: &Partition,
) -> Result<Mat<B::Scalar>> {
    let witness = is_equitable(backend, &net.graph, pi)?;
    if let Some(v) = witness.violation {
        return Err(Error::Precondition(format!(
            "partition {pi} is not equitable: {v}"
        )));
    }
    quotient_of_matrix(backend, l, pi, net.graph.d()).ok_or_else(|| {
        Error::Precondition(format!(
            "partition {pi} is not invariant under the supplied Laplacian"
        ))
    })
}

/// Existence certificate for a homogeneous system or its dual.
pub fn q_certificate<B: Backend>(
    backend: &B,
    net: &Network<B::Scalar>,
    pi: &Partition,
    dynamics: &Dynamics<B::Scalar>,
    variant: CertificateVariant,
) -> Result<QCertificate<B::Scalar>> {
    let d = net.graph.d();
    let l = net.laplacian();
    match variant {
        CertificateVariant::Fixed => {
            let lq = quotient(backend, net, &l, pi)?;
            let bk = dynamics.bk();
            let k = pi.card();
            let sys = assemble_network(net, dynamics)?;
            solve_blocks(
                backend,
                variant,
                &dynamics.c,
                &vec![dynamics.a.clone(); k],
                |i, j| &bk * &lq.block(i * d, j * d, d, d),
                "A·C = C·Q1",
                "B·K·Lπ[i,j]·C = C·Q[i,j]",
                pi,
                &sys.l_tilde,
            )
        }
        CertificateVariant::Dual => {
            let lt = l.transpose();
            let lq = quotient(backend, net, &lt, pi)?;
            let bkt = dynamics.bk().transpose();
            let k = pi.card();
            let sys = dualize(&assemble_network(net, dynamics)?);
            solve_blocks(
                backend,
                variant,
                &dynamics.c,
                &vec![dynamics.a.transpose(); k],
                |i, j| &lq.block(i * d, j * d, d, d) * &bkt,
                "Aᵀ·C = C·Q1*",
                "Lπ[i,j]·Kᵀ·Bᵀ·C = C·Q*[i,j]",
                pi,
                &sys.l_tilde,
            )
        }
        CertificateVariant::Heterogeneous => Err(Error::Precondition(
            "heterogeneous certificates need per-node dynamics".into(),
        )),
    }
}

/// Certificate for per-node dynamics; requires `(A_i, B_i)` constant on each cell.
pub fn q_certificate_heterogeneous<B: Backend>(
    backend: &B,
    net: &Network<B::Scalar>,
    pi: &Partition,
    dynamics: &HeterogeneousDynamics<B::Scalar>,
) -> Result<QCertificate<B::Scalar>> {
    let d = net.graph.d();
    if dynamics.n() != pi.n() {
        return Err(Error::Dimension(format!(
            "{} per-node dynamics for {} nodes",
            dynamics.n(),
            pi.n()
        )));
    }
    for cell in pi.cells() {
        let (a0, b0) = &dynamics.per_node[cell[0]];
        for &v in &cell[1..] {
            let (a, b) = &dynamics.per_node[v];
            if !backend.mat_eq(a, a0) || !backend.mat_eq(b, b0) {
                return Err(Error::Precondition(format!(
                    "nodes {} and {} share a cell but have different dynamics",
                    cell[0] + 1,
                    v + 1
                )));
            }
        }
    }
    let lq = quotient(backend, net, &net.laplacian(), pi)?;
    let reps: Vec<usize> = pi.cells().iter().map(|c| c[0]).collect();
    let a_cells: Vec<_> = reps
        .iter()
        .map(|&r| dynamics.per_node[r].0.clone())
        .collect();
    let bk_cells: Vec<_> = reps
        .iter()
        .map(|&r| &dynamics.per_node[r].1 * &dynamics.k)
        .collect();
    let sys = assemble_heterogeneous(net, dynamics)?;
    solve_blocks(
        backend,
        CertificateVariant::Heterogeneous,
        &dynamics.c,
        &a_cells,
        |i, j| &bk_cells[i] * &lq.block(i * d, j * d, d, d),
        "A_i·C = C·Q1'[i]",
        "B_i·K·Lπ[i,j]·C = C·Q'[i,j]",
        pi,
        &sys.l_tilde,
    )
}

/// Solves `A_i·C = C·Q1_i` and `coupling(i, j)·C = C·Q_ij`, assembles `Q`
/// and re-checks `L̃·P̃_π = P̃_π·Q`.
#[allow(clippy::too_many_arguments)]
fn solve_blocks<B: Backend>(
    backend: &B,
    variant: CertificateVariant,
    c: &Mat<B::Scalar>,
    a_cells: &[Mat<B::Scalar>],
    coupling: impl Fn(usize, usize) -> Mat<B::Scalar>,
    eq1: &str,
    eq2: &str,
    pi: &Partition,
    l_tilde: &Mat<B::Scalar>,
) -> Result<QCertificate<B::Scalar>> {
    let k = pi.card();
    let q = c.cols();
    let shared_q1 = variant != CertificateVariant::Heterogeneous;
    let mut q1_blocks = Vec::new();
    for (i, a) in a_cells.iter().enumerate() {
        if shared_q1 && i > 0 {
            break;
        }
        match backend.solve_right(c, &(a * c)) {
            Some(x) => q1_blocks.push(x),
            None => {
                let label = if shared_q1 {
                    eq1.to_string()
                } else {
                    eq1.replace("[i]", &format!("[{}]", i + 1))
                };
                return Ok(QCertificate::missing(variant, label));
            }
        }
    }
    let mut qij_blocks = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let rhs = &coupling(i, j) * c;
            match backend.solve_right(c, &rhs) {
                Some(x) => row.push(x),
                None => {
                    let label = eq2.replace("[i,j]", &format!("[{},{}]", i + 1, j + 1));
                    return Ok(QCertificate::missing(variant, label));
                }
            }
        }
        qij_blocks.push(row);
    }
    let mut big_q = Mat::zeros(k * q, k * q);
    for i in 0..k {
        let q1 = if shared_q1 {
            &q1_blocks[0]
        } else {
            &q1_blocks[i]
        };
        big_q.add_block(i * q, i * q, q1);
        for (j, qij) in qij_blocks[i].iter().enumerate() {
            big_q.add_block(i * q, j * q, &-qij);
        }
    }
    let p_lift = lifted_characteristic(&characteristic_matrix::<B::Scalar>(pi, c.rows()), c)?;
    let lhs = l_tilde * &p_lift;
    let rhs = &p_lift * &big_q;
    if !backend.mat_eq(&lhs, &rhs) {
        return Ok(QCertificate::missing(variant, "L̃·P̃π = P̃π·Q".into()));
    }
    Ok(QCertificate {
        variant,
        exists: true,
        q1_blocks,
        qij_blocks,
        q: Some(big_q),
        failing_equation: None,
    })
}

/// `C` square with full rank.
pub(crate) fn is_complete_input<B: Backend>(backend: &B, c: &Mat<B::Scalar>) -> bool {
    c.is_square() && backend.rank(c) == c.rows()
}
