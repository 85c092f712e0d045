use crate::error::{Error, Result};
use crate::graph::MatrixWeightedSignedGraph;
use crate::linalg::{Backend, Mat, SubspaceBasis};
use crate::partition::{characteristic_matrix, coarsest_common_ep, coarsest_ep, Partition};
use crate::system::{
    assemble_heterogeneous, assemble_network, lifted_characteristic, Dynamics,
    HeterogeneousDynamics, Network, SwitchingFamily,
};

use super::certificate::{is_complete_input, q_certificate, q_certificate_heterogeneous};
use super::{ctrb, switching_ctrb, CertificateVariant, ControllabilityVerdict, QCertificate};

/// Invariant-subspace bound for a fixed-topology system.
///
/// `bound = rank(P̃_π)`. The bound is `applicable` when a certificate exists
/// and every leader is a singleton cell; then the controllable subspace
/// must lie in `im(P̃_π)` and any nontrivial cell proves the system
/// uncontrollable.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub bound: usize,
    pub achieved_dim: usize,
    pub partition_used: Partition,
    pub tight: bool,
    pub applicable: bool,
    pub leaders_isolated: bool,
    /// Every basis vector of the controllable subspace lies in `im(P̃_π)`.
    pub contained: bool,
    /// Applicable but `contained` fails or `achieved_dim > bound`.
    pub violated: bool,
    pub nontrivial_cells: bool,
    pub uncontrollable_by_partition: bool,
    /// `C` is square and invertible, so a certificate always exists.
    pub complete_control_input: bool,
    pub certificate: QCertificate<T>,
    pub verdict: ControllabilityVerdict<T>,
}

fn contained_in<B: Backend>(
    backend: &B,
    basis: &SubspaceBasis<B::Scalar>,
    p_lift: &Mat<B::Scalar>,
) -> bool {
    let image = backend.column_space(p_lift);
    backend.is_subspace_of(basis, &image)
}

fn finish<B: Backend>(
    backend: &B,
    pi: Partition,
    leaders: &[usize],
    c: &Mat<B::Scalar>,
    certificate: QCertificate<B::Scalar>,
    verdict: ControllabilityVerdict<B::Scalar>,
) -> Result<BoundReport<B::Scalar>> {
    let p_lift = lifted_characteristic(&characteristic_matrix(&pi, c.rows()), c)?;
    let bound = backend.rank(&p_lift);
    let leaders_isolated = pi.isolates(leaders);
    let applicable = certificate.exists && leaders_isolated;
    let contained = contained_in(backend, &verdict.basis, &p_lift);
    let achieved_dim = verdict.subspace_dim;
    let nontrivial_cells = pi.has_nontrivial_cell();
    Ok(BoundReport {
        bound,
        achieved_dim,
        tight: achieved_dim == bound,
        applicable,
        leaders_isolated,
        contained,
        violated: applicable && (!contained || achieved_dim > bound),
        nontrivial_cells,
        uncontrollable_by_partition: applicable && nontrivial_cells,
        complete_control_input: is_complete_input(backend, c),
        partition_used: pi,
        certificate,
        verdict,
    })
}

/// Bound for shared dynamics. Without `pi`, uses the coarsest equitable
/// partition that isolates every leader.
pub fn theorem1_bound<B: Backend>(
    backend: &B,
    net: &Network<B::Scalar>,
    dynamics: &Dynamics<B::Scalar>,
    pi: Option<&Partition>,
) -> Result<BoundReport<B::Scalar>> {
    let g = &net.graph;
    let pi = match pi {
        Some(p) => p.clone(),
        None => coarsest_ep(backend, g, &Partition::isolating(g.n(), g.leaders()))?,
    };
    let certificate = q_certificate(backend, net, &pi, dynamics, CertificateVariant::Fixed)?;
    let verdict = ctrb(backend, &assemble_network(net, dynamics)?)?;
    finish(backend, pi, g.leaders(), &dynamics.c, certificate, verdict)
}

/// Leaders as singletons, followers grouped by equal `(A_i, B_i)`.
pub fn heterogeneous_init<B: Backend>(
    backend: &B,
    g: &MatrixWeightedSignedGraph<B::Scalar>,
    dynamics: &HeterogeneousDynamics<B::Scalar>,
) -> Partition {
    let n = g.n();
    let mut labels = vec![0; n];
    let mut reps: Vec<usize> = Vec::new();
    for (v, label) in labels.iter_mut().enumerate() {
        if g.is_leader(v) {
            *label = n + v;
            continue;
        }
        let (a, b) = &dynamics.per_node[v];
        let found = reps.iter().position(|&r| {
            let (ra, rb) = &dynamics.per_node[r];
            backend.mat_eq(a, ra) && backend.mat_eq(b, rb)
        });
        *label = match found {
            Some(idx) => idx,
            None => {
                reps.push(v);
                reps.len() - 1
            }
        };
    }
    Partition::from_labels(&labels)
}

/// Bound for per-node dynamics; the default partition also separates nodes
/// with different `(A_i, B_i)`.
pub fn theorem3_bound<B: Backend>(
    backend: &B,
    net: &Network<B::Scalar>,
    dynamics: &HeterogeneousDynamics<B::Scalar>,
    pi: Option<&Partition>,
) -> Result<BoundReport<B::Scalar>> {
    let g = &net.graph;
    if dynamics.n() != g.n() {
        return Err(Error::Dimension(format!(
            "{} per-node dynamics for {} nodes",
            dynamics.n(),
            g.n()
        )));
    }
    let pi = match pi {
        Some(p) => p.clone(),
        None => coarsest_ep(backend, g, &heterogeneous_init(backend, g, dynamics))?,
    };
    let certificate = q_certificate_heterogeneous(backend, net, &pi, dynamics)?;
    let verdict = ctrb(backend, &assemble_heterogeneous(net, dynamics)?)?;
    finish(backend, pi, g.leaders(), &dynamics.c, certificate, verdict)
}

/// Join bound for a switching family, with a second bound from the
/// coarsest partition that is equitable for every member at once.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingBoundReport<T> {
    pub member_partitions: Vec<Partition>,
    /// Finest common coarsening of the member partitions.
    pub join: Partition,
    /// `card(join)·d`.
    pub bound: usize,
    pub achieved_dim: usize,
    pub tight: bool,
    /// Every member has a certificate for its partition and isolates the leaders.
    pub applicable: bool,
    pub violated: bool,
    pub certificates_exist: Vec<bool>,
    pub common_partition: Partition,
    /// `rank(P̃_π)` for the common partition.
    pub common_bound: usize,
    pub common_applicable: bool,
    pub common_contained: bool,
    pub verdict: ControllabilityVerdict<T>,
}

pub fn theorem2_bound<B: Backend>(
    backend: &B,
    family: &SwitchingFamily<B::Scalar>,
    dynamics: &Dynamics<B::Scalar>,
    partitions: Option<&[Partition]>,
) -> Result<SwitchingBoundReport<B::Scalar>> {
    let graphs = &family.source_graphs;
    let first = graphs
        .first()
        .ok_or_else(|| Error::Precondition("switching family has no members".into()))?;
    let (n, d, leaders) = (first.n(), first.d(), first.leaders().to_vec());
    let init = Partition::isolating(n, &leaders);
    let member_partitions = match partitions {
        Some(ps) => {
            if ps.len() != graphs.len() {
                return Err(Error::Precondition(format!(
                    "{} partitions for {} members",
                    ps.len(),
                    graphs.len()
                )));
            }
            ps.to_vec()
        }
        None => graphs
            .iter()
            .map(|g| coarsest_ep(backend, g, &init))
            .collect::<Result<_>>()?,
    };
    let mut certificates_exist = Vec::with_capacity(graphs.len());
    for (g, pi) in graphs.iter().zip(&member_partitions) {
        let net = Network::new(g.clone());
        let cert = q_certificate(backend, &net, pi, dynamics, CertificateVariant::Fixed)?;
        certificates_exist.push(cert.exists);
    }
    let mut join = member_partitions[0].clone();
    for pi in &member_partitions[1..] {
        join = join.join(pi)?;
    }
    let verdict = switching_ctrb(backend, family)?;
    let bound = join.card() * d;
    let achieved_dim = verdict.subspace_dim;
    let applicable = certificates_exist.iter().all(|&e| e)
        && member_partitions.iter().all(|p| p.isolates(&leaders));

    let common_partition = coarsest_common_ep(backend, graphs, &init)?;
    let mut common_applicable = true;
    for g in graphs {
        let net = Network::new(g.clone());
        let cert = q_certificate(
            backend,
            &net,
            &common_partition,
            dynamics,
            CertificateVariant::Fixed,
        )?;
        common_applicable &= cert.exists;
    }
    let p_lift = lifted_characteristic(&characteristic_matrix(&common_partition, d), &dynamics.c)?;
    let common_bound = backend.rank(&p_lift);
    let common_contained = contained_in(backend, &verdict.basis, &p_lift);

    Ok(SwitchingBoundReport {
        member_partitions,
        bound,
        achieved_dim,
        tight: achieved_dim == bound,
        applicable,
        violated: applicable && achieved_dim > bound,
        certificates_exist,
        join,
        common_partition,
        common_bound,
        common_applicable,
        common_contained,
        verdict,
    })
}
