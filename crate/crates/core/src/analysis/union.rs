use crate::error::Result;
use crate::graph::MatrixWeightedSignedGraph;
use crate::linalg::Backend;
use crate::partition::{coarsest_ep, Partition};
use crate::system::{assemble_union, Dynamics, Network, SwitchingFamily, UnionAFactor};

use super::{
    ctrb, q_certificate, switching_ctrb, CertificateVariant, ControllabilityVerdict, TheoremStatus,
};

#[derive(Debug, Clone, PartialEq)]
pub struct UnionReport<T> {
    pub union_graph: MatrixWeightedSignedGraph<T>,
    pub union_verdict: ControllabilityVerdict<T>,
    pub switched_verdict: ControllabilityVerdict<T>,
    pub member_partitions: Vec<Partition>,
    pub member_certificates: Vec<bool>,
    /// Union controllable implies switched controllable.
    pub union_implies_switched: TheoremStatus,
    /// A certificate for every member plus a nontrivial member cell implies
    /// the union is uncontrollable.
    pub nontrivial_member_cell: TheoremStatus,
    /// Union uncontrollable while the switched system is controllable: no
    /// theorem decides this case.
    pub indeterminate: bool,
    pub a_factor: UnionAFactor,
}

pub fn union_analysis<B: Backend>(
    backend: &B,
    gs: &[MatrixWeightedSignedGraph<B::Scalar>],
    dynamics: &Dynamics<B::Scalar>,
    a_factor: UnionAFactor,
) -> Result<UnionReport<B::Scalar>> {
    let union_graph = MatrixWeightedSignedGraph::union_graph(gs)?;
    let union_verdict = ctrb(backend, &assemble_union(gs, dynamics, a_factor)?)?;
    let family = SwitchingFamily::assemble(gs, dynamics)?;
    let switched_verdict = switching_ctrb(backend, &family)?;

    let init = Partition::isolating(union_graph.n(), union_graph.leaders());
    let mut member_partitions = Vec::with_capacity(gs.len());
    let mut member_certificates = Vec::with_capacity(gs.len());
    for g in gs {
        let pi = coarsest_ep(backend, g, &init)?;
        let cert = q_certificate(
            backend,
            &Network::new(g.clone()),
            &pi,
            dynamics,
            CertificateVariant::Fixed,
        )?;
        member_certificates.push(cert.exists);
        member_partitions.push(pi);
    }

    let union_implies_switched =
        TheoremStatus::check(union_verdict.controllable, switched_verdict.controllable);
    let hypothesis = member_certificates.iter().all(|&e| e)
        && member_partitions.iter().any(Partition::has_nontrivial_cell);
    let nontrivial_member_cell = TheoremStatus::check(hypothesis, !union_verdict.controllable);
    let indeterminate = !union_verdict.controllable && switched_verdict.controllable;

    Ok(UnionReport {
        union_graph,
        union_verdict,
        switched_verdict,
        member_partitions,
        member_certificates,
        union_implies_switched,
        nontrivial_member_cell,
        indeterminate,
        a_factor,
    })
}
