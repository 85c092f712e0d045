use crate::error::Result;
use crate::linalg::Backend;
use crate::partition::{coarsest_ep, Partition};
use crate::system::{assemble_network, dualize, AugmentedSystem, Dynamics, Network};

use super::{ctrb, q_certificate, CertificateVariant, ControllabilityVerdict, TheoremStatus};

#[derive(Debug, Clone, PartialEq)]
pub struct ObservabilityReport<T> {
    pub observable: bool,
    /// Controllability of the dual system `(L̃ᵀ, M̃)`.
    pub dual: ControllabilityVerdict<T>,
    pub partition_used: Partition,
    pub certificate_exists: bool,
    pub nontrivial_cells: bool,
    /// Certificate plus nontrivial cell (with isolated outputs) implies unobservable.
    pub nontrivial_cell_unobservable: TheoremStatus,
    pub first_order: bool,
    /// First-order networks only: nontrivial cells imply uncontrollable and unobservable.
    pub first_order_joint: Option<FirstOrderJoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstOrderJoint {
    pub status: TheoremStatus,
    pub controllable: bool,
    pub observable: bool,
}

/// Observability of `(L̃, M̃ᵀ)` as controllability of the dual.
pub fn observability_of<B: Backend>(
    backend: &B,
    sys: &AugmentedSystem<B::Scalar>,
) -> Result<ControllabilityVerdict<B::Scalar>> {
    ctrb(backend, &dualize(sys))
}

/// Outputs are read at the leader nodes through `Cᵀ`.
pub fn observability<B: Backend>(
    backend: &B,
    net: &Network<B::Scalar>,
    dynamics: &Dynamics<B::Scalar>,
    pi: Option<&Partition>,
) -> Result<ObservabilityReport<B::Scalar>> {
    let g = &net.graph;
    let pi = match pi {
        Some(p) => p.clone(),
        None => coarsest_ep(backend, g, &Partition::isolating(g.n(), g.leaders()))?,
    };
    let sys = assemble_network(net, dynamics)?;
    let dual = observability_of(backend, &sys)?;
    let cert = q_certificate(backend, net, &pi, dynamics, CertificateVariant::Dual)?;
    let nontrivial_cells = pi.has_nontrivial_cell();
    let hypothesis = cert.exists && pi.isolates(g.leaders()) && nontrivial_cells;
    let first_order = dynamics.is_first_order();
    let first_order_joint = if first_order {
        let controllable = ctrb(backend, &sys)?.controllable;
        Some(FirstOrderJoint {
            status: TheoremStatus::check(
                pi.isolates(g.leaders()) && nontrivial_cells,
                !controllable && !dual.controllable,
            ),
            controllable,
            observable: dual.controllable,
        })
    } else {
        None
    };
    Ok(ObservabilityReport {
        observable: dual.controllable,
        nontrivial_cell_unobservable: TheoremStatus::check(hypothesis, !dual.controllable),
        dual,
        partition_used: pi,
        certificate_exists: cert.exists,
        nontrivial_cells,
        first_order,
        first_order_joint,
    })
}
