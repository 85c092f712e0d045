//! Controllability and observability verdicts, invariant-subspace bounds
//! and the implications between fixed, switched and union systems.

mod bounds;
mod certificate;
mod observability;
mod union;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{invariant_image_fixpoint, Backend, Mat, SubspaceBasis};
use crate::system::{AugmentedSystem, SwitchingFamily};

pub use bounds::{
    heterogeneous_init, theorem1_bound, theorem2_bound, theorem3_bound, BoundReport,
    SwitchingBoundReport,
};
pub use certificate::{
    q_certificate, q_certificate_heterogeneous, CertificateVariant, QCertificate,
};
pub use observability::{observability, observability_of, FirstOrderJoint, ObservabilityReport};
pub use union::{union_analysis, UnionReport};

/// Outcome of a theorem whose hypothesis may or may not hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremStatus {
    /// Hypothesis holds and the conclusion was confirmed numerically.
    Holds,
    /// Hypothesis holds but the computed result contradicts the conclusion.
    Violated,
    NotApplicable,
}

impl TheoremStatus {
    fn check(applicable: bool, conclusion: bool) -> Self {
        match (applicable, conclusion) {
            (false, _) => TheoremStatus::NotApplicable,
            (true, true) => TheoremStatus::Holds,
            (true, false) => TheoremStatus::Violated,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllabilityVerdict<T> {
    pub controllable: bool,
    pub subspace_dim: usize,
    pub ambient_dim: usize,
    /// Basis of the controllable subspace.
    pub basis: SubspaceBasis<T>,
}

impl<T: crate::linalg::Scalar> ControllabilityVerdict<T> {
    fn from_basis(basis: SubspaceBasis<T>) -> Self {
        Self {
            controllable: basis.is_full(),
            subspace_dim: basis.dim(),
            ambient_dim: basis.ambient_dim(),
            basis,
        }
    }
}

/// Smallest `L̃`-invariant subspace containing `im(M̃)`.
pub fn ctrb<B: Backend>(
    backend: &B,
    sys: &AugmentedSystem<B::Scalar>,
) -> Result<ControllabilityVerdict<B::Scalar>> {
    check_system(sys)?;
    let seed = backend.column_space(&sys.m_tilde);
    let basis = invariant_image_fixpoint(backend, std::slice::from_ref(&sys.l_tilde), &seed)?;
    Ok(ControllabilityVerdict::from_basis(basis))
}

/// Smallest subspace containing `im(M̃)` and invariant under every member's `L̃`.
pub fn switching_ctrb<B: Backend>(
    backend: &B,
    family: &SwitchingFamily<B::Scalar>,
) -> Result<ControllabilityVerdict<B::Scalar>> {
    let first = family
        .members
        .first()
        .ok_or_else(|| Error::Precondition("switching family has no members".into()))?;
    for m in &family.members {
        check_system(m)?;
        if m.m_tilde != first.m_tilde {
            return Err(Error::Incompatible(
                "members disagree on the input matrix".into(),
            ));
        }
    }
    let maps: Vec<Mat<B::Scalar>> = family.members.iter().map(|m| m.l_tilde.clone()).collect();
    let seed = backend.column_space(&first.m_tilde);
    let basis = invariant_image_fixpoint(backend, &maps, &seed)?;
    Ok(ControllabilityVerdict::from_basis(basis))
}

/// `[M̃, L̃·M̃, …, L̃^{dn−1}·M̃]`, for cross-checks on small systems.
pub fn kalman_matrix<T: crate::linalg::Scalar>(sys: &AugmentedSystem<T>) -> Mat<T> {
    let dn = sys.l_tilde.rows();
    let mut blocks = Vec::with_capacity(dn);
    let mut cur = sys.m_tilde.clone();
    for _ in 0..dn {
        let next = &sys.l_tilde * &cur;
        blocks.push(cur);
        cur = next;
    }
    let refs: Vec<&Mat<T>> = blocks.iter().collect();
    Mat::hstack(&refs)
}

fn check_system<T: crate::linalg::Scalar>(sys: &AugmentedSystem<T>) -> Result<()> {
    let dn = sys.n * sys.d;
    if sys.l_tilde.shape() != (dn, dn) || sys.m_tilde.rows() != dn {
        return Err(Error::Dimension(format!(
            "L̃ is {}x{} and M̃ has {} rows, expected {dn}",
            sys.l_tilde.rows(),
            sys.l_tilde.cols(),
            sys.m_tilde.rows()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
