//! Dense linear algebra over two interchangeable scalar backends.
//!
//! [`ExactBackend`] works over arbitrary-precision rationals and gives
//! tolerance-free ranks; [`FloatBackend`] works over `f64` and decides
//! numerical rank from singular values. Both expose the same [`Backend`]
//! surface, so every analysis in the crate is written once and instantiated
//! per backend.

mod exact;
mod float;
mod mat;
mod scalar;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use exact::ExactBackend;
pub use float::FloatBackend;
pub use mat::Mat;
pub use scalar::{ratio, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Float,
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::Exact => "exact",
            BackendKind::Float => "float",
        })
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(BackendKind::Exact),
            "float" => Ok(BackendKind::Float),
            other => Err(format!(
                "unknown backend `{other}` (expected exact or float)"
            )),
        }
    }
}

/// Linearly independent spanning set of a subspace of `T^ambient_dim`.
///
/// The exact backend keeps vectors in reduced row-echelon form (each vector
/// has a leading one at a pivot no other vector touches); the float backend
/// keeps them orthonormal.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<T> {
    ambient_dim: usize,
    vectors: Vec<Vec<T>>,
}

impl<T: Scalar> SubspaceBasis<T> {
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    /// Caller guarantees independence; backends construct bases through this.
    pub(crate) fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<T>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        Self {
            ambient_dim,
            vectors,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    pub(crate) fn vectors_mut(&mut self) -> &mut Vec<Vec<T>> {
        &mut self.vectors
    }

    /// Basis vectors as the columns of an `ambient_dim × dim` matrix.
    pub fn to_matrix(&self) -> Mat<T> {
        Mat::from_columns(self.ambient_dim, &self.vectors)
    }
}

/// Scalar backend: owns the tolerance policy and the rank-revealing kernels.
pub trait Backend: Clone + fmt::Debug + Send + Sync {
    type Scalar: Scalar;

    fn kind(&self) -> BackendKind;

    fn rank(&self, m: &Mat<Self::Scalar>) -> usize;

    /// Basis of the span of the columns of `m`; its length equals `rank(m)`.
    fn column_space(&self, m: &Mat<Self::Scalar>) -> SubspaceBasis<Self::Scalar>;

    /// Some `X` with `c·X = rhs`, or `None` when a column of `rhs` lies outside `im(c)`.
    fn solve_right(
        &self,
        c: &Mat<Self::Scalar>,
        rhs: &Mat<Self::Scalar>,
    ) -> Option<Mat<Self::Scalar>>;

    /// Adds the candidates to `basis` and returns the new directions that
    /// were appended (empty when every candidate was already in the span).
    fn extend_basis(
        &self,
        basis: &mut SubspaceBasis<Self::Scalar>,
        candidates: &[Vec<Self::Scalar>],
    ) -> Vec<Vec<Self::Scalar>>;

    /// Matrix equality: exact, or entrywise within tolerance on floats.
    fn mat_eq(&self, a: &Mat<Self::Scalar>, b: &Mat<Self::Scalar>) -> bool;

    fn contains(&self, basis: &SubspaceBasis<Self::Scalar>, v: &[Self::Scalar]) -> bool {
        let mut probe = basis.clone();
        self.extend_basis(&mut probe, &[v.to_vec()]).is_empty()
    }

    /// Whether `sub ⊆ sup`, checked vector by vector.
    fn is_subspace_of(
        &self,
        sub: &SubspaceBasis<Self::Scalar>,
        sup: &SubspaceBasis<Self::Scalar>,
    ) -> bool {
        sub.vectors().iter().all(|v| self.contains(sup, v))
    }
}

/// Smallest subspace containing `seed` and invariant under every map.
///
/// Maps are applied round-robin to the directions added in the previous
/// round only, so the loop runs at most `ambient_dim` rounds.
pub fn invariant_image_fixpoint<B: Backend>(
    backend: &B,
    maps: &[Mat<B::Scalar>],
    seed: &SubspaceBasis<B::Scalar>,
) -> Result<SubspaceBasis<B::Scalar>, LinalgError> {
    let n = seed.ambient_dim();
    for (idx, m) in maps.iter().enumerate() {
        if m.shape() != (n, n) {
            return Err(LinalgError::Dimension(format!(
                "map {idx} is {}x{}, seed ambient dimension is {n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    // images are scaled by the map norm so float thresholds are relative to operator size
    let scales: Vec<B::Scalar> = maps
        .iter()
        .map(|m| {
            let norm = m.frobenius_norm();
            match backend.kind() {
                BackendKind::Float if norm > 0.0 => B::Scalar::from_f64(1.0 / norm),
                _ => B::Scalar::one(),
            }
        })
        .collect();

    let mut basis = SubspaceBasis::empty(n);
    let mut frontier = backend.extend_basis(&mut basis, seed.vectors());
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        debug_assert!(rounds <= n + 1, "fixpoint failed to stabilise");
        let mut images = Vec::with_capacity(maps.len() * frontier.len());
        for (m, s) in maps.iter().zip(&scales) {
            for v in &frontier {
                let img: Vec<B::Scalar> = m.mul_vec(v).into_iter().map(|x| x * s.clone()).collect();
                images.push(img);
            }
        }
        frontier = backend.extend_basis(&mut basis, &images);
    }
    Ok(basis)
}

/// `rank(m)` over any backend, re-exported as a free function for symmetry
/// with [`invariant_image_fixpoint`].
pub fn rank<B: Backend>(backend: &B, m: &Mat<B::Scalar>) -> usize {
    backend.rank(m)
}

pub fn column_space<B: Backend>(backend: &B, m: &Mat<B::Scalar>) -> SubspaceBasis<B::Scalar> {
    backend.column_space(m)
}

pub fn solve_right<B: Backend>(
    backend: &B,
    c: &Mat<B::Scalar>,
    rhs: &Mat<B::Scalar>,
) -> Option<Mat<B::Scalar>> {
    backend.solve_right(c, rhs)
}
