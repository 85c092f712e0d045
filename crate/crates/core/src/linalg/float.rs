use nalgebra::DMatrix;

use super::{Backend, BackendKind, Mat, SubspaceBasis};

/// `f64` backend. Numerical rank counts singular values above
/// `rtol · σ_max`, where `rtol` defaults to `max(rows, cols) · ε`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FloatBackend {
    rtol: Option<f64>,
}

impl FloatBackend {
    pub fn with_rtol(rtol: f64) -> Self {
        Self { rtol: Some(rtol) }
    }

    pub fn rtol(&self, rows: usize, cols: usize) -> f64 {
        self.rtol
            .unwrap_or_else(|| rows.max(cols).max(1) as f64 * f64::EPSILON)
    }

    fn to_na(m: &Mat<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
    }

    fn from_na(m: &DMatrix<f64>) -> Mat<f64> {
        Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }

    /// Orthonormal directions `R·v_i / σ_i` for the singular values that clear
    /// `threshold`, largest first.
    ///
    /// Left vectors are rebuilt from the right ones: on rank-deficient inputs
    /// the `U` factor can mix in rows that are numerically zero in `m`.
    fn range_vectors(m: &DMatrix<f64>, threshold: f64) -> Vec<Vec<f64>> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Vec::new();
        }
        let svd = m.clone().svd(false, true);
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let mut out: Vec<Vec<f64>> = Vec::new();
        for i in order {
            let sigma = svd.singular_values[i];
            if sigma <= threshold {
                break;
            }
            let mut u: Vec<f64> = (m * v_t.row(i).transpose())
                .iter()
                .map(|x| x / sigma)
                .collect();
            project_out(&mut u, &out);
            let norm = dot(&u, &u).sqrt();
            if norm > 0.5 {
                u.iter_mut().for_each(|x| *x /= norm);
                out.push(u);
            }
        }
        out
    }

    fn sigma_max(m: &DMatrix<f64>) -> f64 {
        if m.nrows() == 0 || m.ncols() == 0 {
            return 0.0;
        }
        m.singular_values().iter().copied().fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

impl Backend for FloatBackend {
    type Scalar = f64;

    fn kind(&self) -> BackendKind {
        BackendKind::Float
    }

    fn rank(&self, m: &Mat<f64>) -> usize {
        let na = Self::to_na(m);
        if na.is_empty() {
            return 0;
        }
        let sv = na.singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        if smax == 0.0 {
            return 0;
        }
        let tau = self.rtol(m.rows(), m.cols()) * smax;
        sv.iter().filter(|&&s| s > tau).count()
    }

    fn column_space(&self, m: &Mat<f64>) -> SubspaceBasis<f64> {
        let na = Self::to_na(m);
        let smax = Self::sigma_max(&na);
        if smax == 0.0 {
            return SubspaceBasis::empty(m.rows());
        }
        let tau = self.rtol(m.rows(), m.cols()) * smax;
        SubspaceBasis::from_vectors(m.rows(), Self::range_vectors(&na, tau))
    }

    fn solve_right(&self, c: &Mat<f64>, rhs: &Mat<f64>) -> Option<Mat<f64>> {
        assert_eq!(c.rows(), rhs.rows(), "solve_right row mismatch");
        if c.cols() == 0 {
            return rhs.is_zero().then(|| Mat::zeros(0, rhs.cols()));
        }
        let na = Self::to_na(c);
        let smax = Self::sigma_max(&na);
        let tol = self.rtol(c.rows(), c.cols());
        let x = if smax == 0.0 {
            DMatrix::zeros(c.cols(), rhs.cols())
        } else {
            na.clone()
                .svd(true, true)
                .solve(&Self::to_na(rhs), tol * smax)
                .ok()?
        };
        let residual = (&na * &x - Self::to_na(rhs)).norm();
        let scale = smax * x.norm() + rhs.frobenius_norm();
        (residual <= tol * scale).then(|| Self::from_na(&x))
    }

    fn extend_basis(
        &self,
        basis: &mut SubspaceBasis<f64>,
        candidates: &[Vec<f64>],
    ) -> Vec<Vec<f64>> {
        if candidates.is_empty() {
            return Vec::new();
        }
        let n = basis.ambient_dim();
        let scale = candidates
            .iter()
            .map(|v| dot(v, v).sqrt())
            .fold(1.0_f64, f64::max);
        let residual: Vec<Vec<f64>> = candidates
            .iter()
            .map(|v| {
                let mut r = v.clone();
                project_out(&mut r, basis.vectors());
                r
            })
            .collect();
        let r = DMatrix::from_fn(n, residual.len(), |i, j| residual[j][i]);
        let tau = self.rtol(n, basis.dim() + candidates.len()) * scale;
        let room = n - basis.dim();
        let mut added = Vec::new();
        for mut u in Self::range_vectors(&r, tau).into_iter().take(room) {
            project_out(&mut u, basis.vectors());
            let norm = dot(&u, &u).sqrt();
            if norm <= 0.5 {
                continue;
            }
            u.iter_mut().for_each(|x| *x /= norm);
            basis.vectors_mut().push(u.clone());
            added.push(u);
        }
        added
    }

    fn mat_eq(&self, a: &Mat<f64>, b: &Mat<f64>) -> bool {
        if a.shape() != b.shape() {
            return false;
        }
        let tau = self.rtol(a.rows(), a.cols());
        let scale = 1.0 + a.max_abs().max(b.max_abs());
        (0..a.rows()).all(|r| {
            a.row(r)
                .iter()
                .zip(b.row(r))
                .all(|(x, y)| (x - y).abs() <= tau * scale)
        })
    }
}
