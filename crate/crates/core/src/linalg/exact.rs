use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Backend, BackendKind, Mat, SubspaceBasis};

/// Lossless backend over arbitrary-precision rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExactBackend;

impl ExactBackend {
    /// Rank by fraction-free (Bareiss) elimination on an integer copy of `m`.
    fn bareiss_rank(m: &Mat<BigRational>) -> usize {
        let mut a = integer_rows(m);
        let rows = a.len();
        let cols = m.cols();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let (head, tail) = a.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                for j in c + 1..cols {
                    let num = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                    row[j] = num / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }
}

/// Scales every row by the lcm of its denominators.
fn integer_rows(m: &Mat<BigRational>) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect()
}

/// In-place reduced row-echelon form; returns the pivot columns.
pub(crate) fn rref(a: &mut Mat<BigRational>, max_pivot_col: usize) -> Vec<usize> {
    let rows = a.rows();
    let cols = a.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..max_pivot_col.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = &a[(i, j)] - &f * &a[(r, j)];
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn leading_index(v: &[BigRational]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl Backend for ExactBackend {
    type Scalar = BigRational;

    fn kind(&self) -> BackendKind {
        BackendKind::Exact
    }

    fn rank(&self, m: &Mat<BigRational>) -> usize {
        Self::bareiss_rank(m)
    }

    fn column_space(&self, m: &Mat<BigRational>) -> SubspaceBasis<BigRational> {
        let mut t = m.transpose();
        let width = t.cols();
        let pivots = rref(&mut t, width);
        let vectors = (0..pivots.len()).map(|r| t.row(r).to_vec()).collect();
        SubspaceBasis::from_vectors(m.rows(), vectors)
    }

    fn solve_right(
        &self,
        c: &Mat<BigRational>,
        rhs: &Mat<BigRational>,
    ) -> Option<Mat<BigRational>> {
        assert_eq!(c.rows(), rhs.rows(), "solve_right row mismatch");
        let n = c.cols();
        let mut aug = Mat::hstack(&[c, rhs]);
        let pivots = rref(&mut aug, n);
        // consistency: rows past the pivots must vanish on the right-hand side
        for r in pivots.len()..aug.rows() {
            if (n..aug.cols()).any(|j| !aug[(r, j)].is_zero()) {
                return None;
            }
        }
        let mut x = Mat::zeros(n, rhs.cols());
        for (r, &pc) in pivots.iter().enumerate() {
            for k in 0..rhs.cols() {
                x[(pc, k)] = aug[(r, n + k)].clone();
            }
        }
        Some(x)
    }

    fn extend_basis(
        &self,
        basis: &mut SubspaceBasis<BigRational>,
        candidates: &[Vec<BigRational>],
    ) -> Vec<Vec<BigRational>> {
        let mut added = Vec::new();
        for cand in candidates {
            assert_eq!(cand.len(), basis.ambient_dim(), "candidate length mismatch");
            let mut v = cand.clone();
            for b in basis.vectors() {
                let p = leading_index(b).expect("basis vectors are nonzero");
                if v[p].is_zero() {
                    continue;
                }
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            let Some(q) = leading_index(&v) else {
                continue;
            };
            let inv = v[q].recip();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            // keep the basis fully reduced at the new pivot
            for b in basis.vectors_mut().iter_mut() {
                if b[q].is_zero() {
                    continue;
                }
                let f = b[q].clone();
                for (x, y) in b.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            let vectors = basis.vectors_mut();
            let pos = vectors
                .iter()
                .position(|b| leading_index(b).is_some_and(|p| p > q))
                .unwrap_or(vectors.len());
            vectors.insert(pos, v.clone());
            added.push(v);
        }
        added
    }

    fn mat_eq(&self, a: &Mat<BigRational>, b: &Mat<BigRational>) -> bool {
        a == b
    }
}
