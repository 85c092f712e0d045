#![allow(dead_code)]

use matnet::graph::{EdgeSign, MatrixWeightedSignedGraph};
use matnet::linalg::{Mat, Scalar};
use matnet::partition::Partition;
use matnet::system::Dynamics;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Q = Mat<BigRational>;
pub type G = MatrixWeightedSignedGraph<BigRational>;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn int_matrix(rng: &mut StdRng, rows: usize, cols: usize, lo: i64, hi: i64) -> Q {
    Mat::from_fn(rows, cols, |_, _| {
        BigRational::from_i64(rng.random_range(lo..=hi))
    })
}

/// Nonzero symmetric integer matrix with entries in `[lo, hi]`.
pub fn sym_weight(rng: &mut StdRng, d: usize, lo: i64, hi: i64) -> Q {
    loop {
        let mut w = Q::zeros(d, d);
        for r in 0..d {
            for c in r..d {
                let v = BigRational::from_i64(rng.random_range(lo..=hi));
                w[(r, c)] = v.clone();
                w[(c, r)] = v;
            }
        }
        if !w.is_zero() {
            return w;
        }
    }
}

pub fn sign(rng: &mut StdRng) -> EdgeSign {
    if rng.random_bool(0.5) {
        EdgeSign::Positive
    } else {
        EdgeSign::Negative
    }
}

pub fn leaders(rng: &mut StdRng, n: usize, max: usize) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let m = rng.random_range(1..=max.min(n));
    let mut out = ids[..m].to_vec();
    out.sort_unstable();
    out
}

/// Random signed graph; each pair is an edge with probability `density`.
pub fn graph(rng: &mut StdRng, n: usize, d: usize, leaders: Vec<usize>, density: f64, w: i64) -> G {
    let mut g = G::new(n, d, leaders).unwrap();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                let s = sign(rng);
                g.add_edge(i, j, s, sym_weight(rng, d, 1 - w.max(1), w))
                    .unwrap();
            }
        }
    }
    g
}

/// Random `(A, B, K, C)` with small integer entries and square `C`.
pub fn dynamics(rng: &mut StdRng, d: usize) -> Dynamics<BigRational> {
    let p = rng.random_range(1..=d);
    Dynamics::new(
        int_matrix(rng, d, d, -2, 2),
        int_matrix(rng, d, p, -2, 2),
        int_matrix(rng, p, d, -2, 2),
        int_matrix(rng, d, d, -2, 2),
    )
    .unwrap()
}

/// Random invertible integer matrix.
pub fn invertible(rng: &mut StdRng, d: usize) -> Q {
    loop {
        let m = int_matrix(rng, d, d, -3, 3);
        if !Scalar::is_zero(&m.determinant()) {
            return m;
        }
    }
}

/// Graph built to be equitable for a random partition: cells are wired
/// internally by a clique or a cycle and pairwise by a complete bipartite
/// block or, for equal sizes, a perfect matching, one weight per wiring.
pub fn equitable_graph(rng: &mut StdRng, max_n: usize, d: usize) -> (G, Partition) {
    let n = rng.random_range(2..=max_n);
    let mut labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n.min(3))).collect();
    labels.shuffle(rng);
    let pi = Partition::from_labels(&labels);
    let cells = pi.cells().to_vec();
    let mut g = G::new(n, d, vec![cells[0][0]]).unwrap();
    for cell in &cells {
        let k = cell.len();
        if k < 2 || rng.random_bool(0.4) {
            continue;
        }
        let (s, w) = (sign(rng), sym_weight(rng, d, -3, 3));
        if k >= 3 && rng.random_bool(0.5) {
            for idx in 0..k {
                let (a, b) = (cell[idx], cell[(idx + 1) % k]);
                g.add_edge(a, b, s, w.clone()).unwrap();
            }
        } else {
            for a in 0..k {
                for b in a + 1..k {
                    g.add_edge(cell[a], cell[b], s, w.clone()).unwrap();
                }
            }
        }
    }
    for ci in 0..cells.len() {
        for cj in ci + 1..cells.len() {
            if rng.random_bool(0.4) {
                continue;
            }
            let (s, w) = (sign(rng), sym_weight(rng, d, -3, 3));
            let (a, b) = (&cells[ci], &cells[cj]);
            if a.len() == b.len() && rng.random_bool(0.5) {
                let mut perm = b.clone();
                perm.shuffle(rng);
                for (x, y) in a.iter().zip(&perm) {
                    g.add_edge(*x, *y, s, w.clone()).unwrap();
                }
            } else {
                for x in a {
                    for y in b {
                        g.add_edge(*x, *y, s, w.clone()).unwrap();
                    }
                }
            }
        }
    }
    (g, pi)
}
