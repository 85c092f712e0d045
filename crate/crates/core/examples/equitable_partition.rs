//! Coarsest equitable partition, quotient Laplacian and a Graphviz dump.
//!
//!     cargo run --example equitable_partition > quotient.dot

use matnet::graph::{EdgeSign, MatrixWeightedSignedGraph};
use matnet::linalg::{ExactBackend, Mat};
use matnet::partition::{
    characteristic_matrix, coarsest_ep, is_equitable, quotient_dot, quotient_laplacian, Partition,
};
use num_rational::BigRational;

type Q = Mat<BigRational>;

fn main() -> matnet::Result<()> {
    let backend = ExactBackend;
    let w = Q::from_i64(&[[1, 2], [2, 1]]);
    let g = MatrixWeightedSignedGraph::new(5, 2, vec![0])?
        .with_edge(0, 1, EdgeSign::Positive, w.clone())?
        .with_edge(0, 2, EdgeSign::Positive, w.clone())?
        .with_edge(1, 3, EdgeSign::Negative, w.clone())?
        .with_edge(2, 4, EdgeSign::Negative, w.clone())?
        .with_edge(3, 4, EdgeSign::Positive, w)?;

    let init = Partition::isolating(g.n(), g.leaders());
    let pi = coarsest_ep(&backend, &g, &init)?;
    eprintln!("coarsest leader-respecting EP: {pi}");

    let lq = quotient_laplacian(&backend, &g, &pi)?;
    let p = characteristic_matrix::<BigRational>(&pi, g.d()).p;
    assert_eq!(&g.laplacian() * &p, &p * &lq);
    eprintln!("L_pi =\n{lq}");

    // merging the leader into a cell breaks equitability; the witness says where
    let coarse = Partition::parse("1,2,3|4,5", g.n())?;
    let witness = is_equitable(&backend, &g, &coarse)?;
    if let Some(v) = witness.violation {
        eprintln!("{coarse} is not equitable: {v}");
    }

    print!("{}", quotient_dot(&g, &pi));
    Ok(())
}
