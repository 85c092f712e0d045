//! Builds a small signed matrix-weighted graph and prints its Laplacian.
//!
//!     cargo run --example laplacian

use matnet::graph::{Definiteness, EdgeSign, MatrixWeightedSignedGraph};
use matnet::linalg::Mat;
use num_rational::BigRational;

type Q = Mat<BigRational>;

fn main() -> matnet::Result<()> {
    let w = Q::from_i64(&[[1, 2], [2, 1]]);
    let v = Q::from_i64(&[[2, 1], [1, 2]]);
    let psd = Q::from_i64(&[[1, 0], [0, 0]]);

    // node 1 leads; edges 2-4 and 3-4 are antagonistic
    let g = MatrixWeightedSignedGraph::new(4, 2, vec![0])?
        .with_edge(0, 1, EdgeSign::Positive, w.clone())?
        .with_edge(0, 2, EdgeSign::Positive, w.clone())?
        .with_edge(1, 3, EdgeSign::Negative, v.clone())?
        .with_edge(2, 3, EdgeSign::Negative, v)?;

    println!("L =\n{}", g.laplacian());
    for e in g.edges() {
        println!(
            "edge {}-{} {:?} weight {:?}",
            e.i + 1,
            e.j + 1,
            e.sign,
            Definiteness::of(&e.weight)
        );
    }
    println!("{} edges carry indefinite weights", g.flagged_edges().len());

    // a second topology sharing nodes and leaders; pair 1-2 overlaps
    let h = MatrixWeightedSignedGraph::new(4, 2, vec![0])?
        .with_edge(0, 1, EdgeSign::Positive, psd.clone())?
        .with_edge(2, 3, EdgeSign::Positive, psd)?;
    let union = MatrixWeightedSignedGraph::union_graph(&[g, h])?;
    println!(
        "union has {} edges; L* =\n{}",
        union.edge_count(),
        union.laplacian()
    );
    Ok(())
}
