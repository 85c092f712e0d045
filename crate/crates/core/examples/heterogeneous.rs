//! Per-node dynamics: followers with different `A_i` land in different cells.
//!
//!     cargo run --example heterogeneous

use matnet::analysis::{heterogeneous_init, theorem3_bound};
use matnet::graph::{EdgeSign, MatrixWeightedSignedGraph};
use matnet::linalg::{ExactBackend, Mat, Scalar};
use matnet::system::{HeterogeneousDynamics, Network};
use num_rational::BigRational;

type Q = Mat<BigRational>;

fn main() -> matnet::Result<()> {
    let w = Q::from_i64(&[[1, 2], [2, 1]]);
    let v = Q::from_i64(&[[2, 1], [1, 2]]);
    let i2 = Q::identity(2);
    let two = i2.scale(&BigRational::from_i64(2));

    let mut g = MatrixWeightedSignedGraph::new(4, 2, vec![0])?;
    for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        g.add_edge(i, j, EdgeSign::Positive, w.clone())?;
    }
    let per_node = vec![
        (i2.clone(), two.clone()),
        (v.clone(), two.clone()),
        (v, two.clone()),
        (w, two.clone()),
    ];
    let dynamics = HeterogeneousDynamics::new(per_node, i2, two)?;

    let init = heterogeneous_init(&ExactBackend, &g, &dynamics);
    println!("initial cells by dynamics: {init}");

    let report = theorem3_bound(&ExactBackend, &Network::new(g), &dynamics, None)?;
    println!(
        "EP {} -> bound {}, achieved {}, controllable: {}",
        report.partition_used, report.bound, report.achieved_dim, report.verdict.controllable
    );
    match &report.certificate.failing_equation {
        None => println!("Q' certificate found"),
        Some(eq) => println!("no Q' certificate: {eq} has no solution"),
    }
    Ok(())
}
