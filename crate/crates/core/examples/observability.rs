//! Observability with outputs read at the leaders, via the dual system.
//!
//!     cargo run --example observability

use matnet::analysis::observability;
use matnet::graph::{EdgeSign, MatrixWeightedSignedGraph};
use matnet::linalg::{ExactBackend, Mat, Scalar};
use matnet::system::{Dynamics, Network};
use num_rational::BigRational;

type Q = Mat<BigRational>;

fn main() -> matnet::Result<()> {
    let w = Q::from_i64(&[[1, 2], [2, 1]]);
    let i2 = Q::identity(2);
    let two = i2.scale(&BigRational::from_i64(2));
    let dynamics = Dynamics::new(i2.clone(), two.clone(), i2, two)?;

    let mut square = MatrixWeightedSignedGraph::new(4, 2, vec![0])?;
    for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        square.add_edge(i, j, EdgeSign::Positive, w.clone())?;
    }
    // same square read from two adjacent corners
    let mut two_outputs = MatrixWeightedSignedGraph::new(4, 2, vec![0, 1])?;
    for e in square.edges() {
        two_outputs.add_edge(e.i, e.j, e.sign, e.weight.clone())?;
    }

    for g in [square, two_outputs] {
        let leaders: Vec<usize> = g.leaders().iter().map(|l| l + 1).collect();
        let r = observability(&ExactBackend, &Network::new(g), &dynamics, None)?;
        println!(
            "outputs at {leaders:?}: dual rank {}/{}, observable {}, EP {}, {:?}",
            r.dual.subspace_dim,
            r.dual.ambient_dim,
            r.observable,
            r.partition_used,
            r.nontrivial_cell_unobservable
        );
    }

    let path = MatrixWeightedSignedGraph::new(3, 1, vec![0])?
        .with_edge(0, 1, EdgeSign::Positive, Q::identity(1))?
        .with_edge(1, 2, EdgeSign::Positive, Q::identity(1))?;
    let r = observability(
        &ExactBackend,
        &Network::new(path),
        &Dynamics::first_order(1),
        None,
    )?;
    if let Some(joint) = r.first_order_joint {
        println!(
            "first-order path: controllable {}, observable {}",
            joint.controllable, joint.observable
        );
    }
    Ok(())
}
