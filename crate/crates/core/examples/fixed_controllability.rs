//! Controllable subspace of a fixed network, cross-checked against the
//! Kalman matrix and bounded by the leader-respecting partition.
//!
//!     cargo run --example fixed_controllability

use matnet::analysis::{ctrb, kalman_matrix, theorem1_bound};
use matnet::graph::{EdgeSign, MatrixWeightedSignedGraph};
use matnet::linalg::{Backend, ExactBackend, FloatBackend, Mat, Scalar};
use matnet::system::{assemble_network, Dynamics, Network};
use num_rational::BigRational;

type Q = Mat<BigRational>;

fn main() -> matnet::Result<()> {
    let w = Q::from_i64(&[[1, 2], [2, 1]]);
    let v = Q::from_i64(&[[2, 1], [1, 2]]);
    let i2 = Q::identity(2);
    let two = i2.scale(&BigRational::from_i64(2));

    let g = MatrixWeightedSignedGraph::new(4, 2, vec![0])?
        .with_edge(0, 1, EdgeSign::Positive, w.clone())?
        .with_edge(0, 2, EdgeSign::Positive, w)?
        .with_edge(1, 3, EdgeSign::Negative, v.clone())?
        .with_edge(2, 3, EdgeSign::Negative, v)?;
    let dynamics = Dynamics::new(i2.clone(), two.clone(), i2, two)?;
    let net = Network::new(g);

    let sys = assemble_network(&net, &dynamics)?;
    let exact = ctrb(&ExactBackend, &sys)?;
    let kalman = ExactBackend.rank(&kalman_matrix(&sys));
    println!(
        "dim W = {} of {} (Kalman rank {kalman}), controllable: {}",
        exact.subspace_dim, exact.ambient_dim, exact.controllable
    );

    let float_sys = assemble_network(
        &Network::new(net.graph.map_scalar(Scalar::to_f64)),
        &dynamics.map_scalar(Scalar::to_f64),
    )?;
    println!(
        "float backend: dim W = {}",
        ctrb(&FloatBackend::default(), &float_sys)?.subspace_dim
    );

    let bound = theorem1_bound(&ExactBackend, &net, &dynamics, None)?;
    println!(
        "partition {} gives bound {}; subspace contained: {}, certificate: {}",
        bound.partition_used, bound.bound, bound.contained, bound.certificate.exists
    );
    if bound.uncontrollable_by_partition {
        println!("a nontrivial cell already rules out controllability");
    }
    Ok(())
}
