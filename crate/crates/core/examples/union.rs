//! Union graph versus the switched system it summarises.
//!
//!     cargo run --example union -- 1     # A factor 1 instead of the member count

use matnet::analysis::union_analysis;
use matnet::cli::corpus::builtin;
use matnet::cli::SpecDynamics;
use matnet::linalg::ExactBackend;
use matnet::system::UnionAFactor;
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let factor: UnionAFactor = std::env::args().nth(1).as_deref().unwrap_or("t").parse()?;
    for name in ["example4", "example5"] {
        let entry = builtin()
            .into_iter()
            .find(|e| e.name == name)
            .expect("bundled");
        let spec = entry.spec.build::<BigRational>()?;
        let SpecDynamics::Homogeneous(dynamics) = spec.dynamics else {
            unreachable!()
        };
        let r = union_analysis(&ExactBackend, &spec.topologies, &dynamics, factor)?;
        println!("{name}: {}", entry.description);
        println!("  union edges: {}", r.union_graph.edge_count());
        println!(
            "  union dim {}, switched dim {} (of {})",
            r.union_verdict.subspace_dim,
            r.switched_verdict.subspace_dim,
            r.switched_verdict.ambient_dim
        );
        let members: Vec<String> = r.member_partitions.iter().map(|p| p.to_string()).collect();
        println!("  member EPs: {}", members.join(", "));
        println!(
            "  union => switched: {:?}; nontrivial member cell => union uncontrollable: {:?}",
            r.union_implies_switched, r.nontrivial_member_cell
        );
        if r.indeterminate {
            println!("  union uncontrollable but switched controllable");
        }
    }
    Ok(())
}
