//! Switching between two topologies: the join bound versus the bound from a
//! partition that is equitable for every member at once.
//!
//!     cargo run --example switching

use matnet::analysis::theorem2_bound;
use matnet::cli::corpus::builtin;
use matnet::cli::SpecDynamics;
use matnet::linalg::ExactBackend;
use matnet::system::SwitchingFamily;
use num_rational::BigRational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entry = builtin()
        .into_iter()
        .find(|e| e.name == "example2")
        .expect("bundled");
    let spec = entry.spec.build::<BigRational>()?;
    let SpecDynamics::Homogeneous(dynamics) = spec.dynamics else {
        unreachable!("example2 shares dynamics")
    };

    let family = SwitchingFamily::assemble(&spec.topologies, &dynamics)?;
    let r = theorem2_bound(&ExactBackend, &family, &dynamics, None)?;
    for (k, pi) in r.member_partitions.iter().enumerate() {
        println!(
            "member {}: EP {pi}, certificate {}",
            k + 1,
            r.certificates_exist[k]
        );
    }
    println!("join {} -> bound {}", r.join, r.bound);
    println!(
        "dim C = {} of {}",
        r.verdict.subspace_dim, r.verdict.ambient_dim
    );
    if r.violated {
        println!("the join bound does not hold for this family");
    }
    println!(
        "common EP {} -> bound {}, contains C: {}",
        r.common_partition, r.common_bound, r.common_contained
    );
    Ok(())
}
