//! Runs the bundled regression corpus on both backends.
//!
//!     cargo run --example corpus

use matnet::cli::{cmd_corpus, corpus::builtin};
use matnet::linalg::BackendKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let entries = builtin();
    for backend in [BackendKind::Exact, BackendKind::Float] {
        let report = cmd_corpus(&entries, Some(backend), None)?;
        println!("[{backend}] {}", report.summary);
        for ex in report.json["examples"].as_array().into_iter().flatten() {
            let mark = if ex["pass"] == true { "ok  " } else { "FAIL" };
            println!("  {mark} {}", ex["name"].as_str().unwrap_or("?"));
        }
    }
    Ok(())
}
