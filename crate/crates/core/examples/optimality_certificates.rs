//! Certificates for optimality and uniqueness of the canonical dual.
//!
//! ```bash
//! cargo run --example optimality_certificates
//! ```

use std::error::Error;

use frameopt::erasure::weights_from_probabilities;
use frameopt::optimality::{
    check_canonical_pasod_sufficient, check_unique_pasod_tight, check_unique_pod, tight_equivalences, SearchConfig,
};
use frameopt::Frame;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // one isolated axis: the canonical dual is optimal but not unique
    let f = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]])?;
    let model = weights_from_probabilities(&[0.5, 0.25, 0.25], 2)?;
    let cert = check_canonical_pasod_sufficient(&f, &model)?;
    println!("{}", serde_json::to_string_pretty(&cert)?);
    let w = cert.witness.as_ref().ok_or("expected a second optimal dual")?;
    println!("second optimal dual at epsilon {}: A = {} (canonical {})", w.epsilon, w.witness_value, w.canonical_value);

    // Mercedes frame with uniform probabilities
    let s = 3f64.sqrt() / 2.0;
    let mercedes = Frame::from_real(&[vec![1.0, 0.0], vec![-0.5, s], vec![-0.5, -s]])?;
    let uniform = weights_from_probabilities(&[1.0 / 3.0; 3], 2)?;
    println!("unique POD: {}", check_unique_pod(&mercedes, &uniform)?.holds);
    let pasod = check_unique_pasod_tight(&mercedes, &uniform)?;
    println!("unique PASOD: {} (c = {})", pasod.holds, pasod.threshold);

    // skewed probabilities break uniqueness under every measure at once
    let skewed = weights_from_probabilities(&[0.5, 0.25, 0.25], 2)?;
    let cfg = SearchConfig { max_iters: 50_000, restarts: 4, ..SearchConfig::default() };
    let report = tight_equivalences(&mercedes, &skewed, &cfg)?;
    println!("agree: {}, canonical optimal: {}", report.agree, report.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
