//! Monte Carlo erasure channel against the worst-case operator-norm bound.
//!
//! ```bash
//! cargo run --release --example erasure_simulation
//! ```

use std::error::Error;

use frameopt::erasure::weights_from_probabilities;
use frameopt::frame::canonical_dual;
use frameopt::sim::{simulate, SimConfig, SimMode};
use frameopt::Frame;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let h = 0.5f64.sqrt();
    let f = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![h, h]])?;
    let model = weights_from_probabilities(&[0.25, 0.25, 0.5], 2)?;
    let g = canonical_dual(&f)?;

    for (mode, m) in [(SimMode::Weighted, 1), (SimMode::Raw, 1), (SimMode::Weighted, 2)] {
        let cfg = SimConfig { trials: 20_000, signals: 2, m, seed: 1, mode, ..SimConfig::default() };
        let report = simulate(&f, &g, &model, &cfg)?;
        assert!(report.ratio <= 1.0 + 1e-9);
        println!(
            "{mode:?} m={m}: max {:.6}, mean {:.6}, bound {:.6}, ratio {:.4}",
            report.max_error, report.mean_error, report.bound, report.ratio
        );
        for pc in &report.pattern_counts {
            println!("  {:?}: {}", pc.pattern, pc.count);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
