//! Subgradient search for the dual with the smallest single-erasure measure.
//!
//! ```bash
//! cargo run --example optimal_dual_search
//! ```

use std::error::Error;

use frameopt::erasure::{weights_from_probabilities, MeasureKind};
use frameopt::frame::is_dual;
use frameopt::optimality::{search_optimal_dual, SearchConfig};
use frameopt::Frame;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])?;
    let model = weights_from_probabilities(&[0.5, 1.0 / 3.0, 1.0 / 6.0], 2)?;
    let cfg = SearchConfig { seed: 7, ..SearchConfig::default() };

    for kind in [MeasureKind::Radius, MeasureKind::Norm, MeasureKind::Averaged] {
        let out = search_optimal_dual(&f, &model, &cfg, kind)?;
        assert!(is_dual(&f, &out.dual, 1e-10)?);
        assert!(out.value <= out.canonical_value);
        println!(
            "{}: canonical {:.6} -> searched {:.6} (restart {}, converged {})",
            kind.symbol(),
            out.canonical_value,
            out.value,
            out.best_restart,
            out.converged
        );
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
