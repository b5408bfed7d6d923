//! Weight numbers and the worst-case error measures for one and two erasures.
//!
//! ```bash
//! cargo run --example erasure_measures
//! ```

use std::error::Error;

use frameopt::erasure::{measure_all, one_erasure_closed_form, weights_from_probabilities};
use frameopt::frame::canonical_dual;
use frameopt::Frame;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let h = 0.5f64.sqrt();
    let f = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![h, h]])?;
    let model = weights_from_probabilities(&[0.25, 0.25, 0.5], 2)?;
    println!("q = {:?}", model.q);

    let g = canonical_dual(&f)?;
    for m in 1..=2 {
        for report in measure_all(&f, &g, &model, m)? {
            println!("m = {m}: {} = {:.9} attained at {:?}", report.measure.symbol(), report.value, report.argmax);
        }
    }

    // rank-one shortcut for a single erasure
    let closed = one_erasure_closed_form(&f, &g, &model)?;
    let expected = (10f64.sqrt() + 3.0) / 6.0;
    assert!((closed.value - expected).abs() < 1e-12);
    println!("closed-form A = {}", closed.value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
