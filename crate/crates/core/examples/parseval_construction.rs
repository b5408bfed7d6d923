//! Probability-uniform Parseval frames: `S = I` and `||f_i||^2 = 1/q_i`.
//!
//! ```bash
//! cargo run --example parseval_construction
//! ```

use std::error::Error;

use frameopt::dual_pairs::{
    canonical_pair_verdict, construct_probability_uniform_parseval, frame_with_operator_and_norms, global_pair_optimum,
    majorization_check, parseval_defect, MajorizationInstance,
};
use frameopt::erasure::{one_erasure_value, weights_from_probabilities, MeasureKind};
use frameopt::frame::frame_operator;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = [0.1, 0.2, 0.3, 0.4];
    let model = weights_from_probabilities(&p, 2)?;
    let mut norms: Vec<f64> = model.q.iter().map(|q| 1.0 / q.sqrt()).collect();
    norms.sort_by(|a, b| b.total_cmp(a));
    let inst = MajorizationInstance { spectrum: vec![1.0, 1.0], norms };
    assert!(majorization_check(&inst)?);

    let f = construct_probability_uniform_parseval(&model, 2)?;
    println!("|S - I| = {:e}", parseval_defect(&f)?);
    for i in 0..f.len() {
        println!("|f_{}|^2 = {:.12}, 1/q = {:.12}", i + 1, f.norm_of(i).powi(2), 1.0 / model.q[i]);
    }
    let verdict = canonical_pair_verdict(&f, &model)?;
    assert!(verdict.is_pod_pair);
    let a = one_erasure_value(&f, &f, &model, MeasureKind::Averaged)?;
    println!("A = {a}, optimum over all pairs = {}", global_pair_optimum());

    // general spectrum
    let g = frame_with_operator_and_norms(&[3.0, 1.0], &[1.0, 1.0, 1.0, 1.0])?;
    println!("frame operator eigenvalues {:?}", frame_operator(&g)?.eigenvalues());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
