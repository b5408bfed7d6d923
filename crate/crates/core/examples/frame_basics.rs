//! Frame operator, frame bounds, canonical dual and the space of all duals.
//!
//! ```bash
//! cargo run --example frame_basics
//! ```

use std::error::Error;

use frameopt::frame::{canonical_dual, dual_from_params, dual_space, frame_bounds, frame_operator, is_dual};
use frameopt::linalg::c;
use frameopt::Frame;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = Frame::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]])?;

    let s = frame_operator(&f)?;
    println!("frame operator:{}", s.matrix);
    let (a, b) = frame_bounds(&f)?;
    println!("frame bounds: {a} <= {b}");
    assert!((a - 1.0).abs() < 1e-12 && (b - 3.0).abs() < 1e-12);

    let g = canonical_dual(&f)?;
    assert!(is_dual(&f, &g, 1e-10)?);
    for (i, v) in g.vectors().iter().enumerate() {
        let entries: Vec<String> = v.iter().map(|z| format!("{z:.4}")).collect();
        println!("canonical g_{} = ({})", i + 1, entries.join(", "));
    }

    // every dual is the canonical one plus a null-space perturbation
    let p = dual_space(&f)?;
    println!("{} free complex coordinates", p.dim());
    let other = dual_from_params(&p, &[c(0.3, -0.1), c(-0.2, 0.0)])?;
    assert!(is_dual(&f, &other, 1e-10)?);
    let back = p.coordinates_of(&other)?;
    let shown: Vec<String> = back.iter().map(|z| format!("{z:.4}")).collect();
    println!("recovered coordinates: {}", shown.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
