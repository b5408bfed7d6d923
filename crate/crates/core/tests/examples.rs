//! Runs every cargo example as a test.

#[path = "../examples/frame_basics.rs"]
#[allow(dead_code)]
mod frame_basics;

#[path = "../examples/erasure_measures.rs"]
#[allow(dead_code)]
mod erasure_measures;

#[path = "../examples/optimal_dual_search.rs"]
#[allow(dead_code)]
mod optimal_dual_search;

#[path = "../examples/optimality_certificates.rs"]
#[allow(dead_code)]
mod optimality_certificates;

#[path = "../examples/parseval_construction.rs"]
#[allow(dead_code)]
mod parseval_construction;

#[path = "../examples/erasure_simulation.rs"]
#[allow(dead_code)]
mod erasure_simulation;

#[test]
fn frame_basics_runs() {
    frame_basics::run_example().unwrap();
}

#[test]
fn erasure_measures_runs() {
    erasure_measures::run_example().unwrap();
}

#[test]
fn optimal_dual_search_runs() {
    optimal_dual_search::run_example().unwrap();
}

#[test]
fn optimality_certificates_runs() {
    optimality_certificates::run_example().unwrap();
}

#[test]
fn parseval_construction_runs() {
    parseval_construction::run_example().unwrap();
}

#[test]
fn erasure_simulation_runs() {
    erasure_simulation::run_example().unwrap();
}
