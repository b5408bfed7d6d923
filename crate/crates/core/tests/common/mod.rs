#![allow(dead_code)]

use frameopt::erasure::{weights_from_probabilities, ProbabilityModel};
use frameopt::linalg::{CMatrix, C64};
use frameopt::random::{random_dual, random_frame, random_probabilities};
use frameopt::Frame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real(vectors: &[&[f64]]) -> Frame {
    Frame::from_real(&vectors.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn split_axis() -> (Frame, ProbabilityModel) {
    (
        real(&[&[1.0, 0.0], &[0.0, 0.5], &[0.0, 0.5]]),
        weights_from_probabilities(&[0.0, 0.5, 0.5], 2).unwrap(),
    )
}

pub fn diagonal_augmented() -> (Frame, ProbabilityModel) {
    let h = 0.5f64.sqrt();
    (
        real(&[&[1.0, 0.0], &[0.0, 1.0], &[h, h]]),
        weights_from_probabilities(&[0.25, 0.25, 0.5], 2).unwrap(),
    )
}

pub fn skew_triple() -> (Frame, ProbabilityModel) {
    (
        real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]),
        weights_from_probabilities(&[0.5, 1.0 / 3.0, 1.0 / 6.0], 2).unwrap(),
    )
}

pub fn mercedes() -> (Frame, ProbabilityModel) {
    let s = 3f64.sqrt() / 2.0;
    (
        real(&[&[1.0, 0.0], &[-0.5, s], &[-0.5, -s]]),
        weights_from_probabilities(&[1.0 / 3.0; 3], 2).unwrap(),
    )
}

/// Random frame (n <= 5, n <= N <= n + 4), probabilities and a random dual.
pub fn random_instance<R: Rng>(rng: &mut R) -> (Frame, ProbabilityModel, Frame) {
    let n = rng.random_range(1..=5);
    let len = rng.random_range(n.max(2)..=n + 4);
    let f = random_frame(n, len, rng);
    let m = weights_from_probabilities(&random_probabilities(len, rng), n).unwrap();
    let scale = rng.random_range(0.0..2.0);
    let g = random_dual(&f, scale, rng).unwrap();
    (f, m, g)
}

/// Single-erasure `(norm, radius)` of `q_i g_i f_i^*` computed with
/// nalgebra's SVD and Schur decomposition.
pub fn dense_single(f: &Frame, g: &Frame, q: f64, i: usize) -> (f64, f64) {
    let e: CMatrix = g.vector(i) * f.vector(i).adjoint() * C64::new(q, 0.0);
    let norm = e.clone().svd(false, false).singular_values.iter().copied().fold(0.0, f64::max);
    let rho = e
        .schur()
        .eigenvalues()
        .expect("complex Schur form")
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    (norm, rho)
}

/// Dense `(r, O, A)` for one erasure.
pub fn dense_measures(f: &Frame, g: &Frame, m: &ProbabilityModel) -> [f64; 3] {
    let terms: Vec<(f64, f64)> = (0..f.len()).map(|i| dense_single(f, g, m.q[i], i)).collect();
    let max = |h: &dyn Fn(&(f64, f64)) -> f64| terms.iter().map(h).fold(f64::NEG_INFINITY, f64::max);
    [max(&|t| t.1), max(&|t| t.0), max(&|t| 0.5 * (t.0 + t.1))]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
