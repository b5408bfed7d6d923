//! Random instances for property tests, examples and experiments.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::Result;
use crate::frame::{dual_from_params, dual_space, frame_bounds, Frame};
use crate::linalg::{CMatrix, C64};

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// `len` complex Gaussian vectors in `C^n`, redrawn until they span with a
/// lower frame bound of at least `1e-3`.
pub fn random_frame<R: Rng>(n: usize, len: usize, rng: &mut R) -> Frame {
    assert!(len >= n && n > 0, "need N >= n >= 1");
    loop {
        let t = CMatrix::from_fn(n, len, |_, _| gaussian(rng));
        let f = Frame::from_synthesis(t).expect("nonempty");
        if matches!(frame_bounds(&f), Ok((a, _)) if a >= 1e-3) {
            return f;
        }
    }
}

/// Like [`random_frame`] with real entries.
pub fn random_real_frame<R: Rng>(n: usize, len: usize, rng: &mut R) -> Frame {
    assert!(len >= n && n > 0, "need N >= n >= 1");
    loop {
        let t = CMatrix::from_fn(n, len, |_, _| C64::new(StandardNormal.sample(rng), 0.0));
        let f = Frame::from_synthesis(t).expect("nonempty");
        if matches!(frame_bounds(&f), Ok((a, _)) if a >= 1e-3) {
            return f;
        }
    }
}

/// Gram–Schmidt of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let mut u = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    for j in 0..n {
        for k in 0..j {
            let proj = u.column(k).dotc(&u.column(j));
            let col_k = u.column(k).clone_owned();
            u.column_mut(j).axpy(-proj, &col_k, C64::new(1.0, 0.0));
        }
        let norm = u.column(j).norm();
        u.column_mut(j).unscale_mut(norm);
    }
    u
}

/// A flat-Dirichlet probability vector. Draws with an entry of `0.99` or more
/// are rejected so the weight numbers stay moderate.
pub fn random_probabilities<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
        if p.iter().all(|&x| x < 0.99) {
            return p;
        }
    }
}

/// Canonical dual plus a complex Gaussian perturbation of size `scale`.
pub fn random_dual<R: Rng>(f: &Frame, scale: f64, rng: &mut R) -> Result<Frame> {
    let p = dual_space(f)?;
    let coeffs: Vec<C64> = (0..p.dim()).map(|_| gaussian(rng) * scale).collect();
    dual_from_params(&p, &coeffs)
}

/// Random dual coordinates of the given length.
pub fn random_coefficients<R: Rng>(len: usize, scale: f64, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| gaussian(rng) * scale).collect()
}
