//! Joint optimality of frame/dual pairs for one erasure and the construction of
//! probability-uniform Parseval frames.
//!
//! For any dual pair the single-erasure measures are at least 1, and a pair
//! attains 1 exactly when the per-index conditions below hold:
//!
//! * spectral radius: `<f_i, g_i> = 1/q_i`,
//! * operator norm: `<f_i, g_i> = ||f_i|| ||g_i|| = 1/q_i`,
//! * average: `|<f_i, g_i>| = ||f_i|| ||g_i|| = 1/q_i`.
//!
//! A Parseval frame with `||f_i||^2 = 1/q_i` paired with itself satisfies all
//! three. Such frames exist whenever every `q_i >= 1`; they are built here by
//! a chain of plane rotations realising a Hermitian matrix with prescribed
//! diagonal and spectrum.

use serde::{Deserialize, Serialize};

use crate::erasure::ProbabilityModel;
use crate::error::{FrameError, Result};
use crate::frame::{self, canonical_dual, duality_residual, Frame};
use crate::io::{to_pair, ComplexPair};
use crate::linalg::{CMatrix, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub is_pod_pair: bool,
    pub is_psod_pair: bool,
    pub is_pasod_pair: bool,
    /// `|<f_i, g_i>| - 1/q_i`
    pub modulus_residuals: Vec<f64>,
    /// `<f_i, g_i> - 1/q_i`
    pub inner_residuals: Vec<ComplexPair>,
    /// `||f_i|| ||g_i|| - 1/q_i`
    pub norm_residuals: Vec<f64>,
}

/// Evaluates the per-index pair conditions without checking duality.
pub fn pair_conditions(f: &Frame, g: &Frame, model: &ProbabilityModel, tol: f64) -> Result<PairVerdict> {
    if f.len() != g.len() || f.dimension() != g.dimension() || model.q.len() != f.len() {
        return Err(FrameError::DimensionMismatch("frame, dual and weights must agree in shape".into()));
    }
    let mut modulus_residuals = Vec::with_capacity(f.len());
    let mut inner_residuals = Vec::with_capacity(f.len());
    let mut norm_residuals = Vec::with_capacity(f.len());
    for i in 0..f.len() {
        let target = 1.0 / model.q[i];
        let z = f.inner_at(g, i);
        modulus_residuals.push(z.norm() - target);
        inner_residuals.push(z - C64::new(target, 0.0));
        norm_residuals.push(f.norm_of(i) * g.norm_of(i) - target);
    }
    let small = |x: f64| x.abs() <= tol;
    let inner_ok = inner_residuals.iter().all(|z| z.norm() <= tol);
    let norm_ok = norm_residuals.iter().all(|&x| small(x));
    let modulus_ok = modulus_residuals.iter().all(|&x| small(x));
    Ok(PairVerdict {
        is_pod_pair: inner_ok && norm_ok,
        is_psod_pair: inner_ok,
        is_pasod_pair: modulus_ok && norm_ok,
        modulus_residuals,
        inner_residuals: inner_residuals.into_iter().map(to_pair).collect(),
        norm_residuals,
    })
}

/// Pair conditions for a verified dual pair, at the certificate tolerance.
pub fn pair_verdict(f: &Frame, g: &Frame, model: &ProbabilityModel) -> Result<PairVerdict> {
    let tol = Tolerances::default();
    if !frame::is_dual(f, g, tol.dual)? {
        let (dev, _) = duality_residual(f, g)?;
        return Err(FrameError::NotDual(dev));
    }
    pair_conditions(f, g, model, tol.certificate)
}

/// Optimal single-erasure value over all dual pairs, for each of `O`, `r` and `A`.
pub fn global_pair_optimum() -> f64 {
    1.0
}

/// Both sequences nonincreasing; `norms` holds `a_i`, not `a_i^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationInstance {
    pub spectrum: Vec<f64>,
    pub norms: Vec<f64>,
}

pub const MAJORIZATION_TOL: f64 = 1e-12;

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// First violated condition as `(k, sum a_i^2, sum lambda_i)`; `k` is the
/// partial-sum length, `k = N` stands for the trace equality.
fn majorization_violation(inst: &MajorizationInstance) -> Result<Option<(usize, f64, f64)>> {
    if !nonincreasing(&inst.spectrum) {
        return Err(FrameError::NotSorted("spectrum"));
    }
    if !nonincreasing(&inst.norms) {
        return Err(FrameError::NotSorted("norms"));
    }
    let n = inst.spectrum.len();
    let big_n = inst.norms.len();
    if n == 0 || big_n < n {
        return Err(FrameError::DimensionMismatch(format!("{big_n} norms for a spectrum of length {n}")));
    }
    let total: f64 = inst.spectrum.iter().sum();
    let slack = MAJORIZATION_TOL * total.abs().max(1.0);
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for k in 0..n {
        lhs += inst.norms[k].powi(2);
        rhs += inst.spectrum[k];
        if lhs > rhs + slack {
            return Ok(Some((k + 1, lhs, rhs)));
        }
    }
    let squares: f64 = inst.norms.iter().map(|a| a * a).sum();
    if (squares - total).abs() > slack {
        return Ok(Some((big_n, squares, total)));
    }
    Ok(None)
}

/// `sum_{i<=k} a_i^2 <= sum_{i<=k} lambda_i` for `k <= n` and equal totals.
pub fn majorization_check(inst: &MajorizationInstance) -> Result<bool> {
    Ok(majorization_violation(inst)?.is_none())
}

/// A real frame with frame operator `diag(spectrum)` (sorted nonincreasing)
/// and `||f_i|| = norms[i]`, in the given index order.
///
/// Starts from `W = [diag(sqrt(lambda)); 0]`, whose Gram matrix `W W^T` is
/// diagonal with the padded spectrum, and rotates pairs of rows so that the
/// Gram diagonal becomes `a^2` one index at a time. Rotations of rows leave
/// `W^T W` unchanged, so the rows of the final `W` are the frame vectors.
pub fn frame_with_operator_and_norms(spectrum: &[f64], norms: &[f64]) -> Result<Frame> {
    let n = spectrum.len();
    let big_n = norms.len();
    if let Some((i, &x)) = spectrum.iter().enumerate().find(|(_, x)| !x.is_finite() || **x <= 0.0) {
        return Err(FrameError::NonPositiveSpectrum { index: i, value: x });
    }
    let mut lambda = spectrum.to_vec();
    lambda.sort_by(|a, b| b.total_cmp(a));
    let mut order: Vec<usize> = (0..big_n).collect();
    // stable: equal norms keep their input order
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sorted_norms: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let inst = MajorizationInstance {
        spectrum: lambda.clone(),
        norms: sorted_norms.clone(),
    };
    if let Some((k, lhs, rhs)) = majorization_violation(&inst)? {
        return Err(FrameError::MajorizationFailed { k, lhs, rhs });
    }

    let mut w = vec![vec![0.0f64; n]; big_n];
    for (j, &l) in lambda.iter().enumerate() {
        w[j][j] = l.sqrt();
    }
    // rows whose diagonal is not yet fixed, with their current diagonal value
    let mut active: Vec<(usize, f64)> = (0..big_n)
        .map(|r| (r, if r < n { lambda[r] } else { 0.0 }))
        .collect();
    let mut position = vec![0usize; big_n];

    for (t, &a) in sorted_norms.iter().enumerate() {
        let target = a * a;
        active.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        if active.len() == 1 {
            position[t] = active[0].0;
            break;
        }
        // consecutive pair bracketing the (largest remaining) target
        let j = (0..active.len() - 1)
            .find(|&j| active[j].1 >= target && target >= active[j + 1].1)
            .unwrap_or(if target > active[0].1 { 0 } else { active.len() - 2 });
        let (u, alpha) = active[j];
        let (v, beta) = active[j + 1];
        let c2 = if alpha - beta > 0.0 {
            ((target - beta) / (alpha - beta)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
        let (ru, rv) = (w[u].clone(), w[v].clone());
        for (col, (&wu, &wv)) in ru.iter().zip(&rv).enumerate().take(n) {
            w[u][col] = c * wu + s * wv;
            w[v][col] = -s * wu + c * wv;
        }
        position[t] = u;
        active.remove(j);
        let k = active.iter().position(|x| x.0 == v).expect("v is active");
        active[k].1 = alpha + beta - target;
    }

    let mut vectors = vec![Vec::new(); big_n];
    for (t, &orig) in order.iter().enumerate() {
        vectors[orig] = w[position[t]].clone();
    }
    Frame::from_real(&vectors)
}

/// A Parseval frame with `||f_i||^2 = 1/q_i`.
pub fn construct_probability_uniform_parseval(model: &ProbabilityModel, n: usize) -> Result<Frame> {
    if model.dimension != n {
        return Err(FrameError::DimensionMismatch(format!(
            "weights were computed for dimension {}, asked for {n}",
            model.dimension
        )));
    }
    let norms: Vec<f64> = model.q.iter().map(|q| 1.0 / q.sqrt()).collect();
    frame_with_operator_and_norms(&vec![1.0; n], &norms)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightPairCheck {
    /// `q_i ||f_i||^2` is one constant `c`.
    pub holds: bool,
    pub c: f64,
    pub frame_bound: f64,
    /// `(F, S^{-1} F)` is an optimal pair exactly when `c` equals the frame bound.
    pub canonical_is_optimal_pair: bool,
}

/// For a tight frame: the canonical dual is the unique optimal partner iff
/// `q_i ||f_i||^2` is constant.
pub fn unique_pair_check_tight(f: &Frame, model: &ProbabilityModel) -> Result<TightPairCheck> {
    let (lower, upper) = frame::frame_bounds(f)?;
    if upper - lower > 1e-9 * upper {
        return Err(FrameError::NotTight { lower, upper });
    }
    if model.q.len() != f.len() {
        return Err(FrameError::DimensionMismatch("weights and frame differ in length".into()));
    }
    let tol = Tolerances::default().certificate;
    let vals: Vec<f64> = (0..f.len()).map(|i| model.q[i] * f.norm_of(i).powi(2)).collect();
    let c = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let holds = vals.iter().all(|v| (v - c).abs() <= tol * c.abs().max(1.0));
    let bound = 0.5 * (lower + upper);
    let canonical_is_optimal_pair = holds && (c - bound).abs() <= tol * bound.max(1.0);
    Ok(TightPairCheck {
        holds,
        c,
        frame_bound: bound,
        canonical_is_optimal_pair,
    })
}

/// `max |S - I|` of a frame.
pub fn parseval_defect(f: &Frame) -> Result<f64> {
    let s = frame::frame_operator(f)?;
    Ok(crate::linalg::max_abs(&(s.matrix - CMatrix::identity(f.dimension(), f.dimension()))))
}

/// Convenience: verdict for `(F, S^{-1} F)`.
pub fn canonical_pair_verdict(f: &Frame, model: &ProbabilityModel) -> Result<PairVerdict> {
    let g = canonical_dual(f)?;
    pair_verdict(f, &g, model)
}
