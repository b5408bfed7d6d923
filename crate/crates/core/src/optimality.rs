//! Optimal-dual search for single erasures and the certificate checkers for
//! canonical-dual optimality and uniqueness.
//!
//! The single-erasure objectives are maxima of convex per-index terms over the
//! affine space of duals, so the search is a subgradient method in the real
//! embedding of the dual coordinates (`Re c_k`, `Im c_k`). The space is affine
//! and unconstrained in coordinates, so projection is the identity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::erasure::{one_erasure_value, MeasureKind, ProbabilityModel};
use crate::error::{FrameError, Result};
use crate::frame::{self, apply_unitary, canonical_dual, dual_from_params, dual_space, DualParameterization, Frame};
use crate::io::{vectors_to_pairs, ComplexPair};
use crate::linalg::{self, CMatrix, C64};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_iters: usize,
    /// `s` in the diminishing step `s / sqrt(k)` applied to the normalised subgradient.
    pub step: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Minimum relative decrease of the best value that resets the stall counter.
    pub tol: f64,
    /// Iterations without such a decrease after which a restart stops.
    pub stall_window: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_iters: 200_000,
            step: 0.5,
            restarts: 8,
            seed: 0,
            tol: 1e-9,
            stall_window: 10_000,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.max_iters > 0
            && self.restarts > 0
            && self.step > 0.0
            && self.tol > 0.0
            && self.stall_window > 0;
        if ok {
            Ok(())
        } else {
            Err(FrameError::DimensionMismatch(format!("search configuration must be positive: {self:?}")))
        }
    }
}

/// Flattened single-erasure objective over dual coordinates.
struct Landscape {
    n: usize,
    len: usize,
    null_dim: usize,
    /// `f[i * n + j]`
    f: Vec<C64>,
    f_norm: Vec<f64>,
    q: Vec<f64>,
    g0: Vec<C64>,
    /// `k[i * null_dim + m]`
    k: Vec<C64>,
    kind: MeasureKind,
}

impl Landscape {
    fn new(f: &Frame, model: &ProbabilityModel, p: &DualParameterization, kind: MeasureKind) -> Result<Self> {
        if model.q.len() != f.len() {
            return Err(FrameError::DimensionMismatch(format!(
                "{} weights for {} vectors",
                model.q.len(),
                f.len()
            )));
        }
        let n = f.dimension();
        let len = f.len();
        let null_dim = p.null_dim();
        let flat = |m: &CMatrix| (0..len).flat_map(|i| (0..n).map(move |j| m[(j, i)])).collect::<Vec<_>>();
        Ok(Self {
            n,
            len,
            null_dim,
            f: flat(f.synthesis()),
            f_norm: (0..len).map(|i| f.norm_of(i)).collect(),
            q: model.q.clone(),
            g0: flat(p.base.synthesis()),
            k: (0..len)
                .flat_map(|i| (0..null_dim).map(move |m| (i, m)))
                .map(|(i, m)| p.null_basis[(i, m)])
                .collect(),
            kind,
        })
    }

    fn dim(&self) -> usize {
        self.n * self.null_dim
    }

    fn duals(&self, c: &[C64], out: &mut [C64]) {
        out.copy_from_slice(&self.g0);
        for i in 0..self.len {
            for j in 0..self.n {
                let mut acc = C64::new(0.0, 0.0);
                for m in 0..self.null_dim {
                    acc += c[j * self.null_dim + m] * self.k[i * self.null_dim + m].conj();
                }
                out[i * self.n + j] += acc;
            }
        }
    }

    fn pieces(&self, g: &[C64], i: usize) -> (C64, f64) {
        let fi = &self.f[i * self.n..(i + 1) * self.n];
        let gi = &g[i * self.n..(i + 1) * self.n];
        (linalg::inner(fi, gi), linalg::norm(gi))
    }

    fn term(&self, g: &[C64], i: usize) -> f64 {
        let (z, gn) = self.pieces(g, i);
        self.q[i] * self.kind.combine(self.f_norm[i] * gn, z.norm())
    }

    /// `(max value, lowest index attaining it within the tie tolerance)`.
    fn evaluate(&self, g: &[C64]) -> (f64, usize) {
        let values: Vec<f64> = (0..self.len).map(|i| self.term(g, i)).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let cutoff = best - crate::erasure::TIE_REL * best.abs();
        let active = values.iter().position(|&v| v >= cutoff).unwrap_or(0);
        (best, active)
    }

    /// Complex gradient `d/dRe + i d/dIm` of term `i` with respect to each coefficient.
    fn term_gradient(&self, g: &[C64], i: usize, out: &mut [C64]) {
        out.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        let (z, gn) = self.pieces(g, i);
        let q = self.q[i];
        let (w_inner, w_norm) = match self.kind {
            MeasureKind::Norm => (0.0, q * self.f_norm[i]),
            MeasureKind::Radius => (q, 0.0),
            MeasureKind::Averaged => (0.5 * q, 0.5 * q * self.f_norm[i]),
        };
        // zero modulus / zero norm: take the zero element of the subdifferential
        let zn = z.norm();
        let inner_coef = if w_inner > 0.0 && zn > 0.0 { z.conj() * (w_inner / zn) } else { C64::new(0.0, 0.0) };
        let norm_coef = if w_norm > 0.0 && gn > 0.0 { w_norm / gn } else { 0.0 };
        for j in 0..self.n {
            let fij = self.f[i * self.n + j];
            let gij = g[i * self.n + j];
            let lead = inner_coef * fij + gij * norm_coef;
            for m in 0..self.null_dim {
                out[j * self.null_dim + m] = lead * self.k[i * self.null_dim + m];
            }
        }
    }
}

fn single_objective(f: &Frame, model: &ProbabilityModel, p: &DualParameterization, kind: MeasureKind) -> Result<Landscape> {
    let land = Landscape::new(f, model, p, kind)?;
    Ok(land)
}

/// Single-erasure objective `kind` at dual coordinates `c`.
pub fn objective_value(
    f: &Frame,
    model: &ProbabilityModel,
    p: &DualParameterization,
    c: &[C64],
    kind: MeasureKind,
) -> Result<f64> {
    let land = single_objective(f, model, p, kind)?;
    check_coeffs(&land, c)?;
    let mut g = vec![C64::new(0.0, 0.0); land.g0.len()];
    land.duals(c, &mut g);
    Ok(land.evaluate(&g).0)
}

fn check_coeffs(land: &Landscape, c: &[C64]) -> Result<()> {
    if c.len() != land.dim() {
        return Err(FrameError::DimensionMismatch(format!(
            "expected {} coefficients, got {}",
            land.dim(),
            c.len()
        )));
    }
    Ok(())
}

/// A subgradient of the single-erasure objective at `c`: the gradient of the
/// lowest-index active term. Component `k` is `d/dRe c_k + i d/dIm c_k`.
pub fn subgradient_of_objective(
    f: &Frame,
    model: &ProbabilityModel,
    p: &DualParameterization,
    c: &[C64],
    kind: MeasureKind,
) -> Result<Vec<C64>> {
    let land = single_objective(f, model, p, kind)?;
    check_coeffs(&land, c)?;
    let mut g = vec![C64::new(0.0, 0.0); land.g0.len()];
    land.duals(c, &mut g);
    let (_, active) = land.evaluate(&g);
    let mut out = vec![C64::new(0.0, 0.0); land.dim()];
    land.term_gradient(&g, active, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
struct RestartResult {
    value: f64,
    coeffs: Vec<C64>,
    iterations: usize,
    converged: bool,
}

fn run_restart(land: &Landscape, cfg: &SearchConfig, restart: usize, scale: f64) -> RestartResult {
    let dim = land.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut x: Vec<C64> = if restart == 0 {
        vec![C64::new(0.0, 0.0); dim]
    } else {
        (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im) * scale
            })
            .collect()
    };
    let mut g = vec![C64::new(0.0, 0.0); land.g0.len()];
    let mut grad = vec![C64::new(0.0, 0.0); dim];

    land.duals(&x, &mut g);
    let (mut value, mut active) = land.evaluate(&g);
    let mut best = value;
    let mut best_x = x.clone();
    let mut reference = best;
    let mut reference_iter = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;

    for k in 1..=cfg.max_iters {
        iterations = k;
        land.term_gradient(&g, active, &mut grad);
        let gnorm = grad.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            // 0 is a subgradient: x minimises the objective
            converged = true;
            break;
        }
        let step = cfg.step / (k as f64).sqrt() / gnorm;
        for (xi, gi) in x.iter_mut().zip(&grad) {
            *xi -= gi * step;
        }
        land.duals(&x, &mut g);
        (value, active) = land.evaluate(&g);
        if value < best {
            best = value;
            best_x.copy_from_slice(&x);
        }
        if best < reference - cfg.tol * reference.abs().max(1.0) {
            reference = best;
            reference_iter = k;
        } else if k - reference_iter >= cfg.stall_window {
            converged = true;
            break;
        }
    }
    let _ = value;
    RestartResult {
        value: best,
        coeffs: best_x,
        iterations,
        converged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub measure: MeasureKind,
    pub value: f64,
    pub canonical_value: f64,
    /// Dual coordinates of the returned dual.
    #[serde(with = "crate::io::complex_list")]
    pub coefficients: Vec<C64>,
    #[serde(serialize_with = "crate::io::serialize_frame", deserialize_with = "crate::io::deserialize_frame")]
    pub dual: Frame,
    pub best_restart: usize,
    pub restart_values: Vec<f64>,
    pub iterations: usize,
    /// `false` when some restart used its full iteration budget while still improving.
    pub converged: bool,
}

impl SearchOutcome {
    pub fn non_convergence(&self) -> bool {
        !self.converged
    }
}

/// Minimises a single-erasure objective over all duals of `f`.
///
/// Restart 0 starts at the canonical dual, so the returned value never exceeds
/// the canonical one. Restarts are independent and run in parallel; each owns
/// a ChaCha8 stream selected by its index. The minimum wins, ties go to the
/// lowest restart index.
pub fn search_optimal_dual(f: &Frame, model: &ProbabilityModel, cfg: &SearchConfig, kind: MeasureKind) -> Result<SearchOutcome> {
    cfg.validate()?;
    let p = dual_space(f)?;
    let land = Landscape::new(f, model, &p, kind)?;
    let canonical_value = one_erasure_value(f, &p.base, model, kind)?;

    if land.dim() == 0 {
        return Ok(SearchOutcome {
            measure: kind,
            value: canonical_value,
            canonical_value,
            coefficients: Vec::new(),
            dual: p.base.clone(),
            best_restart: 0,
            restart_values: vec![canonical_value],
            iterations: 0,
            converged: true,
        });
    }

    let scale = (0..f.len()).map(|i| p.base.norm_of(i)).fold(0.0, f64::max).max(1e-3);
    let results: Vec<RestartResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(&land, cfg, r, scale))
        .collect();

    let (best_restart, best) = results
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartResult)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.value <= r.value => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");

    let dual = dual_from_params(&p, &best.coeffs)?;
    Ok(SearchOutcome {
        measure: kind,
        value: best.value,
        canonical_value,
        coefficients: best.coeffs.clone(),
        dual,
        best_restart,
        restart_values: results.iter().map(|r| r.value).collect(),
        iterations: results.iter().map(|r| r.iterations).sum(),
        converged: results.iter().all(|r| r.converged),
    })
}

/// Single-erasure averaged-spectral optimal dual search.
pub fn pasod_search(f: &Frame, model: &ProbabilityModel, cfg: &SearchConfig) -> Result<SearchOutcome> {
    search_optimal_dual(f, model, cfg, MeasureKind::Averaged)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    #[serde(rename = "canonical-is-PASOD-sufficient")]
    CanonicalPasodSufficient,
    #[serde(rename = "unique-POD")]
    UniquePod,
    #[serde(rename = "unique-PASOD")]
    UniquePasod,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonUniquenessWitness {
    pub epsilon: f64,
    pub halvings: usize,
    pub canonical_value: f64,
    pub witness_value: f64,
    pub dual: Vec<Vec<ComplexPair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCertificate {
    pub kind: CertificateKind,
    /// Whether the tested condition holds. For the iff criteria a `false`
    /// here means the canonical dual is not the unique optimum.
    pub holds: bool,
    /// `l`, `c` or the common value of `q_i ||f_i||^2`, depending on the check.
    pub threshold: f64,
    /// Indices attaining the threshold (1-based).
    pub attaining: Vec<usize>,
    /// The complement (1-based).
    pub remaining: Vec<usize>,
    pub per_index: Vec<f64>,
    pub spans_intersect_trivially: Option<bool>,
    pub independent: Option<bool>,
    pub tight: bool,
    pub witness: Option<NonUniquenessWitness>,
}

fn partition(values: &[f64], tie: f64) -> (f64, Vec<usize>, Vec<usize>) {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = top - tie * top.abs();
    let (a, b): (Vec<usize>, Vec<usize>) = (0..values.len()).partition(|&i| values[i] >= cutoff);
    (top, a, b)
}

fn span_rank(f: &Frame, idx: &[usize], rel: f64) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let cols = CMatrix::from_fn(f.dimension(), idx.len(), |r, col| f.synthesis()[(r, idx[col])]);
    linalg::rank(&cols, rel)
}

/// `(span{f_i : i in a} ∩ span{f_i : i in b} = {0}, {f_i : i in indep} independent)`.
fn span_conditions(f: &Frame, a: &[usize], b: &[usize], indep: &[usize], rel: f64) -> (bool, bool) {
    let all: Vec<usize> = a.iter().chain(b).copied().collect();
    let trivially = span_rank(f, &all, rel) == span_rank(f, a, rel) + span_rank(f, b, rel);
    let independent = span_rank(f, indep, rel) == indep.len();
    (trivially, independent)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Sufficient condition for the canonical dual to minimise the averaged
/// single-erasure measure.
///
/// With `l = max_i q_i (||S^{-1/2} f_i||^2 + ||f_i|| ||S^{-1} f_i||)`, `L1` the
/// indices attaining `l` and `L2` the rest, the canonical dual is optimal when
/// `span(L1) ∩ span(L2) = {0}` and `{f_i}_{L1}` is independent. When `N > n`
/// a second optimal dual is then built by moving the canonical dual a small
/// step along a null direction supported on `L2`.
pub fn check_canonical_pasod_sufficient(f: &Frame, model: &ProbabilityModel) -> Result<OptimalityCertificate> {
    let tol = Tolerances::default();
    let s = frame::frame_operator(f)?;
    let canon = Frame::from_synthesis(s.solve(f.synthesis()))?;
    if model.q.len() != f.len() {
        return Err(FrameError::DimensionMismatch("weights and frame differ in length".into()));
    }
    // ||S^{-1/2} f||^2 = <S^{-1} f, f>
    let per_index: Vec<f64> = (0..f.len())
        .map(|i| model.q[i] * (canon.inner_at(f, i).re + f.norm_of(i) * canon.norm_of(i)))
        .collect();
    let (l, lam1, lam2) = partition(&per_index, tol.tie_rel);
    let (trivially, independent) = span_conditions(f, &lam1, &lam2, &lam1, tol.rank_rel);
    let holds = trivially && independent;
    let witness = if holds && f.len() > f.dimension() {
        build_witness(f, model, &canon, &lam2, l)?
    } else {
        None
    };
    Ok(OptimalityCertificate {
        kind: if holds {
            CertificateKind::CanonicalPasodSufficient
        } else {
            CertificateKind::Inconclusive
        },
        holds,
        threshold: l,
        attaining: one_based(&lam1),
        remaining: one_based(&lam2),
        per_index,
        spans_intersect_trivially: Some(trivially),
        independent: Some(independent),
        tight: frame::is_tight(f, 1e-9)?,
        witness,
    })
}

const WITNESS_START: f64 = 1e-2;
const WITNESS_HALVINGS: usize = 60;

fn build_witness(
    f: &Frame,
    model: &ProbabilityModel,
    canon: &Frame,
    lam2: &[usize],
    l: f64,
) -> Result<Option<NonUniquenessWitness>> {
    let p = dual_space(f)?;
    if p.dim() == 0 {
        return Ok(None);
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); p.dim()];
    let canonical_value = one_erasure_value(f, canon, model, MeasureKind::Averaged)?;
    let mut eps = WITNESS_START;
    for halvings in 0..=WITNESS_HALVINGS {
        coeffs[0] = C64::new(eps, 0.0);
        let g = dual_from_params(&p, &coeffs)?;
        let below = lam2.iter().all(|&i| {
            let term = model.q[i] * (f.inner_at(&g, i).norm() + f.norm_of(i) * g.norm_of(i));
            term < l
        });
        if below {
            let witness_value = one_erasure_value(f, &g, model, MeasureKind::Averaged)?;
            return Ok(Some(NonUniquenessWitness {
                epsilon: eps,
                halvings,
                canonical_value,
                witness_value,
                dual: vectors_to_pairs(&g),
            }));
        }
        eps *= 0.5;
    }
    Ok(None)
}

fn constant_weighted_norms(f: &Frame, model: &ProbabilityModel, rel: f64) -> (bool, f64, Vec<f64>) {
    let vals: Vec<f64> = (0..f.len()).map(|i| model.q[i] * f.norm_of(i).powi(2)).collect();
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    (hi - lo <= rel * hi.abs(), hi, vals)
}

/// Uniqueness of the canonical dual as the single-erasure operator-norm
/// optimum.
///
/// Tight frames: unique iff `q_i ||f_i||^2` is constant. Otherwise, with
/// `c = max_i q_i ||S^{-1} f_i|| ||f_i||`, `E1` the attaining indices and `E2`
/// the rest: unique iff `span(E1) ∩ span(E2) = {0}` and `{f_i}_{E2}` is
/// independent.
pub fn check_unique_pod(f: &Frame, model: &ProbabilityModel) -> Result<OptimalityCertificate> {
    let tol = Tolerances::default();
    if model.q.len() != f.len() {
        return Err(FrameError::DimensionMismatch("weights and frame differ in length".into()));
    }
    let tight = frame::is_tight(f, 1e-9)?;
    if tight {
        let (holds, c, per_index) = constant_weighted_norms(f, model, tol.certificate);
        return Ok(OptimalityCertificate {
            kind: if holds { CertificateKind::UniquePod } else { CertificateKind::Inconclusive },
            holds,
            threshold: c,
            attaining: if holds { (1..=f.len()).collect() } else { Vec::new() },
            remaining: Vec::new(),
            per_index,
            spans_intersect_trivially: None,
            independent: None,
            tight,
            witness: None,
        });
    }
    let canon = canonical_dual(f)?;
    let per_index: Vec<f64> = (0..f.len()).map(|i| model.q[i] * canon.norm_of(i) * f.norm_of(i)).collect();
    let (c, eta1, eta2) = partition(&per_index, tol.tie_rel);
    let (trivially, independent) = span_conditions(f, &eta1, &eta2, &eta2, tol.rank_rel);
    let holds = trivially && independent;
    Ok(OptimalityCertificate {
        kind: if holds { CertificateKind::UniquePod } else { CertificateKind::Inconclusive },
        holds,
        threshold: c,
        attaining: one_based(&eta1),
        remaining: one_based(&eta2),
        per_index,
        spans_intersect_trivially: Some(trivially),
        independent: Some(independent),
        tight,
        witness: None,
    })
}

fn require_tight(f: &Frame) -> Result<()> {
    let (lower, upper) = frame::frame_bounds(f)?;
    if upper - lower > 1e-9 * upper {
        return Err(FrameError::NotTight { lower, upper });
    }
    Ok(())
}

/// For a tight frame the canonical dual is the unique averaged-spectral
/// optimum iff `q_i ||f_i||^2` equals one constant `c` for all `i`.
pub fn check_unique_pasod_tight(f: &Frame, model: &ProbabilityModel) -> Result<OptimalityCertificate> {
    require_tight(f)?;
    if model.q.len() != f.len() {
        return Err(FrameError::DimensionMismatch("weights and frame differ in length".into()));
    }
    let (holds, c, per_index) = constant_weighted_norms(f, model, Tolerances::default().certificate);
    Ok(OptimalityCertificate {
        kind: if holds { CertificateKind::UniquePasod } else { CertificateKind::Inconclusive },
        holds,
        threshold: c,
        attaining: if holds { (1..=f.len()).collect() } else { Vec::new() },
        remaining: Vec::new(),
        per_index,
        spans_intersect_trivially: None,
        independent: None,
        tight: true,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub measure: MeasureKind,
    pub canonical_value: f64,
    pub searched_value: f64,
    pub canonical_is_optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightEquivalenceReport {
    pub pod: Membership,
    pub psod: Membership,
    pub pasod: Membership,
    pub agree: bool,
    /// Common verdict when the three agree, the PASOD membership otherwise.
    pub verdict: bool,
}

/// Relative gap below which a searched value counts as "not better" than the
/// canonical one.
pub const OPTIMALITY_GAP: f64 = 1e-6;

/// For a tight frame, decides whether the canonical dual is optimal under each
/// of `O`, `r` and `A` by comparing against a search under the same objective.
pub fn tight_equivalences(f: &Frame, model: &ProbabilityModel, cfg: &SearchConfig) -> Result<TightEquivalenceReport> {
    require_tight(f)?;
    let member = |kind: MeasureKind| -> Result<Membership> {
        let out = search_optimal_dual(f, model, cfg, kind)?;
        let gap = OPTIMALITY_GAP * out.canonical_value.abs().max(1.0);
        Ok(Membership {
            measure: kind,
            canonical_value: out.canonical_value,
            searched_value: out.value,
            canonical_is_optimal: out.value >= out.canonical_value - gap,
        })
    };
    let pod = member(MeasureKind::Norm)?;
    let psod = member(MeasureKind::Radius)?;
    let pasod = member(MeasureKind::Averaged)?;
    let agree = pod.canonical_is_optimal == pasod.canonical_is_optimal
        && psod.canonical_is_optimal == pasod.canonical_is_optimal;
    let verdict = pasod.canonical_is_optimal;
    Ok(TightEquivalenceReport {
        pod,
        psod,
        pasod,
        agree,
        verdict,
    })
}

/// `A(UF, UG) == A(F, G)` to `1e-12` (relative to `max(1, A)`).
pub fn unitary_invariance_check(f: &Frame, g: &Frame, u: &CMatrix, model: &ProbabilityModel) -> Result<bool> {
    let uf = apply_unitary(u, f)?;
    let ug = apply_unitary(u, g)?;
    let before = one_erasure_value(f, g, model, MeasureKind::Averaged)?;
    let after = one_erasure_value(&uf, &ug, model, MeasureKind::Averaged)?;
    Ok((before - after).abs() <= 1e-12 * before.abs().max(1.0))
}
