//! Probability and weight sequences, the weighted error operator and the
//! worst-case erasure measures.
//!
//! For an erasure pattern `L` the error operator is
//! `E_L f = sum_{i in L} q_i <f, f_i> g_i`. Three worst-case measures are
//! maximised over all patterns of a given size `m`:
//!
//! * `O` — operator norm,
//! * `r` — spectral radius,
//! * `A` — the average `(norm + radius) / 2`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::frame::Frame;
use crate::linalg::{self, CMatrix, C64};

/// Slack on `sum p_i = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityModel {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Ambient dimension the weights were computed for.
    pub dimension: usize,
}

impl ProbabilityModel {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Set when some `q_i < 1`, which happens only when `N = n` and `p` is not
    /// uniform. Such weights cannot be realised by a probability-uniform
    /// Parseval frame.
    pub fn has_weight_below_one(&self) -> bool {
        self.q.iter().any(|&q| q < 1.0)
    }

    /// Unit weights: every erased coefficient counts once.
    pub fn unweighted(&self) -> ProbabilityModel {
        ProbabilityModel {
            p: self.p.clone(),
            q: vec![1.0; self.q.len()],
            dimension: self.dimension,
        }
    }
}

/// Weight numbers `q_i = (sum p / (sum p - p_i)) * (N - 1) / n`.
pub fn weights_from_probabilities(p: &[f64], n: usize) -> Result<ProbabilityModel> {
    let big_n = p.len();
    if big_n == 0 || n == 0 {
        return Err(FrameError::Empty);
    }
    if big_n < n {
        return Err(FrameError::DimensionMismatch(format!(
            "{big_n} probabilities for dimension {n}; need N >= n"
        )));
    }
    if let Some((index, &value)) = p
        .iter()
        .enumerate()
        .find(|(_, &x)| !(0.0..=1.0).contains(&x) || x.is_nan())
    {
        return Err(FrameError::InvalidProbability { index, value });
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(FrameError::NotNormalized { sum });
    }
    if let Some(index) = p.iter().position(|&x| x == 1.0) {
        return Err(FrameError::DegenerateProbability { index });
    }
    let ratio = (big_n - 1) as f64 / n as f64;
    let q = p.iter().map(|&pi| sum / (sum - pi) * ratio).collect();
    Ok(ProbabilityModel {
        p: p.to_vec(),
        q,
        dimension: n,
    })
}

/// Sorted set of distinct erased indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ErasurePattern {
    indices: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(mut indices: Vec<usize>, len: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(FrameError::InvalidPattern(format!("repeated index in {indices:?}")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= len) {
            return Err(FrameError::InvalidPattern(format!("index {bad} out of range 0..{len}")));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn multiplicity(&self) -> usize {
        self.indices.len()
    }

    /// 1-based indices, as used in reports.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

/// All patterns of size `m` out of `len`, lexicographic.
pub fn patterns(len: usize, m: usize) -> impl Iterator<Item = ErasurePattern> {
    (0..len).combinations(m).map(|indices| ErasurePattern { indices })
}

#[derive(Debug, Clone)]
pub struct ErrorOperator {
    pub matrix: CMatrix,
    pub pattern: ErasurePattern,
}

fn check_pair(f: &Frame, g: &Frame, weights: &[f64]) -> Result<()> {
    if f.dimension() != g.dimension() || f.len() != g.len() || f.len() != weights.len() {
        return Err(FrameError::DimensionMismatch(format!(
            "F is {}x{}, G is {}x{}, {} weights",
            f.dimension(),
            f.len(),
            g.dimension(),
            g.len(),
            weights.len()
        )));
    }
    Ok(())
}

fn weighted_error_matrix(f: &Frame, g: &Frame, weights: &[f64], pattern: &ErasurePattern) -> CMatrix {
    let n = f.dimension();
    let mut e = CMatrix::zeros(n, n);
    for &i in pattern.indices() {
        let gi = g.synthesis().column(i);
        let fi = f.synthesis().column(i);
        e += (gi * fi.adjoint()) * C64::new(weights[i], 0.0);
    }
    e
}

/// `E_{L,(F,G)} = sum_{i in L} q_i g_i f_i^*`.
pub fn error_operator(
    f: &Frame,
    g: &Frame,
    pattern: &ErasurePattern,
    model: &ProbabilityModel,
) -> Result<ErrorOperator> {
    check_pair(f, g, &model.q)?;
    if pattern.indices().iter().any(|&i| i >= f.len()) {
        return Err(FrameError::InvalidPattern(format!("{:?} exceeds N = {}", pattern.one_based(), f.len())));
    }
    Ok(ErrorOperator {
        matrix: weighted_error_matrix(f, g, &model.q, pattern),
        pattern: pattern.clone(),
    })
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    linalg::operator_norm(m)
}

pub fn spectral_radius(m: &CMatrix) -> f64 {
    linalg::spectral_radius(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    #[serde(rename = "O")]
    Norm,
    #[serde(rename = "r")]
    Radius,
    #[serde(rename = "A")]
    Averaged,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [MeasureKind::Radius, MeasureKind::Norm, MeasureKind::Averaged];

    pub fn combine(self, norm: f64, rho: f64) -> f64 {
        match self {
            MeasureKind::Norm => norm,
            MeasureKind::Radius => rho,
            MeasureKind::Averaged => 0.5 * (norm + rho),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MeasureKind::Norm => "O",
            MeasureKind::Radius => "r",
            MeasureKind::Averaged => "A",
        }
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "O" => Ok(MeasureKind::Norm),
            "r" => Ok(MeasureKind::Radius),
            "A" => Ok(MeasureKind::Averaged),
            other => Err(format!("unknown measure `{other}` (expected O, r or A)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternMeasure {
    /// 1-based.
    pub pattern: Vec<usize>,
    pub norm: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: MeasureKind,
    pub m: usize,
    pub value: f64,
    /// Every pattern within the tie tolerance of the maximum, 1-based, lexicographic.
    pub argmax: Vec<Vec<usize>>,
    pub per_pattern: Vec<PatternMeasure>,
}

/// Relative tie tolerance used for argmax sets.
pub const TIE_REL: f64 = 1e-9;

fn summarize(kind: MeasureKind, m: usize, per_pattern: Vec<PatternMeasure>) -> MeasureReport {
    let scores: Vec<f64> = per_pattern.iter().map(|pm| kind.combine(pm.norm, pm.rho)).collect();
    let value = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = value - TIE_REL * value.abs();
    let argmax = per_pattern
        .iter()
        .zip(&scores)
        .filter(|(_, &s)| s >= cutoff)
        .map(|(pm, _)| pm.pattern.clone())
        .collect();
    MeasureReport {
        measure: kind,
        m,
        value,
        argmax,
        per_pattern,
    }
}

/// Norm and spectral radius of the error operator for every pattern of size
/// `m`, exhaustively and in lexicographic order. The frames are not required to
/// be dual; the measures are evaluated as given.
pub fn pattern_measures(f: &Frame, g: &Frame, weights: &[f64], m: usize) -> Result<Vec<PatternMeasure>> {
    check_pair(f, g, weights)?;
    if m == 0 || m > f.len() {
        return Err(FrameError::BadMultiplicity { m, len: f.len() });
    }
    Ok(patterns(f.len(), m)
        .map(|pattern| {
            let e = weighted_error_matrix(f, g, weights, &pattern);
            PatternMeasure {
                pattern: pattern.one_based(),
                norm: linalg::operator_norm(&e),
                rho: linalg::spectral_radius(&e),
            }
        })
        .collect())
}

pub fn measure(f: &Frame, g: &Frame, model: &ProbabilityModel, m: usize, kind: MeasureKind) -> Result<MeasureReport> {
    Ok(summarize(kind, m, pattern_measures(f, g, &model.q, m)?))
}

/// All three measures from one pass over the patterns, ordered `r, O, A`.
pub fn measure_all(f: &Frame, g: &Frame, model: &ProbabilityModel, m: usize) -> Result<Vec<MeasureReport>> {
    let per = pattern_measures(f, g, &model.q, m)?;
    Ok(MeasureKind::ALL.iter().map(|&k| summarize(k, m, per.clone())).collect())
}

pub fn measure_o(f: &Frame, g: &Frame, model: &ProbabilityModel, m: usize) -> Result<MeasureReport> {
    measure(f, g, model, m, MeasureKind::Norm)
}

pub fn measure_r(f: &Frame, g: &Frame, model: &ProbabilityModel, m: usize) -> Result<MeasureReport> {
    measure(f, g, model, m, MeasureKind::Radius)
}

pub fn measure_a(f: &Frame, g: &Frame, model: &ProbabilityModel, m: usize) -> Result<MeasureReport> {
    measure(f, g, model, m, MeasureKind::Averaged)
}

/// Per-index `(q_i ||f_i|| ||g_i||, q_i |<f_i, g_i>|)` — the norm and spectral
/// radius of the rank-one operator for a single erasure at `i`.
pub fn one_erasure_terms(f: &Frame, g: &Frame, weights: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_pair(f, g, weights)?;
    Ok((0..f.len())
        .map(|i| {
            let q = weights[i];
            (q * f.norm_of(i) * g.norm_of(i), q * f.inner_at(g, i).norm())
        })
        .collect())
}

/// Single-erasure `A` measure from the rank-one closed form.
pub fn one_erasure_closed_form(f: &Frame, g: &Frame, model: &ProbabilityModel) -> Result<MeasureReport> {
    let per = one_erasure_terms(f, g, &model.q)?
        .into_iter()
        .enumerate()
        .map(|(i, (norm, rho))| PatternMeasure {
            pattern: vec![i + 1],
            norm,
            rho,
        })
        .collect();
    Ok(summarize(MeasureKind::Averaged, 1, per))
}

/// Closed-form single-erasure value for any of the three measures.
pub fn one_erasure_value(f: &Frame, g: &Frame, model: &ProbabilityModel, kind: MeasureKind) -> Result<f64> {
    Ok(one_erasure_terms(f, g, &model.q)?
        .into_iter()
        .map(|(norm, rho)| kind.combine(norm, rho))
        .fold(f64::NEG_INFINITY, f64::max))
}
