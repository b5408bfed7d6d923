//! Monte Carlo erasure channel.
//!
//! Each trial erases `m` coefficients chosen by sequential weighted sampling
//! without replacement from the erasure probabilities and measures the
//! reconstruction error on random unit signals. Trial `t` draws from the
//! ChaCha8 stream `t` of the configured seed, so reports do not depend on how
//! trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::erasure::{error_operator, measure_o, ErasurePattern, ProbabilityModel};
use crate::error::{FrameError, Result};
use crate::frame::{self, duality_residual, Frame};
use crate::linalg::{CVector, C64};
use crate::tolerance::Tolerances;

/// Recorded in every report.
pub const PRNG_ID: &str = "ChaCha8Rng(rand_chacha 0.9) seed_from_u64(seed), stream = trial index";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// `||sum_{i in L} <f, f_i> g_i||`
    Raw,
    /// `||E_L f||` with the weights `q_i`
    Weighted,
}

impl std::str::FromStr for SimMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "raw" => Ok(SimMode::Raw),
            "weighted" => Ok(SimMode::Weighted),
            other => Err(format!("unknown mode `{other}` (expected raw or weighted)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: usize,
    pub signals: usize,
    pub m: usize,
    pub seed: u64,
    pub mode: SimMode,
    /// Max-norm tolerance of the duality check.
    #[serde(default = "default_dual_tol")]
    pub dual_tol: f64,
}

fn default_dual_tol() -> f64 {
    Tolerances::default().dual
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            signals: 1,
            m: 1,
            seed: 0,
            mode: SimMode::Weighted,
            dual_tol: default_dual_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCount {
    /// 1-based.
    pub pattern: Vec<usize>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub prng: String,
    pub config: SimConfig,
    pub samples: u64,
    pub max_error: f64,
    pub mean_error: f64,
    /// Worst-case operator norm over all patterns of size `m` for the mode's weights.
    pub bound: f64,
    /// `max_error / bound`
    pub ratio: f64,
    /// Patterns that occurred, lexicographic.
    pub pattern_counts: Vec<PatternCount>,
}

impl SimReport {
    /// Empirical frequency of each index as an erased coefficient, divided by `m`.
    pub fn index_frequencies(&self, len: usize) -> Vec<f64> {
        let mut freq = vec![0.0; len];
        let total = self.config.trials as f64 * self.config.m as f64;
        for pc in &self.pattern_counts {
            for &i in &pc.pattern {
                freq[i - 1] += pc.count as f64 / total;
            }
        }
        freq
    }
}

/// Sequential weighted sampling without replacement: after each draw the
/// remaining probabilities are renormalised. Zero-probability indices are only
/// drawn once all remaining mass is zero, then uniformly.
pub fn sample_pattern<R: Rng>(p: &[f64], m: usize, rng: &mut R) -> Vec<usize> {
    let mut remaining: Vec<usize> = (0..p.len()).collect();
    let mut chosen = Vec::with_capacity(m);
    for _ in 0..m {
        let mass: f64 = remaining.iter().map(|&i| p[i]).sum();
        let k = if mass > 0.0 {
            let u = rng.random::<f64>() * mass;
            let mut acc = 0.0;
            let mut pick = None;
            for (k, &i) in remaining.iter().enumerate() {
                if p[i] > 0.0 {
                    acc += p[i];
                    pick = Some(k);
                    if u < acc {
                        break;
                    }
                }
            }
            pick.expect("positive mass has a positive entry")
        } else {
            rng.random_range(0..remaining.len())
        };
        chosen.push(remaining.remove(k));
    }
    chosen.sort_unstable();
    chosen
}

fn unit_signal<R: Rng>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        let norm = v.norm();
        if norm > 0.0 {
            return v.unscale(norm);
        }
    }
}

struct Trial {
    pattern: Vec<usize>,
    max: f64,
    sum: f64,
}

pub fn simulate(f: &Frame, g: &Frame, model: &ProbabilityModel, cfg: &SimConfig) -> Result<SimReport> {
    if cfg.trials == 0 || cfg.signals == 0 {
        return Err(FrameError::DimensionMismatch("trials and signals must be positive".into()));
    }
    if cfg.m == 0 || cfg.m > f.len() {
        return Err(FrameError::BadMultiplicity { m: cfg.m, len: f.len() });
    }
    if model.len() != f.len() {
        return Err(FrameError::DimensionMismatch("weights and frame differ in length".into()));
    }
    if !frame::is_dual(f, g, cfg.dual_tol)? {
        return Err(FrameError::NotDual(duality_residual(f, g)?.0));
    }
    let weights_model = match cfg.mode {
        SimMode::Raw => model.unweighted(),
        SimMode::Weighted => model.clone(),
    };
    let bound = measure_o(f, g, &weights_model, cfg.m)?.value;
    let n = f.dimension();

    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64);
            let pattern = sample_pattern(&model.p, cfg.m, &mut rng);
            let pat = ErasurePattern::new(pattern.clone(), f.len()).expect("sampled pattern is valid");
            let e = error_operator(f, g, &pat, &weights_model).expect("shapes checked").matrix;
            let mut max = 0.0f64;
            let mut sum = 0.0;
            for _ in 0..cfg.signals {
                let x = unit_signal(n, &mut rng);
                let err = (&e * x).norm();
                max = max.max(err);
                sum += err;
            }
            Trial { pattern, max, sum }
        })
        .collect();

    let mut counts = std::collections::BTreeMap::<Vec<usize>, u64>::new();
    let mut max_error = 0.0f64;
    let mut total = 0.0;
    for t in &trials {
        max_error = max_error.max(t.max);
        total += t.sum;
        *counts.entry(t.pattern.iter().map(|i| i + 1).collect()).or_default() += 1;
    }
    let samples = (cfg.trials * cfg.signals) as u64;
    Ok(SimReport {
        prng: PRNG_ID.to_string(),
        config: cfg.clone(),
        samples,
        max_error,
        mean_error: total / samples as f64,
        bound,
        ratio: if bound > 0.0 { max_error / bound } else { 0.0 },
        pattern_counts: counts
            .into_iter()
            .map(|(pattern, count)| PatternCount { pattern, count })
            .collect(),
    })
}
