//! Numerical tolerances shared by the checkers.
//!
//! Precedence when resolved from the environment: explicit value, then the
//! `FRAMEOPT_TOL` variable, then the built-in default.

use serde::{Deserialize, Serialize};

pub const ENV_VAR: &str = "FRAMEOPT_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute max-norm tolerance for Hermitian / unitary checks.
    pub sym: f64,
    /// Absolute max-norm tolerance on `T_G T_F^* - I`.
    pub dual: f64,
    /// Singular values below `max(n, N) * sigma_max * rank_rel` count as zero.
    pub rank_rel: f64,
    /// Relative tolerance for argmax ties.
    pub tie_rel: f64,
    /// Tolerance for the per-index certificate conditions (constancy, pair residuals).
    pub certificate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-10,
            dual: 1e-10,
            rank_rel: 1e-12,
            tie_rel: 1e-9,
            certificate: 1e-9,
        }
    }
}

impl Tolerances {
    /// Overrides `sym` and `dual` with a single value.
    pub fn with_abs(mut self, tol: f64) -> Self {
        self.sym = tol;
        self.dual = tol;
        self
    }

    /// Resolves tolerances as flag > env > default. An unparsable env value is
    /// reported as `Err` with the raw string.
    pub fn resolve(flag: Option<f64>) -> Result<Self, String> {
        if let Some(tol) = flag {
            return Ok(Self::default().with_abs(tol));
        }
        match std::env::var(ENV_VAR) {
            Ok(raw) => raw
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|t| t.is_finite() && *t > 0.0)
                .map(|t| Self::default().with_abs(t))
                .ok_or(raw),
            Err(_) => Ok(Self::default()),
        }
    }
}
