use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default value of the assumption slack ε.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Reference value of Otter's constant used by assumption checks.
pub const OTTER_ALPHA: f64 = 0.3383;

/// Model parameters `(n, λ, s)` of the correlated pair, plus the slack ε used
/// by [`check_assumptions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub lambda: f64,
    pub s: f64,
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(n: usize, lambda: f64, s: f64) -> Result<Self> {
        Self::with_epsilon(n, lambda, s, DEFAULT_EPSILON)
    }

    pub fn with_epsilon(n: usize, lambda: f64, s: f64, epsilon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterDomain("n must be positive".into()));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "lambda = {lambda} must be > 0"
            )));
        }
        // λ = n (p = 1) is kept for the complete-graph boundary case.
        if lambda > n as f64 {
            return Err(Error::ParameterDomain(format!(
                "lambda = {lambda} exceeds n = {n}; edge probability must be <= 1"
            )));
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::ParameterDomain(format!(
                "s = {s} must lie in [0, 1]"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 0.1) {
            return Err(Error::ParameterDomain(format!(
                "epsilon = {epsilon} must lie in (0, 0.1)"
            )));
        }
        Ok(Self {
            n,
            lambda,
            s,
            epsilon,
        })
    }

    /// Parent edge probability `λ/n`.
    pub fn p(&self) -> f64 {
        self.lambda / self.n as f64
    }

    /// Correlation `s(1-p)/(1-ps)`; equal to 1 at `s = 1`.
    pub fn rho(&self) -> f64 {
        if self.s == 1.0 {
            return 1.0;
        }
        let p = self.p();
        self.s * (1.0 - p) / (1.0 - p * self.s)
    }

    /// Marginal edge probability of either graph, `λs/n`.
    pub fn marginal_edge_prob(&self) -> f64 {
        self.p() * self.s
    }

    /// Edge probability of the intersection graph, `λs²/n`.
    pub fn intersection_edge_prob(&self) -> f64 {
        self.p() * self.s * self.s
    }

    /// Number of unordered pairs `C(n, 2)`.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }
}

/// Outcome of [`check_assumptions`]. Both `λs²` and `λ²s` are reported; only
/// the former enters the cycle and moment bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub lambda_s2: f64,
    pub lambda2_s: f64,
    pub s2: f64,
    pub epsilon: f64,
    /// `λs² < 1 - ε`
    pub lambda_s2_ok: bool,
    /// `λ²s < 1 - ε`, informational
    pub lambda2_s_ok: bool,
    /// `s² < α - ε`
    pub s2_below_alpha: bool,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.lambda_s2_ok && self.s2_below_alpha
    }
}

pub fn check_assumptions(params: &ModelParams) -> AssumptionReport {
    let ModelParams {
        lambda, s, epsilon, ..
    } = *params;
    let lambda_s2 = lambda * s * s;
    let lambda2_s = lambda * lambda * s;
    let s2 = s * s;
    AssumptionReport {
        lambda_s2,
        lambda2_s,
        s2,
        epsilon,
        lambda_s2_ok: lambda_s2 < 1.0 - epsilon,
        lambda2_s_ok: lambda2_s < 1.0 - epsilon,
        s2_below_alpha: s2 < OTTER_ALPHA - epsilon,
    }
}
