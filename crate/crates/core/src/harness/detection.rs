//! Detection threshold, total-variation estimates and likelihood-ratio test
//! power.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::likelihood::{for_each_graph, overlap_histogram, LikelihoodRatio, MAX_ENUMERATION_N};
use crate::model::{sample_correlated, sample_null, ModelParams, OTTER_ALPHA};
use crate::rng::derive_seed;
use crate::stats::{proportion, Estimate, RunningMean};

/// `min(1/√λ, √α)` with the reference Otter constant.
pub fn detection_threshold(lambda: f64) -> Result<f64> {
    detection_threshold_with(lambda, OTTER_ALPHA)
}

pub fn detection_threshold_with(lambda: f64, alpha: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "lambda = {lambda} must be > 0"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParameterDomain(format!(
            "alpha = {alpha} must lie in (0, 1)"
        )));
    }
    Ok((1.0 / lambda.sqrt()).min(alpha.sqrt()))
}

fn check_mc_n(n: usize) -> Result<()> {
    if n > crate::second_moment::MAX_MONTE_CARLO_N {
        return Err(Error::Capacity {
            what: "vertex count for exact-L Monte Carlo",
            value: n,
            limit: crate::second_moment::MAX_MONTE_CARLO_N,
        });
    }
    Ok(())
}

/// Paired draws of `L` under the planted model and the null; draw `t` of
/// each arm uses child seeds `2t` and `2t + 1`.
fn paired_likelihoods(
    params: &ModelParams,
    trials: u64,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_mc_n(params.n)?;
    if trials == 0 {
        return Err(Error::ParameterDomain("trials must be >= 1".into()));
    }
    let lr = LikelihoodRatio::new(params)?;
    let mut planted = Vec::with_capacity(trials as usize);
    let mut null = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let smp = sample_correlated(params, derive_seed(seed, 2 * t))?;
        planted.push(lr.eval(&smp.left, &smp.right)?);
        let (a, b) = sample_null(params, derive_seed(seed, 2 * t + 1))?;
        null.push(lr.eval(&a, &b)?);
    }
    Ok((planted, null))
}

/// Total variation `TV(P, Q)`.
///
/// Under the balanced mixture `M = (P + Q)/2`, `dQ/dM = 2/(1 + L)`, so
/// `TV = ½ E_Q|L - 1| = E_M[|L - 1| / (L + 1)]`. The integrand lies in
/// `[0, 1]`; the mixture is sampled stratified, one draw from each arm per
/// trial.
pub fn estimate_tv(params: &ModelParams, trials: u64, seed: u64) -> Result<Estimate> {
    let (planted, null) = paired_likelihoods(params, trials, seed)?;
    let score = |l: &f64| (l - 1.0).abs() / (l + 1.0);
    let p: RunningMean = planted.iter().map(score).collect();
    let q: RunningMean = null.iter().map(score).collect();
    Ok(Estimate {
        value: 0.5 * (p.mean() + q.mean()),
        se: 0.5 * (p.std_error().powi(2) + q.std_error().powi(2)).sqrt(),
    })
}

/// `½ Σ_{A,B} Q(A, B) |L(A, B) - 1|` over every pair of graphs (`n ≤ 4`).
pub fn exact_tv(params: &ModelParams) -> Result<f64> {
    let n = params.n;
    if n > MAX_ENUMERATION_N {
        return Err(Error::Capacity {
            what: "vertex count for full pair enumeration",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    let lr = LikelihoodRatio::new(params)?;
    let q1 = params.marginal_edge_prob();
    let pairs = n * n.saturating_sub(1) / 2;
    let mut graphs = Vec::new();
    for_each_graph(n, |g| graphs.push(g.clone()));
    let mut total = 0.0;
    for a in &graphs {
        for b in &graphs {
            let hist = overlap_histogram(a, b)?;
            let l = lr
                .log_from_histogram(&hist, a.edge_count(), b.edge_count())
                .exp();
            let qa =
                q1.powi(a.edge_count() as i32) * (1.0 - q1).powi((pairs - a.edge_count()) as i32);
            let qb =
                q1.powi(b.edge_count() as i32) * (1.0 - q1).powi((pairs - b.edge_count()) as i32);
            total += qa * qb * (l - 1.0).abs();
        }
    }
    Ok(0.5 * total)
}

/// Errors and AUC of the test that rejects the null when `L > threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerReport {
    pub threshold: f64,
    pub trials: u64,
    pub type_one: Estimate,
    pub type_two: Estimate,
    pub auc: Estimate,
}

/// Mann–Whitney AUC `P(X > Y) + ½ P(X = Y)` with the Hanley–McNeil SE.
pub fn auc(positives: &[f64], negatives: &[f64]) -> Estimate {
    let mut neg = negatives.to_vec();
    neg.sort_by(f64::total_cmp);
    let mut wins = 0.0;
    for &x in positives {
        let below = neg.partition_point(|&y| y < x);
        let not_above = neg.partition_point(|&y| y <= x);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    let (np, nn) = (positives.len() as f64, negatives.len() as f64);
    let a = wins / (np * nn);
    let q1 = a / (2.0 - a);
    let q2 = 2.0 * a * a / (1.0 + a);
    let var = (a * (1.0 - a) + (np - 1.0) * (q1 - a * a) + (nn - 1.0) * (q2 - a * a)) / (np * nn);
    Estimate {
        value: a,
        se: var.max(0.0).sqrt(),
    }
}

pub fn lr_test_power(
    params: &ModelParams,
    threshold: f64,
    trials: u64,
    seed: u64,
) -> Result<PowerReport> {
    let (planted, null) = paired_likelihoods(params, trials, seed)?;
    let false_alarms = null.iter().filter(|&&l| l > threshold).count() as u64;
    let misses = planted.iter().filter(|&&l| l <= threshold).count() as u64;
    Ok(PowerReport {
        threshold,
        trials,
        type_one: proportion(false_alarms, trials),
        type_two: proportion(misses, trials),
        auc: auc(&planted, &null),
    })
}
