//! The forest generating product `Π_{k≥2} (1 - t^{k-1})^{-f_k}` and its
//! exponential upper bound.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::trees::{count_unlabeled_trees, TreeCountTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ForestWeightSum {
    pub t: f64,
    pub k_max: usize,
    pub log_product: f64,
    pub product: f64,
    /// `2 Σ_{k=2}^{k_max} t^{k-1} f_k`
    pub log_upper_bound: f64,
    pub upper_bound: f64,
    /// log of the partial product through `k`, for `k = 2..=k_max`
    pub partial_log_products: Vec<f64>,
    /// `-f_k ln(1 - t^{k-1})`, for `k = 2..=k_max`
    pub log_factors: Vec<f64>,
}

impl ForestWeightSum {
    /// `P_k - P_{k-1}` for `k = 3..=k_max`, paired with `k`.
    pub fn increments(&self) -> Vec<(usize, f64)> {
        self.partial_log_products
            .iter()
            .zip(&self.log_factors[1..])
            .enumerate()
            .map(|(i, (prev, factor))| (i + 3, prev.exp() * factor.exp_m1()))
            .collect()
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::ParameterDomain(format!(
            "t = {t} must lie in [0, 1)"
        )));
    }
    Ok(())
}

pub fn forest_weight_sum(t: f64, k_max: usize) -> Result<ForestWeightSum> {
    check_t(t)?;
    let table = count_unlabeled_trees(k_max.max(2))?;
    Ok(forest_weight_sum_from(&table, t, k_max))
}

pub fn forest_weight_sum_from(table: &TreeCountTable, t: f64, k_max: usize) -> ForestWeightSum {
    let mut log_product = 0.0;
    let mut bound = 0.0;
    let mut partials = Vec::with_capacity(k_max.saturating_sub(1));
    let mut factors = Vec::with_capacity(k_max.saturating_sub(1));
    for k in 2..=k_max {
        let f = table.free(k).to_f64().unwrap();
        let x = t.powi(k as i32 - 1);
        let factor = f * -(-x).ln_1p();
        log_product += factor;
        bound += 2.0 * f * x;
        partials.push(log_product);
        factors.push(factor);
    }
    ForestWeightSum {
        t,
        k_max,
        log_product,
        product: log_product.exp(),
        log_upper_bound: bound,
        upper_bound: bound.exp(),
        partial_log_products: partials,
        log_factors: factors,
    }
}

/// Coefficients `c_e`, `e = 0..=max_edges`, of the forest product: the number
/// of unlabeled forests (no isolated vertices) with `e` edges.
pub fn forest_series(max_edges: usize) -> Result<Vec<BigUint>> {
    let table = count_unlabeled_trees(max_edges + 1)?;
    let mut coeffs = vec![BigUint::zero(); max_edges + 1];
    coeffs[0] = BigUint::one();
    for d in 1..=max_edges {
        // multiply by (1 - x^d)^{-f_{d+1}} = Σ_j C(f + j - 1, j) x^{dj}
        let f = table.free(d + 1).clone();
        let mut next = vec![BigUint::zero(); max_edges + 1];
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut binom = BigUint::one();
            let mut j = 0usize;
            while e + d * j <= max_edges {
                next[e + d * j] += c * &binom;
                // C(f + j, j + 1) = C(f + j - 1, j) · (f + j) / (j + 1)
                binom = binom * (&f + BigUint::from(j)) / BigUint::from(j + 1);
                j += 1;
            }
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// Bound on `Σ_{e ≥ from_edges} c_e t^e` for the product truncated at
/// `k_max`: each such term is at most `(t/t0)^{from_edges} c_e t0^e`, so the
/// tail is at most `(t/t0)^{from_edges} · P_{k_max}(t0)` for `t ≤ t0 < 1`.
pub fn series_tail_bound(t: f64, t0: f64, k_max: usize, from_edges: usize) -> Result<f64> {
    check_t(t)?;
    check_t(t0)?;
    if t0 < t {
        return Err(Error::ParameterDomain(format!(
            "t0 = {t0} must be >= t = {t}"
        )));
    }
    let at_t0 = forest_weight_sum(t0, k_max)?;
    Ok((t / t0).powi(from_edges as i32) * at_t0.product)
}
