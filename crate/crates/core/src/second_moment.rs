//! The cycle-free event on the intersection graph, its FKG lower bound, and
//! estimates of the truncated second moment `E_P[L · 1{cycle-free}]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::likelihood::{
    for_each_graph, overlap_histogram, EdgeKernel, LikelihoodRatio, MAX_ENUMERATION_N,
};
use crate::model::{
    for_each_permutation, intersection_graph, sample_correlated, sample_intersection_direct, Graph,
    ModelParams, Permutation,
};
use crate::orbits::{
    full_orbits, orbit_conditional_expectation, orbit_decomposition, realization_probability,
    OrbitDecomposition,
};
use crate::rng::derive_seed;
use crate::stats::{proportion, RunningMean};

/// Largest `n` for Monte Carlo estimates that evaluate `L` exactly per draw.
pub const MAX_MONTE_CARLO_N: usize = 8;
/// Largest `n` for the orbit-decomposed bound.
pub const MAX_ORBIT_MOMENT_N: usize = 6;

/// True iff `h` has no cycle (union-find).
pub fn is_cycle_free(h: &Graph) -> bool {
    let mut parent: Vec<usize> = (0..h.n()).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (i, j) in h.edges() {
        let (a, b) = (root(&mut parent, i), root(&mut parent, j));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FkgBound {
    /// `exp(-2(λs²)³ / (1 - λs²))`
    pub bound: f64,
    /// `exp(-2(λs²)³ / ε)`
    pub constant_c: f64,
}

pub fn fkg_lower_bound(params: &ModelParams) -> Result<FkgBound> {
    let x = params.lambda * params.s * params.s;
    if x >= 1.0 {
        return Err(Error::ParameterDomain(format!(
            "lambda*s^2 = {x} must be < 1"
        )));
    }
    let cube = 2.0 * x * x * x;
    Ok(FkgBound {
        bound: (-cube / (1.0 - x)).exp(),
        constant_c: (-cube / params.epsilon).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleFreeReport {
    pub empirical_prob: f64,
    pub std_error: f64,
    pub fkg_bound: f64,
    pub constant_c: f64,
    pub trials: u64,
}

fn check_trials(trials: u64, min: u64) -> Result<()> {
    if trials < min {
        return Err(Error::ParameterDomain(format!(
            "trials = {trials} must be >= {min}"
        )));
    }
    Ok(())
}

fn cycle_free_report(
    params: &ModelParams,
    trials: u64,
    mut draw: impl FnMut(u64) -> Result<Graph>,
) -> Result<CycleFreeReport> {
    check_trials(trials, 100)?;
    let fkg = fkg_lower_bound(params)?;
    let mut hits = 0;
    for t in 0..trials {
        if is_cycle_free(&draw(t)?) {
            hits += 1;
        }
    }
    let est = proportion(hits, trials);
    Ok(CycleFreeReport {
        empirical_prob: est.value,
        std_error: est.se,
        fkg_bound: fkg.bound,
        constant_c: fkg.constant_c,
        trials,
    })
}

/// Frequency of a cycle-free intersection graph under the planted model.
pub fn estimate_cycle_free_prob(
    params: &ModelParams,
    trials: u64,
    seed: u64,
) -> Result<CycleFreeReport> {
    cycle_free_report(params, trials, |t| {
        Ok(sample_correlated(params, derive_seed(seed, t))?.intersection())
    })
}

/// Same frequency drawing `G(n, λs²/n)` directly.
pub fn estimate_cycle_free_prob_direct(
    params: &ModelParams,
    trials: u64,
    seed: u64,
) -> Result<CycleFreeReport> {
    cycle_free_report(params, trials, |t| {
        Ok(sample_intersection_direct(params, derive_seed(seed, t)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMode {
    MonteCarlo,
    ExactEnumeration,
}

impl fmt::Display for MomentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentMode::MonteCarlo => "monte-carlo",
            MomentMode::ExactEnumeration => "exact-enumeration",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedMomentEstimate {
    pub n: usize,
    pub lambda: f64,
    pub s: f64,
    pub trials: u64,
    pub mean: f64,
    pub se: f64,
    pub mode: MomentMode,
    pub seed: u64,
}

impl TruncatedMomentEstimate {
    pub const CSV_HEADER: &'static str = "n,lambda,s,trials,mean,se,mode,seed";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.lambda, self.s, self.trials, self.mean, self.se, self.mode, self.seed
        )
    }
}

/// `E_P[L · 1{intersection graph is cycle-free}]`, by Monte Carlo with exact
/// `L` per draw (`n ≤ 8`) or by enumerating every graph pair (`n ≤ 4`).
pub fn truncated_second_moment(
    params: &ModelParams,
    trials: u64,
    seed: u64,
    mode: MomentMode,
) -> Result<TruncatedMomentEstimate> {
    let (mean, se, trials) = match mode {
        MomentMode::MonteCarlo => {
            if params.n > MAX_MONTE_CARLO_N {
                return Err(Error::Capacity {
                    what: "vertex count for exact-L Monte Carlo",
                    value: params.n,
                    limit: MAX_MONTE_CARLO_N,
                });
            }
            check_trials(trials, 1)?;
            let lr = LikelihoodRatio::new(params)?;
            let mut acc = RunningMean::default();
            for t in 0..trials {
                let smp = sample_correlated(params, derive_seed(seed, t))?;
                let value = if is_cycle_free(&smp.intersection()) {
                    lr.eval(&smp.left, &smp.right)?
                } else {
                    0.0
                };
                acc.push(value);
            }
            (acc.mean(), acc.std_error(), trials)
        }
        MomentMode::ExactEnumeration => (exact_moments(params)?.truncated, 0.0, 0),
    };
    Ok(TruncatedMomentEstimate {
        n: params.n,
        lambda: params.lambda,
        s: params.s,
        trials,
        mean,
        se,
        mode,
        seed,
    })
}

/// `E_P[L · 1_A]` and `E_P[L]` by full enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMoments {
    pub truncated: f64,
    pub untruncated: f64,
}

/// Sums `P(A, B | π*) · L(A, B)` over all graph pairs and hidden
/// permutations, where `P(A, B | π*) = Q(A, B) · Π ℓ(A_e, B_{π*(e)})`.
pub fn exact_moments(params: &ModelParams) -> Result<ExactMoments> {
    let n = params.n;
    if n > MAX_ENUMERATION_N {
        return Err(Error::Capacity {
            what: "vertex count for full pair enumeration",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    let kernel = EdgeKernel::new(params)?;
    let lr = LikelihoodRatio::new(params)?;
    let q1 = kernel.null_edge_prob();
    let pairs = n * n.saturating_sub(1) / 2;
    let null_prob = |g: &Graph| {
        q1.powi(g.edge_count() as i32) * (1.0 - q1).powi((pairs - g.edge_count()) as i32)
    };
    let mut perms = Vec::new();
    for_each_permutation(n, |p| perms.push(Permutation::new(p.to_vec()).unwrap()));
    let n_fact = perms.len() as f64;

    let mut graphs = Vec::new();
    for_each_graph(n, |g| graphs.push(g.clone()));
    let mut truncated = 0.0;
    let mut untruncated = 0.0;
    for a in &graphs {
        for b in &graphs {
            let hist = overlap_histogram(a, b)?;
            let l = lr
                .log_from_histogram(&hist, a.edge_count(), b.edge_count())
                .exp();
            let base = null_prob(a) * null_prob(b);
            let mut planted = 0.0;
            let mut planted_cycle_free = 0.0;
            for pi_star in &perms {
                let h = intersection_graph(a, b, pi_star)?;
                let m = h.edge_count();
                let (ea, eb) = (a.edge_count(), b.edge_count());
                let product = kernel.values[0][0].powi((pairs + m - ea - eb) as i32)
                    * kernel.values[1][0].powi((ea - m) as i32)
                    * kernel.values[0][1].powi((eb - m) as i32)
                    * kernel.values[1][1].powi(m as i32);
                planted += product;
                if is_cycle_free(&h) {
                    planted_cycle_free += product;
                }
            }
            untruncated += base * planted / n_fact * l;
            truncated += base * planted_cycle_free / n_fact * l;
        }
    }
    Ok(ExactMoments {
        truncated,
        untruncated,
    })
}

/// Contribution of one forest realization `J` to the orbit-decomposed bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationTerm {
    pub realization: Graph,
    /// `P(full-orbit set = J)`
    pub probability: f64,
    /// `E[Π_O Π_{e∈O} ℓ | full-orbit set = J]` from the closed forms
    pub conditional_product: f64,
}

impl RealizationTerm {
    pub fn value(&self) -> f64 {
        self.probability * self.conditional_product
    }
}

fn check_orbit_moment_n(n: usize) -> Result<()> {
    if n > MAX_ORBIT_MOMENT_N {
        return Err(Error::Capacity {
            what: "vertex count for orbit-decomposed moment",
            value: n,
            limit: MAX_ORBIT_MOMENT_N,
        });
    }
    Ok(())
}

/// Per-realization terms for a fixed `σ`: every union of whole orbits that is
/// a forest (`forests_only`) or every union (`!forests_only`).
pub fn orbit_decomposed_terms(
    params: &ModelParams,
    sigma: &Permutation,
    forests_only: bool,
) -> Result<Vec<RealizationTerm>> {
    check_orbit_moment_n(params.n)?;
    if sigma.len() != params.n {
        return Err(Error::SizeMismatch {
            expected: params.n,
            actual: sigma.len(),
        });
    }
    let kernel = EdgeKernel::new(params)?;
    let decomp = orbit_decomposition(sigma);
    let conditional: Vec<f64> = decomp
        .orbits()
        .iter()
        .map(|o| orbit_conditional_expectation(o.len(), params))
        .collect::<Result<_>>()?;
    let full_value = kernel.value(true, true);

    let mut terms = Vec::new();
    for subset in 0u64..(1u64 << decomp.len()) {
        let ids: Vec<usize> = (0..decomp.len())
            .filter(|&o| subset >> o & 1 == 1)
            .collect();
        let j = decomp.union_graph(&ids);
        if forests_only && !is_cycle_free(&j) {
            continue;
        }
        terms.push(realization_term(
            &decomp,
            &j,
            &conditional,
            full_value,
            params,
        )?);
    }
    Ok(terms)
}

fn realization_term(
    decomp: &OrbitDecomposition,
    j: &Graph,
    conditional: &[f64],
    full_value: f64,
    params: &ModelParams,
) -> Result<RealizationTerm> {
    let view = full_orbits(decomp, j)?;
    let probability = realization_probability(decomp, &view, params);
    let mut product = 1.0;
    let mut is_full = vec![false; decomp.len()];
    for &id in &view.full_orbits {
        is_full[id] = true;
    }
    for (id, orbit) in decomp.orbits().iter().enumerate() {
        product *= if is_full[id] {
            full_value.powi(orbit.len() as i32)
        } else {
            conditional[id]
        };
    }
    Ok(RealizationTerm {
        realization: view.realization,
        probability,
        conditional_product: product,
    })
}

/// Inner value of the relaxed bound for one `σ`: the sum over forest
/// realizations `J` of `P(full-orbit set = J) · E[Π ℓ | full-orbit set = J]`.
/// Independent of `π*` beyond its size.
pub fn orbit_decomposed_moment(
    params: &ModelParams,
    pi_star: &Permutation,
    sigma: &Permutation,
) -> Result<f64> {
    if pi_star.len() != sigma.len() {
        return Err(Error::SizeMismatch {
            expected: pi_star.len(),
            actual: sigma.len(),
        });
    }
    Ok(orbit_decomposed_terms(params, sigma, true)?
        .iter()
        .map(RealizationTerm::value)
        .sum())
}

/// Average of [`orbit_decomposed_moment`] over all of `S_n`.
pub fn relaxed_bound_average(params: &ModelParams) -> Result<f64> {
    check_orbit_moment_n(params.n)?;
    let id = Permutation::identity(params.n);
    let mut total = 0.0;
    let mut count = 0u64;
    let mut result = Ok(());
    for_each_permutation(params.n, |p| {
        if result.is_err() {
            return;
        }
        let sigma = Permutation::new(p.to_vec()).unwrap();
        match orbit_decomposed_moment(params, &id, &sigma) {
            Ok(v) => {
                total += v;
                count += 1;
            }
            Err(e) => result = Err(e),
        }
    });
    result?;
    Ok(total / count as f64)
}
