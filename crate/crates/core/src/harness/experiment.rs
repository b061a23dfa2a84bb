//! Grid experiments: a JSON config in, one CSV row per grid point and
//! statistic out.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::detection::{estimate_tv, lr_test_power, PowerReport};
use super::tree_stat::tree_correlation_statistic;
use crate::error::{Error, Result};
use crate::model::{sample_correlated, ModelParams};
use crate::rng::{derive_seed, word};
use crate::second_moment::{estimate_cycle_free_prob, truncated_second_moment, MomentMode};
use crate::stats::{Estimate, RunningMean};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// Total variation between the planted model and the null
    Tv,
    /// AUC of the likelihood ratio
    LrAuc,
    /// False-alarm rate of `L > threshold`
    LrTypeOne,
    /// Miss rate of `L > threshold`
    LrTypeTwo,
    /// Truncated second moment by Monte Carlo
    Moment,
    /// Probability that the intersection graph is a forest
    CycleFree,
    /// Mean of the tree correlation statistic under the planted model
    TreeCorr,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Tv => "tv",
            Statistic::LrAuc => "lr-auc",
            Statistic::LrTypeOne => "lr-type-one",
            Statistic::LrTypeTwo => "lr-type-two",
            Statistic::Moment => "moment",
            Statistic::CycleFree => "cycle-free",
            Statistic::TreeCorr => "tree-corr",
        }
    }
}

fn default_threshold() -> f64 {
    1.0
}

fn default_tree_k_max() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    pub lambda: Vec<f64>,
    pub s: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub statistics: Vec<Statistic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_tree_k_max")]
    pub tree_k_max: usize,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("n", self.n.is_empty()),
            ("lambda", self.lambda.is_empty()),
            ("s", self.s.is_empty()),
            ("statistics", self.statistics.is_empty()),
        ] {
            if empty {
                return Err(Error::Config(format!("grid `{name}` is empty")));
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        for (n, lambda, s) in self.grid() {
            ModelParams::new(n, lambda, s)?;
        }
        Ok(())
    }

    /// Grid points in `n`-major, then `lambda`, then `s` order.
    pub fn grid(&self) -> Vec<(usize, f64, f64)> {
        let mut pts = Vec::new();
        for &n in &self.n {
            for &lambda in &self.lambda {
                for &s in &self.s {
                    pts.push((n, lambda, s));
                }
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub n: usize,
    pub lambda: f64,
    pub s: f64,
    pub statistic: Statistic,
    pub trials: u64,
    pub value: f64,
    pub se: f64,
    pub seed: u64,
}

pub const RESULT_HEADER: &str = "n,lambda,s,statistic,trials,value,se,seed";

/// `seed` xor a hash of the grid point.
pub fn job_seed(seed: u64, n: usize, lambda: f64, s: f64) -> u64 {
    seed ^ word(n as u64, lambda.to_bits(), s.to_bits())
}

fn tree_corr_mean(params: &ModelParams, trials: u64, seed: u64, k_max: usize) -> Result<Estimate> {
    let mut acc = RunningMean::default();
    for t in 0..trials {
        let smp = sample_correlated(params, derive_seed(seed, t))?;
        acc.push(tree_correlation_statistic(
            &smp.left, &smp.right, params, k_max,
        )?);
    }
    Ok(acc.estimate())
}

/// All rows for one grid point, in the order of `cfg.statistics`.
fn run_point(cfg: &ExperimentConfig, n: usize, lambda: f64, s: f64) -> Result<Vec<ResultRow>> {
    let params = ModelParams::new(n, lambda, s)?;
    let seed = job_seed(cfg.seed, n, lambda, s);
    let mut power: Option<PowerReport> = None;
    let mut rows = Vec::with_capacity(cfg.statistics.len());
    for &stat in &cfg.statistics {
        let est = match stat {
            Statistic::Tv => estimate_tv(&params, cfg.trials, seed)?,
            Statistic::LrAuc | Statistic::LrTypeOne | Statistic::LrTypeTwo => {
                let report = match power {
                    Some(r) => r,
                    None => *power.insert(lr_test_power(&params, cfg.threshold, cfg.trials, seed)?),
                };
                match stat {
                    Statistic::LrAuc => report.auc,
                    Statistic::LrTypeOne => report.type_one,
                    _ => report.type_two,
                }
            }
            Statistic::Moment => {
                let m = truncated_second_moment(&params, cfg.trials, seed, MomentMode::MonteCarlo)?;
                Estimate {
                    value: m.mean,
                    se: m.se,
                }
            }
            Statistic::CycleFree => {
                let r = estimate_cycle_free_prob(&params, cfg.trials, seed)?;
                Estimate {
                    value: r.empirical_prob,
                    se: r.std_error,
                }
            }
            Statistic::TreeCorr => tree_corr_mean(&params, cfg.trials, seed, cfg.tree_k_max)?,
        };
        rows.push(ResultRow {
            n,
            lambda,
            s,
            statistic: stat,
            trials: cfg.trials,
            value: est.value,
            se: est.se,
            seed,
        });
    }
    Ok(rows)
}

/// Runs every grid point. Each point is an independent job keyed by its own
/// seed, so the rows do not depend on evaluation order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for (n, lambda, s) in cfg.grid() {
        rows.extend(run_point(cfg, n, lambda, s)?);
    }
    Ok(rows)
}

pub fn results_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(RESULT_HEADER.split(','))
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_results(path: &Path, rows: &[ResultRow]) -> Result<()> {
    fs::write(path, results_to_csv(rows)?).map_err(|e| Error::io(path, e))
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    r.deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })
}

/// `results.csv` -> `results.config.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("config.json")
}

/// Writes the CSV and the config sidecar next to it.
pub fn write_experiment(cfg: &ExperimentConfig, out: &Path, rows: &[ResultRow]) -> Result<()> {
    write_results(out, rows)?;
    let side = sidecar_path(out);
    let mut json = serde_json::to_string_pretty(cfg).map_err(|source| Error::Json {
        path: side.clone(),
        source,
    })?;
    json.push('\n');
    fs::write(&side, json).map_err(|e| Error::io(&side, e))
}
