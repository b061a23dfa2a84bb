//! Experiment harness: detection threshold, TV and test-power estimates, the
//! tree correlation statistic and grid runs with CSV output.

pub mod detection;
pub mod experiment;
pub mod tree_stat;

pub use detection::{
    auc, detection_threshold, detection_threshold_with, estimate_tv, exact_tv, lr_test_power,
    PowerReport,
};
pub use experiment::{
    job_seed, read_results, results_to_csv, run_experiment, sidecar_path, write_experiment,
    write_results, ExperimentConfig, ResultRow, Statistic, RESULT_HEADER,
};
pub use tree_stat::{
    null_mean, tree_correlation_statistic, tree_patterns, TreePattern, MAX_TREE_STAT_K,
};
