use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use corrgraph::combinatorics::{count_unlabeled_trees, estimate_otter_constant, forest_weight_sum};
use corrgraph::harness::{
    detection_threshold_with, estimate_tv, exact_tv, lr_test_power, results_to_csv, run_experiment,
    write_experiment, ExperimentConfig,
};
use corrgraph::likelihood::{likelihood_ratio_rational, rational_to_f64, LikelihoodRatio};
use corrgraph::model::{
    read_edge_list, sample_correlated, write_edge_list, ModelParams, Permutation, OTTER_ALPHA,
};
use corrgraph::orbits::{
    orbit_conditional_expectation, orbit_decomposition, orbit_unconditional_expectation,
};
use corrgraph::rng::CounterRng;
use corrgraph::second_moment::{
    estimate_cycle_free_prob, truncated_second_moment, MomentMode, TruncatedMomentEstimate,
};
use corrgraph::{Error, Result};

const TAG_CLI_PERM: u64 = 0x0C11;

#[derive(Parser)]
#[command(
    name = "corrgraph",
    version,
    about = "Correlated Erdős–Rényi graph pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    s: f64,
}

impl ModelArgs {
    fn params(self) -> Result<ModelParams> {
        ModelParams::new(self.n, self.lambda, self.s)
    }
}

#[derive(Args, Clone, Copy)]
struct SeedArg {
    #[arg(long, env = "CORRGRAPH_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct OutArg {
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a correlated pair; `--out` names a directory for left/right/perm files
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact likelihood ratio of two edge-list files, or of a sampled pair
    Lr {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, requires = "right")]
        left: Option<PathBuf>,
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
        /// Sample a pair on this many vertices instead of reading files
        #[arg(long, conflicts_with = "left")]
        n: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
        /// Also evaluate in exact rational arithmetic
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Edge orbits of a permutation (given 1-based, or random from the seed)
    Orbits {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated 1-based images, e.g. 2,3,1
        #[arg(long, conflicts_with = "n")]
        perm: Option<String>,
        #[arg(long, requires = "s")]
        lambda: Option<f64>,
        #[arg(long, requires = "lambda")]
        s: Option<f64>,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Table of free and rooted unlabeled tree counts as CSV
    Trees {
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Estimate Otter's constant from tree counts
    Otter {
        #[arg(long, default_value_t = 40)]
        k_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Partial products of the forest weight sum
    ForestSum {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 50)]
        k_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Probability that the intersection graph is a forest, with the FKG bound
    Cyclefree {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Truncated second moment
    Moment {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        /// Enumerate every graph pair instead of sampling (n ≤ 4)
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Total variation between the planted and null models
    Tv {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1_000)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        /// Enumerate every graph pair instead of sampling (n ≤ 4)
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Errors and AUC of the likelihood-ratio test
    Power {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long, default_value_t = 1_000)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Detection threshold `min(1/√λ, √α)`
    Threshold {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = OTTER_ALPHA)]
        alpha: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a JSON experiment config and write the results CSV
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out` in the config
        #[command(flatten)]
        out: OutArg,
    },
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn cmd_sample(model: ModelArgs, seed: u64, out: &OutArg) -> Result<()> {
    let smp = sample_correlated(&model.params()?, seed)?;
    let perm = format!("{}\n", smp.hidden_perm);
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            write_file(&dir.join("left.txt"), &write_edge_list(&smp.left))?;
            write_file(&dir.join("right.txt"), &write_edge_list(&smp.right))?;
            write_file(&dir.join("perm.txt"), &perm)
        }
        None => {
            print!(
                "# left\n{}# right\n{}# perm\n{perm}",
                write_edge_list(&smp.left),
                write_edge_list(&smp.right)
            );
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_lr(
    lambda: f64,
    s: f64,
    left: Option<PathBuf>,
    right: Option<PathBuf>,
    n: Option<usize>,
    seed: u64,
    exact: bool,
    out: &OutArg,
) -> Result<()> {
    let (a, b) = match (left, right, n) {
        (Some(l), Some(r), _) => (read_edge_list(&l)?, read_edge_list(&r)?),
        (None, None, Some(n)) => {
            let smp = sample_correlated(&ModelParams::new(n, lambda, s)?, seed)?;
            (smp.left, smp.right)
        }
        _ => return Err(Error::Config("give --left and --right, or --n".into())),
    };
    let params = ModelParams::new(a.n(), lambda, s)?;
    let lr = LikelihoodRatio::new(&params)?;
    let log_l = lr.log_eval(&a, &b)?;
    let mut text = format!(
        "n,edges_left,edges_right,log_l,l\n{},{},{},{},{}\n",
        a.n(),
        a.edge_count(),
        b.edge_count(),
        log_l,
        log_l.exp()
    );
    if exact {
        let q = likelihood_ratio_rational(&a, &b, &params)?;
        writeln!(text, "# exact {q} ~ {}", rational_to_f64(&q)).unwrap();
    }
    emit(out, &text)
}

fn cmd_orbits(
    n: Option<usize>,
    perm: Option<String>,
    model: Option<(f64, f64)>,
    seed: u64,
    out: &OutArg,
) -> Result<()> {
    let sigma = match (perm, n) {
        (Some(text), _) => {
            let images = text
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidPermutation(e.to_string()))?;
            Permutation::from_one_based(&images)?
        }
        (None, Some(n)) => Permutation::random(n, &mut CounterRng::new(seed, TAG_CLI_PERM)),
        (None, None) => return Err(Error::Config("give --perm or --n".into())),
    };
    let decomp = orbit_decomposition(&sigma);
    let mut text = format!("# sigma {sigma}\norbit,size,pairs\n");
    for (id, orbit) in decomp.orbits().iter().enumerate() {
        let pairs: Vec<String> = orbit
            .iter()
            .map(|&(i, j)| format!("{}-{}", i + 1, j + 1))
            .collect();
        writeln!(text, "{id},{},{}", orbit.len(), pairs.join(" ")).unwrap();
    }
    if let Some((lambda, s)) = model {
        let params = ModelParams::new(sigma.len(), lambda, s)?;
        let mut sizes = decomp.size_multiset();
        sizes.dedup();
        text.push_str("size,unconditional,conditional\n");
        for k in sizes {
            writeln!(
                text,
                "{k},{},{}",
                orbit_unconditional_expectation(k, &params)?,
                orbit_conditional_expectation(k, &params)?
            )
            .unwrap();
        }
    }
    emit(out, &text)
}

fn cmd_forest_sum(t: f64, k_max: usize, out: &OutArg) -> Result<()> {
    let sum = forest_weight_sum(t, k_max)?;
    let mut text = format!(
        "# t {} k_max {} product {} upper_bound {}\nk,partial_product,increment\n",
        sum.t, sum.k_max, sum.product, sum.upper_bound
    );
    writeln!(text, "2,{},", sum.partial_log_products[0].exp()).unwrap();
    for ((k, inc), lp) in sum
        .increments()
        .into_iter()
        .zip(&sum.partial_log_products[1..])
    {
        writeln!(text, "{k},{},{inc}", lp.exp()).unwrap();
    }
    emit(out, &text)
}

fn moment_text(est: &TruncatedMomentEstimate) -> String {
    format!(
        "{}\n{}\n",
        TruncatedMomentEstimate::CSV_HEADER,
        est.to_csv_row()
    )
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { model, seed, out } => cmd_sample(model, seed.seed, &out),
        Command::Lr {
            lambda,
            s,
            left,
            right,
            n,
            seed,
            exact,
            out,
        } => cmd_lr(lambda, s, left, right, n, seed.seed, exact, &out),
        Command::Orbits {
            n,
            perm,
            lambda,
            s,
            seed,
            out,
        } => cmd_orbits(n, perm, lambda.zip(s), seed.seed, &out),
        Command::Trees { k_max, out } => emit(&out, &count_unlabeled_trees(k_max)?.to_csv()),
        Command::Otter { k_max, out } => {
            let alpha = estimate_otter_constant(&count_unlabeled_trees(k_max)?)?;
            emit(&out, &format!("k_max,alpha\n{k_max},{alpha}\n"))
        }
        Command::ForestSum { t, k_max, out } => cmd_forest_sum(t, k_max, &out),
        Command::Cyclefree {
            model,
            trials,
            seed,
            out,
        } => {
            let r = estimate_cycle_free_prob(&model.params()?, trials, seed.seed)?;
            emit(
                &out,
                &format!(
                    "n,lambda,s,trials,empirical_prob,se,fkg_bound,constant_c,seed\n{},{},{},{},{},{},{},{},{}\n",
                    model.n, model.lambda, model.s, r.trials, r.empirical_prob, r.std_error, r.fkg_bound, r.constant_c, seed.seed
                ),
            )
        }
        Command::Moment {
            model,
            trials,
            seed,
            exact,
            out,
        } => {
            let mode = if exact {
                MomentMode::ExactEnumeration
            } else {
                MomentMode::MonteCarlo
            };
            let est = truncated_second_moment(&model.params()?, trials, seed.seed, mode)?;
            emit(&out, &moment_text(&est))
        }
        Command::Tv {
            model,
            trials,
            seed,
            exact,
            out,
        } => {
            let params = model.params()?;
            let (value, se, trials) = if exact {
                (exact_tv(&params)?, 0.0, 0)
            } else {
                let e = estimate_tv(&params, trials, seed.seed)?;
                (e.value, e.se, trials)
            };
            emit(
                &out,
                &format!(
                    "n,lambda,s,trials,tv,se,seed\n{},{},{},{trials},{value},{se},{}\n",
                    model.n, model.lambda, model.s, seed.seed
                ),
            )
        }
        Command::Power {
            model,
            threshold,
            trials,
            seed,
            out,
        } => {
            let r = lr_test_power(&model.params()?, threshold, trials, seed.seed)?;
            emit(
                &out,
                &format!(
                    "n,lambda,s,threshold,trials,type_one,type_one_se,type_two,type_two_se,auc,auc_se,seed\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    model.n, model.lambda, model.s, r.threshold, r.trials,
                    r.type_one.value, r.type_one.se, r.type_two.value, r.type_two.se, r.auc.value, r.auc.se, seed.seed
                ),
            )
        }
        Command::Threshold { lambda, alpha, out } => {
            let th = detection_threshold_with(lambda, alpha)?;
            emit(
                &out,
                &format!("lambda,alpha,threshold\n{lambda},{alpha},{th}\n"),
            )
        }
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = run_experiment(&cfg)?;
            match out.out.or_else(|| cfg.out.clone()) {
                Some(path) => write_experiment(&cfg, &path, &rows),
                None => {
                    print!("{}", results_to_csv(&rows)?);
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
