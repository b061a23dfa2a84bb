//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! fails.

mod common;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use corrgraph::combinatorics::{
    count_k_cycles, count_unlabeled_trees, estimate_otter_constant, forest_weight_sum,
    series_tail_bound, stabilizer_count, stabilizer_count_exhaustive,
};
use corrgraph::harness::{estimate_tv, lr_test_power};
use corrgraph::likelihood::{null_expectation_exact, pair_joint_pmf, transfer_matrix, EdgeKernel};
use corrgraph::model::{Graph, ModelParams};
use corrgraph::orbits::{enumerate_orbit_states, orbit_conditional_expectation};
use corrgraph::second_moment::{estimate_cycle_free_prob, truncated_second_moment, MomentMode};
use num_bigint::BigUint;
use num_traits::One;

use common::{
    all_permutations, brute_cycle_count, edge_subsets, forest_counts_by_growth, is_forest_dfs,
    pair_pmf_oracle, prufer_tree_counts, random_params, rel_err, relabel,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || {
        format!("took {:.2}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

fn kernel_consistency() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for prm in random_params(20, 101) {
        let q = prm.marginal_edge_prob();
        let marg = [1.0 - q, q];
        let table = pair_joint_pmf(&prm);
        let oracle = pair_pmf_oracle(prm.p(), prm.s);
        let kernel = EdgeKernel::new(&prm).map_err(|e| e.to_string())?;
        for x in 0..2 {
            for y in 0..2 {
                ensure(rel_err(table[x][y], oracle[x][y]) <= 1e-14, || {
                    format!("pmf mismatch at {prm:?}")
                })?;
                let err = rel_err(
                    table[x][y] / (marg[x] * marg[y]),
                    kernel.value(x == 1, y == 1),
                );
                worst = worst.max(err);
            }
        }
    }
    ensure(worst <= 1e-14, || format!("max relative error {worst:e}"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("max relative error {worst:.1e} over 20 triples"))
}

fn stochasticity_and_spectrum() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for prm in random_params(20, 102) {
        let m = transfer_matrix(&prm).map_err(|e| e.to_string())?;
        let [r0, r1] = m.row_sums();
        let [big, small] = m.eigenvalues();
        for err in [r0 - 1.0, r1 - 1.0, big - 1.0, small - prm.rho()] {
            worst = worst.max(err.abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!("max deviation {worst:.1e} over 20 triples"))
}

fn orbit_expectation() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (n, lambda, s) in [(20, 2.0, 0.4), (50, 1.0, 0.5), (100, 3.0, 0.3)] {
        let prm = ModelParams::new(n, lambda, s).map_err(|e| e.to_string())?;
        for k in 1..=3 {
            let closed = orbit_conditional_expectation(k, &prm).map_err(|e| e.to_string())?;
            let brute = enumerate_orbit_states(k, &prm)
                .map_err(|e| e.to_string())?
                .conditional;
            worst = worst.max(rel_err(closed, brute));
        }
    }
    ensure(worst <= 1e-12, || format!("max relative error {worst:e}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "max relative error {worst:.1e} against the 8^k oracle"
    ))
}

fn single_orbit_expansion() -> Outcome {
    let mut lines = Vec::new();
    for (lambda, s) in [(1.0, 0.5), (1.0, 0.3), (2.0, 0.6), (3.0, 0.8), (0.5, 0.9)] {
        let mut c = Vec::new();
        for n in [100usize, 1_000, 10_000] {
            let prm = ModelParams::new(n, lambda, s).map_err(|e| e.to_string())?;
            let value = orbit_conditional_expectation(1, &prm).map_err(|e| e.to_string())?;
            let first_order = 1.0 + lambda * s * s * (2.0 * s - 1.0) / n as f64;
            c.push((value - first_order).abs() * (n * n) as f64);
        }
        let max = c.iter().cloned().fold(0.0, f64::max);
        let min = c.iter().cloned().fold(f64::INFINITY, f64::min);
        ensure(min > 0.0 && max / min <= 2.0, || {
            format!("λ {lambda} s {s}: n²·error {c:?}")
        })?;
        lines.push(format!("{max:.3}"));
    }
    Ok(format!(
        "n²·error stays within a factor 2; C ≈ [{}]",
        lines.join(", ")
    ))
}

fn first_moment() -> Outcome {
    let mut notes = Vec::new();
    for n in [3, 4] {
        let start = Instant::now();
        for (lambda, s) in [(1.0, 0.5), (2.0, 0.3)] {
            let prm = ModelParams::new(n, lambda, s).map_err(|e| e.to_string())?;
            let v = null_expectation_exact(&prm).map_err(|e| e.to_string())?;
            ensure(v.is_one(), || format!("n {n}: E_Q[L] = {v}"))?;
        }
        if n == 4 {
            within(start.elapsed(), 30.0)?;
        }
        notes.push(format!("n={n} in {:.2}s", start.elapsed().as_secs_f64()));
    }
    Ok(format!("E_Q[L] = 1 exactly ({})", notes.join(", ")))
}

fn tree_counts() -> Outcome {
    let start = Instant::now();
    let expect = [1u32, 1, 1, 2, 3, 6, 11, 23, 47, 106];
    let table = count_unlabeled_trees(10).map_err(|e| e.to_string())?;
    for (k, &f) in (1..=10).zip(&expect) {
        ensure(table.free(k) == &BigUint::from(f), || {
            format!("recurrence f_{k} = {}", table.free(k))
        })?;
        let (brute, _) = prufer_tree_counts(k, false);
        ensure(brute == f as usize, || format!("Prüfer f_{k} = {brute}"))?;
    }
    within(start.elapsed(), 60.0)?;
    Ok(
        "f_1..f_10 = 1,1,1,2,3,6,11,23,47,106 from both the recurrence and Prüfer enumeration"
            .into(),
    )
}

fn otter_constant() -> Outcome {
    let start = Instant::now();
    let alpha = estimate_otter_constant(&count_unlabeled_trees(40).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure((alpha - 0.338).abs() <= 0.01, || format!("alpha = {alpha}"))?;
    within(start.elapsed(), 5.0)?;
    Ok(format!("alpha = {alpha:.5} at k_max = 40"))
}

fn forest_sum() -> Outcome {
    let t = 0.1f64;
    let grown = forest_counts_by_growth(7);
    let head: f64 = grown
        .iter()
        .enumerate()
        .map(|(e, &c)| c as f64 * t.powi(e as i32))
        .sum();
    let product = forest_weight_sum(t, 8).map_err(|e| e.to_string())?.product;
    let tail = series_tail_bound(t, 0.3, 8, 8).map_err(|e| e.to_string())?;
    let gap = product - head;
    ensure(gap >= -1e-15 && gap <= tail, || {
        format!("gap {gap:e}, tail bound {tail:e}")
    })?;

    let converging = forest_weight_sum(0.30, 200)
        .map_err(|e| e.to_string())?
        .increments();
    let last = converging.last().unwrap().1;
    ensure(last < 1e-9, || {
        format!("t = 0.30 increment at 200 is {last:e}")
    })?;

    let diverging = forest_weight_sum(0.35, 200)
        .map_err(|e| e.to_string())?
        .increments();
    let tail_incs: Vec<f64> = diverging
        .iter()
        .filter(|(k, _)| *k >= 100)
        .map(|&(_, d)| d)
        .collect();
    ensure(tail_incs.windows(2).all(|w| w[1] > w[0]), || {
        "t = 0.35 increments not growing".into()
    })?;
    Ok(format!(
        "t=0.1 gap {gap:.1e} <= tail {tail:.1e}; t=0.30 last increment {last:.1e}; t=0.35 increments grow to {:.3e}",
        tail_incs.last().unwrap()
    ))
}

fn stabilizer_identity() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 4..=6 {
        let perms = all_permutations(n);
        for e in edge_subsets(n, 4) {
            if !is_forest_dfs(n, &e) {
                continue;
            }
            let j = Graph::from_edges(n, e.iter().copied()).map_err(|e| e.to_string())?;
            let formula = stabilizer_count(&j, n).map_err(|e| e.to_string())?;
            let fixers = perms.iter().filter(|p| relabel(&e, p) == e).count() as u64;
            let library = stabilizer_count_exhaustive(&j).map_err(|e| e.to_string())?;
            ensure(
                formula == BigUint::from(fixers) && library == fixers,
                || format!("n {n}, J {e:?}: formula {formula}, exhaustive {fixers}"),
            )?;
            checked += 1;
        }
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!("{checked} forests checked"))
}

fn cycle_counts() -> Outcome {
    let mut checked = 0;
    for n in 3..=7 {
        for k in 3..=n {
            let formula = count_k_cycles(n, k).map_err(|e| e.to_string())?;
            let brute = brute_cycle_count(n, k);
            ensure(formula == BigUint::from(brute), || {
                format!("n {n} k {k}: {formula} vs {brute}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, k) pairs match enumeration"))
}

fn fkg_bound() -> Outcome {
    let start = Instant::now();
    let prm = ModelParams::new(200, 1.0, 0.5).map_err(|e| e.to_string())?;
    let r = estimate_cycle_free_prob(&prm, 10_000, 111).map_err(|e| e.to_string())?;
    ensure(r.empirical_prob >= r.fkg_bound - 3.0 * r.std_error, || {
        format!("{r:?}")
    })?;
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "P(cycle-free) = {:.4} ± {:.4} >= bound {:.5}",
        r.empirical_prob, r.std_error, r.fkg_bound
    ))
}

fn moment_trend() -> Outcome {
    let mut means = Vec::new();
    for n in 4..=8 {
        let prm = ModelParams::new(n, 1.0, 0.4).map_err(|e| e.to_string())?;
        let e = truncated_second_moment(&prm, 10_000, 112, MomentMode::MonteCarlo)
            .map_err(|e| e.to_string())?;
        means.push(e.mean);
    }
    let max = means.iter().cloned().fold(0.0, f64::max);
    let min = means.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(min > 0.0 && max / min <= 2.0, || format!("means {means:?}"))?;
    let shown: Vec<String> = means.iter().map(|m| format!("{m:.3}")).collect();
    Ok(format!(
        "means over n=4..8: [{}], max/min = {:.3}",
        shown.join(", "),
        max / min
    ))
}

fn detection_trend() -> Outcome {
    let weak = lr_test_power(
        &ModelParams::new(7, 1.0, 0.2).map_err(|e| e.to_string())?,
        1.0,
        1_000,
        113,
    )
    .map_err(|e| e.to_string())?;
    let strong = lr_test_power(
        &ModelParams::new(7, 1.0, 0.9).map_err(|e| e.to_string())?,
        1.0,
        1_000,
        113,
    )
    .map_err(|e| e.to_string())?;
    let diff = strong.auc.value - weak.auc.value;
    ensure(diff >= 0.05, || format!("AUC difference {diff}"))?;
    let tv = estimate_tv(
        &ModelParams::new(7, 1.0, 0.0).map_err(|e| e.to_string())?,
        1_000,
        114,
    )
    .map_err(|e| e.to_string())?;
    ensure(tv.value.abs() <= 3.0 * tv.se + 1e-12, || {
        format!("TV at s = 0: {tv:?}")
    })?;
    Ok(format!(
        "AUC {:.3} (s=0.9) vs {:.3} (s=0.2); TV(s=0) = {:.1e}",
        strong.auc.value, weak.auc.value, tv.value
    ))
}

fn run_cli(args: &[&str], dir: &Path) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_corrgraph"))
        .args(args)
        .current_dir(dir)
        .env_remove("CORRGRAPH_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn read_all(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let bytes = fs::read(&p).map_err(|e| e.to_string())?;
            Ok((p.file_name().unwrap().to_string_lossy().into_owned(), bytes))
        })
        .collect()
}

fn cli_determinism() -> Outcome {
    let config = r#"{"n":[5,6],"lambda":[1.0],"s":[0.3,0.8],"trials":100,"seed":9,"statistics":["tv","lr-auc","cycle-free","tree-corr"]}"#;
    let commands: Vec<(&str, Vec<&str>)> = vec![
        (
            "sample",
            vec![
                "sample", "--n", "12", "--lambda", "2", "--s", "0.7", "--seed", "5", "--out",
                "pair",
            ],
        ),
        (
            "lr",
            vec![
                "lr", "--n", "6", "--lambda", "1", "--s", "0.6", "--seed", "5", "--exact", "--out",
                "lr.csv",
            ],
        ),
        (
            "orbits",
            vec![
                "orbits",
                "--n",
                "7",
                "--lambda",
                "1",
                "--s",
                "0.5",
                "--seed",
                "5",
                "--out",
                "orbits.csv",
            ],
        ),
        (
            "trees",
            vec!["trees", "--k-max", "30", "--out", "trees.csv"],
        ),
        (
            "otter",
            vec!["otter", "--k-max", "40", "--out", "otter.csv"],
        ),
        (
            "forest-sum",
            vec![
                "forest-sum",
                "--t",
                "0.3",
                "--k-max",
                "60",
                "--out",
                "forest.csv",
            ],
        ),
        (
            "cyclefree",
            vec![
                "cyclefree",
                "--n",
                "100",
                "--lambda",
                "1",
                "--s",
                "0.5",
                "--trials",
                "500",
                "--seed",
                "5",
                "--out",
                "cf.csv",
            ],
        ),
        (
            "moment",
            vec![
                "moment",
                "--n",
                "5",
                "--lambda",
                "1",
                "--s",
                "0.4",
                "--trials",
                "300",
                "--seed",
                "5",
                "--out",
                "moment.csv",
            ],
        ),
        (
            "tv",
            vec![
                "tv", "--n", "5", "--lambda", "1", "--s", "0.7", "--trials", "300", "--seed", "5",
                "--out", "tv.csv",
            ],
        ),
        (
            "power",
            vec![
                "power",
                "--n",
                "6",
                "--lambda",
                "1",
                "--s",
                "0.7",
                "--trials",
                "300",
                "--seed",
                "5",
                "--out",
                "power.csv",
            ],
        ),
        (
            "threshold",
            vec!["threshold", "--lambda", "2.5", "--out", "threshold.csv"],
        ),
        (
            "run",
            vec!["run", "--config", "../config.json", "--out", "results.csv"],
        ),
    ];
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(root.path().join("config.json"), config).map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for attempt in ["a", "b"] {
        let dir = root.path().join(attempt);
        fs::create_dir(&dir).map_err(|e| e.to_string())?;
        for (_, args) in &commands {
            run_cli(args, &dir)?;
        }
        let mut files = read_all(&dir)?;
        files.extend(
            read_all(&dir.join("pair"))?
                .into_iter()
                .map(|(n, b)| (format!("pair/{n}"), b)),
        );
        runs.push(files);
    }
    let (a, b) = (&runs[0], &runs[1]);
    ensure(a.len() == b.len() && a.len() >= commands.len(), || {
        format!("{} vs {} files", a.len(), b.len())
    })?;
    for ((na, ba), (nb, bb)) in a.iter().zip(b) {
        ensure(na == nb && ba == bb, || {
            format!("{na} differs between runs")
        })?;
        ensure(!ba.is_empty(), || format!("{na} is empty"))?;
    }
    Ok(format!(
        "{} subcommands, {} output files byte-identical across reruns",
        commands.len(),
        a.len()
    ))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("kernel consistency", kernel_consistency),
        ("row-stochasticity and spectrum", stochasticity_and_spectrum),
        ("orbit conditional expectation", orbit_expectation),
        ("single-orbit expansion", single_orbit_expansion),
        ("null first moment", first_moment),
        ("unlabeled tree counts", tree_counts),
        ("Otter constant", otter_constant),
        ("forest weight sum", forest_sum),
        ("stabilizer identity", stabilizer_identity),
        ("cycle counts", cycle_counts),
        ("FKG bound", fkg_bound),
        ("truncated moment trend", moment_trend),
        ("detection trend", detection_trend),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
