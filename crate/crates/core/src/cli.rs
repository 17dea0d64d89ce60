//! Command-line interface: thresholds and tables, f-hat plot data, exact
//! moments, the second-moment landscape, graph sampling, decomposition
//! solving, and Monte Carlo campaigns, with text, CSV, and JSON output.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::decompose::{solve, SolveMode, SolveOptions, SolveOutcome};
use crate::experiments::{
    records_to_csv, run_cycle_poisson, run_existence, run_leaf_condition, TrialConfig,
};
use crate::highprec as hp;
use crate::laplace;
use crate::moments::{self, MomentReport};
use crate::pairing::{sample_pairing, sample_simple_graph, Multigraph};
use crate::polyexact::{rat_int, Rational};
use crate::thresholds::{
    compute_kplus, compute_ksscm, count_sign_changes, p1_interval, plot_fhat, Params,
    ThresholdReport,
};
use crate::Result;

/// Rejection budget for `sample --simple`.
const SAMPLE_TRIES: u64 = 5_000_000;

#[derive(Parser)]
#[command(
    name = "stardec",
    about = "Exact thresholds, moments, and Monte Carlo for k-star decompositions of random regular graphs",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    /// Cap worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
    Auto,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> SolveMode {
        match m {
            ModeArg::Exact => SolveMode::Exact,
            ModeArg::Heuristic => SolveMode::Heuristic,
            ModeArg::Auto => SolveMode::Auto,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition thresholds k_SSCM and k_+ for one degree.
    Thresholds {
        #[arg(long)]
        d: i64,
        /// Also report the conditions and growth constant at this k.
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Threshold table for d = 3..=dmax.
    Table1 {
        #[arg(long, default_value_t = 20)]
        dmax: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Extended scan checking k_SSCM against k_+ for d = 3..=dmax.
    Scan {
        #[arg(long)]
        dmax: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Sample the root-certificate series f-hat over its window as plot CSV.
    Fhat {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        /// Grid size over the window (x = 1 is always included).
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact and asymptotic decomposition-count moments.
    Moments {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        /// Evaluate exact E Y and E Y^2 at this n (2k must divide dn).
        #[arg(long)]
        n: Option<i64>,
        /// Cap on second-moment lattice size.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Second-moment landscape at the stationary point, optionally with a
    /// multistart maximization.
    Landscape {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        /// Run the multistart ascent and compare its best point to b*.
        #[arg(long)]
        maximize: bool,
        #[arg(long, default_value_t = 120)]
        starts: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV dump of per-start maximization results.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Sample a d-regular multigraph from the configuration model.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Rejection-sample until the graph is simple.
        #[arg(long)]
        simple: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Graph text destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide or construct a k-star decomposition of a graph file.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = SolveOptions::default().node_cap)]
        node_cap: u64,
        #[arg(long)]
        time_limit_ms: Option<u64>,
        /// Decomposition text destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Monte Carlo campaigns.
    Experiment {
        #[command(subcommand)]
        experiment: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Decomposition-existence frequency across a list of n.
    Existence {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated n values; each dn must be divisible by 2k.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Keep non-simple samples as unsolved records instead of
        /// rejection-sampling.
        #[arg(long)]
        include_nonsimple: bool,
        /// Record wall-clock milliseconds (breaks byte-identical re-runs).
        #[arg(long)]
        timings: bool,
        /// Per-trial records CSV destination.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Per-n summary JSON destination.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Cycle-count means against their limiting Poisson parameters.
    Cycles {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Largest cycle length tabulated (at most 4).
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Independent leaf-set condition frequency next to existence.
    Leaf {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

/// Parses argv and dispatches; exit code 0 on success, 1 on a domain
/// error, 2 on a usage error.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Seed 0 with a notice keeps unseeded invocations deterministic.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("notice: --seed not given; using seed 0");
        0
    })
}

/// Writes to the path when given, else prints to stdout.
fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_json(path: &PathBuf, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::Error::Domain(format!("JSON encoding failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Thresholds { d, k, format } => cmd_thresholds(d, k, format),
        Command::Table1 { dmax, format } => cmd_table(dmax, format, false),
        Command::Scan { dmax, format } => cmd_table(dmax, format, true),
        Command::Fhat { d, k, points, out } => cmd_fhat(d, k, points, out),
        Command::Moments {
            d,
            k,
            n,
            cap,
            format,
        } => cmd_moments(d, k, n, cap, format),
        Command::Landscape {
            d,
            k,
            maximize,
            starts,
            seed,
            dump,
            format,
        } => cmd_landscape(d, k, maximize, starts, seed, dump, format),
        Command::Sample {
            n,
            d,
            simple,
            seed,
            out,
        } => cmd_sample(n, d, simple, seed, out),
        Command::Decompose {
            graph,
            k,
            mode,
            seed,
            node_cap,
            time_limit_ms,
            out,
        } => cmd_decompose(graph, k, mode, seed, node_cap, time_limit_ms, out),
        Command::Experiment { experiment } => match experiment {
            ExperimentCommand::Existence {
                d,
                k,
                n_list,
                trials,
                seed,
                mode,
                include_nonsimple,
                timings,
                csv,
                json,
                format,
            } => cmd_existence(
                d,
                k,
                n_list,
                trials,
                seed,
                mode,
                include_nonsimple,
                timings,
                csv,
                json,
                format,
            ),
            ExperimentCommand::Cycles {
                d,
                n,
                trials,
                m,
                seed,
                csv,
                json,
                format,
            } => cmd_cycles(d, n, trials, m, seed, csv, json, format),
            ExperimentCommand::Leaf {
                d,
                k,
                n,
                trials,
                seed,
                csv,
                json,
                format,
            } => cmd_leaf(d, k, n, trials, seed, csv, json, format),
        },
    }
}

fn cmd_thresholds(d: i64, k: Option<i64>, format: OutputFormat) -> Result<()> {
    let report = ThresholdReport::compute(d, k)?;
    match format {
        OutputFormat::Json => println!(
            "{}",
            json!({
                "d": report.d,
                "k": report.k,
                "ksscm": report.ksscm,
                "kplus": report.kplus,
                "p2": report.p2_holds,
                "p1": report.p1_holds,
                "c": report.c_value,
                "c_gt_one": report.c_gt_one,
            })
        ),
        _ => {
            println!("ksscm={} kplus={}", report.ksscm, report.kplus);
            if k.is_some() {
                println!("k={} p2={} p1={}", report.k, report.p2_holds, report.p1_holds);
                println!("c={} c_gt_one={}", report.c_value, report.c_gt_one);
            }
        }
    }
    Ok(())
}

fn cmd_table(dmax: i64, format: OutputFormat, check_consistency: bool) -> Result<()> {
    if dmax < 3 {
        return crate::domain_err(format!("--dmax must be at least 3, got {dmax}"));
    }
    let rows: Vec<(i64, i64, i64)> = (3..=dmax)
        .map(|d| Ok((d, compute_ksscm(d)?, compute_kplus(d)?)))
        .collect::<Result<_>>()?;
    match format {
        OutputFormat::Csv => {
            if check_consistency {
                println!("d,ksscm,kplus,consistent");
                for (d, ksscm, kplus) in rows {
                    let ok = ksscm == kplus || ksscm == kplus - 1;
                    println!("{d},{ksscm},{kplus},{}", u8::from(ok));
                }
            } else {
                println!("d,ksscm,kplus");
                for (d, ksscm, kplus) in rows {
                    println!("{d},{ksscm},{kplus}");
                }
            }
        }
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|&(d, ksscm, kplus)| json!({"d": d, "ksscm": ksscm, "kplus": kplus}))
                .collect();
            println!("{}", serde_json::Value::Array(items));
        }
        OutputFormat::Text => {
            for (d, ksscm, kplus) in rows {
                if check_consistency {
                    let ok = ksscm == kplus || ksscm == kplus - 1;
                    println!("d={d} ksscm={ksscm} kplus={kplus} consistent={ok}");
                } else {
                    println!("d={d} ksscm={ksscm} kplus={kplus}");
                }
            }
        }
    }
    Ok(())
}

fn cmd_fhat(d: i64, k: i64, points: usize, out: Option<PathBuf>) -> Result<()> {
    if points < 2 {
        return crate::domain_err("--points must be at least 2");
    }
    let params = Params::new(d, k)?;
    let window = p1_interval(&params)?;
    let step = window.width() / rat_int(points as i64 - 1);
    let mut grid: Vec<Rational> = (0..points as i64)
        .map(|j| &window.lo + &step * rat_int(j))
        .collect();
    let one = rat_int(1);
    if !grid.contains(&one) {
        grid.push(one);
        grid.sort();
    }
    let series = plot_fhat(&params, Some(&grid))?;
    let mut csv = String::from("x,fhat\n");
    for (x, v) in &series {
        csv.push_str(&format!(
            "{:.16e},{:.16e}\n",
            x.to_f64().unwrap_or(f64::NAN),
            hp::to_f64(v)
        ));
    }
    let changes = count_sign_changes(&series);
    let to_file = out.is_some();
    emit(out.as_ref(), &csv)?;
    if to_file {
        println!("sign_changes={changes}");
    } else {
        eprintln!("sign_changes={changes}");
    }
    Ok(())
}

fn cmd_moments(
    d: i64,
    k: i64,
    n: Option<i64>,
    cap: Option<u64>,
    format: OutputFormat,
) -> Result<()> {
    let vrl = hp::to_sig_string(&moments::variance_ratio_limit(d, k)?, 50);
    let sum = hp::to_sig_string(&moments::sum_lambda_delta_sq(d, k)?, 50);
    match n {
        None => match format {
            OutputFormat::Json => println!(
                "{}",
                json!({
                    "d": d,
                    "k": k,
                    "variance_ratio_limit": vrl,
                    "sum_lambda_delta_sq": sum,
                })
            ),
            _ => {
                println!("variance_ratio_limit={vrl}");
                println!("sum_lambda_delta_sq={sum}");
            }
        },
        Some(n) => {
            let report = MomentReport::compute(n, d, k, cap)?;
            let ey_sq = &report.exact_ey * &report.exact_ey;
            let ratio = hp::to_sig_string(
                &hp::div(
                    &hp::from_rational(&report.exact_ey2),
                    &hp::from_rational(&ey_sq),
                ),
                20,
            );
            match format {
                OutputFormat::Json => println!(
                    "{}",
                    json!({
                        "n": n,
                        "d": d,
                        "k": k,
                        "ey": report.exact_ey.to_string(),
                        "asympt_ey": report.asympt_ey,
                        "ey2": report.exact_ey2.to_string(),
                        "ey2_over_ey_sq": ratio,
                        "variance_ratio_limit": report.variance_ratio_limit,
                        "sum_lambda_delta_sq": report.sum_lambda_delta_sq,
                    })
                ),
                _ => {
                    println!("ey={}", report.exact_ey);
                    println!("asympt_ey={}", report.asympt_ey);
                    println!("ey2={}", report.exact_ey2);
                    println!("ey2_over_ey_sq={ratio}");
                    println!("variance_ratio_limit={}", report.variance_ratio_limit);
                    println!("sum_lambda_delta_sq={}", report.sum_lambda_delta_sq);
                }
            }
        }
    }
    Ok(())
}

fn cmd_landscape(
    d: i64,
    k: i64,
    maximize: bool,
    starts: usize,
    seed: Option<u64>,
    dump: Option<PathBuf>,
    format: OutputFormat,
) -> Result<()> {
    let phi_star = hp::to_sig_string(&laplace::phi_bstar_closed(d, k)?, 50);
    let phi_boundary = hp::to_sig_string(&laplace::phi_boundary_closed(d, k)?, 50);
    let psi_sq = laplace::psi_bstar_closed_sq(d, k)?;
    let det = laplace::det_negh_closed(d, k)?;
    let mut max_json = serde_json::Value::Null;
    let mut max_lines = Vec::new();
    if maximize {
        let opts = laplace::MaximizeOptions {
            starts,
            seed: resolve_seed(seed),
            dump,
            ..laplace::MaximizeOptions::default()
        };
        let report = laplace::maximize_phi(d, k, &opts)?;
        max_json = json!({
            "matches_bstar": report.matches_bstar,
            "value": report.value,
            "starts_run": report.starts_run,
            "warning": report.warning,
            "argmax": report.argmax.b().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect::<Vec<f64>>(),
        });
        max_lines.push(format!(
            "maximize_matches_bstar={} value={:.12} starts_run={}",
            report.matches_bstar, report.value, report.starts_run
        ));
        if let Some(w) = report.warning {
            max_lines.push(format!("maximize_warning={w}"));
        }
    }
    match format {
        OutputFormat::Json => println!(
            "{}",
            json!({
                "d": d,
                "k": k,
                "phi_bstar": phi_star,
                "phi_boundary": phi_boundary,
                "psi_bstar_sq": psi_sq.to_string(),
                "det_neg_hessian": det.to_string(),
                "maximize": max_json,
            })
        ),
        _ => {
            println!("phi_bstar={phi_star}");
            println!("phi_boundary={phi_boundary}");
            println!("psi_bstar_sq={psi_sq}");
            println!("det_neg_hessian={det}");
            for line in max_lines {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn cmd_sample(
    n: usize,
    d: usize,
    simple: bool,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let seed = resolve_seed(seed);
    let g = if simple {
        sample_simple_graph(n, d, seed, SAMPLE_TRIES)?
    } else {
        sample_pairing(n, d, seed)?.multigraph()
    };
    emit(out.as_ref(), &g.to_text())
}

fn cmd_decompose(
    graph: PathBuf,
    k: usize,
    mode: ModeArg,
    seed: Option<u64>,
    node_cap: u64,
    time_limit_ms: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let g = Multigraph::read_file(&graph)?;
    let seed = match mode {
        ModeArg::Exact => seed.unwrap_or(0),
        _ => resolve_seed(seed),
    };
    let opts = SolveOptions {
        mode: mode.into(),
        time_limit: time_limit_ms.map(Duration::from_millis),
        seed,
        node_cap,
    };
    match solve(&g, k, &opts)? {
        SolveOutcome::Found(s) => {
            debug_assert!(crate::decompose::verify(&g, &s, k));
            match out {
                Some(path) => {
                    std::fs::write(&path, s.to_text())?;
                    println!("found");
                }
                None => {
                    println!("found");
                    print!("{}", s.to_text());
                }
            }
        }
        SolveOutcome::ProvenNone => println!("proven-none"),
        SolveOutcome::Unknown { nodes, reason } => {
            println!("unknown nodes={nodes} reason={reason}");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_existence(
    d: usize,
    k: usize,
    n_list: Vec<usize>,
    trials: usize,
    seed: Option<u64>,
    mode: ModeArg,
    include_nonsimple: bool,
    timings: bool,
    csv: Option<PathBuf>,
    json_path: Option<PathBuf>,
    format: OutputFormat,
) -> Result<()> {
    let mut config = TrialConfig::new(d, k, n_list, trials, resolve_seed(seed))?;
    config.solver.mode = mode.into();
    config.simple_only = !include_nonsimple;
    config.timings = timings;
    let report = run_existence(&config)?;
    if let Some(path) = &csv {
        std::fs::write(path, records_to_csv(&report.records))?;
    }
    if let Some(path) = &json_path {
        write_json(path, &serde_json::to_value(&report.summaries).unwrap())?;
    }
    match format {
        OutputFormat::Csv => print!("{}", records_to_csv(&report.records)),
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_value(&report.summaries).unwrap()
        ),
        OutputFormat::Text => {
            for s in &report.summaries {
                println!(
                    "n={} trials={} simple={} found={} proven_none={} unknown={} frequency={:.6} ci=[{:.6},{:.6}]",
                    s.n,
                    s.trials,
                    s.simple,
                    s.found,
                    s.proven_none,
                    s.unknown,
                    s.frequency,
                    s.interval_lo,
                    s.interval_hi
                );
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_cycles(
    d: usize,
    n: usize,
    trials: usize,
    m: usize,
    seed: Option<u64>,
    csv: Option<PathBuf>,
    json_path: Option<PathBuf>,
    format: OutputFormat,
) -> Result<()> {
    let report = run_cycle_poisson(d, n, trials, m, resolve_seed(seed))?;
    let summary = json!({
        "d": d,
        "n": n,
        "trials": report.trials,
        "rows": serde_json::to_value(&report.rows).unwrap(),
        "simple": report.simple,
        "simple_frequency": report.simple_frequency,
        "simple_interval": [report.simple_interval_lo, report.simple_interval_hi],
    });
    if let Some(path) = &csv {
        std::fs::write(path, records_to_csv(&report.records))?;
    }
    if let Some(path) = &json_path {
        write_json(path, &summary)?;
    }
    match format {
        OutputFormat::Csv => print!("{}", records_to_csv(&report.records)),
        OutputFormat::Json => println!("{summary}"),
        OutputFormat::Text => {
            for row in &report.rows {
                println!(
                    "j={} mean={:.6} variance={:.6} lambda={:.6} z={:.3}",
                    row.j, row.mean, row.variance, row.lambda, row.z_score
                );
            }
            println!(
                "simple_frequency={:.6} ci=[{:.6},{:.6}]",
                report.simple_frequency, report.simple_interval_lo, report.simple_interval_hi
            );
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_leaf(
    d: usize,
    k: usize,
    n: usize,
    trials: usize,
    seed: Option<u64>,
    csv: Option<PathBuf>,
    json_path: Option<PathBuf>,
    format: OutputFormat,
) -> Result<()> {
    let report = run_leaf_condition(d, k, n, trials, resolve_seed(seed))?;
    let summary = json!({
        "d": d,
        "k": k,
        "n": n,
        "trials": report.trials,
        "leaf_size": report.leaf_size,
        "condition": report.condition,
        "condition_frequency": report.condition_frequency,
        "condition_interval": [report.condition_interval_lo, report.condition_interval_hi],
        "found": report.found,
        "found_frequency": report.found_frequency,
        "found_interval": [report.found_interval_lo, report.found_interval_hi],
        "implication_violations": report.implication_violations,
    });
    if let Some(path) = &csv {
        std::fs::write(path, records_to_csv(&report.records))?;
    }
    if let Some(path) = &json_path {
        write_json(path, &summary)?;
    }
    match format {
        OutputFormat::Csv => print!("{}", records_to_csv(&report.records)),
        OutputFormat::Json => println!("{summary}"),
        OutputFormat::Text => {
            println!(
                "leaf_size={} condition={}/{} frequency={:.6} ci=[{:.6},{:.6}]",
                report.leaf_size,
                report.condition,
                report.trials,
                report.condition_frequency,
                report.condition_interval_lo,
                report.condition_interval_hi
            );
            println!(
                "found={}/{} frequency={:.6} ci=[{:.6},{:.6}]",
                report.found,
                report.trials,
                report.found_frequency,
                report.found_interval_lo,
                report.found_interval_hi
            );
            println!("implication_violations={}", report.implication_violations);
        }
    }
    Ok(())
}
