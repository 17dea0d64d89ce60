//! Seeded Monte Carlo campaigns over random regular graphs: decomposition
//! existence frequencies, cycle-count Poisson checks, and the independent
//! leaf-set condition, persisted as CSV records plus JSON summaries.
//!
//! Every trial's seed derives from the campaign master seed by a fixed
//! 64-bit mix of (master, n, trial), so any record can be regenerated in
//! isolation and re-running a campaign reproduces its output byte for byte.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{
    independence_number_with_cap, solve, verify, SolveOptions, SolveOutcome,
    DEFAULT_INDEPENDENCE_CAP,
};
use crate::pairing::{count_cycles, sample_pairing, Multigraph};
use crate::{domain_err, mix_seed, Result};

/// Cycle lengths tracked per trial (X_1 through X_4).
pub const TRACKED_CYCLES: usize = 4;

/// Rejection budget when a trial must produce a simple graph.
const SIMPLE_SAMPLE_TRIES: u64 = 5_000_000;

/// z for a 95% confidence level.
const WILSON_Z: f64 = 1.959_963_984_540_054;

/// One Monte Carlo campaign: solve for k-star decompositions of random
/// d-regular graphs at each n in `n_list`.
#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub d: usize,
    pub k: usize,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolveOptions,
    /// Rejection-sample until the pairing projects to a simple graph;
    /// otherwise keep every sample and record non-simple ones unsolved.
    pub simple_only: bool,
    /// Record wall-clock milliseconds per trial. Off by default so that
    /// re-runs are byte-identical.
    pub timings: bool,
}

impl TrialConfig {
    pub fn new(d: usize, k: usize, n_list: Vec<usize>, trials: usize, seed: u64) -> Result<Self> {
        let config = TrialConfig {
            d,
            k,
            n_list,
            trials,
            seed,
            solver: SolveOptions::default(),
            simple_only: true,
            timings: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.k == 0 {
            return domain_err("d and k must be positive");
        }
        if self.trials == 0 {
            return domain_err("need at least one trial");
        }
        if self.n_list.is_empty() {
            return domain_err("need at least one n");
        }
        for &n in &self.n_list {
            if n == 0 || (self.d * n) % (2 * self.k) != 0 {
                return domain_err(format!(
                    "n = {n} is invalid: 2k = {} must divide dn = {}",
                    2 * self.k,
                    self.d * n
                ));
            }
        }
        Ok(())
    }
}

/// One sampled graph and what the solver said about it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    /// Per-trial seed: `mix(mix(master, n), trial)`.
    pub seed: u64,
    pub simple: bool,
    /// Cycle counts X_1..X_4 of the sampled multigraph.
    pub cycles: [u64; TRACKED_CYCLES],
    pub found: bool,
    /// "found", "proven-none", "unknown", "nonsimple", or "sampled".
    pub status: String,
    /// Solve wall time in milliseconds; 0 unless timings were requested.
    pub ms: u64,
}

/// Wilson 95% score interval for `successes` out of `total`; the empty
/// sample yields the vacuous interval [0, 1].
pub fn wilson_interval(successes: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn trial_seed(master: u64, n: usize, trial: usize) -> u64 {
    mix_seed(mix_seed(master, n as u64), trial as u64)
}

fn first_cycles(g: &Multigraph) -> [u64; TRACKED_CYCLES] {
    let counts = count_cycles(g, TRACKED_CYCLES);
    let mut out = [0u64; TRACKED_CYCLES];
    out.copy_from_slice(&counts[..TRACKED_CYCLES]);
    out
}

/// Samples one graph for a trial. With `simple_only` the pairing is
/// rejection-sampled until simple under the trial seed's stream.
fn sample_trial_graph(
    n: usize,
    d: usize,
    seed: u64,
    simple_only: bool,
) -> Result<(Multigraph, bool)> {
    if simple_only {
        let g = crate::pairing::sample_simple_graph(n, d, seed, SIMPLE_SAMPLE_TRIES)?;
        Ok((g, true))
    } else {
        let g = sample_pairing(n, d, seed)?.multigraph();
        let simple = g.is_simple();
        Ok((g, simple))
    }
}

fn run_solver_trial(
    n: usize,
    trial: usize,
    d: usize,
    k: usize,
    master: u64,
    solver: &SolveOptions,
    simple_only: bool,
    timings: bool,
) -> Result<TrialRecord> {
    let seed = trial_seed(master, n, trial);
    let (g, simple) = sample_trial_graph(n, d, seed, simple_only)?;
    let cycles = first_cycles(&g);
    let mut record = TrialRecord {
        n,
        trial,
        seed,
        simple,
        cycles,
        found: false,
        status: "nonsimple".into(),
        ms: 0,
    };
    if simple {
        let started = Instant::now();
        let outcome = solve(&g, k, solver)?;
        if timings {
            record.ms = started.elapsed().as_millis() as u64;
        }
        record.status = match outcome {
            SolveOutcome::Found(s) => {
                assert!(verify(&g, &s, k), "solver returned an invalid decomposition");
                record.found = true;
                "found".into()
            }
            SolveOutcome::ProvenNone => "proven-none".into(),
            SolveOutcome::Unknown { .. } => "unknown".into(),
        };
    }
    Ok(record)
}

/// Per-n outcome counts with the found frequency among simple samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExistenceSummary {
    pub n: usize,
    pub trials: usize,
    pub simple: usize,
    pub found: usize,
    pub proven_none: usize,
    pub unknown: usize,
    pub frequency: f64,
    pub interval_lo: f64,
    pub interval_hi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExistenceReport {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<ExistenceSummary>,
}

/// Recomputes per-n summaries from records alone; reports carry no other
/// state.
pub fn summarize_existence(records: &[TrialRecord]) -> Vec<ExistenceSummary> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.iter()
        .map(|&n| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            let simple = rows.iter().filter(|r| r.simple).count();
            let found = rows.iter().filter(|r| r.found).count();
            let proven_none = rows.iter().filter(|r| r.status == "proven-none").count();
            let unknown = rows.iter().filter(|r| r.status == "unknown").count();
            let frequency = if simple == 0 {
                0.0
            } else {
                found as f64 / simple as f64
            };
            let (interval_lo, interval_hi) = wilson_interval(found as u64, simple as u64);
            ExistenceSummary {
                n,
                trials: rows.len(),
                simple,
                found,
                proven_none,
                unknown,
                frequency,
                interval_lo,
                interval_hi,
            }
        })
        .collect()
}

/// Runs the existence campaign: per trial, sample a d-regular graph and
/// solve for a k-star decomposition. Solver unknowns are recorded, never
/// dropped. Records are ordered by (n, trial) regardless of completion
/// order.
pub fn run_existence(config: &TrialConfig) -> Result<ExistenceReport> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.n_list {
        for trial in 0..config.trials {
            jobs.push((n, trial));
        }
    }
    let mut records = jobs
        .into_par_iter()
        .map(|(n, trial)| {
            run_solver_trial(
                n,
                trial,
                config.d,
                config.k,
                config.seed,
                &config.solver,
                config.simple_only,
                config.timings,
            )
        })
        .collect::<Result<Vec<TrialRecord>>>()?;
    records.sort_by_key(|r| (r.n, r.trial));
    let summaries = summarize_existence(&records);
    Ok(ExistenceReport { records, summaries })
}

/// Empirical cycle-count statistics against the limiting Poisson mean
/// (d-1)^j / (2j).
#[derive(Clone, Debug, Serialize)]
pub struct CycleRow {
    pub j: usize,
    pub mean: f64,
    pub variance: f64,
    pub lambda: f64,
    /// (mean - lambda) / (sample standard error of the mean).
    pub z_score: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub records: Vec<TrialRecord>,
    pub rows: Vec<CycleRow>,
    pub trials: usize,
    pub simple: usize,
    pub simple_frequency: f64,
    pub simple_interval_lo: f64,
    pub simple_interval_hi: f64,
}

/// Samples `trials` pairings of n cells with d points and tabulates cycle
/// counts X_1..X_m against their limiting Poisson means, plus the observed
/// simplicity frequency. Needs at least 100 trials; m is capped at the
/// tracked cycle lengths.
pub fn run_cycle_poisson(
    d: usize,
    n: usize,
    trials: usize,
    m: usize,
    seed: u64,
) -> Result<CycleReport> {
    if trials < 100 {
        return domain_err(format!("need at least 100 trials, got {trials}"));
    }
    if m == 0 || m > TRACKED_CYCLES {
        return domain_err(format!("cycle lengths must lie in 1..={TRACKED_CYCLES}"));
    }
    if d == 0 || n == 0 || (d * n) % 2 != 0 {
        return domain_err("need positive n and d with dn even");
    }
    let mut records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(seed, n, trial);
            let g = sample_pairing(n, d, seed)?.multigraph();
            Ok(TrialRecord {
                n,
                trial,
                seed,
                simple: g.is_simple(),
                cycles: first_cycles(&g),
                found: false,
                status: "sampled".into(),
                ms: 0,
            })
        })
        .collect::<Result<Vec<TrialRecord>>>()?;
    records.sort_by_key(|r| r.trial);
    let t = trials as f64;
    let rows = (1..=m)
        .map(|j| {
            let mean = records.iter().map(|r| r.cycles[j - 1] as f64).sum::<f64>() / t;
            let variance = records
                .iter()
                .map(|r| {
                    let x = r.cycles[j - 1] as f64 - mean;
                    x * x
                })
                .sum::<f64>()
                / (t - 1.0);
            let lambda = (d as f64 - 1.0).powi(j as i32) / (2.0 * j as f64);
            let se = (variance / t).sqrt();
            let z_score = if se > 0.0 { (mean - lambda) / se } else { 0.0 };
            CycleRow {
                j,
                mean,
                variance,
                lambda,
                z_score,
            }
        })
        .collect();
    let simple = records.iter().filter(|r| r.simple).count();
    let (simple_interval_lo, simple_interval_hi) =
        wilson_interval(simple as u64, trials as u64);
    Ok(CycleReport {
        records,
        rows,
        trials,
        simple,
        simple_frequency: simple as f64 / t,
        simple_interval_lo,
        simple_interval_hi,
    })
}

/// Frequencies of the independent leaf-set condition next to the
/// decomposition frequency it bounds from above.
#[derive(Clone, Debug, Serialize)]
pub struct LeafReport {
    pub records: Vec<TrialRecord>,
    pub trials: usize,
    /// Required independent set size (2k - d) n / (2k).
    pub leaf_size: usize,
    pub condition: usize,
    pub found: usize,
    pub condition_frequency: f64,
    pub condition_interval_lo: f64,
    pub condition_interval_hi: f64,
    pub found_frequency: f64,
    pub found_interval_lo: f64,
    pub found_interval_hi: f64,
    /// Trials where a decomposition was found without the condition; always
    /// zero, recorded as a cross-check.
    pub implication_violations: usize,
}

/// Monte Carlo frequency of α(G) ≥ (2k-d) n / (2k) on simple d-regular
/// samples, co-reported with the decomposition frequency. A decomposition's
/// leaves are an independent set of exactly that size, so the condition
/// frequency dominates.
pub fn run_leaf_condition(
    d: usize,
    k: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<LeafReport> {
    if d == 0 || k == 0 || 2 * k <= d {
        return domain_err(format!("need 2k > d, got d = {d}, k = {k}"));
    }
    if (d * n) % (2 * k) != 0 {
        return domain_err(format!(
            "n = {n} is invalid: 2k = {} must divide dn = {}",
            2 * k,
            d * n
        ));
    }
    if n > DEFAULT_INDEPENDENCE_CAP {
        return domain_err(format!(
            "independence check limited to {DEFAULT_INDEPENDENCE_CAP} vertices, got {n}"
        ));
    }
    if trials == 0 {
        return domain_err("need at least one trial");
    }
    let leaf_size = (2 * k - d) * n / (2 * k);
    let solver = SolveOptions::default();
    let results = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let record = run_solver_trial(n, trial, d, k, seed, &solver, true, false)?;
            let g = sample_trial_graph(n, d, record.seed, true)?.0;
            let alpha = independence_number_with_cap(&g, DEFAULT_INDEPENDENCE_CAP)?;
            Ok((record, alpha >= leaf_size))
        })
        .collect::<Result<Vec<(TrialRecord, bool)>>>()?;
    let mut results = results;
    results.sort_by_key(|(r, _)| r.trial);
    let condition = results.iter().filter(|(_, c)| *c).count();
    let found = results.iter().filter(|(r, _)| r.found).count();
    let implication_violations = results.iter().filter(|(r, c)| r.found && !c).count();
    let (condition_interval_lo, condition_interval_hi) =
        wilson_interval(condition as u64, trials as u64);
    let (found_interval_lo, found_interval_hi) = wilson_interval(found as u64, trials as u64);
    Ok(LeafReport {
        records: results.into_iter().map(|(r, _)| r).collect(),
        trials,
        leaf_size,
        condition,
        found,
        condition_frequency: condition as f64 / trials as f64,
        condition_interval_lo,
        condition_interval_hi,
        found_frequency: found as f64 / trials as f64,
        found_interval_lo,
        found_interval_hi,
        implication_violations,
    })
}

/// CSV header shared by all campaign record dumps.
pub const CSV_HEADER: &str = "n,trial,seed,simple,x1,x2,x3,x4,found,status,ms";

/// Renders records under [`CSV_HEADER`] with LF line endings; flags are 0/1.
pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.trial,
            r.seed,
            u8::from(r.simple),
            r.cycles[0],
            r.cycles[1],
            r.cycles[2],
            r.cycles[3],
            u8::from(r.found),
            r.status,
            r.ms
        ));
    }
    out
}

/// Parses the output of [`records_to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return domain_err(format!("bad CSV header: {other:?}"));
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return domain_err(format!(
                "csv line {}: expected 11 fields, got {}",
                idx + 2,
                fields.len()
            ));
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| crate::Error::Domain(format!("csv line {}: bad {what} {s:?}", idx + 2)))
        };
        let flag = |s: &str, what: &str| -> Result<bool> {
            match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => domain_err(format!("csv line {}: bad {what} {s:?}", idx + 2)),
            }
        };
        records.push(TrialRecord {
            n: num(fields[0], "n")? as usize,
            trial: num(fields[1], "trial")? as usize,
            seed: num(fields[2], "seed")?,
            simple: flag(fields[3], "simple flag")?,
            cycles: [
                num(fields[4], "x1")?,
                num(fields[5], "x2")?,
                num(fields[6], "x3")?,
                num(fields[7], "x4")?,
            ],
            found: flag(fields[8], "found flag")?,
            status: fields[9].to_string(),
            ms: num(fields[10], "ms")?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3, "lo {lo}");
        assert!((hi - 0.5962).abs() < 1e-3, "hi {hi}");
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775).abs() < 1e-3, "hi {hi}");
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_interval(10, 10);
        assert!(lo > 0.6 && hi > 1.0 - 1e-12);
    }

    #[test]
    fn existence_even_multiple_always_found() {
        // d an even multiple of k: every component of a 4-regular graph has
        // an even number of edges, so 2-stars always exist.
        let config = TrialConfig::new(4, 2, vec![10, 20], 20, 5).unwrap();
        let report = run_existence(&config).unwrap();
        for s in &report.summaries {
            assert_eq!(s.found, s.trials, "n = {}", s.n);
            assert_eq!(s.frequency, 1.0);
        }
        assert_eq!(report.records.len(), 40);
    }

    #[test]
    fn existence_records_are_reproducible() {
        let config = TrialConfig::new(4, 3, vec![6, 12], 12, 99).unwrap();
        let a = run_existence(&config).unwrap();
        let b = run_existence(&config).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(records_to_csv(&a.records), records_to_csv(&b.records));
        // Records are ordered by (n, trial).
        let order: Vec<(usize, usize)> = a.records.iter().map(|r| (r.n, r.trial)).collect();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        assert_eq!(order, sorted);
        // Timings stay zero unless requested.
        assert!(a.records.iter().all(|r| r.ms == 0));
    }

    #[test]
    fn csv_round_trip_and_summary_recompute() {
        let config = TrialConfig::new(4, 3, vec![6], 10, 3).unwrap();
        let report = run_existence(&config).unwrap();
        let csv = records_to_csv(&report.records);
        let parsed = records_from_csv(&csv).unwrap();
        assert_eq!(parsed, report.records);
        assert_eq!(summarize_existence(&parsed), report.summaries);
        assert!(records_from_csv("bogus\n1,2\n").is_err());
    }

    #[test]
    fn nonsimple_samples_are_recorded() {
        let mut config = TrialConfig::new(4, 2, vec![6], 40, 11).unwrap();
        config.simple_only = false;
        let report = run_existence(&config).unwrap();
        let nonsimple = report
            .records
            .iter()
            .filter(|r| r.status == "nonsimple")
            .count();
        assert!(nonsimple > 0, "expected some multigraph samples at d = 4");
        for r in &report.records {
            if !r.simple {
                assert!(!r.found);
                assert!(r.cycles[0] > 0 || r.cycles[1] > 0);
            }
        }
        let s = &report.summaries[0];
        assert_eq!(s.simple + nonsimple, s.trials);
    }

    #[test]
    fn cycle_poisson_matches_lambda() {
        assert!(run_cycle_poisson(3, 100, 99, 3, 0).is_err());
        let report = run_cycle_poisson(3, 100, 2000, 3, 42).unwrap();
        assert_eq!(report.rows.len(), 3);
        let expected = [1.0, 1.0, 4.0 / 3.0];
        for (row, lambda) in report.rows.iter().zip(expected) {
            assert_eq!(row.lambda, lambda);
            assert!(
                row.z_score.abs() < 4.0,
                "j = {}: mean {} vs {} (z = {})",
                row.j,
                row.mean,
                lambda,
                row.z_score
            );
        }
        // Poisson: variance tracks the mean.
        let first = &report.rows[0];
        assert!((first.variance / first.mean - 1.0).abs() < 0.3);
        // Simplicity frequency near exp(-2) for d = 3.
        let target = (-2.0f64).exp();
        assert!((report.simple_frequency - target).abs() < 0.05);
    }

    #[test]
    fn cycle_poisson_degenerate_degree_two() {
        let report = run_cycle_poisson(2, 100, 2000, 2, 7).unwrap();
        assert_eq!(report.rows[0].lambda, 0.5);
        assert_eq!(report.rows[1].lambda, 0.25);
        assert!(report.rows[0].z_score.abs() < 4.0);
    }

    #[test]
    fn leaf_condition_dominates_existence() {
        let report = run_leaf_condition(4, 3, 24, 30, 17).unwrap();
        assert_eq!(report.leaf_size, 8);
        assert!(report.condition_frequency >= report.found_frequency);
        assert_eq!(report.implication_violations, 0);
        assert_eq!(report.records.len(), 30);

        assert!(run_leaf_condition(4, 2, 24, 10, 0).is_err());
        assert!(run_leaf_condition(4, 3, 120, 10, 0).is_err());
        assert!(run_leaf_condition(4, 3, 22, 10, 0).is_err());
    }

    #[test]
    fn config_validation_rejects_bad_n() {
        assert!(TrialConfig::new(4, 3, vec![7], 5, 0).is_err());
        assert!(TrialConfig::new(4, 3, vec![], 5, 0).is_err());
        assert!(TrialConfig::new(4, 3, vec![6], 0, 0).is_err());
        assert!(TrialConfig::new(0, 3, vec![6], 5, 0).is_err());
    }
}
