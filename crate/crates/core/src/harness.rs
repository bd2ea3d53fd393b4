//! Experiment configs, orchestration and CSV output for the `onesided-ia`
//! binary.
//!
//! Configs are flat TOML files. `m`, `n`, `d` and `power` take either one
//! value for every user or a list of `k` values:
//!
//! ```toml
//! k = 3
//! m = 2
//! n = 2
//! d = 1
//! power = 10.0          # linear; used by `run`
//! noise_var = 1.0
//! algorithm = "one_sided_sd"   # or "distributed_ia"
//! snr_db = [0, 10, 20]  # used by `sweep` and `compare`
//! trials = 200
//! seed = 42
//! max_sweeps = 500
//! tol = 1e-10
//! gamma_init = 0.1
//! output = "out.csv"
//! ```
//!
//! Only `k`, `m`, `n` and `d` are required. Optional extras: `dia_max_iters`
//! and `dia_tol` for the baseline. Unknown keys are rejected.
//!
//! All CSV numbers are written with 17 significant digits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Deserialize;

use crate::baseline::distributed_ia_run;
use crate::error::{IaError, Result};
use crate::metrics::{run_trials, theoretical_capacity, Algorithm, AlgorithmOptions, TrialOutcome};
use crate::network::{draw_channels, random_precoders, NetworkConfig};
use crate::optimizer::{run as sd_run, SdOptions};
use crate::seed::trial_seed;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerUser<T> {
    Same(T),
    Each(Vec<T>),
}

impl<T: Clone> PerUser<T> {
    fn expand(self, k: usize) -> Vec<T> {
        match self {
            PerUser::Same(x) => vec![x; k],
            PerUser::Each(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    k: usize,
    m: PerUser<usize>,
    n: PerUser<usize>,
    d: PerUser<usize>,
    power: Option<PerUser<f64>>,
    noise_var: Option<f64>,
    algorithm: Option<Algorithm>,
    #[serde(default)]
    snr_db: Vec<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
    max_sweeps: Option<usize>,
    tol: Option<f64>,
    gamma_init: Option<f64>,
    output: Option<PathBuf>,
    dia_max_iters: Option<usize>,
    dia_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub network: NetworkConfig,
    pub algorithm: Algorithm,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub options: AlgorithmOptions,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| IaError::Config(e.to_string()))?;
        let k = raw.k;
        let network = NetworkConfig::new(
            k,
            raw.m.expand(k),
            raw.n.expand(k),
            raw.d.expand(k),
            raw.power.map_or(vec![1.0; k], |p| p.expand(k)),
            raw.noise_var.unwrap_or(1.0),
        )
        .map_err(|e| IaError::Config(e.to_string()))?;

        let defaults = AlgorithmOptions::default();
        let sd = SdOptions {
            max_sweeps: raw.max_sweeps.unwrap_or(defaults.sd.max_sweeps),
            tol: raw.tol.unwrap_or(defaults.sd.tol),
            gamma_init: raw.gamma_init.unwrap_or(defaults.sd.gamma_init),
            ..defaults.sd
        };
        sd.validate()?;
        let options = AlgorithmOptions {
            sd,
            dia_max_iters: raw.dia_max_iters.unwrap_or(defaults.dia_max_iters),
            dia_tol: raw.dia_tol.unwrap_or(defaults.dia_tol),
        };
        let trials = raw.trials.unwrap_or(1);
        if trials == 0 {
            return Err(IaError::Config("`trials` must be at least 1".into()));
        }
        if raw.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(IaError::Config("`snr_db` entries must be finite".into()));
        }
        Ok(Self {
            network,
            algorithm: raw.algorithm.unwrap_or(Algorithm::OneSidedSd),
            snr_db: raw.snr_db,
            trials,
            seed: raw.seed.unwrap_or(0),
            options,
            output: raw.output,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| IaError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            IaError::Config(msg) => IaError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn trial_seeds(&self, snr_index: usize) -> Vec<u64> {
        (0..self.trials as u64).map(|t| trial_seed(self.seed, snr_index as u64, t)).collect()
    }

    fn require_snr_list(&self) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(IaError::Config("`snr_db` must list at least one SNR point".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub status: String,
    pub initial_leakage: f64,
    pub final_leakage: f64,
    pub sweeps: usize,
    pub wall_time: Duration,
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn numbered(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (1..=k).map(move |i| format!("{prefix}{i}"))
}

/// Header of the `run` trace CSV.
pub fn trace_header(k: usize) -> Vec<String> {
    let mut h = vec!["sweep".to_string(), "f".to_string()];
    h.extend(numbered("leak_rx", k));
    h.extend(numbered("zz_tx", k));
    h.extend(numbered("gamma_tx", k));
    h
}

pub const SWEEP_HEADER: [&str; 4] = ["snr_db", "sum_rate", "theory_rate", "mean_leakage"];

pub const COMPARE_HEADER: [&str; 9] = [
    "snr_db",
    "sum_rate_one_sided_sd",
    "sum_rate_distributed_ia",
    "theory_rate",
    "mean_leakage_one_sided_sd",
    "mean_leakage_distributed_ia",
    "mean_max_angle_one_sided_sd",
    "mean_max_angle_distributed_ia",
    "rel_diff",
];

/// One optimization on the channel draw of trial 0; writes the per-sweep
/// trace.
pub fn cmd_run<W: Write>(config: &ExperimentConfig, out: W) -> Result<RunSummary> {
    let start = Instant::now();
    let net = &config.network;
    let seed = trial_seed(config.seed, 0, 0);
    let channels = draw_channels(net, seed);
    let init = random_precoders(net, seed)?;

    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(trace_header(net.k))?;
    let nan = vec![f64::NAN; net.k];

    let (status, sweeps, initial, last) = match config.algorithm {
        Algorithm::OneSidedSd => {
            let run = sd_run(&channels, net, &init, &config.options.sd)?;
            for r in &run.trace {
                let mut row = vec![r.sweep.to_string(), fmt_num(r.f)];
                row.extend(r.leakage.iter().chain(&r.zz).chain(&r.gammas).map(|&x| fmt_num(x)));
                writer.write_record(&row)?;
            }
            (run.status.as_str(), run.sweeps(), run.initial_cost(), run.final_cost())
        }
        Algorithm::DistributedIa => {
            let run = distributed_ia_run(
                &channels,
                net,
                &init,
                config.options.dia_max_iters,
                config.options.dia_tol,
            )?;
            for (i, (f, leak)) in run.trace.iter().zip(&run.receiver_trace).enumerate() {
                let mut row = vec![i.to_string(), fmt_num(*f)];
                row.extend(leak.iter().chain(&nan).chain(&nan).map(|&x| fmt_num(x)));
                writer.write_record(&row)?;
            }
            (run.status.as_str(), run.iterations(), run.trace[0], run.final_cost())
        }
    };
    writer.flush()?;
    Ok(RunSummary {
        status: status.to_string(),
        initial_leakage: initial,
        final_leakage: last,
        sweeps,
        wall_time: start.elapsed(),
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

fn mean_rate(outcomes: &[TrialOutcome]) -> f64 {
    mean(outcomes.iter().map(|o| o.sum_rate))
}

fn mean_leakage(outcomes: &[TrialOutcome]) -> f64 {
    mean(outcomes.iter().map(|o| o.final_leakage()))
}

fn mean_angle(outcomes: &[TrialOutcome]) -> f64 {
    if outcomes.iter().any(|o| o.max_angle.is_none()) {
        return f64::NAN;
    }
    mean(outcomes.iter().filter_map(|o| o.max_angle))
}

fn theory_rate(net: &NetworkConfig) -> f64 {
    // first user's transmit antenna count stands in for M
    theoretical_capacity(net.k, net.m[0], net.power[0] / net.noise_var)
}

fn summarize(outcomes: &[&[TrialOutcome]], start: Instant) -> RunSummary {
    let all: Vec<&TrialOutcome> = outcomes.iter().flat_map(|o| o.iter()).collect();
    let converged = all.iter().filter(|o| o.status == "converged").count();
    RunSummary {
        status: format!("{converged}/{} trials converged", all.len()),
        initial_leakage: mean(all.iter().map(|o| o.initial_leakage())),
        final_leakage: mean(all.iter().map(|o| o.final_leakage())),
        sweeps: all.iter().map(|o| o.iterations).max().unwrap_or(0),
        wall_time: start.elapsed(),
    }
}

/// Ergodic sum rate of the configured algorithm at each SNR point.
pub fn cmd_sweep<W: Write>(config: &ExperimentConfig, out: W) -> Result<RunSummary> {
    config.require_snr_list()?;
    let start = Instant::now();
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(SWEEP_HEADER)?;
    let mut per_snr = Vec::with_capacity(config.snr_db.len());
    for (i, &snr) in config.snr_db.iter().enumerate() {
        let seeds = config.trial_seeds(i);
        let outcomes = run_trials(&config.network, &seeds, config.algorithm, snr, &config.options)?;
        writer.write_record([
            fmt_num(snr),
            fmt_num(mean_rate(&outcomes)),
            fmt_num(theory_rate(&config.network.with_snr_db(snr))),
            fmt_num(mean_leakage(&outcomes)),
        ])?;
        per_snr.push(outcomes);
    }
    writer.flush()?;
    let refs: Vec<&[TrialOutcome]> = per_snr.iter().map(Vec::as_slice).collect();
    Ok(summarize(&refs, start))
}

/// Both algorithms on identical channel draws and starting points.
pub fn cmd_compare<W: Write>(config: &ExperimentConfig, out: W) -> Result<RunSummary> {
    config.require_snr_list()?;
    let start = Instant::now();
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(COMPARE_HEADER)?;
    let mut all = Vec::new();
    for (i, &snr) in config.snr_db.iter().enumerate() {
        let seeds = config.trial_seeds(i);
        let sd = run_trials(&config.network, &seeds, Algorithm::OneSidedSd, snr, &config.options)?;
        let dia = run_trials(&config.network, &seeds, Algorithm::DistributedIa, snr, &config.options)?;
        let (rate_sd, rate_dia) = (mean_rate(&sd), mean_rate(&dia));
        let rel_diff = if rate_sd == rate_dia { 0.0 } else { (rate_sd - rate_dia) / rate_dia };
        writer.write_record([
            fmt_num(snr),
            fmt_num(rate_sd),
            fmt_num(rate_dia),
            fmt_num(theory_rate(&config.network.with_snr_db(snr))),
            fmt_num(mean_leakage(&sd)),
            fmt_num(mean_leakage(&dia)),
            fmt_num(mean_angle(&sd)),
            fmt_num(mean_angle(&dia)),
            fmt_num(rel_diff),
        ])?;
        all.push(sd);
        all.push(dia);
    }
    writer.flush()?;
    let refs: Vec<&[TrialOutcome]> = all.iter().map(Vec::as_slice).collect();
    Ok(summarize(&refs, start))
}
