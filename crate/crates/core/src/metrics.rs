//! Alignment and rate metrics, and Monte Carlo averaging over channel draws.

use nalgebra::{Cholesky, Complex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::{distributed_ia_run, min_eig_subspace};
use crate::error::{IaError, Result};
use crate::network::{draw_channels, interference_covariance, random_precoders, ChannelSet, NetworkConfig, PrecoderSet};
use crate::optimizer::{gram_schmidt, run as sd_run, SdOptions};
use crate::CMat;

/// One point of an SNR sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub snr_db: f64,
    pub sum_rate_bits: f64,
    pub per_rx_angles: Vec<f64>,
    pub leakage: f64,
}

/// Largest principal angle between the column spans of `a` and `b`, in
/// `[0, pi/2]`. Both inputs must have orthonormal columns.
pub fn largest_principal_angle(a: &CMat, b: &CMat) -> f64 {
    let (small, large) = if a.ncols() <= b.ncols() { (a, b) } else { (b, a) };
    let cross = small.adjoint() * large;
    let cos = cross.singular_values().iter().cloned().fold(f64::INFINITY, f64::min).min(1.0);
    let residual = small - large * (large.adjoint() * small);
    let sin = residual.singular_values().iter().cloned().fold(0.0, f64::max).min(1.0);
    sin.atan2(cos.max(0.0))
}

/// Largest principal angle between the received subspaces of every pair of
/// interferers at receiver `k`, pairs in lexicographic order.
pub fn alignment_angles(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
    k: usize,
) -> Result<Vec<f64>> {
    if k >= config.k {
        return Err(IaError::Index(format!("receiver {k} out of range 0..{}", config.k)));
    }
    let interferers: Vec<usize> = (0..config.k).filter(|&j| j != k).collect();
    if interferers.len() < 2 {
        return Err(IaError::InsufficientInterferers { k, count: interferers.len() });
    }
    let bases = interferers
        .iter()
        .map(|&j| gram_schmidt(&(channels.get(k, j) * &precoders.v[j])))
        .collect::<Result<Vec<_>>>()?;
    let mut angles = Vec::new();
    for a in 0..bases.len() {
        for b in a + 1..bases.len() {
            angles.push(largest_principal_angle(&bases[a], &bases[b]));
        }
    }
    Ok(angles)
}

/// Largest alignment angle over all receivers, or `None` when fewer than
/// three users leave nothing to compare.
pub fn max_alignment_angle(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
) -> Result<Option<f64>> {
    if config.k < 3 {
        return Ok(None);
    }
    let mut worst: f64 = 0.0;
    for k in 0..config.k {
        for angle in alignment_angles(channels, precoders, config, k)? {
            worst = worst.max(angle);
        }
    }
    Ok(Some(worst))
}

fn log2_det_hpd(m: &CMat) -> Option<f64> {
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l();
    Some(2.0 * (0..l.nrows()).map(|i| l[(i, i)].re.log2()).sum::<f64>())
}

/// Sum rate in bits per channel use when every receiver projects onto its
/// `d` least-interfered eigenvectors:
/// `sum_k log2 det(I + B[k]^{-1} S[k])`, with `B = U^H (Q + s2 I) U` and
/// `S = (P/d) U^H H[k][k] V V^H H[k][k]^H U`.
pub fn effective_sum_rate(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
) -> Result<f64> {
    let mut total = 0.0;
    for k in 0..config.k {
        let q = interference_covariance(channels, precoders, config, k)?;
        let u = min_eig_subspace(&q, config.d[k])?;
        let n = config.n[k];
        let noisy = q.as_matrix() + CMat::identity(n, n) * Complex::new(config.noise_var, 0.0);
        let b = u.adjoint() * noisy * &u;
        let g = u.adjoint() * channels.get(k, k) * &precoders.v[k];
        let s = (&g * g.adjoint()) * Complex::new(config.stream_power(k), 0.0);
        let det_b = log2_det_hpd(&b)
            .ok_or_else(|| IaError::SingularMatrix(format!("interference-plus-noise at receiver {k}")))?;
        let det_bs = log2_det_hpd(&(&b + s))
            .ok_or_else(|| IaError::SingularMatrix(format!("signal-plus-interference at receiver {k}")))?;
        total += (det_bs - det_b).max(0.0);
    }
    Ok(total)
}

/// `(K M / 2) log2(1 + P)`.
pub fn theoretical_capacity(k: usize, m: usize, p: f64) -> f64 {
    (k * m) as f64 / 2.0 * (1.0 + p).log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    OneSidedSd,
    DistributedIa,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::OneSidedSd => "one_sided_sd",
            Algorithm::DistributedIa => "distributed_ia",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmOptions {
    pub sd: SdOptions,
    pub dia_max_iters: usize,
    pub dia_tol: f64,
}

impl Default for AlgorithmOptions {
    fn default() -> Self {
        Self { sd: SdOptions::default(), dia_max_iters: 20_000, dia_tol: 1e-10 }
    }
}

/// Result of optimizing one channel draw.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub seed: u64,
    pub sum_rate: f64,
    pub leakage_trace: Vec<f64>,
    pub max_angle: Option<f64>,
    pub iterations: usize,
    pub status: &'static str,
    /// Largest orthonormality error of any recorded precoder set.
    pub orthonormality_error: f64,
}

impl TrialOutcome {
    pub fn initial_leakage(&self) -> f64 {
        self.leakage_trace[0]
    }

    pub fn final_leakage(&self) -> f64 {
        self.leakage_trace[self.leakage_trace.len() - 1]
    }
}

/// Draws channels and a random start from `seed`, optimizes with
/// `algorithm`, and evaluates the result.
pub fn run_trial(
    config: &NetworkConfig,
    seed: u64,
    algorithm: Algorithm,
    opts: &AlgorithmOptions,
) -> Result<TrialOutcome> {
    let channels = draw_channels(config, seed);
    let init = random_precoders(config, seed)?;
    let (precoders, leakage_trace, iterations, status, orthonormality_error) = match algorithm {
        Algorithm::OneSidedSd => {
            let out = sd_run(&channels, config, &init, &opts.sd)?;
            let trace: Vec<f64> = out.trace.iter().map(|r| r.f).collect();
            let ortho = out.trace.iter().map(|r| r.orthonormality_error).fold(0.0, f64::max);
            (out.precoders.clone(), trace, out.sweeps(), out.status.as_str(), ortho)
        }
        Algorithm::DistributedIa => {
            let out = distributed_ia_run(&channels, config, &init, opts.dia_max_iters, opts.dia_tol)?;
            let status = out.status.as_str();
            let ortho = out.precoders.orthonormality_error();
            let iterations = out.iterations();
            (out.precoders, out.trace, iterations, status, ortho)
        }
    };
    Ok(TrialOutcome {
        seed,
        sum_rate: effective_sum_rate(&channels, &precoders, config)?,
        max_angle: max_alignment_angle(&channels, &precoders, config)?,
        leakage_trace,
        iterations,
        status,
        orthonormality_error,
    })
}

/// Runs one trial per seed at the given SNR, in parallel. Results come back
/// in seed order whatever the schedule.
pub fn run_trials(
    config: &NetworkConfig,
    seeds: &[u64],
    algorithm: Algorithm,
    snr_db: f64,
    opts: &AlgorithmOptions,
) -> Result<Vec<TrialOutcome>> {
    let at_snr = config.with_snr_db(snr_db);
    seeds.par_iter().map(|&seed| run_trial(&at_snr, seed, algorithm, opts)).collect()
}

/// Mean effective sum rate over independent channel draws, one per seed.
pub fn ergodic_sum_rate(
    config: &NetworkConfig,
    seeds: &[u64],
    algorithm: Algorithm,
    snr_db: f64,
    opts: &AlgorithmOptions,
) -> Result<f64> {
    if seeds.is_empty() {
        return Err(IaError::Config("ergodic averaging needs at least one seed".into()));
    }
    let outcomes = run_trials(config, seeds, algorithm, snr_db, opts)?;
    Ok(outcomes.iter().map(|o| o.sum_rate).sum::<f64>() / outcomes.len() as f64)
}
