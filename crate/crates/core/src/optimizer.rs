//! Transmitter-side steepest descent.
//!
//! Each sweep visits transmitters in index order. Transmitter `j` computes its
//! descent direction `Z` from the cost Jacobians, by default projects it onto
//! the tangent space `V^H Z = 0`, calibrates its own step size
//! `gamma[j]` with an Armijo doubling/halving rule, and moves to
//! `GS(V[j] + gamma[j] Z)`, where `GS` is Gram-Schmidt orthonormalization. Later
//! transmitters in the same sweep see the updated precoders.
//!
//! Step sizes are measured against the canonical Stiefel metric
//! `<Z, Z> = Re tr(Z^H (I - V V^H / 2) Z)`. A trial step `gamma` is sufficient
//! when it lowers the cost by at least `armijo_fraction * gamma * <Z, Z>`.

use log::debug;
use nalgebra::Complex;

use crate::differential::{descent_direction, leakage_cost, receiver_leakage, tx_gradient};
use crate::error::{IaError, Result};
use crate::network::{ChannelSet, NetworkConfig, PrecoderSet};
use crate::CMat;

/// Column residual (relative to the column's norm) below which Gram-Schmidt
/// reports rank deficiency.
const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SdOptions {
    pub max_sweeps: usize,
    /// Exit once every transmitter's `<Z, Z>` is below this.
    pub tol: f64,
    pub gamma_init: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    /// Sufficient-decrease fraction of the Armijo test, in `(0, 1]`.
    pub armijo_fraction: f64,
    /// Replace the raw negative gradient `Z` with its tangent component
    /// `(I - V V^H) Z` before stepping.
    pub tangent_projection: bool,
}

impl Default for SdOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 1000,
            tol: 1e-10,
            gamma_init: 0.1,
            gamma_min: 1e-12,
            gamma_max: 1e6,
            armijo_fraction: 0.5,
            tangent_projection: true,
        }
    }
}

impl SdOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_sweeps == 0 {
            return Err(IaError::Config("max_sweeps must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(IaError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.gamma_min > 0.0 && self.gamma_min < self.gamma_init && self.gamma_init < self.gamma_max) {
            return Err(IaError::Config(format!(
                "need 0 < gamma_min < gamma_init < gamma_max, got {} / {} / {}",
                self.gamma_min, self.gamma_init, self.gamma_max
            )));
        }
        if !(self.armijo_fraction > 0.0 && self.armijo_fraction <= 1.0) {
            return Err(IaError::Config(format!(
                "armijo_fraction must lie in (0, 1], got {}",
                self.armijo_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerState {
    pub precoders: PrecoderSet,
    pub gammas: Vec<f64>,
    pub sweep: usize,
    pub last_zz: Vec<f64>,
}

impl OptimizerState {
    pub fn new(precoders: PrecoderSet, opts: &SdOptions) -> Self {
        let k = precoders.v.len();
        Self { precoders, gammas: vec![opts.gamma_init; k], sweep: 0, last_zz: vec![f64::NAN; k] }
    }
}

/// One row of the optimization trace. Sweep 0 is the starting point, where no
/// direction has been computed yet and `zz` is NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub sweep: usize,
    pub f: f64,
    pub leakage: Vec<f64>,
    pub zz: Vec<f64>,
    pub gammas: Vec<f64>,
    /// Largest `||V^H V - I||_F` of the recorded precoders.
    pub orthonormality_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceStatus {
    Converged,
    MaxIterations,
    /// Every transmitter either met the tolerance or could not find an
    /// acceptable step in the last sweep.
    Stationary,
}

impl ConvergenceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvergenceStatus::Converged => "converged",
            ConvergenceStatus::MaxIterations => "max_iterations",
            ConvergenceStatus::Stationary => "stationary",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdRun {
    pub precoders: PrecoderSet,
    pub trace: Vec<TraceRecord>,
    pub status: ConvergenceStatus,
}

impl SdRun {
    pub fn initial_cost(&self) -> f64 {
        self.trace[0].f
    }

    pub fn final_cost(&self) -> f64 {
        self.trace[self.trace.len() - 1].f
    }

    pub fn sweeps(&self) -> usize {
        self.trace[self.trace.len() - 1].sweep
    }
}

/// Modified Gram-Schmidt. The implied triangular factor has a real positive
/// diagonal, so a matrix with orthonormal columns comes back unchanged.
pub fn gram_schmidt(v: &CMat) -> Result<CMat> {
    let mut q = v.clone();
    for c in 0..q.ncols() {
        let original = v.column(c).norm();
        for p in 0..c {
            let proj = q.column(p).dotc(&q.column(c));
            let basis = q.column(p).into_owned();
            q.column_mut(c).axpy(-proj, &basis, Complex::new(1.0, 0.0));
        }
        let norm = q.column(c).norm();
        if !(norm >= RANK_TOL * original.max(1.0)) {
            return Err(IaError::RankDeficient(format!(
                "column {c} has residual norm {norm:e} after projection"
            )));
        }
        q.column_mut(c).unscale_mut(norm);
    }
    Ok(q)
}

/// `Re tr(Z^H (I - V V^H / 2) Z)`.
pub fn inner_product_zz(z: &CMat, v: &CMat) -> f64 {
    let vz = v.adjoint() * z;
    (z.norm_squared() - 0.5 * vz.norm_squared()).max(0.0)
}

#[derive(Clone, Debug)]
pub struct ArmijoStep {
    pub gamma: f64,
    pub candidate: CMat,
    /// Cost at the accepted candidate.
    pub value: f64,
}

/// Calibrates the step size for one transmitter and returns the accepted
/// candidate `GS(V + gamma Z)`.
///
/// `f_eval` evaluates the cost with the candidate substituted for this
/// transmitter's precoder and `f0` is the cost at `v`. The step doubles while
/// the candidate at twice the step lowers the cost by at least
/// `armijo_fraction * 2 gamma zz`, then halves while the candidate at the
/// current step misses `armijo_fraction * gamma zz`. Halving below
/// `gamma_min` yields [`IaError::StepFloorReached`].
pub fn armijo_calibrate<F>(
    mut f_eval: F,
    f0: f64,
    v: &CMat,
    z: &CMat,
    zz: f64,
    gamma: f64,
    opts: &SdOptions,
) -> Result<ArmijoStep>
where
    F: FnMut(&CMat) -> Result<f64>,
{
    let sigma = opts.armijo_fraction;
    let candidate = |step: f64| gram_schmidt(&(v + z * Complex::new(step, 0.0))).ok();
    let mut gamma = gamma.clamp(opts.gamma_min, opts.gamma_max);
    // last candidate known to pass the test at the current gamma
    let mut accepted: Option<(CMat, f64)> = None;

    while 2.0 * gamma <= opts.gamma_max {
        let Some(p) = candidate(2.0 * gamma) else { break };
        let fp = f_eval(&p)?;
        if f0 - fp >= sigma * 2.0 * gamma * zz {
            gamma *= 2.0;
            accepted = Some((p, fp));
        } else {
            break;
        }
    }

    if let Some((candidate, value)) = accepted {
        return Ok(ArmijoStep { gamma, candidate, value });
    }
    loop {
        if let Some(p) = candidate(gamma) {
            let fp = f_eval(&p)?;
            if f0 - fp >= sigma * gamma * zz {
                return Ok(ArmijoStep { gamma, candidate: p, value: fp });
            }
        }
        gamma *= 0.5;
        if gamma < opts.gamma_min {
            return Err(IaError::StepFloorReached { gamma_min: opts.gamma_min });
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub state: OptimizerState,
    /// Transmitters whose step size hit the floor this sweep.
    pub stalled: Vec<bool>,
}

/// One pass over all transmitters in index order.
/// `(I - V V^H) Z`. The cost depends on `V` only through `V V^H`, so this is
/// the Stiefel gradient `Z - V Z^H V` and `<Z, Z>` becomes the exact
/// first-order decrease along the retraction.
pub fn project_tangent(z: &CMat, v: &CMat) -> CMat {
    z - v * (v.adjoint() * z)
}

pub fn sweep(
    state: &OptimizerState,
    channels: &ChannelSet,
    config: &NetworkConfig,
    opts: &SdOptions,
) -> Result<SweepResult> {
    let mut next = state.clone();
    next.sweep += 1;
    let mut stalled = vec![false; config.k];
    let mut f_cur = leakage_cost(channels, &next.precoders, config)?;

    for j in 0..config.k {
        let jac = tx_gradient(channels, &next.precoders, config, j)?;
        let mut z = descent_direction(&jac, config.m[j], config.d[j])?;
        if opts.tangent_projection {
            z = project_tangent(&z, &next.precoders.v[j]);
        }
        let zz = inner_product_zz(&z, &next.precoders.v[j]);
        next.last_zz[j] = zz;
        if zz == 0.0 {
            continue;
        }

        let mut trial = next.precoders.clone();
        let f_eval = |p: &CMat| {
            trial.v[j].copy_from(p);
            leakage_cost(channels, &trial, config)
        };
        match armijo_calibrate(f_eval, f_cur, &next.precoders.v[j], &z, zz, next.gammas[j], opts) {
            Ok(step) => {
                next.precoders.v[j] = step.candidate;
                next.gammas[j] = step.gamma;
                f_cur = step.value;
            }
            Err(IaError::StepFloorReached { .. }) => {
                debug!("sweep {}: transmitter {j} found no acceptable step", next.sweep);
                stalled[j] = true;
                next.gammas[j] = opts.gamma_init;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SweepResult { state: next, stalled })
}

fn record(
    state: &OptimizerState,
    channels: &ChannelSet,
    config: &NetworkConfig,
) -> Result<TraceRecord> {
    let leakage = receiver_leakage(channels, &state.precoders, config)?;
    Ok(TraceRecord {
        sweep: state.sweep,
        f: leakage.iter().sum::<f64>().max(0.0),
        leakage,
        zz: state.last_zz.clone(),
        gammas: state.gammas.clone(),
        orthonormality_error: state.precoders.orthonormality_error(),
    })
}

/// Runs sweeps from `init` until every `<Z[j], Z[j]>` is below `opts.tol`,
/// no transmitter can make progress, or `opts.max_sweeps` is reached.
pub fn run(
    channels: &ChannelSet,
    config: &NetworkConfig,
    init: &PrecoderSet,
    opts: &SdOptions,
) -> Result<SdRun> {
    opts.validate()?;
    let mut state = OptimizerState::new(init.clone(), opts);
    let mut trace = vec![record(&state, channels, config)?];
    let mut status = ConvergenceStatus::MaxIterations;

    for _ in 0..opts.max_sweeps {
        let SweepResult { state: next, stalled } = sweep(&state, channels, config, opts)?;
        state = next;
        trace.push(record(&state, channels, config)?);

        let max_zz = state.last_zz.iter().cloned().fold(0.0, f64::max);
        if max_zz < opts.tol {
            status = ConvergenceStatus::Converged;
            break;
        }
        if state.last_zz.iter().zip(&stalled).all(|(&zz, &s)| s || zz < opts.tol) {
            status = ConvergenceStatus::Stationary;
            break;
        }
    }
    Ok(SdRun { precoders: state.precoders, trace, status })
}
