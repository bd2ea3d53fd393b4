//! Distributed interference alignment over a reciprocal network.
//!
//! Alternates between the forward network, where each receiver picks the `d`
//! least-interfered eigenvectors of its interference covariance, and the
//! reverse network, where those filters act as precoders over the reciprocal
//! channels `H[k][j]^H` and each transmitter picks the `d` least-interfered
//! eigenvectors of its reverse interference covariance. Reverse powers equal
//! forward powers.

use crate::differential::{eig_hermitian, receiver_leakage};
use crate::error::{IaError, Result};
use crate::network::{interference_covariance, ChannelSet, HermitianMatrix, NetworkConfig, PrecoderSet};
use crate::CMat;

/// Receive interference-suppression filters; `u[k]` is `n[k] x d[k]` with
/// orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ReceiverFilters {
    pub u: Vec<CMat>,
}

impl ReceiverFilters {
    pub fn orthonormality_error(&self) -> f64 {
        PrecoderSet { v: self.u.clone() }.orthonormality_error()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiaStatus {
    Converged,
    MaxIterations,
}

impl DiaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DiaStatus::Converged => "converged",
            DiaStatus::MaxIterations => "max_iterations",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiaRun {
    pub precoders: PrecoderSet,
    pub filters: ReceiverFilters,
    /// Forward leakage before the first iteration and after each iteration.
    pub trace: Vec<f64>,
    /// Per-receiver leakage matching each entry of `trace`.
    pub receiver_trace: Vec<Vec<f64>>,
    pub status: DiaStatus,
}

impl DiaRun {
    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }

    pub fn final_cost(&self) -> f64 {
        self.trace[self.trace.len() - 1]
    }
}

/// Orthonormal basis of the eigenvectors belonging to the `d` smallest
/// eigenvalues of `q`.
pub fn min_eig_subspace(q: &HermitianMatrix, d: usize) -> Result<CMat> {
    if d == 0 || d > q.dim() {
        return Err(IaError::Dimension(format!(
            "subspace dimension {d} out of range 1..={}",
            q.dim()
        )));
    }
    Ok(eig_hermitian(q)?.smallest_subspace(d))
}

/// Forward filters: each receiver's least-interfered subspace.
pub fn forward_filters(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
) -> Result<ReceiverFilters> {
    let u = (0..config.k)
        .map(|k| {
            let q = interference_covariance(channels, precoders, config, k)?;
            min_eig_subspace(&q, config.d[k])
        })
        .collect::<Result<_>>()?;
    Ok(ReceiverFilters { u })
}

/// The reciprocal network's configuration: antenna roles swap, streams and
/// powers stay with the user.
fn reverse_config(config: &NetworkConfig) -> NetworkConfig {
    NetworkConfig { m: config.n.clone(), n: config.m.clone(), ..config.clone() }
}

/// Weighted leakage `sum_k tr(U[k]^H Q[k] U[k])` for explicit receive filters.
pub fn weighted_leakage(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    filters: &ReceiverFilters,
    config: &NetworkConfig,
) -> Result<f64> {
    let mut total = 0.0;
    for k in 0..config.k {
        let q = interference_covariance(channels, precoders, config, k)?;
        let u = &filters.u[k];
        total += (u.adjoint() * q.as_matrix() * u).trace().re;
    }
    Ok(total)
}

/// Runs the forward/reverse alternation from `init` until the forward
/// leakage drops below `tol` or `max_iters` iterations have run.
pub fn distributed_ia_run(
    channels: &ChannelSet,
    config: &NetworkConfig,
    init: &PrecoderSet,
    max_iters: usize,
    tol: f64,
) -> Result<DiaRun> {
    let reverse = channels.reciprocal();
    let rev_config = reverse_config(config);
    let mut precoders = init.clone();
    let mut filters = forward_filters(channels, &precoders, config)?;
    let leak = receiver_leakage(channels, &precoders, config)?;
    let mut trace = vec![total(&leak)];
    let mut receiver_trace = vec![leak];
    let mut status = DiaStatus::MaxIterations;

    if trace[0] < tol {
        return Ok(DiaRun { precoders, filters, trace, receiver_trace, status: DiaStatus::Converged });
    }
    for _ in 0..max_iters {
        let rev_precoders = PrecoderSet { v: filters.u.clone() };
        let v = (0..config.k)
            .map(|j| {
                let q = interference_covariance(&reverse, &rev_precoders, &rev_config, j)?;
                min_eig_subspace(&q, config.d[j])
            })
            .collect::<Result<_>>()?;
        precoders = PrecoderSet { v };
        filters = forward_filters(channels, &precoders, config)?;
        let leak = receiver_leakage(channels, &precoders, config)?;
        let f = total(&leak);
        trace.push(f);
        receiver_trace.push(leak);
        if f < tol {
            status = DiaStatus::Converged;
            break;
        }
    }
    Ok(DiaRun { precoders, filters, trace, receiver_trace, status })
}

fn total(leakage: &[f64]) -> f64 {
    leakage.iter().sum::<f64>().max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{complex_gaussian, draw_channels, random_precoders};
    use crate::seed::stream_rng;
    use nalgebra::Complex;

    fn diag(values: &[f64]) -> HermitianMatrix {
        let n = values.len();
        HermitianMatrix::from_matrix(CMat::from_fn(n, n, |r, c| {
            Complex::new(if r == c { values[r] } else { 0.0 }, 0.0)
        }))
        .unwrap()
    }

    #[test]
    fn min_eig_subspace_diagonal() {
        let u = min_eig_subspace(&diag(&[5.0, 1.0, 3.0]), 1).unwrap();
        assert!((u[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(u[(0, 0)].norm() < 1e-14 && u[(2, 0)].norm() < 1e-14);
    }

    #[test]
    fn min_eig_subspace_zero_matrix() {
        let q = diag(&[0.0, 0.0]);
        let u = min_eig_subspace(&q, 1).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-14);
        assert!((u.adjoint() * q.as_matrix() * &u).norm() == 0.0);
    }

    #[test]
    fn min_eig_subspace_trace_equals_eigen_sum() {
        for seed in 0..10 {
            let a = complex_gaussian(&mut stream_rng(seed, 7), 4, 4);
            let q = HermitianMatrix::from_matrix(&a * a.adjoint()).unwrap();
            let u = min_eig_subspace(&q, 2).unwrap();
            let tr = (u.adjoint() * q.as_matrix() * &u).trace().re;
            let e = eig_hermitian(&q).unwrap();
            assert!((tr - e.smallest_sum(2)).abs() <= 1e-10 * q.as_matrix().norm());
        }
        assert!(min_eig_subspace(&diag(&[1.0]), 2).is_err());
    }

    #[test]
    fn reverse_config_swaps_antennas() {
        let cfg = NetworkConfig::new(2, vec![3, 4], vec![2, 2], vec![1, 2], vec![1.0, 2.0], 1.0).unwrap();
        let r = reverse_config(&cfg);
        assert_eq!(r.m, vec![2, 2]);
        assert_eq!(r.n, vec![3, 4]);
        assert_eq!(r.power, cfg.power);
    }

    #[test]
    fn leakage_trace_non_increasing() {
        let cfg = NetworkConfig::symmetric(3, 2, 2, 1, 10.0).unwrap();
        for seed in 0..10 {
            let h = draw_channels(&cfg, seed);
            let v = random_precoders(&cfg, seed).unwrap();
            let out = distributed_ia_run(&h, &cfg, &v, 200, 1e-10).unwrap();
            for w in out.trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12 * out.trace[0], "{} -> {}", w[0], w[1]);
            }
            assert!(out.precoders.orthonormality_error() <= 1e-10);
            assert!(out.filters.orthonormality_error() <= 1e-10);
        }
    }

    #[test]
    fn aligned_start_is_a_fixed_point() {
        let cfg = NetworkConfig::symmetric(1, 2, 2, 1, 1.0).unwrap();
        let h = draw_channels(&cfg, 1);
        let v = random_precoders(&cfg, 1).unwrap();
        let out = distributed_ia_run(&h, &cfg, &v, 100, 1e-10).unwrap();
        assert_eq!(out.status, DiaStatus::Converged);
        assert_eq!(out.trace, vec![0.0]);
        assert_eq!(out.precoders, v);
    }

    #[test]
    fn weighted_leakage_with_optimal_filters_is_the_cost() {
        let cfg = NetworkConfig::new(3, vec![3, 2, 4], vec![3, 3, 4], vec![1, 1, 2], vec![1.0, 3.0, 2.0], 1.0).unwrap();
        for seed in 0..10 {
            let h = draw_channels(&cfg, seed);
            let v = random_precoders(&cfg, seed).unwrap();
            let u = forward_filters(&h, &v, &cfg).unwrap();
            let wli = weighted_leakage(&h, &v, &u, &cfg).unwrap();
            let f = crate::differential::leakage_cost(&h, &v, &cfg).unwrap();
            assert!((wli - f).abs() <= 1e-10 * f);
        }
    }

    #[test]
    fn three_user_alignment_converges() {
        let cfg = NetworkConfig::symmetric(3, 2, 2, 1, 10.0).unwrap();
        let converged = (0..10)
            .filter(|&seed| {
                let h = draw_channels(&cfg, seed);
                let v = random_precoders(&cfg, seed).unwrap();
                let out = distributed_ia_run(&h, &cfg, &v, 5000, 1e-8).unwrap();
                out.status == DiaStatus::Converged
            })
            .count();
        assert!(converged >= 9);
    }
}
