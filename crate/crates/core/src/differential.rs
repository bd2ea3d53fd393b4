//! Leakage cost and its first-order model.
//!
//! The cost is `f = sum_k lambda_s(Q[k])`, where `lambda_s` sums the `d[k]`
//! smallest eigenvalues of receiver `k`'s interference covariance. Its
//! differential with respect to transmitter `j` is assembled from two
//! Jacobians:
//!
//! - `DQR[kj]`, `DQI[kj]` map the real and imaginary parts of `vec(dV[j])` to
//!   `vec(dQ[k])`. With `G = H[k][j]`, `c = P[j]/d[j]`,
//!   `A = conj(G V) (x) G` and `B = (conj(G) (x) G V) T`, where `T` is the
//!   permutation with `vec(X^H) = T conj(vec(X))`:
//!   `DQR = c (A + B)`, `DQI = i c (A - B)`.
//! - `DLs[k] = sum_{i <= d} vec(u_i u_i^H)^H` maps `vec(dQ[k])` to
//!   `d lambda_s(Q[k])`, `u_i` being the ascending-order eigenvectors.
//!
//! Chaining gives the real row vectors `DPsiR[j] = sum_{k != j} DLs[k] DQR[kj]`
//! and likewise `DPsiI[j]`, so that
//! `df = DPsiR vec(dV_R) + DPsiI vec(dV_I)`.

use log::warn;
use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{IaError, Result};
use crate::network::{interference_covariance, ChannelSet, HermitianMatrix, NetworkConfig, PrecoderSet};
use crate::CMat;

const EIG_MAX_ITERS: usize = 10_000;
/// Residual bound relative to `max(1, ||Q||_F)`.
const EIG_RESIDUAL_TOL: f64 = 1e-9;
/// Relative eigengap below which the per-eigenvalue Jacobian is flagged.
const DEGENERACY_GAP: f64 = 1e-8;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns).
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl EigenSystem {
    /// Sum of the `d` smallest eigenvalues.
    pub fn smallest_sum(&self, d: usize) -> f64 {
        self.values[..d].iter().sum()
    }

    /// First `d` eigenvector columns.
    pub fn smallest_subspace(&self, d: usize) -> CMat {
        self.vectors.columns(0, d).into_owned()
    }
}

/// Real Jacobians of the cost with respect to `vec(V_R[j])` and `vec(V_I[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct TxJacobian {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TxJacobian {
    pub fn zeros(len: usize) -> Self {
        Self { re: vec![0.0; len], im: vec![0.0; len] }
    }

    /// `DPsiR . vec(dV_R) + DPsiI . vec(dV_I)`.
    pub fn directional_derivative(&self, dv: &CMat) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .zip(dv.iter())
            .map(|((r, i), z)| r * z.re + i * z.im)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.re.iter().chain(&self.im).map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Fails with [`IaError::Convergence`] when the solver does not converge or
/// the reconstruction residual `||Q U - U diag(lambda)||_F` exceeds
/// `1e-9 max(1, ||Q||_F)`.
pub fn eig_hermitian(q: &HermitianMatrix) -> Result<EigenSystem> {
    let m = q.as_matrix();
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIG_MAX_ITERS)
        .ok_or_else(|| IaError::Convergence(format!("{n}x{n} Hermitian eigensolver stalled")))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let scaled = CMat::from_fn(n, n, |r, c| vectors[(r, c)] * values[c]);
    let residual = (m * &vectors - scaled).norm();
    let bound = EIG_RESIDUAL_TOL * m.norm().max(1.0);
    if !residual.is_finite() || residual > bound {
        return Err(IaError::Convergence(format!(
            "eigen residual {residual:e} exceeds {bound:e}"
        )));
    }
    Ok(EigenSystem { values, vectors })
}

/// Per-receiver leakage `lambda_s(Q[k])`, the sum of the `d[k]` smallest
/// eigenvalues of each interference covariance.
pub fn receiver_leakage(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
) -> Result<Vec<f64>> {
    (0..config.k)
        .map(|k| {
            let q = interference_covariance(channels, precoders, config, k)?;
            Ok(eig_hermitian(&q)?.smallest_sum(config.d[k]))
        })
        .collect()
}

/// The leakage cost `f = sum_k lambda_s(Q[k])`, clamped at zero against
/// round-off in near-aligned states.
pub fn leakage_cost(channels: &ChannelSet, precoders: &PrecoderSet, config: &NetworkConfig) -> Result<f64> {
    Ok(receiver_leakage(channels, precoders, config)?.iter().sum::<f64>().max(0.0))
}

/// Commutation matrix `T` of size `md x md` with `vec(X^T) = T vec(X)` for
/// an `m x d` matrix `X`.
fn commutation(m: usize, d: usize) -> DMatrix<f64> {
    let mut t = DMatrix::zeros(m * d, m * d);
    for r in 0..m {
        for c in 0..d {
            // X[r, c] sits at r + c m in vec(X) and at c + r d in vec(X^T)
            t[(c + r * d, r + c * m)] = 1.0;
        }
    }
    t
}

/// Jacobians `(DQR, DQI)` of `vec(Q[k])` with respect to the real and
/// imaginary parts of `vec(V[j])`; both are `n[k]^2 x m[j] d[j]`.
pub fn covariance_jacobians(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
    k: usize,
    j: usize,
) -> Result<(CMat, CMat)> {
    if k == j {
        return Err(IaError::Index(format!(
            "covariance Jacobian needs an interfering pair, got k = j = {k}"
        )));
    }
    if k >= config.k || j >= config.k {
        return Err(IaError::Index(format!("pair ({k}, {j}) out of range 0..{}", config.k)));
    }
    let g = channels.get(k, j);
    let gv = g * &precoders.v[j];
    let c = Complex::new(config.stream_power(j), 0.0);

    let a = gv.map(|z| z.conj()).kronecker(g);
    let t = commutation(config.m[j], config.d[j]).map(|x| Complex::new(x, 0.0));
    let b = g.map(|z| z.conj()).kronecker(&gv) * t;

    let dqr = (&a + &b) * c;
    let dqi = (a - b) * (c * Complex::i());
    Ok((dqr, dqi))
}

/// Row vector `DLs = sum_{i < d} vec(u_i u_i^H)^H` of length `n^2`, the
/// Jacobian of the sum of the `d` smallest eigenvalues.
///
/// Logs a warning when `lambda_{d+1} - lambda_d` is below
/// `1e-8 max(1, lambda_max)`; the subspace sum stays differentiable only in
/// the generic case.
pub fn eigsum_jacobian(eig: &EigenSystem, d: usize) -> CMat {
    let n = eig.vectors.nrows();
    if d < n {
        let gap = eig.values[d] - eig.values[d - 1];
        let scale = eig.values[n - 1].abs().max(1.0);
        if gap < DEGENERACY_GAP * scale {
            warn!("degenerate eigenvalues: gap {gap:e} between lambda_{d} and lambda_{}", d + 1);
        }
    }
    let u = eig.smallest_subspace(d);
    let proj = &u * u.adjoint();
    // vec(P)^H with P Hermitian is vec(conj(P))^T
    CMat::from_iterator(1, n * n, proj.iter().map(|z| z.conj()))
}

/// Jacobians of the cost with respect to transmitter `j`'s precoder.
pub fn tx_gradient(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
    j: usize,
) -> Result<TxJacobian> {
    if j >= config.k {
        return Err(IaError::Index(format!("transmitter {j} out of range 0..{}", config.k)));
    }
    let len = config.m[j] * config.d[j];
    let mut re = CMat::zeros(1, len);
    let mut im = CMat::zeros(1, len);
    for k in (0..config.k).filter(|&k| k != j) {
        let q = interference_covariance(channels, precoders, config, k)?;
        let dls = eigsum_jacobian(&eig_hermitian(&q)?, config.d[k]);
        let (dqr, dqi) = covariance_jacobians(channels, precoders, config, k, j)?;
        re += &dls * dqr;
        im += &dls * dqi;
    }
    // imaginary parts vanish up to round-off: DLs . vec(dQ) is real for Hermitian dQ
    Ok(TxJacobian {
        re: re.iter().map(|z| z.re).collect(),
        im: im.iter().map(|z| z.re).collect(),
    })
}

/// Steepest-descent direction `vec(Z) = -(DPsiR + i DPsiI)^T`, reshaped
/// column-major to `m x d`.
pub fn descent_direction(jac: &TxJacobian, m: usize, d: usize) -> Result<CMat> {
    if jac.re.len() != m * d || jac.im.len() != m * d {
        return Err(IaError::Dimension(format!(
            "Jacobian has {} entries, expected {}",
            jac.re.len(),
            m * d
        )));
    }
    Ok(CMat::from_iterator(
        m,
        d,
        jac.re.iter().zip(&jac.im).map(|(&r, &i)| -Complex::new(r, i)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{complex_gaussian, draw_channels, random_precoders};
    use crate::seed::stream_rng;

    fn herm(m: CMat) -> HermitianMatrix {
        HermitianMatrix::from_matrix(m).unwrap()
    }

    fn diag(values: &[f64]) -> HermitianMatrix {
        let n = values.len();
        herm(CMat::from_fn(n, n, |r, c| if r == c { Complex::new(values[r], 0.0) } else { Complex::new(0.0, 0.0) }))
    }

    fn random_hermitian(seed: u64, n: usize) -> HermitianMatrix {
        let a = complex_gaussian(&mut stream_rng(seed, 9), n, n);
        herm(&a + a.adjoint())
    }

    #[test]
    fn eig_diagonal_sorted() {
        let e = eig_hermitian(&diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_zero_matrix() {
        let e = eig_hermitian(&diag(&[0.0, 0.0])).unwrap();
        assert_eq!(e.values, vec![0.0, 0.0]);
        let gram = e.vectors.adjoint() * &e.vectors;
        assert!((gram - CMat::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        for seed in 0..20 {
            let q = random_hermitian(seed, 4);
            let e = eig_hermitian(&q).unwrap();
            let lam = CMat::from_fn(4, 4, |r, c| if r == c { Complex::new(e.values[r], 0.0) } else { Complex::new(0.0, 0.0) });
            let rebuilt = &e.vectors * lam * e.vectors.adjoint();
            assert!((rebuilt - q.as_matrix()).norm() <= 1e-9 * q.as_matrix().norm());
            assert!((e.vectors.adjoint() * &e.vectors - CMat::identity(4, 4)).norm() <= 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn leakage_single_user_is_zero() {
        let cfg = NetworkConfig::symmetric(1, 2, 2, 1, 5.0).unwrap();
        let h = draw_channels(&cfg, 0);
        let v = random_precoders(&cfg, 0).unwrap();
        assert_eq!(leakage_cost(&h, &v, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn leakage_constructed_diagonal_covariances() {
        // all precoders e1, so H[k][j] V[j] is the first column of H[k][j]:
        // Q[0] = diag(5, 1), Q[1] = diag(2, 7), Q[2] = diag(0, 3)
        let cfg = NetworkConfig::symmetric(3, 2, 2, 1, 1.0).unwrap();
        let col = |a: f64, b: f64| {
            CMat::from_row_slice(2, 2, &[Complex::new(a, 0.0), Complex::new(0.0, 0.0), Complex::new(b, 0.0), Complex::new(0.0, 0.0)])
        };
        let zero = CMat::zeros(2, 2);
        let h = ChannelSet::from_matrices(
            &cfg,
            vec![
                zero.clone(), col(5f64.sqrt(), 0.0), col(0.0, 1.0),
                col(2f64.sqrt(), 0.0), zero.clone(), col(0.0, 7f64.sqrt()),
                zero.clone(), col(0.0, 3f64.sqrt()), zero,
            ],
        )
        .unwrap();
        let e1 = CMat::identity(2, 2).columns(0, 1).into_owned();
        let v = PrecoderSet::new(&cfg, vec![e1; 3]).unwrap();
        let q0 = interference_covariance(&h, &v, &cfg, 0).unwrap();
        assert!((q0.as_matrix() - diag(&[5.0, 1.0]).as_matrix()).norm() < 1e-14);
        let per_rx = receiver_leakage(&h, &v, &cfg).unwrap();
        assert!((per_rx[0] - 1.0).abs() < 1e-14 && (per_rx[1] - 2.0).abs() < 1e-14);
        assert!((leakage_cost(&h, &v, &cfg).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn commutation_transposes() {
        let x = DMatrix::from_fn(3, 2, |r, c| (r * 10 + c) as f64);
        let t = commutation(3, 2);
        let vx = DMatrix::from_column_slice(6, 1, x.as_slice());
        let vxt = DMatrix::from_column_slice(6, 1, x.transpose().as_slice());
        assert_eq!(t * vx, vxt);
    }

    #[test]
    fn covariance_jacobian_rejects_diagonal_pair() {
        let cfg = NetworkConfig::symmetric(2, 2, 2, 1, 1.0).unwrap();
        let h = draw_channels(&cfg, 0);
        let v = random_precoders(&cfg, 0).unwrap();
        assert!(matches!(covariance_jacobians(&h, &v, &cfg, 1, 1), Err(IaError::Index(_))));
    }

    #[test]
    fn covariance_jacobian_scalar_case() {
        // dQ = c |h|^2 (conj(v) dv + v conj(dv)) = 2 c |h|^2 Re(conj(v) dv)
        let cfg = NetworkConfig::new(2, vec![1, 1], vec![1, 1], vec![1, 1], vec![1.0, 1.0], 1.0).unwrap();
        let hval = Complex::new(0.7, -1.3);
        let vval = Complex::from_polar(1.0, 0.4);
        let one = CMat::from_element(1, 1, Complex::new(1.0, 0.0));
        let h = ChannelSet::from_matrices(
            &cfg,
            vec![one.clone(), CMat::from_element(1, 1, hval), one.clone(), one.clone()],
        )
        .unwrap();
        let v = PrecoderSet::new(&cfg, vec![one, CMat::from_element(1, 1, vval)]).unwrap();
        let (dqr, dqi) = covariance_jacobians(&h, &v, &cfg, 0, 1).unwrap();
        for (dr, di) in [(1.0, 0.0), (0.0, 1.0), (0.3, -2.0)] {
            let dv = Complex::new(dr, di);
            let predicted = dqr[(0, 0)] * dr + dqi[(0, 0)] * di;
            let expected = 2.0 * hval.norm_sqr() * (vval.conj() * dv).re;
            assert!((predicted - Complex::new(expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn eigsum_jacobian_selects_smallest() {
        let e = eig_hermitian(&diag(&[1.0, 5.0])).unwrap();
        let dls = eigsum_jacobian(&e, 1);
        let dq = diag(&[0.3, -0.8]);
        let deriv = (dls * CMat::from_column_slice(4, 1, dq.as_matrix().as_slice()))[(0, 0)];
        assert!((deriv.re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn eigsum_jacobian_full_sum_is_trace() {
        let q = random_hermitian(4, 3);
        let dls = eigsum_jacobian(&eig_hermitian(&q).unwrap(), 3);
        let dq = random_hermitian(5, 3);
        let deriv = (dls * CMat::from_column_slice(9, 1, dq.as_matrix().as_slice()))[(0, 0)];
        assert!((deriv.re - dq.as_matrix().trace().re).abs() < 1e-12);
    }

    #[test]
    fn eigsum_jacobian_matches_finite_differences() {
        let h = 1e-6;
        let q = random_hermitian(21, 3);
        let dls = eigsum_jacobian(&eig_hermitian(&q).unwrap(), 2);
        for trial in 0..20 {
            let dq = random_hermitian(100 + trial, 3);
            let lam = |s: f64| {
                let shifted = herm(q.as_matrix() + dq.as_matrix() * Complex::new(s, 0.0));
                eig_hermitian(&shifted).unwrap().smallest_sum(2)
            };
            let fd = (lam(h) - lam(-h)) / (2.0 * h);
            let analytic = (&dls * CMat::from_column_slice(9, 1, dq.as_matrix().as_slice()))[(0, 0)].re;
            assert!((fd - analytic).abs() <= 1e-6 * analytic.abs().max(1.0), "fd {fd} vs {analytic}");
        }
    }

    #[test]
    fn covariance_jacobian_matches_finite_differences() {
        let cfg = NetworkConfig::symmetric(3, 2, 2, 1, 1.0).unwrap();
        let h = draw_channels(&cfg, 8);
        let v = random_precoders(&cfg, 8).unwrap();
        let (dqr, dqi) = covariance_jacobians(&h, &v, &cfg, 2, 0).unwrap();
        let step = 1e-6;
        for coord in 0..20 {
            let idx = coord % 2;
            let imaginary = (coord / 2) % 2 == 1;
            let unit = if imaginary { Complex::i() } else { Complex::new(1.0, 0.0) };
            let scale = 1.0 + coord as f64 / 10.0;
            let q_at = |s: f64| {
                let mut vv = v.clone();
                vv.v[0][(idx, 0)] += unit * s * scale;
                interference_covariance(&h, &vv, &cfg, 2).unwrap().into_inner()
            };
            let fd = (q_at(step) - q_at(-step)) / Complex::new(2.0 * step, 0.0);
            let col = if imaginary { dqi.column(idx) } else { dqr.column(idx) };
            let predicted = col * Complex::new(scale, 0.0);
            let fd_vec = CMat::from_column_slice(4, 1, fd.as_slice());
            assert!((&fd_vec - &predicted).norm() <= 1e-6 * predicted.norm().max(1e-300));
        }
    }

    fn gradient_fd_error(cfg: &NetworkConfig, seed: u64) -> f64 {
        let h = draw_channels(cfg, seed);
        let v = random_precoders(cfg, seed).unwrap();
        let step = 1e-6;
        let mut worst: f64 = 0.0;
        for j in 0..cfg.k {
            let jac = tx_gradient(&h, &v, cfg, j).unwrap();
            let dv = complex_gaussian(&mut stream_rng(seed, 50 + j as u64), cfg.m[j], cfg.d[j]);
            let f_at = |s: f64| {
                let mut vv = v.clone();
                vv.v[j] += &dv * Complex::new(s, 0.0);
                leakage_cost(&h, &vv, cfg).unwrap()
            };
            let fd = (f_at(step) - f_at(-step)) / (2.0 * step);
            let analytic = jac.directional_derivative(&dv);
            worst = worst.max((fd - analytic).abs() / analytic.abs().max(1e-8));
        }
        worst
    }

    #[test]
    fn tx_gradient_matches_finite_differences() {
        let square = NetworkConfig::symmetric(3, 2, 2, 1, 1.0).unwrap();
        let mixed = NetworkConfig::new(3, vec![3, 4, 3], vec![3, 3, 4], vec![1, 2, 1], vec![1.0, 2.0, 0.5], 1.0)
            .unwrap();
        for seed in 0..10 {
            assert!(gradient_fd_error(&square, seed) <= 1e-6);
            assert!(gradient_fd_error(&mixed, seed) <= 1e-6);
        }
    }

    #[test]
    fn descent_direction_definition() {
        let jac = TxJacobian { re: vec![1.0, 0.0], im: vec![0.0, 2.0] };
        let z = descent_direction(&jac, 2, 1).unwrap();
        assert_eq!(z[(0, 0)], Complex::new(-1.0, 0.0));
        assert_eq!(z[(1, 0)], Complex::new(0.0, -2.0));
        let zero = descent_direction(&TxJacobian::zeros(4), 2, 2).unwrap();
        assert_eq!(zero, CMat::zeros(2, 2));
        assert!(descent_direction(&jac, 3, 1).is_err());
    }

    #[test]
    fn single_user_gradient_is_zero() {
        let cfg = NetworkConfig::symmetric(1, 3, 2, 1, 1.0).unwrap();
        let h = draw_channels(&cfg, 1);
        let v = random_precoders(&cfg, 1).unwrap();
        assert_eq!(tx_gradient(&h, &v, &cfg, 0).unwrap(), TxJacobian::zeros(3));
    }

    #[test]
    fn power_scaling_scales_cost_and_jacobian() {
        let cfg = NetworkConfig::new(3, vec![3; 3], vec![3; 3], vec![1, 2, 1], vec![1.0, 2.0, 0.5], 1.0).unwrap();
        let scaled = NetworkConfig { power: cfg.power.iter().map(|p| p * 7.0).collect(), ..cfg.clone() };
        let h = draw_channels(&cfg, 44);
        let v = random_precoders(&cfg, 44).unwrap();
        let f = leakage_cost(&h, &v, &cfg).unwrap();
        let fs = leakage_cost(&h, &v, &scaled).unwrap();
        assert!((fs - 7.0 * f).abs() <= 1e-12 * fs);
        for j in 0..3 {
            let g = tx_gradient(&h, &v, &cfg, j).unwrap();
            let gs = tx_gradient(&h, &v, &scaled, j).unwrap();
            for (a, b) in g.re.iter().chain(&g.im).zip(gs.re.iter().chain(&gs.im)) {
                assert!((7.0 * a - b).abs() <= 1e-11 * gs.norm());
            }
        }
    }

    mod props {
        use super::*;
        use crate::network::interference_covariance;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn covariance_is_hermitian_psd_low_rank(seed in any::<u64>(), k in 2usize..5, d in 1usize..3) {
                let cfg = NetworkConfig::symmetric(k, 3, 4, d, 2.0).unwrap();
                let h = draw_channels(&cfg, seed);
                let v = random_precoders(&cfg, seed).unwrap();
                for rx in 0..k {
                    let q = interference_covariance(&h, &v, &cfg, rx).unwrap();
                    let m = q.as_matrix();
                    prop_assert!((m - m.adjoint()).norm() <= 1e-12 * m.norm());
                    let e = eig_hermitian(&q).unwrap();
                    let scale = m.norm();
                    prop_assert!(e.values[0] >= -1e-10 * scale);
                    let rank = e.values.iter().filter(|&&l| l > 1e-9 * scale).count();
                    prop_assert!(rank <= (k - 1) * d);
                }
            }

            #[test]
            fn leakage_is_nonnegative_and_scales_with_power(seed in any::<u64>(), c in 0.1f64..100.0) {
                let cfg = NetworkConfig::symmetric(3, 2, 2, 1, 1.0).unwrap();
                let scaled = NetworkConfig::symmetric(3, 2, 2, 1, c).unwrap();
                let h = draw_channels(&cfg, seed);
                let v = random_precoders(&cfg, seed).unwrap();
                let f = leakage_cost(&h, &v, &cfg).unwrap();
                prop_assert!(f >= 0.0);
                prop_assert!((leakage_cost(&h, &v, &scaled).unwrap() - c * f).abs() <= 1e-10 * c * f.max(1.0));
            }

            #[test]
            fn gradient_matches_finite_differences(seed in any::<u64>()) {
                let cfg = NetworkConfig::symmetric(3, 2, 2, 1, 1.0).unwrap();
                prop_assert!(gradient_fd_error(&cfg, seed) <= 1e-5);
            }
        }
    }
}
