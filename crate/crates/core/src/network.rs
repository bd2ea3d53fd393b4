//! Problem dimensions, random channel and precoder generation, and
//! interference covariance assembly.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{IaError, Result};
use crate::optimizer::gram_schmidt;
use crate::seed::{stream_rng, CHANNEL_STREAM, PRECODER_STREAM};
use crate::CMat;

/// Retry budget for a rank-deficient random precoder draw.
const MAX_PRECODER_ATTEMPTS: u64 = 16;

/// Dimensions and powers of a K-user MIMO interference channel.
///
/// `m[j]` transmit antennas, `n[k]` receive antennas and `d[k]` streams per
/// pair; `power[j]` is the total linear transmit power of user `j`, split
/// evenly over its streams.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    pub k: usize,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub power: Vec<f64>,
    pub noise_var: f64,
}

impl NetworkConfig {
    pub fn new(
        k: usize,
        m: Vec<usize>,
        n: Vec<usize>,
        d: Vec<usize>,
        power: Vec<f64>,
        noise_var: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(IaError::Dimension("user count K must be at least 1".into()));
        }
        for (name, len) in [("m", m.len()), ("n", n.len()), ("d", d.len()), ("power", power.len())] {
            if len != k {
                return Err(IaError::Dimension(format!(
                    "`{name}` has {len} entries, expected K = {k}"
                )));
            }
        }
        for user in 0..k {
            if m[user] == 0 || n[user] == 0 || d[user] == 0 {
                return Err(IaError::Dimension(format!(
                    "user {user}: antenna and stream counts must be at least 1"
                )));
            }
            if d[user] > m[user].min(n[user]) {
                return Err(IaError::Dimension(format!(
                    "user {user}: d = {} exceeds min(M, N) = {}",
                    d[user],
                    m[user].min(n[user])
                )));
            }
            if !(power[user] > 0.0 && power[user].is_finite()) {
                return Err(IaError::Dimension(format!(
                    "user {user}: power must be positive and finite, got {}",
                    power[user]
                )));
            }
        }
        if !(noise_var > 0.0 && noise_var.is_finite()) {
            return Err(IaError::Dimension(format!(
                "noise variance must be positive and finite, got {noise_var}"
            )));
        }
        Ok(Self { k, m, n, d, power, noise_var })
    }

    /// Every user with `m` transmit and `n` receive antennas, `d` streams and
    /// power `power`; unit noise variance.
    pub fn symmetric(k: usize, m: usize, n: usize, d: usize, power: f64) -> Result<Self> {
        Self::new(k, vec![m; k], vec![n; k], vec![d; k], vec![power; k], 1.0)
    }

    /// Same dimensions with every user's power set to `noise_var * 10^(snr_db/10)`.
    pub fn with_snr_db(&self, snr_db: f64) -> Self {
        let p = self.noise_var * 10f64.powf(snr_db / 10.0);
        Self { power: vec![p; self.k], ..self.clone() }
    }

    /// Per-stream power `P[j] / d[j]` of transmitter `j`.
    pub fn stream_power(&self, j: usize) -> f64 {
        self.power[j] / self.d[j] as f64
    }

    pub fn total_streams(&self) -> usize {
        self.d.iter().sum()
    }
}

/// The K x K grid of channel matrices. Entry `(k, j)` is the `n[k] x m[j]`
/// channel from transmitter `j` to receiver `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSet {
    k: usize,
    h: Vec<CMat>,
}

impl ChannelSet {
    /// Builds a channel set from row-major `(k, j)` entries, checking shapes.
    pub fn from_matrices(config: &NetworkConfig, h: Vec<CMat>) -> Result<Self> {
        let k = config.k;
        if h.len() != k * k {
            return Err(IaError::Dimension(format!(
                "expected {} channel matrices, got {}",
                k * k,
                h.len()
            )));
        }
        for rx in 0..k {
            for tx in 0..k {
                let shape = h[rx * k + tx].shape();
                if shape != (config.n[rx], config.m[tx]) {
                    return Err(IaError::Dimension(format!(
                        "H[{rx}][{tx}] is {}x{}, expected {}x{}",
                        shape.0, shape.1, config.n[rx], config.m[tx]
                    )));
                }
            }
        }
        Ok(Self { k, h })
    }

    pub fn get(&self, k: usize, j: usize) -> &CMat {
        &self.h[k * self.k + j]
    }

    pub fn users(&self) -> usize {
        self.k
    }

    /// The reciprocal network: reverse channel `(j, k)` is `H[k][j]^H`.
    pub fn reciprocal(&self) -> Self {
        let k = self.k;
        let mut h = Vec::with_capacity(k * k);
        for rx in 0..k {
            for tx in 0..k {
                h.push(self.get(tx, rx).adjoint());
            }
        }
        Self { k, h }
    }
}

/// Transmit precoders; `v[j]` is `m[j] x d[j]` with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecoderSet {
    pub v: Vec<CMat>,
}

impl PrecoderSet {
    pub fn new(config: &NetworkConfig, v: Vec<CMat>) -> Result<Self> {
        if v.len() != config.k {
            return Err(IaError::Dimension(format!(
                "expected {} precoders, got {}",
                config.k,
                v.len()
            )));
        }
        for (j, vj) in v.iter().enumerate() {
            if vj.shape() != (config.m[j], config.d[j]) {
                return Err(IaError::Dimension(format!(
                    "V[{j}] is {}x{}, expected {}x{}",
                    vj.nrows(),
                    vj.ncols(),
                    config.m[j],
                    config.d[j]
                )));
            }
        }
        Ok(Self { v })
    }

    /// Largest `||V^H V - I||_F` over all transmitters.
    pub fn orthonormality_error(&self) -> f64 {
        self.v
            .iter()
            .map(|v| {
                let gram = v.adjoint() * v;
                (gram - CMat::identity(v.ncols(), v.ncols())).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Square complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMat);

impl HermitianMatrix {
    /// Wraps `q` after replacing it by `(q + q^H) / 2`.
    pub fn from_matrix(q: CMat) -> Result<Self> {
        if !q.is_square() {
            return Err(IaError::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                q.nrows(),
                q.ncols()
            )));
        }
        let herm = (&q + q.adjoint()) * Complex::new(0.5, 0.0);
        Ok(Self(herm))
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }
}

/// Matrix of i.i.d. circularly-symmetric complex Gaussian entries with unit
/// variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    })
}

/// Draws every `H[k][j]` with i.i.d. CN(0, 1) entries. Deterministic in
/// `(config dimensions, seed)`.
pub fn draw_channels(config: &NetworkConfig, seed: u64) -> ChannelSet {
    let mut rng = stream_rng(seed, CHANNEL_STREAM);
    let k = config.k;
    let mut h = Vec::with_capacity(k * k);
    for rx in 0..k {
        for tx in 0..k {
            h.push(complex_gaussian(&mut rng, config.n[rx], config.m[tx]));
        }
    }
    ChannelSet { k, h }
}

/// Orthonormalized Gaussian precoders, one per transmitter. A rank-deficient
/// draw (probability zero) is redrawn from the next stream.
pub fn random_precoders(config: &NetworkConfig, seed: u64) -> Result<PrecoderSet> {
    let mut v = Vec::with_capacity(config.k);
    for j in 0..config.k {
        let mut last_err = None;
        let mut accepted = None;
        for attempt in 0..MAX_PRECODER_ATTEMPTS {
            let stream = PRECODER_STREAM + (j as u64) * MAX_PRECODER_ATTEMPTS + attempt;
            let mut rng = stream_rng(seed, stream);
            let raw = complex_gaussian(&mut rng, config.m[j], config.d[j]);
            match gram_schmidt(&raw) {
                Ok(q) => {
                    accepted = Some(q);
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        match accepted {
            Some(q) => v.push(q),
            None => return Err(last_err.expect("at least one attempt was made")),
        }
    }
    Ok(PrecoderSet { v })
}

/// Interference covariance at receiver `k`:
/// `Q[k] = sum_{j != k} (P[j]/d[j]) H[k][j] V[j] V[j]^H H[k][j]^H`.
pub fn interference_covariance(
    channels: &ChannelSet,
    precoders: &PrecoderSet,
    config: &NetworkConfig,
    k: usize,
) -> Result<HermitianMatrix> {
    if k >= config.k {
        return Err(IaError::Index(format!("receiver {k} out of range 0..{}", config.k)));
    }
    let n = config.n[k];
    let mut q = CMat::zeros(n, n);
    for j in (0..config.k).filter(|&j| j != k) {
        let hv = channels.get(k, j) * &precoders.v[j];
        let c = Complex::new(config.stream_power(j), 0.0);
        q += (&hv * hv.adjoint()) * c;
    }
    HermitianMatrix::from_matrix(q)
}
