//! Transmitter-only interference alignment for the K-user MIMO interference
//! channel.
//!
//! Each transmitter runs steepest descent on the total interference power
//! left in the receivers' least-interfered subspaces (the sum of the `d`
//! smallest eigenvalues of every receiver's interference covariance). The
//! receivers take no part in the optimization: they project onto the
//! eigenvectors of their `d` smallest interference eigenvalues.
//!
//! Modules, bottom-up:
//!
//! - [`network`]: dimensions, seeded channel and precoder draws, interference
//!   covariances.
//! - [`differential`]: cost function, Hermitian eigensolver and the Jacobian
//!   chain that yields each transmitter's descent direction.
//! - [`optimizer`]: per-transmitter steepest descent with Armijo step
//!   calibration and Gram-Schmidt retraction.
//! - [`baseline`]: the reciprocity-based distributed alignment algorithm used
//!   for comparison.
//! - [`metrics`]: alignment angles, sum rates and Monte Carlo averaging.
//! - [`harness`]: experiment configs, CSV output and the `run`/`sweep`/`compare`
//!   commands behind the `onesided-ia` binary.
//!
//! Indices are zero-based throughout: receiver `k` and transmitter `j` range
//! over `0..K`. `vec(.)` is column-major everywhere.

pub mod baseline;
pub mod differential;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod network;
pub mod optimizer;
pub mod seed;

pub use nalgebra::Complex;

pub use error::{IaError, Result};
pub use network::{ChannelSet, HermitianMatrix, NetworkConfig, PrecoderSet};

/// Dense complex matrix used for channels, precoders and covariances.
pub type CMat = nalgebra::DMatrix<Complex<f64>>;
