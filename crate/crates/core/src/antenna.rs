//! Uniform planar array responses and beamforming gain.
//!
//! Axis convention: element `(r, c)` of a `rows x cols` array sits at row-major
//! index `r * cols + c` and carries the phase
//! `-2π Δ (r sin(el) + c cos(el) sin(az))`, so rows resolve elevation and
//! columns resolve the horizontal projection. Azimuth `0`, elevation `0` is
//! broadside.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::channel::ClusterSet;

/// Complex channel matrix, `n_rx x n_tx`.
pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AntennaError {
    #[error("channel is {rows}x{cols} but beams are n_rx = {n_rx}, n_tx = {n_tx}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        n_rx: usize,
        n_tx: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpaGeometry {
    pub rows: usize,
    pub cols: usize,
    /// Element spacing in wavelengths.
    pub spacing: f64,
}

impl UpaGeometry {
    /// Near-square factorization of a power-of-two element count:
    /// `rows = 2^floor(log2(n) / 2)`, `cols = n / rows`.
    pub fn for_elements(n: usize, spacing: f64) -> Option<Self> {
        if n == 0 || !n.is_power_of_two() {
            return None;
        }
        let rows = 1usize << (n.trailing_zeros() / 2);
        Some(UpaGeometry {
            rows,
            cols: n / rows,
            spacing,
        })
    }

    pub fn elements(&self) -> usize {
        self.rows * self.cols
    }
}

/// Unit-norm beamforming weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector(pub DVector<Complex64>);

impl BeamVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Element-wise conjugate, used for receive beams since the gain applies a
    /// plain transpose to the receive weights.
    pub fn conj(&self) -> Self {
        BeamVector(self.0.map(|z| z.conj()))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }
}

/// Array response toward `(azimuth, elevation)`, normalized by `1/sqrt(n)`.
pub fn steering_vector(geometry: &UpaGeometry, azimuth: f64, elevation: f64) -> BeamVector {
    let n = geometry.elements();
    let scale = 1.0 / (n as f64).sqrt();
    let vertical = elevation.sin();
    let horizontal = elevation.cos() * azimuth.sin();
    let k = -2.0 * PI * geometry.spacing;
    let coeffs = DVector::from_fn(n, |idx, _| {
        let r = (idx / geometry.cols) as f64;
        let c = (idx % geometry.cols) as f64;
        Complex64::from_polar(scale, k * (r * vertical + c * horizontal))
    });
    BeamVector(coeffs)
}

/// `|w_rx^T H w_tx|^2`.
pub fn beamforming_gain(
    h: &CMatrix,
    w_tx: &BeamVector,
    w_rx: &BeamVector,
) -> Result<f64, AntennaError> {
    if h.nrows() != w_rx.len() || h.ncols() != w_tx.len() {
        return Err(AntennaError::DimensionMismatch {
            rows: h.nrows(),
            cols: h.ncols(),
            n_rx: w_rx.len(),
            n_tx: w_tx.len(),
        });
    }
    let projected = h * &w_tx.0;
    Ok(w_rx.0.dot(&projected).norm_sqr())
}

/// Upper bound on the gain of a perfectly aligned link, `10 log10(n_tx n_rx)`.
pub fn max_aligned_gain_db(n_tx: usize, n_rx: usize) -> f64 {
    10.0 * ((n_tx * n_rx) as f64).log10()
}

/// Transmit and (conjugated) receive beams pointed along the strongest
/// sub-path. Ties go to the lowest `(cluster, sub-path)` index.
pub fn align_to_strongest_path(
    clusters: &ClusterSet,
    tx: &UpaGeometry,
    rx: &UpaGeometry,
) -> (BeamVector, BeamVector) {
    let path = clusters
        .strongest_path()
        .expect("alignment needs at least one sub-path");
    let w_tx = steering_vector(tx, path.aod_az, path.aod_el);
    let w_rx = steering_vector(rx, path.aoa_az, path.aoa_el).conj();
    (w_tx, w_rx)
}
