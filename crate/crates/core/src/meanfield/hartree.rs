use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::photon::PhotonKernel;

/// Uniformly sampled `tr(lambda rho(t_j))`, `t_j = t0 + j dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationHistory {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<f64>,
    /// Time derivatives at the same points. When present the endpoint
    /// correction lifts the rule from second to fourth order.
    pub slopes: Option<Vec<f64>>,
}

impl PolarizationHistory {
    pub fn new(t0: f64, dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", "sampling step must be > 0"));
        }
        Ok(Self {
            t0,
            dt,
            samples,
            slopes: None,
        })
    }

    pub fn with_slopes(mut self, slopes: Vec<f64>) -> Result<Self> {
        if slopes.len() != self.samples.len() {
            return Err(Error::param("slopes", "one slope per sample is required"));
        }
        self.slopes = Some(slopes);
        Ok(self)
    }
}

/// Field-induced molecular operator for a cavity that starts at rest,
/// `v(t) = 2 lambda int_{t0}^t D0(t - t') tr(lambda rho(t')) dt'`, which is
/// `sqrt(2) lambda q(t)` of the oscillator picture.
pub fn hartree_potential(
    history: &PolarizationHistory,
    kernel: &PhotonKernel,
    coupling: &CMatrix,
    t: f64,
) -> Result<CMatrix> {
    let h = history.dt;
    let x = (t - history.t0) / h;
    if !(x >= -1e-9) {
        return Err(Error::param("t", "time precedes the start of the history"));
    }
    let n = x.round();
    if (x - n).abs() > 1e-9 * x.abs().max(1.0) {
        return Err(Error::param("t", "time must lie on the sampling grid"));
    }
    let n = n as usize;
    if history.samples.len() < n + 1 {
        return Err(Error::IncompleteHistory {
            needed: n + 1,
            available: history.samples.len(),
            time: t,
        });
    }
    let s = &history.samples;
    let mut integral = 0.0;
    if n > 0 {
        integral = 0.5 * (kernel.d0_unchecked(n as f64 * h) * s[0] + kernel.d0_unchecked(0.0) * s[n]);
        for (j, sj) in s.iter().enumerate().take(n).skip(1) {
            integral += kernel.d0_unchecked((n - j) as f64 * h) * sj;
        }
        integral *= h;
        if let Some(ds) = &history.slopes {
            // g(t') = D0(t - t') s(t'),  g' = -D0'(t - t') s + D0(t - t') s'
            let span = n as f64 * h;
            let g_end = -kernel.d0_slope(0.0) * s[n];
            let g_start = -kernel.d0_slope(span) * s[0] + kernel.d0_unchecked(span) * ds[0];
            integral -= h * h / 12.0 * (g_end - g_start);
        }
    }
    Ok(coupling * C64::new(2.0 * integral, 0.0))
}
