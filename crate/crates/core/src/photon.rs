//! Retarded propagator of the cavity displacement field.
//!
//! The mode is a damped oscillator in scaled quadratures,
//!
//! ```text
//! dq/dt = omega_c p
//! dp/dt = -omega_c q - 2 kappa p - F_ext - source
//! ```
//!
//! so that `q` is the convolution of the total force with
//! `D0(s) = -(omega_c / w) exp(-kappa s) sin(w s)`, `w = sqrt(omega_c^2 - kappa^2)`.
//! At `kappa = 0` this is the bare `-sin(omega_c s)`. The field amplitude decays
//! at rate `kappa`, which gives the empty-cavity line a half-width of `kappa`.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::model::CavityMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    /// Explicit convolution with the retarded propagator.
    Memory,
    /// Integrate the oscillator alongside the molecule.
    Auxiliary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonKernel {
    omega_c: f64,
    kappa: f64,
    form: KernelForm,
}

impl PhotonKernel {
    /// Overdamped cavities (`kappa >= omega_c`) are rejected.
    pub fn new(omega_c: f64, kappa: f64, form: KernelForm) -> Result<Self> {
        let cav = CavityMode::new(omega_c, kappa)?;
        Self::from_cavity(&cav, form)
    }

    pub fn from_cavity(cav: &CavityMode, form: KernelForm) -> Result<Self> {
        if cav.kappa >= cav.omega_c {
            return Err(Error::param(
                "kappa",
                format!(
                    "cavity must be underdamped (kappa = {} >= omega_c = {})",
                    cav.kappa, cav.omega_c
                ),
            ));
        }
        Ok(Self {
            omega_c: cav.omega_c,
            kappa: cav.kappa,
            form,
        })
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn form(&self) -> KernelForm {
        self.form
    }

    /// Oscillation frequency of the damped mode.
    pub fn damped_frequency(&self) -> f64 {
        (self.omega_c * self.omega_c - self.kappa * self.kappa).sqrt()
    }

    /// `D0(s)` for `s >= 0`.
    pub fn d0_retarded(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::param("s", "retarded propagator needs s >= 0"));
        }
        Ok(self.d0_unchecked(s))
    }

    pub(crate) fn d0_unchecked(&self, s: f64) -> f64 {
        if self.kappa == 0.0 {
            return -(self.omega_c * s).sin();
        }
        let w = self.damped_frequency();
        -(self.omega_c / w) * (-self.kappa * s).exp() * (w * s).sin()
    }

    /// `dD0/ds`
    pub(crate) fn d0_slope(&self, s: f64) -> f64 {
        if self.kappa == 0.0 {
            return -self.omega_c * (self.omega_c * s).cos();
        }
        let w = self.damped_frequency();
        let (sn, cs) = (w * s).sin_cos();
        -(self.omega_c / w) * (-self.kappa * s).exp() * (w * cs - self.kappa * sn)
    }

    /// Generator of the free quadrature flow, `d(q, p)/dt = A (q, p) + force`.
    pub(crate) fn generator(&self) -> Matrix2<f64> {
        Matrix2::new(0.0, self.omega_c, -self.omega_c, -2.0 * self.kappa)
    }
}

/// Closed-form `exp(A u)` for a real 2x2 generator with complex eigenvalues
/// `mu +- i nu`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OscillatorFlow {
    generator: Matrix2<f64>,
    mu: f64,
    nu: f64,
}

impl OscillatorFlow {
    pub(crate) fn new(generator: Matrix2<f64>) -> Result<Self> {
        let mu = 0.5 * generator.trace();
        let disc = generator.determinant() - mu * mu;
        if !(disc > 0.0) {
            return Err(Error::Numerical(
                "oscillator flow requires complex eigenvalues".into(),
            ));
        }
        Ok(Self {
            generator,
            mu,
            nu: disc.sqrt(),
        })
    }

    pub(crate) fn generator(&self) -> &Matrix2<f64> {
        &self.generator
    }

    pub(crate) fn at(&self, u: f64) -> Matrix2<f64> {
        let (s, c) = (self.nu * u).sin_cos();
        let shifted = self.generator - Matrix2::identity() * self.mu;
        (Matrix2::identity() * c + shifted * (s / self.nu)) * (self.mu * u).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OscillatorState {
    pub q: f64,
    pub p: f64,
}

impl OscillatorState {
    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn amplitude_squared(&self) -> f64 {
        self.q * self.q + self.p * self.p
    }
}

/// One classical Runge-Kutta step of the auxiliary oscillator with the source
/// and external force held constant over the step.
pub fn step_auxiliary_oscillator(
    state: OscillatorState,
    source: f64,
    f_ext: f64,
    kernel: &PhotonKernel,
    dt: f64,
) -> OscillatorState {
    let force = Vector2::new(0.0, -(source + f_ext));
    let a = kernel.generator();
    let y = Vector2::new(state.q, state.p);
    let rate = |y: &Vector2<f64>| a * y + force;
    let k1 = rate(&y);
    let k2 = rate(&(y + k1 * (0.5 * dt)));
    let k3 = rate(&(y + k2 * (0.5 * dt)));
    let k4 = rate(&(y + k3 * dt));
    let next = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    OscillatorState::new(next[0], next[1])
}
