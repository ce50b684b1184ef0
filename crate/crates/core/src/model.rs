//! Molecule, cavity, ensemble and drive descriptions.
//!
//! Units are fixed by the caller: every energy and frequency shares one unit,
//! times are measured in its inverse and `hbar = 1`. The molecular levels are
//! given in their eigenbasis; nothing here diagonalizes.
//!
//! The coupling matrix `lambda` is the collective light-matter coupling in the
//! photon-amplitude normalization: one molecule contributes
//! `sum_ab lambda_ab |a><b| (a + a^dag) / sqrt(N)`. For a two-level molecule
//! `lambda_eg` is therefore exactly the Tavis-Cummings coupling.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ensure_hermitian, real_diagonal, CMatrix, HERMITIAN_TOL};

/// One molecule in its eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularModel {
    energies: Vec<f64>,
    coupling: CMatrix,
    dipole: CMatrix,
}

impl MolecularModel {
    pub fn new(energies: Vec<f64>, coupling: CMatrix, dipole: CMatrix) -> Result<Self> {
        let m = energies.len();
        if m < 2 {
            return Err(Error::param("energies", "at least two levels are required"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::param("energies", "energies must be finite"));
        }
        if let Some(k) = energies.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::param(
                "energies",
                format!("energies must be sorted non-decreasing (index {})", k + 1),
            ));
        }
        for (name, mat) in [("coupling", &coupling), ("dipole", &dipole)] {
            if mat.nrows() != m || mat.ncols() != m {
                return Err(Error::param(
                    name,
                    format!("expected {m}x{m}, got {}x{}", mat.nrows(), mat.ncols()),
                ));
            }
            ensure_hermitian(name, mat, HERMITIAN_TOL)?;
        }
        Ok(Self {
            energies,
            coupling,
            dipole,
        })
    }

    /// Ground state at zero, excited state at `omega0`, real off-diagonal
    /// coupling `lam` and dipole weight `mu`.
    pub fn two_level(omega0: f64, lam: f64, mu: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::param("omega0", "transition frequency must be > 0"));
        }
        let offdiag = |v: f64| {
            CMatrix::from_row_slice(
                2,
                2,
                &[C64::new(0.0, 0.0), C64::new(v, 0.0), C64::new(v, 0.0), C64::new(0.0, 0.0)],
            )
        };
        Self::new(vec![0.0, omega0], offdiag(lam), offdiag(mu))
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn coupling(&self) -> &CMatrix {
        &self.coupling
    }

    pub fn dipole(&self) -> &CMatrix {
        &self.dipole
    }

    pub fn bare_energy_matrix(&self) -> CMatrix {
        real_diagonal(&self.energies)
    }

    /// Same molecule with the light-matter coupling switched off.
    pub fn decoupled(&self) -> Self {
        let m = self.levels();
        Self {
            energies: self.energies.clone(),
            coupling: CMatrix::zeros(m, m),
            dipole: self.dipole.clone(),
        }
    }

    /// Transition energy `E_i - E_0`.
    pub fn transition_energy(&self, i: usize) -> f64 {
        self.energies[i] - self.energies[0]
    }

    /// Lowering part of the coupling: entries `lambda_ab` with `E_a < E_b`.
    /// The raising part is its adjoint; degenerate and diagonal entries belong
    /// to neither.
    pub fn lowering_coupling(&self) -> CMatrix {
        let m = self.levels();
        CMatrix::from_fn(m, m, |a, b| {
            if self.energies[a] < self.energies[b] {
                self.coupling[(a, b)]
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

/// Single cavity mode with Markovian leakage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityMode {
    pub omega_c: f64,
    pub kappa: f64,
}

impl CavityMode {
    pub fn new(omega_c: f64, kappa: f64) -> Result<Self> {
        if !(omega_c > 0.0) || !omega_c.is_finite() {
            return Err(Error::param("omega_c", "cavity frequency must be > 0"));
        }
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::param("kappa", "decay rate must be >= 0"));
        }
        Ok(Self { omega_c, kappa })
    }

    pub fn lossless(omega_c: f64) -> Result<Self> {
        Self::new(omega_c, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DisorderKind {
    None,
    /// Normal distribution of transition-frequency offsets with width `sigma`.
    Gaussian { sigma: f64 },
    /// Discrete distribution of absolute transition frequencies of the lowest
    /// transition. Weights sum to one.
    Samples { frequencies: Vec<f64>, weights: Vec<f64> },
}

/// Static energetic disorder plus the Lorentzian regulator used by the
/// disorder-averaged polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSpec {
    kind: DisorderKind,
    gamma: f64,
}

impl DisorderSpec {
    pub fn none(gamma: f64) -> Result<Self> {
        Self::new(DisorderKind::None, gamma)
    }

    pub fn gaussian(sigma: f64, gamma: f64) -> Result<Self> {
        Self::new(DisorderKind::Gaussian { sigma }, gamma)
    }

    /// Equal-weight samples.
    pub fn samples(frequencies: Vec<f64>, gamma: f64) -> Result<Self> {
        let n = frequencies.len().max(1);
        let weights = vec![1.0 / n as f64; frequencies.len()];
        Self::new(DisorderKind::Samples { frequencies, weights }, gamma)
    }

    pub fn new(kind: DisorderKind, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::param("gamma", "broadening must be > 0"));
        }
        match &kind {
            DisorderKind::None => {}
            DisorderKind::Gaussian { sigma } => {
                if !(*sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::param("sigma", "gaussian width must be > 0"));
                }
            }
            DisorderKind::Samples { frequencies, weights } => {
                if frequencies.is_empty() {
                    return Err(Error::param("frequencies", "at least one sample is required"));
                }
                if weights.len() != frequencies.len() {
                    return Err(Error::param(
                        "weights",
                        format!(
                            "{} weights for {} frequencies",
                            weights.len(),
                            frequencies.len()
                        ),
                    ));
                }
                if weights.iter().any(|w| !(*w >= 0.0)) {
                    return Err(Error::param("weights", "weights must be >= 0"));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-10 {
                    return Err(Error::param(
                        "weights",
                        format!("distribution is not normalized (sum = {total})"),
                    ));
                }
            }
        }
        Ok(Self { kind, gamma })
    }

    pub fn kind(&self) -> &DisorderKind {
        &self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub n_molecules: usize,
    pub disorder: DisorderSpec,
}

impl EnsembleSpec {
    pub fn new(n_molecules: usize, disorder: DisorderSpec) -> Result<Self> {
        if n_molecules == 0 {
            return Err(Error::param("n_molecules", "ensemble must hold at least one molecule"));
        }
        Ok(Self {
            n_molecules,
            disorder,
        })
    }
}

/// Gaussian laser pulse `E(t) = e0 cos(omega t) exp(-(t - t_center)^2 / (2 tau^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivePulse {
    pub e0: f64,
    pub omega: f64,
    pub t_center: f64,
    pub tau: f64,
}

impl DrivePulse {
    pub fn new(e0: f64, omega: f64, t_center: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::param("tau", "pulse duration must be > 0"));
        }
        for (name, v) in [("e0", e0), ("omega", omega), ("t_center", t_center)] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        Ok(Self {
            e0,
            omega,
            t_center,
            tau,
        })
    }

    /// A pulse with zero amplitude.
    pub fn off() -> Self {
        Self {
            e0: 0.0,
            omega: 0.0,
            t_center: 0.0,
            tau: 1.0,
        }
    }

    pub fn is_off(&self) -> bool {
        self.e0 == 0.0
    }

    pub fn field(&self, t: f64) -> f64 {
        pulse_field(self, t)
    }

    /// `dE/dt`
    pub fn field_derivative(&self, t: f64) -> f64 {
        if self.is_off() {
            return 0.0;
        }
        let u = t - self.t_center;
        let env = (-u * u / (2.0 * self.tau * self.tau)).exp();
        let (s, c) = (self.omega * t).sin_cos();
        self.e0 * env * (-self.omega * s - c * u / (self.tau * self.tau))
    }
}

pub fn pulse_field(p: &DrivePulse, t: f64) -> f64 {
    if p.is_off() {
        return 0.0;
    }
    let u = t - p.t_center;
    p.e0 * (p.omega * t).cos() * (-u * u / (2.0 * p.tau * p.tau)).exp()
}

/// `h(t) = diag(E) - E(t) mu`
pub fn bare_hamiltonian(m: &MolecularModel, p: &DrivePulse, t: f64) -> CMatrix {
    let mut h = m.bare_energy_matrix();
    let e = pulse_field(p, t);
    if e != 0.0 {
        h -= m.dipole() * C64::new(e, 0.0);
    }
    h
}

pub const DEFAULT_MAX_STEPS: usize = 10_000_000;

/// Uniform time grid. The step is adjusted so that an integer number of steps
/// lands exactly on `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        Self::with_max_steps(t_start, t_end, dt, DEFAULT_MAX_STEPS)
    }

    pub fn with_max_steps(t_start: f64, t_end: f64, dt: f64, max_steps: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::param("t_end", "times must be finite"));
        }
        if !(t_end > t_start) {
            return Err(Error::param("t_end", "t_end must exceed t_start"));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param("dt", "time step must be > 0"));
        }
        let span = t_end - t_start;
        let steps = (span / dt).round().max(1.0);
        if steps > max_steps as f64 {
            return Err(Error::param(
                "dt",
                format!("{steps} steps exceed the configured maximum of {max_steps}"),
            ));
        }
        let n_steps = steps as usize;
        Ok(Self {
            t_start,
            t_end,
            dt: span / steps,
            n_steps,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt
        }
    }
}
