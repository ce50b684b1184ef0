//! Reduced density matrix of one representative molecule driven by the
//! self-consistent cavity field.
//!
//! Cavity variables are the canonical quadratures scaled by the ensemble size,
//! `q = phi / sqrt(N)` and `p = pi / sqrt(N)`. With the coupling convention of
//! [`crate::model`] the collective factors cancel and nothing depends on `N`:
//!
//! ```text
//! i drho/dt = [h(t) + sqrt(2) lambda q, rho]
//! dq/dt     = omega_c p
//! dp/dt     = -omega_c q - 2 kappa p - sqrt(2) tr(lambda rho) - F(t)
//! ```
//!
//! `F` is an optional force on the cavity, already divided by `sqrt(N)`.
//! The rotating-wave form keeps only the energy-conserving half of the
//! coupling, `(lambda_up a + lambda_down a^dag)`, and damps the field amplitude
//! `a = (q + i p) / sqrt(2)` at rate `kappa`.
//!
//! Two interchangeable backends evaluate the cavity field: the auxiliary
//! oscillator is stepped together with `rho` by classical Runge-Kutta, while the
//! memory backend convolves the stored source history with the closed-form
//! retarded propagator at every stage.

mod hartree;
mod memory;

pub use hartree::{hartree_potential, PolarizationHistory};

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, liouvillian, trace_product, CMatrix};
use crate::model::{bare_hamiltonian, CavityMode, DrivePulse, MolecularModel, TimeGrid};
use crate::photon::{KernelForm, OscillatorFlow, PhotonKernel};

/// Cavity-field backend.
pub type Backend = KernelForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingForm {
    /// `lambda (a + a^dag)`, counter-rotating terms included.
    #[default]
    Full,
    /// Rotating-wave coupling, for comparison with the Tavis-Cummings model.
    RotatingWave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldState {
    pub rho: CMatrix,
    pub q: f64,
    pub p: f64,
    pub t: f64,
}

impl MeanFieldState {
    /// Molecule in its ground state, cavity field at rest.
    pub fn ground(levels: usize) -> Self {
        Self::level(levels, 0).expect("level 0 always exists")
    }

    pub fn level(levels: usize, k: usize) -> Result<Self> {
        if k >= levels {
            return Err(Error::param("initial_level", format!("level {k} out of range 0..{levels}")));
        }
        let mut rho = CMatrix::zeros(levels, levels);
        rho[(k, k)] = C64::new(1.0, 0.0);
        Ok(Self {
            rho,
            q: 0.0,
            p: 0.0,
            t: 0.0,
        })
    }

    /// Pure state from (unnormalized) amplitudes.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::param("initial_amplitudes", "state vector must be nonzero"));
        }
        let n = amplitudes.len();
        let rho = CMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj() / (norm * norm));
        Ok(Self {
            rho,
            q: 0.0,
            p: 0.0,
            t: 0.0,
        })
    }

    pub fn with_field(mut self, q: f64, p: f64) -> Self {
        self.q = q;
        self.p = p;
        self
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.rho, &self.rho).re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.rho.nrows()).map(|i| self.rho[(i, i)].re).collect()
    }

    /// Checks trace, Hermiticity and eigenvalue bounds.
    pub fn check(&self, tol: &Tolerances) -> Result<()> {
        let t = self.t;
        let trace = self.rho.trace();
        let trace_err = (trace - C64::new(1.0, 0.0)).norm();
        if trace_err > tol.trace {
            return Err(Error::InvariantViolation {
                what: "trace",
                time: t,
                value: trace_err,
                tolerance: tol.trace,
            });
        }
        let herm = hermiticity_defect(&self.rho).0;
        if herm > tol.hermiticity {
            return Err(Error::InvariantViolation {
                what: "hermiticity",
                time: t,
                value: herm,
                tolerance: tol.hermiticity,
            });
        }
        let ev = hermitian_eigenvalues(&self.rho);
        let lo = ev.first().copied().unwrap_or(0.0);
        let hi = ev.last().copied().unwrap_or(0.0);
        let excess = (-lo).max(hi - 1.0);
        if excess > tol.eigenvalue {
            return Err(Error::InvariantViolation {
                what: "eigenvalue bounds",
                time: t,
                value: excess,
                tolerance: tol.eigenvalue,
            });
        }
        Ok(())
    }
}

/// Tolerances for the checks performed during propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub trace: f64,
    pub hermiticity: f64,
    pub eigenvalue: f64,
    pub purity_drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            trace: 1e-8,
            hermiticity: 1e-8,
            eigenvalue: 1e-8,
            purity_drift: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub populations: Vec<f64>,
    /// `Re tr(lambda rho)`
    pub polarization: f64,
    pub q: f64,
    pub p: f64,
    /// `(q^2 + p^2) / 2`, the mean-field photon number per molecule.
    pub photon_proxy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<MeanFieldState>,
    pub observables: Vec<Observables>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn population(&self, level: usize) -> Vec<f64> {
        self.observables.iter().map(|o| o.populations[level]).collect()
    }

    /// `1 - rho_00`
    pub fn excited_fraction(&self) -> Vec<f64> {
        self.observables.iter().map(|o| 1.0 - o.populations[0]).collect()
    }

    pub fn last(&self) -> &MeanFieldState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldOptions {
    pub backend: Backend,
    pub coupling: CouplingForm,
    /// Force on the cavity mode, scaled by `1 / sqrt(N)`.
    pub cavity_drive: Option<DrivePulse>,
    /// Keep every n-th step (the final step is always kept).
    pub record_every: usize,
    pub tolerances: Tolerances,
}

impl Default for MeanFieldOptions {
    fn default() -> Self {
        Self {
            backend: Backend::Auxiliary,
            coupling: CouplingForm::Full,
            cavity_drive: None,
            record_every: 1,
            tolerances: Tolerances::default(),
        }
    }
}

/// Right-hand side of the coupled molecule-cavity equations.
pub(crate) struct Dynamics {
    model: MolecularModel,
    pulse: DrivePulse,
    cavity_drive: Option<DrivePulse>,
    form: CouplingForm,
    omega_c: f64,
    lowering: CMatrix,
    raising: CMatrix,
    flow: OscillatorFlow,
}

impl Dynamics {
    pub(crate) fn new(
        model: &MolecularModel,
        cavity: &CavityMode,
        pulse: &DrivePulse,
        form: CouplingForm,
        cavity_drive: Option<DrivePulse>,
    ) -> Result<Self> {
        let kernel = PhotonKernel::from_cavity(cavity, KernelForm::Auxiliary)?;
        let generator = match form {
            CouplingForm::Full => kernel.generator(),
            CouplingForm::RotatingWave => {
                Matrix2::new(-cavity.kappa, cavity.omega_c, -cavity.omega_c, -cavity.kappa)
            }
        };
        let lowering = model.lowering_coupling();
        let raising = lowering.adjoint();
        Ok(Self {
            model: model.clone(),
            pulse: *pulse,
            cavity_drive,
            form,
            omega_c: cavity.omega_c,
            lowering,
            raising,
            flow: OscillatorFlow::new(generator)?,
        })
    }

    fn generator(&self) -> &Matrix2<f64> {
        self.flow.generator()
    }

    /// Molecular operator generated by the cavity field.
    fn field_term(&self, q: f64, p: f64) -> CMatrix {
        match self.form {
            CouplingForm::Full => self.model.coupling() * C64::new(SQRT_2 * q, 0.0),
            CouplingForm::RotatingWave => {
                (&self.raising * C64::new(q, p) + &self.lowering * C64::new(q, -p)) / C64::new(SQRT_2, 0.0)
            }
        }
    }

    fn effective_hamiltonian(&self, t: f64, q: f64, p: f64) -> CMatrix {
        bare_hamiltonian(&self.model, &self.pulse, t) + self.field_term(q, p)
    }

    fn rho_rate(&self, t: f64, rho: &CMatrix, y: &Vector2<f64>) -> CMatrix {
        liouvillian(&self.effective_hamiltonian(t, y[0], y[1]), rho)
    }

    fn molecular_force(&self, rho: &CMatrix) -> Vector2<f64> {
        match self.form {
            CouplingForm::Full => {
                let s = trace_product(self.model.coupling(), rho).re;
                Vector2::new(0.0, -SQRT_2 * s)
            }
            CouplingForm::RotatingWave => {
                let z = trace_product(&self.lowering, rho);
                Vector2::new(SQRT_2 * z.im, -SQRT_2 * z.re)
            }
        }
    }

    /// Total force on the quadratures.
    fn forcing(&self, t: f64, rho: &CMatrix) -> Vector2<f64> {
        let mut f = self.molecular_force(rho);
        if let Some(d) = &self.cavity_drive {
            f[1] -= d.field(t);
        }
        f
    }

    /// Time derivative of [`Self::forcing`] given `drho/dt`.
    fn forcing_rate(&self, t: f64, rho_dot: &CMatrix) -> Vector2<f64> {
        let mut f = self.molecular_force(rho_dot);
        if let Some(d) = &self.cavity_drive {
            f[1] -= d.field_derivative(t);
        }
        f
    }

    /// Molecule + field + interaction energy per molecule; conserved for an
    /// undriven lossless cavity.
    pub(crate) fn energy(&self, state: &MeanFieldState) -> f64 {
        let h0 = self.model.bare_energy_matrix();
        trace_product(&h0, &state.rho).re
            + 0.5 * self.omega_c * (state.q * state.q + state.p * state.p)
            + trace_product(&self.field_term(state.q, state.p), &state.rho).re
    }

    fn observe(&self, state: &MeanFieldState) -> Observables {
        Observables {
            populations: state.populations(),
            polarization: trace_product(self.model.coupling(), &state.rho).re,
            q: state.q,
            p: state.p,
            photon_proxy: 0.5 * (state.q * state.q + state.p * state.p),
        }
    }
}

/// Configured mean-field propagation.
#[derive(Debug, Clone)]
pub struct MeanFieldSolver {
    model: MolecularModel,
    cavity: CavityMode,
    pulse: DrivePulse,
    options: MeanFieldOptions,
}

impl MeanFieldSolver {
    pub fn new(model: &MolecularModel, cavity: &CavityMode, pulse: &DrivePulse) -> Self {
        Self {
            model: model.clone(),
            cavity: *cavity,
            pulse: *pulse,
            options: MeanFieldOptions::default(),
        }
    }

    pub fn with_options(mut self, options: MeanFieldOptions) -> Self {
        self.options = options;
        self
    }

    pub fn backend(mut self, backend: Backend) -> Self {
        self.options.backend = backend;
        self
    }

    pub fn coupling(mut self, form: CouplingForm) -> Self {
        self.options.coupling = form;
        self
    }

    pub fn cavity_drive(mut self, drive: Option<DrivePulse>) -> Self {
        self.options.cavity_drive = drive;
        self
    }

    pub fn record_every(mut self, every: usize) -> Self {
        self.options.record_every = every.max(1);
        self
    }

    pub fn options(&self) -> &MeanFieldOptions {
        &self.options
    }

    /// Energy functional of a state under this configuration.
    pub fn energy(&self, state: &MeanFieldState) -> Result<f64> {
        Ok(self.dynamics()?.energy(state))
    }

    fn dynamics(&self) -> Result<Dynamics> {
        Dynamics::new(
            &self.model,
            &self.cavity,
            &self.pulse,
            self.options.coupling,
            self.options.cavity_drive,
        )
    }

    pub fn run(&self, grid: &TimeGrid, init: &MeanFieldState) -> Result<Trajectory> {
        let m = self.model.levels();
        if init.rho.nrows() != m || init.rho.ncols() != m {
            return Err(Error::param(
                "initial state",
                format!("density matrix must be {m}x{m}"),
            ));
        }
        let mut init = init.clone();
        init.t = grid.t_start();
        init.check(&self.options.tolerances)?;
        let dynamics = self.dynamics()?;
        let mut recorder = Recorder::new(&dynamics, &self.options, grid, init.purity());
        match self.options.backend {
            Backend::Auxiliary => propagate_auxiliary(&dynamics, grid, init, &mut recorder)?,
            Backend::Memory => memory::propagate(&dynamics, grid, init, &mut recorder)?,
        }
        Ok(recorder.finish())
    }
}

/// Collects snapshots and enforces the propagation invariants.
pub(crate) struct Recorder<'a> {
    dynamics: &'a Dynamics,
    tolerances: Tolerances,
    every: usize,
    last_step: usize,
    purity0: f64,
    trajectory: Trajectory,
}

impl<'a> Recorder<'a> {
    fn new(dynamics: &'a Dynamics, options: &MeanFieldOptions, grid: &TimeGrid, purity0: f64) -> Self {
        let capacity = grid.n_steps() / options.record_every.max(1) + 2;
        Self {
            dynamics,
            tolerances: options.tolerances,
            every: options.record_every.max(1),
            last_step: grid.n_steps(),
            purity0,
            trajectory: Trajectory {
                times: Vec::with_capacity(capacity),
                states: Vec::with_capacity(capacity),
                observables: Vec::with_capacity(capacity),
            },
        }
    }

    /// Validates the state at step `k` and stores it if due.
    pub(crate) fn visit(&mut self, k: usize, state: MeanFieldState) -> Result<()> {
        if !state.rho.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            || !state.q.is_finite()
            || !state.p.is_finite()
        {
            return Err(Error::InvariantViolation {
                what: "finite state",
                time: state.t,
                value: f64::INFINITY,
                tolerance: 0.0,
            });
        }
        let due = k % self.every == 0 || k == self.last_step;
        if due {
            state.check(&self.tolerances)?;
        } else {
            let trace_err = (state.rho.trace() - C64::new(1.0, 0.0)).norm();
            if trace_err > self.tolerances.trace {
                return Err(Error::InvariantViolation {
                    what: "trace",
                    time: state.t,
                    value: trace_err,
                    tolerance: self.tolerances.trace,
                });
            }
        }
        let drift = (state.purity() - self.purity0).abs();
        if drift > self.tolerances.purity_drift {
            return Err(Error::InvariantViolation {
                what: "purity",
                time: state.t,
                value: drift,
                tolerance: self.tolerances.purity_drift,
            });
        }
        if due {
            let obs = self.dynamics.observe(&state);
            self.trajectory.times.push(state.t);
            self.trajectory.observables.push(obs);
            self.trajectory.states.push(state);
        }
        Ok(())
    }

    fn finish(self) -> Trajectory {
        self.trajectory
    }
}

fn propagate_auxiliary(
    dynamics: &Dynamics,
    grid: &TimeGrid,
    init: MeanFieldState,
    recorder: &mut Recorder<'_>,
) -> Result<()> {
    let h = grid.dt();
    let a = *dynamics.generator();
    let mut rho = init.rho.clone();
    let mut y = Vector2::new(init.q, init.p);
    recorder.visit(0, init)?;

    let cavity_rate = |t: f64, rho: &CMatrix, y: &Vector2<f64>| a * y + dynamics.forcing(t, rho);
    for k in 0..grid.n_steps() {
        let t = grid.time(k);
        let th = t + 0.5 * h;
        let k1 = dynamics.rho_rate(t, &rho, &y);
        let l1 = cavity_rate(t, &rho, &y);

        let rho2 = &rho + &k1 * C64::new(0.5 * h, 0.0);
        let y2 = y + l1 * (0.5 * h);
        let k2 = dynamics.rho_rate(th, &rho2, &y2);
        let l2 = cavity_rate(th, &rho2, &y2);

        let rho3 = &rho + &k2 * C64::new(0.5 * h, 0.0);
        let y3 = y + l2 * (0.5 * h);
        let k3 = dynamics.rho_rate(th, &rho3, &y3);
        let l3 = cavity_rate(th, &rho3, &y3);

        let rho4 = &rho + &k3 * C64::new(h, 0.0);
        let y4 = y + l3 * h;
        let k4 = dynamics.rho_rate(t + h, &rho4, &y4);
        let l4 = cavity_rate(t + h, &rho4, &y4);

        rho += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0);
        y += (l1 + (l2 + l3) * 2.0 + l4) * (h / 6.0);

        let state = MeanFieldState {
            rho: rho.clone(),
            q: y[0],
            p: y[1],
            t: grid.time(k + 1),
        };
        recorder.visit(k + 1, state)?;
    }
    Ok(())
}

/// Mean-field propagation with the default options and the chosen backend.
pub fn propagate_meanfield(
    model: &MolecularModel,
    cavity: &CavityMode,
    pulse: &DrivePulse,
    grid: &TimeGrid,
    init: &MeanFieldState,
    backend: Backend,
) -> Result<Trajectory> {
    MeanFieldSolver::new(model, cavity, pulse).backend(backend).run(grid, init)
}

/// Same propagation with the light-matter coupling removed. The cavity
/// columns of the result carry no information.
pub fn bare_molecule_reference(
    model: &MolecularModel,
    pulse: &DrivePulse,
    grid: &TimeGrid,
    init: &MeanFieldState,
) -> Result<Trajectory> {
    bare_molecule_solver(model, pulse)?.run(grid, init)
}

/// Solver behind [`bare_molecule_reference`], for callers that need options.
pub fn bare_molecule_solver(model: &MolecularModel, pulse: &DrivePulse) -> Result<MeanFieldSolver> {
    let span = model.energies().last().unwrap() - model.energies()[0];
    let cavity = CavityMode::lossless(if span > 0.0 { span } else { 1.0 })?;
    Ok(MeanFieldSolver::new(&model.decoupled(), &cavity, pulse))
}
