//! Driven Tavis-Cummings model for a finite number of identical two-level
//! molecules, restricted to the permutation-symmetric (Dicke) subspace.
//!
//! Basis states `|m, n>` carry `m` molecular excitations and `n` photons. The
//! Hamiltonian is
//!
//! ```text
//! H(t) = omega_c a^dag a + omega0 J_z' + (lam / sqrt(N)) (J^- a^dag + J^+ a) - E(t) (J^+ + J^-)
//! ```
//!
//! with `J_z' = sum sigma^dag sigma`. The drive couples through the same unit
//! dipole as the mean-field two-level model. Propagation is fourth-order
//! Runge-Kutta in the interaction picture of the diagonal part, so the step
//! only has to resolve the coupling and drive, not the bare frequencies.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{pulse_field, CavityMode, DrivePulse, MolecularModel, TimeGrid};

/// Population of the highest Fock layer above which a run is reported as
/// truncation-unsafe.
pub const TRUNCATION_LIMIT: f64 = 1e-6;
pub const NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TcConfig {
    pub n_molecules: usize,
    pub omega0: f64,
    pub omega_c: f64,
    /// Collective coupling; the single-molecule coupling is `lam / sqrt(N)`.
    pub lam: f64,
    pub n_max: usize,
    pub pulse: DrivePulse,
}

impl TcConfig {
    pub fn new(n_molecules: usize, omega0: f64, omega_c: f64, lam: f64, n_max: usize, pulse: DrivePulse) -> Result<Self> {
        let cfg = Self {
            n_molecules,
            omega0,
            omega_c,
            lam,
            n_max,
            pulse,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_molecules == 0 {
            return Err(Error::param("n_molecules", "at least one molecule is required"));
        }
        if self.n_max == 0 {
            return Err(Error::param("n_max", "photon truncation must be >= 1"));
        }
        for (name, v) in [("omega0", self.omega0), ("omega_c", self.omega_c), ("lam", self.lam)] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        (self.n_molecules + 1) * (self.n_max + 1)
    }

    pub fn index(&self, m: usize, n: usize) -> usize {
        m * (self.n_max + 1) + n
    }

    /// The equivalent single-molecule model for the mean-field solver.
    pub fn meanfield_model(&self) -> Result<MolecularModel> {
        MolecularModel::two_level(self.omega0, self.lam, 1.0)
    }

    pub fn cavity(&self) -> Result<CavityMode> {
        CavityMode::lossless(self.omega_c)
    }

    fn undriven(&self) -> Self {
        Self {
            pulse: DrivePulse::off(),
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    n_molecules: usize,
    n_max: usize,
    amplitudes: DVector<C64>,
}

impl SymmetricState {
    /// `|m = 0, n = 0>`
    pub fn ground(cfg: &TcConfig) -> Self {
        Self::basis(cfg, 0, 0).expect("ground state is always in range")
    }

    pub fn basis(cfg: &TcConfig, m: usize, n: usize) -> Result<Self> {
        if m > cfg.n_molecules || n > cfg.n_max {
            return Err(Error::param("initial state", format!("|{m}, {n}> is outside the truncated basis")));
        }
        let mut amplitudes = DVector::zeros(cfg.dimension());
        amplitudes[cfg.index(m, n)] = C64::new(1.0, 0.0);
        Ok(Self {
            n_molecules: cfg.n_molecules,
            n_max: cfg.n_max,
            amplitudes,
        })
    }

    pub fn from_amplitudes(cfg: &TcConfig, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != cfg.dimension() {
            return Err(Error::param("amplitudes", format!("expected {} entries", cfg.dimension())));
        }
        let amplitudes = DVector::from_vec(amplitudes);
        if (amplitudes.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::param("amplitudes", "state must be normalized to 1e-10"));
        }
        Ok(Self {
            n_molecules: cfg.n_molecules,
            n_max: cfg.n_max,
            amplitudes,
        })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Amplitude of `|m, n>`.
    pub fn amplitude(&self, m: usize, n: usize) -> C64 {
        self.amplitudes[m * (self.n_max + 1) + n]
    }

    fn observe(&self) -> Snapshot {
        let nn = self.n_molecules as f64;
        let mut s = Snapshot::default();
        for m in 0..=self.n_molecules {
            for n in 0..=self.n_max {
                let w = self.amplitude(m, n).norm_sqr();
                s.norm += w;
                s.excited += w * m as f64 / nn;
                s.photons += w * n as f64;
                s.excitations += w * (m + n) as f64;
                if n == self.n_max {
                    s.top_layer += w;
                }
            }
        }
        s.norm = s.norm.sqrt();
        s
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Snapshot {
    norm: f64,
    excited: f64,
    photons: f64,
    excitations: f64,
    top_layer: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactTrajectory {
    pub times: Vec<f64>,
    /// `<sum sigma^dag sigma> / N`
    pub excited_fraction: Vec<f64>,
    pub photons: Vec<f64>,
    pub norm: Vec<f64>,
    /// `<a^dag a + sum sigma^dag sigma>`
    pub excitations: Vec<f64>,
    /// Largest population of the `n = n_max` layer seen at any step.
    pub max_top_layer: f64,
    pub final_state: SymmetricState,
}

impl ExactTrajectory {
    pub fn truncation_safe(&self) -> bool {
        self.max_top_layer <= TRUNCATION_LIMIT
    }
}

struct Operators {
    diagonal: Vec<f64>,
    coupling: CsrMatrix<C64>,
    drive: CsrMatrix<C64>,
}

fn operators(cfg: &TcConfig) -> Operators {
    let dim = cfg.dimension();
    let nn = cfg.n_molecules;
    let g = cfg.lam / (nn as f64).sqrt();
    let mut diagonal = vec![0.0; dim];
    let mut coupling = CooMatrix::new(dim, dim);
    let mut drive = CooMatrix::new(dim, dim);
    for m in 0..=nn {
        for n in 0..=cfg.n_max {
            let k = cfg.index(m, n);
            diagonal[k] = m as f64 * cfg.omega0 + n as f64 * cfg.omega_c;
            // <m-1, n+1| J^- a^dag |m, n>
            if m >= 1 && n < cfg.n_max && g != 0.0 {
                let v = g * ((m * (nn - m + 1)) as f64).sqrt() * ((n + 1) as f64).sqrt();
                let j = cfg.index(m - 1, n + 1);
                coupling.push(j, k, C64::new(v, 0.0));
                coupling.push(k, j, C64::new(v, 0.0));
            }
            // <m+1, n| J^+ |m, n>
            if m < nn {
                let v = (((m + 1) * (nn - m)) as f64).sqrt();
                let j = cfg.index(m + 1, n);
                drive.push(j, k, C64::new(v, 0.0));
                drive.push(k, j, C64::new(v, 0.0));
            }
        }
    }
    Operators {
        diagonal,
        coupling: CsrMatrix::from(&coupling),
        drive: CsrMatrix::from(&drive),
    }
}

/// `y += alpha A x`
fn spmv_add(a: &CsrMatrix<C64>, alpha: C64, x: &[C64], y: &mut [C64]) {
    for (i, row) in a.row_iter().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (&j, v) in row.col_indices().iter().zip(row.values()) {
            acc += v * x[j];
        }
        y[i] += alpha * acc;
    }
}

/// Full Hamiltonian at time `t` as a sparse matrix.
pub fn build_tc_hamiltonian(cfg: &TcConfig, t: f64) -> Result<CsrMatrix<C64>> {
    cfg.validate()?;
    let ops = operators(cfg);
    let dim = cfg.dimension();
    let e = pulse_field(&cfg.pulse, t);
    let mut coo = CooMatrix::new(dim, dim);
    for (k, d) in ops.diagonal.iter().enumerate() {
        coo.push(k, k, C64::new(*d, 0.0));
    }
    for (i, j, v) in ops.coupling.triplet_iter() {
        coo.push(i, j, *v);
    }
    if e != 0.0 {
        for (i, j, v) in ops.drive.triplet_iter() {
            coo.push(i, j, -v * e);
        }
    }
    Ok(CsrMatrix::from(&coo))
}

pub fn propagate_exact(cfg: &TcConfig, grid: &TimeGrid, psi0: &SymmetricState) -> Result<ExactTrajectory> {
    propagate_exact_sampled(cfg, grid, psi0, 1)
}

/// As [`propagate_exact`], keeping every `record_every`-th step and the last.
pub fn propagate_exact_sampled(
    cfg: &TcConfig,
    grid: &TimeGrid,
    psi0: &SymmetricState,
    record_every: usize,
) -> Result<ExactTrajectory> {
    cfg.validate()?;
    if psi0.n_molecules != cfg.n_molecules || psi0.n_max != cfg.n_max {
        return Err(Error::param("initial state", "state does not match the configured basis"));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::param("initial state", "state must be normalized to 1e-10"));
    }
    let every = record_every.max(1);
    let ops = operators(cfg);
    let dim = cfg.dimension();
    let h = grid.dt();
    let t0 = grid.t_start();

    // phi = exp(i D (t - t0)) psi
    let mut phi: Vec<C64> = psi0.amplitudes.iter().copied().collect();
    let mut rotated = vec![C64::new(0.0, 0.0); dim];
    let mut image = vec![C64::new(0.0, 0.0); dim];
    let mut rate = |t: f64, phi: &[C64], out: &mut [C64]| {
        let s = t - t0;
        for k in 0..dim {
            rotated[k] = phi[k] * C64::from_polar(1.0, -ops.diagonal[k] * s);
            image[k] = C64::new(0.0, 0.0);
        }
        spmv_add(&ops.coupling, C64::new(1.0, 0.0), &rotated, &mut image);
        let e = pulse_field(&cfg.pulse, t);
        if e != 0.0 {
            spmv_add(&ops.drive, C64::new(-e, 0.0), &rotated, &mut image);
        }
        for k in 0..dim {
            out[k] = C64::new(0.0, -1.0) * image[k] * C64::from_polar(1.0, ops.diagonal[k] * s);
        }
    };

    let mut out = ExactTrajectory {
        times: Vec::new(),
        excited_fraction: Vec::new(),
        photons: Vec::new(),
        norm: Vec::new(),
        excitations: Vec::new(),
        max_top_layer: 0.0,
        final_state: psi0.clone(),
    };
    let mut state = psi0.clone();
    let record = |k: usize, t: f64, state: &SymmetricState, out: &mut ExactTrajectory| -> Result<()> {
        let s = state.observe();
        if !s.norm.is_finite() || (s.norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvariantViolation {
                what: "norm",
                time: t,
                value: (s.norm - 1.0).abs(),
                tolerance: NORM_TOL,
            });
        }
        out.max_top_layer = out.max_top_layer.max(s.top_layer);
        if k % every == 0 || k == grid.n_steps() {
            out.times.push(t);
            out.excited_fraction.push(s.excited);
            out.photons.push(s.photons);
            out.norm.push(s.norm);
            out.excitations.push(s.excitations);
        }
        Ok(())
    };
    record(0, t0, &state, &mut out)?;

    let mut k1 = vec![C64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for step in 0..grid.n_steps() {
        let t = grid.time(step);
        rate(t, &phi, &mut k1);
        for k in 0..dim {
            tmp[k] = phi[k] + k1[k] * (0.5 * h);
        }
        rate(t + 0.5 * h, &tmp, &mut k2);
        for k in 0..dim {
            tmp[k] = phi[k] + k2[k] * (0.5 * h);
        }
        rate(t + 0.5 * h, &tmp, &mut k3);
        for k in 0..dim {
            tmp[k] = phi[k] + k3[k] * h;
        }
        rate(t + h, &tmp, &mut k4);
        for k in 0..dim {
            phi[k] += (k1[k] + (k2[k] + k3[k]) * 2.0 + k4[k]) * (h / 6.0);
        }
        let t_next = grid.time(step + 1);
        let s = t_next - t0;
        for k in 0..dim {
            state.amplitudes[k] = phi[k] * C64::from_polar(1.0, -ops.diagonal[k] * s);
        }
        record(step + 1, t_next, &state, &mut out)?;
    }
    out.final_state = state;
    Ok(out)
}

/// Eigenvalues of the single-excitation block spanned by `|0, 1>` and
/// `|1, 0>`, ascending. Any drive in `cfg` is ignored.
pub fn single_excitation_eigenstates(cfg: &TcConfig) -> Result<[f64; 2]> {
    let h = build_tc_hamiltonian(&cfg.undriven(), 0.0)?;
    let basis = [cfg.index(0, 1), cfg.index(1, 0)];
    let mut block = DMatrix::<f64>::zeros(2, 2);
    for (i, j, v) in h.triplet_iter() {
        if let (Some(a), Some(b)) = (basis.iter().position(|&x| x == i), basis.iter().position(|&x| x == j)) {
            block[(a, b)] += v.re;
        }
    }
    let ev = block.symmetric_eigen().eigenvalues;
    let (a, b) = (ev[0], ev[1]);
    Ok(if a <= b { [a, b] } else { [b, a] })
}
