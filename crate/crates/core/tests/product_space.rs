//! The permutation-symmetric solver against a brute-force integration in the
//! full 2^N (n_max + 1) product space.

use nalgebra::{DMatrix, DVector};
use polariton::exact::{propagate_exact, SymmetricState, TcConfig};
use polariton::model::{pulse_field, DrivePulse, TimeGrid};
use polariton::C64;

struct ProductSpace {
    n: usize,
    n_max: usize,
    h0: DMatrix<C64>,
    coupling: DMatrix<C64>,
    drive: DMatrix<C64>,
    excited: DMatrix<C64>,
    photons: DMatrix<C64>,
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

impl ProductSpace {
    fn new(cfg: &TcConfig) -> Self {
        let n = cfg.n_molecules;
        let nf = cfg.n_max + 1;
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let id2 = DMatrix::<C64>::identity(2, 2);
        // qubit basis: 0 = ground, 1 = excited
        let sigma = DMatrix::from_row_slice(2, 2, &[zero, one, zero, zero]);
        let mut a = DMatrix::<C64>::zeros(nf, nf);
        for k in 1..nf {
            a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
        }
        let idf = DMatrix::<C64>::identity(nf, nf);
        let site = |i: usize, op: &DMatrix<C64>| {
            let mut out = DMatrix::<C64>::identity(1, 1);
            for j in 0..n {
                out = kron(&out, if j == i { op } else { &id2 });
            }
            out
        };
        let dim_q = 1 << n;
        let idq = DMatrix::<C64>::identity(dim_q, dim_q);
        let mut lower = DMatrix::<C64>::zeros(dim_q, dim_q);
        for i in 0..n {
            lower += site(i, &sigma);
        }
        let mut excited_q = DMatrix::<C64>::zeros(dim_q, dim_q);
        for i in 0..n {
            excited_q += site(i, &(sigma.adjoint() * &sigma));
        }
        let g = C64::new(cfg.lam / (n as f64).sqrt(), 0.0);
        let h0 = kron(&excited_q, &idf) * C64::new(cfg.omega0, 0.0)
            + kron(&idq, &(a.adjoint() * &a)) * C64::new(cfg.omega_c, 0.0);
        let coupling = (kron(&lower, &a.adjoint()) + kron(&lower.adjoint(), &a)) * g;
        let drive = kron(&(&lower + lower.adjoint()), &idf);
        Self {
            n,
            n_max: cfg.n_max,
            h0,
            coupling,
            drive,
            excited: kron(&excited_q, &idf) / C64::new(n as f64, 0.0),
            photons: kron(&idq, &(a.adjoint() * a)),
        }
    }

    fn dim(&self) -> usize {
        (1 << self.n) * (self.n_max + 1)
    }

    fn expect(&self, op: &DMatrix<C64>, psi: &DVector<C64>) -> f64 {
        psi.dotc(&(op * psi)).re
    }

    /// Interaction-picture RK4 with dense matrices.
    fn propagate(&self, pulse: &DrivePulse, grid: &TimeGrid, psi0: DVector<C64>) -> Vec<(f64, f64)> {
        let diag: Vec<f64> = (0..self.dim()).map(|k| self.h0[(k, k)].re).collect();
        let t0 = grid.t_start();
        let rate = |t: f64, phi: &DVector<C64>| {
            let s = t - t0;
            let rot = DVector::from_fn(self.dim(), |k, _| phi[k] * C64::from_polar(1.0, -diag[k] * s));
            let v = &self.coupling - &self.drive * C64::new(pulse_field(pulse, t), 0.0);
            let y = v * rot;
            DVector::from_fn(self.dim(), |k, _| C64::new(0.0, -1.0) * y[k] * C64::from_polar(1.0, diag[k] * s))
        };
        let mut phi = psi0;
        let h = grid.dt();
        let mut out = Vec::new();
        let observe = |phi: &DVector<C64>, t: f64| {
            let psi = DVector::from_fn(self.dim(), |k, _| phi[k] * C64::from_polar(1.0, -diag[k] * (t - t0)));
            (self.expect(&self.excited, &psi), self.expect(&self.photons, &psi))
        };
        out.push(observe(&phi, t0));
        for step in 0..grid.n_steps() {
            let t = grid.time(step);
            let k1 = rate(t, &phi);
            let k2 = rate(t + h / 2.0, &(&phi + &k1 * C64::new(h / 2.0, 0.0)));
            let k3 = rate(t + h / 2.0, &(&phi + &k2 * C64::new(h / 2.0, 0.0)));
            let k4 = rate(t + h, &(&phi + &k3 * C64::new(h, 0.0)));
            phi += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0);
            out.push(observe(&phi, grid.time(step + 1)));
        }
        out
    }
}

#[test]
fn driven_two_molecules_match_product_space() {
    let pulse = DrivePulse::new(0.05, 1.0, 15.0, 5.0).unwrap();
    let cfg = TcConfig::new(2, 1.0, 1.05, 0.2, 3, pulse).unwrap();
    let grid = TimeGrid::new(0.0, 40.0, 0.005).unwrap();
    let sym = propagate_exact(&cfg, &grid, &SymmetricState::ground(&cfg)).unwrap();

    let full = ProductSpace::new(&cfg);
    let mut psi0 = DVector::zeros(full.dim());
    psi0[0] = C64::new(1.0, 0.0);
    let reference = full.propagate(&pulse, &grid, psi0);

    let mut worst: f64 = 0.0;
    for (k, (pe, nph)) in reference.iter().enumerate() {
        worst = worst
            .max((sym.excited_fraction[k] - pe).abs())
            .max((sym.photons[k] - nph).abs());
    }
    assert!(worst <= 1e-10, "max deviation {worst}");
    assert!(sym.excited_fraction.iter().cloned().fold(0.0, f64::max) > 1e-3);
}

#[test]
fn undriven_bright_state_matches_dense_exponential() {
    let cfg = TcConfig::new(2, 1.0, 0.9, 0.15, 3, DrivePulse::off()).unwrap();
    let full = ProductSpace::new(&cfg);
    let h = &full.h0 + &full.coupling;
    // (|eg> + |ge>) / sqrt(2) with no photons; qubit 0 is the most significant.
    let nf = cfg.n_max + 1;
    let mut psi0 = DVector::<C64>::zeros(full.dim());
    let amp = C64::new(0.5f64.sqrt(), 0.0);
    psi0[0b10 * nf] = amp;
    psi0[0b01 * nf] = amp;

    let grid = TimeGrid::new(0.0, 30.0, 0.005).unwrap();
    let sym = propagate_exact(&cfg, &grid, &SymmetricState::basis(&cfg, 1, 0).unwrap()).unwrap();
    for k in (0..=grid.n_steps()).step_by(500) {
        let t = grid.time(k);
        let psi = (&h * C64::new(0.0, -t)).exp() * &psi0;
        let pe = full.expect(&full.excited, &psi);
        let nph = full.expect(&full.photons, &psi);
        assert!((sym.excited_fraction[k] - pe).abs() <= 1e-10, "t = {t}");
        assert!((sym.photons[k] - nph).abs() <= 1e-10, "t = {t}");
    }
}
