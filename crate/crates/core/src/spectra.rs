//! Retarded photon Green's function in the frequency domain.
//!
//! The polarization of a molecule starting in its ground state is the
//! particle-hole bubble `Pi(w) = sum_i |lambda_i0|^2 / (w - (E_i - E_0) + i eta)`,
//! and the cavity line follows from the Dyson equation
//! `F(w) = 1 / (F0(w)^-1 - Pi(w))` with `F0(w) = 1 / (w - omega_c + i kappa + i eta)`.
//! Inhomogeneous broadening averages the bubble over a distribution of
//! transition frequencies; for a Gaussian the average has a closed form in the
//! Dawson function.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{CavityMode, DisorderKind, DisorderSpec, MolecularModel};
use crate::quad::{integrate, QuadOptions};
use crate::special::scaled_erfi;

/// Half-width of the Gaussian integration window, in units of `sigma`.
pub const GAUSSIAN_WINDOW: f64 = 8.0;
/// Peaks below this fraction of the global maximum are ignored.
pub const PEAK_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
    eta: f64,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_points: usize, eta: f64) -> Result<Self> {
        if !omega_min.is_finite() || !omega_max.is_finite() || !(omega_max > omega_min) {
            return Err(Error::param("omega_max", "omega_max must exceed omega_min"));
        }
        if n_points < 2 {
            return Err(Error::param("n_points", "at least 2 points are required"));
        }
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::param("eta", "regulator must be > 0"));
        }
        Ok(Self {
            omega_min,
            omega_max,
            n_points,
            eta,
        })
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_points - 1) as f64
    }

    pub fn omegas(&self) -> Vec<f64> {
        let d = self.spacing();
        (0..self.n_points)
            .map(|k| {
                if k + 1 == self.n_points {
                    self.omega_max
                } else {
                    self.omega_min + k as f64 * d
                }
            })
            .collect()
    }
}

/// `1e-3 max |lambda_i0|`, or `1e-6 omega_c` for an uncoupled molecule.
pub fn default_eta(m: &MolecularModel, cavity: &CavityMode) -> f64 {
    let lam = (1..m.levels()).map(|i| m.coupling()[(i, 0)].norm()).fold(0.0, f64::max);
    if lam > 0.0 {
        1e-3 * lam
    } else {
        1e-6 * cavity.omega_c
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::param("eta", "regulator must be > 0"));
    }
    Ok(())
}

/// `1 / (w - omega0 + i eta)`
pub fn bare_particle_gf(omega: f64, omega0: f64, eta: f64) -> Result<C64> {
    check_eta(eta)?;
    Ok(C64::new(1.0, 0.0) / C64::new(omega - omega0, eta))
}

pub fn polarization_bubble(m: &MolecularModel, omega: f64, eta: f64) -> Result<C64> {
    check_eta(eta)?;
    let mut pi = C64::new(0.0, 0.0);
    for i in 1..m.levels() {
        let w = m.coupling()[(i, 0)].norm_sqr();
        if w != 0.0 {
            pi += w / C64::new(omega - m.transition_energy(i), eta);
        }
    }
    Ok(pi)
}

/// Bare cavity line `1 / (w - omega_c + i kappa + i eta)`.
pub fn empty_cavity_gf(cavity: &CavityMode, omega: f64, eta: f64) -> C64 {
    C64::new(1.0, 0.0) / C64::new(omega - cavity.omega_c, cavity.kappa + eta)
}

pub fn dyson_photon(f0: C64, pi: C64) -> Result<C64> {
    if f0 == C64::new(0.0, 0.0) || !f0.is_finite() {
        return Err(Error::Numerical("bare photon propagator is zero".into()));
    }
    let denom = f0.inv() - pi;
    if denom == C64::new(0.0, 0.0) {
        return Err(Error::Numerical("photon propagator has a pole on the real axis".into()));
    }
    Ok(denom.inv())
}

fn sorted_pair(a: C64, b: C64) -> (C64, C64) {
    if a.re <= b.re {
        (a, b)
    } else {
        (b, a)
    }
}

/// Roots of `(w - omega0)(w - omega_c) - lam^2`, ascending.
pub fn rabi_poles(omega0: f64, omega_c: f64, lam: f64) -> Result<(C64, C64)> {
    rabi_poles_damped(omega0, omega_c, lam, 0.0)
}

/// Roots of `(w - omega0)(w - omega_c + i kappa) - lam^2`, sorted by real part.
pub fn rabi_poles_damped(omega0: f64, omega_c: f64, lam: f64, kappa: f64) -> Result<(C64, C64)> {
    if !(lam >= 0.0) {
        return Err(Error::param("lam", "coupling must be >= 0"));
    }
    if !(kappa >= 0.0) {
        return Err(Error::param("kappa", "decay rate must be >= 0"));
    }
    let mean = C64::new(0.5 * (omega0 + omega_c), -0.5 * kappa);
    let half = C64::new(0.5 * (omega0 - omega_c), 0.5 * kappa);
    let r = (half * half + lam * lam).sqrt();
    Ok(sorted_pair(mean - r, mean + r))
}

/// Closed-form Gaussian average of `lam^2 / (w - w' + i 0+)` over
/// `w' ~ N(omega0, sigma^2)`.
pub fn disorder_polarization_gaussian(sigma: f64, omega0: f64, lam: f64, omega: f64) -> Result<C64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::param("sigma", "disorder width must be > 0"));
    }
    let x = (omega - omega0) / (2f64.sqrt() * sigma);
    let pref = lam * lam * (PI / 2.0).sqrt() / sigma;
    Ok(C64::new(pref * scaled_erfi(x), -pref * (-x * x).exp()))
}

fn gaussian_density(sigma: f64, offset: f64) -> f64 {
    (-0.5 * (offset / sigma).powi(2)).exp() / (sigma * (2.0 * PI).sqrt())
}

/// Numerical average of `lam^2 / (w - w' + i gamma)` over the distribution of
/// `d`, centred on `omega0`. Sample frequencies are absolute.
pub fn disorder_polarization_quadrature(d: &DisorderSpec, omega0: f64, lam: f64, omega: f64) -> Result<C64> {
    let gamma = d.gamma();
    let l2 = lam * lam;
    match d.kind() {
        DisorderKind::None => Ok(l2 / C64::new(omega - omega0, gamma)),
        DisorderKind::Samples { frequencies, weights } => {
            let sum: C64 = frequencies
                .iter()
                .zip(weights)
                .map(|(wk, pk)| *pk / C64::new(omega - wk, gamma))
                .sum();
            Ok(sum * l2)
        }
        DisorderKind::Gaussian { sigma } => {
            let sigma = *sigma;
            let a = omega0 - GAUSSIAN_WINDOW * sigma;
            let b = omega0 + GAUSSIAN_WINDOW * sigma;
            let rho_w = gaussian_density(sigma, omega - omega0);
            // Subtract the density at w so the integrand stays bounded as gamma -> 0.
            let smooth = |wp: f64| (gaussian_density(sigma, wp - omega0) - rho_w) / C64::new(omega - wp, gamma);
            let opts = QuadOptions {
                rel_tol: 1e-10,
                abs_tol: 1e-15 / sigma,
                max_intervals: 4000,
            };
            let mut value = integrate(smooth, a, b, opts)?.value;
            if rho_w > 0.0 {
                value += rho_w * (C64::new(omega - a, gamma).ln() - C64::new(omega - b, gamma).ln());
            }
            Ok(value * l2)
        }
    }
}

/// How a Gaussian disorder average is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Dawson closed form (the `gamma -> 0` limit).
    #[default]
    ClosedForm,
    Quadrature,
}

/// Disorder-averaged bubble of a multilevel molecule. Every transition is
/// shifted by the same random offset, whose distribution is `d` referred to
/// the lowest transition `E_1 - E_0`.
pub fn disordered_bubble(m: &MolecularModel, d: &DisorderSpec, omega: f64, averaging: Averaging) -> Result<C64> {
    let reference = m.transition_energy(1);
    let mut pi = C64::new(0.0, 0.0);
    for i in 1..m.levels() {
        let lam = m.coupling()[(i, 0)].norm();
        if lam == 0.0 {
            continue;
        }
        let center = m.transition_energy(i);
        pi += match (d.kind(), averaging) {
            (DisorderKind::Gaussian { sigma }, Averaging::ClosedForm) => {
                disorder_polarization_gaussian(*sigma, center, lam, omega)?
            }
            (DisorderKind::Samples { frequencies, weights }, _) => {
                let shifted: Vec<f64> = frequencies.iter().map(|w| w - reference + center).collect();
                let local = DisorderSpec::new(
                    DisorderKind::Samples {
                        frequencies: shifted,
                        weights: weights.clone(),
                    },
                    d.gamma(),
                )?;
                disorder_polarization_quadrature(&local, center, lam, omega)?
            }
            _ => disorder_polarization_quadrature(d, center, lam, omega)?,
        };
    }
    Ok(pi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
    /// Full width at half maximum; `None` if the line runs off the grid.
    pub fwhm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub photon_gf: Vec<C64>,
    pub polarization: Vec<C64>,
    /// `-Im F / pi`
    pub spectral_function: Vec<f64>,
    /// `|F|^2`
    pub transmission: Vec<f64>,
    /// Sorted by decreasing height.
    pub peaks: Vec<Peak>,
    /// Distance between the two highest peaks.
    pub splitting: Option<f64>,
    /// Some peak is narrower than three grid spacings.
    pub under_resolved: bool,
}

/// Photon spectrum of a clean molecule (`disorder = None`) or of a disordered
/// ensemble, whose Gaussian averages use the closed form.
pub fn transmission_spectrum(
    m: &MolecularModel,
    disorder: Option<&DisorderSpec>,
    cavity: &CavityMode,
    grid: &FrequencyGrid,
) -> Result<Spectrum> {
    transmission_spectrum_averaged(m, disorder, Averaging::ClosedForm, cavity, grid)
}

pub fn transmission_spectrum_averaged(
    m: &MolecularModel,
    disorder: Option<&DisorderSpec>,
    averaging: Averaging,
    cavity: &CavityMode,
    grid: &FrequencyGrid,
) -> Result<Spectrum> {
    let omegas = grid.omegas();
    let n = omegas.len();
    let mut photon_gf = Vec::with_capacity(n);
    let mut polarization = Vec::with_capacity(n);
    for &w in &omegas {
        let pi = match disorder {
            None => polarization_bubble(m, w, grid.eta)?,
            Some(d) => disordered_bubble(m, d, w, averaging)?,
        };
        photon_gf.push(dyson_photon(empty_cavity_gf(cavity, w, grid.eta), pi)?);
        polarization.push(pi);
    }
    let spectral_function: Vec<f64> = photon_gf.iter().map(|f| -f.im / PI).collect();
    let transmission = photon_gf.iter().map(|f| f.norm_sqr()).collect();
    let (peaks, under_resolved) = find_peaks(&omegas, &spectral_function);
    let splitting = if peaks.len() >= 2 {
        Some((peaks[0].omega - peaks[1].omega).abs())
    } else {
        None
    };
    Ok(Spectrum {
        omegas,
        photon_gf,
        polarization,
        spectral_function,
        transmission,
        peaks,
        splitting,
        under_resolved,
    })
}

/// Local maxima above [`PEAK_THRESHOLD`] of the global maximum, refined by a
/// parabola through the three nearest samples. Returns the peaks by decreasing
/// height and whether any of them is under-resolved.
pub fn find_peaks(omegas: &[f64], values: &[f64]) -> (Vec<Peak>, bool) {
    let n = values.len();
    if n < 3 {
        return (Vec::new(), false);
    }
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(top > 0.0) {
        return (Vec::new(), false);
    }
    let mut peaks = Vec::new();
    let mut under_resolved = false;
    for i in 1..n - 1 {
        let (l, c, r) = (values[i - 1], values[i], values[i + 1]);
        if !(c > l && c >= r && c > PEAK_THRESHOLD * top) {
            continue;
        }
        let step = 0.5 * (omegas[i + 1] - omegas[i - 1]);
        let curvature = l - 2.0 * c + r;
        let (shift, height) = if curvature < 0.0 {
            let s = 0.5 * (l - r) / curvature;
            (s, c - 0.25 * (l - r) * s)
        } else {
            (0.0, c)
        };
        let omega = omegas[i] + shift * step;
        let fwhm = half_width(omegas, values, i, 0.5 * height);
        if fwhm.is_some_and(|w| w < 3.0 * step) {
            under_resolved = true;
        }
        peaks.push(Peak { omega, height, fwhm });
    }
    peaks.sort_by(|a, b| b.height.total_cmp(&a.height));
    (peaks, under_resolved)
}

fn half_width(omegas: &[f64], values: &[f64], i: usize, half: f64) -> Option<f64> {
    let cross = |j: usize, k: usize| {
        let (a, b) = (values[j], values[k]);
        omegas[j] + (half - a) / (b - a) * (omegas[k] - omegas[j])
    };
    let mut l = i;
    while values[l] > half {
        if l == 0 {
            return None;
        }
        l -= 1;
    }
    let mut r = i;
    while values[r] > half {
        if r + 1 == values.len() {
            return None;
        }
        r += 1;
    }
    Some(cross(r - 1, r) - cross(l + 1, l))
}

#[cfg(test)]
mod tests;
