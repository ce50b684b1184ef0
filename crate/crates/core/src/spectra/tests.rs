use super::*;
use crate::exact::{single_excitation_eigenstates, TcConfig};
use crate::linalg::CMatrix;
use crate::model::DrivePulse;
use crate::quad::integrate_real;
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn bare_gf_values() {
    let g = bare_particle_gf(1.0, 1.0, 1e-3).unwrap();
    assert!((g - C64::new(0.0, -1e3)).norm() < 1e-9);
    let g = bare_particle_gf(3.0, 1.0, 1e-6).unwrap();
    assert!((g.re - 0.5).abs() < 1e-12 && g.im.abs() < 1e-6);
    assert!(bare_particle_gf(1.0, 1.0, 0.0).is_err());
}

#[test]
fn bare_gf_obeys_kramers_kronig() {
    // Re g(w) = (1/pi) PV int Im g(w') / (w' - w) dw'
    let (w0, eta) = (1.0, 0.2);
    let im = |w: f64| bare_particle_gf(w, w0, eta).unwrap().im;
    let l = 1e4;
    for w in [0.3, 0.95, 1.0, 1.7] {
        let f_w = im(w);
        let h = 1e-6;
        let slope = (im(w + h) - im(w - h)) / (2.0 * h);
        let subtracted = |x: f64| if x == w { slope } else { (im(x) - f_w) / (x - w) };
        let opts = QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_intervals: 4000,
        };
        let pv = integrate_real(subtracted, -l, l, opts).unwrap() + f_w * ((l - w) / (l + w)).ln();
        let want = bare_particle_gf(w, w0, eta).unwrap().re;
        assert!((pv / PI - want).abs() < 1e-6, "w = {w}: {} vs {want}", pv / PI);
    }
}

fn three_level() -> MolecularModel {
    let coupling = CMatrix::from_row_slice(
        3,
        3,
        &[c(0.0), c(0.1), C64::new(0.0, 0.05), c(0.1), c(0.0), c(0.02), C64::new(0.0, -0.05), c(0.02), c(0.0)],
    );
    MolecularModel::new(vec![-0.2, 0.8, 1.5], coupling, CMatrix::zeros(3, 3)).unwrap()
}

#[test]
fn bubble_values() {
    let m = MolecularModel::two_level(1.0, 0.1, 1.0).unwrap();
    let pi = polarization_bubble(&m, 1.5, 1e-12).unwrap();
    assert!((pi.re - 0.02).abs() < 1e-12 && pi.im.abs() < 1e-12);
    let m0 = MolecularModel::two_level(1.0, 0.0, 1.0).unwrap();
    assert_eq!(polarization_bubble(&m0, 1.0, 1e-3).unwrap(), c(0.0));
}

#[test]
fn bubble_is_the_fourier_transform_of_the_particle_hole_product() {
    // Pi(t) = -i theta(t) sum_i |lambda_i0|^2 exp(-i E_i t) exp(i E_0 t), damped by eta.
    let m = three_level();
    let eta = 0.05;
    let t_max = 40.0 / eta;
    let pi_t = |t: f64| {
        let mut acc = c(0.0);
        for i in 1..3 {
            let particle = C64::new(0.0, -1.0) * C64::from_polar(1.0, -m.energies()[i] * t);
            let hole = C64::from_polar(1.0, m.energies()[0] * t);
            acc += particle * hole * m.coupling()[(i, 0)].norm_sqr();
        }
        acc * (-eta * t).exp()
    };
    for w in [0.4, 1.0, 1.2, 1.7, 2.5] {
        // Composite Simpson on a fine grid.
        let n = 200_000;
        let h = t_max / n as f64;
        let mut sum = c(0.0);
        for k in 0..=n {
            let t = k as f64 * h;
            let weight = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += pi_t(t) * C64::from_polar(1.0, w * t) * weight;
        }
        let numeric = sum * (h / 3.0);
        let analytic = polarization_bubble(&m, w, eta).unwrap();
        assert!(rel(numeric, analytic) < 1e-8, "w = {w}: {numeric} vs {analytic}");
    }
}

#[test]
fn dyson_limits() {
    let f0 = C64::new(0.3, -0.4);
    assert!((dyson_photon(f0, c(0.0)).unwrap() - f0).norm() < 1e-15);
    assert!(dyson_photon(c(0.0), c(0.1)).is_err());
    // F^-1 vanishes at the Rabi poles of a lossless cavity.
    let m = MolecularModel::two_level(1.0, 0.1, 1.0).unwrap();
    let cav = CavityMode::new(1.2, 0.0).unwrap();
    let (lo, hi) = rabi_poles(1.0, 1.2, 0.1).unwrap();
    for w in [lo.re, hi.re] {
        let pi = polarization_bubble(&m, w, 1e-14).unwrap();
        let inv = empty_cavity_gf(&cav, w, 1e-14).inv() - pi;
        assert!(inv.norm() < 1e-10);
    }
}

#[test]
fn rabi_pole_examples() {
    let (a, b) = rabi_poles(1.0, 1.0, 0.1).unwrap();
    assert!((a.re - 0.9).abs() < 1e-15 && (b.re - 1.1).abs() < 1e-15);
    let (a, b) = rabi_poles(1.0, 1.2, 0.0).unwrap();
    assert!((a - c(1.0)).norm() < 1e-15 && (b - c(1.2)).norm() < 1e-15);
    let (a, b) = rabi_poles(1.0, 1.2, 0.1).unwrap();
    let r = 0.02f64.sqrt();
    assert!((a.re - (1.1 - r)).abs() < 1e-15 && (b.re - (1.1 + r)).abs() < 1e-15);
    assert!(rabi_poles(1.0, 1.0, -0.1).is_err());

    // Resonant and damped: w = omega - i kappa/2 +- sqrt(lam^2 - kappa^2/4).
    let (a, b) = rabi_poles_damped(1.0, 1.0, 0.1, 0.02).unwrap();
    let s = (0.01f64 - 0.0001).sqrt();
    assert!((a - C64::new(1.0 - s, -0.01)).norm() < 1e-14);
    assert!((b - C64::new(1.0 + s, -0.01)).norm() < 1e-14);
}

#[test]
fn poles_match_single_excitation_block() {
    for (w0, wc, lam) in [(1.0, 1.0, 0.1), (1.0, 1.3, 0.05), (0.7, 0.6, 0.2)] {
        let cfg = TcConfig::new(4, w0, wc, lam, 2, DrivePulse::off()).unwrap();
        let [e1, e2] = single_excitation_eigenstates(&cfg).unwrap();
        let (p1, p2) = rabi_poles(w0, wc, lam).unwrap();
        assert!((p1.re - e1).abs() < 1e-12 && (p2.re - e2).abs() < 1e-12);
    }
}

#[test]
fn gaussian_closed_form_special_points() {
    let (s, w0, lam) = (0.03, 1.0, 0.1);
    let pi = disorder_polarization_gaussian(s, w0, lam, w0).unwrap();
    assert!((pi - C64::new(0.0, -lam * lam * (PI / 2.0).sqrt() / s)).norm() < 1e-15);
    let far = disorder_polarization_gaussian(s, w0, lam, w0 + 200.0 * s).unwrap();
    assert!((far.re / (lam * lam / (200.0 * s)) - 1.0).abs() < 1e-4);
    assert!(far.im.abs() < 1e-300);
    assert!(disorder_polarization_gaussian(0.0, w0, lam, w0).is_err());
}

#[test]
fn narrow_gaussian_approaches_a_single_line() {
    let lam = 0.1;
    let sigma = 1e-6 * lam;
    let gamma = 1e-3;
    let d = DisorderSpec::gaussian(sigma, gamma).unwrap();
    for w in [0.9, 0.999, 1.0, 1.05] {
        let got = disorder_polarization_quadrature(&d, 1.0, lam, w).unwrap();
        let want = lam * lam / C64::new(w - 1.0, gamma);
        assert!(rel(got, want) < 1e-4, "w = {w}");
    }
}

#[test]
fn quadrature_matches_closed_form_and_symmetry() {
    let lam = 0.1;
    for sigma in [0.01, 0.05, 0.2] {
        let d = DisorderSpec::gaussian(sigma, 1e-12 * sigma).unwrap();
        for k in -10..=10 {
            let w = 1.0 + k as f64 * sigma + 0.1234 * sigma;
            let q = disorder_polarization_quadrature(&d, 1.0, lam, w).unwrap();
            let cf = disorder_polarization_gaussian(sigma, 1.0, lam, w).unwrap();
            assert!(rel(q, cf) < 1e-6, "sigma {sigma}, w {w}: {q} vs {cf}");
        }
        let centre = disorder_polarization_quadrature(&d, 1.0, lam, 1.0).unwrap();
        assert!(centre.re.abs() < 1e-8 * centre.im.abs());
    }
}

#[test]
fn sample_disorder_is_a_weighted_sum() {
    let d = DisorderSpec::new(
        DisorderKind::Samples {
            frequencies: vec![0.9, 1.1],
            weights: vec![0.25, 0.75],
        },
        0.01,
    )
    .unwrap();
    let got = disorder_polarization_quadrature(&d, 1.0, 0.2, 1.05).unwrap();
    let want = (0.25 / C64::new(0.15, 0.01) + 0.75 / C64::new(-0.05, 0.01)) * 0.04;
    assert!(rel(got, want) < 1e-14);
    let unnormalized = DisorderKind::Samples {
        frequencies: vec![0.9, 1.1],
        weights: vec![0.5, 0.6],
    };
    assert!(DisorderSpec::new(unnormalized, 0.01).is_err());

    // In a multilevel molecule the samples shift every transition together.
    let m = three_level();
    let d = DisorderSpec::new(
        DisorderKind::Samples {
            frequencies: vec![1.0, 1.02],
            weights: vec![0.5, 0.5],
        },
        0.01,
    )
    .unwrap();
    let got = disordered_bubble(&m, &d, 1.3, Averaging::ClosedForm).unwrap();
    let mut want = c(0.0);
    for delta in [0.0, 0.02] {
        for i in 1..3 {
            want += 0.5 * m.coupling()[(i, 0)].norm_sqr() / C64::new(1.3 - m.transition_energy(i) - delta, 0.01);
        }
    }
    assert!(rel(got, want) < 1e-14);
}

#[test]
fn clean_spectrum_shows_the_rabi_doublet() {
    let m = MolecularModel::two_level(1.0, 0.1, 1.0).unwrap();
    let cav = CavityMode::new(1.0, 0.005).unwrap();
    let grid = FrequencyGrid::new(0.6, 1.4, 8001, default_eta(&m, &cav)).unwrap();
    let s = transmission_spectrum(&m, None, &cav, &grid).unwrap();
    assert_eq!(s.peaks.len(), 2);
    assert!((s.splitting.unwrap() - 0.2).abs() < 1e-4);
    assert!(!s.under_resolved);
    // Each polariton is half photon: linewidth kappa + eta, shared weight.
    let fwhm = s.peaks[0].fwhm.unwrap();
    assert!((fwhm / (0.005 + grid.eta()) - 1.0).abs() < 0.05, "{fwhm}");
    assert!(s.spectral_function.iter().all(|&a| a >= -1e-12));
}

#[test]
fn spectral_weight_sums_to_one() {
    let m = three_level();
    let cav = CavityMode::new(1.0, 0.05).unwrap();
    let grid = FrequencyGrid::new(-60.0, 60.0, 240_001, 1e-3).unwrap();
    let s = transmission_spectrum(&m, None, &cav, &grid).unwrap();
    let h = grid.spacing();
    let total: f64 = s.spectral_function.iter().sum::<f64>() * h;
    // Lorentzian tails beyond the window carry about 2 (kappa + eta) / (pi 60).
    assert!((total - 1.0).abs() < 2e-3, "{total}");
}

#[test]
fn empty_cavity_line_half_width_is_kappa() {
    let m = MolecularModel::two_level(1.0, 0.0, 1.0).unwrap();
    let cav = CavityMode::new(1.0, 0.01).unwrap();
    let grid = FrequencyGrid::new(0.9, 1.1, 20_001, default_eta(&m, &cav)).unwrap();
    let s = transmission_spectrum(&m, None, &cav, &grid).unwrap();
    assert_eq!(s.peaks.len(), 1);
    let hwhm = 0.5 * s.peaks[0].fwhm.unwrap();
    assert!((hwhm / 0.01 - 1.0).abs() < 0.01, "{hwhm}");
}

#[test]
fn peak_detection_details() {
    let omegas: Vec<f64> = (0..101).map(|k| k as f64 * 0.01).collect();
    // Narrow spike: one sample wide.
    let mut v = vec![0.0; 101];
    v[50] = 1.0;
    v[49] = 0.2;
    v[51] = 0.2;
    let (peaks, under) = find_peaks(&omegas, &v);
    assert_eq!(peaks.len(), 1);
    assert!(under);
    // Two Lorentzians, the smaller below the threshold.
    let lor = |w: f64, c: f64, g: f64| g * g / ((w - c) * (w - c) + g * g);
    let v: Vec<f64> = omegas.iter().map(|&w| lor(w, 0.3, 0.05) + 0.003 * lor(w, 0.95, 0.02)).collect();
    let (peaks, under) = find_peaks(&omegas, &v);
    assert_eq!(peaks.len(), 1);
    assert!(!under);
    assert!((peaks[0].omega - 0.3).abs() < 1e-3);
    assert!((peaks[0].fwhm.unwrap() - 0.1).abs() < 5e-3);
    assert!(find_peaks(&omegas[..2], &v[..2]).0.is_empty());
}

#[test]
fn frequency_grid_checks() {
    assert!(FrequencyGrid::new(1.0, 1.0, 10, 1e-3).is_err());
    assert!(FrequencyGrid::new(0.0, 1.0, 1, 1e-3).is_err());
    assert!(FrequencyGrid::new(0.0, 1.0, 10, 0.0).is_err());
    let g = FrequencyGrid::new(0.0, 1.0, 11, 1e-3).unwrap();
    let w = g.omegas();
    assert_eq!(w.len(), 11);
    assert_eq!(w[10], 1.0);
    assert!((w[3] - 0.3).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_function_is_nonnegative(
        lam in 0.0f64..0.3,
        kappa in 0.0f64..0.1,
        eta in 1e-6f64..1e-2,
        sigma in 1e-4f64..0.5,
        disorder in 0usize..3,
        w in 0.0f64..2.0,
    ) {
        let m = MolecularModel::two_level(1.0, lam, 1.0).unwrap();
        let cav = CavityMode::new(1.0, kappa).unwrap();
        let pi = match disorder {
            0 => polarization_bubble(&m, w, eta).unwrap(),
            1 => disordered_bubble(&m, &DisorderSpec::gaussian(sigma, eta).unwrap(), w, Averaging::ClosedForm).unwrap(),
            _ => disordered_bubble(&m, &DisorderSpec::samples(vec![0.9, 1.0 + sigma, 1.2], eta).unwrap(), w, Averaging::ClosedForm).unwrap(),
        };
        let f = dyson_photon(empty_cavity_gf(&cav, w, eta), pi).unwrap();
        prop_assert!(-f.im / PI >= -1e-12);
    }
}
