//! Mode drivers. Each writes its files under the output directory and returns
//! a one-line summary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use polariton::exact::{propagate_exact_sampled, ExactTrajectory, SymmetricState, TcConfig};
use polariton::meanfield::{bare_molecule_solver, CouplingForm, MeanFieldSolver};
use polariton::model::{DisorderKind, DisorderSpec, DrivePulse};
use polariton::spectra::{transmission_spectrum_averaged, Spectrum};
use polariton::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::config::{Disorder, Mode, RunConfig};
use crate::output::{config_hash, num, Table};

const TIME_UNITS: &str = "energies and frequencies in the model unit, t in its inverse, hbar = 1";
const FREQ_UNITS: &str = "omega in the model energy unit; Pi and F in its inverse; A = -Im F / pi; T = |F|^2";

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Validation(String),
    Invariant(String),
    /// Outputs were written, but the photon truncation was too small.
    Truncation(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Invariant(_) => 2,
            Failure::Truncation(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) => write!(f, "validation error: {m}"),
            Failure::Invariant(m) => write!(f, "numerical invariant violated: {m}"),
            Failure::Truncation(m) => write!(f, "photon truncation unsafe: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::NonHermitian { .. } | Error::Resource(_) => {
                Failure::Validation(e.to_string())
            }
            Error::InvariantViolation { .. } | Error::IncompleteHistory { .. } | Error::Numerical(_) => {
                Failure::Invariant(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(format!("output: {e}"))
    }
}

pub struct Context {
    pub out: PathBuf,
    /// Seed for `disorder = "random"`.
    pub seed: u64,
}

pub fn run(cfg: &RunConfig, ctx: &Context) -> Result<String, Failure> {
    fs::create_dir_all(&ctx.out)?;
    let hash = config_hash(&cfg.canonical());
    match cfg.mode {
        Mode::Dynamics => dynamics(cfg, &ctx.out, &hash),
        Mode::Exact => exact(cfg, &ctx.out, &hash),
        Mode::Compare => compare(cfg, &ctx.out, &hash),
        Mode::Spectrum => spectrum(cfg, ctx, &hash),
        Mode::DisorderScan => disorder_scan(cfg, &ctx.out, &hash),
        Mode::Sweep => sweep(cfg, ctx, &hash),
    }
}

fn coupling_form(cfg: &RunConfig) -> CouplingForm {
    if cfg.rwa {
        CouplingForm::RotatingWave
    } else {
        CouplingForm::Full
    }
}

fn form_name(cfg: &RunConfig) -> &'static str {
    if cfg.rwa {
        "rotating-wave"
    } else {
        "full"
    }
}

fn dynamics(cfg: &RunConfig, out: &Path, hash: &str) -> Result<String, Failure> {
    let time = cfg.time.as_ref().expect("validated");
    let tr = MeanFieldSolver::new(&cfg.molecule, &cfg.cavity, &cfg.pulse)
        .backend(cfg.backend)
        .coupling(coupling_form(cfg))
        .cavity_drive(cfg.cavity_drive)
        .record_every(time.record_every)
        .run(&time.grid, &cfg.initial)?;
    let levels = cfg.molecule.levels();
    let mut header = vec!["t".to_string()];
    header.extend((0..levels).map(|k| format!("pop_{k}")));
    header.extend(["re_tr_lambda_rho", "q", "p", "field_energy"].map(String::from));
    let mut table = Table::new("dynamics", hash, TIME_UNITS, header);
    table
        .meta("backend", format!("{:?}", cfg.backend).to_lowercase())
        .meta("coupling", form_name(cfg));
    let omega_c = cfg.cavity.omega_c;
    for (t, o) in tr.times.iter().zip(&tr.observables) {
        let mut row = vec![*t];
        row.extend(&o.populations);
        row.extend([o.polarization, o.q, o.p, omega_c * o.photon_proxy]);
        table.row(&row);
    }
    table.write(&out.join("dynamics.csv"))?;
    let last = tr.excited_fraction().last().copied().unwrap_or(0.0);
    Ok(format!("dynamics: {} samples final_excited_fraction={}", tr.len(), num(last)))
}

fn tc_config(cfg: &RunConfig) -> Result<TcConfig, Failure> {
    let x = cfg.exact.expect("validated");
    let (omega0, _) = cfg.lowest_transition();
    let lam = cfg.molecule.coupling()[(1, 0)].re;
    let mu = cfg.molecule.dipole()[(1, 0)].re;
    let pulse = DrivePulse {
        e0: cfg.pulse.e0 * mu,
        ..cfg.pulse
    };
    Ok(TcConfig::new(cfg.ensemble.n_molecules, omega0, cfg.cavity.omega_c, lam, x.n_max, pulse)?)
}

fn run_exact(cfg: &RunConfig) -> Result<(TcConfig, ExactTrajectory), Failure> {
    let x = cfg.exact.expect("validated");
    let time = cfg.time.as_ref().expect("validated");
    let tc = tc_config(cfg)?;
    let psi0 = SymmetricState::basis(&tc, x.initial_excited, x.initial_photons)?;
    let tr = propagate_exact_sampled(&tc, &time.grid, &psi0, time.record_every)?;
    Ok((tc, tr))
}

fn exact(cfg: &RunConfig, out: &Path, hash: &str) -> Result<String, Failure> {
    let (tc, tr) = run_exact(cfg)?;
    let header = ["t", "p_e", "n_photon", "norm", "n_ex"].map(String::from).to_vec();
    let mut table = Table::new("exact", hash, TIME_UNITS, header);
    table
        .meta("n_molecules", tc.n_molecules.to_string())
        .meta("n_max", tc.n_max.to_string())
        .meta("max_top_layer", num(tr.max_top_layer))
        .meta("truncation_safe", tr.truncation_safe().to_string());
    for k in 0..tr.times.len() {
        table.row(&[tr.times[k], tr.excited_fraction[k], tr.photons[k], tr.norm[k], tr.excitations[k]]);
    }
    table.write(&out.join("exact.csv"))?;
    let max_pe = tr.excited_fraction.iter().cloned().fold(0.0, f64::max);
    let summary = format!(
        "exact: {} samples max_p_e={} max_top_layer={}",
        tr.times.len(),
        num(max_pe),
        num(tr.max_top_layer)
    );
    if tr.truncation_safe() {
        Ok(summary)
    } else {
        Err(Failure::Truncation(summary))
    }
}

fn compare(cfg: &RunConfig, out: &Path, hash: &str) -> Result<String, Failure> {
    let time = cfg.time.as_ref().expect("validated");
    let (tc, ex) = run_exact(cfg)?;
    let mf = MeanFieldSolver::new(&cfg.molecule, &cfg.cavity, &cfg.pulse)
        .backend(cfg.backend)
        .coupling(coupling_form(cfg))
        .record_every(time.record_every)
        .run(&time.grid, &cfg.initial)?;
    let bare = bare_molecule_solver(&cfg.molecule, &cfg.pulse)?
        .backend(cfg.backend)
        .record_every(time.record_every)
        .run(&time.grid, &cfg.initial)?;
    let (pe_mf, pe_bare) = (mf.excited_fraction(), bare.excited_fraction());
    if pe_mf.len() != ex.times.len() || pe_bare.len() != ex.times.len() {
        return Err(Failure::Invariant("mean-field and exact sample times differ".into()));
    }
    let header = ["t", "p_e_meanfield", "p_e_exact", "p_e_bare"].map(String::from).to_vec();
    let mut table = Table::new("compare", hash, TIME_UNITS, header);
    table
        .meta("coupling", form_name(cfg))
        .meta("n_molecules", tc.n_molecules.to_string())
        .meta("n_max", tc.n_max.to_string());
    let mut max_dev: f64 = 0.0;
    let mut max_bare: f64 = 0.0;
    let mut sq = 0.0;
    for k in 0..ex.times.len() {
        let d = pe_mf[k] - ex.excited_fraction[k];
        max_dev = max_dev.max(d.abs());
        max_bare = max_bare.max((pe_bare[k] - pe_mf[k]).abs());
        sq += d * d;
        table.row(&[ex.times[k], pe_mf[k], ex.excited_fraction[k], pe_bare[k]]);
    }
    table.write(&out.join("compare.csv"))?;
    let rms = (sq / ex.times.len() as f64).sqrt();
    let max_pe = ex.excited_fraction.iter().cloned().fold(0.0, f64::max);

    let header = [
        "max_abs_dev",
        "rms_dev",
        "max_p_e_exact",
        "max_abs_dev_bare",
        "max_top_layer",
        "truncation_safe",
    ]
    .map(String::from)
    .to_vec();
    let mut summary = Table::new("compare", hash, "dimensionless populations", header);
    summary.text_row(&[
        num(max_dev),
        num(rms),
        num(max_pe),
        num(max_bare),
        num(ex.max_top_layer),
        ex.truncation_safe().to_string(),
    ]);
    summary.write(&out.join("compare_summary.csv"))?;
    let line = format!(
        "compare: max_abs_dev={} rms_dev={} max_p_e_exact={} truncation_safe={}",
        num(max_dev),
        num(rms),
        num(max_pe),
        ex.truncation_safe()
    );
    if ex.truncation_safe() {
        Ok(line)
    } else {
        Err(Failure::Truncation(line))
    }
}

fn disorder_spec(cfg: &RunConfig, seed: u64) -> Result<Option<DisorderSpec>, Failure> {
    let eta = cfg.frequency.as_ref().expect("validated").eta();
    let gamma = cfg.ensemble.gamma.unwrap_or(eta);
    Ok(match &cfg.ensemble.disorder {
        Disorder::None => None,
        Disorder::Gaussian { sigma } => Some(DisorderSpec::gaussian(*sigma, gamma)?),
        Disorder::Samples { frequencies, weights } => Some(DisorderSpec::new(
            DisorderKind::Samples {
                frequencies: frequencies.clone(),
                weights: weights.clone(),
            },
            gamma,
        )?),
        Disorder::Random { sigma, count } => {
            let (center, _) = cfg.lowest_transition();
            let normal = Normal::new(center, *sigma).map_err(|e| Failure::Validation(format!("ensemble.sigma: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws = (0..*count).map(|_| normal.sample(&mut rng)).collect();
            Some(DisorderSpec::samples(draws, gamma)?)
        }
    })
}

fn spectrum_table(s: &Spectrum, hash: &str, mode: &str) -> Table {
    let header = ["omega", "re_pi", "im_pi", "re_f", "im_f", "a", "t"].map(String::from).to_vec();
    let mut table = Table::new(mode, hash, FREQ_UNITS, header);
    for k in 0..s.omegas.len() {
        let (pi, f) = (s.polarization[k], s.photon_gf[k]);
        table.row(&[s.omegas[k], pi.re, pi.im, f.re, f.im, s.spectral_function[k], s.transmission[k]]);
    }
    table
}

fn splitting_text(s: &Spectrum) -> String {
    s.splitting.map(num).unwrap_or_else(|| "none".into())
}

fn spectrum(cfg: &RunConfig, ctx: &Context, hash: &str) -> Result<String, Failure> {
    let grid = cfg.frequency.as_ref().expect("validated");
    let disorder = disorder_spec(cfg, ctx.seed)?;
    let s = transmission_spectrum_averaged(&cfg.molecule, disorder.as_ref(), cfg.ensemble.averaging, &cfg.cavity, grid)?;
    let mut table = spectrum_table(&s, hash, "spectrum");
    if matches!(cfg.ensemble.disorder, Disorder::Random { .. }) {
        table.meta("seed", ctx.seed.to_string());
    }
    table.write(&ctx.out.join("spectrum.csv"))?;

    let header = ["omega", "height", "fwhm"].map(String::from).to_vec();
    let mut peaks = Table::new("spectrum", hash, FREQ_UNITS, header);
    peaks
        .meta("splitting", splitting_text(&s))
        .meta("under_resolved", s.under_resolved.to_string());
    for p in &s.peaks {
        peaks.row(&[p.omega, p.height, p.fwhm.unwrap_or(f64::NAN)]);
    }
    peaks.write(&ctx.out.join("spectrum_peaks.csv"))?;
    Ok(format!(
        "spectrum: {} peaks splitting={} under_resolved={}",
        s.peaks.len(),
        splitting_text(&s),
        s.under_resolved
    ))
}

fn disorder_scan(cfg: &RunConfig, out: &Path, hash: &str) -> Result<String, Failure> {
    let grid = cfg.frequency.as_ref().expect("validated");
    let (_, lam) = cfg.lowest_transition();
    let gamma = cfg.ensemble.gamma.unwrap_or(grid.eta());
    let spectra: Vec<(f64, Spectrum)> = cfg
        .scan
        .par_iter()
        .map(|r| {
            let d = DisorderSpec::gaussian(r * lam, gamma)?;
            let s = transmission_spectrum_averaged(&cfg.molecule, Some(&d), cfg.ensemble.averaging, &cfg.cavity, grid)?;
            Ok((*r, s))
        })
        .collect::<Result<_, Failure>>()?;

    let header = [
        "sigma_over_lambda",
        "sigma",
        "n_peaks",
        "splitting",
        "under_resolved",
        "peak_1",
        "peak_2",
        "file",
    ]
    .map(String::from)
    .to_vec();
    let mut index = Table::new("disorder-scan", hash, FREQ_UNITS, header);
    index.meta("lambda", num(lam));
    for (k, (r, s)) in spectra.iter().enumerate() {
        let file = format!("disorder_scan_{k:03}.csv");
        let mut table = spectrum_table(s, hash, "disorder-scan");
        table.meta("sigma_over_lambda", num(*r)).meta("sigma", num(r * lam));
        table.write(&out.join(&file))?;
        let peak = |i: usize| s.peaks.get(i).map(|p| num(p.omega)).unwrap_or_else(|| "nan".into());
        index.text_row(&[
            num(*r),
            num(r * lam),
            s.peaks.len().to_string(),
            s.splitting.map(num).unwrap_or_else(|| "nan".into()),
            s.under_resolved.to_string(),
            peak(0),
            peak(1),
            file,
        ]);
    }
    index.write(&out.join("disorder_scan_peaks.csv"))?;
    let best = spectra
        .iter()
        .filter_map(|(r, s)| s.splitting.map(|v| (*r, v)))
        .fold(None, |acc: Option<(f64, f64)>, x| match acc {
            Some(a) if a.1 >= x.1 => Some(a),
            _ => Some(x),
        });
    Ok(match best {
        Some((r, v)) => format!("disorder-scan: {} widths max_splitting={} at sigma_over_lambda={}", spectra.len(), num(v), num(r)),
        None => format!("disorder-scan: {} widths no splitting", spectra.len()),
    })
}

fn sweep(cfg: &RunConfig, ctx: &Context, hash: &str) -> Result<String, Failure> {
    let sweep = cfg.sweep.as_ref().expect("validated");
    let results: Vec<Result<String, Failure>> = sweep
        .points
        .par_iter()
        .enumerate()
        .map(|(k, (_, point))| {
            let sub = Context {
                out: ctx.out.join(format!("point_{k:03}")),
                seed: ctx.seed,
            };
            run(point, &sub)
        })
        .collect();

    let header = ["index", "value", "directory", "exit_code", "summary"].map(String::from).to_vec();
    let mut index = Table::new("sweep", hash, "see per-point files", header);
    index
        .meta("parameter", sweep.parameter.clone())
        .meta("point_mode", sweep.points[0].1.mode.name());
    let mut worst: Option<Failure> = None;
    for (k, ((value, _), res)) in sweep.points.iter().zip(&results).enumerate() {
        let (code, text) = match res {
            Ok(s) => (0, s.clone()),
            Err(f) => (f.exit_code(), f.to_string()),
        };
        index.text_row(&[
            k.to_string(),
            value.to_string().replace(',', ";"),
            format!("point_{k:03}"),
            code.to_string(),
            text.replace(',', ";").replace('\n', " "),
        ]);
        if let Err(f) = res {
            if worst.as_ref().is_none_or(|w| f.exit_code() > w.exit_code()) {
                worst = Some(f.clone());
            }
        }
    }
    index.write(&ctx.out.join("index.csv"))?;
    let ok = results.iter().filter(|r| r.is_ok()).count();
    let line = format!("sweep: {ok}/{} points succeeded", results.len());
    match worst {
        None => Ok(line),
        Some(Failure::Invariant(m)) => Err(Failure::Invariant(format!("{line}; {m}"))),
        Some(Failure::Truncation(m)) => Err(Failure::Truncation(format!("{line}; {m}"))),
        Some(Failure::Validation(m)) => Err(Failure::Validation(format!("{line}; {m}"))),
    }
}
