//! TOML run configuration. Every table is strict: unknown keys are rejected,
//! and every validation failure names the key path it came from.

use std::fmt;

use polariton::meanfield::{Backend, MeanFieldState};
use polariton::model::{CavityMode, DrivePulse, MolecularModel, TimeGrid, DEFAULT_MAX_STEPS};
use polariton::spectra::{default_eta, Averaging, FrequencyGrid};
use polariton::{CMatrix, Error, C64};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

fn fail<T>(key: &str, reason: impl fmt::Display) -> Result<T> {
    Err(ConfigError(format!("{key}: {reason}")))
}

/// Re-roots a core validation error under a config section.
fn within(section: &str, e: Error) -> ConfigError {
    match e {
        Error::InvalidParameter { name, reason } => ConfigError(format!("{section}.{name}: {reason}")),
        Error::NonHermitian {
            matrix,
            row,
            col,
            defect,
        } => ConfigError(format!(
            "{section}.{matrix}[{row}][{col}]: matrix must be Hermitian, entry differs from conj({matrix}[{col}][{row}]) by {defect:e}"
        )),
        other => ConfigError(format!("{section}: {other}")),
    }
}

fn required<T>(v: Option<T>, key: &str) -> Result<T> {
    match v {
        Some(v) => Ok(v),
        None => fail(key, "required"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Dynamics,
    Exact,
    Compare,
    Spectrum,
    DisorderScan,
    Sweep,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "dynamics" => Mode::Dynamics,
            "exact" => Mode::Exact,
            "compare" => Mode::Compare,
            "spectrum" => Mode::Spectrum,
            "disorder-scan" => Mode::DisorderScan,
            "sweep" => Mode::Sweep,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Dynamics => "dynamics",
            Mode::Exact => "exact",
            Mode::Compare => "compare",
            Mode::Spectrum => "spectrum",
            Mode::DisorderScan => "disorder-scan",
            Mode::Sweep => "sweep",
        }
    }
}

// ---- raw schema ----

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    molecule: Option<RawMolecule>,
    cavity: Option<RawCavity>,
    ensemble: Option<RawEnsemble>,
    pulse: Option<RawPulse>,
    cavity_drive: Option<RawPulse>,
    time: Option<RawTime>,
    frequency: Option<RawFrequency>,
    run: Option<RawRun>,
    exact: Option<RawExact>,
    scan: Option<RawScan>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMolecule {
    omega0: Option<f64>,
    lambda: Option<f64>,
    mu: Option<f64>,
    energies: Option<Vec<f64>>,
    coupling_re: Option<Vec<Vec<f64>>>,
    coupling_im: Option<Vec<Vec<f64>>>,
    dipole_re: Option<Vec<Vec<f64>>>,
    dipole_im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCavity {
    omega_c: Option<f64>,
    kappa: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    n_molecules: Option<usize>,
    disorder: Option<String>,
    sigma: Option<f64>,
    frequencies: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
    count: Option<usize>,
    gamma: Option<f64>,
    averaging: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPulse {
    e0: Option<f64>,
    omega: Option<f64>,
    t_center: Option<f64>,
    tau: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_start: Option<f64>,
    t_end: Option<f64>,
    dt: Option<f64>,
    max_steps: Option<usize>,
    record_every: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrequency {
    omega_min: Option<f64>,
    omega_max: Option<f64>,
    n_points: Option<usize>,
    eta: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    mode: Option<String>,
    backend: Option<String>,
    rwa: Option<bool>,
    initial_level: Option<usize>,
    initial_q: Option<f64>,
    initial_p: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExact {
    n_max: Option<usize>,
    initial_excited: Option<usize>,
    initial_photons: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    sigma_over_lambda: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: Option<String>,
    values: Option<Vec<toml::Value>>,
    mode: Option<String>,
}

// ---- validated configuration ----

#[derive(Debug, Clone, PartialEq)]
pub enum Disorder {
    None,
    Gaussian { sigma: f64 },
    Samples { frequencies: Vec<f64>, weights: Vec<f64> },
    /// `count` Gaussian draws around the lowest transition, seeded by `--seed`.
    Random { sigma: f64, count: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub n_molecules: usize,
    pub disorder: Disorder,
    pub gamma: Option<f64>,
    pub averaging: Averaging,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSettings {
    pub grid: TimeGrid,
    pub record_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSettings {
    pub n_max: usize,
    pub initial_excited: usize,
    pub initial_photons: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    pub points: Vec<(toml::Value, RunConfig)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub molecule: MolecularModel,
    pub cavity: CavityMode,
    pub ensemble: Ensemble,
    pub pulse: DrivePulse,
    pub cavity_drive: Option<DrivePulse>,
    pub time: Option<TimeSettings>,
    pub frequency: Option<FrequencyGrid>,
    pub backend: Backend,
    pub rwa: bool,
    pub initial: MeanFieldState,
    pub exact: Option<ExactSettings>,
    pub scan: Vec<f64>,
    pub sweep: Option<Sweep>,
    /// Canonical document the configuration was built from.
    pub source: toml::Value,
}

impl RunConfig {
    /// Canonical TOML text; hashed into output headers.
    pub fn canonical(&self) -> String {
        toml::to_string(&self.source).expect("toml values always serialize")
    }

    /// Lowest transition frequency and its coupling, for two-level runs and scans.
    pub fn lowest_transition(&self) -> (f64, f64) {
        (self.molecule.transition_energy(1), self.molecule.coupling()[(1, 0)].norm())
    }
}

/// Parse and validate. `mode` overrides `run.mode`.
pub fn parse_config(text: &str, mode: Option<Mode>) -> Result<RunConfig> {
    let value: toml::Value = toml::from_str(text).map_err(|e| ConfigError(format!("config: {}", e.message())))?;
    from_value(value, mode)
}

pub fn from_value(value: toml::Value, mode: Option<Mode>) -> Result<RunConfig> {
    let raw: RawConfig = value
        .clone()
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError(format!("config: {}", e.message())))?;
    let mode = match mode {
        Some(m) => m,
        None => {
            let name = required(raw.run.as_ref().and_then(|r| r.mode.clone()), "run.mode")?;
            match Mode::parse(&name) {
                Some(m) => m,
                None => return fail("run.mode", format!("unknown mode `{name}`")),
            }
        }
    };
    if mode == Mode::Sweep {
        return sweep_config(value, raw);
    }

    let molecule = molecule(required(raw.molecule, "molecule")?)?;
    let cavity = cavity(raw.cavity.unwrap_or_default(), mode)?;
    let ensemble = ensemble(raw.ensemble.unwrap_or_default(), &molecule, mode)?;
    let pulse = match raw.pulse {
        Some(p) => parse_pulse(p, "pulse")?,
        None => DrivePulse::off(),
    };
    let cavity_drive = raw.cavity_drive.map(|p| parse_pulse(p, "cavity_drive")).transpose()?;
    let run = raw.run.unwrap_or_default();
    let backend = match run.backend.as_deref() {
        None | Some("auxiliary") => Backend::Auxiliary,
        Some("memory") => Backend::Memory,
        Some(other) => return fail("run.backend", format!("expected `auxiliary` or `memory`, got `{other}`")),
    };
    let rwa = run.rwa.unwrap_or(mode == Mode::Compare);
    let levels = molecule.levels();
    let initial = MeanFieldState::level(levels, run.initial_level.unwrap_or(0))
        .map_err(|e| within("run", e))?
        .with_field(run.initial_q.unwrap_or(0.0), run.initial_p.unwrap_or(0.0));
    if !initial.q.is_finite() || !initial.p.is_finite() {
        return fail("run.initial_q", "initial field must be finite");
    }

    let needs_time = matches!(mode, Mode::Dynamics | Mode::Exact | Mode::Compare);
    let time = match (raw.time, needs_time) {
        (Some(t), true) => Some(time(t)?),
        (None, true) => return fail("time", format!("section required by mode {}", mode.name())),
        _ => None,
    };
    let needs_frequency = matches!(mode, Mode::Spectrum | Mode::DisorderScan);
    let frequency = match (raw.frequency, needs_frequency) {
        (Some(f), true) => Some(frequency(f, &molecule, &cavity)?),
        (None, true) => return fail("frequency", format!("section required by mode {}", mode.name())),
        _ => None,
    };

    let exact = match mode {
        Mode::Exact | Mode::Compare => Some(exact(raw.exact.unwrap_or_default(), &molecule, &ensemble, mode)?),
        _ => None,
    };
    if let Some(x) = &cavity_drive {
        if matches!(mode, Mode::Exact | Mode::Compare) && !x.is_off() {
            return fail("cavity_drive", "the exact solver has no cavity drive");
        }
    }

    let scan = if mode == Mode::DisorderScan {
        let s = required(raw.scan.and_then(|s| s.sigma_over_lambda), "scan.sigma_over_lambda")?;
        if s.is_empty() {
            return fail("scan.sigma_over_lambda", "at least one value is required");
        }
        if let Some(k) = s.iter().position(|r| !(*r > 0.0) || !r.is_finite()) {
            return fail(&format!("scan.sigma_over_lambda[{k}]"), "must be > 0");
        }
        if molecule.coupling()[(1, 0)].norm() == 0.0 {
            return fail("molecule.coupling", "a disorder scan needs a nonzero lowest-transition coupling");
        }
        s
    } else {
        Vec::new()
    };

    Ok(RunConfig {
        mode,
        molecule,
        cavity,
        ensemble,
        pulse,
        cavity_drive,
        time,
        frequency,
        backend,
        rwa,
        initial,
        exact,
        scan,
        sweep: None,
        source: value,
    })
}

fn matrix(rows: Option<&Vec<Vec<f64>>>, m: usize, key: &str) -> Result<Vec<f64>> {
    let Some(rows) = rows else {
        return Ok(vec![0.0; m * m]);
    };
    if rows.len() != m {
        return fail(key, format!("expected {m} rows, got {}", rows.len()));
    }
    let mut out = Vec::with_capacity(m * m);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != m {
            return fail(&format!("{key}[{i}]"), format!("expected {m} entries, got {}", row.len()));
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return fail(&format!("{key}[{i}][{j}]"), "must be finite");
            }
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

fn complex_matrix(raw: &RawMolecule, m: usize, name: &str) -> Result<CMatrix> {
    let (re, im) = match name {
        "coupling" => (&raw.coupling_re, &raw.coupling_im),
        _ => (&raw.dipole_re, &raw.dipole_im),
    };
    let re = matrix(re.as_ref(), m, &format!("molecule.{name}_re"))?;
    let im = matrix(im.as_ref(), m, &format!("molecule.{name}_im"))?;
    Ok(CMatrix::from_row_iterator(m, m, re.iter().zip(&im).map(|(a, b)| C64::new(*a, *b))))
}

fn molecule(raw: RawMolecule) -> Result<MolecularModel> {
    let shortcut = raw.omega0.is_some() || raw.lambda.is_some() || raw.mu.is_some();
    let full = raw.energies.is_some()
        || raw.coupling_re.is_some()
        || raw.coupling_im.is_some()
        || raw.dipole_re.is_some()
        || raw.dipole_im.is_some();
    if shortcut && full {
        return fail("molecule", "give either omega0/lambda/mu or energies with matrices, not both");
    }
    if shortcut {
        let omega0 = required(raw.omega0, "molecule.omega0")?;
        let lam = required(raw.lambda, "molecule.lambda")?;
        let mu = raw.mu.unwrap_or(1.0);
        for (key, v) in [("molecule.lambda", lam), ("molecule.mu", mu)] {
            if !v.is_finite() {
                return fail(key, "must be finite");
            }
        }
        return MolecularModel::two_level(omega0, lam, mu).map_err(|e| within("molecule", e));
    }
    let energies = required(raw.energies.clone(), "molecule.energies")?;
    let m = energies.len();
    if raw.coupling_re.is_none() {
        return fail("molecule.coupling_re", "required");
    }
    let coupling = complex_matrix(&raw, m, "coupling")?;
    let dipole = complex_matrix(&raw, m, "dipole")?;
    MolecularModel::new(energies, coupling, dipole).map_err(|e| within("molecule", e))
}

fn cavity(raw: RawCavity, mode: Mode) -> Result<CavityMode> {
    let omega_c = required(raw.omega_c, "cavity.omega_c")?;
    let kappa = raw.kappa.unwrap_or(0.0);
    let c = CavityMode::new(omega_c, kappa).map_err(|e| within("cavity", e))?;
    if matches!(mode, Mode::Exact | Mode::Compare) && kappa != 0.0 {
        return fail("cavity.kappa", format!("must be 0 in mode {}: the exact solver is lossless", mode.name()));
    }
    Ok(c)
}

fn ensemble(raw: RawEnsemble, molecule: &MolecularModel, mode: Mode) -> Result<Ensemble> {
    let n_molecules = raw.n_molecules.unwrap_or(1);
    if n_molecules == 0 {
        return fail("ensemble.n_molecules", "must be >= 1");
    }
    let kind = raw.disorder.as_deref().unwrap_or("none");
    let unused = |key: &str, present: bool| -> Result<()> {
        if present {
            fail(&format!("ensemble.{key}"), format!("not used by disorder = \"{kind}\""))
        } else {
            Ok(())
        }
    };
    let sigma = |s: Option<f64>| -> Result<f64> {
        let s = required(s, "ensemble.sigma")?;
        if !(s > 0.0) || !s.is_finite() {
            return fail("ensemble.sigma", "must be > 0");
        }
        Ok(s)
    };
    let disorder = match kind {
        "none" => {
            unused("sigma", raw.sigma.is_some())?;
            unused("frequencies", raw.frequencies.is_some())?;
            unused("count", raw.count.is_some())?;
            Disorder::None
        }
        "gaussian" => {
            unused("frequencies", raw.frequencies.is_some())?;
            unused("count", raw.count.is_some())?;
            Disorder::Gaussian { sigma: sigma(raw.sigma)? }
        }
        "samples" => {
            unused("sigma", raw.sigma.is_some())?;
            unused("count", raw.count.is_some())?;
            let frequencies = required(raw.frequencies.clone(), "ensemble.frequencies")?;
            if frequencies.is_empty() {
                return fail("ensemble.frequencies", "at least one sample is required");
            }
            if let Some(k) = frequencies.iter().position(|w| !w.is_finite()) {
                return fail(&format!("ensemble.frequencies[{k}]"), "must be finite");
            }
            let n = frequencies.len();
            let weights = raw.weights.clone().unwrap_or_else(|| vec![1.0 / n as f64; n]);
            if weights.len() != n {
                return fail("ensemble.weights", format!("{} weights for {n} frequencies", weights.len()));
            }
            if let Some(k) = weights.iter().position(|w| !(*w >= 0.0)) {
                return fail(&format!("ensemble.weights[{k}]"), "must be >= 0");
            }
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > 1e-10 {
                return fail("ensemble.weights", format!("must sum to 1 (sum = {total})"));
            }
            Disorder::Samples { frequencies, weights }
        }
        "random" => {
            unused("frequencies", raw.frequencies.is_some())?;
            let count = required(raw.count, "ensemble.count")?;
            if count == 0 {
                return fail("ensemble.count", "must be >= 1");
            }
            Disorder::Random {
                sigma: sigma(raw.sigma)?,
                count,
            }
        }
        other => {
            return fail(
                "ensemble.disorder",
                format!("expected none, gaussian, samples or random, got `{other}`"),
            )
        }
    };
    if raw.weights.is_some() && kind != "samples" {
        return fail("ensemble.weights", format!("not used by disorder = \"{kind}\""));
    }
    if disorder != Disorder::None && mode != Mode::Spectrum {
        return fail(
            "ensemble.disorder",
            format!("mode {} takes no disorder (disorder-scan sets its own widths)", mode.name()),
        );
    }
    if let Some(g) = raw.gamma {
        if !(g > 0.0) || !g.is_finite() {
            return fail("ensemble.gamma", "must be > 0");
        }
    }
    let averaging = match raw.averaging.as_deref() {
        None | Some("closed-form") => Averaging::ClosedForm,
        Some("quadrature") => Averaging::Quadrature,
        Some(other) => {
            return fail(
                "ensemble.averaging",
                format!("expected `closed-form` or `quadrature`, got `{other}`"),
            )
        }
    };
    if molecule.levels() < 2 {
        return fail("molecule.energies", "at least two levels are required");
    }
    Ok(Ensemble {
        n_molecules,
        disorder,
        gamma: raw.gamma,
        averaging,
    })
}

fn parse_pulse(raw: RawPulse, section: &str) -> Result<DrivePulse> {
    let e0 = required(raw.e0, &format!("{section}.e0"))?;
    let omega = required(raw.omega, &format!("{section}.omega"))?;
    let t_center = required(raw.t_center, &format!("{section}.t_center"))?;
    let tau = required(raw.tau, &format!("{section}.tau"))?;
    DrivePulse::new(e0, omega, t_center, tau).map_err(|e| within(section, e))
}

fn time(raw: RawTime) -> Result<TimeSettings> {
    let t_start = raw.t_start.unwrap_or(0.0);
    let t_end = required(raw.t_end, "time.t_end")?;
    let dt = required(raw.dt, "time.dt")?;
    let max_steps = raw.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    let record_every = raw.record_every.unwrap_or(1);
    if record_every == 0 {
        return fail("time.record_every", "must be >= 1");
    }
    let grid = TimeGrid::with_max_steps(t_start, t_end, dt, max_steps).map_err(|e| within("time", e))?;
    Ok(TimeSettings { grid, record_every })
}

fn frequency(raw: RawFrequency, m: &MolecularModel, cavity: &CavityMode) -> Result<FrequencyGrid> {
    let lo = required(raw.omega_min, "frequency.omega_min")?;
    let hi = required(raw.omega_max, "frequency.omega_max")?;
    let n = required(raw.n_points, "frequency.n_points")?;
    let eta = raw.eta.unwrap_or_else(|| default_eta(m, cavity));
    FrequencyGrid::new(lo, hi, n, eta).map_err(|e| within("frequency", e))
}

fn exact(raw: RawExact, m: &MolecularModel, ensemble: &Ensemble, mode: Mode) -> Result<ExactSettings> {
    if m.levels() != 2 {
        return fail("molecule.energies", format!("mode {} needs a two-level molecule", mode.name()));
    }
    for (name, mat) in [("coupling", m.coupling()), ("dipole", m.dipole())] {
        if mat[(0, 0)].norm() != 0.0 || mat[(1, 1)].norm() != 0.0 {
            return fail(
                &format!("molecule.{name}_re"),
                format!("mode {} needs a purely off-diagonal {name}", mode.name()),
            );
        }
        if mat[(1, 0)].im != 0.0 {
            return fail(&format!("molecule.{name}_im"), format!("mode {} needs a real {name}", mode.name()));
        }
    }
    let n_max = required(raw.n_max, "exact.n_max")?;
    if n_max == 0 {
        return fail("exact.n_max", "must be >= 1");
    }
    let initial_excited = raw.initial_excited.unwrap_or(0);
    let initial_photons = raw.initial_photons.unwrap_or(0);
    if initial_excited > ensemble.n_molecules {
        return fail("exact.initial_excited", format!("must be <= ensemble.n_molecules = {}", ensemble.n_molecules));
    }
    if initial_photons > n_max {
        return fail("exact.initial_photons", format!("must be <= exact.n_max = {n_max}"));
    }
    if mode == Mode::Compare && (initial_excited != 0 || initial_photons != 0) {
        return fail("exact.initial_excited", "compare mode starts from the ground state");
    }
    Ok(ExactSettings {
        n_max,
        initial_excited,
        initial_photons,
    })
}

fn set_path(doc: &mut toml::Value, path: &str, v: toml::Value) -> Result<()> {
    let parts: Vec<&str> = path.split('.').collect();
    if parts.len() != 2 || parts.iter().any(|p| p.is_empty()) {
        return fail("sweep.parameter", format!("expected `section.key`, got `{path}`"));
    }
    if matches!(parts[0], "sweep" | "run") && matches!(parts[1], "mode" | "parameter" | "values") {
        return fail("sweep.parameter", format!("`{path}` cannot be swept"));
    }
    let table = doc.as_table_mut().expect("document root is a table");
    let section = table
        .entry(parts[0])
        .or_insert_with(|| toml::Value::Table(Default::default()));
    match section.as_table_mut() {
        Some(t) => {
            t.insert(parts[1].to_string(), v);
            Ok(())
        }
        None => fail("sweep.parameter", format!("`{}` is not a table", parts[0])),
    }
}

fn sweep_config(value: toml::Value, raw: RawConfig) -> Result<RunConfig> {
    let sweep = required(raw.sweep, "sweep")?;
    let parameter = required(sweep.parameter, "sweep.parameter")?;
    let values = required(sweep.values, "sweep.values")?;
    if values.is_empty() {
        return fail("sweep.values", "at least one value is required");
    }
    let inner_name = required(sweep.mode, "sweep.mode")?;
    let inner = match Mode::parse(&inner_name) {
        Some(Mode::Sweep) => return fail("sweep.mode", "sweeps cannot nest"),
        Some(m) => m,
        None => return fail("sweep.mode", format!("unknown mode `{inner_name}`")),
    };
    let mut base = value.clone();
    let root = base.as_table_mut().expect("document root is a table");
    root.remove("sweep");
    let run = root
        .entry("run")
        .or_insert_with(|| toml::Value::Table(Default::default()));
    if let Some(t) = run.as_table_mut() {
        t.insert("mode".into(), toml::Value::String(inner.name().into()));
    }
    let mut points = Vec::with_capacity(values.len());
    for (k, v) in values.into_iter().enumerate() {
        let mut doc = base.clone();
        set_path(&mut doc, &parameter, v.clone())?;
        let cfg = from_value(doc, Some(inner)).map_err(|e| ConfigError(format!("sweep.values[{k}]: {e}")))?;
        points.push((v, cfg));
    }
    let first = &points[0].1;
    Ok(RunConfig {
        mode: Mode::Sweep,
        sweep: Some(Sweep {
            parameter,
            points: points.clone(),
        }),
        source: value,
        ..first.clone()
    })
}
