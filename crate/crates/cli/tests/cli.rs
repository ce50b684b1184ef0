use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TWO_LEVEL: &str = r#"
[molecule]
omega0 = 1.0
lambda = 0.1

[cavity]
omega_c = 1.0
"#;

const COMPARE: &str = r#"
[ensemble]
n_molecules = 8

[pulse]
e0 = 0.01
omega = 1.0
t_center = 40.0
tau = 10.0

[time]
t_end = 120.0
dt = 0.01
record_every = 10

[exact]
n_max = 4
"#;

const SPECTRUM: &str = r#"
[frequency]
omega_min = 0.6
omega_max = 1.4
n_points = 4001
"#;

fn polariton(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("config.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_polariton"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn clean_spectrum_peaks_are_split_by_twice_the_coupling() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{TWO_LEVEL}kappa = 0.005\n{SPECTRUM}");
    let o = polariton(dir.path(), &cfg, &["spectrum"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let peaks = fs::read_to_string(dir.path().join("out/spectrum_peaks.csv")).unwrap();
    let rows = data_rows(&peaks);
    assert_eq!(rows.len(), 2);
    let w: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(((w[0] - w[1]).abs() - 0.2).abs() < 1e-4, "{w:?}");
    let split = peaks.lines().find_map(|l| l.strip_prefix("# splitting: ")).unwrap();
    assert!((split.parse::<f64>().unwrap() - 0.2).abs() < 1e-4);

    let spectrum = fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    let header = spectrum.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "omega,re_pi,im_pi,re_f,im_f,a,t");
    assert_eq!(data_rows(&spectrum).len(), 4001);
    assert!(spectrum.contains("# config_sha256: "));
}

#[test]
fn compare_mode_reports_small_meanfield_deviation() {
    let dir = TempDir::new().unwrap();
    let o = polariton(dir.path(), &format!("{TWO_LEVEL}{COMPARE}"), &["compare"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.starts_with("compare: max_abs_dev="), "{stdout}");
    let summary = fs::read_to_string(dir.path().join("out/compare_summary.csv")).unwrap();
    let row = &data_rows(&summary)[0];
    let (dev, pe): (f64, f64) = (row[0].parse().unwrap(), row[2].parse().unwrap());
    let bare: f64 = row[3].parse().unwrap();
    assert!(dev <= 0.02 * pe, "{dev} vs {pe}");
    assert!(bare > 10.0 * dev);
    assert_eq!(row[5], "true");
    let joined = fs::read_to_string(dir.path().join("out/compare.csv")).unwrap();
    assert_eq!(data_rows(&joined).len(), 1201);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(
        "{TWO_LEVEL}kappa = 0.01\n[pulse]\ne0 = 0.02\nomega = 1.0\nt_center = 10.0\ntau = 3.0\n[time]\nt_end = 30.0\ndt = 0.01\n[run]\nmode = \"dynamics\"\nbackend = \"memory\"\n"
    );
    let first = polariton(dir.path(), &cfg, &["run"]);
    assert!(first.status.success(), "{}", stderr(&first));
    let a = fs::read(dir.path().join("out/dynamics.csv")).unwrap();
    let second = polariton(dir.path(), &cfg, &["run"]);
    assert!(second.status.success());
    assert_eq!(a, fs::read(dir.path().join("out/dynamics.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\nt,pop_0,pop_1,re_tr_lambda_rho,q,p,field_energy\n"));
}

#[test]
fn sweep_output_does_not_depend_on_thread_count() {
    let cfg = format!(
        "{TWO_LEVEL}{SPECTRUM}[sweep]\nmode = \"spectrum\"\nparameter = \"cavity.kappa\"\nvalues = [0.002, 0.005, 0.01, 0.02]\n"
    );
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let dir = TempDir::new().unwrap();
        let o = polariton(dir.path(), &cfg, &["sweep", "--threads", threads]);
        assert!(o.status.success(), "{}", stderr(&o));
        let index = fs::read_to_string(dir.path().join("out/index.csv")).unwrap();
        let rows = data_rows(&index);
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r[3] == "0"));
        let mut files = vec![index];
        for k in 0..4 {
            files.push(fs::read_to_string(dir.path().join(format!("out/point_{k:03}/spectrum.csv"))).unwrap());
        }
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn random_disorder_is_reproducible_from_the_seed() {
    let cfg = format!("{TWO_LEVEL}kappa = 0.005\n{SPECTRUM}[ensemble]\ndisorder = \"random\"\nsigma = 0.05\ncount = 200\ngamma = 0.005\n");
    let run = |seed: &str| {
        let dir = TempDir::new().unwrap();
        let o = polariton(dir.path(), &cfg, &["spectrum", "--seed", seed]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap()
    };
    let (a, b, c) = (run("7"), run("7"), run("8"));
    assert_eq!(a, b);
    assert_ne!(data_rows(&a), data_rows(&c));
    assert!(a.contains("# seed: 7\n"));
}

#[test]
fn validation_failures_exit_with_code_one() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{TWO_LEVEL}kappa = -0.1\n{SPECTRUM}");
    let o = polariton(dir.path(), &cfg, &["spectrum"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cavity.kappa"), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());

    let o = polariton(dir.path(), &format!("{TWO_LEVEL}{SPECTRUM}bogus = 1\n"), &["spectrum"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"));

    let o = polariton(dir.path(), &format!("{TWO_LEVEL}{SPECTRUM}"), &["run"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("run.mode: required"));
}

#[test]
fn invariant_violations_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(
        "{TWO_LEVEL}[pulse]\ne0 = 0.5\nomega = 1.0\nt_center = 10.0\ntau = 3.0\n[time]\nt_end = 30.0\ndt = 0.5\n"
    );
    let o = polariton(dir.path(), &cfg, &["dynamics"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("invariant"));
}

#[test]
fn truncation_unsafe_exact_runs_exit_with_code_three() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{TWO_LEVEL}{COMPARE}").replace("e0 = 0.01", "e0 = 0.2").replace("n_max = 4", "n_max = 1");
    let o = polariton(dir.path(), &cfg, &["exact"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/exact.csv")).unwrap();
    assert!(text.contains("# truncation_safe: false"));
    assert!(text.contains("\nt,p_e,n_photon,norm,n_ex\n"));
}

#[test]
fn disorder_scan_reproduces_the_nonmonotonic_splitting() {
    let dir = TempDir::new().unwrap();
    let cfg = format!(
        "{TWO_LEVEL}kappa = 0.005\n[frequency]\nomega_min = 0.5\nomega_max = 1.5\nn_points = 20001\n[ensemble]\ngamma = 1e-6\n[scan]\nsigma_over_lambda = [0.1, 0.3, 0.7, 1.2, 5.0]\n"
    );
    let o = polariton(dir.path(), &cfg, &["disorder-scan"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = data_rows(&fs::read_to_string(dir.path().join("out/disorder_scan_peaks.csv")).unwrap());
    let split: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(split[1] > split[0] && split[2] > split[1] && split[3] < split[2], "{split:?}");
    assert!(split[4].is_nan());
    assert!(dir.path().join("out/disorder_scan_004.csv").exists());
}
