use std::path::Path;
use std::process::{Command, Output};

const REFERENCE: &str = "\
[dimensionless]
eps1 = 0.005
mu = 0.008
nu = 0.05
eta = 7
delta = 0.1
";

fn run(verb: &str, config: &str, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_flexbar"))
        .arg(verb)
        .arg("--config")
        .arg(&cfg)
        .args(extra)
        .current_dir(dir.path())
        .output()
        .unwrap();
    (out, dir)
}

fn stdout(verb: &str, config: &str) -> String {
    let (out, _dir) = run(verb, config, &[]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header plus data rows, comment lines dropped.
fn table(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(t: &[Vec<String>], name: &str) -> Vec<String> {
    let i = t[0]
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    t[1..].iter().map(|r| r[i].clone()).collect()
}

fn floats(values: &[String]) -> Vec<f64> {
    values.iter().map(|v| v.parse().unwrap()).collect()
}

#[test]
fn spectrum_reports_first_two_modes() {
    let csv = stdout("spectrum", &format!("{REFERENCE}[run]\nmodes = 2\n"));
    assert!(csv.starts_with("# flexbar spectrum\n"));
    assert!(csv.contains("# eta = 7\n"));
    assert!(!csv.contains('\r'));
    let t = table(&csv);
    assert_eq!(
        t[0].join(","),
        "index,omega_conservative,q_asymptotic,omega_asymptotic,q_numeric,omega_numeric,delta"
    );
    let conservative = floats(&column(&t, "omega_conservative"));
    let numeric = floats(&column(&t, "omega_numeric"));
    assert!(
        (conservative[0] - 0.3534042288).abs() < 1e-6
            && (conservative[1] - 2.904816694).abs() < 1e-6
    );
    assert!((numeric[0] - 0.3534042288).abs() < 1e-3 && (numeric[1] - 2.904816694).abs() < 1e-3);
}

#[test]
fn spectrum_conservative_limit_has_zero_growth() {
    let cfg = "[dimensionless]\neps1 = 0\nmu = 0\nnu = 0\neta = 7\ndelta = 0.1\n[run]\nmodes = 3\n";
    let t = table(&stdout("spectrum", cfg));
    for q in floats(&column(&t, "q_numeric")) {
        assert!(q.abs() < 1e-6, "{q}");
    }
}

#[test]
fn zero_modes_gives_header_only() {
    let t = table(&stdout(
        "spectrum",
        &format!("{REFERENCE}[run]\nmodes = 0\n"),
    ));
    assert_eq!(t.len(), 1);
}

#[test]
fn stability_map() {
    let cfg = format!("{REFERENCE}[run]\nmodes = 2\nnu_values = 0, 0.0285714286, 0.05, 0.1\n");
    let t = table(&stdout("stability", &cfg));
    assert_eq!(
        t[0].join(","),
        "nu,omega_boundary,nu_crit_1,excited_1,nu_crit_2,excited_2"
    );
    let boundary = column(&t, "omega_boundary");
    assert_eq!(boundary[0], "NA");
    assert!(
        boundary[1].parse::<f64>().unwrap() < 1e-3,
        "{}",
        boundary[1]
    );
    let crit = column(&t, "nu_crit_1")[0].parse::<f64>().unwrap();
    assert!((crit - 0.0529760481).abs() < 1e-4);
    assert!(column(&t, "nu_crit_2").iter().all(|v| v == "never_excited"));
    assert_eq!(column(&t, "excited_1"), ["false", "false", "false", "true"]);
}

#[test]
fn sweep_growth_rates() {
    let t = table(&stdout("sweep", REFERENCE));
    assert_eq!(
        t[0].join(","),
        "nu,q_1,omega_1,converged_1,q_2,omega_2,converged_2"
    );
    assert_eq!(t.len(), 22);
    let nu = floats(&column(&t, "nu"));
    let q1 = floats(&column(&t, "q_1"));
    let flip = q1
        .windows(2)
        .position(|w| w[0] < 0.0 && w[1] >= 0.0)
        .unwrap();
    assert!((nu[flip] - 0.05).abs() < 1e-12 && (nu[flip + 1] - 0.055).abs() < 1e-12);
    assert!(floats(&column(&t, "q_2")).iter().all(|&q| q < 0.0));
    let w1 = floats(&column(&t, "omega_1"));
    let spread = w1.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - w1.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 1e-3);
    assert!(column(&t, "converged_1").iter().all(|c| c == "true"));
}

#[test]
fn modeshape_grid_and_clamped_end() {
    let cfg = "[dimensionless]\neps1 = 0\nmu = 0\nnu = 0\neta = 7\ndelta = 0.1\n[run]\nmode = 1\ngrid = 11\n";
    let t = table(&stdout("modeshape", cfg));
    assert_eq!(t[0].join(","), "x,u1,u2");
    assert_eq!(t.len(), 12);
    assert_eq!(t[1], ["0", "0", "0"]);
    let w = 0.3534042287528503f64;
    for row in &t[1..] {
        let x: f64 = row[0].parse().unwrap();
        let (u1, u2): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        assert!((u1 - (w * x).sin() / w.sin()).abs() < 1e-6, "x={x}: {u1}");
        assert!(u2.abs() < 1e-6);
    }
}

#[test]
fn physical_block_is_echoed() {
    let cfg = "[physical]\nrho = 1\nS = 1\nE = 1\nbeta = 0.005\nb = 0.008\nc = 10\nd = 0.05\nm = 7\nl = 1\n[run]\nmodes = 1\n";
    let csv = stdout("spectrum", cfg);
    assert!(csv.contains("# physical.c = 10\n"));
    assert!(csv.contains("# delta = 0.1\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = format!("{REFERENCE}[run]\nnu_values = 0, 0.05, 0.1\n");
    let (first, dir) = run("sweep", &cfg, &["--out", "a.csv"]);
    assert!(first.status.success());
    let (second, _) = run(
        "sweep",
        &cfg,
        &["--out", dir.path().join("b.csv").to_str().unwrap()],
    );
    assert!(second.status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn output_path_from_config() {
    let (out, dir) = run(
        "stability",
        &format!("{REFERENCE}[run]\noutput = map.csv\n"),
        &[],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(Path::new(&dir.path().join("map.csv")).exists());
}

#[test]
fn run_verb_uses_configured_analysis() {
    let csv = stdout(
        "run",
        &format!("{REFERENCE}[run]\nanalysis = stability\nnu_values = 0.01\n"),
    );
    assert!(csv.starts_with("# flexbar stability\n"));
    let (out, _dir) = run("run", REFERENCE, &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_with_two() {
    for cfg in [
        "[run]\nmodes = 2\n".to_string(),
        format!("{REFERENCE}[run]\nbogus = 1\n"),
        format!("{REFERENCE}[run]\nnu_values = 0.1, 0.05\n"),
        REFERENCE.replace("eta = 7", "eta = -1"),
    ] {
        let (out, _dir) = run("spectrum", &cfg, &[]);
        assert_eq!(out.status.code(), Some(2), "{cfg}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn smallness_warning_goes_to_stderr() {
    let (out, _dir) = run(
        "stability",
        &REFERENCE.replace("eps1 = 0.005", "eps1 = 0.5"),
        &[],
    );
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn strict_mode_fails_on_non_convergence() {
    // The first-mode seed is already accurate enough; the second needs real iterations.
    let cfg = format!("{REFERENCE}[run]\nmodes = 2\nmax_iterations = 1\n");
    let (lenient, _a) = run("spectrum", &cfg, &[]);
    assert!(lenient.status.success());
    assert!(String::from_utf8_lossy(&lenient.stdout).contains(",NA,NA,"));
    let (strict, _b) = run("spectrum", &cfg, &["--strict"]);
    assert_eq!(strict.status.code(), Some(3));
}
