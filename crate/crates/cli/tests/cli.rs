use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const DIELECTRIC: &str = "\
[medium]
model = em_split
electric_c0 = 0.3
electric_omega0 = 1.0
electric_gamma = 0.1
magnetic_c0 = 0
magnetic_omega0 = 1.0
magnetic_gamma = 0.1
";

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.cfg");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_covar-medium"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .env_remove("COVAR_MEDIUM_THREADS")
        .output()
        .unwrap()
}

fn table(dir: &Path, name: &str) -> Vec<Vec<String>> {
    let text = fs::read_to_string(dir.join("out").join(name)).unwrap();
    assert!(!text.contains('\r'));
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

#[test]
fn vacuum_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "[medium]\nmodel = vacuum\n", &["verify", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.path().join("out/verify.txt")).unwrap();
    assert!(report.contains("chi identically zero: yes"));
    assert!(report.contains("overall: PASS"));
    assert_eq!(report.matches("PASS ").count(), 5);
}

#[test]
fn vacuum_dispersion_is_light_cone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[medium]\nmodel = vacuum\n[sweep]\nq4 = 0.2 2.0 4\ndirections = 0 0 1; 1 1 0; 0.3 -0.4 0.5\nwindow = 0.5 1.5 -0.2 0.2\n";
    let out = run(dir.path(), cfg, &["dispersion"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(dir.path(), "dispersion.csv");
    assert_eq!(rows.len(), 12);
    for r in &rows {
        assert!((field(r, 4) - 1.0).abs() < 1e-10 && field(r, 5).abs() < 1e-10);
        let d = [field(r, 0), field(r, 1), field(r, 2)];
        assert!((d.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn boost_scan_follows_velocity_addition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{DIELECTRIC}[sweep]\nq4 = 0.5 0.5 1\nspeeds = 0 0.1 0.2\n");
    let out = run(dir.path(), &cfg, &["boost-scan"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = table(dir.path(), "boost_scan.csv");
    assert_eq!(rows.len(), 3);
    let n0 = field(&rows[0], 4);
    for r in &rows {
        let v = field(r, 2);
        let u = (1.0 / n0 + v) / (1.0 + v / n0);
        assert!(((1.0 / field(r, 4) - u) / u).abs() < 1e-6, "v = {v}");
        assert!((field(r, 4) - field(r, 6)).abs() < 1e-6);
    }
}

#[test]
fn chi_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{DIELECTRIC}[boost]\nv = 0.2 0 0\n[sweep]\nq4 = 0.5 1.5 5\nk = 0.3\n");
    assert_eq!(run(dir.path(), &cfg, &["chi", "--threads", "3"]).status.code(), Some(0));
    let first = fs::read(dir.path().join("out/chi.csv")).unwrap();
    assert_eq!(run(dir.path(), &cfg, &["chi", "--threads", "1"]).status.code(), Some(0));
    let second = fs::read(dir.path().join("out/chi.csv")).unwrap();
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 * 36);
    assert_eq!(text.lines().next().unwrap(), "q4,pair_i,pair_j,re,im");
    assert!(text.lines().nth(1).unwrap().starts_with("5.0000000000000000e-1,0,0,"));
}

#[test]
fn green_tables_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[medium]\nmodel = vacuum\n[sweep]\ngreen_omega = 0 1.5\ntimes = 1 2 3\nradii = 0 3 4\n";
    let out = run(dir.path(), cfg, &["green"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = table(dir.path(), "green_position.csv");
    assert_eq!(rows.len(), 2 * 3 * 4);
    // massless rows and points outside the cone carry no tail
    for r in &rows {
        if field(r, 0) == 0.0 || field(r, 2) >= field(r, 1) {
            assert_eq!(field(r, 3), 0.0);
        }
    }
    assert_eq!(table(dir.path(), "green_time.csv").len(), 2 * 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // config error with a line number
    let out = run(dir.path(), "[medium]\nmodel = vacuum\ncolour = red\n", &["chi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = run(dir.path(), "[boost]\nv = 0.3 0 0\n", &["chi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing section: medium"));
    // window across the branch cut
    let cfg = format!("{DIELECTRIC}[sweep]\nwindow = 0.5 1.5 -0.1 0.1\n");
    assert_eq!(run(dir.path(), &cfg, &["dispersion"]).status.code(), Some(3));
    // an unreachable commutator tolerance fails verification
    let lorentzian = "[medium]\nmodel = isotropic_lorentzian\nc0 = 0.1\nomega0 = 1\ngamma = 0.1\n";
    let out = run(dir.path(), lorentzian, &["verify", "--tolerance", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("commutator"));
    let report = fs::read_to_string(dir.path().join("out/verify.txt")).unwrap();
    assert!(report.contains("FAIL commutator") && report.contains("overall: FAIL"));
}

#[test]
fn lorentzian_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let lorentzian = "[medium]\nmodel = isotropic_lorentzian\nc0 = 0.1\nomega0 = 1\ngamma = 0.1\n[boost]\nv = 0 0.2 0\n";
    let out = run(dir.path(), lorentzian, &["verify", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.path().join("out/verify.txt")).unwrap();
    assert!(report.contains("chi identically zero: no"));
}
