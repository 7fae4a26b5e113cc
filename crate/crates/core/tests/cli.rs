//! End-to-end checks of the `dynalg` binary: preset reproduction, summary
//! and classify line formats, IDF output, `--set`/`--sweep` handling, CSV
//! determinism and round-tripping, and the exit-code contract (0 success,
//! 2 config error; the numerical-drift exit is covered at unit level since
//! the spectral propagator cannot drift on honest inputs).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dynalg"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dynalg-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

/// Value of a `key=value` field in a summary line.
fn field<'a>(line: &'a str, key: &str) -> &'a str {
    let pat = format!("{key}=");
    let start = line
        .find(&pat)
        .unwrap_or_else(|| panic!("no `{key}=` in `{line}`"))
        + pat.len();
    line[start..].split_whitespace().next().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'), "CSV must use LF endings");
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn reproduce_fig1_end_to_end() {
    let dir = scratch("fig1");
    let start = Instant::now();
    let stdout = run_ok(bin().args(["reproduce", "fig1", "--outdir"]).arg(&dir));
    assert!(start.elapsed().as_secs_f64() < 10.0);

    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3, "two run lines plus the svg line: {stdout}");
    assert!(lines[0].starts_with("run=full "));
    assert!(lines[1].starts_with("run=dotted "));
    assert_eq!(field(lines[0], "verdict"), "Nonintegrable");
    assert_eq!(field(lines[0], "reason"), "none");
    assert_eq!(field(lines[1], "verdict"), "Integrable");
    assert_eq!(field(lines[1], "reason"), "LinearInGenerators");
    for line in &lines[..2] {
        assert_eq!(field(line, "idf"), "1");
        let dm: f64 = field(line, "delta_min").parse().unwrap();
        assert!((dm - 3.0).abs() < 1e-9, "delta_min = {dm}");
    }
    assert!(field(lines[0], "max_delta").parse::<f64>().unwrap() > 4.0);
    assert!((field(lines[1], "max_delta").parse::<f64>().unwrap() - 3.0).abs() < 1e-8);

    let svg_path = PathBuf::from(field(lines[2], "svg"));
    assert_eq!(svg_path, dir.join("fig1.svg"));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.contains("<svg") && svg.contains("polyline"));

    let (header, rows) = read_csv(&PathBuf::from(field(lines[0], "csv")));
    assert_eq!(header, "t,delta,energy,norm_error");
    assert_eq!(rows.len(), 2001);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(*rows.last().unwrap().first().unwrap(), 20.0);
    assert!(fs::metadata(dir.join("fig1-dotted.csv")).is_ok());
}

#[test]
fn reproduce_fig2_and_fig3_verdicts() {
    let dir = scratch("fig23");
    for (figure, idf, full_delta, dotted_delta) in
        [("fig2", "2", 1.1_f64, 1.0_f64), ("fig3", "2", 4.5, 4.0)]
    {
        let start = Instant::now();
        let stdout = run_ok(bin().args(["reproduce", figure, "--outdir"]).arg(&dir));
        assert!(start.elapsed().as_secs_f64() < 10.0, "{figure} took too long");
        let lines: Vec<&str> = stdout.lines().collect();
        assert_eq!(field(lines[0], "verdict"), "Nonintegrable");
        assert_eq!(field(lines[1], "verdict"), "Integrable");
        assert_eq!(field(lines[1], "reason"), "ChainSymmetry");
        for line in &lines[..2] {
            assert_eq!(field(line, "idf"), idf);
        }
        assert!(field(lines[0], "max_delta").parse::<f64>().unwrap() > full_delta);
        let dotted_max = field(lines[1], "max_delta").parse::<f64>().unwrap();
        assert!((dotted_max - dotted_delta).abs() < 1e-8, "{figure}: {dotted_max}");
    }

    // The dotted fig2 delta column is the constant Δ_min = 1.
    let (_, rows) = read_csv(&dir.join("fig2-dotted.csv"));
    for row in &rows {
        assert!((row[1] - 1.0).abs() < 1e-8, "Δ({}) = {}", row[0], row[1]);
    }
}

#[test]
fn simulate_writes_deterministic_round_trip_csv() {
    let dir = scratch("determinism");
    let csv = dir.join("run.csv");
    let config = write_config(
        &dir,
        "config.json",
        &format!(
            r#"{{"model":"single-spin","j":3,"mu":1,"theta":2.0,"t_max":5,"dt":0.01,"csv":"{}"}}"#,
            csv.display()
        ),
    );

    let stdout = run_ok(bin().arg("simulate").arg(&config));
    let first = fs::read(&csv).unwrap();
    let line = stdout.lines().next().unwrap();
    assert!(line.starts_with("run=run "));
    assert_eq!(field(line, "csv"), csv.display().to_string());

    // Identical config → byte-identical CSV.
    run_ok(bin().arg("simulate").arg(&config));
    let second = fs::read(&csv).unwrap();
    assert_eq!(first, second);

    // Shortest round-trip formatting: the parsed column reproduces the
    // summary's max Δ exactly, and recorded invariants hold on re-parse.
    let (header, rows) = read_csv(&csv);
    assert_eq!(header, "t,delta,energy,norm_error");
    let max_delta: f64 = field(line, "max_delta").parse().unwrap();
    let column_max = rows.iter().map(|r| r[1]).fold(f64::NAN, f64::max);
    assert_eq!(max_delta, column_max);
    let e0 = rows[0][2];
    for row in &rows {
        assert!(row[3] < 1e-9, "norm error {} at t = {}", row[3], row[0]);
        assert!(((row[2] - e0) / e0.abs().max(1.0)).abs() < 1e-8);
    }

    // No svg requested → no svg line.
    assert!(!stdout.contains("svg="));
}

#[test]
fn classify_line_formats() {
    let dir = scratch("classify");
    let custom = write_config(
        &dir,
        "collective.json",
        r#"{"model":"coupled-spins","j1":0.5,"j2":0.5,"mu":1,"chain":"su2-collective-x"}"#,
    );
    let stdout = run_ok(bin().arg("classify").arg(&custom));
    assert_eq!(stdout.trim(), "verdict=Integrable reason=ChainSymmetry residual=0e0");

    let preset = write_config(&dir, "fig1.json", r#"{"experiment":"fig1"}"#);
    let stdout = run_ok(bin().arg("classify").arg(&preset));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("run=full verdict=Nonintegrable reason=none residual="));
    assert!(lines[1].starts_with("run=dotted verdict=Integrable reason=LinearInGenerators"));
}

#[test]
fn idf_prints_bare_integers() {
    let dir = scratch("idf");
    let su2 = write_config(&dir, "su2.json", r#"{"irrep":"su2","j":3}"#);
    assert_eq!(run_ok(bin().arg("idf").arg(&su2)).trim(), "1");

    let u5 = write_config(&dir, "u5.json", r#"{"irrep":"uN-fundamental","n_modes":5}"#);
    assert_eq!(run_ok(bin().arg("idf").arg(&u5)).trim(), "4");

    let fermion = write_config(
        &dir,
        "fermion.json",
        r#"{"irrep":"uN-fermion","n_modes":4,"n_particles":2}"#,
    );
    assert_eq!(run_ok(bin().arg("idf").arg(&fermion)).trim(), "3");

    let preset = write_config(&dir, "fig2.json", r#"{"experiment":"fig2"}"#);
    let stdout = run_ok(bin().arg("idf").arg(&preset));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines, vec!["run=full idf=2", "run=dotted idf=2"]);
}

#[test]
fn set_overrides_and_sweep_replication() {
    let dir = scratch("set-sweep");
    let csv = dir.join("out.csv");
    let config = write_config(
        &dir,
        "config.json",
        &format!(
            r#"{{"model":"single-spin","j":3,"mu":1,"theta":2.0,"t_max":2,"dt":0.01,"csv":"{}"}}"#,
            csv.display()
        ),
    );

    // --set pins μ back to the free case: Δ stays at the minimum.
    let stdout = run_ok(bin().arg("simulate").arg(&config).args(["--set", "mu=0"]));
    let line = stdout.lines().next().unwrap();
    assert_eq!(field(line, "verdict"), "Integrable");
    assert!((field(line, "max_delta").parse::<f64>().unwrap() - 3.0).abs() < 1e-8);

    // --sweep replicates the run once per μ with suffixed outputs.
    let stdout = run_ok(bin().arg("simulate").arg(&config).args(["--sweep", "0,1"]));
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines[0].starts_with("run=run-mu0 "));
    assert!(lines[1].starts_with("run=run-mu1 "));
    assert_eq!(field(lines[0], "verdict"), "Integrable");
    assert_eq!(field(lines[1], "verdict"), "Nonintegrable");
    assert!(fs::metadata(dir.join("out-run-mu0.csv")).is_ok());
    assert!(fs::metadata(dir.join("out-run-mu1.csv")).is_ok());
}

#[test]
fn svg_is_written_when_requested() {
    let dir = scratch("svg");
    let svg = dir.join("plot.svg");
    let config = write_config(
        &dir,
        "config.json",
        &format!(
            r#"{{"model":"coupled-spins","j1":0.5,"j2":0.5,"mu":0.5,"theta":2.0,"t_max":5,"dt":0.01,"svg":"{}"}}"#,
            svg.display()
        ),
    );
    let stdout = run_ok(bin().arg("simulate").arg(&config));
    assert!(stdout.lines().any(|l| l == format!("svg={}", svg.display())));
    let body = fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg"));
    assert!(body.contains("polyline"));
    assert!(body.contains("Δ(t)"));
}

#[test]
fn config_errors_exit_two() {
    let dir = scratch("errors");

    let missing = bin().arg("simulate").arg(dir.join("nope.json")).output().unwrap();
    assert_eq!(exit_code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));

    let bad_json = write_config(&dir, "bad.json", "{not json");
    let out = bin().arg("simulate").arg(&bad_json).output().unwrap();
    assert_eq!(exit_code(&out), 2);

    let unknown_field = write_config(&dir, "unknown.json", r#"{"experiment":"fig1","bogus":1}"#);
    let out = bin().arg("classify").arg(&unknown_field).output().unwrap();
    assert_eq!(exit_code(&out), 2);

    let bad_model = write_config(&dir, "model.json", r#"{"model":"nope"}"#);
    let out = bin().arg("classify").arg(&bad_model).output().unwrap();
    assert_eq!(exit_code(&out), 2);

    let ok = write_config(&dir, "ok.json", r#"{"irrep":"su2","j":3}"#);
    let out = bin().arg("idf").arg(&ok).args(["--set", "garbage"]).output().unwrap();
    assert_eq!(exit_code(&out), 2);

    let bad_dt = write_config(
        &dir,
        "dt.json",
        r#"{"model":"single-spin","j":3,"theta":2.0,"dt":-0.01}"#,
    );
    let out = bin().arg("simulate").arg(&bad_dt).output().unwrap();
    assert_eq!(exit_code(&out), 2);

    let bad_figure = bin().args(["reproduce", "fig9"]).output().unwrap();
    assert_eq!(exit_code(&bad_figure), 2);

    let usage = bin().output().unwrap();
    assert_eq!(exit_code(&usage), 2);
}
