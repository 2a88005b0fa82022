//! Black-box tests of the sweep binary: output formats, determinism,
//! settings precedence and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn sweep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweep"))
        .args(args)
        .output()
        .expect("spawn sweep")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const HEADER: &str = "omega_over_omegaT,eps_re,eps_im,eta,kappa,gamma_gl_exact,\
                      gamma_gl_expanded,gamma_cm_total,gamma_cm_perp,gamma_cm_par,\
                      baseline_gl,baseline_cm,markov_flag";

fn header() -> String {
    HEADER.split_whitespace().collect()
}

#[test]
fn preset_runs_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");

    let run1 = sweep(&["--preset", "fig1", "--out", a.to_str().unwrap()]);
    let run2 = sweep(&["--preset", "fig1", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&run1), 0, "{}", stderr(&run1));
    assert_eq!(code(&run2), 0);
    // every fig1 node sits inside the flat-reservoir window
    assert!(stderr(&run1).is_empty(), "{}", stderr(&run1));

    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "repeated runs must be byte-identical");

    let text = String::from_utf8(bytes_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), header());
    assert_eq!(lines.count(), 600);

    // stdout emission carries the same bytes as the file
    let piped = sweep(&["--preset", "fig1"]);
    assert_eq!(code(&piped), 0);
    assert_eq!(stdout(&piped), text);
}

#[test]
fn large_cavity_preset_warns_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig5.csv");
    let run = sweep(&["--preset", "fig5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&run), 0);
    let note = stderr(&run);
    assert!(
        note.contains("600 of 600 rows"),
        "expected a transit-time note, got: {note}"
    );
    assert!(out.exists());
}

#[test]
fn json_mirrors_csv() {
    let csv_run = sweep(&["--preset", "fig2"]);
    let json_run = sweep(&["--preset", "fig2", "--json"]);
    assert_eq!(code(&csv_run), 0);
    assert_eq!(code(&json_run), 0);

    let rows: serde_json::Value = serde_json::from_str(&stdout(&json_run)).unwrap();
    let rows = rows.as_array().expect("top-level array");
    assert_eq!(rows.len(), 600);

    let csv_text = stdout(&csv_run);
    let first_csv: Vec<&str> = csv_text.lines().nth(1).unwrap().split(',').collect();
    let first = &rows[0];
    for (i, key) in header().split(',').enumerate() {
        let got = first.get(key).unwrap_or_else(|| panic!("missing key {key}"));
        if key == "markov_flag" {
            assert_eq!(got.as_str().unwrap(), first_csv[i]);
        } else {
            let want: f64 = first_csv[i].parse().unwrap();
            let got = got.as_f64().unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "{key}: json {got} vs csv {want}"
            );
        }
    }
}

#[test]
fn plot_script_reflects_preset_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("far.csv");
    let gp = dir.path().join("far.gp");
    let run = sweep(&[
        "--preset",
        "fig2",
        "--out",
        csv.to_str().unwrap(),
        "--plot-script",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains("\"far.csv\" using 1:6"), "{script}");
    assert!(script.contains("using 1:8"));
    assert!(script.contains("using 1:9"));
    assert!(script.contains("using 1:11 skip 1 with lines dashtype \"--\" title \"baseline_gl\""));

    // the near-band preset plots no baseline series
    let csv1 = dir.path().join("near.csv");
    let gp1 = dir.path().join("near.gp");
    let run1 = sweep(&[
        "--preset",
        "fig1",
        "--out",
        csv1.to_str().unwrap(),
        "--plot-script",
        gp1.to_str().unwrap(),
    ]);
    assert_eq!(code(&run1), 0);
    let script1 = std::fs::read_to_string(&gp1).unwrap();
    assert!(!script1.contains("1:11"), "{script1}");
    assert!(script1.contains("\"near.csv\" using 1:6"));
}

#[test]
fn usage_errors_exit_1() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["--no-such-flag"],
        vec!["--preset", "fig9"],
        vec!["--model", "bogus", "--count", "3"],
        vec!["--plot-script", "x.gp"], // needs --out
        vec!["--json", "--out", "x.csv", "--plot-script", "x.gp"],
        vec!["--model", "tabulated", "--count", "3"], // needs --table
    ];
    for args in cases {
        let run = sweep(&args);
        assert_eq!(code(&run), 1, "args {args:?}: {}", stderr(&run));
        assert!(!stderr(&run).is_empty());
    }

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "[grid]\nnodes = 5\n").unwrap();
    let run = sweep(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&run), 1);
    assert!(stderr(&run).contains("grid.nodes"), "{}", stderr(&run));
}

#[test]
fn help_and_version_exit_0() {
    let help = sweep(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("--preset"));
    let version = sweep(&["--version"]);
    assert_eq!(code(&version), 0);
}

fn write_table(path: &Path) {
    let mut text = String::from("omega,eps_re,eps_im\n");
    for i in 0..7 {
        let omega = 0.5 + 0.05 * i as f64;
        text.push_str(&format!("{omega},2.0,0.1\n"));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn numerical_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    write_table(&table);
    // the grid starts below the tabulated range
    let run = sweep(&[
        "--model",
        "tabulated",
        "--table",
        table.to_str().unwrap(),
        "--omega-start",
        "0.2",
        "--omega-stop",
        "0.8",
        "--count",
        "7",
    ]);
    assert_eq!(code(&run), 2, "{}", stderr(&run));
    assert!(stderr(&run).contains("omega"), "{}", stderr(&run));

    // inside the range the same table sweeps fine
    let ok = sweep(&[
        "--model",
        "tabulated",
        "--table",
        table.to_str().unwrap(),
        "--omega-start",
        "0.55",
        "--omega-stop",
        "0.75",
        "--count",
        "5",
    ]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
}

#[test]
fn io_failures_exit_3() {
    let missing_config = sweep(&["--config", "/no/such/dir/conf.cfg"]);
    assert_eq!(code(&missing_config), 3, "{}", stderr(&missing_config));

    let unwritable = sweep(&["--preset", "fig1", "--out", "/no/such/dir/out.csv"]);
    assert_eq!(code(&unwritable), 3, "{}", stderr(&unwritable));

    let missing_table = sweep(&["--model", "tabulated", "--table", "/no/such/table.csv"]);
    assert_eq!(code(&missing_table), 3, "{}", stderr(&missing_table));
}

#[test]
fn settings_precedence_defaults_config_flags_preset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "[model]\nkind = constant\neps_re = 2.25\n\n[grid]\ncount = 5\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();

    // config over defaults: 5 rows of a constant-permittivity sweep
    let base = sweep(&["--config", cfg]);
    assert_eq!(code(&base), 0, "{}", stderr(&base));
    let text = stdout(&base);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    let eta: f64 = rows[0].split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(eta, 1.5); // sqrt(2.25)

    // flags over config
    let flagged = sweep(&["--config", cfg, "--count", "7", "--eps-re", "4.0"]);
    assert_eq!(code(&flagged), 0);
    let text = stdout(&flagged);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    let eta: f64 = rows[0].split(',').nth(3).unwrap().parse().unwrap();
    assert_eq!(eta, 2.0);

    // preset over both
    let preset = sweep(&["--config", cfg, "--count", "7", "--preset", "fig1"]);
    assert_eq!(code(&preset), 0);
    assert_eq!(stdout(&preset).lines().count(), 601);
}
