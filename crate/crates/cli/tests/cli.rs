use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use coopmetro_core::scenarios::analytic_coop_spont_qfi;

fn coopmetro(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coopmetro"));
    cmd.args(args).env_remove("COOPMETRO_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parses a CSV with a header into (header, rows).
fn csv_table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_owned).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

const FIG2_RUN: &str = r#"{"command":"run","kind":"coop-spont","b_z":0.1,"b_x":0.1,"gamma":0.5,"t":1.0}"#;

#[test]
fn run_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FIG2_RUN);
    let out = coopmetro(&["--config", &cfg], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let qfi: f64 = rows[0][col(&h, "qfi")].parse().unwrap();
    let closed = analytic_coop_spont_qfi(0.1, 0.1, 0.5, 1.0).unwrap();
    assert!((qfi - closed).abs() <= 1e-6 * closed);
    assert_eq!(rows[0][col(&h, "method")], "qubit-closed-form");
    let bound: f64 = rows[0][col(&h, "bound")].parse().unwrap();
    assert!((bound - 1.0 / qfi.sqrt()).abs() < 1e-9);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), FIG2_RUN);
    let out = coopmetro(&["run", "--config", &cfg, "--b_z", "0.3", "--m", "100"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    assert_eq!(rows[0][col(&h, "b_z")], "0.3");
    assert_eq!(rows[0][col(&h, "m")], "100");
    let qfi: f64 = rows[0][col(&h, "qfi")].parse().unwrap();
    let closed = analytic_coop_spont_qfi(0.3, 0.1, 0.5, 1.0).unwrap();
    assert!((qfi - closed).abs() <= 1e-6 * closed);
}

#[test]
fn negative_field_flags_parse() {
    let out = coopmetro(&["run", "--kind", "std-spont", "--b_z", "-0.2", "--gamma", "0.5", "--t", "1"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn usage_errors_name_the_key() {
    let missing = coopmetro(&["run", "--kind", "coop-spont", "--b_x", "0.1", "--gamma", "0.5", "--t", "1"], &[]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("`b_z`"), "{}", stderr(&missing));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"command":"run","kind":"std-deph","b_z":0.1,"eta":0.5,"t":1,"bogus":1}"#);
    let unknown = coopmetro(&["--config", &cfg], &[]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("bogus"));

    let irrelevant = coopmetro(&["run", "--kind", "std-deph", "--b_z", "0.1", "--eta", "0.5", "--dipole", "2", "--t", "1"], &[]);
    assert_eq!(irrelevant.status.code(), Some(2));
    assert!(stderr(&irrelevant).contains("`dipole`"));

    let no_command = coopmetro(&["--kind", "std-deph"], &[]);
    assert_eq!(no_command.status.code(), Some(2));
    assert!(stderr(&no_command).contains("`command`"));
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let out = coopmetro(&["figure", "--figure", "figA1"], &[("COOPMETRO_THREADS", "0")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("COOPMETRO_THREADS"));
}

#[test]
fn figure_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |p: &Path, threads: &str| {
        let out = coopmetro(&["figure", "--figure", "fig2", "--out", p.to_str().unwrap()], &[("COOPMETRO_THREADS", threads)]);
        assert!(out.status.success(), "{}", stderr(&out));
    };
    run(&a, "1");
    run(&b, "4");
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.ends_with('\n'));
    let (h, rows) = csv_table(&text);
    assert_eq!(h, ["t", "f_coop", "f_std_numeric", "f_std_formula", "f_heisenberg"]);
    assert_eq!(rows.len(), 100);
    assert_eq!(rows[0][0], "0.05");
    assert_eq!(rows[99][0], "5");
    let at_one = rows.iter().find(|r| r[0] == "1").unwrap();
    assert_eq!(at_one[col(&h, "f_heisenberg")], "4");
}

#[test]
fn figure_five_peaks_near_critical_point() {
    let out = coopmetro(&["figure", "--figure", "fig5"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    assert_eq!(h, ["b_z", "f_coop", "f_heisenberg"]);
    assert_eq!(rows.len(), 201);
    let f = col(&h, "f_coop");
    let best = rows.iter().max_by(|a, b| a[f].parse::<f64>().unwrap().total_cmp(&b[f].parse().unwrap())).unwrap();
    let b: f64 = best[0].parse().unwrap();
    assert!((0.95..=1.05).contains(&b), "peak at {b}");
}

#[test]
fn figure_a1_effective_peak() {
    let out = coopmetro(&["figure", "--figure", "figA1"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    assert_eq!(h, ["b_z", "f_ground_exact", "f_ground_effective"]);
    let at_one = rows.iter().find(|r| r[0] == "1").unwrap();
    assert_eq!(at_one[col(&h, "f_ground_effective")], "50");
}

#[test]
fn json_output() {
    let out = coopmetro(&["figure", "--figure", "figA1", "--format", "json"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 201);
    let at_one = rows.iter().find(|r| r["b_z"] == 1.0).unwrap();
    assert!((at_one["f_ground_effective"].as_f64().unwrap() - 50.0).abs() < 1e-12);
}

#[test]
fn sweep_reports_failed_points_and_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = coopmetro(
        &[
            "sweep", "--kind", "coop-deph", "--b_x", "0.1", "--eta", "0.5", "--t", "1", "--axis", "b_z",
            "--from", "-0.5", "--to", "0.5", "--points", "5", "--out", out_path.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("b_z = 0"), "{}", stderr(&out));
    let text = fs::read_to_string(&out_path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[2][1], "");
    assert!(rows[2][6].contains("nonzero"));
}

#[test]
fn unitary_time_sweep() {
    let out = coopmetro(
        &["sweep", "--kind", "unitary-baseline", "--b_z", "0.2", "--axis", "t", "--from", "0", "--to", "2", "--points", "9", "--format", "json"],
        &[],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for r in rows.as_array().unwrap() {
        let t = r["t"].as_f64().unwrap();
        let f = r["qfi"].as_f64().unwrap();
        assert!((f - 4.0 * t * t).abs() <= 1e-8 * (4.0 * t * t));
    }
}

#[test]
fn region_command_finds_two_spin_region() {
    let out = coopmetro(
        &["region", "--kind", "two-spin-coop", "--b_x", "0.1", "--dipole", "10", "--t", "1", "--from", "0.5", "--to", "1.5"],
        &[],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    let lower: f64 = rows[0][col(&h, "lower")].parse().unwrap();
    let upper: f64 = rows[0][col(&h, "upper")].parse().unwrap();
    assert_eq!(rows[0][col(&h, "threshold")], "16");
    assert!((lower - 0.89).abs() <= 0.05 && (upper - 1.14).abs() <= 0.05, "[{lower}, {upper}]");
}

#[test]
fn maximize_and_tradeoff_commands() {
    let out = coopmetro(&["maximize", "--kind", "unitary-baseline", "--b_z", "0.3", "--axis", "t", "--from", "0", "--to", "2"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    let v: f64 = rows[0][col(&h, "qfi")].parse().unwrap();
    assert!((v - 16.0).abs() < 1e-6);

    let out = coopmetro(&["tradeoff", "--axis", "b_x", "--from", "0.05", "--to", "0.2", "--points", "4", "--t", "1"], &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = csv_table(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3][col(&h, "in_regime")], "false");
    assert_eq!(rows[0][col(&h, "in_regime")], "true");
}
