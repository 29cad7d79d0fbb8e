use std::process::{Command, Output};

use qsl_cli::{parse_args, parse_config_line, VALIDATION_THRESHOLD};

fn qsl(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qsl"));
    cmd.args(args).env_remove("QSL_THREADS");
    if let Some(t) = threads {
        cmd.env("QSL_THREADS", t);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn critical_omega_prints_a_single_quantity() {
    let o = qsl(&["critical-omega", "--lambda", "3", "--tau-d", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], "quantity,value");
    let value: f64 = lines[2].strip_prefix("omega_c,").unwrap().parse().unwrap();
    // Independent high-precision value of the onset.
    assert!((value - 5.232_445_013_017_794).abs() <= 1e-3, "{value}");
}

#[test]
fn sweep_omega_row_count_and_columns() {
    let o = qsl(&["sweep-omega", "--lambda", "3", "--omega-max", "20", "--points", "400"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "omega,tau_qsl_ratio,blp,pop_deficit");
    assert_eq!(lines.len() - 2, 400);
    for row in &lines[2..] {
        assert_eq!(row.split(',').count(), 4);
    }
    assert!(lines[2].starts_with("0.00000000000,1.00000000000,0.00000000000,"));
    assert!(lines[401].starts_with("20.0000000000,"));
}

#[test]
fn output_is_bit_stable_across_runs_and_thread_counts() {
    for args in [
        &["sweep-omega", "--points", "48"][..],
        &["nonmarkov", "--drive-strength", "8", "--samples", "400", "--seed", "9"][..],
        &["sweep-window", "--omegas", "0,4", "--tau-max", "2", "--points", "21"][..],
    ] {
        let one = qsl(args, Some("1"));
        let again = qsl(args, Some("1"));
        let many = qsl(args, Some("5"));
        let default = qsl(args, None);
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, again.stdout);
        assert_eq!(one.stdout, many.stdout, "{args:?}");
        assert_eq!(one.stdout, default.stdout);
    }
}

#[test]
fn config_line_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep with space.csv");
    let path_str = path.to_str().unwrap();
    let args = ["sweep-window", "--lambda", "6", "--omegas", "1,3.5", "--tau-max", "1", "--points", "5", "--output", path_str];
    let o = qsl(&args, None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let first = written.lines().next().unwrap();
    let echoed = parse_config_line(first).unwrap();
    let expected = parse_args(std::iter::once("qsl").chain(args)).unwrap();
    assert_eq!(echoed, expected);
    assert_eq!(echoed.output.as_deref(), Some(path_str));
    assert_eq!(written.lines().count(), 2 + 10);
}

#[test]
fn validate_reports_errors_below_threshold() {
    let o = qsl(&["validate"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 30);
    for row in rows {
        let err: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < VALIDATION_THRESHOLD, "{row}");
    }
}

#[test]
fn loose_tolerance_fails_validation_with_status_3() {
    let o = qsl(&["validate", "--tol", "1e-3"], None);
    assert_eq!(o.status.code(), Some(3));
    // The table is still written so the failure can be inspected.
    assert_eq!(stdout(&o).lines().count(), 32);
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle check failed"));
}

#[test]
fn exit_codes() {
    let bad_flag = qsl(&["sweep-omega", "--omega-max", "nan"], None);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_flag.stderr).contains("--omega-max"));
    assert!(bad_flag.stdout.is_empty());

    let unknown = qsl(&["sweep-omegas"], None);
    assert_eq!(unknown.status.code(), Some(2));

    let threads = qsl(&["qslt"], Some("-1"));
    assert_eq!(threads.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&threads.stderr).contains("QSL_THREADS"));

    let no_transition = qsl(&["critical-omega", "--cap", "2"], None);
    assert_eq!(no_transition.status.code(), Some(3));

    let unwritable = qsl(&["qslt", "--output", "/nonexistent-dir/x.csv"], None);
    assert_eq!(unwritable.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unwritable.stderr).contains("--output"));
}

#[test]
fn evolve_matches_the_population_regression() {
    let o = qsl(&["evolve", "--t-end", "1", "--points", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let cols: Vec<f64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cols[0], 1.0);
    assert!((cols[3] - 0.4765077780919442).abs() < 1e-11);
}
