use std::process::{Command, Output};

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rindler-purcell"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn modes_table() {
    let o = run(
        &["modes", "--mass", "1", "--accel", "1", "--k-max", "5"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let omegas: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(omegas.windows(2).all(|w| w[1] > w[0]));
    assert!(rows.iter().all(|r| r[4] == "bessel"));
}

#[test]
fn modes_inertial_limit_shift_vanishes() {
    let o = run(&["modes", "--accel", "1e-6", "--k-max", "4"], &[]);
    for line in stdout(&o)
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
    {
        let shift: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(shift.abs() < 1e-6, "{line}");
    }
}

#[test]
fn point_matches_rest_background() {
    let acc = run(&["point", "--accel", "1e-4", "--tau", "10"], &[]);
    let rest = run(&["point", "--accel", "0", "--tau", "10"], &[]);
    let a: f64 = stdout(&acc).trim().parse().unwrap();
    let r: f64 = stdout(&rest).trim().parse().unwrap();
    assert!((a - r).abs() < 1e-3 * r, "{a} vs {r}");
}

#[test]
fn point_zero_time() {
    let o = run(&["point", "--accel", "0.7", "--tau", "0"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);
}

#[test]
fn point_verbose_breakdown_on_stderr() {
    let o = run(
        &["point", "--accel", "0.5", "--k-max", "6", "--verbose"],
        &[],
    );
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(
        err.lines()
            .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
            .count(),
        6
    );
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.conf");
    std::fs::write(&path, "mass = 1\nlenght = 2\n").unwrap();
    let o = run(&["sweep", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("lenght"));
    for args in [
        vec!["point", "--accel", "2"],
        vec!["point", "--accel", "-1"],
        vec!["sweep", "--accel-max", "2.5"],
        vec!["sweep", "--mode-n", "4", "--k-max", "3"],
        vec!["sweep", "--tau", "-1"],
        vec!["point", "--placement", "nodes", "--mode-n", "3"],
        vec!["sweep", "--figure", "6"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args, &[]).status.code(), Some(1), "{args:?}");
    }
    let missing = run(&["sweep", "--config", "/nonexistent/run.conf"], &[]);
    assert_eq!(missing.status.code(), Some(3));
    assert_eq!(
        run(
            &["sweep", "--figure", "5", "--accel-steps", "4"],
            &[("RP_THREADS", "zero")]
        )
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(
        &path,
        "# small run\nmass = 0\naccel_min = 0.01\naccel_max = 0.1\naccel_steps = 4\ntau = 5\n",
    )
    .unwrap();
    let o = run(
        &["sweep", "--config", path.to_str().unwrap(), "--tau", "7"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# tau = 7\n"));
    assert!(text.contains("# mass = 0\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let args = ["sweep", "--figure", "2", "--accel-steps", "24"];
    let one = run(&args, &[("RP_THREADS", "1")]);
    let three = run(&args, &[("RP_THREADS", "3")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn figure_5_single_column() {
    let o = run(&["sweep", "--figure", "5", "--accel-steps", "10"], &[]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "a,P_center"));
}

#[test]
fn numerical_failure_writes_nan_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("heavy.csv");
    let o = run(
        &[
            "sweep",
            "--mass",
            "1e6",
            "--accel-min",
            "0.5",
            "--accel-max",
            "1",
            "--accel-steps",
            "2",
            "--output",
            out.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(",NaN")).count(), 2);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"], &[]).status.code(), Some(0));
    assert_eq!(run(&["--version"], &[]).status.code(), Some(0));
}
