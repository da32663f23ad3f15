use std::process::Command;

use collective_decay::harness::cli::main_with_args;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("collective-decay").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(k).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn evolve_header_and_frozen_rows() {
    let (code, csv, _) = run(&["evolve", "--werner", "0.5", "--a", "1", "--samples", "11"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "t,gamma_t,r11,r22,re_r23,im_r23,re_r14,im_r14,coherence_l1,concurrence,qfi"
    );
    assert_eq!(lines.len(), 12);
    let first: Vec<&str> = lines[1].split(',').skip(2).collect();
    for row in &lines[2..] {
        let rest: Vec<&str> = row.split(',').skip(2).collect();
        assert_eq!(rest, first);
    }
}

#[test]
fn evolve_coherence_at_unit_time() {
    let (code, csv, _) = run(&[
        "evolve",
        "--werner",
        "0.5",
        "--t-end",
        "2",
        "--samples",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(column(&csv, "t")[1], 1.0);
    assert!((column(&csv, "coherence_l1")[1] - 0.183940).abs() < 1e-6);
}

#[test]
fn evolve_engines_agree_where_they_should() {
    let base = [
        "evolve",
        "--werner",
        "0.2",
        "--a",
        "0.5",
        "--n",
        "0.5",
        "--samples",
        "21",
    ];
    let (_, closed, _) = run(&base);
    let (code, rk4, _) = run(&[&base[..], &["--engine", "rk4"]].concat());
    assert_eq!(code, 0);
    for name in ["r11", "re_r23"] {
        for (p, q) in column(&closed, name).iter().zip(column(&rk4, name)) {
            assert!((p - q).abs() < 1e-10);
        }
    }
}

#[test]
fn evolve_full_generator_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.txt");
    let mut text = String::new();
    for i in 0..4 {
        for j in 0..4 {
            text.push_str(if i == 3 && j == 3 { "1 0\n" } else { "0 0\n" });
        }
    }
    std::fs::write(&path, text).unwrap();
    let (code, csv, err) = run(&[
        "evolve",
        "--matrix",
        path.to_str().unwrap(),
        "--engine",
        "rk4",
        "--a",
        "0.5",
        "--samples",
        "6",
        "--t-end",
        "1",
    ]);
    assert_eq!(code, 0, "{err}");
    let r11 = column(&csv, "r11");
    assert_eq!(r11[0], 0.0);
    assert!(r11[5] > 0.0);
}

#[test]
fn config_file_and_flags_layer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "[state]\nwerner = 0.5\n[coupling]\na = 1\n[grid]\nsamples = 5\n",
    )
    .unwrap();
    let (code, csv, _) = run(&["--config", cfg.to_str().unwrap(), "evolve"]);
    assert_eq!(code, 0);
    assert!(column(&csv, "coherence_l1").iter().all(|c| *c == 0.5));
    let (_, csv, _) = run(&["--config", cfg.to_str().unwrap(), "evolve", "--a", "0"]);
    assert!(column(&csv, "coherence_l1")[4] < 0.5);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let (code, stdout, _) = run(&[
        "--out",
        path.to_str().unwrap(),
        "evolve",
        "--werner",
        "1",
        "--samples",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(path)
        .unwrap()
        .starts_with("t,gamma_t"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &[
            "evolve",
            "--werner",
            "0.5",
            "--samples",
            "2",
            "--t-end",
            "0",
        ][..],
        &["evolve"],
        &["evolve", "--werner", "0.5", "--engine", "euler"],
        &["evolve", "--werner", "0.5", "--xstate", "0.25,0.25,0,0,0,0"],
        &["evolve", "--werner", "0.5", "--set", "bogus.key=1"],
        &["figures", "--which", "6"],
        &["sweep", "--werner", "0.5"],
        &["sweep", "--werner", "0.5", "--axis", "a=0.5"],
        &["sweep", "--werner", "0.5", "--axis", "b=1,2"],
        &["positivity", "--k0r", "1", "--cos-mu-r", "1"],
        &["no-such-command"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn positivity_rejections_exit_three() {
    assert_eq!(run(&["evolve", "--werner", "0.5", "--a", "1.2"]).0, 3);
    assert_eq!(run(&["positivity", "--a", "1.2"]).0, 3);
    let (code, text, _) = run(&["positivity", "--a", "1.2", "--allow-nonpositive"]);
    assert_eq!(code, 0);
    assert!(text.contains("eigenvalue1=-0.2"));
    assert!(text.contains("verdict=NEGATIVE"));
}

#[test]
fn positivity_reports() {
    let (_, text, _) = run(&["positivity", "--a", "0.5"]);
    for line in [
        "eigenvalue1=0",
        "eigenvalue2=0",
        "eigenvalue3=0.5",
        "eigenvalue4=1.5",
        "verdict=POSITIVE",
    ] {
        assert!(text.lines().any(|l| l == line), "{line} missing in\n{text}");
    }
    let z = std::f64::consts::FRAC_PI_2.to_string();
    let c = (1.0f64 / 3.0).sqrt().to_string();
    let (_, text, _) = run(&["positivity", "--k0r", &z, "--cos-mu-r", &c]);
    assert!(text.contains("a=0.636619772368"));
    assert!(text.contains("geometry.holds=true"));
    assert!(text.contains("verdict=POSITIVE"));
}

#[test]
fn sweep_examples() {
    let (code, csv, _) = run(&[
        "sweep",
        "--werner",
        "0.5",
        "--axis",
        "a=0,0.5,1",
        "--probe-t",
        "1",
    ]);
    assert_eq!(code, 0);
    let c = column(&csv, "coherence_l1");
    assert!(c[0] < c[1] && c[1] < c[2]);
    assert_eq!(column(&csv, "death_time")[2], -1.0);

    let (_, csv, _) = run(&[
        "sweep",
        "--a",
        "0",
        "--axis",
        "x=0.2,0.4",
        "--horizon",
        "10",
    ]);
    let d = column(&csv, "death_time");
    assert_eq!(d[0], 0.0);
    assert!(d[1] > 0.0 && d[1] < 10.0);

    let (code, csv, _) = run(&[
        "sweep",
        "--werner",
        "0.5",
        "--axis",
        "a=0,1",
        "--axis",
        "lambda=markov,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("a,lambda,"));
}

#[test]
fn sweep_printed_engine_sudden_death() {
    let (code, csv, _) = run(&[
        "--engine", "printed", "sweep", "--werner", "0.5", "--axis", "a=0,0.25",
    ]);
    assert_eq!(code, 0);
    let d = column(&csv, "death_time");
    assert!((d[0] - 0.3119053581824358).abs() < 1e-6);
    assert!(d[1] > d[0]);
}

#[test]
fn figures_write_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, _) = run(&[
        "--out",
        dir.path().to_str().unwrap(),
        "figures",
        "--which",
        "1,4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 7);
    let fig1 = std::fs::read_to_string(dir.path().join("fig1_coherence_a1.00.csv")).unwrap();
    assert!(column(&fig1, "value").iter().all(|v| *v == 0.5));
    let fig2 = dir.path().join("fig2_concurrence_a0.00.csv");
    assert!(!fig2.exists());
}

#[test]
fn figure_two_sudden_death_in_printed_mode() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&[
        "--out",
        dir.path().to_str().unwrap(),
        "figures",
        "--which",
        "2",
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("fig2_concurrence_a0.00.csv")).unwrap();
    let t = column(&csv, "gamma_t");
    let v = column(&csv, "value");
    let first_zero = t[v.iter().position(|x| *x == 0.0).unwrap()];
    assert!((first_zero - 0.312).abs() < 0.011);
    assert!(v
        .iter()
        .zip(&t)
        .filter(|(_, t)| **t >= first_zero)
        .all(|(v, _)| *v == 0.0));
}

#[test]
fn validate_small_grid_passes_and_fault_fails() {
    let small = [
        "validate",
        "--a-grid",
        "0,1",
        "--n-grid",
        "0",
        "--lambda-grid",
        "markov,1",
        "--x-grid",
        "0.5",
        "--random-cases",
        "50",
    ];
    let (code, report, err) = run(&small);
    assert_eq!(code, 0, "{err}");
    assert!(report.contains("case=audit.r23_asymptote"));
    assert!(report.contains("failures=0"));
    let (code, _, err) = run(&[&small[..], &["--inject-fault"]].concat());
    assert_eq!(code, 1);
    assert!(err.contains("status=fail"));
}

#[test]
fn validate_restricted_to_uncoupled_matches_printed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let (code, _, _) = run(&[
        "--out",
        path.to_str().unwrap(),
        "validate",
        "--a-grid",
        "0",
        "--random-cases",
        "20",
    ]);
    assert_eq!(code, 0);
    let report = std::fs::read_to_string(path).unwrap();
    let mut seen = 0;
    for line in report.lines() {
        for key in [
            "printed_dev_r11=",
            "printed_dev_r22=",
            "printed_dev_r23=",
            "printed_dev_r14=",
            "printed_dev_coherence=",
            "printed_dev_concurrence=",
        ] {
            if let Some(v) = line.strip_prefix(key) {
                assert!(v.parse::<f64>().unwrap() <= 1e-12, "{line}");
                seen += 1;
            }
        }
    }
    assert_eq!(seen, 6 * 3 * 4 * 4);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_collective-decay");
    let ok = Command::new(bin)
        .args(["positivity", "--a", "0.5"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("verdict=POSITIVE"));
    let bad = Command::new(bin)
        .args(["positivity", "--a", "1.5"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
    let usage = Command::new(bin).args(["evolve"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
