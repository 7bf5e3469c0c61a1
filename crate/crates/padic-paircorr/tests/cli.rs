//! Black-box tests of the installed binary: exit codes, output bytes, and
//! the file-format round trip, all via `std::process::Command`.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padic-paircorr"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["sweep", "--help"])), 0);
}

#[test]
fn bad_usage_exits_one() {
    // Unknown flag, unknown subcommand, missing required value.
    assert_eq!(code(&run(&["sweep", "--no-such-flag"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["stats", "--seq", "naturals"])), 1); // no --n-max
    assert_eq!(code(&run(&["stats", "--n-max", "10", "--alpha", "x"])), 1);
    assert_eq!(code(&run(&["stats", "--n-max", "10", "--s", "1,nope"])), 1);
}

#[test]
fn validation_failures_exit_one() {
    // Generating van der Corput points in the p-adic digit format.
    let out = run(&["gen", "--seq", "vdc", "--n-max", "10"]);
    assert_eq!(code(&out), 1);
    // Random without a seed.
    assert_eq!(code(&run(&["gen", "--seq", "random", "--n-max", "10"])), 1);
    // Precision guard: 6 digits cannot host a sweep to N = 2000 at s = 1/10.
    let out = run(&[
        "sweep",
        "--seq",
        "random",
        "--seed",
        "1",
        "--precision",
        "6",
        "--n-max",
        "2000",
    ]);
    assert_eq!(code(&out), 1);
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("error:"), "stderr: {msg}");
    // alpha outside (0, 1].
    assert_eq!(code(&run(&["stats", "--n-max", "10", "--alpha", "3/2"])), 1);
    // Non-prime base.
    assert_eq!(
        code(&run(&[
            "gen", "--seq", "naturals", "--p", "6", "--n-max", "10"
        ])),
        1
    );
}

#[test]
fn verify_defaults_exit_zero() {
    let out = run(&["verify"]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = stdout(&out);
    assert!(table.contains("verify: all checks passed"), "{table}");
}

#[test]
fn gen_stats_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let seq_path = dir.path().join("seq.txt");
    let out = bin()
        .args([
            "gen",
            "--seq",
            "random",
            "--seed",
            "9",
            "--p",
            "5",
            "--precision",
            "10",
            "--n-max",
            "200",
            "--out",
        ])
        .arg(&seq_path)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&seq_path).unwrap();
    assert!(text.starts_with("# padic p=5 m=10\n"));
    assert_eq!(text.lines().count(), 201);

    let from_file = bin()
        .args([
            "stats", "--seq", "file", "--n-max", "200", "--s", "1,2", "--in",
        ])
        .arg(&seq_path)
        .output()
        .unwrap();
    assert_eq!(code(&from_file), 0);
    let direct = run(&[
        "stats",
        "--seq",
        "random",
        "--seed",
        "9",
        "--p",
        "5",
        "--precision",
        "10",
        "--n-max",
        "200",
        "--s",
        "1,2",
    ]);
    let data = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(data(&from_file), data(&direct));
}

#[test]
fn stats_known_rows() {
    let out = run(&[
        "stats",
        "--seq",
        "naturals",
        "--n-max",
        "9",
        "--precision",
        "6",
        "--alpha",
        "1/2",
        "--s",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("N,alpha,s,p,k,mu,count,F"), "{text}");
    assert!(
        text.contains("9,1/2,1,3,1,1/3,18,0.6666666666666666"),
        "{text}"
    );

    // Real-valued rows carry p = 0 and unit measure.
    let vdc = run(&[
        "stats", "--seq", "vdc", "--p", "2", "--n-max", "8", "--s", "1/2",
    ]);
    assert_eq!(code(&vdc), 0);
    assert!(
        stdout(&vdc).contains("8,1,1/2,0,0,1,2,0.25"),
        "{}",
        stdout(&vdc)
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "sweep",
        "--seq",
        "random",
        "--seed",
        "3",
        "--precision",
        "14",
        "--n-max",
        "300",
        "--s",
        "1/2,1",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn figure1_writes_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("fig.csv");
    let out = bin()
        .args([
            "figure1",
            "--n-max",
            "60",
            "--precision",
            "12",
            "--format",
            "gnuplot",
            "--out",
        ])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(
        csv.contains("command=figure1 seq=sqrt p=3 alpha=1"),
        "{csv}"
    );
    // 60 rows per threshold, 5 thresholds, plus 2 metadata lines + header.
    assert_eq!(csv.lines().count(), 303);
    let script = std::fs::read_to_string(dir.path().join("fig.gp")).unwrap();
    assert!(script.contains("set datafile separator \",\""));
    for s in ["1/10", "1/4", "1/2", "1", "2"] {
        assert!(
            script.contains(&format!("strcol(3) eq \"{s}\"")),
            "{script}"
        );
    }
    assert!(Path::new(&csv_path).exists());
}

#[test]
fn gnuplot_without_out_fails() {
    assert_eq!(
        code(&run(&[
            "figure1",
            "--n-max",
            "50",
            "--precision",
            "12",
            "--format",
            "gnuplot"
        ])),
        1
    );
}
