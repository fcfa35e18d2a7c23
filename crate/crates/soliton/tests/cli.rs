//! End-to-end runs of the `soliton` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const S1: &str = "kappa = [1.0]\nm = [1.4142135623730951]\n";
const S2: &str = "kappa = [1.0]\nm = [2.0]\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soliton"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Parses a grid file into its header and numeric rows.
fn grid(text: &str) -> (String, Vec<Vec<f64>>) {
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "s1.toml", S1);
    assert_eq!(code(&run(&["validate", s(&ok)])), 0);

    let bad = write(&dir, "inc.toml", "kappa = [1.0, 2.0]\nm = [1.0, 1.0]\n");
    let out = run(&["validate", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("NonDecreasingKappa"));

    let missing = dir.path().join("absent.toml");
    assert_eq!(code(&run(&["validate", s(&missing)])), 3);

    let garbled = write(&dir, "garbled.toml", "kappa = [1.0,\n");
    assert_eq!(code(&run(&["validate", s(&garbled)])), 4);
}

#[test]
fn potential_grid() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s1.toml", S1);
    let out_path = dir.path().join("q.csv");
    let out = run(&[
        "potential",
        s(&input),
        "--xmin",
        "-10",
        "--xmax",
        "10",
        "-n",
        "5",
        "-o",
        s(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, rows) = grid(&fs::read_to_string(&out_path).unwrap());
    assert_eq!(header, "x,Q,q");
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2][0], 0.0);
    assert!((rows[2][2] + 2.0).abs() <= 1e-12);
    assert!((rows[2][1] - 1.0).abs() <= 1e-12);

    let empty = write(&dir, "empty.toml", "kappa = []\nm = []\n");
    let out = run(&["potential", s(&empty), "-n", "7"]);
    assert_eq!(code(&out), 0);
    let (_, rows) = grid(&stdout(&out));
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r[2] == 0.0 && r[1] == 0.0));
}

#[test]
fn potential_rejects_bad_grids_and_unwritable_outputs() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s1.toml", S1);
    assert_eq!(code(&run(&["potential", s(&input), "-n", "1"])), 2);
    assert_eq!(
        code(&run(&[
            "potential",
            s(&input),
            "--xmin",
            "1",
            "--xmax",
            "-1"
        ])),
        2
    );
    let target = dir.path().join("no/such/dir/q.csv");
    assert_eq!(code(&run(&["potential", s(&input), "-o", s(&target)])), 5);
}

#[test]
fn verify_single_solitons() {
    let dir = TempDir::new().unwrap();
    let s1 = write(&dir, "s1.toml", S1);
    let out = run(&["verify", s(&s1), "--level", "full"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).ends_with("overall,,,,PASS\n"));

    let s2 = write(&dir, "s2.toml", S2);
    let report = dir.path().join("report.csv");
    let out = run(&["verify", s(&s2), "--level", "full", "-o", s(&report)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&report).unwrap();
    let mu_line = text
        .lines()
        .find(|l| l.starts_with("oracle_mu[1],"))
        .unwrap();
    let fields: Vec<&str> = mu_line.split(',').collect();
    assert_eq!(fields.len(), 5);
    let mu: f64 = fields[2].parse().unwrap();
    assert!((mu - 1.0 / 3.0).abs() <= 1e-6);
    assert_eq!(fields[4], "PASS");
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",PASS"), "{line}");
    }
}

#[test]
fn verify_fast_skips_the_oracle() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.toml", "kappa = [1.5, 0.7]\nm = [0.8, 2.5]\n");
    let out = run(&["verify", s(&input), "--level", "fast"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("oracle"));
    assert!(stdout(&out).contains("three_spectra_m[2]"));
}

#[test]
fn verify_failures() {
    let dir = TempDir::new().unwrap();
    let neg = write(&dir, "neg.toml", "kappa = [1.0]\nm = [-2.0]\n");
    let out = run(&["verify", s(&neg)]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("NonPositiveEntry"));

    let s2 = write(&dir, "s2.toml", S2);
    let out = run(&["verify", s(&s2), "--level", "fast", "--kaymoses", "1e-30"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("kay_moses,") && stdout(&out).ends_with("overall,,,,FAIL\n"));
}

#[test]
fn kdv_frames() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s1.toml", S1);

    let still = dir.path().join("still");
    let out = run(&[
        "kdv",
        s(&input),
        "--t0",
        "0",
        "--t1",
        "0",
        "--frames",
        "1",
        "--xmin",
        "-5",
        "--xmax",
        "5",
        "-n",
        "41",
        "--outdir",
        s(&still),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (header, frame) = grid(&fs::read_to_string(still.join("frame_0000.csv")).unwrap());
    assert_eq!(header, "x,u");
    let pot = run(&[
        "potential",
        s(&input),
        "--xmin",
        "-5",
        "--xmax",
        "5",
        "-n",
        "41",
    ]);
    let (_, q) = grid(&stdout(&pot));
    for (a, b) in frame.iter().zip(&q) {
        assert_eq!(a[0], b[0]);
        assert_eq!(a[1], b[2]);
    }

    let moving = dir.path().join("moving");
    let out = run(&[
        "kdv",
        s(&input),
        "--t0",
        "0",
        "--t1",
        "1",
        "--frames",
        "2",
        "--xmin",
        "-2",
        "--xmax",
        "8",
        "-n",
        "1001",
        "--outdir",
        s(&moving),
    ]);
    assert_eq!(code(&out), 0);
    let (_, last) = grid(&fs::read_to_string(moving.join("frame_0001.csv")).unwrap());
    let argmin = last.iter().min_by(|a, b| a[1].total_cmp(&b[1])).unwrap()[0];
    assert!((argmin - 4.0).abs() <= 0.01, "{argmin}");

    let three = dir.path().join("three");
    let out = run(&[
        "kdv",
        s(&input),
        "--frames",
        "3",
        "-n",
        "11",
        "--outdir",
        s(&three),
    ]);
    assert_eq!(code(&out), 0);
    let mut names: Vec<String> = fs::read_dir(&three)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["frame_0000.csv", "frame_0001.csv", "frame_0002.csv"]
    );

    let blocked = write(&dir, "blocked", "");
    assert_eq!(code(&run(&["kdv", s(&input), "--outdir", s(&blocked)])), 5);
}

#[test]
fn spectra_conversions() {
    let dir = TempDir::new().unwrap();
    let fwd = write(
        &dir,
        "fwd.toml",
        "kappa = [1.0]\nmu = [0.3333333333333333]\n",
    );
    let out = run(&["spectra", "forward", s(&fwd)]);
    assert_eq!(code(&out), 0);
    assert!(
        stdout(&out).contains("m = [2.0000000000000000e0]"),
        "{}",
        stdout(&out)
    );

    let inv = write(&dir, "inv.toml", S2);
    let result = dir.path().join("mu.toml");
    let out = run(&["spectra", "invert", s(&inv), "-o", s(&result)]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&result).unwrap();
    let mu: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("mu = ["))
        .unwrap()
        .trim_end_matches(']')
        .parse()
        .unwrap();
    assert!((mu - 1.0 / 3.0).abs() <= 1e-12);

    let boundary = write(&dir, "s1.toml", S1);
    let out = run(&["spectra", "invert", s(&boundary)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("SpecialPotential"));

    assert_eq!(code(&run(&["spectra", "forward", s(&inv)])), 4);
}

#[test]
fn spectra_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "three.toml",
        "kappa = [2.0, 1.2, 0.5]\nm = [0.7, 3.0, 0.9]\n",
    );
    let inverted = dir.path().join("inv.toml");
    assert_eq!(
        code(&run(&["spectra", "invert", s(&input), "-o", s(&inverted)])),
        0
    );
    // Forward recomputes m from kappa and mu and overwrites the old column.
    let out = run(&["spectra", "forward", s(&inverted)]);
    assert_eq!(code(&out), 0);
    let m: Vec<f64> = stdout(&out)
        .lines()
        .find_map(|l| l.strip_prefix("m = ["))
        .unwrap()
        .trim_end_matches(']')
        .split(", ")
        .map(|v| v.parse().unwrap())
        .collect();
    for (a, b) in m.iter().zip([0.7, 3.0, 0.9]) {
        assert!((a - b).abs() <= 1e-9 * b, "{a} vs {b}");
    }
}

#[test]
fn herglotz_conversions() {
    let dir = TempDir::new().unwrap();
    let atom = write(&dir, "atom.toml", "xi = [1.0]\nd = [1.0]\n");
    let out = run(&["herglotz", "to-product", s(&atom)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "lambda = [2.0000000000000000e0, 1.0000000000000000e0]\n"
    );

    let empty = write(&dir, "empty.toml", "");
    let out = run(&["herglotz", "to-product", s(&empty)]);
    assert_eq!(stdout(&out), "lambda = []\n");
    let out = run(&["herglotz", "to-measure", s(&empty)]);
    assert_eq!(stdout(&out), "xi = []\nd = []\nd0 = 0.0000000000000000e0\n");

    let measure = write(
        &dir,
        "m.toml",
        "xi = [5.0, 2.5, 0.75]\nd = [0.3, 1.7, 0.02]\nd0 = 0.4\n",
    );
    let product = dir.path().join("p.toml");
    assert_eq!(
        code(&run(&[
            "herglotz",
            "to-product",
            s(&measure),
            "-o",
            s(&product)
        ])),
        0
    );
    let out = run(&["herglotz", "to-measure", s(&product)]);
    assert_eq!(code(&out), 0);
    let values = |key: &str| -> Vec<f64> {
        let text = stdout(&out);
        let line = text
            .lines()
            .find(|l| l.starts_with(key))
            .unwrap()
            .to_string();
        line.split('=')
            .nth(1)
            .unwrap()
            .trim()
            .trim_matches(|c| c == '[' || c == ']')
            .split(", ")
            .map(|v| v.parse().unwrap())
            .collect()
    };
    for (a, b) in values("xi ").iter().zip([5.0, 2.5, 0.75]) {
        assert!((a - b).abs() <= 1e-9);
    }
    for (a, b) in values("d ").iter().zip([0.3, 1.7, 0.02]) {
        assert!((a - b).abs() <= 1e-9);
    }
    assert!((values("d0")[0] - 0.4).abs() <= 1e-9);

    let unsorted = write(&dir, "bad.toml", "lambda = [1.0, 2.0]\n");
    assert_eq!(code(&run(&["herglotz", "to-measure", s(&unsorted)])), 2);
}

#[test]
fn deterministic_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "two.toml", "kappa = [1.5, 0.7]\nm = [0.8, 2.5]\n");
    let a = run(&["potential", s(&input), "-n", "301"]);
    let b = run(&["potential", s(&input), "-n", "301"]);
    assert_eq!(a.stdout, b.stdout);
}
