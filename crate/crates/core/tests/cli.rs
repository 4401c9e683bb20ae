use std::fs;
use std::process::{Command, Output};

use majorana::report::{figure_csv, figure_points};
use majorana::series::cache;
use majorana::slope::estimate_at;
use majorana::{Branch, PrecisionContext, Series};

fn majorana(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majorana"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn coeffs_writes_cache_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let p = path.to_str().unwrap();
    let run = || majorana(&["coeffs", "--n-max", "300", "--precision", "40", "--cache", p]);
    assert!(run().status.success());
    let first = fs::read(&path).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.contains("\n0 +1.000000000000000000000000000000000000000e+0\n"));
    assert_eq!(text.lines().count(), 4 + 301);

    fs::remove_file(&path).unwrap();
    assert!(run().status.success());
    assert_eq!(fs::read(&path).unwrap(), first);

    let mut direct = Series::new(Branch::Minus, PrecisionContext::new(40).unwrap());
    direct.extend_to(300).unwrap();
    assert_eq!(cache::load(&path).unwrap().coeffs(), direct.coeffs());
}

#[test]
fn header_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.txt");
    let p = p.to_str().unwrap();
    assert!(majorana(&["coeffs", "--n-max", "20", "--precision", "40", "--cache", p]).status.success());
    let out = majorana(&["coeffs", "--n-max", "30", "--precision", "41", "--cache", p]);
    assert_eq!(out.status.code(), Some(3));
    let out = majorana(&["slope", "--n", "10", "--branch", "plus", "--cache", p]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_flags_exit_4() {
    assert_eq!(majorana(&["slope"]).status.code(), Some(4));
    assert_eq!(majorana(&["slope", "--n", "3", "--digits", "4"]).status.code(), Some(4));
    assert_eq!(majorana(&["coeffs", "--n-max", "5", "--precision", "12"]).status.code(), Some(4));
    assert_eq!(majorana(&["singularity", "--window", "9:3", "--fit"]).status.code(), Some(4));
    assert_eq!(majorana(&["singularity", "--n", "50", "--precision", "40"]).status.code(), Some(4));
    assert!(majorana(&["singularity", "--n", "50", "--precision", "40", "--table-digits", "10"]).status.success());
    assert_eq!(majorana(&["validate", "--synthetic", "x0=2"]).status.code(), Some(4));
    assert_eq!(majorana(&["--help"]).status.code(), Some(0));
}

#[test]
fn slope_at_zero_is_the_prefactor() {
    let out = majorana(&["--format", "json", "slope", "--n", "0", "--precision", "30"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["N"], 0);
    assert_eq!(v["slope"], "-5.72357121276665933904021105970e-1");
}

#[test]
fn slope_matches_library() {
    let out = majorana(&["--format", "csv", "slope", "--n", "200", "--precision", "50"]);
    assert!(out.status.success());
    let mut s = Series::new(Branch::Minus, PrecisionContext::new(50).unwrap());
    s.extend_to(201).unwrap();
    let r = estimate_at(&s, 200).unwrap().report(50);
    assert_eq!(
        stdout(&out),
        format!(
            "N,slope,tail_bound,certified_digits\n200,{},{},{}\n",
            r.slope, r.tail_bound, r.certified_digits
        )
    );
}

#[test]
fn slope_to_four_digits() {
    let out = majorana(&["--format", "json", "slope", "--digits", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["certified_digits"].as_u64().unwrap() >= 4);
    assert!(v["slope"].as_str().unwrap().starts_with("-1.5880"));
}

#[test]
fn singularity_table_and_fit() {
    let out = majorana(&["--format", "csv", "singularity", "--n", "100,200", "--precision", "60"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,tau0_free,nu_n,tau0_constrained");
    assert!(lines[1].starts_with("100,+1.2"));
    assert_eq!(lines.len(), 3);
    // 30 significant digits per column
    let first = lines[2].split(',').nth(1).unwrap();
    assert_eq!(first.len(), "+1.".len() + 29 + "e+0".len());

    let out = majorana(&["--format", "json", "singularity", "--window", "400:600", "--fit", "--precision", "60"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let tau: f64 = v["tau0"].as_str().unwrap().parse().unwrap();
    assert!((tau - 1.2017).abs() < 1e-3);
}

#[test]
fn bracket_on_explicit_grid() {
    let grid: Vec<String> = (100..=300).step_by(10).map(|n| n.to_string()).collect();
    let grid = grid.join(",");
    let out = majorana(&["--format", "json", "singularity", "--bracket", "--n", &grid, "--precision", "60"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lower: f64 = v["lower"].as_str().unwrap().parse().unwrap();
    let upper: f64 = v["upper"].as_str().unwrap().parse().unwrap();
    assert!(lower < 1.2016860577 && 1.2016860577 < upper);
    assert_eq!(v["monotonic"], true);
}

#[test]
fn validate_reports_corrupt_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let p = path.to_str().unwrap();
    assert!(majorana(&["coeffs", "--n-max", "50", "--precision", "40", "--cache", p]).status.success());

    let good = majorana(&["validate", "--cache", p, "--oracle-m", "50"]);
    assert!(good.status.success(), "{}", stdout(&good));
    assert!(stdout(&good).lines().all(|l| l.starts_with("PASS")));

    let text = fs::read_to_string(&path).unwrap();
    let tampered: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 19 { l.replacen('+', "", 1) } else { l.to_string() })
        .collect();
    fs::write(&path, tampered.join("\n") + "\n").unwrap();
    let bad = majorana(&["validate", "--cache", p]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).contains(":20:"), "{}", stdout(&bad));
}

#[test]
fn validate_recompute_catches_altered_digit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let p = path.to_str().unwrap();
    assert!(majorana(&["coeffs", "--n-max", "50", "--precision", "40", "--cache", p]).status.success());
    let text = fs::read_to_string(&path).unwrap();
    let tampered: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            if i == 30 {
                let (head, tail) = l.split_at(8);
                let digit = if tail.as_bytes()[0] == b'1' { '2' } else { '1' };
                format!("{head}{digit}{}", &tail[1..])
            } else {
                l.to_string()
            }
        })
        .collect();
    fs::write(&path, tampered.join("\n") + "\n").unwrap();
    let out = majorana(&["validate", "--cache", p, "--oracle-m", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL recompute"), "{}", stdout(&out));
}

#[test]
fn validate_synthetic() {
    let out = majorana(&["validate", "--synthetic", "x0=2,nu=0.5", "--precision", "60", "--oracle-m", "30"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS synthetic"));
    let out = majorana(&["--format", "json", "validate", "--synthetic", "x0=0.7,nu=-3/2,a=3", "--precision", "60", "--oracle-m", "30"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn figure_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("fig.csv");
    let out = majorana(&[
        "figure", "--n-max", "400", "--precision", "40",
        "--out", out_path.to_str().unwrap(), "--trend", "200:400",
    ]);
    assert!(out.status.success());
    let csv = fs::read_to_string(&out_path).unwrap();
    let mut s = Series::new(Branch::Minus, PrecisionContext::new(40).unwrap());
    s.extend_to(400).unwrap();
    assert_eq!(csv, figure_csv(&figure_points(&s)));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "n,log10_a");
    assert_eq!(rows[1], "0,+0.00000000000000e+0");
    assert!(rows[2].starts_with("1,-3.41038724391"));
    let text = stdout(&out);
    let slope: f64 = text.trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(text.starts_with("trend over n in [200, 400]: "));
    // steeper than -log10(1.2017) at small n, from the power-law prefactor
    assert!(-0.083 < slope && slope < -0.0798, "{slope}");
}
