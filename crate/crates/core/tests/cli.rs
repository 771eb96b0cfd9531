use std::path::Path;
use std::process::Command;

fn lab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_favard-lab")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_cantor_writes_squares() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k2.csv");
    let (code, _, err) = lab(&["gen-cantor", "--n", "2", "--out", p(&out)]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,i,j");
    assert_eq!(lines.len(), 17);
    assert!(lines[1..].iter().all(|l| l.starts_with("2,")));
    assert!(err.contains("threads="));
}

#[test]
fn favard_square_and_segment_to_stdout() {
    let (code, out, _) = lab(&["favard", "--set", "square"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "0");
    assert!((row[1].parse::<f64>().unwrap() - 8.0).abs() < 8e-3);
    let (_, out, _) = lab(&["favard", "--set", "segment"]);
    let v: f64 = out.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 4.0).abs() < 4e-3);
}

#[test]
fn decay_fit_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("fav.csv");
    let (code, _, _) = lab(&["favard", "--set", "cantor:0..5", "--out", p(&table)]);
    assert_eq!(code, 0);
    let svg = dir.path().join("fav.svg");
    let json = dir.path().join("fit.json");
    let (code, _, err) = lab(&["decay", "--in", p(&table), "--plot", p(&svg), "--out", p(&json)]);
    assert_eq!(code, 0, "{err}");
    let fit: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert!(fit["exponent"].as_f64().unwrap() > 0.0);
    assert_eq!(fit["points"], 4);
    assert!(std::fs::read_to_string(svg).unwrap().contains("ln n / n"));
}

#[test]
fn pigeonhole_and_rect_const() {
    let dir = tempfile::tempdir().unwrap();
    let masses = dir.path().join("m.csv");
    std::fs::write(&masses, "mass\n0\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n").unwrap();
    let (code, out, _) = lab(&["pigeonhole", "--masses", p(&masses), "--eps", "0.2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["n"].as_u64(), v["m"].as_u64()), (Some(0), Some(2)));
    let (code, _, _) = lab(&["pigeonhole", "--masses", p(&masses), "--eps", "0.9"]);
    assert_eq!(code, 2);

    let cloud = dir.path().join("c.csv");
    std::fs::write(&cloud, "x,y,w\n0.2,0.3,1\n0.7,0.9,1\n").unwrap();
    let (code, out, _) = lab(&["rect-const", "--cloud", p(&cloud), "--eps", "1e-6", "--r", "1", "--m", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["lower_bound"].as_f64().unwrap() <= 0.01);
}

#[test]
fn content_writes_balls() {
    let dir = tempfile::tempdir().unwrap();
    let balls = dir.path().join("balls.csv");
    let r = 2f64.sqrt() / 16.0;
    let (code, out, _) = lab(&[
        "content",
        "--set",
        "boundary:2",
        "--r-minus",
        &(r / 2.0).to_string(),
        "--r-plus",
        &r.to_string(),
        "--balls",
        p(&balls),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["balls"], 64);
    assert_eq!(std::fs::read_to_string(balls).unwrap().lines().count(), 65);
}

#[test]
fn sector_check_reports_hypothesis_failures() {
    let (code, out, err) = lab(&[
        "sector-check",
        "--curve",
        "circle-arc:R=2,I=[-1,1]",
        "--e",
        "0.1,0.0",
        "--r",
        "1e-6",
        "--m",
        "2e5",
        "--samples",
        "100",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("r <= 1/(2 lambda^2 M)"));
    assert_eq!(out.lines().count(), 2);
    let first: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(first["check"], "comparability");
    assert!(first["error"].is_string());
}

#[test]
fn config_file_env_threads_and_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("lab.conf");
    std::fs::write(&conf, "# buffon defaults\nsamples = 1e4\nseed = 5\ncurve = parabola:h=0.5,I=[-0.9,0.9]\n").unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_favard-lab"))
            .args(["buffon", "--set", "cantor:1", "--config", p(&conf)])
            .env("FAVARD_LAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&b.stderr).contains("threads=3"));
    assert!(String::from_utf8_lossy(&a.stderr).contains("samples: 10000"));

    assert_eq!(lab(&["favard", "--set", "square", "--nope"]).0, 2);
    assert_eq!(lab(&["frobnicate"]).0, 2);
    assert_eq!(lab(&["--help"]).0, 0);
}
