use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const LIENARD: &str = "kind=L1\nalpha=0.45\nbeta=0.5\ngamma=0.5\nf1=0.2\nomega1=0.7315\n";

fn eemit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eemit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn eemit")
}

fn with_config(text: &str) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), text).unwrap();
    dir
}

fn run(dir: &Path, cmd: &str, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", "run.cfg", "--no-svg"];
    args.extend_from_slice(extra);
    eemit(dir, &args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn empty_config_is_a_parse_error() {
    let dir = with_config("");
    let o = run(dir.path(), "stats", &[]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_a_validation_error_naming_the_key() {
    let dir = with_config(&format!("{LIENARD}foo=1\n"));
    let o = run(dir.path(), "stats", &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("foo"), "{}", stderr(&o));
}

#[test]
fn missing_config_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "stats", &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_seed_ic_is_a_parse_error() {
    let dir = with_config(LIENARD);
    let o = run(dir.path(), "simulate", &["--seed-ic", "1;2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unused_parameter_is_rejected() {
    let dir = with_config(&format!("{LIENARD}lambda=0.5\n"));
    let o = run(dir.path(), "stats", &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn zero_system_at_rest_stays_at_rest() {
    let dir = with_config("kind=L1\nx0=0\ny0=0\ntransient=0\nrecord=1000\n");
    let o = run(dir.path(), "simulate", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1000);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(&cols[1..], ["0", "0"], "{row}");
    }
}

#[test]
fn seed_ic_overrides_config() {
    let dir = with_config("kind=L1\nx0=0\ny0=0\ntransient=0\nrecord=10\n");
    let o = run(dir.path(), "simulate", &["--seed-ic", "-1.5,0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert_eq!(first, "0,-1.5,0.25");
}

#[test]
fn scan2d_writes_one_row_per_cell() {
    let cfg = format!(
        "{LIENARD}record=20000\nscan.param=A\nscan.lo=0\nscan.hi=0.001\nscan.points=2\n\
         scan2.param=f1\nscan2.lo=0.15\nscan2.hi=0.25\nscan2.points=2\n"
    );
    let dir = with_config(&cfg);
    let o = run(dir.path(), "scan2d", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("out/scan2d.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "p1,p2,probability,diverged");
}

#[test]
fn outputs_are_bit_identical_across_runs_and_worker_counts() {
    let cfg = format!(
        "{LIENARD}record=50000\nics=0.1,0.1;-0.5,0.3\nscan.param=A\nscan.lo=0\nscan.hi=0.001\n\
         scan.points=5\nscan.mle=true\nmle.steps=20000\n"
    );
    let dir = with_config(&cfg);
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "1", "3"].iter().enumerate() {
        let out = format!("out{i}");
        let o = run(
            dir.path(),
            "bifurcate",
            &["--workers", workers, "--out", &out],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        let scan = fs::read(dir.path().join(&out).join("scan1d.csv")).unwrap();
        let bif = fs::read(dir.path().join(&out).join("bifurcation.csv")).unwrap();
        outputs.push((scan, bif));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn basin_is_deterministic_and_labels_every_cell() {
    let cfg = "kind=LM\nalpha=0.0135\nbeta=0.8111\ngamma=-2.65\nf1=2.0\nomega1=0.758\n\
               basin.nx=3\nbasin.ny=2\nmle.transient=20000\nmle.steps=20000\n";
    let dir = with_config(cfg);
    let a = run(dir.path(), "basin", &["--out", "a", "--workers", "2"]);
    let b = run(dir.path(), "basin", &["--out", "b", "--workers", "1"]);
    assert!(a.status.success() && b.status.success(), "{}", stderr(&a));
    let ta = fs::read_to_string(dir.path().join("a/basin.csv")).unwrap();
    let tb = fs::read_to_string(dir.path().join("b/basin.csv")).unwrap();
    assert_eq!(ta, tb);
    let labels: Vec<&str> = ta
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(labels.len(), 6);
    assert!(labels
        .iter()
        .all(|l| ["periodic", "chaotic", "divergent"].contains(l)));
}

#[test]
fn repro_list_and_unknown_preset() {
    let dir = tempfile::tempdir().unwrap();
    let o = eemit(dir.path(), &["repro", "--list"]);
    assert!(o.status.success());
    let listing = String::from_utf8_lossy(&o.stdout);
    assert!(listing.lines().any(|l| l.starts_with("fig1a")));
    let o = eemit(dir.path(), &["repro", "nope"]);
    assert_eq!(o.status.code(), Some(3));
}
