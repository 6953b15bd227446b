use std::path::Path;
use std::process::Command;

fn waistwidth(out: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_waistwidth"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env("WAISTWIDTH_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn theorem22_certificate_below_eps() {
    let dir = tempfile::tempdir().unwrap();
    let o = waistwidth(dir.path(), &["construct", "theorem22", "--m", "1", "--d", "1", "--eps", "0.2", "--samples", "20000", "--grid", "21"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = json(&dir.path().join("theorem22.cert.json"));
    assert!(cert["width"].as_f64().unwrap() < 0.2);
    assert_eq!(cert["passed"], true);
    assert_eq!(cert["fibers"].as_array().unwrap().len(), 21);
}

#[test]
fn gromov_cube_two_sided() {
    let dir = tempfile::tempdir().unwrap();
    let o = waistwidth(dir.path(), &["construct", "gromov-cube", "--eps", "0.125", "--samples", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = json(&dir.path().join("gromov-cube.cert.json"));
    assert_eq!(cert["extra"]["all_sides_witnessed"], true);
}

#[test]
fn bundle_core_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let o = waistwidth(dir.path(), &["construct", "bundle", "--m", "1", "--k", "0", "--eps", "0.05", "--samples", "4000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = json(&dir.path().join("bundle.cert.json"));
    assert_eq!(cert["extra"]["core"]["ok"], true);
    assert_eq!(cert["extra"]["containment_violations"], 0);
    let manifest = json(&dir.path().join("bundle.json"));
    assert_eq!(manifest["manifest"]["n"], 2);
}

#[test]
fn annulus_interpolation_csv_within_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = waistwidth(dir.path(), &["interpolate", "--demo", "annulus", "--grid", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rd = csv::Reader::from_path(dir.path().join("interpolate.csv")).unwrap();
    let mut n = 0;
    for r in rd.records() {
        let r = r.unwrap();
        assert!(r[1].parse::<f64>().unwrap() <= r[2].parse::<f64>().unwrap() + 1e-9);
        n += 1;
    }
    assert!(n > 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(waistwidth(dir.path(), &["construct", "theorem22", "--eps", "-1"]).status.code(), Some(2));
    assert_eq!(waistwidth(dir.path(), &["no-such-command"]).status.code(), Some(2));
    let o = waistwidth(dir.path(), &["--tolerance", "-50", "interpolate", "--demo", "disk", "--grid", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invariant failed"));
    assert_eq!(waistwidth(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn constants_table_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = waistwidth(dir.path(), &["constants", "--m", "1", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("1/3"));
}

#[test]
fn same_seed_same_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--seed", "9", "construct", "theorem22", "--samples", "5000", "--grid", "5"];
    waistwidth(a.path(), &args);
    waistwidth(b.path(), &args);
    for f in ["theorem22.cert.json", "theorem22.csv"] {
        assert!(std::fs::read(a.path().join(f)).unwrap() == std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}
