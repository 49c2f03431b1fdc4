//! The `zkblab` binary: exit codes, output layout, layering and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn zkblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zkblab")).args(args).env_remove("ZKBLAB_OUT").output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden_u_origin() -> f64 {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/u_origin.csv")).unwrap();
    text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap()
}

/// A short, guard-free run on a 16-box.
const SMALL_SOLVE: &[&str] = &[
    "--set", "grid.lx=16", "--set", "grid.ly=16", "--set", "grid.nx=64", "--set", "grid.ny=64",
    "--set", "time.t_end=0.5", "--set", "time.dt=0.05", "--set", "time.n_snapshots=3",
    "--set", "output.boundary_guard=1.0",
];

/// A quick linear-decay run on the default box.
const SHORT_DECAY: &[&str] = &[
    "--set", "decay.t_min=10", "--set", "decay.t_max=80", "--set", "decay.n_times=5",
    "--set", "decay.orders=[0]", "--set", "decay.tol_linf=[0.05]",
];

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn kernel_table_origin_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = zkblab(&["kernel-table", "--t", "1", "--mu", "1", "--out", path_arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("kernel_table.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,t,mu,l,route,value,est_error"));
    let golden = golden_u_origin();
    let mut routes = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        if f[0].parse::<f64>().unwrap() == 0.0 && f[1].parse::<f64>().unwrap() == 0.0 {
            let v: f64 = f[6].parse().unwrap();
            assert!((v - golden).abs() < 1e-6, "{} {v}", f[5]);
            routes.push(f[5].to_string());
        }
    }
    assert_eq!(routes, ["quadrature", "fft2d"]);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_arg(dir.path());
    let o = zkblab(&["solve", "--set", "grid.nx=511", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.nx"), "{}", stderr(&o));

    let o = zkblab(&["solve", "--set", "grid.bogus=1", "--out", out]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = zkblab(&["info", "--set", "equation.mu=-1", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("equation.mu"));

    let o = zkblab(&["info", "--set", "novalue", "--out", out]);
    assert_eq!(o.status.code(), Some(2));

    let o = zkblab(&["info", "--config", "/nonexistent/zkblab.toml", "--out", out]);
    assert_eq!(o.status.code(), Some(2));

    let o = zkblab(&["info", "--jobs", "0", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_layered_under_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.toml");
    std::fs::write(&file, "seed = 5\n[equation]\nmu = 2.0\np = 3\n").unwrap();
    let out = dir.path().join("out");
    let o = zkblab(&["info", "--config", path_arg(&file), "--set", "equation.p=4", "--out", path_arg(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let eff: toml::Table = std::fs::read_to_string(out.join("effective_config.toml")).unwrap().parse().unwrap();
    assert_eq!(eff["seed"].as_integer(), Some(5));
    assert_eq!(eff["equation"]["mu"].as_float(), Some(2.0));
    assert_eq!(eff["equation"]["p"].as_integer(), Some(4));

    let o = zkblab(&["info", "--config", path_arg(&file), "--seed", "9", "--out", path_arg(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let eff: toml::Table = std::fs::read_to_string(out.join("effective_config.toml")).unwrap().parse().unwrap();
    assert_eq!(eff["seed"].as_integer(), Some(9));
}

#[test]
fn env_overrides_out() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_zkblab"))
        .args(["info", "--out", path_arg(a.path())])
        .env("ZKBLAB_OUT", b.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(b.path().join("effective_config.toml").exists());
    assert!(!a.path().join("effective_config.toml").exists());
}

#[test]
fn info_prints_hash_and_constants() {
    let dir = tempfile::tempdir().unwrap();
    let o = zkblab(&["info", "--out", path_arg(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let hash = zkblab::config::Config::default().hash();
    assert!(text.contains(&hash), "{text}");
    assert!(text.contains("decay constant 0.162778"));
    assert!(dir.path().join("run.log").exists());
}

#[test]
fn solve_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["solve", "--out", path_arg(dir.path())];
    args.extend_from_slice(SMALL_SOLVE);
    let o = zkblab(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let d = dir.path();
    for f in ["effective_config.toml", "index.csv", "diagnostics.csv", "steps.csv", "residuals.json", "run.log"] {
        assert!(d.join(f).exists(), "{f}");
    }
    let index = std::fs::read_to_string(d.join("index.csv")).unwrap();
    let rows: Vec<&str> = index.lines().collect();
    assert_eq!(rows[0], "t,filename,l2,linf");
    assert_eq!(rows.len(), 4);
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        let field = zkblab::field::read_dump(d.join(f[1])).unwrap();
        assert_eq!((field.grid.nx, field.grid.ny), (64, 64));
        assert!((field.l2() - f[2].parse::<f64>().unwrap()).abs() < 1e-12);
    }
    let diag = std::fs::read_to_string(d.join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,l2,linf_u,linf_dxu,l2_dxu,h21,dissipation_residual,boundary_mass,h0,h1,k\n"));
    let res: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("residuals.json")).unwrap()).unwrap();
    assert!(res["max_dissipation_residual"].as_f64().unwrap() < 1e-4);
    assert!(res["duhamel_residual"].is_null());
}

#[test]
fn solve_guard_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["solve", "--out", path_arg(dir.path())];
    args.extend_from_slice(&SMALL_SOLVE[..SMALL_SOLVE.len() - 2]);
    let o = zkblab(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).to_lowercase().contains("boundary"), "{}", stderr(&o));
}

/// Every file except run.log under `dir`, relative path → bytes.
fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != "run.log" {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["solve", "decay"] {
        for d in [&a, &b] {
            let out = d.path().join(cmd);
            let mut args = vec![cmd, "--out", path_arg(&out)];
            args.extend_from_slice(if cmd == "solve" { SMALL_SOLVE } else { SHORT_DECAY });
            let o = zkblab(&args);
            assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stderr(&o));
        }
        let (ta, tb) = (tree(&a.path().join(cmd)), tree(&b.path().join(cmd)));
        assert_eq!(ta.len(), tb.len());
        for ((na, ba), (nb, bb)) in ta.iter().zip(&tb) {
            assert_eq!(na, nb);
            if na == "effective_config.toml" {
                continue; // differs only in output.dir
            }
            assert!(ba == bb, "{cmd}: {na} differs");
        }
    }
}

#[test]
fn failed_verdict_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["decay", "--out", path_arg(dir.path())];
    args.extend_from_slice(SHORT_DECAY);
    args.extend_from_slice(&["--set", "decay.tol_linf=[1e-9]"]);
    let o = zkblab(&args);
    assert_eq!(o.status.code(), Some(1));
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("FAIL linear_decay/linf_l0")));
    assert!(summary.lines().any(|l| l.starts_with("PASS linear_decay/bound_l0")));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("linear_decay/linf_l0.json")).unwrap()).unwrap();
    for key in ["experiment", "config_hash", "seed", "series", "slope", "theory_slope", "tolerance", "pass", "notes"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["pass"], false);
}
