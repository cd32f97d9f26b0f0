//! End-to-end runs of every subcommand at n = 32.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn gravwave(cmd: &str, config: &str, dir: &Path, threads: Option<&str>) -> (Output, Duration) {
    let path = dir.join("run.cfg");
    fs::write(&path, config).unwrap();
    let mut c = Command::new(env!("CARGO_BIN_EXE_gravwave"));
    c.args([cmd, "--config", path.to_str().unwrap(), "--out", dir.join("out").to_str().unwrap()]);
    if let Some(t) = threads {
        c.env("GRAVWAVE_THREADS", t);
    }
    let t0 = Instant::now();
    let out = c.output().unwrap();
    (out, t0.elapsed())
}

fn ok(cmd: &str, config: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let (out, took) = gravwave(cmd, config, dir.path(), None);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{cmd}: {}\n{stdout}", String::from_utf8_lossy(&out.stderr));
    assert!(took < Duration::from_secs(60), "{cmd} took {took:?}");
    (dir, stdout)
}

/// Data rows of a CSV file after the `#` metadata lines and the header.
fn rows(path: &Path, header: &str) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some(header));
    lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

fn metadata(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().filter(|l| l.starts_with('#')).map(String::from).collect()
}

#[test]
fn simulate_zero_amplitude_is_identically_zero() {
    let (dir, _) = ok("simulate", "grid.n = 32\ndata.epsilon = 0\nevolution.dt = 0.01\nevolution.T = 0.1\n");
    let r = rows(&dir.path().join("out/trajectory.csv"), "t,energy,hN,c6,z,sup_h,min_a,px,py");
    assert_eq!(r.len(), 11);
    for row in &r {
        for (j, v) in row.iter().enumerate() {
            match j {
                0 => {}
                6 => assert_eq!(*v, 1.0),
                _ => assert_eq!(*v, 0.0, "column {j}"),
            }
        }
    }
}

#[test]
fn simulate_writes_snapshots_and_seed() {
    let cfg = "grid.n = 32\ndata.epsilon = 0.01\ndata.noise = 0.2\ndata.seed = 9\nevolution.dt = 0.02\nevolution.T = 0.2\nevolution.snapshot_every = 5\nevolution.log_every = 2\n";
    let (dir, _) = ok("simulate", cfg);
    let out = dir.path().join("out");
    let r = rows(&out.join("trajectory.csv"), "t,energy,hN,c6,z,sup_h,min_a,px,py");
    assert_eq!(r.len(), 6);
    let drift = (r[5][1] - r[0][1]).abs() / r[0][1];
    assert!(drift < 1e-6, "energy drift {drift}");
    let snaps = fs::read_to_string(out.join("snapshots.txt")).unwrap();
    assert_eq!(snaps.lines().count(), 6);
    for name in snaps.lines() {
        assert!(out.join(name).exists());
    }
    assert!(metadata(&out.join("trajectory.csv")).contains(&"# seed = 9".to_string()));
}

#[test]
fn dtn_verify_reports_orders() {
    let (dir, stdout) = ok("dtn-verify", "grid.n = 32\n");
    let slopes: Vec<f64> = stdout
        .lines()
        .find(|l| l.contains("slopes ="))
        .unwrap()
        .split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .take(3)
        .map(|s| s.parse().unwrap())
        .collect();
    for (s, want, tol) in [(slopes[0], 1.0, 0.1), (slopes[1], 2.0, 0.15), (slopes[2], 3.0, 0.2)] {
        assert!((s - want).abs() <= tol, "{slopes:?}");
    }
    let r = rows(&dir.path().join("out/dtn_verify.csv"), "epsilon,residual0,residual1,residual2");
    assert_eq!(r.len(), 3);
}

#[test]
fn decay_and_strichartz_run() {
    let (dir, stdout) = ok("decay", "grid.n = 32\ngrid.R = 20\nevolution.T = 8\nexperiment.fit_window = 2, 8\n");
    assert!(stdout.contains("slope"));
    let r = rows(&dir.path().join("out/decay.csv"), "t,value");
    assert_eq!(r.len(), 32);
    assert!(r[31][1] < r[0][1]);

    let (dir, _) = ok("strichartz", "grid.n = 32\ngrid.R = 20\nexperiment.times = 1, 4, 16\n");
    let r = rows(&dir.path().join("out/strichartz.csv"), "T,norm,bound_ratio");
    assert_eq!(r.len(), 3);
    assert!(r.windows(2).all(|w| w[1][1] > w[0][1]));
}

#[test]
fn normalform_and_lifespan_run() {
    let (dir, stdout) = ok("normalform", "grid.n = 32\ndata.phi_ratio = 0.7\nevolution.T = 0.5\nevolution.dt = 0.05\n");
    assert!(stdout.contains("slope(residual)"));
    assert_eq!(rows(&dir.path().join("out/normalform.csv"), "epsilon,duhamel_norm,residual_norm").len(), 3);

    let cfg = "grid.n = 32\nevolution.dt = 0.05\nexperiment.T_max = 1\nexperiment.epsilons = 0.02, 0.01\n";
    let (dir, stdout) = ok("lifespan", cfg);
    assert!(stdout.contains("log-log slope"));
    let path = dir.path().join("out/lifespan.csv");
    let r = rows(&path, "epsilon,R,T_double,censored,blowup");
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|row| row[2] > 0.0 && row[3] == 1.0));
    assert!(metadata(&path).iter().any(|l| l.starts_with("# cell_seeds = ")));
}

#[test]
fn outputs_are_bit_identical() {
    let cfg = "grid.n = 32\ndata.epsilon = 0.02\ndata.noise = 0.5\ndata.seed = 1234\nevolution.dt = 0.02\nevolution.T = 0.2\n";
    let read = |threads| {
        let dir = tempfile::tempdir().unwrap();
        let (out, _) = gravwave("simulate", cfg, dir.path(), threads);
        assert!(out.status.success());
        fs::read(dir.path().join("out/trajectory.csv")).unwrap()
    };
    let a = read(None);
    assert_eq!(a, read(None));
    assert_eq!(a, read(Some("1")));

    let lifespan = "grid.n = 32\ndata.noise = 0.3\nevolution.dt = 0.05\nexperiment.T_max = 0.5\n";
    let read = |threads| {
        let dir = tempfile::tempdir().unwrap();
        let (out, _) = gravwave("lifespan", lifespan, dir.path(), threads);
        assert!(out.status.success());
        fs::read(dir.path().join("out/lifespan.csv")).unwrap()
    };
    assert_eq!(read(Some("1")), read(Some("3")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (out, _) = gravwave("simulate", "grid.n = 32\ndata.epsilon = 0.5\n", dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("data.epsilon"));
    assert!(!dir.path().join("out").exists());

    let (out, _) = gravwave("simulate", "grid.n = 32\nbogus.key = 1\n", dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus.key"));

    // slope 0.1 · 10 exceeds what the extension solver accepts
    let steep = "grid.n = 32\ndata.kind = mode\ndata.mode = 10, 0\ndata.epsilon = 0.1\nevolution.T = 0.1\n";
    let (out, _) = gravwave("simulate", steep, dir.path(), None);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let (out, _) = gravwave("dtn-verify", "grid.n = 32\ndtn.max_iter = 1\ndtn.tol = 1e-16\n", dir.path(), None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
