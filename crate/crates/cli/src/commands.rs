//! Subcommand drivers. Each writes its CSV files into the output directory
//! and returns a short summary for the terminal.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use gravwave::dispersion::{decay_curve, strichartz_norm, strichartz_profile};
use gravwave::dtn::{dtn_cubic, dtn_order0, dtn_order1, DtnSolver};
use gravwave::grid::{sobolev_norm, write_field, Grid, RealField};
use gravwave::normalform::{least_squares_slope, residual_order, NormalFormRun};
use gravwave::zakharov::{complex_variable, lifespan_slope, time_to_double, LifespanRecord, SurfaceState, TrajectoryLog, Zakharov};
use gravwave::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    DtnVerify,
    Decay,
    Strichartz,
    Normalform,
    Lifespan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::DtnVerify => "dtn-verify",
            Command::Decay => "decay",
            Command::Strichartz => "strichartz",
            Command::Normalform => "normalform",
            Command::Lifespan => "lifespan",
        }
    }
}

/// What a finished command reports.
#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    /// Set when a trajectory stopped on blow-up.
    pub blowup: bool,
}

pub fn run(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    fs::create_dir_all(out)?;
    match cmd {
        Command::Simulate => simulate(cfg, out),
        Command::DtnVerify => dtn_verify(cfg, out),
        Command::Decay => decay(cfg, out),
        Command::Strichartz => strichartz(cfg, out),
        Command::Normalform => normalform(cfg, out),
        Command::Lifespan => lifespan(cfg, out),
    }
}

/// Seed of sweep cell `index`: the `index + 1`-th output of a splitmix64
/// stream started at the configured seed.
pub fn cell_seed(seed: u64, index: usize) -> u64 {
    let mut sm = SplitMix64::seed_from_u64(seed);
    (0..index).for_each(|_| {
        sm.gen::<u64>();
    });
    sm.gen()
}

/// Random real field built from lattice modes `1 <= |m| <= k_band`, scaled
/// to unit sup norm.
pub fn random_band_field(grid: &Grid, k_band: usize, seed: u64) -> RealField {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let k = k_band as i64;
    let mut terms = Vec::new();
    for m1 in 0..=k {
        for m2 in -k..=k {
            let r2 = m1 * m1 + m2 * m2;
            // one representative of each ±m pair
            if r2 == 0 || r2 > k * k || (m1 == 0 && m2 < 0) {
                continue;
            }
            terms.push((m1 as f64, m2 as f64, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    let dk = grid.dk();
    let f = RealField::from_fn(grid, |x, y| {
        terms.iter().map(|&(a, b, c, s)| {
            let th = dk * (a * x + b * y);
            c * th.cos() + s * th.sin()
        }).sum()
    });
    let peak = f.max_abs();
    if peak > 0.0 {
        f.scale(1.0 / peak)
    } else {
        f
    }
}

fn initial_state(cfg: &ExperimentConfig, epsilon: f64, seed: u64) -> Result<SurfaceState> {
    let mut data = cfg.data.clone();
    data.epsilon = epsilon;
    let s = data.build(&cfg.grid)?;
    if cfg.noise == 0.0 || epsilon == 0.0 {
        return Ok(s);
    }
    let bump = random_band_field(&cfg.grid, cfg.noise_band(), seed).scale(cfg.noise * epsilon);
    SurfaceState::new(0.0, s.h.add(&bump)?, s.phi)
}

fn header(cmd: Command, cfg: &ExperimentConfig, cells: &[u64]) -> String {
    let mut h = format!("# gravwave {}\n# n = {}, R = {:.16e}\n# seed = {}\n", cmd.name(), cfg.grid.n(), cfg.grid.period(), cfg.seed);
    if !cells.is_empty() {
        let list: Vec<String> = cells.iter().map(|s| s.to_string()).collect();
        h.push_str(&format!("# cell_seeds = {}\n", list.join(" ")));
    }
    h
}

fn create(path: &Path, head: &str) -> Result<BufWriter<File>> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(head.as_bytes())?;
    Ok(w)
}

fn e17(x: f64) -> String {
    format!("{x:.16e}")
}

fn steps(cfg: &ExperimentConfig) -> (usize, f64) {
    let n = ((cfg.t_final / cfg.dt).round() as usize).max(1);
    (n, cfg.t_final / n as f64)
}

fn simulate(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let seed = cell_seed(cfg.seed, 0);
    let sys = Zakharov::with_params(&cfg.grid, &cfg.dtn, cfg.mode)?;
    let s0 = initial_state(cfg, cfg.data.epsilon, seed)?;
    let (n, dt) = steps(cfg);
    let snap_dir = out.join("snapshots");
    if cfg.snapshot_every > 0 {
        fs::create_dir_all(&snap_dir)?;
    }
    let mut log = TrajectoryLog::default();
    let result = sys.run(&s0, dt, n, cfg.scheme, 1, |i, s| {
        if i % cfg.log_every == 0 || i == n {
            log.push(sys.record(s)?)?;
        }
        if cfg.snapshot_every > 0 && i % cfg.snapshot_every == 0 {
            for (tag, f) in [("h", &s.h), ("phi", &s.phi)] {
                let name = format!("{tag}_{i:06}.bin");
                write_field(&mut BufWriter::new(File::create(snap_dir.join(&name))?), f)?;
                log.snapshots.push(format!("snapshots/{name}"));
            }
        }
        Ok(())
    });
    let mut w = create(&out.join("trajectory.csv"), &header(Command::Simulate, cfg, &[seed]))?;
    log.write_csv(&mut w)?;
    w.flush()?;
    if !log.snapshots.is_empty() {
        fs::write(out.join("snapshots.txt"), log.snapshots.join("\n") + "\n")?;
    }
    let last = log.records.last().map(|r| r.t).unwrap_or(0.0);
    match result {
        Ok(_) => Ok(Report { lines: vec![format!("records = {}", log.records.len()), format!("t_final = {}", e17(last))], blowup: false }),
        Err(Error::BlowUp { t, reason }) => Ok(Report { lines: vec![format!("blow-up at t = {} ({reason})", e17(t))], blowup: true }),
        Err(Error::SteepSurface(slope)) => {
            Ok(Report { lines: vec![format!("surface slope {slope} too large at t = {}", e17(last))], blowup: true })
        }
        Err(e) => Err(e),
    }
}

fn dtn_verify(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let seeds = [cell_seed(cfg.seed, 0), cell_seed(cfg.seed, 1)];
    let band = cfg.cubic_band().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let solver = DtnSolver::new(&cfg.grid, &cfg.dtn)?;
    let h0 = random_band_field(&cfg.grid, band, seeds[0]);
    let p = random_band_field(&cfg.grid, band, seeds[1]);
    let eps = cfg.epsilons_or(&[1e-2, 1e-3, 1e-4]);
    let mut w = create(&out.join("dtn_verify.csv"), &header(Command::DtnVerify, cfg, &seeds))?;
    writeln!(w, "epsilon,residual0,residual1,residual2")?;
    let mut pts = [vec![], vec![], vec![]];
    for &e in &eps {
        let h = h0.scale(e);
        let r0 = solver.solve(&h, &p)?.g.sub(&dtn_order0(&p))?;
        let r1 = r0.sub(&dtn_order1(&h, &p))?;
        let r2 = r1.sub(&dtn_cubic(&h, &p))?;
        let r = [r0.max_abs(), r1.max_abs(), r2.max_abs()];
        writeln!(w, "{},{},{},{}", e17(e), e17(r[0]), e17(r[1]), e17(r[2]))?;
        for (k, v) in r.iter().enumerate() {
            pts[k].push((e.ln(), v.ln()));
        }
    }
    w.flush()?;
    let s: Vec<f64> = pts.iter().map(|p| least_squares_slope(p)).collect();
    Ok(Report { lines: vec![format!("slopes = {:.4} {:.4} {:.4} (expected 1 2 3)", s[0], s[1], s[2])], blowup: false })
}

fn decay(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let seed = cell_seed(cfg.seed, 0);
    let u0 = complex_variable(&initial_state(cfg, cfg.data.epsilon, seed)?);
    let times = cfg.times.clone().unwrap_or_else(|| (0..32).map(|j| cfg.t_final * j as f64 / 31.0).collect());
    let mut curve = decay_curve(&u0, &times, cfg.block)?;
    if let Some(win) = cfg.fit_window {
        curve = curve.with_fit(win)?;
    }
    let mut w = create(&out.join("decay.csv"), &header(Command::Decay, cfg, &[seed]))?;
    curve.write_csv(&mut w)?;
    w.flush()?;
    let [a, b] = curve.fit_window;
    Ok(Report { lines: vec![format!("slope = {:.4} on [{a}, {b}]", curve.fitted_slope)], blowup: false })
}

fn strichartz(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let seed = cell_seed(cfg.seed, 0);
    let u0 = complex_variable(&initial_state(cfg, cfg.data.epsilon, seed)?);
    let h7 = sobolev_norm(&u0, 7.0);
    let finals = cfg.times.clone().unwrap_or_else(|| vec![cfg.t_final]);
    let r = cfg.grid.period();
    let rows = finals
        .par_iter()
        .map(|&t| {
            let norm = strichartz_norm(&u0, t, cfg.sample_dt.unwrap_or(t / 2048.0))?;
            Ok((t, norm, norm / (strichartz_profile(t, r) * h7)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = create(&out.join("strichartz.csv"), &header(Command::Strichartz, cfg, &[seed]))?;
    writeln!(w, "T,norm,bound_ratio")?;
    for (t, n, q) in &rows {
        writeln!(w, "{},{},{}", e17(*t), e17(*n), e17(*q))?;
    }
    w.flush()?;
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x.2), b.max(x.2)));
    Ok(Report { lines: vec![format!("bound ratio max/min = {:.4}", hi / lo)], blowup: false })
}

fn normalform(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let run = NormalFormRun {
        grid: cfg.grid.clone(),
        data: cfg.data.clone(),
        epsilons: cfg.epsilons_or(&[0.02, 0.01, 0.005]),
        t_final: cfg.t_final,
        dt: cfg.dt,
        scheme: cfg.scheme,
    };
    let sys = Zakharov::with_params(&cfg.grid, &cfg.dtn, cfg.mode)?;
    let rep = residual_order(&run, &sys)?;
    let mut w = create(&out.join("normalform.csv"), &header(Command::Normalform, cfg, &[]))?;
    rep.write_csv(&mut w)?;
    w.flush()?;
    Ok(Report { lines: vec![rep.summary()], blowup: false })
}

fn lifespan(cfg: &ExperimentConfig, out: &Path) -> Result<Report> {
    let eps = cfg.epsilons_or(&[0.02, 0.01, 0.005]);
    let seeds: Vec<u64> = (0..eps.len()).map(|i| cell_seed(cfg.seed, i)).collect();
    let t_max = cfg.t_max.unwrap_or(50.0 * cfg.grid.period());
    // one solver per cell: warm starts must not leak between trajectories
    let records = eps
        .par_iter()
        .zip(&seeds)
        .map(|(&e, &seed)| {
            let sys = Zakharov::with_params(&cfg.grid, &cfg.dtn, cfg.mode)?;
            let s0 = initial_state(cfg, e, seed)?;
            time_to_double(&sys, &s0, e, cfg.dt, cfg.scheme, t_max)
        })
        .collect::<Result<Vec<LifespanRecord>>>()?;
    let mut w = create(&out.join("lifespan.csv"), &header(Command::Lifespan, cfg, &seeds))?;
    writeln!(w, "{}", LifespanRecord::HEADER)?;
    for r in &records {
        writeln!(w, "{}", r.csv_row())?;
    }
    w.flush()?;
    let slope = lifespan_slope(&records);
    let censored = records.iter().filter(|r| r.censored).count();
    Ok(Report {
        lines: vec![format!("log-log slope = {slope:.4}"), format!("censored = {censored} of {}", records.len())],
        blowup: records.iter().any(|r| r.blowup),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_seeds_are_distinct_and_stable() {
        let s: Vec<u64> = (0..4).map(|i| cell_seed(7, i)).collect();
        assert_eq!(s, (0..4).map(|i| cell_seed(7, i)).collect::<Vec<_>>());
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(s[i], s[j]);
            }
        }
        assert_ne!(cell_seed(7, 0), cell_seed(8, 0));
    }

    #[test]
    fn band_field_is_normalized_and_band_limited() {
        let g = Grid::new(32, 6.0).unwrap();
        let f = random_band_field(&g, 3, 11);
        assert!((f.max_abs() - 1.0).abs() < 1e-15);
        let c = f.transform();
        for i in 0..g.len() {
            if g.abs_xi(i) > 3.0 * g.dk() + 1e-12 {
                assert!(c.coeffs()[i].norm() < 1e-12);
            }
        }
    }
}
