//! Surface evolution in the Zakharov variables `(h, φ)`, with energy,
//! momentum and Taylor-coefficient diagnostics.
//!
//! Time stepping acts on `U = h + iΛφ`, for which
//! `U_t = -iΛU + N`, `N = (G(h) - |∇|)φ + iΛ(φ_t + h)`.

use crate::dtn::{dtn_series, Correction, DtnParams, DtnResult, DtnSolver};
use crate::error::{Error, Result};
use crate::grid::{holder_norm, sobolev_norm, z_norm, Grid, RealField, SpectralField, Symbol};
use crate::ops::{abs_grad, band_two_thirds, combine_i_lambda, divergence, lambda, partial, product, sum};
use num_complex::Complex64;
use std::io::Write;
use std::str::FromStr;
use std::sync::Mutex;

/// Sobolev index of the `H^N` monitor.
pub const MONITOR_SOBOLEV_INDEX: f64 = 11.0;

/// Surface elevation and boundary potential at time `t`.
#[derive(Clone, Debug)]
pub struct SurfaceState {
    pub t: f64,
    pub h: RealField,
    /// Boundary potential, kept mean-free.
    pub phi: RealField,
}

impl SurfaceState {
    /// State at `t`; the mean of `phi` is removed.
    pub fn new(t: f64, h: RealField, phi: RealField) -> Result<SurfaceState> {
        h.grid().check(phi.grid())?;
        let m = phi.mean();
        Ok(SurfaceState { t, h, phi: phi.map(|x| x - m) })
    }

    pub fn zero(grid: &Grid) -> SurfaceState {
        SurfaceState { t: 0.0, h: RealField::zeros(grid), phi: RealField::zeros(grid) }
    }

    pub fn grid(&self) -> &Grid {
        self.h.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.h.is_finite() && self.phi.is_finite()
    }

    /// Rebuild `(h, φ)` from `U = h + iΛφ`.
    pub fn from_complex(t: f64, u: &SpectralField) -> SurfaceState {
        let (hh, lphi) = u.split_re_im();
        let g = u.grid().clone();
        let phi = lphi.map_indexed(|idx, z| {
            let k = g.abs_xi(idx);
            if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z / k.sqrt()
            }
        });
        SurfaceState { t, h: hh.inverse(), phi: phi.inverse() }
    }
}

/// `U = h + i|∇|^{1/2}φ`, as coefficients.
pub fn complex_variable(state: &SurfaceState) -> SpectralField {
    combine_i_lambda(&state.h.transform(), &state.phi.transform())
}

/// Zero-frequency coefficients of `∇φ`, a proxy for the momentum.
pub fn momentum(state: &SurfaceState) -> [f64; 2] {
    let p = state.phi.transform();
    let r = state.grid().period();
    let a = partial(&p, 0).coeffs()[0] / (r * r);
    let b = partial(&p, 1).coeffs()[0] / (r * r);
    [a.norm(), b.norm()]
}

pub fn mean_h(state: &SurfaceState) -> f64 {
    state.h.mean()
}

/// Time integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Classical RK4 on `U`, linear part included.
    Rk4,
    /// RK4 on the profile `e^{itΛ}U` (integrating factor).
    Ifrk4,
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Scheme::Rk4),
            "ifrk4" => Ok(Scheme::Ifrk4),
            _ => Err(Error::InvalidArgument(format!("unknown scheme `{s}`"))),
        }
    }
}

/// How the Dirichlet-to-Neumann operator is evaluated inside the flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtnMode {
    /// Fixed-point extension solver.
    Full,
    /// Expansion through the cubic term.
    Series2,
}

impl FromStr for DtnMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(DtnMode::Full),
            "series2" => Ok(DtnMode::Series2),
            _ => Err(Error::InvalidArgument(format!("unknown dtn mode `{s}`"))),
        }
    }
}

/// Evolution operator for one grid; caches the extension solver.
pub struct Zakharov {
    grid: Grid,
    mode: DtnMode,
    solver: Option<DtnSolver>,
    warm: Mutex<Option<Correction>>,
    nonlinear: bool,
}

impl Zakharov {
    /// Default setting: full solver with tolerance `1e-10`.
    pub fn new(grid: &Grid) -> Result<Zakharov> {
        Zakharov::with_params(grid, &DtnParams::default().with_tol(1e-10), DtnMode::Full)
    }

    pub fn with_params(grid: &Grid, params: &DtnParams, mode: DtnMode) -> Result<Zakharov> {
        let solver = match mode {
            DtnMode::Full => Some(DtnSolver::new(grid, params)?),
            DtnMode::Series2 => None,
        };
        Ok(Zakharov { grid: grid.clone(), mode, solver, warm: Mutex::new(None), nonlinear: true })
    }

    /// Same system with the nonlinearity switched off (`N = 0`).
    pub fn linear(grid: &Grid) -> Zakharov {
        Zakharov { grid: grid.clone(), mode: DtnMode::Series2, solver: None, warm: Mutex::new(None), nonlinear: false }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn is_nonlinear(&self) -> bool {
        self.nonlinear
    }

    pub fn mode(&self) -> DtnMode {
        self.mode
    }

    /// `G(h)φ`, `B`, `V` for the configured mode.
    pub fn dtn(&self, h: &RealField, phi: &RealField) -> Result<DtnResult> {
        match &self.solver {
            Some(s) => {
                let mut warm = self.warm.lock().expect("warm-start lock");
                let (r, c) = s.solve_warm(h, phi, warm.as_ref())?;
                *warm = Some(c);
                Ok(r)
            }
            None => {
                let g = dtn_series(h, phi, 2);
                let (hh, p) = (h.transform(), phi.transform());
                let (h1, h2) = (partial(&hh, 0), partial(&hh, 1));
                let (p1, p2) = (partial(&p, 0), partial(&p, 1));
                let num = sum(&[&g.transform(), &product(&h1, &p1), &product(&h2, &p2)]).inverse();
                let q = product(&h1, &h1).add(&product(&h2, &h2)).expect("same grid").inverse();
                let b = truncate(&num.zip_map(&q, |a, c| a / (1.0 + c)).expect("same grid"));
                let bh = b.transform();
                let v1 = p1.sub(&product(&bh, &h1)).expect("same grid").inverse();
                let v2 = p2.sub(&product(&bh, &h2)).expect("same grid").inverse();
                Ok(DtnResult { g, b, v: (v1, v2), iterations: 0, residual: 0.0 })
            }
        }
    }

    /// `(h_t, φ_t)`.
    pub fn rhs(&self, state: &SurfaceState) -> Result<(RealField, RealField)> {
        let d = self.dtn(&state.h, &state.phi)?;
        let phi_t = phi_t_zakharov(&state.h, &state.phi, &d.g);
        Ok((d.g, phi_t))
    }

    /// `φ_t` through the velocity form `-h + ½(B² - 2BV·∇h - |V|²)`.
    pub fn phi_t_velocity_form(&self, state: &SurfaceState) -> Result<RealField> {
        let d = self.dtn(&state.h, &state.phi)?;
        let hh = state.h.transform();
        let (h1, h2) = (partial(&hh, 0), partial(&hh, 1));
        let b = d.b.transform();
        let (v1, v2) = (d.v.0.transform(), d.v.1.transform());
        let vdh = sum(&[&product(&v1, &h1), &product(&v2, &h2)]);
        let quad = sum(&[&product(&b, &b), &product(&b, &vdh).scale_re(-2.0), &product(&v1, &v1).scale_re(-1.0), &product(&v2, &v2).scale_re(-1.0)]);
        Ok(quad.scale_re(0.5).sub(&hh).expect("same grid").inverse())
    }

    /// The nonlinearity `N(U)`.
    pub fn nonlinearity(&self, u: &SpectralField) -> Result<SpectralField> {
        if !self.nonlinear {
            return Ok(SpectralField::zeros(&self.grid));
        }
        let st = SurfaceState::from_complex(0.0, u);
        let (ht, pt) = self.rhs(&st)?;
        let p = st.phi.transform();
        let a = ht.transform().sub(&abs_grad(&p)).expect("same grid");
        let b = pt.add(&st.h).expect("same grid").transform();
        Ok(combine_i_lambda(&a, &b))
    }

    fn full_rhs(&self, u: &SpectralField) -> Result<SpectralField> {
        let n = self.nonlinearity(u)?;
        let lin = lambda(u).scale(Complex64::new(0.0, -1.0));
        Ok(lin.add(&n).expect("same grid"))
    }

    /// Advance by `dt`. On failure the input state is the last good state.
    pub fn step(&self, state: &SurfaceState, dt: f64, scheme: Scheme) -> Result<SurfaceState> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
        }
        let kmax = (0..self.grid.len()).map(|i| self.grid.abs_xi(i)).fold(0.0, f64::max);
        if dt > 0.5 / kmax.sqrt() {
            return Err(Error::InvalidArgument(format!("time step {dt} exceeds 0.5/√k_max")));
        }
        self.step_signed(state, dt, scheme)
    }

    /// Advance by `dt`, which may be negative (time reversal).
    pub fn step_signed(&self, state: &SurfaceState, dt: f64, scheme: Scheme) -> Result<SurfaceState> {
        let t = state.t;
        let blow = |reason: String| Error::BlowUp { t, reason };
        let u = complex_variable(state);
        let next = match scheme {
            Scheme::Rk4 => {
                let k1 = self.full_rhs(&u).map_err(|e| wrap(e, t))?;
                let k2 = self.full_rhs(&axpy(&u, 0.5 * dt, &k1)).map_err(|e| wrap(e, t))?;
                let k3 = self.full_rhs(&axpy(&u, 0.5 * dt, &k2)).map_err(|e| wrap(e, t))?;
                let k4 = self.full_rhs(&axpy(&u, dt, &k3)).map_err(|e| wrap(e, t))?;
                let inc = sum(&[&k1, &k2.scale_re(2.0), &k3.scale_re(2.0), &k4]);
                axpy(&u, dt / 6.0, &inc)
            }
            Scheme::Ifrk4 => {
                let e_half = |f: &SpectralField| Symbol::HalfWave(0.5 * dt).apply(f).expect("half-wave");
                let e_full = |f: &SpectralField| Symbol::HalfWave(dt).apply(f).expect("half-wave");
                let k1 = self.nonlinearity(&u).map_err(|e| wrap(e, t))?;
                let k2 = self.nonlinearity(&e_half(&axpy(&u, 0.5 * dt, &k1))).map_err(|e| wrap(e, t))?;
                let uh = e_half(&u);
                let k3 = self.nonlinearity(&axpy(&uh, 0.5 * dt, &k2)).map_err(|e| wrap(e, t))?;
                let k4 = self.nonlinearity(&axpy(&e_full(&u), dt, &e_half(&k3))).map_err(|e| wrap(e, t))?;
                let mid = e_half(&k2.add(&k3).expect("same grid")).scale_re(2.0);
                let inc = sum(&[&e_full(&k1), &mid, &k4]);
                axpy(&e_full(&u), dt / 6.0, &inc)
            }
        };
        let out = SurfaceState::from_complex(t + dt, &next);
        if !out.is_finite() {
            return Err(blow("non-finite values".into()));
        }
        let limit = self.grid.period() / self.grid.n() as f64;
        let sup = out.h.max_abs();
        if sup > limit {
            return Err(blow(format!("sup|h| = {sup} exceeds {limit}")));
        }
        Ok(out)
    }

    /// `E = ∫ ½(φ G(h)φ + h²) dx`.
    pub fn energy(&self, state: &SurfaceState) -> Result<f64> {
        // G(h)0 = 0 for every surface, steep or not
        if state.phi.max_abs() == 0.0 {
            return Ok(0.5 * state.h.inner(&state.h));
        }
        let d = self.dtn(&state.h, &state.phi)?;
        Ok(0.5 * (state.phi.inner(&d.g) + state.h.inner(&state.h)))
    }

    /// Taylor coefficient `a = 1 + B_t + V·∇B`.
    pub fn taylor_coefficient(&self, state: &SurfaceState) -> Result<RealField> {
        let d = self.dtn(&state.h, &state.phi)?;
        let hh = state.h.transform();
        let (h1, h2) = (partial(&hh, 0), partial(&hh, 1));
        let b = d.b.transform();
        let (b1, b2) = (partial(&b, 0), partial(&b, 1));
        let (v1, v2) = (d.v.0.transform(), d.v.1.transform());
        let g = d.g.transform();
        let vdb = sum(&[&product(&v1, &b1), &product(&v2, &b2)]);
        let vdh = sum(&[&product(&v1, &h1), &product(&v2, &h2)]);
        let bdh = sum(&[&product(&b1, &h1), &product(&b2, &h2)]);
        let q = sum(&[&product(&h1, &h1), &product(&h2, &h2)]);
        // ∇h·(V·∇V)
        let vgrad = |w: &SpectralField| sum(&[&product(&v1, &partial(w, 0)), &product(&v2, &partial(w, 1))]);
        let h_vv = sum(&[&product(&h1, &vgrad(&v1)), &product(&h2, &vgrad(&v2))]);
        let atil = sum(&[
            &vdb,
            &product(&g, &divergence(&v1, &v2)).scale_re(-1.0),
            &h_vv.scale_re(-1.0),
            &product(&vdb, &q).scale_re(-1.0),
            &product(&vdh, &bdh),
        ]);
        let pot = sum(&[&product(&b, &b), &product(&v1, &v1), &product(&v2, &v2), &hh.scale_re(2.0)]).inverse();
        let gpot = self.dtn(&state.h, &pot)?.g.transform();
        let num = atil.sub(&gpot.scale_re(0.5)).expect("same grid").inverse().map(|x| 1.0 + x);
        let den = q.inverse();
        Ok(truncate(&num.zip_map(&den, |a, c| a / (1.0 + c)).expect("same grid")))
    }

    /// Advance `steps` steps of size `dt`, calling `observe` on the initial
    /// state and every `every` steps. Returns the final state.
    pub fn run(
        &self,
        state: &SurfaceState,
        dt: f64,
        steps: usize,
        scheme: Scheme,
        every: usize,
        mut observe: impl FnMut(usize, &SurfaceState) -> Result<()>,
    ) -> Result<SurfaceState> {
        let every = every.max(1);
        let mut s = state.clone();
        observe(0, &s)?;
        for i in 1..=steps {
            s = self.step(&s, dt, scheme)?;
            if i % every == 0 || i == steps {
                observe(i, &s)?;
            }
        }
        Ok(s)
    }

    /// One log record for `state`.
    pub fn record(&self, state: &SurfaceState) -> Result<TrajectoryRecord> {
        let u = complex_variable(state);
        let a = self.taylor_coefficient(state)?;
        let [px, py] = momentum(state);
        Ok(TrajectoryRecord {
            t: state.t,
            energy: self.energy(state)?,
            h_n: sobolev_norm(&u, MONITOR_SOBOLEV_INDEX),
            c6: holder_norm(&u, 6.0),
            z: z_norm(&u),
            sup_h: state.h.max_abs(),
            min_a: a.samples().iter().copied().fold(f64::INFINITY, f64::min),
            px,
            py,
        })
    }
}

fn wrap(e: Error, t: f64) -> Error {
    match e {
        Error::SteepSurface(s) => Error::BlowUp { t, reason: format!("surface slope {s} too large") },
        other => other,
    }
}

fn axpy(u: &SpectralField, a: f64, k: &SpectralField) -> SpectralField {
    u.zip_map(k, |x, y| x + a * y).expect("same grid")
}

fn truncate(f: &RealField) -> RealField {
    f.transform().truncate_box(band_two_thirds(f.grid().n())).inverse()
}

/// `φ_t = -h - ½|∇φ|² + (G + ∇h·∇φ)² / (2(1 + |∇h|²))`.
fn phi_t_zakharov(h: &RealField, phi: &RealField, g: &RealField) -> RealField {
    let (hh, p) = (h.transform(), phi.transform());
    let (h1, h2) = (partial(&hh, 0), partial(&hh, 1));
    let (p1, p2) = (partial(&p, 0), partial(&p, 1));
    let grad_sq = sum(&[&product(&p1, &p1), &product(&p2, &p2)]);
    let num = sum(&[&g.transform(), &product(&h1, &p1), &product(&h2, &p2)]);
    let num_sq = product(&num, &num).inverse();
    let q = sum(&[&product(&h1, &h1), &product(&h2, &h2)]).inverse();
    let ratio = truncate(&num_sq.zip_map(&q, |a, c| a / (2.0 * (1.0 + c))).expect("same grid"));
    let out = ratio.transform().sub(&grad_sq.scale_re(0.5)).expect("same grid").sub(&hh).expect("same grid");
    out.inverse()
}

/// `(h_t, φ_t)` with a fresh solver.
pub fn rhs(state: &SurfaceState, params: &DtnParams) -> Result<(RealField, RealField)> {
    Zakharov::with_params(state.grid(), params, DtnMode::Full)?.rhs(state)
}

/// Energy with a fresh solver.
pub fn energy(state: &SurfaceState, params: &DtnParams) -> Result<f64> {
    Zakharov::with_params(state.grid(), params, DtnMode::Full)?.energy(state)
}

/// Taylor coefficient with a fresh solver.
pub fn taylor_coefficient(state: &SurfaceState, params: &DtnParams) -> Result<RealField> {
    Zakharov::with_params(state.grid(), params, DtnMode::Full)?.taylor_coefficient(state)
}

/// One row of the trajectory log.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub energy: f64,
    /// `‖U‖_{H^N}`.
    pub h_n: f64,
    /// `‖U‖_{C_*^6}`.
    pub c6: f64,
    /// `‖U‖_Z`.
    pub z: f64,
    pub sup_h: f64,
    pub min_a: f64,
    pub px: f64,
    pub py: f64,
}

/// Append-only log of records with strictly increasing times.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryLog {
    pub records: Vec<TrajectoryRecord>,
    pub snapshots: Vec<String>,
}

impl TrajectoryLog {
    pub const HEADER: &'static str = "t,energy,hN,c6,z,sup_h,min_a,px,py";

    pub fn push(&mut self, r: TrajectoryRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(r.t > last.t) {
                return Err(Error::InvalidArgument(format!("record time {} does not increase", r.t)));
            }
        }
        self.records.push(r);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "{}", Self::HEADER)?;
        for r in &self.records {
            let row = [r.t, r.energy, r.h_n, r.c6, r.z, r.sup_h, r.min_a, r.px, r.py];
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Initial-data families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DataKind {
    /// Centered Gaussian bump in `h` (and optionally `φ`).
    Gaussian,
    /// `cos(ξ·x)` for the lattice mode `(m1, m2)`.
    Mode,
    /// Two bumps of opposite sign, offset along `x1`.
    TwoBump,
}

impl FromStr for DataKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(DataKind::Gaussian),
            "mode" => Ok(DataKind::Mode),
            "two_bump" => Ok(DataKind::TwoBump),
            _ => Err(Error::InvalidArgument(format!("unknown data kind `{s}`"))),
        }
    }
}

/// Parameters of the initial data.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub kind: DataKind,
    pub epsilon: f64,
    /// Bump width `σ`: coefficients `exp(-σ²|ξ|²/2)`.
    pub width: f64,
    /// Amplitude of `φ` relative to `h`.
    pub phi_ratio: f64,
    /// Lattice mode for [`DataKind::Mode`].
    pub mode: (i64, i64),
    /// Offset of each bump from the center for [`DataKind::TwoBump`].
    pub offset: f64,
}

impl InitialData {
    pub fn new(kind: DataKind, epsilon: f64) -> InitialData {
        InitialData { kind, epsilon, width: 1.0, phi_ratio: 0.0, mode: (1, 0), offset: 1.0 }
    }

    /// Unit-height periodic bump centered at `c`, mean removed.
    fn bump(&self, grid: &Grid, c: (f64, f64)) -> RealField {
        let s2 = self.width * self.width;
        let f = SpectralField::from_fn(grid, |a, b| {
            if a == 0.0 && b == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar((-0.5 * s2 * (a * a + b * b)).exp(), -(a * c.0 + b * c.1))
            }
        });
        let p = f.inverse();
        let peak = p.max_abs();
        p.scale(1.0 / peak)
    }

    fn shape(&self, grid: &Grid) -> RealField {
        let c = 0.5 * grid.period();
        match self.kind {
            DataKind::Gaussian => self.bump(grid, (c, c)),
            DataKind::Mode => {
                let k = grid.dk();
                let (m1, m2) = self.mode;
                RealField::from_fn(grid, |x, y| (k * (m1 as f64 * x + m2 as f64 * y)).cos())
            }
            DataKind::TwoBump => {
                let a = self.bump(grid, (c - self.offset, c));
                let b = self.bump(grid, (c + self.offset, c));
                let d = a.sub(&b).expect("same grid");
                let peak = d.max_abs();
                d.scale(1.0 / peak)
            }
        }
    }

    pub fn build(&self, grid: &Grid) -> Result<SurfaceState> {
        if !(self.epsilon >= 0.0) || self.epsilon > 0.1 {
            return Err(Error::InvalidArgument(format!("amplitude {} outside [0, 0.1]", self.epsilon)));
        }
        let s = self.shape(grid);
        SurfaceState::new(0.0, s.scale(self.epsilon), s.scale(self.epsilon * self.phi_ratio))
    }
}

/// Time for `‖U‖_{H^11}` to reach twice its initial value.
#[derive(Clone, Debug, PartialEq)]
pub struct LifespanRecord {
    pub epsilon: f64,
    pub period: f64,
    /// Doubling time, the blow-up time, or `t_max` when censored.
    pub t_double: f64,
    pub censored: bool,
    pub blowup: bool,
}

impl LifespanRecord {
    pub const HEADER: &'static str = "epsilon,R,T_double,censored,blowup";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{},{}",
            self.epsilon, self.period, self.t_double, self.censored as u8, self.blowup as u8
        )
    }
}

/// Evolve `state` until the monitored Sobolev norm doubles, blow-up is
/// detected, or `t_max` is reached. The norm is checked after every step.
pub fn time_to_double(
    system: &Zakharov,
    state: &SurfaceState,
    epsilon: f64,
    dt: f64,
    scheme: Scheme,
    t_max: f64,
) -> Result<LifespanRecord> {
    let period = state.grid().period();
    let n0 = sobolev_norm(&complex_variable(state), MONITOR_SOBOLEV_INDEX);
    let done = |t: f64, censored: bool, blowup: bool| LifespanRecord { epsilon, period, t_double: t, censored, blowup };
    if n0 == 0.0 {
        return Ok(done(t_max, true, false));
    }
    let steps = (t_max / dt).ceil() as usize;
    let mut s = state.clone();
    for _ in 0..steps {
        s = match system.step(&s, dt, scheme) {
            Ok(next) => next,
            Err(Error::BlowUp { t, .. }) => return Ok(done(t, false, true)),
            Err(e) => return Err(e),
        };
        if sobolev_norm(&complex_variable(&s), MONITOR_SOBOLEV_INDEX) >= 2.0 * n0 {
            return Ok(done(s.t, false, false));
        }
    }
    Ok(done(t_max, true, false))
}

/// Log-log slope of `T_double` against `ε`. Censored runs enter at `t_max`,
/// so an all-censored sweep has slope 0.
pub fn lifespan_slope(records: &[LifespanRecord]) -> f64 {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.epsilon.ln(), r.t_double.ln())).collect();
    crate::normalform::least_squares_slope(&pts)
}
