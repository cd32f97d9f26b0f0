//! Quadratic normal form: multipliers, resonance phases, profiles and the
//! boundary terms `W_{μν}` that remove the quadratic part of the flow.
//!
//! With `U_+ = U` and `U_-` the transform of `conj U`, the quadratic
//! nonlinearity is `N₂(ξ) = R^{-2} Σ_{μν} Σ_{ξ₁+ξ₂=ξ} m_{μν}(ξ₁,ξ₂) U_μ(ξ₁) U_ν(ξ₂)`
//! with `m_{μν} = (iν/4) m₁ - (iμν/8) m₂`.

use crate::error::{Error, Result};
use crate::grid::{l2_norm, Grid, SpectralField, Symbol};
use crate::ops::{abs_grad, combine_i_lambda, divergence, partial, product};
use crate::zakharov::{complex_variable, InitialData, Scheme, SurfaceState, Zakharov};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;

/// Lower bound `c` in `|Φ_{μν}| ≥ c·min(|ξ₁|,|ξ₂|,|ξ₁+ξ₂|)^{1/2}`; the
/// infimum `2 - √2` is reached by equal collinear pairs.
pub const PHASE_BOUND: f64 = 0.5857;

/// Coefficients below this fraction of the maximum are skipped.
pub const RETAIN_THRESHOLD: f64 = 1e-14;

pub type Vec2 = (f64, f64);

/// Which of the two basic multipliers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    M1,
    M2,
}

/// Sign `±` selecting `U_±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

fn norm(v: Vec2) -> f64 {
    v.0.hypot(v.1)
}

fn dot(a: Vec2, b: Vec2) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn degenerate(x1: Vec2, x2: Vec2) -> bool {
    let s = (x1.0 + x2.0, x1.1 + x2.1);
    norm(x1) == 0.0 || norm(x2) == 0.0 || norm(s) == 0.0
}

/// `m₁ = (|ξ₁+ξ₂||ξ₂| - (ξ₁+ξ₂)·ξ₂)/√|ξ₂|`,
/// `m₂ = √|ξ₁+ξ₂| (|ξ₁||ξ₂| + ξ₁·ξ₂)/√(|ξ₁||ξ₂|)`; zero at degenerate pairs.
pub fn m_symbol(x1: Vec2, x2: Vec2, which: Which) -> f64 {
    if degenerate(x1, x2) {
        return 0.0;
    }
    let s = (x1.0 + x2.0, x1.1 + x2.1);
    let (a1, a2, a3) = (norm(x1), norm(x2), norm(s));
    match which {
        Which::M1 => (a3 * a2 - dot(s, x2)) / a2.sqrt(),
        Which::M2 => a3.sqrt() * (a1 * a2 + dot(x1, x2)) / (a1 * a2).sqrt(),
    }
}

/// `Φ_{μν} = √|ξ₁+ξ₂| - μ√|ξ₁| - ν√|ξ₂|`.
pub fn phase(x1: Vec2, x2: Vec2, mu: Sign, nu: Sign) -> f64 {
    let s = (x1.0 + x2.0, x1.1 + x2.1);
    norm(s).sqrt() - mu.value() * norm(x1).sqrt() - nu.value() * norm(x2).sqrt()
}

/// `m_{μν}` as it enters `N₂`.
pub fn m_mu_nu(x1: Vec2, x2: Vec2, mu: Sign, nu: Sign) -> Complex64 {
    let (m, n) = (mu.value(), nu.value());
    let a = m_symbol(x1, x2, Which::M1);
    let b = m_symbol(x1, x2, Which::M2);
    Complex64::new(0.0, 0.25 * n * a - 0.125 * m * n * b)
}

/// `m_{μν}/(iΦ_{μν})`, zero at degenerate pairs.
pub fn boundary_multiplier(x1: Vec2, x2: Vec2, mu: Sign, nu: Sign) -> Complex64 {
    if degenerate(x1, x2) {
        return Complex64::new(0.0, 0.0);
    }
    m_mu_nu(x1, x2, mu, nu) / Complex64::new(0.0, phase(x1, x2, mu, nu))
}

/// One sampled multiplier value.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSample {
    pub xi1: Vec2,
    pub xi2: Vec2,
    pub which: Which,
    pub mu: Sign,
    pub nu: Sign,
    pub m: f64,
    pub phase: f64,
    /// `m/Φ`, zero at degenerate pairs.
    pub ratio: f64,
}

impl MultiplierSample {
    pub fn new(xi1: Vec2, xi2: Vec2, which: Which, mu: Sign, nu: Sign) -> MultiplierSample {
        let m = m_symbol(xi1, xi2, which);
        let phase = phase(xi1, xi2, mu, nu);
        let ratio = if degenerate(xi1, xi2) { 0.0 } else { m / phase };
        MultiplierSample { xi1, xi2, which, mu, nu, m, phase, ratio }
    }

    /// `min(|ξ₁|, |ξ₂|, |ξ₁+ξ₂|)`.
    pub fn min_frequency(&self) -> f64 {
        let s = (self.xi1.0 + self.xi2.0, self.xi1.1 + self.xi2.1);
        norm(self.xi1).min(norm(self.xi2)).min(norm(s))
    }

    pub fn max_frequency(&self) -> f64 {
        let s = (self.xi1.0 + self.xi2.0, self.xi1.1 + self.xi2.1);
        norm(self.xi1).max(norm(self.xi2)).max(norm(s))
    }
}

/// `count` random pairs of nonzero integer lattice vectors with entries in
/// `[-bound, bound]`, all sign and multiplier choices cycled.
pub fn random_samples(count: usize, bound: i64, seed: u64) -> Vec<MultiplierSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut v = || (rng.gen_range(-bound..=bound) as f64, rng.gen_range(-bound..=bound) as f64);
        let (a, b) = (v(), v());
        if degenerate(a, b) {
            continue;
        }
        let i = out.len();
        let which = if i % 2 == 0 { Which::M1 } else { Which::M2 };
        let mu = Sign::ALL[(i / 2) % 2];
        let nu = Sign::ALL[(i / 4) % 2];
        out.push(MultiplierSample::new(a, b, which, mu, nu));
    }
    out
}

/// Smallest `|Φ|/min(|ξ₁|,|ξ₂|,|ξ₁+ξ₂|)^{1/2}` over the samples.
pub fn phase_bound_ratio(samples: &[MultiplierSample]) -> f64 {
    samples.iter().map(|s| s.phase.abs() / s.min_frequency().sqrt()).fold(f64::INFINITY, f64::min)
}

/// Exponent of the vanishing of `m` at small input frequencies. With
/// `ρ = min(|ξ₁|,|ξ₂|)/max(|ξ₁|,|ξ₂|)` the samples are put in log-spaced
/// bins on `[ρ_lo, ρ_hi]`, the largest `|m|/(|ξ₁+ξ₂|^{1/2} max(|ξ₁|,|ξ₂|))`
/// of each bin is kept, and the slope of its logarithm against `log ρ` is
/// returned. The exact envelope is `2ρ^{1/2}`, reached by parallel pairs.
pub fn null_condition_exponent(samples: &[MultiplierSample], rho_lo: f64, rho_hi: f64, bins: usize) -> Result<f64> {
    let (llo, lhi) = (rho_lo.ln(), rho_hi.ln());
    let mut best = vec![0.0f64; bins];
    for s in samples {
        let (a1, a2) = (norm(s.xi1), norm(s.xi2));
        let a3 = norm((s.xi1.0 + s.xi2.0, s.xi1.1 + s.xi2.1));
        let l = (a1.min(a2) / a1.max(a2)).ln();
        if l < llo || l >= lhi {
            continue;
        }
        let b = (((l - llo) / (lhi - llo)) * bins as f64) as usize;
        let q = s.m.abs() / (a3.sqrt() * a1.max(a2));
        best[b.min(bins - 1)] = best[b.min(bins - 1)].max(q);
    }
    let pts: Vec<(f64, f64)> = best
        .iter()
        .enumerate()
        .filter(|(_, &q)| q > 0.0)
        .map(|(b, &q)| (llo + (b as f64 + 0.5) * (lhi - llo) / bins as f64, q.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidArgument("too few populated bins".into()));
    }
    Ok(least_squares_slope(&pts))
}

/// Ordinary least-squares slope of the points `(x, y)`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Profile `Υ = e^{itΛ}U`.
pub fn profile(u: &SpectralField, t: f64) -> SpectralField {
    Symbol::HalfWave(-t).apply(u).expect("half-wave")
}

/// `U_μ`: `U` itself or the transform of its conjugate.
fn signed(u: &SpectralField, s: Sign) -> SpectralField {
    match s {
        Sign::Plus => u.clone(),
        Sign::Minus => u.conj_reflect(),
    }
}

/// Default frequency cap: the `n/3` shell.
pub fn default_xi_max(grid: &Grid) -> f64 {
    grid.dk() * grid.n() as f64 / 3.0
}

fn modes(f: &SpectralField, xi_max: f64) -> Vec<(i64, i64, Vec2, Complex64)> {
    let g = f.grid();
    let n = g.n();
    let cut = RETAIN_THRESHOLD * f.max_abs();
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(idx, z)| z.norm() > cut && !g.is_nyquist(*idx) && g.abs_xi(*idx) <= xi_max)
        .map(|(idx, &z)| (g.mode(idx / n), g.mode(idx % n), g.xi(idx), z))
        .collect()
}

/// `R^{-2} Σ_{ξ₁+ξ₂=ξ} w(ξ₁,ξ₂) A(ξ₁) B(ξ₂)` over retained lattice pairs.
fn bilinear(a: &SpectralField, b: &SpectralField, xi_max: f64, w: impl Fn(Vec2, Vec2) -> Complex64) -> SpectralField {
    let grid = a.grid().clone();
    let n = grid.n();
    let half = (n / 2) as i64;
    let am = modes(a, xi_max);
    let bm = modes(b, xi_max);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for &(p1, p2, x1, za) in &am {
        for &(q1, q2, x2, zb) in &bm {
            let (s1, s2) = (p1 + q1, p2 + q2);
            if s1 <= -half || s1 >= half || s2 <= -half || s2 >= half {
                continue;
            }
            let c = w(x1, x2);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            out[grid.index_of(s1).unwrap() * n + grid.index_of(s2).unwrap()] += c * za * zb;
        }
    }
    let r = grid.period();
    SpectralField::from_coeffs(grid, out).scale_re(1.0 / (r * r))
}

/// Quadratic boundary term `W_{μν}` in profile form:
/// `e^{-itΛ}W = R^{-2} Σ (m_{μν}/(iΦ_{μν})) U_μ U_ν`.
pub fn quadratic_boundary(u: &SpectralField, t: f64, mu: Sign, nu: Sign) -> SpectralField {
    quadratic_boundary_capped(u, t, mu, nu, default_xi_max(u.grid()))
}

pub fn quadratic_boundary_capped(u: &SpectralField, t: f64, mu: Sign, nu: Sign, xi_max: f64) -> SpectralField {
    let w = bilinear(&signed(u, mu), &signed(u, nu), xi_max, |a, b| boundary_multiplier(a, b, mu, nu));
    profile(&w, t)
}

/// Sum of `W_{μν}` over the four sign pairs.
pub fn quadratic_boundary_total(u: &SpectralField, t: f64) -> SpectralField {
    let mut acc = SpectralField::zeros(u.grid());
    for mu in Sign::ALL {
        for nu in Sign::ALL {
            acc = acc.add(&quadratic_boundary(u, t, mu, nu)).expect("same grid");
        }
    }
    acc
}

/// `N_{μν} = R^{-2} Σ m_{μν} U_μ U_ν`.
pub fn n2_bilinear(u: &SpectralField, mu: Sign, nu: Sign) -> SpectralField {
    let cap = default_xi_max(u.grid());
    bilinear(&signed(u, mu), &signed(u, nu), cap, |a, b| m_mu_nu(a, b, mu, nu))
}

/// `N₂ = -|∇|(h|∇|φ) - ∇·(h∇φ) + (i/2)Λ((|∇|φ)² - |∇φ|²)` evaluated from
/// the fields (dealiased products).
pub fn n2_field(u: &SpectralField) -> SpectralField {
    let st = SurfaceState::from_complex(0.0, u);
    let (h, p) = (st.h.transform(), st.phi.transform());
    let ap = abs_grad(&p);
    let (p1, p2) = (partial(&p, 0), partial(&p, 1));
    let real = abs_grad(&product(&h, &ap))
        .add(&divergence(&product(&h, &p1), &product(&h, &p2)))
        .expect("same grid")
        .scale_re(-1.0);
    let sq = product(&ap, &ap).sub(&product(&p1, &p1)).expect("same grid").sub(&product(&p2, &p2)).expect("same grid");
    combine_i_lambda(&real, &sq.scale_re(0.5))
}

/// Setup of an ε-sweep for the normal-form residual.
#[derive(Clone, Debug)]
pub struct NormalFormRun {
    pub grid: Grid,
    pub data: InitialData,
    pub epsilons: Vec<f64>,
    pub t_final: f64,
    pub dt: f64,
    pub scheme: Scheme,
}

/// One row: amplitude, raw Duhamel size `d`, residual `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualRow {
    pub epsilon: f64,
    pub duhamel: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub slope_duhamel: f64,
    pub slope_residual: f64,
}

impl ResidualReport {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "epsilon,duhamel_norm,residual_norm")?;
        for r in &self.rows {
            writeln!(w, "{:.16e},{:.16e},{:.16e}", r.epsilon, r.duhamel, r.residual)?;
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        format!("slope(duhamel) = {:.4}, slope(residual) = {:.4}", self.slope_duhamel, self.slope_residual)
    }
}

/// `d = ‖Υ(T) - Υ(0)‖` and `r = ‖Υ(T) - Υ(0) - Σ(W(T) - W(0))‖` for the
/// trajectory from `u0` to `ut` at time `t`.
pub fn residual_pair(u0: &SpectralField, ut: &SpectralField, t: f64) -> (f64, f64) {
    let dy = profile(ut, t).sub(u0).expect("same grid");
    let dw = quadratic_boundary_total(ut, t).sub(&quadratic_boundary_total(u0, 0.0)).expect("same grid");
    (l2_norm(&dy), l2_norm(&dy.sub(&dw).expect("same grid")))
}

/// Run one trajectory per amplitude with `system` and collect the residuals.
/// The boundary terms are only subtracted when `system` has a nonlinearity.
pub fn residual_order(run: &NormalFormRun, system: &Zakharov) -> Result<ResidualReport> {
    let steps = (run.t_final / run.dt).round() as usize;
    if steps == 0 {
        return Err(Error::InvalidArgument("final time shorter than one step".into()));
    }
    let dt = run.t_final / steps as f64;
    let mut rows = Vec::new();
    for &eps in &run.epsilons {
        let mut data = run.data.clone();
        data.epsilon = eps;
        let s0 = data.build(&run.grid)?;
        let s1 = system.run(&s0, dt, steps, run.scheme, steps, |_, _| Ok(()))?;
        let (u0, u1) = (complex_variable(&s0), complex_variable(&s1));
        let (d, r) = if system.is_nonlinear() {
            residual_pair(&u0, &u1, s1.t)
        } else {
            // no quadratic part, so no boundary term to subtract
            let d = l2_norm(&profile(&u1, s1.t).sub(&u0).expect("same grid"));
            (d, d)
        };
        rows.push(ResidualRow { epsilon: eps, duhamel: d, residual: r });
    }
    let fit = |f: &dyn Fn(&ResidualRow) -> f64| {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon.ln(), f(r).ln())).collect();
        least_squares_slope(&pts)
    };
    let slope_duhamel = fit(&|r| r.duhamel);
    let slope_residual = fit(&|r| r.residual);
    Ok(ResidualReport { rows, slope_duhamel, slope_residual })
}
