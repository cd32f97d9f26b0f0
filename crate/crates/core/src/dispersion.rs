//! Linear half-wave propagation `e^{-itΛ}`: decay curves, decay-rate fits
//! and Strichartz-type space-time norms.

use crate::error::{Error, Result};
use crate::grid::{lp_project, sup_norm, Grid, SpectralField, Symbol};
use crate::normalform::least_squares_slope;
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write;

/// `e^{-itΛ}F`.
pub fn propagate_linear(f: &SpectralField, t: f64) -> SpectralField {
    Symbol::HalfWave(t).apply(f).expect("half-wave")
}

/// Centered Gaussian with coefficients `exp(-|ξ|²/(2σ²))`, truncated to
/// the grid.
pub fn gaussian_data(grid: &Grid, sigma: f64) -> SpectralField {
    let c = 0.5 * grid.period();
    SpectralField::from_fn(grid, |a, b| {
        Complex64::from_polar((-(a * a + b * b) / (2.0 * sigma * sigma)).exp(), -(a + b) * c)
    })
}

/// Sup-norm of a linearly evolving field at a sequence of times.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Dyadic band `P_k` applied before measuring, if any.
    pub k: Option<i32>,
    pub fitted_slope: f64,
    pub fit_window: [f64; 2],
}

impl DecayCurve {
    /// Refit on `window`.
    pub fn with_fit(mut self, window: [f64; 2]) -> Result<DecayCurve> {
        self.fitted_slope = fit_decay(&self, window)?;
        self.fit_window = window;
        Ok(self)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{t:.16e},{v:.16e}")?;
        }
        Ok(())
    }
}

/// Sup-norms of `e^{-itΛ}u0` (optionally of `P_k` of it) at `times`. The
/// slope is fitted on the whole time range when it has enough samples.
pub fn decay_curve(u0: &SpectralField, times: &[f64], k: Option<i32>) -> Result<DecayCurve> {
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("times must increase strictly".into()));
    }
    let base = match k {
        Some(k) => lp_project(u0, k),
        None => u0.clone(),
    };
    let values: Vec<f64> = times.par_iter().map(|&t| sup_norm(&propagate_linear(&base, t))).collect();
    let window = [times.first().copied().unwrap_or(0.0), times.last().copied().unwrap_or(0.0)];
    let mut curve = DecayCurve { times: times.to_vec(), values, k, fitted_slope: f64::NAN, fit_window: window };
    if let Ok(s) = fit_decay(&curve, window) {
        curve.fitted_slope = s;
    }
    Ok(curve)
}

/// Least-squares slope of `log value` against `log(1 + t)` on `window`.
pub fn fit_decay(curve: &DecayCurve, window: [f64; 2]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .times
        .iter()
        .zip(&curve.values)
        .filter(|(t, _)| **t >= window[0] && **t <= window[1])
        .map(|(t, v)| ((1.0 + t).ln(), v.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::InvalidArgument(format!("{} samples in the fit window, need 5", pts.len())));
    }
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::InvalidArgument("non-positive value in the fit window".into()));
    }
    Ok(least_squares_slope(&pts))
}

/// `Σ_{|α|≤6} ‖∂^α u‖_∞`.
pub fn w6_inf(f: &SpectralField) -> f64 {
    let g = f.grid();
    let n = g.n();
    let i = Complex64::new(0.0, 1.0);
    // powers (iξ_j)^p along one axis
    let pow: Vec<Vec<Complex64>> = (0..=6).map(|p| g.freqs().iter().map(|&x| (i * x).powi(p)).collect()).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    let mut total = 0.0;
    for a in 0..=6 {
        for b in 0..=(6 - a) {
            for r in 0..n {
                let pa = pow[a][r];
                for c in 0..n {
                    buf[r * n + c] = f.coeffs()[r * n + c] * pa * pow[b][c];
                }
            }
            g.inverse_raw(&mut buf);
            total += buf.iter().fold(0.0f64, |m, z| m.max(z.norm_sqr())).sqrt();
        }
    }
    total
}

/// `(∫_0^T ‖e^{-isΛ}u0‖²_{W^{6,∞}} ds)^{1/2}` by the midpoint rule with a
/// step close to `dt`.
pub fn strichartz_norm(u0: &SpectralField, t_final: f64, dt: f64) -> Result<f64> {
    if !(t_final > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidArgument("T and dt must be positive".into()));
    }
    let steps = (t_final / dt).round().max(1.0) as usize;
    let h = t_final / steps as f64;
    // collect first so the summation order does not depend on scheduling
    let terms: Vec<f64> = (0..steps)
        .into_par_iter()
        .map(|j| {
            let s = (j as f64 + 0.5) * h;
            w6_inf(&propagate_linear(u0, s)).powi(2)
        })
        .collect();
    let acc: f64 = terms.iter().sum();
    Ok((acc * h).sqrt())
}

/// `√(log(1+T)(1+T/R))`, the growth profile of the periodic estimate.
pub fn strichartz_profile(t_final: f64, period: f64) -> f64 {
    ((1.0 + t_final).ln() * (1.0 + t_final / period)).sqrt()
}

/// `(1+t)/(t/R+1)²`, the periodic decay correction.
pub fn wrap_factor(t: f64, period: f64) -> f64 {
    (1.0 + t) / (t / period + 1.0).powi(2)
}
