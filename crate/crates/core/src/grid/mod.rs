//! Square torus discretization, spectral transforms, multipliers,
//! Littlewood-Paley and spatial decompositions, and norms.
//!
//! Fourier convention: `F u(ξ) = ∫ e^{-ix·ξ} u(x) dx`, approximated by
//! `(R/n)^2` times the DFT sum; the inverse is `R^{-2} Σ_ξ e^{ix·ξ} F u(ξ)`.
//! Samples and coefficients are stored row-major with the first index
//! running along `x1` and the second along `x2`.

mod field;
mod lp;
mod norms;
pub(crate) mod snapshot;
mod symbol;

pub use field::{RealField, SpectralField};
pub use lp::{lp_low, lp_low_weight, lp_project, lp_weight, phi, smooth_step, spatial_count, spatial_cutoff, spatial_weight, LpRange};
pub use norms::{holder_norm, l2_norm, sobolev_norm, sup_norm, z_norm, z_norm_with_exponent, z_weight, Z_WEIGHT_EXPONENT};
pub use snapshot::{read_field, write_field, FLAG_VOLUME};
pub use symbol::{apply_symbol, Symbol, ABS_GRAD, LAMBDA};

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Torus `(ℝ/Rℤ)^2` sampled on an `n × n` uniform grid.
///
/// Cloning is cheap; FFT plans are shared.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    r: f64,
    freq: Arc<Vec<f64>>,
    plans: Arc<Plans>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).field("r", &self.r).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r
    }
}

/// Build a grid with `n` points per side and period `r`.
pub fn make_grid(n: usize, r: f64) -> Result<Grid> {
    Grid::new(n, r)
}

impl Grid {
    pub fn new(n: usize, r: f64) -> Result<Grid> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= 8")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidGrid(format!("period R = {r} must be positive")));
        }
        let freq = (0..n).map(|i| 2.0 * PI * index_to_mode(i, n) as f64 / r).collect();
        let mut planner = FftPlanner::new();
        let plans = Plans { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) };
        Ok(Grid { n, r, freq: Arc::new(freq), plans: Arc::new(plans) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Period length `R`.
    pub fn period(&self) -> f64 {
        self.r
    }

    /// Sample spacing `R/n`.
    pub fn spacing(&self) -> f64 {
        self.r / self.n as f64
    }

    /// Lattice spacing `2π/R` of the frequency grid.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.r
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    /// One-dimensional frequency table in DFT index order.
    pub fn freqs(&self) -> &[f64] {
        &self.freq
    }

    /// Integer mode number of DFT index `i`, in `[-n/2, n/2)`.
    pub fn mode(&self, i: usize) -> i64 {
        index_to_mode(i, self.n)
    }

    /// DFT index of the integer mode `m`, if it is representable.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let h = (self.n / 2) as i64;
        if m < -h || m >= h {
            None
        } else {
            Some(m.rem_euclid(self.n as i64) as usize)
        }
    }

    /// Lattice frequency `ξ` at flat index `idx`.
    pub fn xi(&self, idx: usize) -> (f64, f64) {
        (self.freq[idx / self.n], self.freq[idx % self.n])
    }

    /// `|ξ|` at flat index `idx`.
    pub fn abs_xi(&self, idx: usize) -> f64 {
        let (a, b) = self.xi(idx);
        a.hypot(b)
    }

    /// Physical coordinates of sample `idx`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let h = self.spacing();
        ((idx / self.n) as f64 * h, (idx % self.n) as f64 * h)
    }

    /// Whether `idx` lies on the Nyquist row or column.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let h = self.n / 2;
        idx / self.n == h || idx % self.n == h
    }

    pub(crate) fn zero_nyquist(&self, data: &mut [Complex64]) {
        let n = self.n;
        let h = n / 2;
        for j in 0..n {
            data[h * n + j] = Complex64::new(0.0, 0.0);
            data[j * n + h] = Complex64::new(0.0, 0.0);
        }
    }

    /// Unnormalized in-place 2D DFT; `inverse` selects the `e^{+i…}` kernel.
    pub(crate) fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n);
        let plan = if inverse { &self.plans.inverse } else { &self.plans.forward };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, n);
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, n);
    }

    /// Forward transform of complex samples with the `(R/n)^2` weight,
    /// Nyquist row and column zeroed.
    pub(crate) fn forward_raw(&self, data: &mut [Complex64]) {
        self.fft2(data, false);
        let w = self.spacing() * self.spacing();
        for z in data.iter_mut() {
            *z *= w;
        }
        self.zero_nyquist(data);
    }

    /// Inverse transform `R^{-2} Σ` of coefficients, Nyquist ignored.
    pub(crate) fn inverse_raw(&self, data: &mut [Complex64]) {
        self.zero_nyquist(data);
        self.fft2(data, true);
        let w = 1.0 / (self.r * self.r);
        for z in data.iter_mut() {
            *z *= w;
        }
    }

    /// Forward transform of a real field.
    pub fn transform(&self, f: &RealField) -> Result<SpectralField> {
        self.check(f.grid())?;
        let mut data: Vec<Complex64> = f.samples().iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward_raw(&mut data);
        Ok(SpectralField::from_coeffs(self.clone(), data))
    }

    /// Inverse transform, keeping the real part.
    pub fn inverse(&self, f: &SpectralField) -> Result<RealField> {
        self.check(f.grid())?;
        let data = self.inverse_complex(f)?;
        Ok(RealField::from_samples(self.clone(), data.into_iter().map(|z| z.re).collect()))
    }

    /// Inverse transform keeping complex samples (for non-Hermitian data).
    pub fn inverse_complex(&self, f: &SpectralField) -> Result<Vec<Complex64>> {
        self.check(f.grid())?;
        let mut data = f.coeffs().to_vec();
        self.inverse_raw(&mut data);
        Ok(data)
    }

    /// Forward transform of complex samples.
    pub fn transform_complex(&self, samples: &[Complex64]) -> Result<SpectralField> {
        if samples.len() != self.len() {
            return Err(Error::GridMismatch);
        }
        let mut data = samples.to_vec();
        self.forward_raw(&mut data);
        Ok(SpectralField::from_coeffs(self.clone(), data))
    }

    pub(crate) fn check(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

fn index_to_mode(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    const B: usize = 16;
    for ib in (0..n).step_by(B) {
        for jb in (ib..n).step_by(B) {
            for i in ib..(ib + B).min(n) {
                let j0 = if ib == jb { i + 1 } else { jb };
                for j in j0..(jb + B).min(n) {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(12, 1.0).is_err());
        assert!(Grid::new(4, 1.0).is_err());
        assert!(Grid::new(16, 0.0).is_err());
        assert!(Grid::new(16, -2.0).is_err());
    }

    #[test]
    fn frequency_spacing() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.mode(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for i in 0..8 {
            assert_eq!(g.freqs()[i], g.mode(i) as f64);
        }
        let g = Grid::new(16, 4.0 * PI).unwrap();
        assert_eq!(g.freqs()[1], 0.5);
        let g = Grid::new(64, 100.0 * PI).unwrap();
        assert!((g.freqs()[1] - 0.02).abs() < 1e-17);
    }

    #[test]
    fn index_of_roundtrip() {
        let g = Grid::new(16, 1.0).unwrap();
        for i in 0..16 {
            assert_eq!(g.index_of(g.mode(i)), Some(i));
        }
        assert_eq!(g.index_of(8), None);
    }

    #[test]
    fn transpose_blocks() {
        let n = 40;
        let mut d: Vec<Complex64> = (0..n * n).map(|k| Complex64::new(k as f64, 0.0)).collect();
        transpose(&mut d, n);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(d[i * n + j].re, (j * n + i) as f64);
            }
        }
    }
}
