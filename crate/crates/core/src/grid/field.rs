use super::Grid;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Real samples on the grid.
#[derive(Clone, Debug)]
pub struct RealField {
    grid: Grid,
    data: Vec<f64>,
}

/// Fourier coefficients indexed by lattice frequency.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    data: Vec<Complex64>,
}

impl RealField {
    pub fn zeros(grid: &Grid) -> RealField {
        RealField { grid: grid.clone(), data: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &Grid, c: f64) -> RealField {
        RealField { grid: grid.clone(), data: vec![c; grid.len()] }
    }

    /// Sample `f(x1, x2)` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> RealField {
        let data = (0..grid.len())
            .map(|idx| {
                let (x1, x2) = grid.point(idx);
                f(x1, x2)
            })
            .collect();
        RealField { grid: grid.clone(), data }
    }

    pub fn from_samples(grid: Grid, data: Vec<f64>) -> RealField {
        assert_eq!(data.len(), grid.len(), "sample count does not match grid");
        RealField { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `∫ f g dx` by the uniform Riemann sum.
    pub fn inner(&self, other: &RealField) -> f64 {
        let h = self.grid.spacing();
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum::<f64>() * h * h
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        RealField { grid: self.grid.clone(), data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn zip_map(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<RealField> {
        self.grid.check(&other.grid)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(RealField { grid: self.grid.clone(), data })
    }

    pub fn add(&self, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |a, b| a - b)
    }

    /// Pointwise product of samples.
    pub fn mul(&self, other: &RealField) -> Result<RealField> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> RealField {
        self.map(|x| c * x)
    }

    pub fn transform(&self) -> SpectralField {
        self.grid.transform(self).expect("same grid")
    }
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> SpectralField {
        SpectralField { grid: grid.clone(), data: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_coeffs(grid: Grid, data: Vec<Complex64>) -> SpectralField {
        assert_eq!(data.len(), grid.len(), "coefficient count does not match grid");
        SpectralField { grid, data }
    }

    /// Coefficients `f(ξ)` evaluated at every lattice frequency.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> Complex64) -> SpectralField {
        let mut data: Vec<Complex64> = (0..grid.len())
            .map(|idx| {
                let (a, b) = grid.xi(idx);
                f(a, b)
            })
            .collect();
        grid.zero_nyquist(&mut data);
        SpectralField { grid: grid.clone(), data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.data
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.data
    }

    /// Coefficient at integer mode `(m1, m2)`; zero if not representable.
    pub fn at_mode(&self, m1: i64, m2: i64) -> Complex64 {
        match (self.grid.index_of(m1), self.grid.index_of(m2)) {
            (Some(i), Some(j)) => self.data[i * self.grid.n() + j],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Mean of the represented function, `F(0)/R^2`.
    pub fn mean(&self) -> Complex64 {
        let r = self.grid.period();
        self.data[0] / (r * r)
    }

    pub fn inverse(&self) -> RealField {
        self.grid.inverse(self).expect("same grid")
    }

    pub fn inverse_complex(&self) -> Vec<Complex64> {
        self.grid.inverse_complex(self).expect("same grid")
    }

    pub fn map_indexed(&self, f: impl Fn(usize, Complex64) -> Complex64) -> SpectralField {
        let data = self.data.iter().enumerate().map(|(i, &z)| f(i, z)).collect();
        SpectralField { grid: self.grid.clone(), data }
    }

    pub fn zip_map(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SpectralField> {
        self.grid.check(&other.grid)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(SpectralField { grid: self.grid.clone(), data })
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> SpectralField {
        self.map_indexed(|_, z| c * z)
    }

    pub fn scale_re(&self, c: f64) -> SpectralField {
        self.map_indexed(|_, z| c * z)
    }

    /// Conjugate reflection `ξ ↦ conj F(-ξ)`, the transform of the
    /// complex conjugate function.
    pub fn conj_reflect(&self) -> SpectralField {
        let n = self.grid.n();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let ri = (n - i) % n;
            for j in 0..n {
                let rj = (n - j) % n;
                data[i * n + j] = self.data[ri * n + rj].conj();
            }
        }
        self.grid.zero_nyquist(&mut data);
        SpectralField { grid: self.grid.clone(), data }
    }

    /// Split `F` into the transforms of the real and imaginary parts of
    /// the represented function.
    pub fn split_re_im(&self) -> (SpectralField, SpectralField) {
        let c = self.conj_reflect();
        let re = self.zip_map(&c, |a, b| 0.5 * (a + b)).expect("same grid");
        let im = self.zip_map(&c, |a, b| Complex64::new(0.0, -0.5) * (a - b)).expect("same grid");
        (re, im)
    }

    /// Relative Hermitian-symmetry defect `max|F(-ξ) - conj F(ξ)| / max|F|`.
    pub fn hermitian_defect(&self) -> f64 {
        let c = self.conj_reflect();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        self.data.iter().zip(&c.data).fold(0.0f64, |m, (a, b)| m.max((a - b).norm())) / scale
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `R^{-2} Σ |F|^2`, the squared L² norm of the represented function.
    pub fn norm_sqr(&self) -> f64 {
        let r = self.grid.period();
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() / (r * r)
    }

    /// Keep only modes with `|m1|, |m2| <= kmax` (integer mode numbers).
    pub fn truncate_box(&self, kmax: i64) -> SpectralField {
        let n = self.grid.n();
        self.map_indexed(|idx, z| {
            let (m1, m2) = (self.grid.mode(idx / n), self.grid.mode(idx % n));
            if m1.abs() <= kmax && m2.abs() <= kmax {
                z
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn check_grid(&self, other: &Grid) -> Result<()> {
        if &self.grid == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}
