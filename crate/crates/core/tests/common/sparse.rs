//! Exact Fourier-series arithmetic on a handful of lattice modes, used as
//! an independent oracle for the pseudo-spectral operators.

use gravwave::grid::{Grid, SpectralField};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// `f(x) = Σ c_m e^{i dk m·x}`.
#[derive(Clone, Debug, Default)]
pub struct Series {
    pub dk: f64,
    pub c: BTreeMap<(i64, i64), Complex64>,
}

impl Series {
    pub fn new(dk: f64) -> Series {
        Series { dk, c: BTreeMap::new() }
    }

    /// `amp · cos(dk (m1 x1 + m2 x2))`.
    pub fn cos(dk: f64, m: (i64, i64), amp: f64) -> Series {
        let mut s = Series::new(dk);
        *s.c.entry(m).or_default() += 0.5 * amp;
        *s.c.entry((-m.0, -m.1)).or_default() += 0.5 * amp;
        s
    }

    /// `amp · sin(dk (m1 x1 + m2 x2))`.
    pub fn sin(dk: f64, m: (i64, i64), amp: f64) -> Series {
        let mut s = Series::new(dk);
        *s.c.entry(m).or_default() += Complex64::new(0.0, -0.5 * amp);
        *s.c.entry((-m.0, -m.1)).or_default() += Complex64::new(0.0, 0.5 * amp);
        s
    }

    pub fn add(&self, o: &Series) -> Series {
        let mut s = self.clone();
        for (k, v) in &o.c {
            *s.c.entry(*k).or_default() += v;
        }
        s
    }

    pub fn scale(&self, a: Complex64) -> Series {
        let mut s = self.clone();
        s.c.values_mut().for_each(|v| *v *= a);
        s
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Series) -> Series {
        let mut s = Series::new(self.dk);
        for (a, x) in &self.c {
            for (b, y) in &o.c {
                *s.c.entry((a.0 + b.0, a.1 + b.1)).or_default() += x * y;
            }
        }
        s
    }

    /// Fourier multiplier `p(ξ1, ξ2)`.
    pub fn symbol(&self, p: impl Fn(f64, f64) -> Complex64) -> Series {
        let mut s = self.clone();
        for (m, v) in s.c.iter_mut() {
            *v *= p(self.dk * m.0 as f64, self.dk * m.1 as f64);
        }
        s
    }

    pub fn abs_grad(&self) -> Series {
        self.symbol(|a, b| Complex64::new(a.hypot(b), 0.0))
    }

    pub fn lambda(&self) -> Series {
        self.symbol(|a, b| Complex64::new(a.hypot(b).sqrt(), 0.0))
    }

    pub fn partial(&self, j: usize) -> Series {
        self.symbol(move |a, b| Complex64::new(0.0, if j == 0 { a } else { b }))
    }

    pub fn laplacian(&self) -> Series {
        self.symbol(|a, b| Complex64::new(-(a * a + b * b), 0.0))
    }

    /// Largest deviation from the coefficients of `f` (rescaled by `R²`).
    pub fn distance(&self, f: &SpectralField) -> f64 {
        let g: &Grid = f.grid();
        let r2 = g.period() * g.period();
        let mut worst: f64 = 0.0;
        for idx in 0..g.len() {
            let m = (g.mode(idx / g.n()), g.mode(idx % g.n()));
            let want = self.c.get(&m).copied().unwrap_or_default();
            worst = worst.max((f.coeffs()[idx] / r2 - want).norm());
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.c.values().fold(0.0, |m, v| m.max(v.norm()))
    }
}
