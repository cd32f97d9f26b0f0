//! Helpers shared by the integration tests.
#![allow(dead_code)]

pub mod sparse;

use gravwave::grid::{Grid, RealField, SpectralField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Real field with random coefficients on the modes `|m1|, |m2| <= band`,
/// decaying like `exp(-decay·|m|²)`, scaled so that `max |f| = amp`.
pub fn random_field(grid: &Grid, band: i64, decay: f64, amp: f64, seed: u64) -> RealField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let data = (0..grid.len())
        .map(|idx| {
            let (m1, m2) = (grid.mode(idx / n), grid.mode(idx % n));
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            if m1.abs() > band || m2.abs() > band || (m1 == 0 && m2 == 0) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(re, im) * (-decay * (m1 * m1 + m2 * m2) as f64).exp()
            }
        })
        .collect();
    let coeffs = SpectralField::from_coeffs(grid.clone(), data);
    // the real part of the synthesized signal is Hermitian-symmetric in
    // coefficient space and keeps the band
    let samples: Vec<f64> = coeffs.inverse_complex().iter().map(|z| z.re).collect();
    let f = RealField::from_samples(grid.clone(), samples);
    let m = f.max_abs();
    f.scale(amp / m)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

pub fn max_diff(a: &RealField, b: &RealField) -> f64 {
    a.samples().iter().zip(b.samples()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_diff_c(a: &SpectralField, b: &SpectralField) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Hermitian-symmetric coefficients on `count` random lattice modes with
/// `r_lo <= |m| <= r_hi` (plus their reflections), unit-size entries.
pub fn random_sparse(grid: &Grid, count: usize, r_lo: f64, r_hi: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let half = (n / 2) as i64;
    let top = r_hi.floor() as i64;
    let mut out = SpectralField::zeros(grid);
    let mut placed = 0;
    while placed < count {
        let m1 = rng.gen_range(-top..=top);
        let m2 = rng.gen_range(-top..=top);
        let r = ((m1 * m1 + m2 * m2) as f64).sqrt();
        if r < r_lo || r > r_hi || m1.abs() >= half || m2.abs() >= half {
            continue;
        }
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let at = |a: i64, b: i64| grid.index_of(a).unwrap() * n + grid.index_of(b).unwrap();
        let c = out.coeffs_mut();
        c[at(m1, m2)] += z;
        c[at(-m1, -m2)] += z.conj();
        placed += 1;
    }
    out
}

/// `Σ_ξ a(ξ) conj(b(ξ))`.
pub fn coeff_inner(a: &SpectralField, b: &SpectralField) -> Complex64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y.conj()).sum()
}
