//! Dealiased pseudo-spectral building blocks shared by the nonlinear
//! modules.

use crate::grid::{RealField, SpectralField, Symbol, ABS_GRAD};
use num_complex::Complex64;

/// Largest retained integer mode under the 2/3 rule (`|m| < n/3`).
pub fn band_two_thirds(n: usize) -> i64 {
    (n as i64 + 2) / 3 - 1
}

/// Largest retained integer mode under the 1/2 rule (`|m| < n/4`).
pub fn band_half(n: usize) -> i64 {
    (n as i64 + 3) / 4 - 1
}

/// Quadratic product, inputs and output truncated to the 2/3 band.
pub fn product(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let k = band_two_thirds(a.grid().n());
    let pa = a.truncate_box(k).inverse();
    let pb = b.truncate_box(k).inverse();
    pa.mul(&pb).expect("same grid").transform().truncate_box(k)
}

/// Cubic product, inputs and output truncated to the 1/2 band.
pub fn product3(a: &SpectralField, b: &SpectralField, c: &SpectralField) -> SpectralField {
    let k = band_half(a.grid().n());
    let pa = a.truncate_box(k).inverse();
    let pb = b.truncate_box(k).inverse();
    let pc = c.truncate_box(k).inverse();
    let data = pa.samples().iter().zip(pb.samples()).zip(pc.samples()).map(|((x, y), z)| x * y * z).collect();
    RealField::from_samples(a.grid().clone(), data).transform().truncate_box(k)
}

pub fn abs_grad(f: &SpectralField) -> SpectralField {
    ABS_GRAD.apply(f).expect("positive power")
}

pub fn partial(f: &SpectralField, j: usize) -> SpectralField {
    Symbol::Partial(j).apply(f).expect("derivative")
}

pub fn laplacian(f: &SpectralField) -> SpectralField {
    Symbol::Laplacian.apply(f).expect("laplacian")
}

pub fn lambda(f: &SpectralField) -> SpectralField {
    Symbol::AbsPow(0.5).apply(f).expect("positive power")
}

pub fn divergence(a: &SpectralField, b: &SpectralField) -> SpectralField {
    partial(a, 0).add(&partial(b, 1)).expect("same grid")
}

pub fn sum(fields: &[&SpectralField]) -> SpectralField {
    let mut out = fields[0].clone();
    for f in &fields[1..] {
        out = out.add(f).expect("same grid");
    }
    out
}

/// `F[p] + i Λ F[q]`, the transform of the complex field `p + iΛq`.
pub fn combine_i_lambda(p: &SpectralField, q: &SpectralField) -> SpectralField {
    let lq = lambda(q);
    p.zip_map(&lq, |a, b| a + Complex64::new(0.0, 1.0) * b).expect("same grid")
}
