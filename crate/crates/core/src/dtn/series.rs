//! Explicit expansion of the Dirichlet-to-Neumann operator in powers of
//! the surface elevation.

use crate::grid::{RealField, SpectralField};
use crate::ops::{abs_grad, divergence, lambda, laplacian, partial, product, product3, sum};
use num_complex::Complex64;

fn spec(f: &RealField) -> SpectralField {
    f.transform()
}

/// `|∇|φ`, the operator at a flat surface.
pub fn dtn_order0(phi: &RealField) -> RealField {
    abs_grad(&spec(phi)).inverse()
}

/// Quadratic correction `-|∇|(h|∇|φ) - ∇·(h∇φ)`.
pub fn dtn_order1(h: &RealField, phi: &RealField) -> RealField {
    order1_hat(&spec(h), &spec(phi)).inverse()
}

fn order1_hat(h: &SpectralField, p: &SpectralField) -> SpectralField {
    let a = abs_grad(&product(h, &abs_grad(p)));
    let d = divergence(&product(h, &partial(p, 0)), &product(h, &partial(p, 1)));
    a.add(&d).expect("same grid").scale_re(-1.0)
}

fn b2_hat(h: &SpectralField, p: &SpectralField) -> SpectralField {
    let a = abs_grad(&product(h, &abs_grad(p)));
    let b = product(h, &laplacian(p));
    a.add(&b).expect("same grid").scale_re(-1.0)
}

/// `B₂ = -|∇|(h|∇|φ) - hΔφ`, the quadratic part of the vertical velocity.
pub fn b2(h: &RealField, phi: &RealField) -> RealField {
    b2_hat(&spec(h), &spec(phi)).inverse()
}

/// Cubic term of the operator:
/// `|∇|(h|∇|(h|∇|φ)) + ½(Δ(h²|∇|φ) + |∇|(h²Δφ))`.
pub fn dtn_cubic(h: &RealField, phi: &RealField) -> RealField {
    cubic_hat(&spec(h), &spec(phi)).inverse()
}

fn cubic_hat(h: &SpectralField, p: &SpectralField) -> SpectralField {
    let ap = abs_grad(p);
    let nested = abs_grad(&product(h, &abs_grad(&product(h, &ap))));
    let s1 = laplacian(&product3(h, h, &ap));
    let s2 = abs_grad(&product3(h, h, &laplacian(p)));
    nested.add(&s1.add(&s2).expect("same grid").scale_re(0.5)).expect("same grid")
}

/// `B₃° = (cubic term) - |∇h|²|∇|φ`.
pub fn b3_cubic(h: &RealField, phi: &RealField) -> RealField {
    let (hh, p) = (spec(h), spec(phi));
    let ap = abs_grad(&p);
    let (h1, h2) = (partial(&hh, 0), partial(&hh, 1));
    let grad_sq = product3(&h1, &h1, &ap).add(&product3(&h2, &h2, &ap)).expect("same grid");
    cubic_hat(&hh, &p).sub(&grad_sq).expect("same grid").inverse()
}

/// `N₃° = (cubic term) - iΛ[(|∇|φ)(|∇|(h|∇|φ) + hΔφ)]`, returned as the
/// transform of the complex field.
pub fn n3_explicit(h: &RealField, phi: &RealField) -> SpectralField {
    let (hh, p) = (spec(h), spec(phi));
    let ap = abs_grad(&p);
    let inner = sum(&[&abs_grad(&product(&hh, &ap)), &product(&hh, &laplacian(&p))]);
    let quad = lambda(&product(&ap, &inner));
    let c = cubic_hat(&hh, &p);
    c.zip_map(&quad, |a, b| a - Complex64::new(0.0, 1.0) * b).expect("same grid")
}

/// Partial sum of the expansion through `order` (0, 1 or 2).
pub fn dtn_series(h: &RealField, phi: &RealField, order: usize) -> RealField {
    let (hh, p) = (spec(h), spec(phi));
    let mut g = abs_grad(&p);
    if order >= 1 {
        g = g.add(&order1_hat(&hh, &p)).expect("same grid");
    }
    if order >= 2 {
        g = g.add(&cubic_hat(&hh, &p)).expect("same grid");
    }
    g.inverse()
}
