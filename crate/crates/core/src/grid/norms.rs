use super::lp::{distance_field, lp_low, lp_project, LpRange};
use super::{SpectralField, Symbol};

/// Spatial weight exponent of the Z-norm on the torus.
pub const Z_WEIGHT_EXPONENT: f64 = 2.0 / 3.0;

/// `(R^{-2} Σ ⟨ξ⟩^{2s} |F(ξ)|^2)^{1/2}`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let g = f.grid();
    let r = g.period();
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let k2 = {
                let (a, b) = g.xi(idx);
                a * a + b * b
            };
            (1.0 + k2).powf(s) * z.norm_sqr()
        })
        .sum();
    (sum / (r * r)).sqrt()
}

pub fn l2_norm(f: &SpectralField) -> f64 {
    f.norm_sqr().sqrt()
}

/// Maximum modulus over the sample points.
pub fn sup_norm(f: &SpectralField) -> f64 {
    f.inverse_complex().iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Hölder-Zygmund norm `‖P_{≤0}u‖_∞ + sup_{k>0} 2^{kr} ‖P_k u‖_∞`.
pub fn holder_norm(f: &SpectralField, r: f64) -> f64 {
    let range = LpRange::for_grid(f.grid());
    let low = sup_norm(&lp_low(f, 0));
    let high = (1..=range.hi)
        .map(|k| (2.0f64).powf(k as f64 * r) * sup_norm(&lp_project(f, k)))
        .fold(0.0, f64::max);
    low + high
}

/// Spatial weight `(1 + d)^α` of the Z-norm.
pub fn z_weight(distance: f64, alpha: f64) -> f64 {
    (1.0 + distance).powf(alpha)
}

/// `‖(1 + ‖x‖)^{2/3} ⟨∇⟩^8 u‖_{L²}`.
pub fn z_norm(f: &SpectralField) -> f64 {
    z_norm_with_exponent(f, Z_WEIGHT_EXPONENT)
}

/// Z-norm with a different weight exponent, for exploratory runs.
pub fn z_norm_with_exponent(f: &SpectralField, alpha: f64) -> f64 {
    let grid = f.grid();
    let smooth = Symbol::Japanese(8.0).apply(f).expect("nonnegative power");
    let vals = smooth.inverse_complex();
    let d = distance_field(grid);
    let h = grid.spacing();
    let sum: f64 = vals.iter().zip(&d).map(|(v, &dist)| (z_weight(dist, alpha) * v.norm()).powi(2)).sum();
    (sum * h * h).sqrt()
}
