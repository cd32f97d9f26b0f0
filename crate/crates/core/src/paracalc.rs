//! Paraproducts `T_a f` for symbols depending on `x` only, the remainder
//! `H(f, g)`, the composition error `E(a, b)` and the good unknown.
//!
//! On the torus
//! `F(T_a f)(ξ) = (C/R²) Σ_η φ(2^{10}|ξ-η|/|ξ+η|) F a(ξ-η) F f(η)`,
//! with the factor set to zero when `ξ + η = 0` and `C` fixed by `T_1 = id`
//! on mean-free data. The cutoff is not separable, so the sum runs directly
//! over pairs of retained modes. Pairs whose output frequency is not on the
//! grid, or on the Nyquist line, are dropped; the rule is symmetric in
//! input and output, so `T_a` stays self-adjoint.

use crate::grid::{phi, Grid, RealField, SpectralField};
use crate::ops::combine_i_lambda;
use crate::zakharov::SurfaceState;
use num_complex::Complex64;

/// Coefficients below this fraction of the maximum are skipped.
pub const RETAIN_THRESHOLD: f64 = 1e-14;

/// Ratio scale of the low-frequency cutoff, `2^{10}`.
const CUTOFF_SCALE: f64 = 1024.0;

/// An `x`-dependent symbol `a(x)`.
#[derive(Clone, Debug)]
pub struct ParaSymbol {
    pub a: RealField,
}

impl ParaSymbol {
    pub fn new(a: RealField) -> ParaSymbol {
        ParaSymbol { a }
    }
}

impl From<RealField> for ParaSymbol {
    fn from(a: RealField) -> Self {
        ParaSymbol { a }
    }
}

/// Integer mode `(m1, m2)` with its coefficient.
type Mode = (i64, i64, Complex64);

fn retained(f: &SpectralField) -> Vec<Mode> {
    let g = f.grid();
    let n = g.n();
    let cut = RETAIN_THRESHOLD * f.max_abs();
    f.coeffs()
        .iter()
        .enumerate()
        .filter(|(idx, z)| z.norm() > cut && !g.is_nyquist(*idx))
        .map(|(idx, &z)| (g.mode(idx / n), g.mode(idx % n), z))
        .collect()
}

/// Cutoff weight for the pair `(ζ, η) = (ξ - η, η)`, in lattice units.
fn pair_weight(z1: i64, z2: i64, s1: i64, s2: i64) -> f64 {
    // s = ξ + η; the weight vanishes unless 2^10 |ζ| < 1.5 |s|
    let s_sq = s1 * s1 + s2 * s2;
    if s_sq == 0 {
        return 0.0;
    }
    let z_sq = z1 * z1 + z2 * z2;
    if z_sq == 0 {
        return 1.0;
    }
    let bound = (CUTOFF_SCALE / 1.5) * (CUTOFF_SCALE / 1.5);
    if z_sq as f64 * bound >= s_sq as f64 {
        return 0.0;
    }
    phi(CUTOFF_SCALE * (z_sq as f64).sqrt() / (s_sq as f64).sqrt())
}

/// Raw bilinear pair sum without the normalization constant.
fn pair_sum(a: &SpectralField, f: &SpectralField) -> SpectralField {
    let grid = a.grid().clone();
    let n = grid.n();
    let half = (n / 2) as i64;
    let am = retained(a);
    let fm = retained(f);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for &(z1, z2, za) in &am {
        for &(e1, e2, zf) in &fm {
            let (x1, x2) = (z1 + e1, z2 + e2);
            // output must be a non-Nyquist lattice point
            if x1 <= -half || x1 >= half || x2 <= -half || x2 >= half {
                continue;
            }
            let w = pair_weight(z1, z2, x1 + e1, x2 + e2);
            if w == 0.0 {
                continue;
            }
            let i = grid.index_of(x1).unwrap() * n + grid.index_of(x2).unwrap();
            out[i] += w * za * zf;
        }
    }
    let r = grid.period();
    let s = 1.0 / (r * r);
    SpectralField::from_coeffs(grid, out.into_iter().map(|z| z * s).collect())
}

/// Normalization `C` with `T_1 = id` on mean-free data, found by probing
/// one mode of `grid`.
pub fn normalization(grid: &Grid) -> f64 {
    let one = RealField::constant(grid, 1.0).transform();
    let probe = SpectralField::from_fn(grid, |a, b| {
        if a == grid.dk() && b == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let t = pair_sum(&one, &probe);
    1.0 / t.coeffs()[grid.n()].re
}

/// `T_a f` in coefficient space.
pub fn paraproduct_hat(a: &SpectralField, f: &SpectralField) -> SpectralField {
    let c = normalization(a.grid());
    pair_sum(a, f).scale_re(c)
}

/// `T_a f`.
pub fn paraproduct(a: &ParaSymbol, f: &RealField) -> RealField {
    paraproduct_hat(&a.a.transform(), &f.transform()).inverse()
}

/// `H(f, g) = fg - T_f g - T_g f`, with `fg` the pointwise product.
pub fn remainder(f: &RealField, g: &RealField) -> RealField {
    let (fh, gh) = (f.transform(), g.transform());
    let tf = paraproduct_hat(&fh, &gh).inverse();
    let tg = paraproduct_hat(&gh, &fh).inverse();
    let s = tf.add(&tg).expect("same grid");
    f.mul(g).expect("same grid").sub(&s).expect("same grid")
}

/// `E(a, b) f = T_a T_b f - T_{ab} f`.
pub fn composition_error(a: &ParaSymbol, b: &ParaSymbol, f: &RealField) -> RealField {
    let fh = f.transform();
    let ah = a.a.transform();
    let tb = paraproduct_hat(&b.a.transform(), &fh);
    let tatb = paraproduct_hat(&ah, &tb);
    let ab = a.a.mul(&b.a).expect("same grid").transform();
    tatb.sub(&paraproduct_hat(&ab, &fh)).expect("same grid").inverse()
}

/// `Ũ = h + iΛ(φ - T_B h)`.
pub fn good_unknown(state: &SurfaceState, b: &RealField) -> SpectralField {
    let hh = state.h.transform();
    let tb = paraproduct_hat(&b.transform(), &hh);
    let q = state.phi.transform().sub(&tb).expect("same grid");
    combine_i_lambda(&hh, &q)
}
