use super::SpectralField;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Fourier multipliers that act diagonally on lattice coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symbol {
    /// `|∇|^s`; `s = 1/2` is `Λ`.
    AbsPow(f64),
    /// `⟨∇⟩^s = (1 + |ξ|^2)^{s/2}`.
    Japanese(f64),
    /// `∂_j`, symbol `i ξ_j` (`j` is 0 or 1).
    Partial(usize),
    /// `Δ`, symbol `-|ξ|^2`.
    Laplacian,
    /// `e^{y λ |∇|}`.
    VerticalExp { y: f64, lambda: f64 },
    /// `e^{-itΛ}`; use a negative `t` for `e^{+itΛ}`.
    HalfWave(f64),
}

/// `Λ = |∇|^{1/2}`.
pub const LAMBDA: Symbol = Symbol::AbsPow(0.5);
/// `|∇|`.
pub const ABS_GRAD: Symbol = Symbol::AbsPow(1.0);

impl Symbol {
    /// Multiplier value at `ξ = (a, b)`.
    pub fn value(&self, a: f64, b: f64) -> Complex64 {
        let k = a.hypot(b);
        match *self {
            Symbol::AbsPow(s) => {
                if k == 0.0 {
                    Complex64::new(if s == 0.0 { 1.0 } else { 0.0 }, 0.0)
                } else if s == 1.0 {
                    Complex64::new(k, 0.0)
                } else if s == 0.5 {
                    Complex64::new(k.sqrt(), 0.0)
                } else {
                    Complex64::new(k.powf(s), 0.0)
                }
            }
            Symbol::Japanese(s) => Complex64::new((1.0 + k * k).powf(0.5 * s), 0.0),
            Symbol::Partial(j) => Complex64::new(0.0, if j == 0 { a } else { b }),
            Symbol::Laplacian => Complex64::new(-k * k, 0.0),
            Symbol::VerticalExp { y, lambda } => Complex64::new((y * lambda * k).exp(), 0.0),
            Symbol::HalfWave(t) => Complex64::from_polar(1.0, -t * k.sqrt()),
        }
    }

    /// Multiply `f` by this symbol.
    pub fn apply(&self, f: &SpectralField) -> Result<SpectralField> {
        if let Symbol::AbsPow(s) = *self {
            if s < 0.0 {
                let z0 = f.coeffs()[0];
                if z0.norm() > 1e-13 * f.max_abs() {
                    return Err(Error::IllPosedSymbol { power: s, mean: f.mean().norm() });
                }
            }
        }
        let g = f.grid().clone();
        Ok(f.map_indexed(|idx, z| {
            let (a, b) = g.xi(idx);
            self.value(a, b) * z
        }))
    }
}

/// Apply `symbol` to `f`.
pub fn apply_symbol(f: &SpectralField, symbol: Symbol) -> Result<SpectralField> {
    symbol.apply(f)
}
