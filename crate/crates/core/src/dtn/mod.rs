//! Dirichlet-to-Neumann operator `G(h)φ` and the boundary velocities.
//!
//! Two routes are provided: the explicit expansion in powers of `h`
//! ([`dtn_series`] and its terms) and the fixed-point solution of the
//! flattened elliptic problem ([`dtn_full`], [`DtnSolver`]), which is the
//! reference for the full operator.

mod extension;
mod series;
mod vertical;

pub use extension::{Correction, DtnParams, DtnResult, DtnSolver, VolumeGradient, MAX_SLOPE};
pub use series::{b2, b3_cubic, dtn_cubic, dtn_order0, dtn_order1, dtn_series, n3_explicit};
pub use vertical::VerticalGrid;

use crate::error::{Error, Result};
use crate::grid::{Grid, RealField, FLAG_VOLUME};
use crate::grid::snapshot::{read_header, read_samples, write_header, write_samples};
use std::io::{Read, Write};

/// Solve the flattened Dirichlet problem and return the volume gradient.
pub fn harmonic_extension(h: &RealField, phi: &RealField, params: &DtnParams) -> Result<VolumeGradient> {
    let solver = DtnSolver::new(h.grid(), params)?;
    solver.extend(h, phi).map(|(v, _, _)| v)
}

/// `G(h)φ`, `B` and `V` from the extension solver.
pub fn dtn_full(h: &RealField, phi: &RealField, params: &DtnParams) -> Result<DtnResult> {
    DtnSolver::new(h.grid(), params)?.solve(h, phi)
}

/// Write a volume gradient: the field header with [`FLAG_VOLUME`], then
/// `u32 ny`, `f64 Y`, the `ny` level heights and the three arrays.
pub fn write_volume<W: Write>(w: &mut W, v: &VolumeGradient) -> Result<()> {
    write_header(w, v.grid.n(), v.grid.period(), FLAG_VOLUME)?;
    w.write_all(&(v.ny() as u32).to_le_bytes())?;
    w.write_all(&v.depth.to_le_bytes())?;
    write_samples(w, &v.levels)?;
    for a in [&v.gx1, &v.gx2, &v.gy] {
        write_samples(w, a)?;
    }
    Ok(())
}

pub fn read_volume<R: Read>(r: &mut R) -> Result<VolumeGradient> {
    let (n, period, flags) = read_header(r)?;
    if flags & FLAG_VOLUME == 0 {
        return Err(Error::Format("surface snapshot where a volume was expected".into()));
    }
    let grid = Grid::new(n, period)?;
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let ny = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let depth = f64::from_le_bytes(b8);
    let levels = read_samples(r, ny)?;
    let m = ny * n * n;
    let gx1 = read_samples(r, m)?;
    let gx2 = read_samples(r, m)?;
    let gy = read_samples(r, m)?;
    Ok(VolumeGradient { grid, depth, levels, gx1, gx2, gy })
}
