//! Binary snapshots: a 32-byte little-endian header (`GWF1`, u32 n, f64 R,
//! u64 flags, 8 reserved bytes) followed by `n^2` f64 samples, row-major.

use super::{Grid, RealField};
use crate::error::{Error, Result};
use std::io::{Read, Write};

const MAGIC: &[u8; 4] = b"GWF1";
/// Header flag marking a volume-gradient payload.
pub const FLAG_VOLUME: u64 = 1;

pub(crate) fn write_header<W: Write>(w: &mut W, n: usize, r: f64, flags: u64) -> Result<()> {
    let mut head = [0u8; 32];
    head[0..4].copy_from_slice(MAGIC);
    head[4..8].copy_from_slice(&(n as u32).to_le_bytes());
    head[8..16].copy_from_slice(&r.to_le_bytes());
    head[16..24].copy_from_slice(&flags.to_le_bytes());
    w.write_all(&head)?;
    Ok(())
}

pub(crate) fn read_header<R: Read>(r: &mut R) -> Result<(usize, f64, u64)> {
    let mut head = [0u8; 32];
    r.read_exact(&mut head)?;
    if &head[0..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(head[4..8].try_into().unwrap()) as usize;
    let period = f64::from_le_bytes(head[8..16].try_into().unwrap());
    let flags = u64::from_le_bytes(head[16..24].try_into().unwrap());
    Ok((n, period, flags))
}

pub(crate) fn write_samples<W: Write>(w: &mut W, data: &[f64]) -> Result<()> {
    let mut buf = Vec::with_capacity(data.len() * 8);
    for x in data {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub(crate) fn read_samples<R: Read>(r: &mut R, count: usize) -> Result<Vec<f64>> {
    let mut buf = vec![0u8; count * 8];
    r.read_exact(&mut buf)?;
    Ok(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
}

/// Write a real field snapshot.
pub fn write_field<W: Write>(w: &mut W, f: &RealField) -> Result<()> {
    write_header(w, f.grid().n(), f.grid().period(), 0)?;
    write_samples(w, f.samples())
}

/// Read a real field snapshot.
pub fn read_field<R: Read>(r: &mut R) -> Result<RealField> {
    let (n, period, flags) = read_header(r)?;
    if flags & FLAG_VOLUME != 0 {
        return Err(Error::Format("volume snapshot where a surface field was expected".into()));
    }
    let grid = Grid::new(n, period)?;
    let data = read_samples(r, n * n)?;
    Ok(RealField::from_samples(grid, data))
}
