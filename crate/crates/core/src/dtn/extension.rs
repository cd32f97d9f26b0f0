//! Fixed-point solver for the harmonic extension in flattened coordinates.
//!
//! Unknown: `g = (∇ₓu, ∂_y u)` on `ℝ²/Rℤ² × [-Y, 0]` with
//! `g = g_lin + 𝒦[M(∇h) g] + (0, f₁)`. Per horizontal frequency the kernel
//! reduces to one-sided exponential integrals in `y`, which are applied as
//! dense product-integration matrices. Products with `∇h` are formed
//! pseudo-spectrally inside the 2/3 band; the correction `g - g_lin` is
//! band-limited.
//!
//! The horizontal part of the correction is stored as a potential `s` with
//! `∇ₓ`-component `iξ s`, so the horizontal gradient stays curl-free.

use super::vertical::{KernelTable, VerticalGrid};
use crate::error::{Error, Result};
use crate::grid::{Grid, RealField, SpectralField};
use crate::ops::{band_two_thirds, partial, product};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest admissible `‖∇h‖_∞`.
pub const MAX_SLOPE: f64 = 0.5;

/// Numerical parameters of the extension solver.
#[derive(Clone, Debug, PartialEq)]
pub struct DtnParams {
    /// Truncation depth `Y`; `None` picks `e^{-Y k_min} = 1e-12`.
    pub depth: Option<f64>,
    /// Vertical nodes.
    pub ny: usize,
    /// Relative L² tolerance on the fixed-point update.
    pub tol: f64,
    pub max_iter: usize,
    /// Length scale of the vertical map; `None` uses `2R/(2π)`.
    pub map_scale: Option<f64>,
}

impl Default for DtnParams {
    fn default() -> Self {
        DtnParams { depth: None, ny: 24, tol: 1e-12, max_iter: 100, map_scale: None }
    }
}

impl DtnParams {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn resolved(&self, grid: &Grid) -> (f64, f64) {
        let kmin = grid.dk();
        let depth = self.depth.unwrap_or(12.0 * std::f64::consts::LN_10 / kmin);
        let scale = self.map_scale.unwrap_or(2.0 / kmin).min(0.5 * depth);
        (depth, scale)
    }
}

/// `(∇ₓu, ∂_y u)` sampled at every vertical level, bottom first.
#[derive(Clone, Debug)]
pub struct VolumeGradient {
    pub grid: Grid,
    /// Truncation depth `Y`.
    pub depth: f64,
    /// Level heights `y_0 = -Y < … < y_{ny-1} = 0`.
    pub levels: Vec<f64>,
    /// Each array has `ny · n²` entries, level-major.
    pub gx1: Vec<f64>,
    pub gx2: Vec<f64>,
    pub gy: Vec<f64>,
}

impl VolumeGradient {
    pub fn ny(&self) -> usize {
        self.levels.len()
    }

    fn level_slice<'a>(&self, a: &'a [f64], l: usize) -> &'a [f64] {
        let m = self.grid.len();
        &a[l * m..(l + 1) * m]
    }

    /// `(∂₁u, ∂₂u, ∂_y u)` at level `l`.
    pub fn level(&self, l: usize) -> (RealField, RealField, RealField) {
        let g = &self.grid;
        (
            RealField::from_samples(g.clone(), self.level_slice(&self.gx1, l).to_vec()),
            RealField::from_samples(g.clone(), self.level_slice(&self.gx2, l).to_vec()),
            RealField::from_samples(g.clone(), self.level_slice(&self.gy, l).to_vec()),
        )
    }

    /// Largest `|∂₁gx2 - ∂₂gx1|` over all levels.
    pub fn curl_defect(&self) -> f64 {
        (0..self.ny())
            .map(|l| {
                let (a, b, _) = self.level(l);
                let c = partial(&b.transform(), 0).sub(&partial(&a.transform(), 1)).expect("same grid");
                c.inverse().max_abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.gx1.iter().chain(&self.gx2).chain(&self.gy).all(|x| x.is_finite())
    }
}

/// Boundary quantities of the extension.
#[derive(Clone, Debug)]
pub struct DtnResult {
    /// `G(h)φ`.
    pub g: RealField,
    /// Vertical velocity `B = ∂_y u |_{y=0}`.
    pub b: RealField,
    /// Horizontal velocity `V = ∇φ - B∇h`.
    pub v: (RealField, RealField),
    pub iterations: usize,
    pub residual: f64,
}

/// Band-limited correction `g - g_lin`, reusable as an initial guess.
#[derive(Clone, Debug)]
pub struct Correction {
    s: Vec<Complex64>,
    y: Vec<Complex64>,
}

struct Mode {
    idx: usize,
    /// Flat index of `-ξ`.
    neg: usize,
    xi: (f64, f64),
    k: f64,
    table: Option<usize>,
}

/// Extension solver with kernel tables cached for one grid.
pub struct DtnSolver {
    grid: Grid,
    params: DtnParams,
    vg: VerticalGrid,
    modes: Vec<Mode>,
    tables: Vec<KernelTable>,
}

struct Surface {
    h1: Vec<f64>,
    h2: Vec<f64>,
    q: Vec<f64>,
    phi_hat: SpectralField,
}

impl DtnSolver {
    pub fn new(grid: &Grid, params: &DtnParams) -> Result<DtnSolver> {
        if params.ny < 3 {
            return Err(Error::InvalidArgument(format!("ny = {} is below 3", params.ny)));
        }
        if !(params.tol > 0.0) || params.max_iter == 0 {
            return Err(Error::InvalidArgument("tolerance and iteration cap must be positive".into()));
        }
        let (depth, scale) = params.resolved(grid);
        if !(depth > 0.0) || !depth.is_finite() {
            return Err(Error::InvalidArgument(format!("depth {depth} must be positive")));
        }
        let vg = VerticalGrid::new(params.ny, depth, scale);
        let n = grid.n();
        let band = band_two_thirds(n);
        let mut modes = Vec::new();
        let mut tables = Vec::new();
        let mut by_radius: HashMap<i64, usize> = HashMap::new();
        for m1 in -band..=band {
            for m2 in -band..=band {
                let i1 = grid.index_of(m1).expect("band inside grid");
                let i2 = grid.index_of(m2).expect("band inside grid");
                let n1 = grid.index_of(-m1).expect("band inside grid");
                let n2 = grid.index_of(-m2).expect("band inside grid");
                let idx = i1 * n + i2;
                let xi = grid.xi(idx);
                let k = xi.0.hypot(xi.1);
                let table = if m1 == 0 && m2 == 0 {
                    None
                } else {
                    let r2 = m1 * m1 + m2 * m2;
                    Some(*by_radius.entry(r2).or_insert_with(|| {
                        tables.push(KernelTable::new(&vg, k));
                        tables.len() - 1
                    }))
                };
                modes.push(Mode { idx, neg: n1 * n + n2, xi, k, table });
            }
        }
        Ok(DtnSolver { grid: grid.clone(), params: params.clone(), vg, modes, tables })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &DtnParams {
        &self.params
    }

    pub fn depth(&self) -> f64 {
        self.vg.depth()
    }

    pub fn levels(&self) -> &[f64] {
        self.vg.levels()
    }

    fn surface(&self, h: &RealField, phi: &RealField) -> Result<Surface> {
        self.grid.check(h.grid())?;
        self.grid.check(phi.grid())?;
        let hh = h.transform();
        let (d1, d2) = (partial(&hh, 0), partial(&hh, 1));
        let (f1, f2) = (d1.inverse(), d2.inverse());
        let slope = f1.samples().iter().zip(f2.samples()).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max);
        if !slope.is_finite() || slope > MAX_SLOPE {
            return Err(Error::SteepSurface(slope));
        }
        let band = band_two_thirds(self.grid.n());
        let (d1, d2) = (d1.truncate_box(band), d2.truncate_box(band));
        let q = product(&d1, &d1).add(&product(&d2, &d2)).expect("same grid").inverse();
        Ok(Surface {
            h1: d1.inverse().into_samples(),
            h2: d2.inverse().into_samples(),
            q: q.into_samples(),
            phi_hat: phi.transform(),
        })
    }

    fn rise(&self, m: &Mode, l: usize) -> f64 {
        match m.table {
            Some(t) => self.tables[t].rise[l],
            None => 1.0,
        }
    }

    /// Band coefficients of `(u, ∂_y u)` at level `l`, correction included.
    fn band_fields(&self, s: &Surface, c: &Correction, l: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let nb = self.modes.len();
        let p = s.phi_hat.coeffs();
        let mut u = vec![ZERO; nb];
        let mut y = vec![ZERO; nb];
        for (j, m) in self.modes.iter().enumerate() {
            let lin = self.rise(m, l) * p[m.idx];
            u[j] = lin + c.s[l * nb + j];
            y[j] = m.k * lin + c.y[l * nb + j];
        }
        (u, y)
    }

    /// Transforms `(c, b)` of the forcing `(∇h ∂_y u, -∇h·∇ₓu + |∇h|² ∂_y u)`
    /// at levels `l` and `l + 1` (the second only if present), band only.
    fn forcing_pair(&self, s: &Surface, c: &Correction, l: usize, out: &mut [Complex64]) {
        let n2 = self.grid.len();
        let nb = self.modes.len();
        let two = l + 1 < self.vg.len();
        let (u0, y0) = self.band_fields(s, c, l);
        let (u1, y1) = if two { self.band_fields(s, c, l + 1) } else { (vec![ZERO; nb], vec![ZERO; nb]) };
        let mut px0 = vec![ZERO; n2];
        let mut px1 = vec![ZERO; n2];
        let mut py = vec![ZERO; n2];
        for (j, m) in self.modes.iter().enumerate() {
            let (a, b) = m.xi;
            px0[m.idx] = I * a * u0[j] - b * u0[j];
            px1[m.idx] = I * a * u1[j] - b * u1[j];
            py[m.idx] = y0[j] + I * y1[j];
        }
        for buf in [&mut px0, &mut px1, &mut py] {
            self.grid.inverse_raw(buf);
        }
        // physical products; reuse the buffers for the packed results
        for i in 0..n2 {
            let (h1, h2, q) = (s.h1[i], s.h2[i], s.q[i]);
            let (gy0, gy1) = (py[i].re, py[i].im);
            let b0 = -h1 * px0[i].re - h2 * px0[i].im + q * gy0;
            let b1 = -h1 * px1[i].re - h2 * px1[i].im + q * gy1;
            px0[i] = Complex64::new(h1 * gy0, h2 * gy0);
            px1[i] = Complex64::new(h1 * gy1, h2 * gy1);
            py[i] = Complex64::new(b0, b1);
        }
        for buf in [&mut px0, &mut px1, &mut py] {
            self.grid.forward_raw(buf);
        }
        // out layout: [c_l, b_l, c_{l+1}, b_{l+1}], each nb long
        for (j, m) in self.modes.iter().enumerate() {
            let (a, b) = m.xi;
            for (slot, q) in [(0usize, &px0), (2, &px1)] {
                let (z, w) = (q[m.idx], q[m.neg].conj());
                let a1 = 0.5 * (z + w);
                let a2 = -0.5 * I * (z - w);
                out[slot * nb + j] = I * (a * a1 + b * a2);
            }
            let (z, w) = (py[m.idx], py[m.neg].conj());
            out[nb + j] = 0.5 * (z + w);
            out[3 * nb + j] = -0.5 * I * (z - w);
        }
    }

    fn forcing(&self, s: &Surface, c: &Correction) -> (Vec<Complex64>, Vec<Complex64>) {
        let ny = self.vg.len();
        let nb = self.modes.len();
        let pairs: Vec<usize> = (0..ny).step_by(2).collect();
        let mut buf = vec![ZERO; pairs.len() * 4 * nb];
        buf.par_chunks_mut(4 * nb).zip(pairs.par_iter()).for_each(|(out, &l)| self.forcing_pair(s, c, l, out));
        let mut cc = vec![ZERO; ny * nb];
        let mut bb = vec![ZERO; ny * nb];
        for (pi, &l) in pairs.iter().enumerate() {
            let o = &buf[pi * 4 * nb..];
            cc[l * nb..(l + 1) * nb].copy_from_slice(&o[..nb]);
            bb[l * nb..(l + 1) * nb].copy_from_slice(&o[nb..2 * nb]);
            if l + 1 < ny {
                cc[(l + 1) * nb..(l + 2) * nb].copy_from_slice(&o[2 * nb..3 * nb]);
                bb[(l + 1) * nb..(l + 2) * nb].copy_from_slice(&o[3 * nb..4 * nb]);
            }
        }
        (cc, bb)
    }

    /// Apply the kernel to the forcing, giving the new correction.
    fn apply_kernel(&self, cc: &[Complex64], bb: &[Complex64]) -> Correction {
        let ny = self.vg.len();
        let nb = self.modes.len();
        // modes are ordered so that -ξ sits at position nb - 1 - j; the
        // forcing is Hermitian, so only the first half is computed
        let half = nb / 2 + 1;
        let cols: Vec<(Vec<Complex64>, Vec<Complex64>)> = self.modes[..half]
            .par_iter()
            .enumerate()
            .map(|(j, m)| {
                let c: Vec<Complex64> = (0..ny).map(|l| cc[l * nb + j]).collect();
                let b: Vec<Complex64> = (0..ny).map(|l| bb[l * nb + j]).collect();
                match m.table {
                    None => (vec![ZERO; ny], b.iter().map(|z| -z).collect()),
                    Some(t) => mode_update(&self.tables[t], ny, &c, &b),
                }
            })
            .collect();
        let mut s = vec![ZERO; ny * nb];
        let mut y = vec![ZERO; ny * nb];
        for (j, (cs, cy)) in cols.into_iter().enumerate() {
            let r = nb - 1 - j;
            for l in 0..ny {
                s[l * nb + j] = cs[l];
                y[l * nb + j] = cy[l];
                s[l * nb + r] = cs[l].conj();
                y[l * nb + r] = cy[l].conj();
            }
        }
        Correction { s, y }
    }

    fn zero_correction(&self) -> Correction {
        let m = self.vg.len() * self.modes.len();
        Correction { s: vec![ZERO; m], y: vec![ZERO; m] }
    }

    /// Relative change between successive corrections in the weighted L² norm.
    fn residual(&self, s: &Surface, old: &Correction, new: &Correction) -> f64 {
        let nb = self.modes.len();
        let p = s.phi_hat.coeffs();
        let w = self.vg.weights();
        let (mut num, mut den) = (0.0, 0.0);
        for l in 0..self.vg.len() {
            for (j, m) in self.modes.iter().enumerate() {
                let k2 = m.k * m.k;
                let i = l * nb + j;
                num += w[l] * (k2 * (new.s[i] - old.s[i]).norm_sqr() + (new.y[i] - old.y[i]).norm_sqr());
                let lin = self.rise(m, l) * p[m.idx];
                den += w[l] * (k2 * (lin + new.s[i]).norm_sqr() + (m.k * lin + new.y[i]).norm_sqr());
            }
        }
        if den == 0.0 {
            0.0
        } else {
            (num / den).sqrt()
        }
    }

    fn iterate(
        &self,
        s: &Surface,
        warm: Option<&Correction>,
    ) -> Result<(Correction, usize, f64)> {
        let mut corr = match warm {
            Some(c) if c.s.len() == self.vg.len() * self.modes.len() => c.clone(),
            _ => self.zero_correction(),
        };
        let mut residual = f64::INFINITY;
        for it in 1..=self.params.max_iter {
            let (cc, bb) = self.forcing(s, &corr);
            let next = self.apply_kernel(&cc, &bb);
            residual = self.residual(s, &corr, &next);
            corr = next;
            if !residual.is_finite() {
                break;
            }
            if residual <= self.params.tol {
                return Ok((corr, it, residual));
            }
        }
        Err(Error::DtnNonConvergence { residual, iterations: self.params.max_iter })
    }

    /// Solve for the full volume gradient.
    pub fn extend(&self, h: &RealField, phi: &RealField) -> Result<(VolumeGradient, usize, f64)> {
        let s = self.surface(h, phi)?;
        let (corr, it, res) = self.iterate(&s, None)?;
        Ok((self.assemble_volume(&s, &corr), it, res))
    }

    fn assemble_volume(&self, s: &Surface, c: &Correction) -> VolumeGradient {
        let ny = self.vg.len();
        let nb = self.modes.len();
        let n2 = self.grid.len();
        let p = s.phi_hat.coeffs();
        let mut gx1 = vec![0.0; ny * n2];
        let mut gx2 = vec![0.0; ny * n2];
        let mut gy = vec![0.0; ny * n2];
        for (l, &yl) in self.vg.levels().iter().enumerate() {
            let mut px = vec![ZERO; n2];
            let mut py = vec![ZERO; n2];
            for idx in 0..n2 {
                let (a, b) = self.grid.xi(idx);
                let k = a.hypot(b);
                let lin = (k * yl).exp() * p[idx];
                px[idx] = (I * a - b) * lin;
                py[idx] = k * lin;
            }
            for (j, m) in self.modes.iter().enumerate() {
                let (a, b) = m.xi;
                px[m.idx] += (I * a - b) * c.s[l * nb + j];
                py[m.idx] += c.y[l * nb + j];
            }
            self.grid.inverse_raw(&mut px);
            self.grid.inverse_raw(&mut py);
            for i in 0..n2 {
                gx1[l * n2 + i] = px[i].re;
                gx2[l * n2 + i] = px[i].im;
                gy[l * n2 + i] = py[i].re;
            }
        }
        VolumeGradient {
            grid: self.grid.clone(),
            depth: self.vg.depth(),
            levels: self.vg.levels().to_vec(),
            gx1,
            gx2,
            gy,
        }
    }

    /// Boundary quantities `G`, `B`, `V`.
    pub fn solve(&self, h: &RealField, phi: &RealField) -> Result<DtnResult> {
        self.solve_warm(h, phi, None).map(|(r, _)| r)
    }

    /// As [`solve`](Self::solve), starting from a previous correction.
    pub fn solve_warm(
        &self,
        h: &RealField,
        phi: &RealField,
        warm: Option<&Correction>,
    ) -> Result<(DtnResult, Correction)> {
        let s = self.surface(h, phi)?;
        let (corr, iterations, residual) = self.iterate(&s, warm)?;
        let result = self.boundary(&s, &corr, iterations, residual);
        Ok((result, corr))
    }

    fn boundary(&self, s: &Surface, c: &Correction, iterations: usize, residual: f64) -> DtnResult {
        let ny = self.vg.len();
        let nb = self.modes.len();
        let n2 = self.grid.len();
        let top = ny - 1;
        let p = s.phi_hat.coeffs();
        // band fields at the surface; the horizontal correction vanishes there
        let (u, y) = self.band_fields(s, c, top);
        let mut px = vec![ZERO; n2];
        let mut py = vec![ZERO; n2];
        for (j, m) in self.modes.iter().enumerate() {
            let (a, b) = m.xi;
            px[m.idx] = (I * a - b) * u[j];
            py[m.idx] = y[j];
        }
        self.grid.inverse_raw(&mut px);
        self.grid.inverse_raw(&mut py);
        let mut f = vec![ZERO; n2];
        for i in 0..n2 {
            let b = -s.h1[i] * px[i].re - s.h2[i] * px[i].im + s.q[i] * py[i].re;
            f[i] = Complex64::new(b, 0.0);
        }
        self.grid.forward_raw(&mut f);
        // full-spectrum surface values: ∂_y u = |∇|φ + correction
        let mut bhat = vec![ZERO; n2];
        for idx in 0..n2 {
            bhat[idx] = self.grid.abs_xi(idx) * p[idx];
        }
        let mut ghat = bhat.clone();
        for (j, m) in self.modes.iter().enumerate() {
            bhat[m.idx] += c.y[top * nb + j];
            ghat[m.idx] += c.y[top * nb + j] + f[m.idx];
        }
        let grid = &self.grid;
        let bhat = SpectralField::from_coeffs(grid.clone(), bhat);
        let g = SpectralField::from_coeffs(grid.clone(), ghat).inverse();
        let b = bhat.inverse();
        let hx = |v: &[f64]| RealField::from_samples(grid.clone(), v.to_vec()).transform();
        let bv1 = product(&bhat, &hx(&s.h1));
        let bv2 = product(&bhat, &hx(&s.h2));
        let v1 = partial(&s.phi_hat, 0).sub(&bv1).expect("same grid").inverse();
        let v2 = partial(&s.phi_hat, 1).sub(&bv2).expect("same grid").inverse();
        DtnResult { g, b, v: (v1, v2), iterations, residual }
    }
}

/// New correction at one frequency from the forcing columns `c`, `b`.
fn mode_update(t: &KernelTable, ny: usize, c: &[Complex64], b: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let k = t.k;
    let row = t.surface_row(ny);
    let sc: Complex64 = row.iter().zip(c).map(|(w, z)| w * z).sum();
    let sb: Complex64 = row.iter().zip(b).map(|(w, z)| w * z).sum();
    let mut s = vec![ZERO; ny];
    let mut y = vec![ZERO; ny];
    for i in 0..ny {
        let lo = &t.lu[i * ny..(i + 1) * ny];
        let up = &t.lu[(ny + i) * ny..(ny + i + 1) * ny];
        let (mut lc, mut uc, mut lb, mut ub) = (ZERO, ZERO, ZERO, ZERO);
        for j in 0..ny {
            lc += lo[j] * c[j];
            uc += up[j] * c[j];
            lb += lo[j] * b[j];
            ub += up[j] * b[j];
        }
        let ec = t.rise[i] * sc;
        let eb = t.rise[i] * sb;
        s[i] = (ec - lc - uc) / (2.0 * k) + 0.5 * (eb - lb + ub);
        y[i] = 0.5 * (ec + lc - uc) + 0.5 * k * (eb + lb + ub) - b[i];
    }
    (s, y)
}
