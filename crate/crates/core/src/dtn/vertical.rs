//! Vertical discretization of `[-Y, 0]` and the per-frequency integral
//! operators of the harmonic-extension kernel.
//!
//! Nodes are Chebyshev-Lobatto points `s_j ∈ [-1, 1]` pulled back through
//! the algebraic map `y(s) = -ℓ (1 - s) / (1 + s + 2ℓ/Y)`, which clusters
//! points near the surface where `e^{k y}` varies fastest. Integrals of the
//! form `∫ e^{-k|y_i - y'|} F(y') dy'` are evaluated exactly for the
//! polynomial (in `s`) interpolant of `F`: product-integration weights.

use gauss_quad::legendre::GaussLegendre;
use std::f64::consts::PI;

/// Mapped Chebyshev grid on `[-Y, 0]`, ordered from the bottom up.
#[derive(Clone, Debug)]
pub struct VerticalGrid {
    depth: f64,
    scale: f64,
    s: Vec<f64>,
    y: Vec<f64>,
    bary: Vec<f64>,
    weights: Vec<f64>,
}

impl VerticalGrid {
    /// `ny` nodes on `[-depth, 0]` with map length `scale`.
    pub fn new(ny: usize, depth: f64, scale: f64) -> VerticalGrid {
        assert!(ny >= 3, "need at least three vertical nodes");
        let m = ny - 1;
        let s: Vec<f64> = (0..ny).map(|j| -(PI * j as f64 / m as f64).cos()).collect();
        let mut s = s;
        s[0] = -1.0;
        s[m] = 1.0;
        let bary = (0..ny)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == m {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();
        let mut vg = VerticalGrid { depth, scale, y: Vec::new(), s, bary, weights: Vec::new() };
        vg.y = vg.s.iter().map(|&s| vg.map(s)).collect();
        vg.y[0] = -depth;
        vg.y[m] = 0.0;
        vg.weights = vg.integration_row(m, 0.0);
        vg
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Node depths `y_0 = -Y < … < y_{ny-1} = 0`.
    pub fn levels(&self) -> &[f64] {
        &self.y
    }

    /// Quadrature weights for `∫_{-Y}^0 F dy`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn c(&self) -> f64 {
        2.0 * self.scale / self.depth
    }

    fn map(&self, s: f64) -> f64 {
        -self.scale * (1.0 - s) / (1.0 + s + self.c())
    }

    fn jacobian(&self, s: f64) -> f64 {
        let d = 1.0 + s + self.c();
        self.scale * (2.0 + self.c()) / (d * d)
    }

    fn inverse_map(&self, y: f64) -> f64 {
        let l = self.scale;
        ((l + y + y * self.c()) / (l - y)).clamp(-1.0, 1.0)
    }

    /// Lagrange basis values at `s`, written into `out`.
    pub(crate) fn basis(&self, s: f64, out: &mut [f64]) {
        for (j, &sj) in self.s.iter().enumerate() {
            if s == sj {
                out.iter_mut().for_each(|v| *v = 0.0);
                out[j] = 1.0;
                return;
            }
        }
        let mut den = 0.0;
        for j in 0..self.s.len() {
            let t = self.bary[j] / (s - self.s[j]);
            out[j] = t;
            den += t;
        }
        out.iter_mut().for_each(|v| *v /= den);
    }

    /// Interpolate nodal values at depth `y`.
    pub fn interpolate(&self, values: &[f64], y: f64) -> f64 {
        let mut b = vec![0.0; self.len()];
        self.basis(self.inverse_map(y), &mut b);
        b.iter().zip(values).map(|(a, v)| a * v).sum()
    }

    /// Row `i` of the lower operator `∫_{-Y}^{y_i} e^{-k(y_i - y')} ℓ_j(y') dy'`.
    fn integration_row(&self, i: usize, k: f64) -> Vec<f64> {
        self.panel_integral(i, k, Direction::Below)
    }

    fn panel_integral(&self, i: usize, k: f64, dir: Direction) -> Vec<f64> {
        let ny = self.len();
        let yi = self.y[i];
        let mut row = vec![0.0; ny];
        let (end_y, end_s) = match dir {
            Direction::Below => (-self.depth, -1.0),
            Direction::Above => (0.0, 1.0),
        };
        if yi == end_y {
            return row;
        }
        let rule = GaussLegendre::new((ny + 8).try_into().unwrap());
        let nodes = rule.as_node_weight_pairs();
        let mut basis = vec![0.0; ny];
        let step_y = if k > 0.0 { 1.5 / k } else { f64::INFINITY };
        let reach = if k > 0.0 { 42.0 / k } else { f64::INFINITY };
        let mut s_cur = self.s[i];
        let mut y_cur = yi;
        loop {
            let (y_next, s_next, last) = match dir {
                Direction::Below => {
                    let by_s = self.map((s_cur - 0.25).max(-1.0));
                    let y_next = (y_cur - step_y).max(by_s).max(end_y);
                    let last = y_next <= end_y || yi - y_next >= reach;
                    let s_next = if y_next <= end_y { end_s } else { self.inverse_map(y_next) };
                    (y_next, s_next, last)
                }
                Direction::Above => {
                    let by_s = self.map((s_cur + 0.25).min(1.0));
                    let y_next = (y_cur + step_y).min(by_s).min(end_y);
                    let last = y_next >= end_y || y_next - yi >= reach;
                    let s_next = if y_next >= end_y { end_s } else { self.inverse_map(y_next) };
                    (y_next, s_next, last)
                }
            };
            let (a, b) = (s_cur.min(s_next), s_cur.max(s_next));
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            for &(x, w) in nodes {
                let s = mid + half * x;
                let y = self.map(s);
                let f = (-k * (yi - y).abs()).exp() * self.jacobian(s) * w * half;
                self.basis(s, &mut basis);
                for j in 0..ny {
                    row[j] += f * basis[j];
                }
            }
            if last {
                break;
            }
            s_cur = s_next;
            y_cur = y_next;
        }
        row
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Below,
    Above,
}

/// Integral operators of the kernel at one horizontal frequency `k > 0`.
#[derive(Clone, Debug)]
pub(crate) struct KernelTable {
    pub k: f64,
    /// `e^{k y_i}`.
    pub rise: Vec<f64>,
    /// `[L; U]` stacked row-major, `2 ny × ny`: lower rows
    /// `∫_{-Y}^{y_i} e^{-k(y_i-y')} ℓ_j`, then upper rows `∫_{y_i}^0 e^{-k(y'-y_i)} ℓ_j`.
    pub lu: Vec<f64>,
}

impl KernelTable {
    pub fn new(vg: &VerticalGrid, k: f64) -> KernelTable {
        let ny = vg.len();
        let mut lu = vec![0.0; 2 * ny * ny];
        for i in 0..ny {
            let lo = vg.panel_integral(i, k, Direction::Below);
            let up = vg.panel_integral(i, k, Direction::Above);
            lu[i * ny..(i + 1) * ny].copy_from_slice(&lo);
            lu[(ny + i) * ny..(ny + i + 1) * ny].copy_from_slice(&up);
        }
        let rise = vg.levels().iter().map(|&y| (k * y).exp()).collect();
        KernelTable { k, rise, lu }
    }

    /// Weights of `∫_{-Y}^0 e^{k y'} F(y') dy'`, the top lower row.
    pub fn surface_row(&self, ny: usize) -> &[f64] {
        &self.lu[(ny - 1) * ny..ny * ny]
    }
}
