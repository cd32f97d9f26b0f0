use super::{Grid, RealField, SpectralField};

fn g(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// C^∞ step: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = g(t);
        a / (a + g(1.0 - t))
    }
}

/// Radial cutoff: 1 on `|x| <= 3/4`, 0 on `|x| >= 3/2`, nonincreasing.
pub fn phi(x: f64) -> f64 {
    smooth_step(2.0 - (4.0 / 3.0) * x.abs())
}

/// Multiplier of `P_k` at `|ξ| = r`; zero at the zero frequency.
pub fn lp_weight(k: i32, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let s = (2.0f64).powi(k);
    phi(r / s) - phi(2.0 * r / s)
}

/// Multiplier of `P_{≤k}` at `|ξ| = r` (equal to 1 at the zero frequency).
pub fn lp_low_weight(k: i32, r: f64) -> f64 {
    phi(r / (2.0f64).powi(k))
}

/// Dyadic indices `k` for which `P_k` can be nonzero on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpRange {
    pub lo: i32,
    pub hi: i32,
}

impl LpRange {
    pub fn for_grid(grid: &Grid) -> LpRange {
        let kmin = grid.dk();
        let kmax = (0..grid.len()).map(|i| grid.abs_xi(i)).fold(0.0, f64::max);
        // φ_k is supported in (3/8·2^k, 3·2^k)
        let lo = (kmin / 3.0).log2().floor() as i32;
        let hi = (kmax * 8.0 / 3.0).log2().ceil() as i32;
        LpRange { lo, hi }
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi
    }
}

/// `P_k f`.
pub fn lp_project(f: &SpectralField, k: i32) -> SpectralField {
    let g = f.grid().clone();
    f.map_indexed(|idx, z| z * lp_weight(k, g.abs_xi(idx)))
}

/// `P_{≤k} f`, which keeps the mean.
pub fn lp_low(f: &SpectralField, k: i32) -> SpectralField {
    let g = f.grid().clone();
    f.map_indexed(|idx, z| z * lp_low_weight(k, g.abs_xi(idx)))
}

fn torus_distance(grid: &Grid, idx: usize) -> f64 {
    let (x1, x2) = grid.point(idx);
    let c = 0.5 * grid.period();
    (x1 - c).hypot(x2 - c)
}

/// Weight of the spatial cutoff `Q_j` at distance `d` from the torus center.
pub fn spatial_weight(j: i32, d: f64, period: f64) -> f64 {
    if j < 0 {
        return 0.0;
    }
    let top = max_spatial_index(period);
    if j == 0 {
        1.0 - (1..=top).map(|l| spatial_weight(l, d, period)).sum::<f64>()
    } else if j > top {
        0.0
    } else {
        let s = (2.0f64).powi(j);
        phi(d / s) - phi(2.0 * d / s)
    }
}

fn max_spatial_index(period: f64) -> i32 {
    // Q_j vanishes once 2^j exceeds √2·R
    ((2.0f64).sqrt() * period).log2().floor() as i32
}

/// `Q_j f`: multiplication by the dyadic cutoff of the geodesic distance
/// from the torus center `(R/2, R/2)`.
pub fn spatial_cutoff(f: &RealField, j: i32) -> RealField {
    let grid = f.grid().clone();
    let r = grid.period();
    let data = f
        .samples()
        .iter()
        .enumerate()
        .map(|(idx, &v)| v * spatial_weight(j, torus_distance(&grid, idx), r))
        .collect();
    RealField::from_samples(grid, data)
}

/// Number of nonzero spatial cutoffs `Q_0, …, Q_J` for period `r`.
pub fn spatial_count(period: f64) -> i32 {
    max_spatial_index(period).max(0) + 1
}

pub(crate) fn distance_field(grid: &Grid) -> Vec<f64> {
    (0..grid.len()).map(|idx| torus_distance(grid, idx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_plateaus() {
        assert_eq!(phi(0.0), 1.0);
        assert_eq!(phi(0.75), 1.0);
        assert_eq!(phi(-0.5), 1.0);
        assert_eq!(phi(1.5), 0.0);
        assert_eq!(phi(7.0), 0.0);
        let mid = phi(1.125);
        assert!((mid - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cutoff_monotone() {
        let mut prev = 1.0;
        for i in 0..=400 {
            let v = phi(i as f64 * 0.005);
            assert!(v <= prev && v >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn unit_mode_weights() {
        let p0 = lp_weight(0, 1.0);
        let p1 = lp_weight(1, 1.0);
        assert_eq!(p0, phi(1.0));
        assert!((p1 - (1.0 - phi(1.0))).abs() < 1e-16);
        for k in [-3, -2, -1, 2, 3] {
            assert_eq!(lp_weight(k, 1.0), 0.0);
        }
        assert!((p0 + p1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_frequency_support() {
        for k in -6..6 {
            let w = lp_weight(k, 0.5);
            if !(k == -1 || k == 0) {
                assert_eq!(w, 0.0, "k = {k}");
            }
        }
    }

    #[test]
    fn spatial_partition_counts() {
        let r = 2.0 * std::f64::consts::PI;
        assert_eq!(spatial_weight(4, 1.0, r), 0.0);
        for d in [0.0, 0.3, 1.0, 2.5, 4.4] {
            let s: f64 = (0..spatial_count(r)).map(|j| spatial_weight(j, d, r)).sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }
}
