use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization of the space-time torus `[0, period) x [0, box_len)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_t: usize,
    pub n_x: usize,
    pub box_len: f64,
    pub period: f64,
}

impl GridSpec {
    pub fn new(n_t: usize, n_x: usize, box_len: f64, period: f64) -> Result<Self> {
        let grid = Self { n_t, n_x, box_len, period };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_t", self.n_t), ("n_x", self.n_x)] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!("{name} = {n} must be even and >= 4")));
            }
        }
        if !(self.box_len.is_finite() && self.box_len > 0.0) {
            return Err(Error::InvalidGrid(format!("box_len = {} must be positive", self.box_len)));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::InvalidGrid(format!("period = {} must be positive", self.period)));
        }
        Ok(())
    }

    /// Total number of samples `n_t * n_x^3`.
    pub fn len(&self) -> usize {
        self.n_t * self.spatial_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spatial_len(&self) -> usize {
        self.n_x * self.n_x * self.n_x
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.n_t, self.n_x, self.n_x, self.n_x]
    }

    #[inline]
    pub fn index(&self, t: usize, x: [usize; 3]) -> usize {
        let n = self.n_x;
        ((t * n + x[0]) * n + x[1]) * n + x[2]
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> (usize, [usize; 3]) {
        let n = self.n_x;
        let x3 = idx % n;
        let x2 = (idx / n) % n;
        let x1 = (idx / (n * n)) % n;
        let t = idx / (n * n * n);
        (t, [x1, x2, x3])
    }

    pub fn dt(&self) -> f64 {
        self.period / self.n_t as f64
    }

    pub fn dx(&self) -> f64 {
        self.box_len / self.n_x as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(3)
    }

    pub fn volume(&self) -> f64 {
        self.box_len.powi(3)
    }

    pub fn time(&self, t: usize) -> f64 {
        t as f64 * self.dt()
    }

    pub fn point(&self, x: [usize; 3]) -> [f64; 3] {
        let h = self.dx();
        [x[0] as f64 * h, x[1] as f64 * h, x[2] as f64 * h]
    }

    /// Fundamental time frequency `2 pi / period`.
    pub fn time_step_freq(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Fundamental spatial frequency `2 pi / box_len`.
    pub fn space_step_freq(&self) -> f64 {
        2.0 * PI / self.box_len
    }

    /// Time frequency `k` of FFT-ordered index `i`.
    pub fn time_freq(&self, i: usize) -> f64 {
        signed_mode(i, self.n_t) as f64 * self.time_step_freq()
    }

    /// Spatial frequency of FFT-ordered index `i` along any axis.
    pub fn space_freq(&self, i: usize) -> f64 {
        signed_mode(i, self.n_x) as f64 * self.space_step_freq()
    }

    /// Same grid with a different spatial/temporal resolution.
    pub fn with_resolution(&self, n_t: usize, n_x: usize) -> Result<Self> {
        Self::new(n_t, n_x, self.box_len, self.period)
    }
}

/// Signed mode number of FFT-ordered index `i` on `n` points, in `{-n/2+1, ..., n/2}`.
#[inline]
pub fn signed_mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// FFT-ordered index of signed mode `m` on `n` points.
#[inline]
pub fn mode_index(m: i64, n: usize) -> usize {
    m.rem_euclid(n as i64) as usize
}

/// Index of the mode paired with `i` under `k -> -k`.
#[inline]
pub fn neg_index(i: usize, n: usize) -> usize {
    (n - i) % n
}

#[inline]
pub fn is_nyquist(i: usize, n: usize) -> bool {
    i == n / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_counts() {
        assert!(GridSpec::new(5, 8, 1.0, 1.0).is_err());
        assert!(GridSpec::new(2, 8, 1.0, 1.0).is_err());
        assert!(GridSpec::new(8, 6, 1.0, 1.0).is_ok());
        assert!(GridSpec::new(8, 8, 0.0, 1.0).is_err());
        assert!(GridSpec::new(8, 8, 1.0, -1.0).is_err());
    }

    #[test]
    fn frequencies_follow_fft_order_with_positive_nyquist() {
        let g = GridSpec::new(8, 4, 2.0 * PI, 2.0 * PI).unwrap();
        let k: Vec<f64> = (0..8).map(|i| g.time_freq(i)).collect();
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0]);
        let xi: Vec<f64> = (0..4).map(|i| g.space_freq(i)).collect();
        assert_eq!(xi, vec![0.0, 1.0, 2.0, -1.0]);
    }

    #[test]
    fn index_round_trip() {
        let g = GridSpec::new(4, 6, 1.0, 1.0).unwrap();
        for idx in 0..g.len() {
            let (t, x) = g.unindex(idx);
            assert_eq!(g.index(t, x), idx);
        }
    }
}
