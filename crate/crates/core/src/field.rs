//! Real space-time fields, their spectral coefficients, and the
//! steady/periodic projections.
//!
//! Coefficients use averaged measures in both time and space, so the mode
//! `e^{i(kt + xi.x)}` has coefficient exactly 1. They are stored in FFT order
//! (non-negative frequencies first, Nyquist counted as positive).

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::{is_nyquist, neg_index, GridSpec};

/// Tolerance (relative to the largest coefficient) for accepting spectra as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Spectral view of a field: complex coefficients in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

/// Wavenumbers and indices of one spectral mode.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub it: usize,
    pub ix: [usize; 3],
    pub k: f64,
    pub xi: [f64; 3],
    pub nyquist_t: bool,
    pub nyquist_x: [bool; 3],
}

impl Mode {
    pub fn xi_sq(&self) -> f64 {
        self.xi.iter().map(|v| v * v).sum()
    }
}

impl Spectrum {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, coeffs: vec![Complex64::default(); grid.len()] }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: coeffs.len() });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, it: usize, ix: [usize; 3]) -> Complex64 {
        self.coeffs[self.grid.index(it, ix)]
    }

    pub fn set(&mut self, it: usize, ix: [usize; 3], value: Complex64) {
        let idx = self.grid.index(it, ix);
        self.coeffs[idx] = value;
    }

    pub fn mode(&self, idx: usize) -> Mode {
        mode_of(&self.grid, idx)
    }

    /// Index of the mode `(-k, -xi)` paired with `idx`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (it, ix) = self.grid.unindex(idx);
        let n = self.grid.n_x;
        self.grid.index(
            neg_index(it, self.grid.n_t),
            [neg_index(ix[0], n), neg_index(ix[1], n), neg_index(ix[2], n)],
        )
    }

    /// Largest `|c(-k,-xi) - conj(c(k,xi))|`.
    pub fn hermitian_deviation(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[self.conjugate_index(i)] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of `|c|^2` in a fixed (index) order.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Multiply every coefficient by `symbol(mode)`.
    pub fn apply<F>(&self, symbol: F) -> Spectrum
    where
        F: Fn(&Mode) -> Complex64,
    {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                if *c == Complex64::default() {
                    *c
                } else {
                    c * symbol(&mode_of(&self.grid, idx))
                }
            })
            .collect();
        Spectrum { grid: self.grid, coeffs }
    }

    /// Real inverse transforms of `symbol(j, mode) * self` for `j < count`.
    /// Symbols must preserve Hermitian symmetry; two outputs share one
    /// complex transform (real and imaginary part).
    pub(crate) fn inverse_many<F>(&self, count: usize, symbol: F) -> Vec<Field>
    where
        F: Fn(usize, &Mode) -> Complex64,
    {
        let zero = Complex64::default();
        let mut out = Vec::with_capacity(count);
        for j in (0..count).step_by(2) {
            let pair = j + 1 < count;
            let mut data: Vec<Complex64> = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    if *c == zero {
                        return zero;
                    }
                    let m = mode_of(&self.grid, idx);
                    let b = if pair { symbol(j + 1, &m) } else { zero };
                    c * (symbol(j, &m) + Complex64::i() * b)
                })
                .collect();
            fft::inverse(&mut data, self.grid.dims());
            out.push(Field::from_raw(self.grid, data.iter().map(|c| c.re).collect()));
            if pair {
                out.push(Field::from_raw(self.grid, data.iter().map(|c| c.im).collect()));
            }
        }
        out
    }

    /// Inverse transform to a real field; rejects non-Hermitian input.
    pub fn to_field(&self) -> Result<Field> {
        inverse_transform(self)
    }
}

pub(crate) fn mode_of(grid: &GridSpec, idx: usize) -> Mode {
    let (it, ix) = grid.unindex(idx);
    Mode {
        it,
        ix,
        k: grid.time_freq(it),
        xi: [grid.space_freq(ix[0]), grid.space_freq(ix[1]), grid.space_freq(ix[2])],
        nyquist_t: is_nyquist(it, grid.n_t),
        nyquist_x: [
            is_nyquist(ix[0], grid.n_x),
            is_nyquist(ix[1], grid.n_x),
            is_nyquist(ix[2], grid.n_x),
        ],
    }
}

/// Real-valued samples on the space-time grid, with a lazily cached spectrum.
#[derive(Debug, Clone)]
pub struct Field {
    grid: GridSpec,
    samples: Vec<f64>,
    spectrum: OnceLock<Spectrum>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.samples == other.samples
    }
}

impl Field {
    pub fn from_samples(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: samples.len() });
        }
        Ok(Self { grid, samples, spectrum: OnceLock::new() })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, samples: vec![0.0; grid.len()], spectrum: OnceLock::new() }
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self { grid, samples: vec![value; grid.len()], spectrum: OnceLock::new() }
    }

    /// Sample `f(t, x)` at every grid point.
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(f64, [f64; 3]) -> f64,
    {
        let samples = (0..grid.len())
            .map(|idx| {
                let (t, x) = grid.unindex(idx);
                f(grid.time(t), grid.point(x))
            })
            .collect();
        Self { grid, samples, spectrum: OnceLock::new() }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn get(&self, t: usize, x: [usize; 3]) -> f64 {
        self.samples[self.grid.index(t, x)]
    }

    /// Cached spectral coefficients.
    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| forward_transform(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Field {
        Field::from_raw(self.grid, self.samples.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map<F: Fn(f64, f64) -> f64>(&self, other: &Field, f: F) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field::from_raw(
            self.grid,
            self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn scale(&self, alpha: f64) -> Field {
        self.map(|v| alpha * v)
    }

    /// Largest pointwise difference `max |self - other|`.
    pub fn max_diff(&self, other: &Field) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest spread of a field across its time slices.
    pub fn time_variation(&self) -> f64 {
        let s = self.grid.spatial_len();
        let first = &self.samples[..s];
        self.samples
            .chunks(s)
            .skip(1)
            .flat_map(|slice| slice.iter().zip(first).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// Arithmetic mean over all samples (the (0,0) coefficient).
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub(crate) fn from_raw(grid: GridSpec, samples: Vec<f64>) -> Field {
        debug_assert_eq!(samples.len(), grid.len());
        Field { grid, samples, spectrum: OnceLock::new() }
    }
}

macro_rules! field_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Field> for &Field {
            type Output = Field;
            fn $method(self, rhs: &Field) -> Field {
                assert_eq!(self.grid, rhs.grid, "grid mismatch");
                Field::from_raw(
                    self.grid,
                    self.samples.iter().zip(&rhs.samples).map(|(a, b)| a $op b).collect(),
                )
            }
        }
        impl $trait<Field> for Field {
            type Output = Field;
            fn $method(self, rhs: Field) -> Field {
                (&self).$method(&rhs)
            }
        }
    };
}

field_binop!(Add, add, +);
field_binop!(Sub, sub, -);

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        self.scale(rhs)
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.scale(-1.0)
    }
}

/// Coefficients `(1/(n_t n_x^3)) sum f e^{-i(kt + xi.x)}`.
pub fn forward_transform(f: &Field) -> Spectrum {
    let grid = f.grid;
    let mut data: Vec<Complex64> = f.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut data, grid.dims());
    let scale = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    Spectrum { grid, coeffs: data }
}

/// Inverse of [`forward_transform`]. The input must be Hermitian to within
/// [`HERMITIAN_TOL`] relative to its largest coefficient.
pub fn inverse_transform(spec: &Spectrum) -> Result<Field> {
    let deviation = spec.hermitian_deviation();
    let scale = spec.max_abs();
    if deviation > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitianInput { deviation });
    }
    Ok(inverse_unchecked(spec))
}

/// Inverse transform for spectra built from real fields by Hermitian-preserving symbols.
pub(crate) fn inverse_unchecked(spec: &Spectrum) -> Field {
    let mut data = spec.coeffs.clone();
    fft::inverse(&mut data, spec.grid.dims());
    Field::from_raw(spec.grid, data.into_iter().map(|c| c.re).collect())
}

/// Time average at each spatial point, broadcast back over time.
pub fn project_steady(f: &Field) -> Field {
    let grid = f.grid;
    let s = grid.spatial_len();
    let mut mean = vec![0.0; s];
    for slice in f.samples.chunks(s) {
        for (m, v) in mean.iter_mut().zip(slice) {
            *m += v;
        }
    }
    let inv = 1.0 / grid.n_t as f64;
    for m in &mut mean {
        *m *= inv;
    }
    let mut samples = Vec::with_capacity(grid.len());
    for _ in 0..grid.n_t {
        samples.extend_from_slice(&mean);
    }
    Field::from_raw(grid, samples)
}

/// `f - project_steady(f)`: the zero-time-mean part.
pub fn project_periodic(f: &Field) -> Field {
    f - &project_steady(f)
}

/// The time-independent part as a single spatial slice.
pub fn steady_slice(f: &Field) -> Vec<f64> {
    project_steady(f).samples[..f.grid.spatial_len()].to_vec()
}
