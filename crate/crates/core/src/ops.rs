//! Exact spectral differential operators.

use num_complex::Complex64;

use crate::field::{inverse_unchecked, Field, Mode, Spectrum};
use crate::model::ModelParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Mixed partial derivative `d_t^t d_1^x1 d_2^x2 d_3^x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Derivative {
    pub t: u8,
    pub x: [u8; 3],
}

impl Derivative {
    pub const fn new(t: u8, x: [u8; 3]) -> Self {
        Self { t, x }
    }

    pub const fn time(order: u8) -> Self {
        Self { t: order, x: [0, 0, 0] }
    }

    pub const fn space(axis: usize) -> Self {
        let mut x = [0, 0, 0];
        x[axis] = 1;
        Self { t: 0, x }
    }

    pub fn spatial_order(&self) -> u8 {
        self.x.iter().sum()
    }

    /// Symbol `(ik)^t (i xi_1)^x1 ...`; odd orders vanish on Nyquist modes so
    /// real fields map to real fields.
    pub fn symbol(&self, m: &Mode) -> Complex64 {
        let mut out = axis_factor(m.k, self.t, m.nyquist_t);
        for a in 0..3 {
            out *= axis_factor(m.xi[a], self.x[a], m.nyquist_x[a]);
        }
        out
    }
}

fn axis_factor(freq: f64, order: u8, nyquist: bool) -> Complex64 {
    if order == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if nyquist && order % 2 == 1 {
        return Complex64::default();
    }
    (I * freq).powu(order as u32)
}

/// Spectral derivative of a field.
pub fn derivative(f: &Field, d: Derivative) -> Field {
    if d == Derivative::default() {
        return f.clone();
    }
    inverse_unchecked(&f.spectrum().apply(|m| d.symbol(m)))
}

/// Several spectral derivatives of one field, in the order given.
pub fn derivatives(f: &Field, ds: &[Derivative]) -> Vec<Field> {
    f.spectrum().inverse_many(ds.len(), |j, m| ds[j].symbol(m))
}

/// Gradient `(d_1 f, d_2 f, d_3 f)`.
pub fn gradient(f: &Field) -> [Field; 3] {
    let mut it = derivatives(f, &[0, 1, 2].map(Derivative::space)).into_iter();
    [0, 1, 2].map(|_| it.next().expect("three components"))
}

/// Symbol of the damped wave operator `d_t^2 - Lap - lambda d_t Lap`:
/// `|xi|^2 - k^2 + i lambda k |xi|^2`, with the odd-in-k part dropped on the
/// time Nyquist mode.
pub fn wave_symbol(m: &Mode, lambda: f64) -> Complex64 {
    let xi2 = m.xi_sq();
    let k_odd = if m.nyquist_t { 0.0 } else { m.k };
    Complex64::new(xi2 - m.k * m.k, lambda * k_odd * xi2)
}

/// Apply `d_t^2 u - Lap u - lambda d_t Lap u` spectrally.
pub fn apply_wave_operator(u: &Field, params: &ModelParams) -> Field {
    inverse_unchecked(&wave_operator_spectrum(u.spectrum(), params.lambda))
}

pub fn wave_operator_spectrum(s: &Spectrum, lambda: f64) -> Spectrum {
    s.apply(|m| wave_symbol(m, lambda))
}

/// Apply `-Lap u` spectrally.
pub fn apply_neg_laplacian(u: &Field) -> Field {
    inverse_unchecked(&u.spectrum().apply(|m| m.xi_sq().into()))
}

/// Truncation rule applied to quadratic products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dealias {
    #[default]
    TwoThirds,
    None,
}

impl Dealias {
    /// Whether mode `m` survives truncation: every |signed index| <= n/3.
    pub fn keeps(&self, m: &Mode, n_t: usize, n_x: usize) -> bool {
        match self {
            Dealias::None => true,
            Dealias::TwoThirds => {
                let ok = |i: usize, n: usize| crate::grid::signed_mode(i, n).unsigned_abs() as usize * 3 <= n;
                ok(m.it, n_t) && m.ix.iter().all(|&i| ok(i, n_x))
            }
        }
    }

    pub fn apply(&self, f: &Field) -> Field {
        if *self == Dealias::None {
            return f.clone();
        }
        let g = *f.grid();
        inverse_unchecked(&f.spectrum().apply(|m| {
            if self.keeps(m, g.n_t, g.n_x) {
                1.0.into()
            } else {
                0.0.into()
            }
        }))
    }
}
