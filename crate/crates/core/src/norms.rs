//! Discrete Lebesgue, Sobolev and solution-space norms, plus empirical
//! checks of the embedding and product inequalities used by the
//! nonlinear contraction argument.
//!
//! Measure convention: time is averaged (`1/tau int dt`), space is integrated
//! with cell volume `(box_len / n_x)^3`. All reductions run sequentially in
//! index order so results are reproducible.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::halfspace::{BcKind, BoundaryField};
use crate::ops::{derivatives, gradient, Derivative};

/// Lebesgue exponent; `f64::INFINITY` selects the max norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: f64,
}

impl NormSpec {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::ExponentViolation(format!("p = {p} must exceed 1")));
        }
        Ok(Self { p })
    }

    pub fn norm(&self, f: &Field) -> f64 {
        lp_norm(f, self.p)
    }
}

fn pow_sum(values: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else if p == 1.0 {
        values.iter().map(|v| v.abs()).sum()
    } else if let Some(quarters) = quarter_power(p) {
        let whole = (quarters / 4) as i32;
        let frac = quarters % 4;
        values
            .iter()
            .map(|v| {
                let a = v.abs();
                let base = a.powi(whole);
                match frac {
                    0 => base,
                    1 => base * a.sqrt().sqrt(),
                    2 => base * a.sqrt(),
                    _ => {
                        let r = a.sqrt();
                        base * r * r.sqrt()
                    }
                }
            })
            .sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    }
}

// Exponents that are whole multiples of 1/4 avoid powf entirely.
fn quarter_power(p: f64) -> Option<u32> {
    let q = p * 4.0;
    (q.fract() == 0.0 && q > 0.0 && q < 64.0).then_some(q as u32)
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// `((1/n_t) sum_t cellvol sum_x |f|^p)^(1/p)`, or `max |f|` for `p = inf`.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        return f.max_abs();
    }
    let g = f.grid();
    let integral = pow_sum(f.samples(), p) * g.cell_volume() / g.n_t as f64;
    integral.powf(1.0 / p)
}

/// Iterated norm `L^r(T; L^q(box))`: per-slice spatial `q`-norms, then an
/// `r`-mean over time slices.
pub fn mixed_norm(f: &Field, r: f64, q: f64) -> f64 {
    let g = f.grid();
    let slice_norms: Vec<f64> = f
        .samples()
        .chunks(g.spatial_len())
        .map(|s| {
            if q.is_infinite() {
                max_abs(s)
            } else {
                (pow_sum(s, q) * g.cell_volume()).powf(1.0 / q)
            }
        })
        .collect();
    if r.is_infinite() {
        max_abs(&slice_norms)
    } else {
        (pow_sum(&slice_norms, r) / g.n_t as f64).powf(1.0 / r)
    }
}

/// Pointwise Euclidean length of a vector field.
pub fn magnitude(v: &[Field; 3]) -> Field {
    let g = *v[0].grid();
    let samples = (0..g.len())
        .map(|i| {
            let (a, b, c) = (v[0].samples()[i], v[1].samples()[i], v[2].samples()[i]);
            (a * a + b * b + c * c).sqrt()
        })
        .collect();
    Field::from_samples(g, samples).expect("gradient components share a grid")
}

/// Spatial multi-indices with `|alpha| <= 2`.
pub const MULTI_INDICES_2: [[u8; 3]; 10] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [0, 2, 0],
    [0, 0, 2],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
];

/// Derivatives entering the solution-space norm:
/// `d_t^2 u` and `d_t^a d_x^alpha u` for `a <= 1`, `|alpha| <= 2`.
pub fn sols_terms() -> Vec<Derivative> {
    let mut out = vec![Derivative::time(2)];
    for a in 0..2u8 {
        for alpha in MULTI_INDICES_2 {
            out.push(Derivative::new(a, alpha));
        }
    }
    out
}

/// Derivatives entering `||u||_{1,2,p}`: `u`, `d_t u`, and `d_x^alpha u` for `1 <= |alpha| <= 2`.
pub fn w12_terms() -> Vec<Derivative> {
    let mut out = vec![Derivative::default(), Derivative::time(1)];
    out.extend(MULTI_INDICES_2[1..].iter().map(|&a| Derivative::new(0, a)));
    out
}

fn combined_norm(u: &Field, terms: &[Derivative], p: f64) -> f64 {
    let total: f64 = derivatives(u, terms).iter().map(|d| lp_norm(d, p).powf(p)).sum();
    total.powf(1.0 / p)
}

/// `(||d_t^2 u||_p^p + ||u||_{W^{1,p}(T; W^{2,p})}^p)^(1/p)` with spectral derivatives.
pub fn sols_norm(u: &Field, p: f64) -> f64 {
    combined_norm(u, &sols_terms(), p)
}

/// `||u||_{1,2,p}` on `W^{1,p}(T; L^p) cap L^p(T; W^{2,p})`.
pub fn w12_norm(u: &Field, p: f64) -> f64 {
    combined_norm(u, &w12_terms(), p)
}

/// Left side, right side (without constant), and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl RatioReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
        Self { lhs, rhs, ratio }
    }
}

/// Exponents of the time-periodic Sobolev embedding in three space dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingSpec {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r0: f64,
    pub q0: f64,
    pub r1: f64,
    pub q1: f64,
}

const DIM: f64 = 3.0;
const EXP_TOL: f64 = 1e-12;

fn check_upper(name: &str, value: f64, s: f64, p: f64, n: f64) -> Result<()> {
    // s p < n: value <= n p / (n - s p); s p = n: finite; s p > n: anything
    let sp = s * p;
    if (sp - n).abs() <= EXP_TOL {
        if value.is_infinite() {
            return Err(Error::ExponentViolation(format!("{name} must be finite")));
        }
    } else if sp < n {
        let limit = n * p / (n - sp);
        if value > limit * (1.0 + EXP_TOL) {
            return Err(Error::ExponentViolation(format!("{name} = {value} exceeds {limit}")));
        }
    }
    Ok(())
}

impl EmbeddingSpec {
    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::ExponentViolation(format!("p = {p} must be in (1, inf)")));
        }
        if !(0.0..=2.0).contains(&self.alpha) {
            return Err(Error::ExponentViolation(format!("alpha = {} not in [0, 2]", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::ExponentViolation(format!("beta = {} not in [0, 1]", self.beta)));
        }
        for (name, v) in [("r0", self.r0), ("q0", self.q0), ("r1", self.r1), ("q1", self.q1)] {
            if !(v >= p) {
                return Err(Error::ExponentViolation(format!("{name} = {v} must be >= p = {p}")));
            }
        }
        check_upper("r0", self.r0, self.alpha, p, 2.0)?;
        check_upper("q0", self.q0, 2.0 - self.alpha, p, DIM)?;
        check_upper("r1", self.r1, self.beta, p, 2.0)?;
        check_upper("q1", self.q1, 1.0 - self.beta, p, DIM)?;
        Ok(())
    }
}

/// `||u||_{L^r0(L^q0)} + ||grad u||_{L^r1(L^q1)}` against `||u||_{1,2,p}`.
pub fn embedding_check(u: &Field, spec: &EmbeddingSpec) -> Result<RatioReport> {
    spec.validate()?;
    let grad = magnitude(&gradient(u));
    let lhs = mixed_norm(u, spec.r0, spec.q0) + mixed_norm(&grad, spec.r1, spec.q1);
    Ok(RatioReport::new(lhs, w12_norm(u, spec.p)))
}

/// `||d_t v d_t^2 u||_p + ||grad v . d_t grad u||_p` against `||v||_SolS ||u||_SolS`.
pub fn product_estimate_check(u: &Field, v: &Field, p: f64) -> Result<RatioReport> {
    if !(p > 2.5 && p < 3.0) {
        return Err(Error::ExponentViolation(format!("p = {p} must lie in (5/2, 3)")));
    }
    let dv = derivatives(v, &[Derivative::time(1), Derivative::space(0), Derivative::space(1), Derivative::space(2)]);
    let dt_grad = |a: usize| Derivative::new(1, Derivative::space(a).x);
    let du = derivatives(u, &[Derivative::time(2), dt_grad(0), dt_grad(1), dt_grad(2)]);
    let first = dv[0].zip_map(&du[0], |a, b| a * b)?;
    let g = *u.grid();
    let dot = Field::from_samples(
        g,
        (0..g.len()).map(|i| (1..4).map(|a| dv[a].samples()[i] * du[a].samples()[i]).sum()).collect(),
    )?;
    let lhs = lp_norm(&first, p) + lp_norm(&dot, p);
    Ok(RatioReport::new(lhs, sols_norm(v, p) * sols_norm(u, p)))
}

/// `p = 2` spectral surrogate of the boundary trace-space norm.
///
/// Dirichlet data carry `1 - 1/(2p)` time and `2 - 1/p` space derivatives,
/// Neumann data one half resp. one less. Diagnostics only.
pub fn trace_norm_surrogate(g: &BoundaryField, kind: BcKind) -> f64 {
    let p = 2.0;
    let (st, sx) = match kind {
        BcKind::Neumann => (0.5 - 1.0 / (2.0 * p), 1.0 - 1.0 / p),
        _ => (1.0 - 1.0 / (2.0 * p), 2.0 - 1.0 / p),
    };
    let area = g.grid().box_len.powi(2);
    let energy: f64 = g
        .spectrum()
        .into_iter()
        .map(|(k, xi, c)| {
            let w = 1.0 + k.abs().powf(2.0 * st) + (xi[0] * xi[0] + xi[1] * xi[1]).powf(sx);
            w * c.norm_sqr()
        })
        .sum();
    (area * energy).sqrt()
}
