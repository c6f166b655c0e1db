//! Half-space problems `{x3 > 0}` realized on the periodic box by odd
//! (Dirichlet) or even (Neumann) reflection across `x3 = 0`, with
//! inhomogeneous boundary data lifted through an extension field.
//!
//! A half-space field lives on the planes `x3 = 0, h, ..., L_box/2`
//! (`n_x/2 + 1` planes). After reflection the box solution is restricted
//! back to those planes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::field::{project_periodic, project_steady, Field};
use crate::grid::GridSpec;
use crate::linear::{solve_box, LinearOptions, LinearSolveResult, SolutionDecomposition};
use crate::model::ModelParams;
use crate::ops::{apply_wave_operator, derivative, Derivative};

/// Relative size of wall values tolerated by the odd reflection.
pub const WALL_TOL: f64 = 1e-10;
/// Relative tolerance between supplied boundary data and the extension's trace.
pub const TRACE_MATCH_TOL: f64 = 1e-8;
/// Relative tolerance of the Neumann compatibility condition.
pub const COMPAT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    PeriodicBox,
    HalfSpace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcKind {
    None,
    Dirichlet,
    Neumann,
}

/// Samples on the wall plane `x3 = 0`, shape `n_t x n_x x n_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    grid: GridSpec,
    samples: Vec<f64>,
}

impl BoundaryField {
    pub fn from_samples(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        let expected = grid.n_t * grid.n_x * grid.n_x;
        if samples.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: samples.len() });
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, samples: vec![0.0; grid.n_t * grid.n_x * grid.n_x] }
    }

    pub fn from_fn<F: Fn(f64, [f64; 2]) -> f64>(grid: GridSpec, f: F) -> Self {
        let n = grid.n_x;
        let mut samples = Vec::with_capacity(grid.n_t * n * n);
        for t in 0..grid.n_t {
            for i in 0..n {
                for j in 0..n {
                    let p = grid.point([i, j, 0]);
                    samples.push(f(grid.time(t), [p[0], p[1]]));
                }
            }
        }
        Self { grid, samples }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &BoundaryField) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Averaged-measure coefficients as `(k, (xi1, xi2), c)`.
    pub fn spectrum(&self) -> Vec<(f64, [f64; 2], Complex64)> {
        let g = self.grid;
        let n = g.n_x;
        let mut data: Vec<Complex64> = self.samples.iter().map(|&v| v.into()).collect();
        fft::forward(&mut data, [g.n_t, n, n, 1]);
        let scale = 1.0 / data.len() as f64;
        data.into_iter()
            .enumerate()
            .map(|(idx, c)| {
                let t = idx / (n * n);
                let (i, j) = ((idx / n) % n, idx % n);
                (g.time_freq(t), [g.space_freq(i), g.space_freq(j)], c * scale)
            })
            .collect()
    }

    /// `int_0^tau int_{x3=0} g dS dt` by the rectangle rule.
    pub fn integral(&self) -> f64 {
        let g = self.grid;
        g.dt() * g.dx() * g.dx() * self.samples.iter().sum::<f64>()
    }

    pub fn abs_integral(&self) -> f64 {
        let g = self.grid;
        g.dt() * g.dx() * g.dx() * self.samples.iter().map(|v| v.abs()).sum::<f64>()
    }
}

/// Samples on `x3 in [0, L_box/2]`, shape `n_t x n_x x n_x x (n_x/2 + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfField {
    grid: GridSpec,
    samples: Vec<f64>,
}

impl HalfField {
    pub fn planes(grid: &GridSpec) -> usize {
        grid.n_x / 2 + 1
    }

    pub fn from_samples(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        let expected = grid.n_t * grid.n_x * grid.n_x * Self::planes(&grid);
        if samples.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: samples.len() });
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn<F: Fn(f64, [f64; 3]) -> f64>(grid: GridSpec, f: F) -> Self {
        let (n, m) = (grid.n_x, Self::planes(&grid));
        let mut samples = Vec::with_capacity(grid.n_t * n * n * m);
        for t in 0..grid.n_t {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..m {
                        samples.push(f(grid.time(t), grid.point([i, j, l])));
                    }
                }
            }
        }
        Self { grid, samples }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn index(&self, t: usize, i: usize, j: usize, l: usize) -> usize {
        let n = self.grid.n_x;
        ((t * n + i) * n + j) * Self::planes(&self.grid) + l
    }

    pub fn get(&self, t: usize, x: [usize; 3]) -> f64 {
        self.samples[self.index(t, x[0], x[1], x[2])]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Largest value on the wall plane `x3 = 0`.
    pub fn wall_max(&self) -> f64 {
        let m = Self::planes(&self.grid);
        self.samples.iter().step_by(m).map(|v| v.abs()).fold(0.0, f64::max)
    }

    fn reflect(&self, odd: bool) -> Field {
        let g = self.grid;
        let n = g.n_x;
        let half = n / 2;
        let samples = (0..g.len())
            .map(|idx| {
                let (t, [i, j, l]) = g.unindex(idx);
                if odd && (l == 0 || l == half) {
                    0.0
                } else if l <= half {
                    self.samples[self.index(t, i, j, l)]
                } else if odd {
                    -self.samples[self.index(t, i, j, n - l)]
                } else {
                    self.samples[self.index(t, i, j, n - l)]
                }
            })
            .collect();
        Field::from_raw(g, samples)
    }
}

/// Restrict a box field to the half-space planes `x3 in [0, L_box/2]`.
pub fn restrict(u: &Field) -> HalfField {
    let g = *u.grid();
    let (n, m) = (g.n_x, HalfField::planes(&g));
    let mut samples = Vec::with_capacity(g.n_t * n * n * m);
    for t in 0..g.n_t {
        for i in 0..n {
            for j in 0..n {
                for l in 0..m {
                    samples.push(u.get(t, [i, j, l]));
                }
            }
        }
    }
    HalfField { grid: g, samples }
}

/// Odd extension `f(-x3) = -f(x3)`; wall and far planes are zero.
pub fn reflect_odd(f: &HalfField) -> Result<Field> {
    let wall = f.wall_max();
    if wall > WALL_TOL * f.max_abs() {
        return Err(Error::OddIncompatible { boundary: wall });
    }
    Ok(f.reflect(true))
}

/// Even extension `f(-x3) = f(x3)`.
pub fn reflect_even(f: &HalfField) -> Field {
    f.reflect(false)
}

/// `u` on the wall plane.
pub fn trace_dirichlet(u: &Field) -> BoundaryField {
    let g = *u.grid();
    let n = g.n_x;
    let mut samples = Vec::with_capacity(g.n_t * n * n);
    for t in 0..g.n_t {
        for i in 0..n {
            for j in 0..n {
                samples.push(u.get(t, [i, j, 0]));
            }
        }
    }
    BoundaryField { grid: g, samples }
}

/// Outward normal derivative `-d_3 u` on the wall plane (spectral).
pub fn trace_neumann(u: &Field) -> BoundaryField {
    let d3 = derivative(u, Derivative::space(2));
    let mut b = trace_dirichlet(&d3);
    for v in &mut b.samples {
        *v = -*v;
    }
    b
}

// C-infinity bump in s^2: 1 at s = 0, supported in |s| < a.
fn bump(s: f64, a: f64) -> f64 {
    let r = (s / a) * (s / a);
    if r >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r)).exp()
    }
}

fn wrapped(x3: f64, box_len: f64) -> f64 {
    if x3 >= 0.5 * box_len {
        x3 - box_len
    } else {
        x3
    }
}

/// Extension of the separable boundary data `g = a cos(k t) cos(xi'.x')`.
///
/// Dirichlet: `G = g(t, x') psi(x3)` with `psi` a smooth bump, `psi(0) = 1`,
/// `psi'(0) = 0`, supported in `|x3| < L_box/4`.
/// Neumann: `psi(x3) = -x3 exp(-x3^2 / (2 s^2))`, `s = L_box/14`, so that
/// `-d_3 G = g` on the wall and the spectral trace is accurate.
pub fn separable_extension(
    grid: GridSpec,
    bc: BcKind,
    amplitude: f64,
    time_index: i64,
    space_index: [i64; 2],
) -> Result<(Field, BoundaryField)> {
    let k = time_index as f64 * grid.time_step_freq();
    let q = [space_index[0] as f64 * grid.space_step_freq(), space_index[1] as f64 * grid.space_step_freq()];
    let data = move |t: f64, x: [f64; 2]| amplitude * (k * t).cos() * (q[0] * x[0] + q[1] * x[1]).cos();
    let l = grid.box_len;
    let profile: Box<dyn Fn(f64) -> f64> = match bc {
        BcKind::Dirichlet => Box::new(move |s| bump(s, 0.25 * l)),
        BcKind::Neumann => {
            let sigma = l / 14.0;
            Box::new(move |s| -s * (-s * s / (2.0 * sigma * sigma)).exp())
        }
        BcKind::None => {
            return Err(Error::InvalidProblem("boundary extension needs a boundary condition".into()))
        }
    };
    let ext = Field::from_fn(grid, |t, x| data(t, [x[0], x[1]]) * profile(wrapped(x[2], l)));
    Ok((ext, BoundaryField::from_fn(grid, data)))
}

/// Left side of `int int_Omega f + int int_{dOmega} g = 0` by grid quadrature.
///
/// On the half-space the `x3` direction uses the trapezoid rule on
/// `[0, L_box/2]`, which equals half the box sum of the even reflection.
pub fn neumann_compatibility(f: &Field, g: Option<&BoundaryField>, domain: Domain) -> f64 {
    domain_integral(f, domain, false) + g.map_or(0.0, |g| g.integral())
}

/// Threshold `COMPAT_TOL * (||f||_1 + ||g||_1)` in the same quadrature.
pub fn compatibility_threshold(f: &Field, g: Option<&BoundaryField>, domain: Domain) -> f64 {
    COMPAT_TOL * (domain_integral(f, domain, true) + g.map_or(0.0, |g| g.abs_integral()))
}

pub fn is_neumann_compatible(f: &Field, g: Option<&BoundaryField>, domain: Domain) -> bool {
    neumann_compatibility(f, g, domain).abs() <= compatibility_threshold(f, g, domain)
}

fn domain_integral(f: &Field, domain: Domain, absolute: bool) -> f64 {
    let g = f.grid();
    let weight = g.dt() * g.cell_volume();
    let val = |v: f64| if absolute { v.abs() } else { v };
    match domain {
        Domain::PeriodicBox => weight * f.samples().iter().map(|&v| val(v)).sum::<f64>(),
        Domain::HalfSpace => {
            let half = g.n_x / 2;
            let mut acc = 0.0;
            for (idx, &v) in f.samples().iter().enumerate() {
                let l = idx % g.n_x;
                if l == 0 || l == half {
                    acc += 0.5 * val(v);
                } else if l < half {
                    acc += val(v);
                }
            }
            weight * acc
        }
    }
}

/// A linear (or, via `kuznetsov`, nonlinear) time-periodic problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub domain: Domain,
    pub bc: BcKind,
    pub params: ModelParams,
    /// Forcing on the full box; for half-space problems only `x3 in [0, L_box/2]` is used.
    pub forcing: Field,
    /// Extension `G` whose trace realizes the boundary data.
    pub boundary_ext: Option<Field>,
    /// Sampled boundary data `g`; requires `boundary_ext`.
    pub boundary_data: Option<BoundaryField>,
}

impl ProblemSpec {
    pub fn periodic_box(params: ModelParams, forcing: Field) -> Self {
        Self { domain: Domain::PeriodicBox, bc: BcKind::None, params, forcing, boundary_ext: None, boundary_data: None }
    }

    pub fn half_space(bc: BcKind, params: ModelParams, forcing: Field) -> Self {
        Self { domain: Domain::HalfSpace, bc, params, forcing, boundary_ext: None, boundary_data: None }
    }

    pub fn with_extension(mut self, ext: Field) -> Self {
        self.boundary_ext = Some(ext);
        self
    }

    pub fn with_boundary_data(mut self, g: BoundaryField) -> Self {
        self.boundary_data = Some(g);
        self
    }

    pub fn grid(&self) -> &GridSpec {
        self.forcing.grid()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.params.check_grid(self.grid())?;
        match (self.domain, self.bc) {
            (Domain::PeriodicBox, BcKind::None) => {
                if self.boundary_ext.is_some() || self.boundary_data.is_some() {
                    return Err(Error::InvalidProblem("periodic box takes no boundary data".into()));
                }
            }
            (Domain::PeriodicBox, _) => {
                return Err(Error::InvalidProblem("periodic box has no boundary condition".into()))
            }
            (Domain::HalfSpace, BcKind::None) => {
                return Err(Error::InvalidProblem("half-space needs a Dirichlet or Neumann condition".into()))
            }
            (Domain::HalfSpace, _) => {}
        }
        if let Some(ext) = &self.boundary_ext {
            if ext.grid() != self.grid() {
                return Err(Error::GridMismatch);
            }
        }
        if let Some(g) = &self.boundary_data {
            if g.grid() != self.grid() {
                return Err(Error::GridMismatch);
            }
            if self.boundary_ext.is_none() {
                return Err(Error::InvalidProblem("boundary data require an extension field".into()));
            }
        }
        Ok(())
    }

    /// Trace of the extension in the active boundary condition (zero without one).
    pub fn extension_trace(&self) -> Option<BoundaryField> {
        let ext = self.boundary_ext.as_ref()?;
        Some(match self.bc {
            BcKind::Neumann => trace_neumann(ext),
            _ => trace_dirichlet(ext),
        })
    }

    /// Prescribed boundary data: supplied samples, else the extension's trace.
    pub fn prescribed_trace(&self) -> BoundaryField {
        self.boundary_data
            .clone()
            .or_else(|| self.extension_trace())
            .unwrap_or_else(|| BoundaryField::zeros(*self.grid()))
    }

    pub(crate) fn check_extension_trace(&self) -> Result<()> {
        if let (Some(data), Some(tr)) = (&self.boundary_data, self.extension_trace()) {
            let scale = data.max_abs().max(tr.max_abs()).max(f64::MIN_POSITIVE);
            let relative = data.max_diff(&tr) / scale;
            if relative > TRACE_MATCH_TOL {
                return Err(Error::ExtensionTraceMismatch { relative });
            }
        }
        Ok(())
    }
}

/// Dispatch to the box or half-space solver.
pub fn solve_linear(spec: &ProblemSpec, opts: &LinearOptions) -> Result<LinearSolveResult> {
    spec.validate()?;
    match spec.domain {
        Domain::PeriodicBox => solve_box(&spec.forcing, &spec.params, opts),
        Domain::HalfSpace => solve_halfspace(spec, opts),
    }
}

/// Half-space solve: lift the boundary data with the extension `G`, reflect
/// `f - A G` (odd for Dirichlet, even for Neumann), solve on the box, add `G`.
pub fn solve_halfspace(spec: &ProblemSpec, opts: &LinearOptions) -> Result<LinearSolveResult> {
    spec.validate()?;
    if spec.domain != Domain::HalfSpace {
        return Err(Error::InvalidProblem("solve_halfspace needs a half-space problem".into()));
    }
    spec.check_extension_trace()?;
    let grid = *spec.grid();
    let params = &spec.params;
    let dirichlet = spec.bc == BcKind::Dirichlet;

    let f_half = restrict(&spec.forcing);
    if dirichlet && !opts.zero_wall_forcing {
        let wall = f_half.wall_max();
        if wall > WALL_TOL * f_half.max_abs() {
            return Err(Error::OddIncompatible { boundary: wall });
        }
    }

    let lifted = match &spec.boundary_ext {
        Some(ext) => &spec.forcing - &apply_wave_operator(ext, params),
        None => spec.forcing.clone(),
    };
    let lifted_half = restrict(&lifted);

    let mut box_opts = *opts;
    let reflected = if dirichlet {
        // the wall plane is a null set for the forcing; the odd extension drops it
        lifted_half.reflect(true)
    } else {
        let g = spec.prescribed_trace();
        let value = neumann_compatibility(&spec.forcing, Some(&g), Domain::HalfSpace);
        let threshold = compatibility_threshold(&spec.forcing, Some(&g), Domain::HalfSpace);
        if value.abs() > threshold && !opts.drop_zero_mode {
            return Err(Error::NeumannIncompatible { value, threshold });
        }
        // compatibility holds up to quadrature error; remove the residual zero mode
        box_opts.drop_zero_mode = true;
        reflect_even(&lifted_half)
    };
    let shift = reflected.mean();

    let inner = solve_box(&reflected, params, &box_opts)?;
    let mut decomposition = inner.decomposition;
    if let Some(ext) = &spec.boundary_ext {
        decomposition = SolutionDecomposition {
            steady: &decomposition.steady + &project_steady(ext),
            periodic: &decomposition.periodic + &project_periodic(ext),
        };
    }
    let u = decomposition.total();

    let dropped = if inner.steady_zero_mode_dropped > 0.0 { shift } else { 0.0 };
    let residual = (&apply_wave_operator(&u, params) - &spec.forcing).map(|v| v + dropped);
    let planes = if dirichlet { 1..grid.n_x / 2 } else { 0..grid.n_x / 2 + 1 };
    let residual_norm = plane_l2(&residual, planes);

    let prescribed = spec.prescribed_trace();
    let achieved = if dirichlet { trace_dirichlet(&u) } else { trace_neumann(&u) };
    let trace_error = achieved.max_diff(&prescribed);

    Ok(LinearSolveResult {
        decomposition,
        residual_norm,
        trace_error,
        steady_zero_mode_dropped: inner.steady_zero_mode_dropped,
    })
}

/// L2 norm restricted to the `x3` planes in `planes`.
pub fn plane_l2(f: &Field, planes: std::ops::Range<usize>) -> f64 {
    let g = f.grid();
    let sum: f64 = f
        .samples()
        .iter()
        .enumerate()
        .filter(|(idx, _)| planes.contains(&(idx % g.n_x)))
        .map(|(_, v)| v * v)
        .sum();
    (sum * g.cell_volume() / g.n_t as f64).sqrt()
}

/// Planes of the physical half-domain used for residuals: interior for
/// Dirichlet (the wall value is the boundary condition), all for Neumann.
pub fn residual_planes(grid: &GridSpec, bc: BcKind) -> std::ops::Range<usize> {
    match bc {
        BcKind::Dirichlet => 1..grid.n_x / 2,
        BcKind::Neumann => 0..grid.n_x / 2 + 1,
        BcKind::None => 0..grid.n_x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(n, n, 2.0 * PI, 2.0 * PI).unwrap()
    }

    fn params() -> ModelParams {
        ModelParams::new(1.0, 1.0, 2.0 * PI).unwrap()
    }

    #[test]
    fn reflections_fix_symmetric_profiles() {
        let g = grid(8);
        let odd = Field::from_fn(g, |_, x| x[2].sin());
        assert!(reflect_odd(&restrict(&odd)).unwrap().max_diff(&odd) < 1e-15);
        let even = Field::from_fn(g, |_, x| x[2].cos());
        assert!(reflect_even(&restrict(&even)).max_diff(&even) < 1e-15);
    }

    #[test]
    fn reflection_matches_index_mirror() {
        let g = grid(8);
        let h = HalfField::from_fn(g, |t, x| (x[2] + 1.0) * x[2] * (1.0 + t) + x[0]);
        let e = reflect_even(&h);
        let n = g.n_x;
        for t in 0..g.n_t {
            for i in 0..n {
                for l in 0..n {
                    let mirror = if l <= n / 2 { l } else { n - l };
                    assert_eq!(e.get(t, [i, 3, l]), h.get(t, [i, 3, mirror]));
                }
            }
        }
        let z = HalfField::from_fn(g, |_, x| x[2] * (1.0 + x[1]));
        let o = reflect_odd(&z).unwrap();
        for l in 1..n / 2 {
            assert_eq!(o.get(1, [2, 5, l]), -o.get(1, [2, 5, n - l]));
        }
    }

    #[test]
    fn odd_reflection_rejects_wall_values() {
        let g = grid(8);
        let h = HalfField::from_fn(g, |_, x| 1.0 + x[2]);
        assert!(matches!(reflect_odd(&h), Err(Error::OddIncompatible { .. })));
    }

    #[test]
    fn traces_of_symmetric_fields_vanish() {
        let g = grid(8);
        let odd = Field::from_fn(g, |t, x| x[2].sin() * (t + x[0]).cos());
        assert!(trace_dirichlet(&odd).max_abs() < 1e-15);
        let even = Field::from_fn(g, |t, x| (2.0 * x[2]).cos() * (t + x[1]).cos());
        assert!(trace_neumann(&even).max_abs() < 1e-13);
    }

    #[test]
    fn neumann_trace_of_windowed_ramp() {
        // u = x3 exp(-x3^2/(2 s^2)) near the wall: d_3 u(0) = 1, outward trace -1
        let g = GridSpec::new(4, 64, 2.0 * PI, 1.0).unwrap();
        let s = g.box_len / 14.0;
        let u = Field::from_fn(g, |_, x| {
            let z = wrapped(x[2], g.box_len);
            z * (-z * z / (2.0 * s * s)).exp()
        });
        let tr = trace_neumann(&u);
        assert!(tr.samples().iter().all(|v| (v + 1.0).abs() < 1e-10));
    }

    #[test]
    fn dirichlet_odd_forcing_has_vanishing_trace() {
        let g = grid(16);
        let f = Field::from_fn(g, |t, x| x[2].sin() * t.cos());
        let spec = ProblemSpec::half_space(BcKind::Dirichlet, params(), f);
        let res = solve_halfspace(&spec, &LinearOptions::default()).unwrap();
        assert!(res.trace_error <= 1e-10);
        assert!(res.residual_norm < 1e-10);
    }

    #[test]
    fn neumann_even_forcing_has_vanishing_flux() {
        let g = grid(16);
        let f = Field::from_fn(g, |t, x| x[2].cos() * t.cos());
        let spec = ProblemSpec::half_space(BcKind::Neumann, params(), f);
        let res = solve_halfspace(&spec, &LinearOptions::default()).unwrap();
        assert!(res.trace_error <= 1e-8);
    }

    #[test]
    fn lifted_dirichlet_data() {
        let g = grid(16);
        let (ext, data) = separable_extension(g, BcKind::Dirichlet, 0.5, 1, [1, 0]).unwrap();
        let spec = ProblemSpec::half_space(BcKind::Dirichlet, params(), Field::zeros(g))
            .with_extension(ext.clone())
            .with_boundary_data(data.clone());
        let res = solve_halfspace(&spec, &LinearOptions::default()).unwrap();
        assert!(res.trace_error < 1e-14);
        let scale = crate::norms::lp_norm(&apply_wave_operator(&ext, &params()), 2.0);
        assert!(res.residual_norm <= 1e-9 * scale, "{} vs {}", res.residual_norm, scale);
        assert!(trace_dirichlet(&res.decomposition.total()).max_diff(&data) < 1e-14);
    }

    #[test]
    fn lifted_neumann_data() {
        let g = grid(32);
        let (ext, data) = separable_extension(g, BcKind::Neumann, 0.5, 1, [0, 1]).unwrap();
        let spec = ProblemSpec::half_space(BcKind::Neumann, params(), Field::zeros(g))
            .with_extension(ext)
            .with_boundary_data(data.clone());
        let res = solve_halfspace(&spec, &LinearOptions::default()).unwrap();
        assert!(res.trace_error < 1e-8);
        assert!(trace_neumann(&res.decomposition.total()).max_diff(&data) < 1e-8);
    }

    #[test]
    fn mismatched_extension_is_rejected() {
        let g = grid(8);
        let (ext, data) = separable_extension(g, BcKind::Dirichlet, 1.0, 1, [1, 0]).unwrap();
        let wrong = BoundaryField::from_samples(g, data.samples().iter().map(|v| v * 1.001).collect()).unwrap();
        let spec = ProblemSpec::half_space(BcKind::Dirichlet, params(), Field::zeros(g))
            .with_extension(ext)
            .with_boundary_data(wrong);
        assert!(matches!(
            solve_halfspace(&spec, &LinearOptions::default()),
            Err(Error::ExtensionTraceMismatch { .. })
        ));
    }

    #[test]
    fn compatibility_examples() {
        let g = grid(8);
        let zero = Field::zeros(g);
        assert_eq!(neumann_compatibility(&zero, None, Domain::HalfSpace), 0.0);
        let f = Field::from_fn(g, |t, x| t.sin() * (1.0 + x[2]));
        let gb = BoundaryField::from_fn(g, |t, _| t.cos());
        assert!(neumann_compatibility(&f, Some(&gb), Domain::HalfSpace).abs() < 1e-13);
    }

    #[test]
    fn compatibility_matches_direct_double_sum() {
        use rand::{Rng, SeedableRng};
        let g = GridSpec::new(4, 6, 1.5, 2.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let f = Field::from_samples(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let b = BoundaryField::from_samples(g, (0..g.n_t * 36).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let (dt, h) = (g.dt(), g.dx());
        let mut vol = 0.0;
        for t in 0..4 {
            for i in 0..6 {
                for j in 0..6 {
                    for l in 0..=3 {
                        let w = if l == 0 || l == 3 { 0.5 } else { 1.0 };
                        vol += w * f.get(t, [i, j, l]);
                    }
                }
            }
        }
        let oracle = dt * h * h * h * vol + dt * h * h * b.samples().iter().sum::<f64>();
        assert!((neumann_compatibility(&f, Some(&b), Domain::HalfSpace) - oracle).abs() < 1e-13);
    }

    #[test]
    fn problem_validation() {
        let g = grid(4);
        let f = Field::zeros(g);
        let mut spec = ProblemSpec::periodic_box(params(), f.clone());
        spec.bc = BcKind::Dirichlet;
        assert!(spec.validate().is_err());
        let spec = ProblemSpec::half_space(BcKind::None, params(), f.clone());
        assert!(spec.validate().is_err());
        let spec = ProblemSpec::half_space(BcKind::Dirichlet, params(), f).with_boundary_data(BoundaryField::zeros(g));
        assert!(spec.validate().is_err());
    }
}
