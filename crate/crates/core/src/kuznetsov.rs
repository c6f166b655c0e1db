//! The Kuznetsov equation
//! `u_tt - Lap u - lambda d_t Lap u - d_t(gamma u_t^2 + |grad u|^2) = f`
//! solved by Picard iteration of `u_p -> A^-1(N(u_p) + 2 grad u_s . grad d_t u_p + P_perp f)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{project_periodic, project_steady, Field};
use crate::halfspace::{plane_l2, residual_planes, solve_halfspace, trace_neumann, BcKind, Domain, ProblemSpec};
use crate::linear::{solve_periodic_scaled, solve_steady_scaled, LinearOptions, SolutionDecomposition};
use crate::norms::{lp_norm, sols_norm, trace_norm_surrogate};
use crate::ops::{apply_wave_operator, Dealias, Derivative};

/// Consecutive growing steps outside the ball before the iteration is declared divergent.
pub const DIVERGENCE_STREAK: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FixedPointConfig {
    /// Ball radius; the divergence guard and, with `auto_scale`, the data size `rho^2`.
    pub rho: f64,
    /// Stop once `||u^{n+1} - u^n||_SolS < tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Exponent of the solution-space norm, in `(5/2, 3)`.
    pub p: f64,
    pub dealias: Dealias,
    /// Rescale the data so that `||f||_p + ||g|| = rho^2`.
    pub auto_scale: bool,
    /// Accept `p` outside `(5/2, 3)` with a warning.
    pub allow_any_p: bool,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            tol: 1e-10,
            max_iter: 50,
            p: 2.75,
            dealias: Dealias::TwoThirds,
            auto_scale: false,
            allow_any_p: false,
        }
    }
}

impl FixedPointConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::InvalidParams(format!("rho = {} must be positive", self.rho)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParams(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParams("max_iter must be positive".into()));
        }
        if !(self.p > 2.5 && self.p < 3.0) {
            if self.allow_any_p && self.p > 1.0 {
                log::warn!("p = {} lies outside (5/2, 3); contraction estimates do not apply", self.p);
            } else {
                return Err(Error::ExponentViolation(format!("p = {} must lie in (5/2, 3)", self.p)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationStatus {
    Converged,
    MaxIter,
    Diverged,
}

impl IterationStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            IterationStatus::Converged => "converged",
            IterationStatus::MaxIter => "max-iter",
            IterationStatus::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `||u^{n+1} - u^n||_SolS` in the configured `p`.
    pub diff_norm: f64,
    /// `||u^{n+1}||_SolS`, evaluated only when the differences grow.
    pub iterate_norm: Option<f64>,
    /// L2 residual of the full equation at `u_s + u^{n+1}`.
    pub residual_norm: f64,
    /// Successive-difference quotient; absent on the first step.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub status: IterationStatus,
    /// Factor applied to the data by `auto_scale` (1 otherwise).
    pub data_scale: f64,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.residual_norm)
    }

    /// Largest difference quotient from the second ratio onwards (the first
    /// compares against the distance from the zero start).
    pub fn max_ratio(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.ratio).skip(1).reduce(f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,diff_sols,iterate_sols,residual_l2,ratio\n");
        let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
        for r in &self.records {
            out.push_str(&format!(
                "{},{:e},{},{:e},{}\n",
                r.iteration,
                r.diff_norm,
                opt(r.iterate_norm),
                r.residual_norm,
                opt(r.ratio)
            ));
        }
        out
    }
}

fn truncated_derivatives(u: &Field, ds: &[Derivative], dealias: Dealias) -> Vec<Field> {
    let g = *u.grid();
    u.spectrum().inverse_many(ds.len(), |j, m| {
        if dealias.keeps(m, g.n_t, g.n_x) {
            ds[j].symbol(m)
        } else {
            0.0.into()
        }
    })
}

fn truncated_derivative(u: &Field, d: Derivative, dealias: Dealias) -> Field {
    truncated_derivatives(u, &[d], dealias).pop().expect("one output")
}

fn grad_dt(a: usize) -> Derivative {
    Derivative::new(1, Derivative::space(a).x)
}

/// `q = gamma (T u_t)^2 + |T grad u|^2` with `T` the dealiasing truncation,
/// truncated again after the product.
pub fn quadratic_flux(u: &Field, gamma: f64, dealias: Dealias) -> Field {
    let ds = [Derivative::time(1), Derivative::space(0), Derivative::space(1), Derivative::space(2)];
    let d = truncated_derivatives(u, &ds, dealias);
    let g = *u.grid();
    let samples = (0..g.len())
        .map(|i| {
            let (t, x, y, z) = (d[0].samples()[i], d[1].samples()[i], d[2].samples()[i], d[3].samples()[i]);
            gamma * t * t + x * x + y * y + z * z
        })
        .collect();
    dealias.apply(&Field::from_raw(g, samples))
}

/// `N(u) = d_t q(u)`, equal to `2 gamma u_t u_tt + 2 grad u . d_t grad u` on
/// the resolved modes.
pub fn nonlinearity(u: &Field, gamma: f64, dealias: Dealias) -> Field {
    let q = quadratic_flux(u, gamma, dealias);
    truncated_derivative(&q, Derivative::time(1), Dealias::None)
}

/// `2 T(T grad u_s . T grad d_t u_p)`.
pub fn coupling_term(u_s: &Field, u_p: &Field, dealias: Dealias) -> Field {
    let gs = truncated_derivatives(u_s, &[0, 1, 2].map(Derivative::space), dealias);
    let gp = truncated_derivatives(u_p, &[0, 1, 2].map(grad_dt), dealias);
    let g = *u_p.grid();
    let samples = (0..g.len())
        .map(|i| 2.0 * (0..3).map(|a| gs[a].samples()[i] * gp[a].samples()[i]).sum::<f64>())
        .collect();
    dealias.apply(&Field::from_raw(g, samples))
}

// A^-1 on purely periodic data with boundary extension `ext` (half-space only).
fn periodic_inverse(rhs: &Field, scale: f64, ext: Option<&Field>, spec: &ProblemSpec) -> Result<Field> {
    match spec.domain {
        Domain::PeriodicBox => solve_periodic_scaled(rhs, &spec.params, scale),
        Domain::HalfSpace => {
            let mut sub = ProblemSpec::half_space(spec.bc, spec.params, rhs.clone());
            sub.boundary_ext = ext.cloned();
            let opts = LinearOptions { drop_zero_mode: false, zero_wall_forcing: true };
            let res = solve_halfspace(&sub, &opts)?;
            Ok(project_periodic(&res.decomposition.total()))
        }
    }
}

/// One application of the fixed-point map. Only the domain, boundary
/// condition and parameters of `spec` are used; the data enter as `ppf`
/// (purely periodic forcing) and `ppg_ext` (purely periodic extension).
pub fn picard_step(
    u_p: &Field,
    u_s: &Field,
    ppf: &Field,
    ppg_ext: Option<&Field>,
    spec: &ProblemSpec,
    config: &FixedPointConfig,
) -> Result<Field> {
    let rhs = &(&nonlinearity(u_p, spec.params.gamma, config.dealias) + &coupling_term(u_s, u_p, config.dealias)) + ppf;
    periodic_inverse(&project_periodic(&rhs), rhs.max_abs(), ppg_ext, spec)
}

/// L2 residual of the full equation at `u = u_s + u_p` over the physical domain.
pub fn kuznetsov_residual(u: &SolutionDecomposition, spec: &ProblemSpec, dealias: Dealias) -> f64 {
    let total = u.total();
    let r = &(&apply_wave_operator(&total, &spec.params) - &nonlinearity(&total, spec.params.gamma, dealias))
        - &spec.forcing;
    match spec.domain {
        Domain::PeriodicBox => lp_norm(&r, 2.0),
        Domain::HalfSpace => plane_l2(&r, residual_planes(r.grid(), spec.bc)),
    }
}

fn scaled(spec: &ProblemSpec, s: f64) -> ProblemSpec {
    let mut out = spec.clone();
    out.forcing = spec.forcing.scale(s);
    out.boundary_ext = spec.boundary_ext.as_ref().map(|g| g.scale(s));
    out.boundary_data = spec.boundary_data.as_ref().map(|g| {
        crate::halfspace::BoundaryField::from_samples(*g.grid(), g.samples().iter().map(|v| v * s).collect())
            .expect("same shape")
    });
    out
}

fn data_size(spec: &ProblemSpec, p: f64) -> f64 {
    let g = spec.prescribed_trace();
    let bc_norm = if spec.domain == Domain::HalfSpace { trace_norm_surrogate(&g, spec.bc) } else { 0.0 };
    lp_norm(&spec.forcing, p) + bc_norm
}

/// Steady part `-Lap u_s = P f` (with `u_s = P g` on the wall on the half-space).
fn steady_part(spec: &ProblemSpec) -> Result<Field> {
    let pf = project_steady(&spec.forcing);
    match spec.domain {
        Domain::PeriodicBox => solve_steady_scaled(&pf, spec.forcing.max_abs()),
        Domain::HalfSpace => {
            let mut sub = ProblemSpec::half_space(spec.bc, spec.params, pf);
            sub.boundary_ext = spec.boundary_ext.as_ref().map(project_steady);
            let res = solve_halfspace(&sub, &LinearOptions::default())?;
            Ok(project_steady(&res.decomposition.total()))
        }
    }
}

/// Picard iteration from `u_p = 0`. Divergence is reported through the
/// trace status, not as an error.
pub fn solve_kuznetsov(
    spec: &ProblemSpec,
    config: &FixedPointConfig,
) -> Result<(SolutionDecomposition, IterationTrace)> {
    spec.validate()?;
    config.validate()?;
    spec.check_extension_trace()?;
    if spec.domain == Domain::HalfSpace && spec.bc == BcKind::Neumann {
        let g = spec.boundary_ext.as_ref().map(trace_neumann);
        let value = crate::halfspace::neumann_compatibility(&spec.forcing, g.as_ref(), Domain::HalfSpace);
        let threshold = crate::halfspace::compatibility_threshold(&spec.forcing, g.as_ref(), Domain::HalfSpace);
        if value.abs() > threshold {
            return Err(Error::NeumannIncompatible { value, threshold });
        }
    }

    let mut data_scale = 1.0;
    if config.auto_scale {
        let size = data_size(spec, config.p);
        if size > 0.0 {
            data_scale = config.rho * config.rho / size;
        }
    }
    let spec = if data_scale != 1.0 { scaled(spec, data_scale) } else { spec.clone() };

    if spec.domain == Domain::HalfSpace && spec.bc == BcKind::Dirichlet {
        let wall = crate::halfspace::restrict(&spec.forcing).wall_max();
        if wall > crate::halfspace::WALL_TOL * spec.forcing.max_abs() {
            return Err(Error::OddIncompatible { boundary: wall });
        }
    }

    let u_s = steady_part(&spec)?;
    let ppf = project_periodic(&spec.forcing);
    let ppg = spec.boundary_ext.as_ref().map(project_periodic);

    let mut u_p = Field::zeros(*spec.grid());
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut streak = 0;
    let mut status = IterationStatus::MaxIter;
    for iteration in 1..=config.max_iter {
        let next = picard_step(&u_p, &u_s, &ppf, ppg.as_ref(), &spec, config)?;
        let diff_norm = sols_norm(&(&next - &u_p), config.p);
        let ratio = records.last().map(|r| if r.diff_norm > 0.0 { diff_norm / r.diff_norm } else { 0.0 });
        let growing = ratio.is_some_and(|r| r > 1.0) || !diff_norm.is_finite();
        let iterate_norm = growing.then(|| sols_norm(&next, config.p));
        let decomposition = SolutionDecomposition { steady: u_s.clone(), periodic: next.clone() };
        let residual_norm = kuznetsov_residual(&decomposition, &spec, config.dealias);
        records.push(IterationRecord { iteration, diff_norm, iterate_norm, residual_norm, ratio });
        u_p = next;
        log::debug!("picard {iteration}: diff {diff_norm:e}, residual {residual_norm:e}");

        if !(diff_norm.is_finite() && iterate_norm.is_none_or(f64::is_finite)) {
            status = IterationStatus::Diverged;
            break;
        }
        if diff_norm < config.tol {
            status = IterationStatus::Converged;
            break;
        }
        if growing && iterate_norm.is_some_and(|n| n > config.rho) {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                status = IterationStatus::Diverged;
                break;
            }
        } else {
            streak = 0;
        }
    }
    let decomposition = SolutionDecomposition { steady: u_s, periodic: u_p };
    Ok((decomposition, IterationTrace { records, status, data_scale }))
}
