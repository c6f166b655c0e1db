//! Linear damped wave solves on the periodic box.
//!
//! The steady part solves `-Lap u_s = P f` and the purely periodic part is
//! `u_p = F^-1[M(k, xi) F[P_perp f]]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{inverse_unchecked, project_steady, Field};
use crate::model::ModelParams;
use crate::norms;
use crate::ops::apply_wave_operator;
use crate::symbols::{lattice_multiplier, SymbolParams};

/// Relative tolerance on the steady zero mode and on the time mean of periodic data.
pub const MEAN_TOL: f64 = 1e-10;

/// `u = u_s + u_p` with `u_s` constant in time and `u_p` of zero time mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionDecomposition {
    pub steady: Field,
    pub periodic: Field,
}

impl SolutionDecomposition {
    pub fn zeros(grid: crate::GridSpec) -> Self {
        Self { steady: Field::zeros(grid), periodic: Field::zeros(grid) }
    }

    pub fn total(&self) -> Field {
        &self.steady + &self.periodic
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolveResult {
    pub decomposition: SolutionDecomposition,
    /// L2 norm of `A u - f` over the physical domain.
    pub residual_norm: f64,
    /// Boundary condition violation in max norm; zero on the box.
    pub trace_error: f64,
    /// Magnitude of the (0,0) forcing mode removed before the steady solve.
    pub steady_zero_mode_dropped: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearOptions {
    /// Subtract a nonzero steady mean instead of failing with `MeanNotZero`.
    pub drop_zero_mode: bool,
    /// For Dirichlet half-space solves: zero the forcing on the wall plane
    /// instead of rejecting it in the odd reflection.
    pub zero_wall_forcing: bool,
}

/// Solve `-Lap u_s = pf` on the box, pinning `u_s_hat(0) = 0`.
pub fn solve_steady(pf: &Field) -> Result<Field> {
    solve_steady_scaled(pf, pf.max_abs())
}

/// As [`solve_steady`], with tolerances relative to `scale` instead of `||pf||`
/// (used when `pf` is a projection of larger data).
pub fn solve_steady_scaled(pf: &Field, scale: f64) -> Result<Field> {
    let variation = pf.time_variation();
    if variation > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotTimeConstant { deviation: variation });
    }
    let mean = pf.mean();
    if mean.abs() > MEAN_TOL * scale {
        return Err(Error::MeanNotZero { mean, norm: scale });
    }
    Ok(inverse_unchecked(&pf.spectrum().apply(|m| {
        let r = m.xi_sq();
        if m.it != 0 || r == 0.0 {
            Complex64::default()
        } else {
            Complex64::from(1.0 / r)
        }
    })))
}

/// Multiplier actually applied on the grid. On the time Nyquist plane the mode
/// is its own conjugate partner, and the sampled response of
/// `cos(k_N t)` is `Re M`.
pub fn grid_multiplier(m: &crate::Mode, params: &SymbolParams) -> Complex64 {
    let v = lattice_multiplier(m.k, m.xi, params);
    if m.nyquist_t {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

/// Solve the purely periodic problem `A u_p = ppf` by the lattice multiplier.
pub fn solve_periodic(ppf: &Field, params: &ModelParams) -> Result<Field> {
    solve_periodic_scaled(ppf, params, ppf.max_abs())
}

/// As [`solve_periodic`], with the mean tolerance relative to `scale`.
pub fn solve_periodic_scaled(ppf: &Field, params: &ModelParams, scale: f64) -> Result<Field> {
    params.check_grid(ppf.grid())?;
    let mean = project_steady(ppf).max_abs();
    if mean > MEAN_TOL * scale {
        return Err(Error::NotMeanFree { mean, norm: scale });
    }
    let sp = SymbolParams::new(params.lambda, params.period)?;
    Ok(inverse_unchecked(&ppf.spectrum().apply(|m| grid_multiplier(m, &sp))))
}

/// Split `f = P f + P_perp f` and solve both parts on the periodic box.
pub fn solve_box(f: &Field, params: &ModelParams, opts: &LinearOptions) -> Result<LinearSolveResult> {
    params.check_grid(f.grid())?;
    let mut pf = project_steady(f);
    let ppf = f - &pf;

    let mut dropped = 0.0;
    let mean = pf.mean();
    if mean.abs() > MEAN_TOL * f.max_abs() {
        if !opts.drop_zero_mode {
            return Err(Error::MeanNotZero { mean, norm: pf.max_abs() });
        }
        dropped = mean.abs();
        pf = pf.map(|v| v - mean);
    } else if mean != 0.0 {
        pf = pf.map(|v| v - mean);
    }

    let scale = f.max_abs();
    let steady = solve_steady_scaled(&pf, scale)?;
    let periodic = solve_periodic_scaled(&ppf, params, scale)?;
    let decomposition = SolutionDecomposition { steady, periodic };

    let shift = if dropped > 0.0 { mean } else { 0.0 };
    let target = f.map(|v| v - shift);
    let residual = &apply_wave_operator(&decomposition.total(), params) - &target;
    Ok(LinearSolveResult {
        residual_norm: norms::lp_norm(&residual, 2.0),
        decomposition,
        trace_error: 0.0,
        steady_zero_mode_dropped: dropped,
    })
}
