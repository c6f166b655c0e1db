//! Parameter sweeps over `(lambda, tau, amplitude)`.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, SweepKind};
use crate::error::{Error, Result};
use crate::field::project_periodic;
use crate::halfspace::solve_linear;
use crate::kuznetsov::solve_kuznetsov;
use crate::model::ModelParams;
use crate::norms::{lp_norm, sols_norm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub period: f64,
    pub amplitude: f64,
    /// `ok`, `converged`, `max-iter`, `diverged`, or `error: ...`.
    pub status: String,
    pub iterations: usize,
    /// `||u_p||_SolS` in the solver's `p`.
    pub solution_norm: f64,
    /// `||P_perp f||_p`.
    pub forcing_norm: f64,
    /// `solution_norm / forcing_norm`, the empirical stability constant.
    pub stability_ratio: f64,
    pub residual: f64,
    /// Largest contraction quotient (nonlinear sweeps).
    pub max_contraction: f64,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "lambda,period,amplitude,status,iterations,solution_norm,forcing_norm,stability_ratio,residual,max_contraction\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:e},{:e},{:e},{:e},{:e}\n",
            r.lambda,
            r.period,
            r.amplitude,
            r.status.replace(',', ";"),
            r.iterations,
            r.solution_norm,
            r.forcing_norm,
            r.stability_ratio,
            r.residual,
            r.max_contraction
        ));
    }
    out
}

fn point(cfg: &RunConfig, kind: SweepKind, lambda: f64, period: f64, amplitude: f64, base: &Path) -> Result<SweepRow> {
    let grid = crate::GridSpec { period, ..cfg.grid };
    let params = ModelParams::new(lambda, cfg.model.gamma, period)?;
    let spec = cfg.build_problem_on(grid, params, amplitude, base)?;
    let p = cfg.solver.p;
    let forcing_norm = lp_norm(&project_periodic(&spec.forcing), p);
    let mut row = SweepRow {
        lambda,
        period,
        amplitude,
        status: String::new(),
        iterations: 0,
        solution_norm: 0.0,
        forcing_norm,
        stability_ratio: 0.0,
        residual: 0.0,
        max_contraction: 0.0,
    };
    let u_p = match kind {
        SweepKind::Linear => {
            let res = solve_linear(&spec, &cfg.linear_options())?;
            row.status = "ok".into();
            row.residual = res.residual_norm;
            res.decomposition.periodic
        }
        SweepKind::Kuznetsov => {
            let (u, trace) = solve_kuznetsov(&spec, &cfg.solver)?;
            row.status = trace.status.as_str().into();
            row.iterations = trace.iterations();
            row.residual = trace.final_residual();
            row.max_contraction = trace.max_ratio().unwrap_or(0.0);
            u.periodic
        }
    };
    row.solution_norm = sols_norm(&u_p, p);
    row.stability_ratio = if forcing_norm > 0.0 { row.solution_norm / forcing_norm } else { 0.0 };
    Ok(row)
}

/// Evaluate every sweep point; points run in parallel, rows come back in
/// `lambda`-major, then `period`, then `amplitude` order.
pub fn run_sweep(cfg: &RunConfig, base_dir: &Path) -> Result<Vec<SweepRow>> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| Error::Config("missing [sweep] section".into()))?;
    let mut points = Vec::new();
    for &l in &sweep.lambdas {
        for &t in &sweep.periods {
            for &a in &sweep.amplitudes {
                points.push((l, t, a));
            }
        }
    }
    Ok(points
        .into_par_iter()
        .map(|(l, t, a)| {
            point(cfg, sweep.kind, l, t, a, base_dir).unwrap_or_else(|e| SweepRow {
                lambda: l,
                period: t,
                amplitude: a,
                status: format!("error: {e}"),
                iterations: 0,
                solution_norm: f64::NAN,
                forcing_norm: f64::NAN,
                stability_ratio: f64::NAN,
                residual: f64::NAN,
                max_contraction: f64::NAN,
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_sweep_is_deterministic_and_ordered() {
        let text = r#"
[grid]
n_t = 8
n_x = 8
box_len = 6.283185307179586
period = 6.283185307179586
[model]
lambda = 1.0
[problem]
domain = "periodic-box"
bc = "none"
[problem.forcing]
kind = "plane-waves"
waves = [{ amplitude = 1.0, time_index = 1, space_index = [1, 0, 0] }]
[sweep]
kind = "linear"
lambdas = [0.5, 1.0, 2.0]
periods = [6.283185307179586, 3.0]
amplitudes = [1.0, 2.0]
"#;
        let cfg = RunConfig::from_toml_str(text).unwrap();
        let a = run_sweep(&cfg, Path::new(".")).unwrap();
        let b = run_sweep(&cfg, Path::new(".")).unwrap();
        assert_eq!(sweep_csv(&a), sweep_csv(&b));
        assert_eq!(a.len(), 12);
        assert_eq!((a[0].lambda, a[1].amplitude, a[2].period), (0.5, 2.0, 3.0));
        // linear: the stability ratio does not depend on the amplitude
        assert!((a[0].stability_ratio - a[1].stability_ratio).abs() < 1e-12 * a[0].stability_ratio);
        // damping grows with lambda
        assert!(a[0].stability_ratio > a[4].stability_ratio);
    }
}
