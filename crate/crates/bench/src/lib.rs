//! Benchmark fixtures shared by the criterion targets.

use std::f64::consts::PI;

use tpwave_core::{Field, GridSpec, ModelParams};

pub fn cube(n: usize) -> GridSpec {
    GridSpec::new(n, n, 2.0 * PI, 2.0 * PI).expect("valid grid")
}

pub fn unit_params() -> ModelParams {
    ModelParams::new(1.0, 1.0, 2.0 * PI).expect("valid params")
}

/// A few low modes, mean-free in time.
pub fn periodic_forcing(grid: GridSpec, amplitude: f64) -> Field {
    Field::from_fn(grid, |t, x| {
        amplitude * ((t + x[0]).cos() + 0.5 * (2.0 * t - x[1] + x[2]).sin() + 0.25 * (t - 2.0 * x[2]).cos())
    })
}
