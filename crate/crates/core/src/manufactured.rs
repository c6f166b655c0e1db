//! Closed-form fields and manufactured forcing/solution pairs.

use serde::{Deserialize, Serialize};

use crate::field::Field;
use crate::grid::GridSpec;
use crate::kuznetsov::nonlinearity;
use crate::model::ModelParams;
use crate::ops::{apply_wave_operator, Dealias};

/// `amplitude * cos(k t + xi . x + phase)` with lattice indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneWave {
    pub amplitude: f64,
    pub time_index: i64,
    pub space_index: [i64; 3],
    #[serde(default)]
    pub phase: f64,
}

impl PlaneWave {
    fn freqs(&self, grid: &GridSpec) -> (f64, [f64; 3]) {
        let s = grid.space_step_freq();
        (
            self.time_index as f64 * grid.time_step_freq(),
            self.space_index.map(|i| i as f64 * s),
        )
    }
}

/// Gaussian-windowed carrier plus an optional steady Gaussian:
/// `a g(x) cos(k t + xi . x) + b g(x)`, `g = exp(-|x - c|^2 / (2 sigma^2))`
/// with `x - c` wrapped to the nearest periodic image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavePacket {
    pub amplitude: f64,
    pub sigma: f64,
    pub center: [f64; 3],
    pub time_index: i64,
    pub carrier: [i64; 3],
    #[serde(default)]
    pub steady_amplitude: f64,
}

impl WavePacket {
    fn window(&self, grid: &GridSpec, x: [f64; 3]) -> ([f64; 3], f64) {
        let l = grid.box_len;
        let r = [0, 1, 2].map(|a| {
            let d = x[a] - self.center[a];
            d - l * (d / l).round()
        });
        let rr = r.iter().map(|v| v * v).sum::<f64>();
        (r, (-rr / (2.0 * self.sigma * self.sigma)).exp())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ClosedForm {
    Zero,
    PlaneWaves { waves: Vec<PlaneWave> },
    WavePacket(WavePacket),
}

impl ClosedForm {
    pub fn plane_wave(amplitude: f64, time_index: i64, space_index: [i64; 3], phase: f64) -> Self {
        ClosedForm::PlaneWaves { waves: vec![PlaneWave { amplitude, time_index, space_index, phase }] }
    }

    /// Multiply every amplitude by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        match self {
            ClosedForm::Zero => ClosedForm::Zero,
            ClosedForm::PlaneWaves { waves } => ClosedForm::PlaneWaves {
                waves: waves.iter().map(|w| PlaneWave { amplitude: s * w.amplitude, ..*w }).collect(),
            },
            ClosedForm::WavePacket(p) => ClosedForm::WavePacket(WavePacket {
                amplitude: s * p.amplitude,
                steady_amplitude: s * p.steady_amplitude,
                ..*p
            }),
        }
    }

    pub fn sample(&self, grid: GridSpec) -> Field {
        match self {
            ClosedForm::Zero => Field::zeros(grid),
            ClosedForm::PlaneWaves { waves } => {
                let w: Vec<_> = waves.iter().map(|w| (w.amplitude, w.freqs(&grid), w.phase)).collect();
                Field::from_fn(grid, |t, x| {
                    w.iter()
                        .map(|&(a, (k, xi), ph)| a * (k * t + xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2] + ph).cos())
                        .sum()
                })
            }
            ClosedForm::WavePacket(p) => {
                let k = p.time_index as f64 * grid.time_step_freq();
                let xi = p.carrier.map(|i| i as f64 * grid.space_step_freq());
                Field::from_fn(grid, |t, x| {
                    let (_, g) = p.window(&grid, x);
                    let th = k * t + xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
                    g * (p.amplitude * th.cos() + p.steady_amplitude)
                })
            }
        }
    }

    /// `u_tt - Lap u - lambda d_t Lap u` from closed-form derivatives, sampled.
    pub fn analytic_wave_operator(&self, grid: GridSpec, params: &ModelParams) -> Field {
        let lambda = params.lambda;
        match self {
            ClosedForm::Zero => Field::zeros(grid),
            ClosedForm::PlaneWaves { waves } => {
                let w: Vec<_> = waves.iter().map(|w| (w.amplitude, w.freqs(&grid), w.phase)).collect();
                Field::from_fn(grid, |t, x| {
                    w.iter()
                        .map(|&(a, (k, xi), ph)| {
                            let th = k * t + xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2] + ph;
                            let r = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                            a * ((r - k * k) * th.cos() - lambda * k * r * th.sin())
                        })
                        .sum()
                })
            }
            ClosedForm::WavePacket(p) => {
                let k = p.time_index as f64 * grid.time_step_freq();
                let xi = p.carrier.map(|i| i as f64 * grid.space_step_freq());
                let s2 = p.sigma * p.sigma;
                let xi_sq = xi.iter().map(|v| v * v).sum::<f64>();
                Field::from_fn(grid, |t, x| {
                    let (r, g) = p.window(&grid, x);
                    let rr = r.iter().map(|v| v * v).sum::<f64>();
                    let lap_g = (rr / (s2 * s2) - 3.0 / s2) * g;
                    let grad_xi = -(r[0] * xi[0] + r[1] * xi[1] + r[2] * xi[2]) / s2 * g;
                    let th = k * t + xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
                    let (s, c) = th.sin_cos();
                    let u_tt = -k * k * g * c;
                    let lap = lap_g * c - 2.0 * grad_xi * s - xi_sq * g * c;
                    let dt_lap = -k * lap_g * s - 2.0 * k * grad_xi * c + k * xi_sq * g * s;
                    p.amplitude * (u_tt - lap - lambda * dt_lap) - p.steady_amplitude * lap_g
                })
            }
        }
    }
}

/// `(f, u*)` with `f = A u*` applied spectrally.
pub fn manufactured_linear(form: &ClosedForm, grid: GridSpec, params: &ModelParams) -> (Field, Field) {
    let u = form.sample(grid);
    (apply_wave_operator(&u, params), u)
}

/// `(f, u*)` with `f = A u* - N(u*)`, the nonlinear term dealiased as in the solver.
pub fn manufactured_kuznetsov(
    form: &ClosedForm,
    grid: GridSpec,
    params: &ModelParams,
    dealias: Dealias,
) -> (Field, Field) {
    let u = form.sample(grid);
    let f = &apply_wave_operator(&u, params) - &nonlinearity(&u, params.gamma, dealias);
    (f, u)
}
