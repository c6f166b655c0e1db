//! Per-time-frequency damping of the linear solution operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::signed_mode;

/// Rows whose forcing mass is below this fraction of the total are omitted.
pub const MASS_FLOOR: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingRow {
    pub k_index: usize,
    /// `|k|` in angular frequency units.
    pub k: f64,
    /// Squared L2 mass of the forcing on the time frequencies `+-k`.
    pub forcing_mass: f64,
    pub solution_mass: f64,
    /// `solution_mass / forcing_mass`.
    pub ratio: f64,
    /// Upper bound on `ratio`: the largest `|M(k, xi)|^2` envelope over the lattice
    /// (`1/|xi|^4` for `k = 0`).
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeDampingTable {
    pub rows: Vec<DampingRow>,
}

impl ModeDampingTable {
    pub fn row(&self, k_index: usize) -> Option<&DampingRow> {
        self.rows.iter().find(|r| r.k_index == k_index)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k_index,k,forcing_mass,solution_mass,ratio,envelope\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e}\n",
                r.k_index, r.k, r.forcing_mass, r.solution_mass, r.ratio, r.envelope
            ));
        }
        out
    }
}

fn masses(f: &Field) -> Vec<f64> {
    let g = f.grid();
    let mut out = vec![0.0; g.n_t / 2 + 1];
    let per_slice = g.spatial_len();
    for (idx, c) in f.spectrum().coeffs().iter().enumerate() {
        let it = idx / per_slice;
        out[signed_mode(it, g.n_t).unsigned_abs() as usize] += c.norm_sqr();
    }
    out.iter().map(|m| m * g.volume()).collect()
}

fn envelope(k: f64, lambda: f64, grid: &crate::GridSpec) -> f64 {
    let s = grid.space_step_freq();
    if k == 0.0 {
        return 1.0 / s.powi(4);
    }
    // |xi|^2 = s^2 * (a^2 + b^2 + c^2) ranges over sums of three squares
    let max_index = (grid.n_x / 2) as i64;
    let mut best: f64 = 0.0;
    for a in 0..=max_index {
        for b in a..=max_index {
            for c in b..=max_index {
                let r = s * s * (a * a + b * b + c * c) as f64;
                let damped = if r > 0.0 { 1.0 / (lambda * k * r) } else { f64::INFINITY };
                let undamped = if r != k * k { 1.0 / (r - k * k).abs() } else { f64::INFINITY };
                best = best.max(damped.min(undamped));
            }
        }
    }
    best * best
}

/// Compare forcing and solution mass per `|k|`.
pub fn mode_damping_report(f: &Field, u: &Field, lambda: f64) -> Result<ModeDampingTable> {
    if f.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let g = f.grid();
    let fm = masses(f);
    let um = masses(u);
    let total: f64 = fm.iter().sum();
    let rows = (0..fm.len())
        .filter(|&j| fm[j] > MASS_FLOOR * total && fm[j] > 0.0)
        .map(|j| {
            let k = j as f64 * g.time_step_freq();
            DampingRow {
                k_index: j,
                k,
                forcing_mass: fm[j],
                solution_mass: um[j],
                ratio: um[j] / fm[j],
                envelope: envelope(k, lambda, g),
            }
        })
        .collect();
    Ok(ModeDampingTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{solve_box, LinearOptions};
    use crate::model::ModelParams;
    use crate::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_ratio_is_one() {
        let g = GridSpec::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = ModelParams::new(1.0, 1.0, 2.0 * PI).unwrap();
        let f = Field::from_fn(g, |t, x| (t + x[0]).cos());
        let u = solve_box(&f, &p, &LinearOptions::default()).unwrap().decomposition.total();
        let table = mode_damping_report(&f, &u, 1.0).unwrap();
        assert_eq!(table.rows.len(), 1);
        let row = table.row(1).unwrap();
        assert!((row.ratio - 1.0).abs() < 1e-12);
        assert!((row.forcing_mass - 0.5 * g.volume()).abs() < 1e-10);
    }

    #[test]
    fn zero_forcing_gives_empty_table() {
        let g = GridSpec::new(4, 4, 1.0, 1.0).unwrap();
        let z = Field::zeros(g);
        assert!(mode_damping_report(&z, &z, 1.0).unwrap().rows.is_empty());
    }

    #[test]
    fn envelope_matches_brute_force() {
        let g = GridSpec::new(4, 6, 2.0 * PI, 2.0 * PI).unwrap();
        let mut best: f64 = 0.0;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    let r = (a * a + b * b + c * c) as f64;
                    let m = crate::symbols::lattice_multiplier(
                        2.0,
                        [a as f64, b as f64, c as f64],
                        &crate::SymbolParams::new(0.5, 2.0 * PI).unwrap(),
                    );
                    assert!(m.norm_sqr() <= envelope(2.0, 0.5, &g) * (1.0 + 1e-12) || r == 0.0);
                    let bound = (1.0 / (0.5 * 2.0 * r)).min(1.0 / (r - 4.0).abs());
                    if r > 0.0 {
                        best = best.max(bound);
                    }
                }
            }
        }
        assert!((envelope(2.0, 0.5, &g) - (best * best).max(1.0 / 16.0)).abs() < 1e-14);
    }
}
