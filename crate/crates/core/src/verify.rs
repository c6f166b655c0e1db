//! Manufactured-solution and invariant suites behind `tpwave verify`.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{project_steady, Field};
use crate::grid::GridSpec;
use crate::halfspace::{
    is_neumann_compatible, separable_extension, solve_halfspace, trace_dirichlet, trace_neumann, BcKind,
    BoundaryField, Domain, ProblemSpec,
};
use crate::kuznetsov::{solve_kuznetsov, FixedPointConfig, IterationStatus};
use crate::linear::{solve_box, solve_periodic, LinearOptions};
use crate::manufactured::{manufactured_kuznetsov, manufactured_linear, ClosedForm, WavePacket};
use crate::model::ModelParams;
use crate::norms::{lp_norm, magnitude, sols_norm};
use crate::ops::{apply_wave_operator, gradient};
use crate::random::random_band_limited;
use crate::symbols::{lattice_multiplier, marcinkiewicz_check, CutoffSpec, SampleSpec, SymbolParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Linear,
    Kuznetsov,
    Halfspace,
    Multiplier,
    Norms,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["linear", "kuznetsov", "halfspace", "multiplier", "norms", "all"];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Linear, Suite::Kuznetsov, Suite::Halfspace, Suite::Multiplier, Suite::Norms],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Linear => "linear",
            Suite::Kuznetsov => "kuznetsov",
            Suite::Halfspace => "halfspace",
            Suite::Multiplier => "multiplier",
            Suite::Norms => "norms",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "linear" => Suite::Linear,
            "kuznetsov" => Suite::Kuznetsov,
            "halfspace" => Suite::Halfspace,
            "multiplier" => Suite::Multiplier,
            "norms" => Suite::Norms,
            "all" => Suite::All,
            other => return Err(Error::Config(format!("unknown suite `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub suite: &'static str,
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,case,error,tolerance,passed\n");
        for c in &self.cases {
            out.push_str(&format!("{},{},{:e},{:e},{}\n", c.suite, c.name, c.error, c.tolerance, c.passed));
        }
        out
    }
}

struct Cases {
    suite: &'static str,
    out: Vec<CaseResult>,
}

impl Cases {
    fn check(&mut self, name: &str, error: f64, tolerance: f64) {
        let passed = error.is_finite() && error <= tolerance;
        self.out.push(CaseResult { suite: self.suite, name: name.into(), error, tolerance, passed });
    }

    fn expect(&mut self, name: &str, ok: bool) {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }
}

fn rel(a: &Field, b: &Field) -> f64 {
    a.max_diff(b) / b.max_abs().max(f64::MIN_POSITIVE)
}

fn standard(n: usize) -> (GridSpec, ModelParams) {
    (GridSpec::new(n, n, 2.0 * PI, 2.0 * PI).expect("valid"), ModelParams::new(1.0, 1.0, 2.0 * PI).expect("valid"))
}

fn linear_suite(c: &mut Cases, seed: u64) -> Result<()> {
    let (g, p) = standard(16);
    let f = Field::from_fn(g, |t, x| (t + x[0]).cos());
    let u = solve_periodic(&f, &p)?;
    c.check("single-mode", rel(&u, &Field::from_fn(g, |t, x| (t + x[0]).sin())), 1e-12);

    let f = Field::from_fn(g, |t, x| (t + x[0]).cos() + x[1].cos());
    let d = solve_box(&f, &p, &LinearOptions::default())?.decomposition;
    let err = rel(&d.periodic, &Field::from_fn(g, |t, x| (t + x[0]).sin()))
        .max(rel(&d.steady, &Field::from_fn(g, |_, x| x[1].cos())));
    c.check("superposition", err, 1e-12);

    let packet = ClosedForm::WavePacket(WavePacket {
        amplitude: 1.0,
        sigma: 0.6,
        center: [PI, PI, PI],
        time_index: 1,
        carrier: [1, 1, 0],
        steady_amplitude: 0.5,
    });
    let (f, u_star) = manufactured_linear(&packet, g, &p);
    let u = solve_box(&f, &p, &LinearOptions::default())?.decomposition.total();
    let shift = project_steady(&u_star).mean();
    c.check("wave-packet", rel(&u, &u_star.map(|v| v - shift)), 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let f = random_band_limited(g, 4, 4, true, &mut rng);
        let back = apply_wave_operator(&solve_periodic(&f, &p)?, &p);
        worst = worst.max(rel(&back, &f));
    }
    c.check("random-round-trip", worst, 1e-10);

    let err = solve_box(&Field::constant(g, 1.0), &p, &LinearOptions::default());
    c.expect("constant-forcing-rejected", matches!(err, Err(Error::MeanNotZero { .. })));
    Ok(())
}

fn kuznetsov_suite(c: &mut Cases) -> Result<()> {
    let (g, p) = standard(16);
    let cfg = FixedPointConfig::default();
    let (u, trace) = solve_kuznetsov(&ProblemSpec::periodic_box(p, Field::zeros(g)), &cfg)?;
    c.expect("zero-data", trace.status == IterationStatus::Converged && trace.iterations() == 1 && u.total().max_abs() == 0.0);

    let form = ClosedForm::plane_wave(1e-3, 1, [1, 0, 0], -PI / 2.0);
    let (f, u_star) = manufactured_kuznetsov(&form, g, &p, cfg.dealias);
    let (u, trace) = solve_kuznetsov(&ProblemSpec::periodic_box(p, f), &cfg)?;
    let err = sols_norm(&(&u.total() - &u_star), cfg.p) / sols_norm(&u_star, cfg.p);
    c.check("manufactured-small-mode", err, 1e-7);
    c.expect("manufactured-converged", trace.status == IterationStatus::Converged);

    let steady = ClosedForm::plane_wave(0.2, 0, [1, 1, 0], 0.3);
    let (f, u_star) = manufactured_kuznetsov(&steady, g, &p, cfg.dealias);
    let (u, _) = solve_kuznetsov(&ProblemSpec::periodic_box(p, f), &cfg)?;
    c.check("manufactured-steady", rel(&u.total(), &u_star), 1e-12);
    Ok(())
}

fn halfspace_suite(c: &mut Cases) -> Result<()> {
    let (g, p) = standard(16);
    let f = Field::from_fn(g, |t, x| x[2].sin() * t.cos());
    let res = solve_halfspace(&ProblemSpec::half_space(BcKind::Dirichlet, p, f), &LinearOptions::default())?;
    let u = res.decomposition.total();
    c.check("dirichlet-odd-trace", trace_dirichlet(&u).max_abs() / u.max_abs(), 1e-10);

    let f = Field::from_fn(g, |t, x| x[2].cos() * t.cos());
    let res = solve_halfspace(&ProblemSpec::half_space(BcKind::Neumann, p, f), &LinearOptions::default())?;
    let u = res.decomposition.total();
    c.check("neumann-even-flux", trace_neumann(&u).max_abs() / magnitude(&gradient(&u)).max_abs(), 1e-8);

    let (ext, data) = separable_extension(g, BcKind::Dirichlet, 0.5, 1, [1, 0])?;
    let scale = lp_norm(&apply_wave_operator(&ext, &p), 2.0);
    let spec = ProblemSpec::half_space(BcKind::Dirichlet, p, Field::zeros(g)).with_extension(ext).with_boundary_data(data);
    let res = solve_halfspace(&spec, &LinearOptions::default())?;
    c.check("dirichlet-lifting-residual", res.residual_norm / scale, 1e-9);
    c.check("dirichlet-lifting-trace", res.trace_error, 1e-12);

    let f = Field::constant(g, 1.0);
    c.expect("neumann-incompatible-flagged", !is_neumann_compatible(&f, None, Domain::HalfSpace));
    // int over the half box of 1 is balanced by g = -L/2 on the wall
    let depth = 0.5 * g.box_len;
    let gb = BoundaryField::from_fn(g, |_, _| -depth);
    c.expect("neumann-compatible-accepted", is_neumann_compatible(&f, Some(&gb), Domain::HalfSpace));
    Ok(())
}

fn multiplier_suite(c: &mut Cases, seed: u64) -> Result<()> {
    use rand::Rng;
    let sp = SymbolParams::new(1.0, 2.0 * PI)?;
    c.check("c1-c3", (sp.c1() - 1.0).abs() + (sp.c3() - 5f64.sqrt()).abs(), 1e-15);
    c.check("unit-mode", (lattice_multiplier(1.0, [1.0, 0.0, 0.0], &sp).norm() - 1.0).abs(), 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    for _ in 0..1000 {
        let lambda = rng.gen_range(0.1..3.0);
        let sp = SymbolParams::new(lambda, 2.0 * PI)?;
        let k = loop {
            let k: i64 = rng.gen_range(-20..=20);
            if k != 0 {
                break k as f64;
            }
        };
        let xi = [0; 3].map(|_| rng.gen_range(-20i64..=20) as f64);
        let r = xi.iter().map(|v| v * v).sum::<f64>();
        if r == 0.0 {
            continue;
        }
        let m = lattice_multiplier(k, xi, &sp).norm();
        if m > 1.0 / (lambda * k.abs() * r) {
            violations += 1;
        }
        if r != k * k && m > 1.0 / (r - k * k).abs() {
            violations += 1;
        }
    }
    c.check("envelope-violations", violations as f64, 0.0);

    let sample = SampleSpec { decades: 2.0, eta_points: 41, band_points: 31, xi_points: 11 };
    let report = marcinkiewicz_check(&sp, &CutoffSpec::for_period(2.0 * PI), &sample)?;
    c.check("closed-form-bound-violations", report.closed_form_violations().len() as f64, 0.0);
    Ok(())
}

fn norms_suite(c: &mut Cases) -> Result<()> {
    let (g, _) = standard(16);
    let one = Field::constant(g, 1.0);
    c.check("lp-constant", (lp_norm(&one, 2.0) - (2.0 * PI).powf(1.5)).abs(), 1e-12);
    let s = Field::from_fn(g, |_, x| x[0].sin());
    c.check("lp-sine", (lp_norm(&s, 2.0) - (g.volume() / 2.0).sqrt()).abs(), 1e-12);
    let u = Field::from_fn(g, |t, _| t.cos());
    c.check("sols-cos-t", (sols_norm(&u, 2.0) - (1.5 * g.volume()).sqrt()).abs(), 1e-11);
    Ok(())
}

/// Run a suite; `seed` drives the random cases.
pub fn run_suite(suite: Suite, seed: u64) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for part in suite.parts() {
        let mut cases = Cases { suite: part.name(), out: Vec::new() };
        match part {
            Suite::Linear => linear_suite(&mut cases, seed)?,
            Suite::Kuznetsov => kuznetsov_suite(&mut cases)?,
            Suite::Halfspace => halfspace_suite(&mut cases)?,
            Suite::Multiplier => multiplier_suite(&mut cases, seed)?,
            Suite::Norms => norms_suite(&mut cases)?,
            Suite::All => unreachable!("expanded by parts"),
        }
        report.cases.extend(cases.out);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for s in ["linear", "kuznetsov", "halfspace", "multiplier", "norms"] {
            let report = run_suite(s.parse().unwrap(), 7).unwrap();
            assert!(report.all_passed(), "{}", report.to_csv());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!("nope".parse::<Suite>().is_err());
    }
}
