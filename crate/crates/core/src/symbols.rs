//! Solution multipliers of the damped wave operator and a numerical
//! Marcinkiewicz-condition check for the smoothed multiplier.
//!
//! On the dual lattice the purely periodic solution is
//! `u_hat = M(k, xi) f_hat` with
//! `M(k, xi) = (1 - delta_{k,0}) / (|xi|^2 - k^2 + i lambda k |xi|^2)`.
//! Replacing `delta` by a smooth cutoff `chi` in the time frequency gives a
//! multiplier `m(eta, xi)` on all of `R x R^3` that agrees with `M` on lattice
//! points with `|k| >= 2 pi / tau`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolParams {
    pub lambda: f64,
    pub period: f64,
}

impl SymbolParams {
    pub fn new(lambda: f64, period: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParams(format!("lambda = {lambda} must be positive")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParams(format!("period = {period} must be positive")));
        }
        Ok(Self { lambda, period })
    }

    /// `c1 = min(1, tau^2 / (lambda^2 pi^2))`.
    pub fn c1(&self) -> f64 {
        (self.period * self.period / (self.lambda * self.lambda * PI * PI)).min(1.0)
    }

    /// `c3 = sqrt(tau^2 / (lambda^2 pi^2) + 1)`.
    pub fn c3(&self) -> f64 {
        (self.period * self.period / (self.lambda * self.lambda * PI * PI) + 1.0).sqrt()
    }
}

/// Smooth even cutoff: 1 on `|eta| <= inner`, 0 on `|eta| >= outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub inner: f64,
    pub outer: f64,
}

fn bump_edge(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

fn bump_edge_prime(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp() / (s * s)
    } else {
        0.0
    }
}

impl CutoffSpec {
    /// The cutoff with plateau `pi / tau` and support `2 pi / tau`.
    pub fn for_period(period: f64) -> Self {
        Self { inner: PI / period, outer: 2.0 * PI / period }
    }

    fn transition(&self, eta: f64) -> f64 {
        (eta.abs() - self.inner) / (self.outer - self.inner)
    }

    pub fn chi(&self, eta: f64) -> f64 {
        let a = eta.abs();
        if a <= self.inner {
            return 1.0;
        }
        if a >= self.outer {
            return 0.0;
        }
        let u = self.transition(eta);
        let (hi, lo) = (bump_edge(1.0 - u), bump_edge(u));
        hi / (hi + lo)
    }

    pub fn chi_prime(&self, eta: f64) -> f64 {
        let a = eta.abs();
        if a <= self.inner || a >= self.outer {
            return 0.0;
        }
        let u = self.transition(eta);
        let (hi, lo) = (bump_edge(1.0 - u), bump_edge(u));
        let (dhi, dlo) = (-bump_edge_prime(1.0 - u), bump_edge_prime(u));
        let sum = hi + lo;
        let dchi_du = (dhi * sum - hi * (dhi + dlo)) / (sum * sum);
        dchi_du * eta.signum() / (self.outer - self.inner)
    }
}

fn xi_sq(xi: [f64; 3]) -> f64 {
    xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
}

/// Lattice multiplier `M(k, xi)`; zero on the `k = 0` plane.
pub fn lattice_multiplier(k: f64, xi: [f64; 3], params: &SymbolParams) -> Complex64 {
    let k_step = 2.0 * PI / params.period;
    if k.abs() < 0.5 * k_step {
        return Complex64::default();
    }
    let r = xi_sq(xi);
    let den = Complex64::new(r - k * k, params.lambda * k * r);
    if den == Complex64::default() {
        return Complex64::default();
    }
    den.inv()
}

/// Smooth multiplier `m(eta, xi) = (1 - chi(eta)) / (|xi|^2 - eta^2 + i lambda eta |xi|^2)`.
pub fn smooth_multiplier(eta: f64, xi: [f64; 3], params: &SymbolParams, cutoff: &CutoffSpec) -> Complex64 {
    let one_minus = 1.0 - cutoff.chi(eta);
    if one_minus == 0.0 {
        return Complex64::default();
    }
    let r = xi_sq(xi);
    Complex64::from(one_minus) / Complex64::new(r - eta * eta, params.lambda * eta * r)
}

/// One of the 16 patterns `eps in {0,1}^4`; bits 0..3 are `(xi_1, xi_2, xi_3, eta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern(pub u8);

impl Pattern {
    pub fn all() -> impl Iterator<Item = Pattern> {
        (0u8..16).map(Pattern)
    }

    pub fn has_xi(&self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn has_eta(&self) -> bool {
        self.0 >> 3 & 1 == 1
    }

    pub fn xi_count(&self) -> usize {
        (self.0 & 0b111).count_ones() as usize
    }

    /// `"e1e2e3e4"`, e.g. `"1001"` for `xi_1 eta d_1 d_eta m`.
    pub fn label(&self) -> String {
        (0..4).map(|j| if self.0 >> j & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// `xi^S eta^e d_xi^S d_eta^e m(eta, xi)` for every pattern, by analytic differentiation.
///
/// With `w = 1 + i lambda eta`, `d = |xi|^2 w - eta^2`, and `n = |S|`,
/// `d_xi^S (1/d) = (-1)^n n! w^n / d^(n+1) * prod_{j in S} 2 xi_j`.
pub fn marcinkiewicz_products(
    eta: f64,
    xi: [f64; 3],
    params: &SymbolParams,
    cutoff: &CutoffSpec,
) -> [Complex64; 16] {
    let mut out = [Complex64::default(); 16];
    let one_minus = 1.0 - cutoff.chi(eta);
    let chip = cutoff.chi_prime(eta);
    if one_minus == 0.0 && chip == 0.0 {
        return out;
    }
    let lambda = params.lambda;
    let r = xi_sq(xi);
    let w = Complex64::new(1.0, lambda * eta);
    let d = r * w - eta * eta;
    let d_eta = Complex64::new(-2.0 * eta, lambda * r);
    let inv_d = d.inv();

    let mut g = [Complex64::default(); 4];
    let mut g_eta = [Complex64::default(); 4];
    let mut fact = 1.0;
    for n in 0..4usize {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * fact;
        let wn = w.powu(n as u32);
        let dn1 = inv_d.powu(n as u32 + 1);
        g[n] = c * wn * dn1;
        let mut ge = -(n as f64 + 1.0) * wn * d_eta * dn1 * inv_d;
        if n > 0 {
            ge += n as f64 * I * lambda * w.powu(n as u32 - 1) * dn1;
        }
        g_eta[n] = c * ge;
    }

    for p in Pattern::all() {
        let n = p.xi_count();
        let q: f64 = (0..3).filter(|&j| p.has_xi(j)).map(|j| 2.0 * xi[j] * xi[j]).product();
        out[p.0 as usize] = if p.has_eta() {
            eta * q * (-chip * g[n] + one_minus * g_eta[n])
        } else {
            one_minus * q * g[n]
        };
    }
    out
}

/// Sampling of `(eta, xi)` space for [`marcinkiewicz_check`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleSpec {
    /// Samples cover `[10^-decades, 10^decades] * 2 pi / tau` on each axis.
    pub decades: f64,
    pub eta_points: usize,
    /// Extra linear samples on the cutoff transition `[pi/tau, 2 pi/tau]`.
    pub band_points: usize,
    pub xi_points: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { decades: 3.0, eta_points: 121, band_points: 81, xi_points: 25 }
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

impl SampleSpec {
    pub fn eta_samples(&self, period: f64) -> Vec<f64> {
        let base = 2.0 * PI / period;
        let scale = 10f64.powf(self.decades);
        let mut eta = log_space(base / scale, base * scale, self.eta_points);
        let (lo, hi) = (PI / period, 2.0 * PI / period);
        eta.extend((0..self.band_points).map(|i| lo + (hi - lo) * i as f64 / (self.band_points - 1) as f64));
        eta.sort_by(f64::total_cmp);
        eta.dedup();
        eta
    }

    pub fn xi_samples(&self, period: f64) -> Vec<f64> {
        let base = 2.0 * PI / period;
        let scale = 10f64.powf(self.decades);
        log_space(base / scale, base * scale, self.xi_points)
    }
}

/// Per-pattern outcome of the check.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternBound {
    pub pattern: Pattern,
    pub grid_sup: f64,
    pub bound: f64,
    /// Bound involves only `c0, c1, c3` (no estimated `c2`).
    pub closed_form: bool,
    pub expression: &'static str,
}

impl PatternBound {
    pub fn ratio(&self) -> f64 {
        if self.bound > 0.0 {
            self.grid_sup / self.bound
        } else if self.grid_sup == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn holds(&self) -> bool {
        self.grid_sup.is_finite() && self.grid_sup <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarcinkiewiczReport {
    pub params: SymbolParams,
    /// Grid sup of `|m|`.
    pub c0: f64,
    pub c1: f64,
    /// Estimated sup of `(2 pi / tau) |chi'(eta)| / |den|` over the transition band.
    pub c2_estimated: f64,
    pub c3: f64,
    pub patterns: Vec<PatternBound>,
    pub sample_count: usize,
}

impl MarcinkiewiczReport {
    /// Overall Marcinkiewicz constant estimate: max of all pattern sups.
    pub fn a_estimate(&self) -> f64 {
        self.patterns.iter().map(|p| p.grid_sup).fold(0.0, f64::max)
    }

    pub fn closed_form_violations(&self) -> Vec<&PatternBound> {
        self.patterns.iter().filter(|p| p.closed_form && !p.holds()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("epsilon,grid_sup,bound,ratio\n");
        for p in &self.patterns {
            let _ = writeln!(s, "{},{:e},{:e},{:e}", p.pattern.label(), p.grid_sup, p.bound, p.ratio());
        }
        s
    }
}

/// Reference bound for a pattern assembled from `c0, c1, c2, c3`.
fn reference_bound(p: Pattern, params: &SymbolParams, c0: f64, c2: f64) -> (f64, &'static str) {
    let c1 = params.c1();
    let c3 = params.c3();
    let s = (4.0 * c1 + 1.0).sqrt();
    let tp = params.period / PI;
    match (p.xi_count(), p.has_eta()) {
        (0, false) => (c0, "c0"),
        (0, true) => (c2 + c0 * s, "c2 + c0 sqrt(4c1+1)"),
        (1, false) => (2.0 * c0 * c3, "2 c0 c3"),
        (1, true) => (
            tp * c2 * c3 + 2.0 * c0 + 4.0 * c0 * c3 * s,
            "(tau/pi) c2 c3 + 2 c0 + 4 c0 c3 sqrt(4c1+1)",
        ),
        (2, false) => (8.0 * c0 * c3 * c3, "8 c0 c3^2"),
        (2, true) => (
            4.0 * tp * c2 * c3 * c3 + 16.0 * c0 * c3 + 24.0 * c0 * c3 * c3 * s,
            "(4tau/pi) c2 c3^2 + 16 c0 c3 + 24 c0 c3^2 sqrt(4c1+1)",
        ),
        (3, false) => (48.0 * c0 * c3.powi(3), "48 c0 c3^3"),
        (_, _) => (
            192.0 * c0 * c3.powi(3) * s + 144.0 * c0 * c3 * c3 + 24.0 * tp * c2 * c3.powi(3),
            "192 c0 c3^3 sqrt(4c1+1) + 144 c0 c3^2 + (24tau/pi) c2 c3^3",
        ),
    }
}

#[derive(Clone, Copy, Default)]
struct LineStats {
    sup: [f64; 16],
    jump: [f64; 16],
    c2: f64,
}

impl LineStats {
    fn merge(mut self, o: LineStats) -> LineStats {
        for i in 0..16 {
            self.sup[i] = self.sup[i].max(o.sup[i]);
            self.jump[i] = self.jump[i].max(o.jump[i]);
        }
        self.c2 = self.c2.max(o.c2);
        self
    }
}

/// Estimate the sup of every Marcinkiewicz product over a sample grid and
/// compare with the reference bound chain.
///
/// Fails with [`Error::GridTooCoarse`] if consecutive samples along the `eta`
/// axis of some product jump by more than half of that product's sup.
pub fn marcinkiewicz_check(
    params: &SymbolParams,
    cutoff: &CutoffSpec,
    sample: &SampleSpec,
) -> Result<MarcinkiewiczReport> {
    if sample.eta_points < 2 || sample.band_points < 2 || sample.xi_points < 1 {
        return Err(Error::InvalidParams("sample grid needs at least two points per axis".into()));
    }
    let etas = sample.eta_samples(params.period);
    let xis = sample.xi_samples(params.period);
    let nx = xis.len();
    let band_scale = 2.0 * PI / params.period;

    let stats = (0..nx * nx * nx)
        .into_par_iter()
        .map(|flat| {
            let xi = [xis[flat / (nx * nx)], xis[(flat / nx) % nx], xis[flat % nx]];
            let mut st = LineStats::default();
            let mut prev: Option<[f64; 16]> = None;
            for &eta in &etas {
                let vals = marcinkiewicz_products(eta, xi, params, cutoff);
                let mods = vals.map(|c| c.norm());
                for i in 0..16 {
                    st.sup[i] = st.sup[i].max(mods[i]);
                    if let Some(p) = prev {
                        st.jump[i] = st.jump[i].max((mods[i] - p[i]).abs());
                    }
                }
                let chip = cutoff.chi_prime(eta);
                if chip != 0.0 {
                    let r = xi_sq(xi);
                    let den = Complex64::new(r - eta * eta, params.lambda * eta * r).norm();
                    st.c2 = st.c2.max(band_scale * chip.abs() / den);
                }
                prev = Some(mods);
            }
            st
        })
        .reduce(LineStats::default, LineStats::merge);

    for p in Pattern::all() {
        let i = p.0 as usize;
        if !stats.sup[i].is_finite() || stats.jump[i] > 0.5 * stats.sup[i] {
            return Err(Error::GridTooCoarse {
                pattern: p.label(),
                jump: stats.jump[i],
                sup: stats.sup[i],
            });
        }
    }

    let c0 = stats.sup[0];
    let patterns = Pattern::all()
        .map(|p| {
            let (bound, expression) = reference_bound(p, params, c0, stats.c2);
            PatternBound {
                pattern: p,
                grid_sup: stats.sup[p.0 as usize],
                bound,
                closed_form: !p.has_eta(),
                expression,
            }
        })
        .collect();

    Ok(MarcinkiewiczReport {
        params: *params,
        c0,
        c1: params.c1(),
        c2_estimated: stats.c2,
        c3: params.c3(),
        patterns,
        sample_count: etas.len() * nx * nx * nx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit() -> SymbolParams {
        SymbolParams::new(1.0, 2.0 * PI).unwrap()
    }

    #[test]
    fn lattice_multiplier_examples() {
        let p = unit();
        assert_eq!(lattice_multiplier(0.0, [1.0, 2.0, 3.0], &p), Complex64::default());
        // denominator 1 - 1 + i = i
        let v = lattice_multiplier(1.0, [1.0, 0.0, 0.0], &p);
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let v = lattice_multiplier(1.0, [0.0, 0.0, 0.0], &p);
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cutoff_plateaus_and_evenness() {
        let c = CutoffSpec::for_period(2.0);
        assert_eq!(c.chi(0.0), 1.0);
        assert_eq!(c.chi(PI / 2.0), 1.0);
        assert_eq!(c.chi(PI), 0.0);
        assert_eq!(c.chi(10.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let eta: f64 = rng.gen_range(-4.0..4.0);
            let v = c.chi(eta);
            assert!((0.0..=1.0).contains(&v));
            assert_eq!(v, c.chi(-eta));
            assert_eq!(c.chi_prime(eta), -c.chi_prime(-eta));
        }
        // monotone on the transition
        let mut last = 1.0;
        for i in 0..=200 {
            let eta = PI / 2.0 + (PI / 2.0) * i as f64 / 200.0;
            let v = c.chi(eta);
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn chi_prime_matches_central_difference() {
        let c = CutoffSpec::for_period(2.0 * PI);
        for i in 1..40 {
            let eta = 0.5 + 0.5 * i as f64 / 40.0;
            let h = 1e-6;
            let fd = (c.chi(eta + h) - c.chi(eta - h)) / (2.0 * h);
            assert!((fd - c.chi_prime(eta)).abs() < 1e-6, "eta {eta}");
        }
    }

    #[test]
    fn smooth_multiplier_vanishes_on_plateau_and_matches_lattice() {
        let p = SymbolParams::new(0.7, 3.0).unwrap();
        let c = CutoffSpec::for_period(p.period);
        assert_eq!(smooth_multiplier(0.1 * PI / 3.0, [1.0, 2.0, 0.5], &p, &c), Complex64::default());
        for k0 in 1..6 {
            let k = k0 as f64 * 2.0 * PI / 3.0;
            let xi = [0.3 * k0 as f64, -1.0, 2.0];
            assert_eq!(smooth_multiplier(k, xi, &p, &c), lattice_multiplier(k, xi, &p));
        }
    }

    #[test]
    fn smooth_multiplier_matches_componentwise_evaluation() {
        let p = SymbolParams::new(1.3, 1.5).unwrap();
        let c = CutoffSpec::for_period(p.period);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let eta = rng.gen_range(-10.0..10.0);
            let xi = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let r: f64 = xi.iter().map(|v| v * v).sum();
            let num = 1.0 - c.chi(eta);
            let re = r - eta * eta;
            let im = p.lambda * eta * r;
            let den2 = re * re + im * im;
            let expect = Complex64::new(num * re / den2, -num * im / den2);
            assert!((smooth_multiplier(eta, xi, &p, &c) - expect).norm() <= 1e-12 * expect.norm().max(1e-300));
        }
    }

    #[test]
    fn constants_for_unit_parameters() {
        let p = unit();
        assert_eq!(p.c1(), 1.0);
        assert!((p.c3() - 5f64.sqrt()).abs() < 1e-15);
        let q = SymbolParams::new(2.0, 1.0).unwrap();
        assert!((q.c1() - 1.0 / (4.0 * PI * PI)).abs() < 1e-16);
    }

    // Finite differences on the closed-form m serve as the independent oracle.
    #[test]
    fn analytic_products_match_finite_differences() {
        let p = SymbolParams::new(0.8, 2.0).unwrap();
        let c = CutoffSpec::for_period(p.period);
        let m = |eta: f64, xi: [f64; 3]| smooth_multiplier(eta, xi, &p, &c);
        let points = [(2.1, [0.7, 1.1, -0.4]), (1.9, [1.3, 0.2, 0.9]), (5.0, [2.0, -1.5, 1.0]), (-3.7, [0.4, 0.6, 2.2])];
        // mixed central difference over the selected variables
        let mixed = |eta: f64, xi: [f64; 3], vars: &[usize], h: f64| {
            let mut acc = Complex64::default();
            for signs in 0..(1u32 << vars.len()) {
                let mut e = eta;
                let mut x = xi;
                let mut sgn = 1.0;
                for (b, &v) in vars.iter().enumerate() {
                    let s = if signs >> b & 1 == 1 { 1.0 } else { -1.0 };
                    sgn *= s;
                    if v == 3 {
                        e += s * h;
                    } else {
                        x[v] += s * h;
                    }
                }
                acc += sgn * m(e, x);
            }
            acc / (2.0 * h).powi(vars.len() as i32)
        };
        for (eta, xi) in points {
            let vals = marcinkiewicz_products(eta, xi, &p, &c);
            for pat in Pattern::all() {
                let vars: Vec<usize> = (0..4).filter(|&j| pat.0 >> j & 1 == 1).collect();
                // Richardson extrapolation removes the O(h^2) term
                let deriv = (4.0 * mixed(eta, xi, &vars, 1e-2) - mixed(eta, xi, &vars, 2e-2)) / 3.0;
                let mut weight = 1.0;
                for &v in &vars {
                    weight *= if v == 3 { eta } else { xi[v] };
                }
                let fd = deriv * weight;
                let got = vals[pat.0 as usize];
                assert!(
                    (fd - got).norm() <= 1e-5 * got.norm().max(1e-3),
                    "pattern {} at eta {eta}: fd {fd} analytic {got}",
                    pat.label()
                );
            }
        }
    }

    #[test]
    fn products_have_even_modulus_in_eta() {
        let p = SymbolParams::new(1.0, 2.0).unwrap();
        let c = CutoffSpec::for_period(p.period);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let eta = rng.gen_range(0.0..20.0);
            let xi = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
            let a = marcinkiewicz_products(eta, xi, &p, &c);
            let b = marcinkiewicz_products(-eta, xi, &p, &c);
            for i in 0..16 {
                assert!((a[i].norm() - b[i].norm()).abs() <= 1e-12 * a[i].norm().max(1e-300));
                assert!((a[i] - b[i].conj()).norm() <= 1e-12 * a[i].norm().max(1e-300));
            }
        }
    }

    #[test]
    fn grid_too_coarse_is_detected() {
        let p = unit();
        let c = CutoffSpec::for_period(p.period);
        let coarse = SampleSpec { decades: 3.0, eta_points: 4, band_points: 2, xi_points: 5 };
        assert!(matches!(marcinkiewicz_check(&p, &c, &coarse), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn check_reports_c0_as_first_sup() {
        let p = unit();
        let c = CutoffSpec::for_period(p.period);
        let small = SampleSpec { decades: 2.0, eta_points: 81, band_points: 41, xi_points: 13 };
        let rep = marcinkiewicz_check(&p, &c, &small).unwrap();
        assert_eq!(rep.patterns[0].grid_sup, rep.c0);
        assert_eq!(rep.patterns[0].ratio(), 1.0);
        assert!(rep.c0.is_finite() && rep.c0 > 0.0);
        assert!(rep.closed_form_violations().is_empty());
        let csv = rep.to_csv();
        assert!(csv.starts_with("epsilon,grid_sup,bound,ratio\n"));
        assert_eq!(csv.lines().count(), 17);
    }
}
