use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tpwave_core::halfspace::{reflect_even, reflect_odd, restrict};
use tpwave_core::io::{decode_field, encode_field};
use tpwave_core::linear::solve_periodic;
use tpwave_core::norms::lp_norm;
use tpwave_core::random::random_band_limited;
use tpwave_core::*;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n, n, 2.0 * PI, 2.0 * PI).unwrap()
}

fn field(seed: u64, mean_free: bool) -> Field {
    random_band_limited(grid(8), 2, 2, mean_free, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn lattice() -> impl Strategy<Value = (i64, [i64; 3])> {
    (-30i64..=30, prop::array::uniform3(-30i64..=30))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn periodic_solve_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let p = ModelParams::new(0.7, 1.0, 2.0 * PI).unwrap();
        let (f, g) = (field(s1, true), field(s2, true));
        let combo = &f.scale(a) + &g.scale(b);
        let lhs = solve_periodic(&combo, &p).unwrap();
        let rhs = &solve_periodic(&f, &p).unwrap().scale(a) + &solve_periodic(&g, &p).unwrap().scale(b);
        prop_assert!(lhs.max_diff(&rhs) <= 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn multiplier_is_conjugate_symmetric((k, j) in lattice(), lambda in 0.05..5.0f64, period in 0.5..10.0f64) {
        let sp = SymbolParams::new(lambda, period).unwrap();
        let step = 2.0 * PI / period;
        let xi = j.map(|v| v as f64);
        let m = lattice_multiplier(k as f64 * step, xi, &sp);
        let mirrored = lattice_multiplier(-(k as f64) * step, xi.map(|v| -v), &sp);
        prop_assert!((m.conj() - mirrored).norm() <= 1e-15 * m.norm().max(1e-300));
    }

    #[test]
    fn multiplier_inverts_symbol((k, j) in lattice(), lambda in 0.05..5.0f64) {
        prop_assume!(k != 0 && j != [0, 0, 0]);
        let sp = SymbolParams::new(lambda, 2.0 * PI).unwrap();
        let (kf, xi) = (k as f64, j.map(|v| v as f64));
        let r: f64 = xi.iter().map(|v| v * v).sum();
        let den = Complex64::new(r - kf * kf, lambda * kf * r);
        let m = lattice_multiplier(kf, xi, &sp);
        prop_assert!((m * den - 1.0).norm() <= 1e-14);
        prop_assert!(m.norm() <= 1.0 / (lambda * kf.abs() * r));
    }

    #[test]
    fn lp_norm_is_a_norm(s1 in any::<u64>(), s2 in any::<u64>(), a in -5.0..5.0f64, p in prop::sample::select(vec![1.0, 1.5, 2.0, 2.75, 3.0, f64::INFINITY])) {
        let (f, g) = (field(s1, false), field(s2, false));
        let nf = lp_norm(&f, p);
        prop_assert!((lp_norm(&f.scale(a), p) - a.abs() * nf).abs() <= 1e-12 * (1.0 + nf * a.abs()));
        prop_assert!(lp_norm(&(&f + &g), p) <= (nf + lp_norm(&g, p)) * (1.0 + 1e-12));
    }

    #[test]
    fn projections_split_the_field(seed in any::<u64>()) {
        let f = field(seed, false);
        let (pf, qf) = (project_steady(&f), project_periodic(&f));
        prop_assert!(pf.time_variation() <= 1e-13 * f.max_abs());
        prop_assert!(project_steady(&qf).max_abs() <= 1e-13 * f.max_abs());
        prop_assert!((&pf + &qf).max_diff(&f) <= 1e-13 * f.max_abs());
    }

    #[test]
    fn tpwf_round_trip_is_bit_exact(seed in any::<u64>(), nt in 2usize..5, nx in 2usize..5) {
        let g = GridSpec::new(2 * nt, 2 * nx, 1.5, 0.25 + seed as f64 / u64::MAX as f64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..g.len()).map(|_| rand::Rng::gen_range(&mut rng, -1e3..1e3)).collect();
        let f = Field::from_samples(g, samples).unwrap();
        let back = decode_field(&encode_field(&f)).unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        prop_assert!(back.samples().iter().zip(f.samples()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn reflections_preserve_parity(seed in any::<u64>()) {
        let g = grid(8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planes = HalfField::planes(&g);
        let mut samples: Vec<f64> = (0..g.n_t * g.n_x * g.n_x * planes).map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0)).collect();
        let raw = HalfField::from_samples(g, samples.clone()).unwrap();
        for t in 0..g.n_t {
            for i in 0..g.n_x {
                for j in 0..g.n_x {
                    samples[raw.index(t, i, j, 0)] = 0.0;
                    samples[raw.index(t, i, j, planes - 1)] = 0.0;
                }
            }
        }
        let h = HalfField::from_samples(g, samples).unwrap();
        let odd = reflect_odd(&h).unwrap();
        let even = reflect_even(&raw);
        for t in 0..g.n_t {
            for i in 0..g.n_x {
                for j in 0..g.n_x {
                    for l in 0..g.n_x {
                        let m = (g.n_x - l) % g.n_x;
                        prop_assert_eq!(odd.get(t, [i, j, l]), -odd.get(t, [i, j, m]));
                        prop_assert_eq!(even.get(t, [i, j, l]), even.get(t, [i, j, m]));
                    }
                }
            }
        }
        prop_assert_eq!(restrict(&odd), h);
        prop_assert_eq!(restrict(&even), raw);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn picard_output_splits_cleanly(seed in any::<u64>(), amp in 1e-4..5e-2f64) {
        let g = grid(8);
        let base = random_band_limited(g, 2, 2, false, &mut ChaCha8Rng::seed_from_u64(seed));
        let mean = base.mean();
        let f = base.map(|v| amp * (v - mean));
        let p = ModelParams::new(1.0, 1.0, 2.0 * PI).unwrap();
        let (u, trace) = solve_kuznetsov(&ProblemSpec::periodic_box(p, f), &FixedPointConfig::default()).unwrap();
        prop_assert_eq!(trace.status, IterationStatus::Converged);
        let scale = u.total().max_abs().max(1e-300);
        prop_assert!(project_steady(&u.periodic).max_abs() <= 1e-12 * scale);
        prop_assert!(u.steady.time_variation() <= 1e-12 * scale);
        prop_assert!(u.steady.mean().abs() <= 1e-12 * scale);
    }

    #[test]
    fn config_round_trips(lambda in 0.01..10.0f64, gamma in -5.0..5.0f64, half in 2usize..10, tol in 1e-14..1e-6f64, iters in 1usize..500) {
        let n = 2 * half;
        let text = format!(
            "[grid]\nn_t = {n}\nn_x = {n}\nbox_len = 6.0\nperiod = 3.0\n\n[model]\nlambda = {lambda:?}\ngamma = {gamma:?}\n\n\
             [problem]\ndomain = \"periodic-box\"\nbc = \"none\"\n\n[problem.forcing]\nkind = \"zero\"\n\n\
             [solver]\ntol = {tol:?}\nmax_iter = {iters}\n"
        );
        let cfg = RunConfig::from_toml_str(&text).unwrap();
        prop_assert_eq!(cfg.model.lambda, lambda);
        let again = RunConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        prop_assert_eq!(again, cfg);
    }
}
