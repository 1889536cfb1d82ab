use multitime::analysis::{alpha_points, AlphaInstance};
use multitime::geometry::{boundary_flux_check, surface_integral, AdaptiveOptions, IntegralOptions};
use multitime::initial::grid_file::{read_grid, sample_grid, write_grid};
use multitime::initial::{antisymmetrize, CoupledFamily, InitialData, SlaterFamily};
use multitime::lorentz::Boost;
use multitime::phases::{collision_rule_violations, decomposition_ledgers};
use multitime::sampling::{random_tanh_surface, ConfigSampler};
use multitime::{
    classify, sort_permutation, Classification, Complex64, Configuration, Event, ModelParams, Permutation, SpinIndex,
    WaveFunction,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn slater(n: usize, phase: f64) -> WaveFunction {
    let d = InitialData::slater(SlaterFamily::bump_layout(n, 1.0), 3).unwrap();
    WaveFunction::new(ModelParams::uniform(n, phase, 3).unwrap(), d).unwrap()
}

fn coupled(phi: f64) -> WaveFunction {
    let d = InitialData::coupled(CoupledFamily::default_layout(phi), 3).unwrap();
    WaveFunction::new(ModelParams::new(2, vec![phi], 3).unwrap(), d).unwrap()
}

fn sampler() -> ConfigSampler {
    ConfigSampler {
        start: (-3.5, 0.5),
        time_offset: 2.0,
        ..Default::default()
    }
}

fn phase_strategy() -> impl Strategy<Value = f64> {
    -3.1f64..=std::f64::consts::PI
}

/// A dyadic rational in `[-4, 4)` with 10 fractional bits, so sums and
/// differences of a few of them are exact.
fn dyadic() -> impl Strategy<Value = f64> {
    (-4096i32..4096).prop_map(|k| f64::from(k) / 1024.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn component_index_round_trips(n in 1usize..=10, raw in any::<u32>()) {
        let idx = 1 + raw as usize % (1 << n);
        let s = SpinIndex::from_component_index(n, idx).unwrap();
        prop_assert_eq!(s.component_index(), idx);
        prop_assert_eq!(SpinIndex::from_linear(n, s.linear()).unwrap(), s);
    }

    #[test]
    fn classification_ignores_a_global_time_shift(seed in any::<u64>(), n in 2usize..=4, shift in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..n - 1);
        for cfg in [sampler().interior(&mut rng, n), sampler().stratum(&mut rng, n, k)] {
            let moved = Configuration::new(cfg.events().iter().map(|e| Event::new(e.t + shift, e.z)).collect());
            prop_assert_eq!(classify(&cfg, TOL), classify(&moved, TOL));
        }
    }

    #[test]
    fn permuted_interior_points_leave_the_ordered_domain(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = sampler().interior(&mut rng, n);
        prop_assert_eq!(classify(&cfg, TOL), Classification::Interior);
        for p in Permutation::all(n) {
            let moved = Configuration::new(p.apply(cfg.events()));
            let c = classify(&moved, TOL);
            if p.is_identity() {
                prop_assert_eq!(c, Classification::Interior);
            } else {
                prop_assert_eq!(c, Classification::OutsideOrderedDomain);
            }
        }
    }

    #[test]
    fn boosts_preserve_classification(seed in any::<u64>(), n in 2usize..=4, beta in -1.5f64..1.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..n - 1);
        let b = Boost::new(beta);
        for cfg in [sampler().interior(&mut rng, n), sampler().stratum(&mut rng, n, k)] {
            prop_assert_eq!(classify(&cfg, 1e-9), classify(&b.apply_configuration(&cfg), 1e-9));
        }
    }

    #[test]
    fn solution_reproduces_the_data_at_time_zero(seed in any::<u64>(), n in 2usize..=4, phi in phase_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = slater(n, phi);
        let cfg = sampler().equal_time(&mut rng, n, 0.0);
        for s in SpinIndex::all(n) {
            prop_assert_eq!(psi.evaluate(&cfg, s).unwrap(), psi.data().value(s, &cfg.positions()));
        }
    }

    #[test]
    fn components_are_constant_along_characteristics(
        start in dyadic(),
        gaps in prop::collection::vec(1024i32..3072, 2),
        offsets in prop::collection::vec(-400i32..400, 3),
        t0 in dyadic(),
        delta in -256i32..256,
        k in 0usize..3,
        raw_s in 0usize..8,
    ) {
        let psi = slater(3, 1.3);
        let s = SpinIndex::from_linear(3, raw_s).unwrap();
        // Gaps of at least 1 and time offsets below 0.4 keep the points
        // space-like and ordered; all coordinates are exact dyadics.
        let mut z = vec![start];
        for g in &gaps {
            z.push(z.last().unwrap() + f64::from(*g) / 1024.0);
        }
        let cfg = Configuration::new(
            z.iter().zip(&offsets).map(|(&z, &o)| Event::new(t0 + f64::from(o) / 1024.0, z)).collect(),
        );
        let delta = f64::from(delta) / 1024.0;
        let e = cfg.events()[k];
        let sign = f64::from(s.sign(k));
        let moved = cfg.with_event(k, Event::new(e.t + delta, e.z - sign * delta));
        let c = |cfg: &Configuration| -> Vec<f64> {
            cfg.events().iter().enumerate().map(|(j, e)| e.z + f64::from(s.sign(j)) * e.t).collect()
        };
        prop_assert_eq!(classify(&cfg, TOL), Classification::Interior);
        prop_assume!(classify(&moved, TOL) == Classification::Interior);
        prop_assert_eq!(c(&cfg)[k], c(&moved)[k]);
        // Without a change in the order of the characteristic values the
        // component does not see the shift at all.
        prop_assume!(sort_permutation(&c(&cfg)) == sort_permutation(&c(&moved)));
        prop_assert_eq!(psi.evaluate(&cfg, s).unwrap(), psi.evaluate(&moved, s).unwrap());
    }

    #[test]
    fn full_evaluation_is_antisymmetric_bitwise(seed in any::<u64>(), n in 2usize..=4, phi in phase_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = slater(n, phi);
        let cfg = sampler().interior(&mut rng, n);
        let base = psi.spinor_full(&cfg).unwrap();
        for p in Permutation::all(n) {
            let moved = Configuration::new(p.apply(cfg.events()));
            let v = psi.spinor_full(&moved).unwrap();
            for s in SpinIndex::all(n) {
                let sp = s.permuted(p.images());
                let expected = if p.sign() == 1 { base[s.linear()] } else { -base[s.linear()] };
                prop_assert_eq!(v[sp.linear()], expected);
            }
        }
    }

    #[test]
    fn density_matches_the_component_modulus(seed in any::<u64>(), n in 2usize..=4, phi in phase_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = slater(n, phi);
        let cfg = sampler().interior(&mut rng, n);
        for s in SpinIndex::all(n) {
            let v = psi.evaluate_unchecked(cfg.events(), s);
            let d = psi.density_unchecked(cfg.events(), s);
            prop_assert!((d - v.norm_sqr()).abs() <= 1e-14 * (1.0 + d));
        }
    }

    #[test]
    fn decompositions_agree_on_admissible_pairs(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = sampler().interior(&mut rng, n);
        for s in SpinIndex::all(n) {
            let c: Vec<f64> = cfg.events().iter().enumerate().map(|(k, e)| e.z + f64::from(s.sign(k)) * e.t).collect();
            let pi = sort_permutation(&c);
            prop_assert_eq!(decomposition_ledgers(s, &pi).len(), 1);
            prop_assert!(collision_rule_violations(&cfg, s).is_empty());
        }
    }

    #[test]
    fn boundary_condition_holds_on_strata(seed in any::<u64>(), n in 2usize..=4, phi in phase_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = slater(n, phi);
        let k = rng.gen_range(0..n - 1);
        let cfg = sampler().stratum(&mut rng, n, k);
        prop_assert!(psi.boundary_check(&cfg).unwrap().max_mismatch() < 1e-12);
        prop_assert!(boundary_flux_check(&psi, &[cfg], TOL).unwrap().max_violation < 1e-12);
    }

    #[test]
    fn alpha_points_follow_boosts(beta in -1.0f64..1.0, a1 in -2.0f64..2.0, gap in 2.5f64..4.0) {
        let inst = AlphaInstance::new(a1, a1 + 1.0, a1 + gap, a1 + gap + 1.0, 1.5).unwrap();
        let moved = inst.boosted(Boost::new(beta));
        // Large boosts can reorder the intervals; such instances are outside the construction.
        prop_assume!(moved.a1 < moved.b1 && moved.b1 < moved.a2 && moved.a2 < moved.b2);
        let sol = alpha_points(&inst).unwrap();
        let boosted = alpha_points(&moved).unwrap();
        let b = Boost::new(beta);
        for (e, f) in sol.points.events().iter().zip(boosted.points.events()) {
            let g = b.apply(*e);
            prop_assert!((g.t - f.t).abs() < 1e-9 && (g.z - f.z).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn surface_integrals_are_positive(seed in any::<u64>(), phi in phase_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = random_tanh_surface(&mut rng, 0.7);
        let opts = IntegralOptions {
            quadrature: AdaptiveOptions { rel_tol: 1e-4, ..Default::default() },
            half_width: None,
        };
        let v = surface_integral(&coupled(phi), &sigma, &opts).unwrap().value;
        prop_assert!(v > 0.0);
        let zero = InitialData::custom(2, 3, 1.0, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        let psi = WaveFunction::new(ModelParams::new(2, vec![phi], 3).unwrap(), zero).unwrap();
        prop_assert_eq!(surface_integral(&psi, &sigma, &opts).unwrap().value, 0.0);
    }

    #[test]
    fn antisymmetrizing_twice_changes_nothing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: f64 = rng.gen_range(-1.0..1.0);
        let raw = InitialData::custom(3, 2, 3.0, move |s, z| {
            Complex64::new(z[0] * (1.0 + a * z[1]), f64::from(s.sign(2)) * z[2] * z[0])
        })
        .unwrap();
        let once = antisymmetrize(&raw);
        let twice = antisymmetrize(&once);
        for _ in 0..20 {
            let z: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            for s in SpinIndex::all(3) {
                prop_assert_eq!(once.value(s, &z), twice.value(s, &z));
            }
        }
    }

    #[test]
    fn grid_files_round_trip(points in 5usize..20, radius in 2.0f64..5.0) {
        let data = InitialData::coupled(CoupledFamily::default_layout(0.4), 3).unwrap();
        let grid = sample_grid(&data, radius, points).unwrap();
        let mut buf = Vec::new();
        write_grid(&grid, &mut buf).unwrap();
        let back = read_grid(buf.as_slice()).unwrap();
        prop_assert_eq!(back.points(), grid.points());
        prop_assert_eq!(back.radius(), grid.radius());
        prop_assert_eq!(back.nodes(), grid.nodes());
        for node in grid.nodes() {
            for s in SpinIndex::all(2) {
                prop_assert_eq!(back.node_value(s, node), grid.node_value(s, node));
            }
        }
    }
}
