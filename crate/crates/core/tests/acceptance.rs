//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line (written straight to stdout so it survives capture)
//! and then asserts the verdict.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use multitime::analysis::{
    alpha_contradiction_demo, alpha_points, delta_bc_check, heaviside_component, schmidt_rank, AlphaInstance,
    AlphaProfile, GridSpec,
};
use multitime::field::SpinorField;
use multitime::geometry::{boundary_flux_check, surface_integral, AdaptiveOptions, Hypersurface, IntegralOptions};
use multitime::initial::{CoupledFamily, InitialData, ProductFamily, SlaterFamily};
use multitime::lorentz::{boost_wavefunction, Boost};
use multitime::phases::{bubble_ledger, collision_rule_violations, decomposition_ledgers};
use multitime::sampling::{random_phase, random_tanh_surface, ConfigSampler};
use multitime::trace::trace_evaluate;
use multitime::{
    sort_permutation, Complex64, Configuration, ModelParams, Permutation, SpinIndex, WaveFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, title: &str, pass: bool, detail: String) {
    let line = format!(
        "acceptance {id:>2} {title}: {} ({detail})\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(pass, "{}", line.trim_end());
}

fn coupled(phi: f64) -> WaveFunction {
    let d = InitialData::coupled(CoupledFamily::default_layout(phi), 3).unwrap();
    WaveFunction::new(ModelParams::new(2, vec![phi], 3).unwrap(), d).unwrap()
}

fn slater(n: usize, phases: Vec<f64>, spacing: f64) -> WaveFunction {
    let d = InitialData::slater(SlaterFamily::bump_layout(n, spacing), 3).unwrap();
    WaveFunction::new(ModelParams::new(n, phases, 3).unwrap(), d).unwrap()
}

#[test]
fn criterion_01_exact_solution_matches_the_trace_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let phases = vec![0.83, -1.9];
    let sampler = ConfigSampler {
        start: (-4.0, 0.0),
        gap: (0.2, 2.0),
        time_offset: 3.0,
        ..Default::default()
    };

    // Oracle agreement for every component, on data with all components live.
    let psi = slater(3, phases.clone(), 1.0);
    let points = 10_000;
    let mut worst = 0.0f64;
    let mut nonzero = 0usize;
    let mut with_collisions = 0usize;
    for _ in 0..points {
        let cfg = sampler.interior(&mut rng, 3);
        for s in SpinIndex::all(3) {
            let direct = psi.evaluate(&cfg, s).unwrap();
            let traced = trace_evaluate(&psi, &cfg, s).unwrap();
            worst = worst.max((direct - traced.value).norm() / direct.norm().max(1.0));
            if direct.norm() > 1e-6 {
                nonzero += 1;
                if traced.encounters > 0 {
                    with_collisions += 1;
                }
            }
        }
    }

    // Structure of the product example: the all-plus component is the data
    // at the characteristic values, and +-+ past one collision picks up φ_1.
    let fam = ProductFamily::entangle_layout(3);
    let d = InitialData::product(fam.clone(), 3).unwrap();
    let prod = WaveFunction::new(ModelParams::new(3, phases.clone(), 3).unwrap(), d).unwrap();
    let pmp: SpinIndex = "+-+".parse().unwrap();
    let mut structural = 0.0f64;
    let mut crossed = 0usize;
    for i in 0..2000 {
        let cfg = sampler.interior(&mut rng, 3);
        let e = cfg.events();
        let c_plus: Vec<f64> = e.iter().map(|x| x.z + x.t).collect();
        let all_plus = prod.evaluate(&cfg, SpinIndex::all_plus(3)).unwrap();
        structural = structural.max((all_plus - prod.data().value(SpinIndex::all_plus(3), &c_plus)).norm());
        // Place a collision of particles 1 and 2 only.
        let t = 0.3 + 2.0 * (i as f64 / 2000.0);
        let z1 = rng.gen_range(-4.0..2.0);
        let z2 = z1 + rng.gen_range(0.05..2.0 * t);
        let z3 = z2 + 2.0 * t + rng.gen_range(0.1..3.0);
        let cfg = Configuration::equal_time(t, &[z1, z2, z3]);
        let c = [z1 + t, z2 - t, z3 + t];
        if c[0] > c[1] && c[1] < c[2] && c[0] < c[2] {
            crossed += 1;
            let got = prod.evaluate(&cfg, pmp).unwrap();
            let want = Complex64::from_polar(1.0, phases[0])
                * prod.data().value("-++".parse().unwrap(), &[c[1], c[0], c[2]]);
            structural = structural.max((got - want).norm());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-12 && structural <= 1e-12 && crossed > 100 && elapsed < 10.0;
    verdict(
        1,
        "exact solution vs trace oracle",
        pass,
        format!(
            "{points} points x 8 components, max rel diff {worst:.2e}, {nonzero} non-zero values, \
{with_collisions} with collisions, structural diff {structural:.2e} over {crossed} crossed points, {elapsed:.2} s"
        ),
    );
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    (max - min) / max.abs()
}

#[test]
fn criterion_02_probability_is_conserved_across_hypersurfaces() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let surfaces: Vec<Hypersurface> = (0..20).map(|_| random_tanh_surface(&mut rng, 0.7)).collect();
    let opts = |rel_tol: f64| IntegralOptions {
        quadrature: AdaptiveOptions {
            rel_tol,
            ..Default::default()
        },
        half_width: None,
    };
    let two = coupled(1.1);
    let d = InitialData::slater(SlaterFamily::compact_layout(3, 2.0), 3).unwrap();
    let three = WaveFunction::new(ModelParams::new(3, vec![0.6, -2.2], 3).unwrap(), d).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    // The cell error estimate compares orders 6 and 4 and overstates the
    // order-6 error by orders of magnitude, so 1e-6 leaves ample margin.
    for (name, field, tol) in [("N=2", &two, 1e-8), ("N=3", &three, 1e-6)] {
        let opts = opts(tol);
        let values: Vec<f64> = surfaces
            .iter()
            .map(|s| surface_integral(&field, s, &opts).unwrap().value)
            .collect();
        let sp = spread(&values);
        pass &= sp < 1e-6;
        details.push(format!("{name} spread {sp:.2e} around {:.6}", values[0]));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 120.0;
    verdict(
        2,
        "probability conservation",
        pass,
        format!("20 surfaces, |t'| <= 0.7, {}, {elapsed:.1} s", details.join(", ")),
    );
}

#[test]
fn criterion_03_boundary_flux_vanishes_for_valid_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let sampler = ConfigSampler {
        start: (-2.5, 1.0),
        time_offset: 1.5,
        ..Default::default()
    };
    // Away from t = 0 the closed form meets the boundary relation whatever
    // the data, so half of the points sit on the initial surface.
    let initial = ConfigSampler {
        time_offset: 0.0,
        ..sampler.clone()
    };
    let samples2: Vec<Configuration> = (0..2000)
        .map(|i| if i % 2 == 0 { initial.stratum(&mut rng, 2, 0) } else { sampler.stratum(&mut rng, 2, 0) })
        .collect();
    let samples3: Vec<Configuration> = (0..2000)
        .map(|_| {
            let k = rng.gen_range(0..2);
            sampler.stratum(&mut rng, 3, k)
        })
        .collect();
    let good2 = boundary_flux_check(&coupled(0.9), &samples2, 1e-12).unwrap().max_violation;
    let good3 = boundary_flux_check(&slater(3, vec![0.4, 2.5], 1.0), &samples3, 1e-12)
        .unwrap()
        .max_violation;
    // The -+ component is scaled down, so no phase relates the two mixed
    // components at the coincidence line.
    let fam = CoupledFamily::default_layout(0.9);
    let d = InitialData::custom(2, 3, 2.5, move |s, z| {
        let v = fam.value(s, z, 4);
        if s.sign(0) < 0 && s.sign(1) > 0 {
            v * 0.3
        } else {
            v
        }
    })
    .unwrap();
    let broken = WaveFunction::new(ModelParams::new(2, vec![0.9], 3).unwrap(), d).unwrap();
    let bad = boundary_flux_check(&broken, &samples2, 1e-12).unwrap().max_violation;
    let pass = good2 < 1e-9 && good3 < 1e-9 && bad > 1e-3;
    verdict(
        3,
        "boundary flux",
        pass,
        format!("valid N=2 {good2:.2e}, valid N=3 {good3:.2e}, phase-broken {bad:.2e}"),
    );
}

#[test]
fn criterion_04_lorentz_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let phi = 1.3;
    let psi = coupled(phi);
    let cis = Complex64::from_polar(1.0, phi);
    let sampler = ConfigSampler {
        start: (-2.5, 1.0),
        time_offset: 1.5,
        ..Default::default()
    };
    let opts = IntegralOptions::default();
    let mut worst_bc = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut betas = Vec::new();
    for _ in 0..10 {
        let beta = rng.gen_range(-1.0..=1.0);
        betas.push(beta);
        let b = Boost::new(beta);
        let boosted = boost_wavefunction(b, &psi);
        let pm: SpinIndex = "+-".parse().unwrap();
        let mp: SpinIndex = "-+".parse().unwrap();
        for _ in 0..200 {
            let p = b.apply_configuration(&sampler.stratum(&mut rng, 2, 0));
            let v = boosted.spinor(&p).unwrap();
            let scale = v[pm.linear()].norm().max(1.0);
            worst_bc = worst_bc.max((v[pm.linear()] - cis * v[mp.linear()]).norm() / scale);
        }
        let sigma = random_tanh_surface(&mut rng, 0.3);
        let image = Hypersurface::boosted(sigma.clone(), beta);
        let before = surface_integral(&psi, &sigma, &opts).unwrap().value;
        let after = surface_integral(&boosted, &image, &opts).unwrap().value;
        worst_norm = worst_norm.max((after - before).abs() / before);
    }
    let pass = worst_bc < 1e-9 && worst_norm < 1e-6;
    verdict(
        4,
        "Lorentz invariance",
        pass,
        format!(
            "10 rapidities in [{:.2}, {:.2}], boundary mismatch {worst_bc:.2e}, norm deviation {worst_norm:.2e}",
            betas.iter().copied().fold(f64::MAX, f64::min),
            betas.iter().copied().fold(f64::MIN, f64::max)
        ),
    );
}

#[test]
fn criterion_05_phase_is_independent_of_the_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let sampler = ConfigSampler::default();
    let mut disagreements = 0usize;
    let mut sign_violations = 0usize;
    let mut collisions = 0usize;
    let samples = 100_000;
    for i in 0..samples {
        let n = 2 + i % 3;
        let cfg = sampler.interior(&mut rng, n);
        let s = SpinIndex::from_linear(n, rng.gen_range(0..1usize << n)).unwrap();
        let c: Vec<f64> = cfg.events().iter().enumerate().map(|(k, e)| e.z + f64::from(s.sign(k)) * e.t).collect();
        let pi: Permutation = sort_permutation(&c);
        collisions += pi.inversions().len();
        let ledgers = decomposition_ledgers(s, &pi);
        if ledgers.len() != 1 || ledgers.first() != Some(&bubble_ledger(s, &pi)) {
            disagreements += 1;
        }
        sign_violations += collision_rule_violations(&cfg, s).len();
    }
    let pass = disagreements == 0 && sign_violations == 0 && collisions > 0;
    verdict(
        5,
        "phase well-definedness",
        pass,
        format!(
            "{samples} admissible samples with N in 2..=4, {collisions} collisions, \
{disagreements} order disagreements, {sign_violations} sign-rule violations"
        ),
    );
}

/// Least-squares slope of `log r` against `log h`.
fn observed_order(h: &[f64], r: &[f64]) -> f64 {
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = r.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[test]
fn criterion_06_pde_residual_converges() {
    // The exact solution is a function of the characteristic values only, so
    // the central-difference truncation error cancels identically and what
    // remains is rounding, which grows like 1/h. See the analysis in the
    // README; this criterion is expected to fail.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let psi = slater(3, vec![0.7, -1.4], 1.0);
    let sampler = ConfigSampler {
        start: (-3.0, 0.0),
        gap: (0.5, 2.0),
        time_ratio: 0.5,
        time_offset: 1.0,
    };
    let hs = [1e-2, 1e-3, 1e-4];
    let mut orders = Vec::new();
    let mut worst_residual = 0.0f64;
    let mut points = 0;
    while points < 100 {
        let cfg = sampler.interior(&mut rng, 3);
        let s = SpinIndex::from_linear(3, rng.gen_range(0..8)).unwrap();
        if psi.evaluate(&cfg, s).unwrap().norm() < 1e-3 {
            continue;
        }
        let Ok(r) = hs.iter().map(|&h| psi.residual(&cfg, s, h)).collect::<Result<Vec<_>, _>>() else {
            continue;
        };
        worst_residual = worst_residual.max(r.iter().copied().fold(0.0, f64::max));
        orders.push(observed_order(&hs, &r));
        points += 1;
    }
    orders.sort_by(f64::total_cmp);
    let median = orders[orders.len() / 2];
    let min = orders[0];
    let pass = min >= 1.7;
    verdict(
        6,
        "PDE residual order",
        pass,
        format!(
            "100 points, observed order min {min:.2} median {median:.2}, largest residual {worst_residual:.2e} \
(rounding only; truncation error is identically zero)"
        ),
    );
}

#[test]
fn criterion_07_antisymmetry_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let sampler = ConfigSampler {
        start: (-3.0, 0.0),
        time_offset: 2.0,
        ..Default::default()
    };
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for n in [2, 3, 4] {
        let phases: Vec<f64> = (0..n - 1).map(|_| random_phase(&mut rng)).collect();
        let psi = slater(n, phases, 1.0);
        for _ in 0..200 {
            let cfg = sampler.interior(&mut rng, n);
            for sigma in Permutation::all(n) {
                let moved = Configuration::new(sigma.images().iter().map(|&j| cfg.events()[j]).collect());
                for s in SpinIndex::all(n) {
                    let lhs = psi.evaluate_full(&moved, s.permuted(sigma.images())).unwrap();
                    let base = psi.evaluate_full(&cfg, s).unwrap();
                    let rhs = if sigma.sign() > 0 { base } else { -base };
                    checked += 1;
                    if lhs.re.to_bits() != rhs.re.to_bits() || lhs.im.to_bits() != rhs.im.to_bits() {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    verdict(
        7,
        "antisymmetry",
        mismatches == 0,
        format!("{checked} permuted evaluations for N in 2..=4, {mismatches} bitwise mismatches"),
    );
}

#[test]
fn criterion_08_interaction_creates_entanglement() {
    let make = |phi: f64, n: usize| {
        let d = InitialData::product(ProductFamily::entangle_layout(n), 2).unwrap();
        WaveFunction::new(ModelParams::uniform(n, phi, 2).unwrap(), d).unwrap()
    };
    let grid = GridSpec::new(-9.0, 9.0, 120);
    let times = [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0];
    let free = make(PI, 2);
    let free_ranks: Vec<usize> = times
        .iter()
        .map(|&t| schmidt_rank(&free, t, &grid, 1e-8).unwrap().rank)
        .collect();
    let inter = make(PI / 2.0, 2);
    let inter_ranks: Vec<usize> = times
        .iter()
        .map(|&t| schmidt_rank(&inter, t, &grid, 1e-8).unwrap().rank)
        .collect();
    // The interleaved lobes have fully passed each other by t = 1.9.
    let after: Vec<usize> = times
        .iter()
        .zip(&inter_ranks)
        .filter(|(t, _)| **t >= 2.0)
        .map(|(_, r)| *r)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = 0.0f64;
    for n in [2, 3] {
        let phi = PI / 2.0;
        let psi = make(phi, n);
        let fam = ProductFamily::entangle_layout(n);
        let s: SpinIndex = format!("+-{}", "+".repeat(n - 2)).parse().unwrap();
        for _ in 0..5000 {
            let t = rng.gen_range(0.0..3.0);
            let mut z = vec![rng.gen_range(-5.0..2.0)];
            z.push(z[0] + rng.gen_range(0.01..6.0));
            if n == 3 {
                z.push((z[1] + rng.gen_range(0.01..1.0f64)).max(rng.gen_range(4.5..7.5) - t));
            }
            let v = psi.evaluate(&Configuration::equal_time(t, &z), s).unwrap();
            worst = worst.max((v - heaviside_component(&fam, phi, 2, t, &z)).norm());
        }
    }
    let pass = free_ranks.iter().all(|&r| r == 2) && inter_ranks[0] == 2 && after.iter().all(|&r| r > 2) && worst < 1e-12;
    verdict(
        8,
        "interaction and entanglement",
        pass,
        format!(
            "ranks at t = {times:?}: phi=pi {free_ranks:?}, phi=pi/2 {inter_ranks:?}; closed form max diff {worst:.2e}"
        ),
    );
}

#[test]
fn criterion_09_effective_delta_relation() {
    let vs: Vec<f64> = (0..60).map(|i| -2.5 + 0.085 * i as f64).collect();
    let mut rel = 0.0f64;
    let mut eq = 0.0f64;
    for phi in [PI / 2.0, PI, -0.8] {
        let psi = coupled(phi);
        for t in [0.0, 0.4, 1.1, 2.0] {
            let r = delta_bc_check(&psi, t, &vs, 1e-4).unwrap();
            rel = rel.max(r.max_relation_residual);
            eq = eq.max(r.max_equal_sign);
        }
    }
    verdict(
        9,
        "single-time delta relation",
        rel < 1e-6 && eq < 1e-9,
        format!("jump relation residual {rel:.2e}, equal-sign components at u=0 {eq:.2e}"),
    );
}

#[test]
fn criterion_10_minimum_distance_domain() {
    let start = Instant::now();
    let inst = AlphaInstance::new(1.0, 2.0, 5.0, 6.0, 6f64.sqrt()).unwrap();
    let sol = alpha_points(&inst).unwrap();
    let p = sol.points;
    let expected = [(p.y1, 2.0), (p.t1, 1.0), (p.y2, 4.5), (p.t2, 0.5), (p.x1, 2.5), (p.s1, 0.5), (p.x2, 5.0), (p.s2, 1.0)];
    let point_err = expected.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let residual = sol.residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let lin = AlphaProfile::Linear;
    let conflict = alpha_contradiction_demo(|a, b| lin.value(a, b), 0.4, &inst).unwrap().conflict;
    let cst = AlphaProfile::Constant { value: 1.5 };
    let none = alpha_contradiction_demo(|a, b| cst.value(a, b), 0.4, &inst).unwrap().conflict;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = point_err < 1e-12 && residual < 1e-12 && conflict > 0.0 && none == 0.0 && elapsed < 1.0;
    verdict(
        10,
        "minimum-distance domain",
        pass,
        format!(
            "point error {point_err:.1e}, residual {residual:.1e}, xi {}, conflict {conflict} (constant data {none}), {elapsed:.3} s",
            p.xi
        ),
    );
}
