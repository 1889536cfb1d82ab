//! `verify`: every pointwise and integral check on one model instance.

use anyhow::Result;
use multitime::geometry::{boundary_flux_check, surface_integral};
use multitime::initial::{validate, ValidateOptions};
use multitime::lorentz::{boost_wavefunction, Boost};
use multitime::sampling::{random_tanh_surface, ConfigSampler};
use multitime::trace::trace_evaluate;
use multitime::{Configuration, Event, Hypersurface, SpinIndex, WaveFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::commands::{boundary_mismatch, integral_options, relative_spread, stratum_samples, Outcome};
use crate::config::{CommonArgs, Family, RunConfig};
use crate::output::OutDir;

#[derive(Debug, Serialize)]
struct Suite {
    name: &'static str,
    value: f64,
    threshold: f64,
    pass: bool,
}

impl Suite {
    fn new(name: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            name,
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

const RAPIDITIES: [f64; 3] = [-0.7, 0.3, 1.1];

fn interior(rng: &mut ChaCha8Rng, n: usize, count: usize, spread: f64) -> Vec<Configuration> {
    let s = ConfigSampler {
        start: (-spread, spread * 0.5),
        time_offset: 2.0,
        ..Default::default()
    };
    (0..count).map(|_| s.interior(rng, n)).collect()
}

/// Largest `|ψ_{s'}(x') + ψ_s(x)|` where `x'` swaps two neighbouring
/// particles of `x` and `s'` swaps their spins.
fn antisymmetry_defect(psi: &WaveFunction, configs: &[Configuration]) -> Result<f64> {
    let n = psi.n_particles();
    let mut worst = 0.0f64;
    for (i, c) in configs.iter().enumerate() {
        let k = i % (n - 1);
        let mut events: Vec<Event> = c.events().to_vec();
        events.swap(k, k + 1);
        let swapped = Configuration::new(events);
        let a = psi.spinor_full(c)?;
        let b = psi.spinor_full(&swapped)?;
        for s in SpinIndex::all(n) {
            worst = worst.max((b[s.swapped(k).linear()] + a[s.linear()]).norm());
        }
    }
    Ok(worst)
}

pub fn verify(args: &CommonArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve(args)?;
    let tol = cfg.tol_or(1e-9);
    let psi = cfg.wavefunction(Family::Bump)?;
    let params = cfg.params()?;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = psi.data().support_radius();
    let mut suites = Vec::new();

    let report = validate(
        psi.data(),
        &params,
        &ValidateOptions {
            tol,
            seed: cfg.seed,
            ..Default::default()
        },
    )?;
    suites.push(Suite::new("initial-data", report.failures.len() as f64, 0.0));

    let strata = stratum_samples(&mut rng, n, cfg.samples, radius);
    suites.push(Suite::new("boundary", boundary_mismatch(&psi, &cfg.phases, &strata)?, tol));
    let configs: Vec<Configuration> = strata.iter().map(|(_, c)| c.clone()).collect();
    suites.push(Suite::new("flux", boundary_flux_check(&psi, &configs, 1e-9)?.max_violation, tol));

    let points = interior(&mut rng, n, cfg.samples, radius);
    let mut trace = 0.0f64;
    for c in &points {
        for s in SpinIndex::all(n) {
            trace = trace.max((trace_evaluate(&psi, c, s)?.value - psi.evaluate(c, s)?).norm());
        }
    }
    suites.push(Suite::new("trace-oracle", trace, tol));
    suites.push(Suite::new("antisymmetry", antisymmetry_defect(&psi, &points)?, tol));

    let sampler = ConfigSampler {
        start: (-radius, radius * 0.5),
        ..Default::default()
    };
    let mut reproduction = 0.0f64;
    for _ in 0..cfg.samples {
        let c = sampler.equal_time(&mut rng, n, 0.0);
        let z = c.positions();
        for s in SpinIndex::all(n) {
            reproduction = reproduction.max((psi.evaluate(&c, s)? - psi.data().value(s, &z)).norm());
        }
    }
    suites.push(Suite::new("initial-reproduction", reproduction, tol));

    let opts = integral_options(&cfg);
    let mut surfaces = vec![Hypersurface::flat(0.0)];
    surfaces.extend((0..cfg.surfaces).map(|_| random_tanh_surface(&mut rng, 0.7)));
    let norms = surfaces
        .iter()
        .map(|s| Ok(surface_integral(&psi, s, &opts)?.value))
        .collect::<Result<Vec<f64>>>()?;
    suites.push(Suite::new("conservation", relative_spread(&norms), cfg.norm_tol));

    let mut boosted = vec![norms[0]];
    for beta in RAPIDITIES {
        let field = boost_wavefunction(Boost::new(beta), &psi);
        let image = Hypersurface::boosted(Hypersurface::flat(0.0), beta);
        boosted.push(surface_integral(&field, &image, &opts)?.value);
    }
    suites.push(Suite::new("lorentz", relative_spread(&boosted), cfg.norm_tol));

    let pass = suites.iter().all(|s| s.pass);
    let summary = json!({
        "command": "verify",
        "n": n,
        "phases": cfg.phases,
        "family": cfg.family_or(Family::Bump),
        "seed": cfg.seed,
        "samples": cfg.samples,
        "suites": suites,
        "norms": norms,
        "boosted_norms": boosted,
        "rapidities": RAPIDITIES,
        "pass": pass,
    });
    OutDir::create(&cfg.out)?.write_json("verify.json", &summary)?;
    Ok(Outcome { pass, summary })
}
