//! `solve`, `boost`, `entangle`, `delta-check` and `alpha-demo`.

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use multitime::analysis::{
    alpha_bc_uniqueness_note, alpha_contradiction_demo, delta_bc_check, schmidt_rank, AlphaInstance, AlphaProfile,
    GridSpec,
};
use multitime::geometry::{boundary_flux_check, surface_integral, AdaptiveOptions};
use multitime::lorentz::{boost_wavefunction, Boost, BoostedField};
use multitime::sampling::ConfigSampler;
use multitime::{Complex64, Configuration, Event, Hypersurface, IntegralOptions, SpinIndex, SpinorField, WaveFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{CommonArgs, Family, RunConfig};
use crate::output::OutDir;

/// Result of a command: the summary printed to stdout and whether every
/// check stayed within tolerance.
pub struct Outcome {
    pub pass: bool,
    pub summary: Value,
}

const MAX_ROWS: usize = 2_000_000;

pub fn integral_options(cfg: &RunConfig) -> IntegralOptions {
    IntegralOptions {
        quadrature: AdaptiveOptions {
            rel_tol: cfg.quad_tol(),
            ..Default::default()
        },
        half_width: None,
    }
}

pub fn relative_spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::MIN, f64::max);
    let lo = values.iter().copied().fold(f64::MAX, f64::min);
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        (hi - lo) / scale
    }
}

fn spin_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = (1..=n).flat_map(|k| [format!("t{k}"), format!("z{k}")]).collect();
    for s in SpinIndex::all(n) {
        h.push(format!("re{s}"));
        h.push(format!("im{s}"));
    }
    h
}

/// Strictly increasing index tuples `i_1 < … < i_N` below `points`.
fn ordered_tuples(n: usize, points: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    if n > points {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < points - n + k {
                cur[k] += 1;
                for j in k + 1..n {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn row(cfg: &Configuration, psi: &[Complex64]) -> Vec<f64> {
    let mut r: Vec<f64> = cfg.events().iter().flat_map(|e| [e.t, e.z]).collect();
    r.extend(psi.iter().flat_map(|v| [v.re, v.im]));
    r
}

/// Components of the boosted solution on a grid. Without a surface every
/// requested time gives one equal-time slice; with one, particle `k` sits at
/// `t = t_Σ'(z_k)` on the boosted image `Σ'` of the surface.
pub fn solve(args: &CommonArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve(args)?;
    let psi = cfg.wavefunction(Family::Bump)?;
    let grid = cfg.grid_or(GridSpec::new(-6.0, 6.0, 60));
    let field = boost_wavefunction(Boost::new(cfg.boost), &psi);
    let image = Hypersurface::boosted(cfg.surface(), cfg.boost);
    let nodes = grid.first();
    let tuples = ordered_tuples(cfg.n, nodes.len());
    let slices = if cfg.surface.is_some() { 1 } else { cfg.times.len() };
    if tuples.len() * slices > MAX_ROWS {
        bail!("{} rows requested, limit {MAX_ROWS}; use a coarser grid", tuples.len() * slices);
    }
    let mut rows = Vec::with_capacity(tuples.len() * slices);
    for slice in 0..slices {
        for idx in &tuples {
            let events = idx
                .iter()
                .map(|&i| {
                    let z = nodes[i];
                    let t = if cfg.surface.is_some() { image.time(z) } else { cfg.times[slice] };
                    Event::new(t, z)
                })
                .collect();
            let c = Configuration::new(events);
            rows.push(row(&c, &field.spinor(&c)?));
        }
    }
    let out = OutDir::create(&cfg.out)?;
    let csv = out.write_csv("solve.csv", &spin_header(cfg.n), &rows)?;
    let norm = surface_integral(&field, &image, &integral_options(&cfg))?;
    let summary = json!({
        "command": "solve",
        "n": cfg.n,
        "phases": cfg.phases,
        "family": cfg.family_or(Family::Bump),
        "boost": cfg.boost,
        "surface": image,
        "rows": rows.len(),
        "csv": csv,
        "norm": norm.value,
        "norm_error_estimate": norm.error_estimate,
    });
    out.write_json("solve.json", &summary)?;
    Ok(Outcome { pass: true, summary })
}

/// Largest `|ψ'_{…+-…} - e^{iφ} ψ'_{…-+…}|` of a field at stratum points.
pub fn boundary_mismatch<F: SpinorField>(field: &F, phases: &[f64], samples: &[(usize, Configuration)]) -> Result<f64> {
    let n = field.n_particles();
    let mut worst = 0.0f64;
    for (k, c) in samples {
        let v = field.spinor(c)?;
        let cis = Complex64::from_polar(1.0, phases[*k]);
        for s in SpinIndex::all(n).filter(|s| s.is_plus(*k) && !s.is_plus(*k + 1)) {
            worst = worst.max((v[s.linear()] - cis * v[s.swapped(*k).linear()]).norm());
        }
    }
    Ok(worst)
}

/// Stratum points, half of them on `t = 0` where the data enter.
pub fn stratum_samples(rng: &mut ChaCha8Rng, n: usize, count: usize, spread: f64) -> Vec<(usize, Configuration)> {
    let moving = ConfigSampler {
        start: (-spread, spread * 0.5),
        time_offset: 1.5,
        ..Default::default()
    };
    let initial = ConfigSampler {
        time_offset: 0.0,
        ..moving.clone()
    };
    (0..count)
        .map(|i| {
            let k = i % (n - 1);
            let s = if i % 2 == 0 { &initial } else { &moving };
            (k, s.stratum(rng, n, k))
        })
        .collect()
}

/// Boundary condition and norm of the boosted solution.
pub fn boost(args: &CommonArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve(args)?;
    let tol = cfg.tol_or(1e-9);
    let psi = cfg.wavefunction(Family::Bump)?;
    let b = Boost::new(cfg.boost);
    let field: BoostedField<&WaveFunction> = boost_wavefunction(b, &psi);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = psi.data().support_radius();
    let samples: Vec<(usize, Configuration)> = stratum_samples(&mut rng, cfg.n, cfg.samples, radius)
        .into_iter()
        .map(|(k, c)| (k, b.apply_configuration(&c)))
        .collect();
    let mismatch = boundary_mismatch(&field, &cfg.phases, &samples)?;
    let configs: Vec<Configuration> = samples.iter().map(|(_, c)| c.clone()).collect();
    let flux = boundary_flux_check(&field, &configs, 1e-9)?.max_violation;
    let opts = integral_options(&cfg);
    let sigma = cfg.surface();
    let before = surface_integral(&psi, &sigma, &opts)?.value;
    let image = Hypersurface::boosted(sigma.clone(), cfg.boost);
    let after = surface_integral(&field, &image, &opts)?.value;
    let deviation = relative_spread(&[before, after]);
    let pass = mismatch <= tol && flux <= tol && deviation <= cfg.norm_tol;
    let summary = json!({
        "command": "boost",
        "n": cfg.n,
        "phases": cfg.phases,
        "rapidity": cfg.boost,
        "velocity": b.velocity(),
        "samples": samples.len(),
        "boundary_mismatch": mismatch,
        "flux_violation": flux,
        "tol": tol,
        "surface": sigma,
        "norm": before,
        "boosted_norm": after,
        "norm_deviation": deviation,
        "norm_tol": cfg.norm_tol,
        "pass": pass,
    });
    OutDir::create(&cfg.out)?.write_json("boost.json", &summary)?;
    Ok(Outcome { pass, summary })
}

/// Schmidt ranks of a two-particle state at the requested times.
pub fn entangle(args: &CommonArgs, svd_tol: f64) -> Result<Outcome> {
    let cfg = RunConfig::resolve(args)?;
    if cfg.n != 2 {
        bail!("entangle needs --n 2");
    }
    let psi = cfg.wavefunction(Family::Product)?;
    let grid = cfg.grid_or(GridSpec::new(-9.0, 9.0, 120));
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &t in &cfg.times {
        let r = schmidt_rank(&psi, t, &grid, svd_tol)?;
        for (i, s) in r.singular_values.iter().enumerate() {
            rows.push(vec![t, i as f64, *s]);
        }
        reports.push(json!({ "t": t, "rank": r.rank, "leading": &r.singular_values[..r.singular_values.len().min(8)] }));
    }
    let out = OutDir::create(&cfg.out)?;
    let csv = out.write_csv("entangle.csv", &["t".into(), "index".into(), "sigma".into()], &rows)?;
    let summary = json!({
        "command": "entangle",
        "phases": cfg.phases,
        "family": cfg.family_or(Family::Product),
        "grid": grid,
        "svd_tol": svd_tol,
        "free": psi.is_free(),
        "times": reports,
        "csv": csv,
    });
    out.write_json("entangle.json", &summary)?;
    Ok(Outcome { pass: true, summary })
}

/// One-sided limits across `u = 0` in the single-time picture.
pub fn delta_check(args: &CommonArgs, eps: Option<f64>) -> Result<Outcome> {
    let mut cfg = RunConfig::resolve(args)?;
    if let Some(e) = eps {
        cfg.eps = e;
    }
    if cfg.n != 2 {
        bail!("delta-check needs --n 2");
    }
    let tol = cfg.tol_or(1e-6);
    let psi = cfg.wavefunction(Family::Coupled)?;
    let grid = cfg.grid_or(GridSpec::new(-3.0, 3.0, 40));
    let vs = grid.first();
    let mut worst_relation = 0.0f64;
    let mut worst_equal = 0.0f64;
    let mut rows = Vec::new();
    let mut per_time = Vec::new();
    for &t in &cfg.times {
        let r = delta_bc_check(&psi, t, &vs, cfg.eps)?;
        worst_relation = worst_relation.max(r.max_relation_residual);
        worst_equal = worst_equal.max(r.max_equal_sign);
        for s in &r.samples {
            let mut row = vec![t, s.v];
            row.extend(s.left.iter().chain(&s.right).flat_map(|c| [c.re, c.im]));
            row.extend([s.chi2_residual, s.chi3_residual]);
            rows.push(row);
        }
        per_time.push(json!({
            "t": t,
            "max_relation_residual": r.max_relation_residual,
            "max_equal_sign": r.max_equal_sign,
        }));
    }
    let mut header: Vec<String> = vec!["t".into(), "v".into()];
    for side in ["left", "right"] {
        for i in 1..=4 {
            header.push(format!("re_chi{i}_{side}"));
            header.push(format!("im_chi{i}_{side}"));
        }
    }
    header.extend(["chi2_residual".into(), "chi3_residual".into()]);
    let pass = worst_relation <= tol && worst_equal <= tol;
    let out = OutDir::create(&cfg.out)?;
    let csv = out.write_csv("delta.csv", &header, &rows)?;
    let summary = json!({
        "command": "delta-check",
        "phi": cfg.phases[0],
        "family": cfg.family_or(Family::Coupled),
        "eps": cfg.eps,
        "tol": tol,
        "max_relation_residual": worst_relation,
        "max_equal_sign": worst_equal,
        "times": per_time,
        "csv": csv,
        "pass": pass,
    });
    out.write_json("delta.json", &summary)?;
    Ok(Outcome { pass, summary })
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ProfileKind {
    Linear,
    Constant,
    Zero,
}

#[derive(Args, Debug, Default)]
pub struct AlphaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b2: Option<f64>,
    /// Squared minimum distance `α²`.
    #[arg(long)]
    pub alpha_sq: Option<f64>,
    /// Shape of `g_{-+}` in the contradiction demo.
    #[arg(long, value_enum)]
    pub profile: Option<ProfileKind>,
    /// Value of the constant profile.
    #[arg(long, default_value_t = 1.0)]
    pub value: f64,
}

/// Points of the minimum-distance construction and the two conflicting
/// evaluation chains.
pub fn alpha_demo(args: &CommonArgs, a: &AlphaArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve(args)?;
    let mut ac = cfg.alpha.clone();
    for (slot, v) in [
        (&mut ac.a1, a.a1),
        (&mut ac.b1, a.b1),
        (&mut ac.a2, a.a2),
        (&mut ac.b2, a.b2),
        (&mut ac.alpha_sq, a.alpha_sq),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if let Some(p) = a.profile {
        ac.profile = match p {
            ProfileKind::Linear => AlphaProfile::Linear,
            ProfileKind::Constant => AlphaProfile::Constant { value: a.value },
            ProfileKind::Zero => AlphaProfile::Zero,
        };
    }
    if !(ac.alpha_sq > 0.0) {
        bail!("alpha-sq must be positive, got {}", ac.alpha_sq);
    }
    let inst = AlphaInstance::new(ac.a1, ac.b1, ac.a2, ac.b2, ac.alpha_sq.sqrt())?;
    let profile = ac.profile;
    let demo = alpha_contradiction_demo(|x, y| profile.value(x, y), cfg.phases[0], &inst)?;
    let scale = [ac.a1, ac.b1, ac.a2, ac.b2].iter().map(|x| x.abs()).fold(1.0, f64::max);
    let tol = cfg.tol_or(1e-12) * scale;
    let worst = demo.solution.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let pass = worst <= tol;
    let p = demo.solution.points;
    let rows: Vec<Vec<f64>> = p.events().iter().map(|e| vec![e.t, e.z]).collect();
    let out = OutDir::create(&cfg.out)?;
    let csv = out.write_csv("alpha.csv", &["t".into(), "z".into()], &rows)?;
    let summary = json!({
        "command": "alpha-demo",
        "instance": inst,
        "alpha_sq": ac.alpha_sq,
        "phi": cfg.phases[0],
        "points": {
            "y": [[p.y1, p.t1], [p.y2, p.t2]],
            "x": [[p.x1, p.s1], [p.x2, p.s2]],
            "xi": p.xi,
        },
        "residuals": demo.solution.residuals,
        "max_residual": worst,
        "tol": tol,
        "rejected_root": demo.solution.rejected,
        "profile": profile,
        "via_boundary": demo.via_boundary,
        "via_characteristic": demo.via_characteristic,
        "conflict": demo.conflict,
        "note": alpha_bc_uniqueness_note(),
        "csv": csv,
        "pass": pass,
    });
    out.write_json("alpha.json", &summary)?;
    Ok(Outcome { pass, summary })
}
