//! Probability on hypersurfaces, boundary flux and the continuity equations.

use serde::Serialize;

use super::current::{current, CurrentTensor};
use super::hypersurface::{bisect, bracket, Hypersurface};
use super::quadrature::{integrate_partition, partition, AdaptiveOptions, Cell};
use crate::error::{Error, Result};
use crate::field::{Difference, SpinorField};
use crate::model::{classify, Classification, Configuration, Event, SpinIndex};
use crate::solver::WaveFunction;

#[derive(Clone, Debug)]
pub struct IntegralOptions {
    pub quadrature: AdaptiveOptions,
    /// Half-width of the integration box; derived from the support when `None`.
    pub half_width: Option<f64>,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        Self {
            quadrature: AdaptiveOptions::default(),
            half_width: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceIntegral {
    pub value: f64,
    pub error_estimate: f64,
    pub z_range: (f64, f64),
    pub cells: usize,
    pub evaluations: usize,
}

fn hull(iv: &[(f64, f64)]) -> Option<(f64, f64)> {
    iv.iter().fold(None, |acc, &(a, b)| match acc {
        None => Some((a, b)),
        Some((lo, hi)) => Some((lo.min(a), hi.max(b))),
    })
}

fn misses(range: (f64, f64), support: &[(f64, f64)]) -> bool {
    support.iter().all(|&(a, b)| range.1 < a || range.0 > b)
}

/// Solves `z + sign · t(z) = target`; the left side is increasing.
fn pull_back(sigma: &Hypersurface, sign: f64, target: f64) -> f64 {
    let f = |z: f64| z + sign * sigma.time(z);
    let (a, b) = bracket(f, target, target - sign * sigma.time(target));
    bisect(|z| f(z) - target, a, b)
}

/// Range of `z` where `z + t(z)` or `z - t(z)` reaches the characteristic
/// supports. Both maps are increasing on a space-like surface.
fn z_range(sigma: &Hypersurface, plus: (f64, f64), minus: (f64, f64)) -> (f64, f64) {
    let root = |sign: f64, target: f64| pull_back(sigma, sign, target);
    let lo = root(1.0, plus.0).min(root(-1.0, minus.0));
    let hi = root(1.0, plus.1).max(root(-1.0, minus.1));
    (lo, hi)
}

/// `∫ Σ_s |ψ_s|² Π_k (1 + s_k t_Σ'(z_k)) dz` over the ordered simplex on the
/// leaf `t_k = t_Σ(z_k)`, the pull-back of the current form.
pub fn surface_integral<F: SpinorField>(
    field: &F,
    sigma: &Hypersurface,
    opts: &IntegralOptions,
) -> Result<SurfaceIntegral> {
    let n = field.n_particles();
    let sup_plus = field.characteristic_support(1);
    let sup_minus = field.characteristic_support(-1);
    let (Some(hp), Some(hm)) = (hull(&sup_plus), hull(&sup_minus)) else {
        return Ok(SurfaceIntegral {
            value: 0.0,
            error_estimate: 0.0,
            z_range: (0.0, 0.0),
            cells: 0,
            evaluations: 0,
        });
    };
    let (lo, hi) = match opts.half_width {
        Some(r) => (-r, r),
        None => {
            let (lo, hi) = z_range(sigma, hp, hm);
            let pad = 1e-9 * (1.0 + hi - lo);
            (lo - pad, hi + pad)
        }
    };
    sigma.check_spacelike(lo, hi, 256)?;
    let integrand = |z: &[f64]| -> Result<f64> {
        let mut events = smallvec::SmallVec::<[Event; 8]>::with_capacity(n);
        let mut slopes = smallvec::SmallVec::<[f64; 8]>::with_capacity(n);
        for &zk in z {
            let (t, d) = sigma.time_and_slope(zk);
            if !(d.abs() < 1.0) {
                return Err(Error::Slope { z: zk, slope: d });
            }
            events.push(Event::new(t, zk));
            slopes.push(d);
        }
        field.weighted_density(&events, &slopes)
    };
    let prune = |cell: &Cell| {
        cell.runs.iter().any(|run| {
            let (ta, tb) = (sigma.time(run.a), sigma.time(run.b));
            misses((run.a + ta, run.b + tb), &sup_plus) && misses((run.a - ta, run.b - tb), &sup_minus)
        })
    };
    // Each support edge of a component with sign s_k is crossed where
    // z_k + s_k t(z_k) meets it, a fixed z_k; cells are aligned with those.
    let mut kinks = Vec::new();
    for (sign, sup) in [(1.0, &sup_plus), (-1.0, &sup_minus)] {
        for &(a, b) in sup.iter() {
            kinks.push(pull_back(sigma, sign, a));
            kinks.push(pull_back(sigma, sign, b));
        }
    }
    let edges = partition(lo, hi, &kinks, opts.quadrature.initial_intervals);
    let q = integrate_partition(n, &edges, &opts.quadrature, integrand, prune)?;
    Ok(SurfaceIntegral {
        value: q.value,
        error_estimate: q.error_estimate,
        z_range: (lo, hi),
        cells: q.cells,
        evaluations: q.evaluations,
    })
}

/// `‖ψ_A - ψ_B‖_Σ`.
pub fn norm_distance<A: SpinorField, B: SpinorField>(
    a: &A,
    b: &B,
    sigma: &Hypersurface,
    opts: &IntegralOptions,
) -> Result<f64> {
    if a.n_particles() != b.n_particles() {
        return Err(Error::InvalidParams("fields differ in particle number".into()));
    }
    let diff = Difference { a, b };
    Ok(surface_integral(&diff, sigma, opts)?.value.max(0.0).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxReport {
    /// Largest `|Σ_{s: s_k ≠ s_{k+1}} s_{k+1} |ψ_s|²|` over the samples.
    pub max_violation: f64,
    pub per_sample: Vec<f64>,
}

/// Net current through the coincidence set at each sample point.
pub fn boundary_flux_check<F: SpinorField>(
    field: &F,
    samples: &[Configuration],
    tol: f64,
) -> Result<FluxReport> {
    let n = field.n_particles();
    let mut per_sample = Vec::with_capacity(samples.len());
    for cfg in samples {
        let k = match classify(cfg, tol) {
            Classification::BoundaryStratum(k) => k,
            c => return Err(Error::Domain(format!("flux sample is not on a coincidence stratum: {c:?}"))),
        };
        let psi = field.spinor(cfg)?;
        let flux: f64 = SpinIndex::all(n)
            .zip(&psi)
            .filter(|(s, _)| s.sign(k) != s.sign(k + 1))
            .map(|(s, v)| f64::from(s.sign(k + 1)) * v.norm_sqr())
            .sum();
        per_sample.push(flux.abs());
    }
    Ok(FluxReport {
        max_violation: per_sample.iter().copied().fold(0.0, f64::max),
        per_sample,
    })
}

/// Largest `|Σ_{μ_k} ∂_{k,μ_k} j^{…μ_k…}|` over particles and remaining
/// indices, with central differences of step `h`.
pub fn continuity_residual(psi: &WaveFunction, cfg: &Configuration, h: f64) -> Result<f64> {
    let n = psi.n_particles();
    let at = |k: usize, dt: f64, dz: f64| -> Result<CurrentTensor> {
        let e = cfg.events()[k];
        current(psi, &cfg.with_event(k, Event::new(e.t + dt, e.z + dz)))
    };
    let mut worst = 0.0f64;
    for k in 0..n {
        let (tp, tm) = (at(k, h, 0.0)?, at(k, -h, 0.0)?);
        let (zp, zm) = (at(k, 0.0, h)?, at(k, 0.0, -h)?);
        let bit = 1usize << (n - 1 - k);
        for mu in 0..1usize << n {
            if mu & bit != 0 {
                continue;
            }
            let d0 = (tp.values()[mu] - tm.values()[mu]) / (2.0 * h);
            let d1 = (zp.values()[mu | bit] - zm.values()[mu | bit]) / (2.0 * h);
            worst = worst.max((d0 + d1).abs());
        }
    }
    Ok(worst)
}
