//! Second evaluation route: follow the characteristics backwards and apply
//! the boundary condition at every encounter.
//!
//! A `+` particle at `(t, z)` moves along `z = c - t`, a `-` particle along
//! `z = c + t`. Whenever two neighbours meet, the state is continued on the
//! other side of the coincidence with the factor from the boundary
//! condition. Once no neighbours can meet any more the data are read off.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{classify, Configuration, SpinIndex};
use crate::solver::WaveFunction;

#[derive(Clone, Debug, Serialize)]
pub struct TraceOutcome {
    pub value: Complex64,
    /// Number of encounters that were resolved.
    pub encounters: usize,
    /// Smallest distance between an encounter point and the other particles
    /// at the encounter time; `+∞` without encounters.
    pub min_margin: f64,
}

pub fn trace_evaluate(psi: &WaveFunction, cfg: &Configuration, s: SpinIndex) -> Result<TraceOutcome> {
    let n = psi.n_particles();
    if cfg.len() != n || s.len() != n {
        return Err(Error::InvalidParams("length mismatch".into()));
    }
    let class = classify(cfg, psi.tolerance());
    if !class.in_closed_domain() {
        return Err(Error::Domain(format!("{class:?}")));
    }
    let mut sign: Vec<f64> = (0..n).map(|k| f64::from(s.sign(k))).collect();
    let mut c: Vec<f64> = cfg
        .events()
        .iter()
        .zip(&sign)
        .map(|(e, &sk)| e.z + sk * e.t)
        .collect();
    let mut factor = Complex64::new(1.0, 0.0);
    let mut encounters = 0;
    let mut min_margin = f64::INFINITY;

    loop {
        // Neighbours whose characteristic lines cross at time `(c_k - c_{k+1}) / 2`.
        let mut best: Option<(usize, f64)> = None;
        for k in 0..n - 1 {
            if sign[k] != sign[k + 1] && c[k] > c[k + 1] {
                let t_star = sign[k] * (c[k] - c[k + 1]) / 2.0;
                if best.map_or(true, |(_, b)| t_star.abs() > b.abs()) {
                    best = Some((k, t_star));
                }
            }
        }
        let Some((k, t_star)) = best else { break };
        let z_star = c[k] - sign[k] * t_star;
        for j in [k.wrapping_sub(1), k + 2] {
            if j < n {
                let zj = c[j] - sign[j] * t_star;
                min_margin = min_margin.min((zj - z_star).abs());
            }
        }
        factor *= Complex64::from_polar(1.0, sign[k] * psi.params().phase(k));
        sign.swap(k, k + 1);
        c.swap(k, k + 1);
        encounters += 1;
        if encounters > n * n {
            return Err(Error::Domain("encounter sequence does not terminate".into()));
        }
    }
    if c.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain(
            "equal-chirality neighbours are out of order; configuration is not admissible".into(),
        ));
    }
    let signs: Vec<i8> = sign.iter().map(|&x| if x > 0.0 { 1 } else { -1 }).collect();
    let g = psi.data().value(SpinIndex::new(&signs)?, &c);
    Ok(TraceOutcome {
        value: factor * g,
        encounters,
        min_margin,
    })
}
