//! Checks that initial data are compatible with the boundary conditions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::InitialData;
use crate::error::{Error, Result};
use crate::model::{ModelParams, SpinIndex};

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    /// Bound for boundary-value mismatch and support leakage.
    pub tol: f64,
    /// Bound for the relative mismatch of one-sided derivatives.
    pub smooth_tol: f64,
    /// Random stratum points per stratum.
    pub samples: usize,
    pub seed: u64,
    /// Step of the one-sided difference stencils.
    pub step: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            smooth_tol: 1e-4,
            samples: 200,
            seed: 7,
            step: 1e-2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FailureKind {
    /// Boundary values on the given stratum (0-based) are not related by the phase.
    Compatibility { stratum: usize },
    /// Non-zero values outside the declared support.
    Support,
    /// One-sided derivatives of the given order disagree across the stratum.
    Smoothness { stratum: usize, order: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationFailure {
    pub kind: FailureKind,
    pub spin: String,
    pub location: Vec<f64>,
    pub magnitude: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    /// Largest `|g_{..+-..} - e^{iφ_k} g_{..-+..}|` per stratum.
    pub compatibility: Vec<f64>,
    pub leakage: f64,
    /// Largest relative derivative mismatch per stratum.
    pub smoothness: Vec<f64>,
    pub failures: Vec<ValidationFailure>,
}

/// Finite-difference weights for derivatives `0..=order` at `x0` on `nodes`.
pub(crate) fn fd_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn record(
    worst: &mut Option<ValidationFailure>,
    kind: FailureKind,
    spin: SpinIndex,
    z: &[f64],
    magnitude: f64,
) {
    if worst.as_ref().map_or(true, |w| magnitude > w.magnitude) {
        *worst = Some(ValidationFailure {
            kind,
            spin: spin.to_string(),
            location: z.to_vec(),
            magnitude,
        });
    }
}

/// Samples each coincidence stratum and the region just outside the support.
///
/// Violations are reported in the returned report, not as errors.
pub fn validate(data: &InitialData, params: &ModelParams, opts: &ValidateOptions) -> Result<ValidationReport> {
    let n = data.n_particles();
    if n != params.n_particles() {
        return Err(Error::InvalidParams(format!(
            "data for {n} particles, model for {}",
            params.n_particles()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let radius = data.support_radius().max(1e-3);
    let order = data.smoothness().min(3) as usize;
    let k_pts = order + 4;
    let margin = 2.0 * k_pts as f64 * opts.step;
    let mut report = ValidationReport {
        compatibility: vec![0.0; n.saturating_sub(1)],
        smoothness: vec![0.0; n.saturating_sub(1)],
        ..Default::default()
    };

    let right_nodes: Vec<f64> = (0..k_pts).map(|i| i as f64 * opts.step).collect();
    let left_nodes: Vec<f64> = right_nodes.iter().map(|x| -x).collect();
    let w_right = fd_weights(0.0, &right_nodes, order + 1);
    let w_left = fd_weights(0.0, &left_nodes, order + 1);

    for k in 0..n.saturating_sub(1) {
        let mut worst_compat = None;
        let mut worst_smooth = None;
        let cis = Complex64::from_polar(1.0, params.phase(k));
        for _ in 0..opts.samples {
            let z = stratum_point(&mut rng, n, k, radius, margin);
            for s in SpinIndex::all(n) {
                if !(s.is_plus(k) && !s.is_plus(k + 1)) {
                    continue;
                }
                let t = s.swapped(k);
                let lhs = data.value(s, &z);
                let rhs = cis * data.value(t, &z);
                let d = (lhs - rhs).norm();
                report.compatibility[k] = report.compatibility[k].max(d);
                if d > opts.tol {
                    record(&mut worst_compat, FailureKind::Compatibility { stratum: k }, s, &z, d);
                }
                if order == 0 {
                    continue;
                }
                // One-sided derivatives 0..=order+1 on either side, read at
                // ordered points; the left stencil runs in the mirrored variable.
                let mut zz = z.clone();
                let w = z[k];
                let mut dr = vec![Complex64::new(0.0, 0.0); order + 2];
                let mut dl = dr.clone();
                for (i, d) in right_nodes.iter().enumerate() {
                    zz[k] = w - d;
                    zz[k + 1] = w + d;
                    let (fr, fl) = (data.value(s, &zz), cis * data.value(t, &zz));
                    for j in 1..=order + 1 {
                        dr[j] += fr * w_right[j][i];
                        dl[j] += fl * w_left[j][i];
                    }
                }
                for j in 1..=order {
                    let norm = 1.0 + dr[j].norm().max(dl[j].norm());
                    let rel = (dr[j] - dl[j]).norm() / norm;
                    // A feature narrower than the stencil, such as a support
                    // edge next to the stratum, shifts the estimates by up to
                    // about `stencil width × next derivative`; such jumps are
                    // below resolution.
                    let resolution = 2.0 * margin * dr[j + 1].norm().max(dl[j + 1].norm()) / norm;
                    report.smoothness[k] = report.smoothness[k].max(rel);
                    if rel > opts.smooth_tol && rel > resolution {
                        record(
                            &mut worst_smooth,
                            FailureKind::Smoothness { stratum: k, order: j },
                            s,
                            &z,
                            rel,
                        );
                    }
                }
            }
        }
        report.failures.extend(worst_compat);
        report.failures.extend(worst_smooth);
    }

    let mut worst_leak = None;
    let beyond = radius * (1.0 + 1e-6) + 1e-9;
    for _ in 0..opts.samples {
        let mut z: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..=radius)).collect();
        let j = rng.gen_range(0..n);
        z[j] = if rng.gen_bool(0.5) { beyond } else { -beyond };
        z.sort_by(f64::total_cmp);
        for s in SpinIndex::all(n) {
            let v = data.value(s, &z).norm();
            report.leakage = report.leakage.max(v);
            if v > opts.tol {
                record(&mut worst_leak, FailureKind::Support, s, &z, v);
            }
        }
    }
    report.failures.extend(worst_leak);
    report.passed = report.failures.is_empty();
    Ok(report)
}

/// Ordered point with `z_k = z_{k+1}` and other neighbours at least `margin`
/// apart.
fn stratum_point(rng: &mut ChaCha8Rng, n: usize, k: usize, radius: f64, margin: f64) -> Vec<f64> {
    let span = radius + margin * n as f64;
    loop {
        let mut free: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-span..span)).collect();
        free.sort_by(f64::total_cmp);
        if free.windows(2).any(|w| w[1] - w[0] < margin) {
            continue;
        }
        let mut z = free.clone();
        z.insert(k, free[k]);
        return z;
    }
}
