//! Interaction diagnostics for product initial data.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::single_time::chi;
use crate::error::{Error, Result};
use crate::initial::ProductFamily;
use crate::solver::WaveFunction;

/// Uniform grid on `[lo, hi]`. The second particle is sampled half a step
/// off the first, so the two grids never meet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points }
    }

    fn step(&self) -> f64 {
        (self.hi - self.lo) / self.points as f64
    }

    pub fn first(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| self.lo + (i as f64 + 0.25) * h).collect()
    }

    pub fn second(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| self.lo + (i as f64 + 0.75) * h).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SchmidtReport {
    pub t: f64,
    pub rank: usize,
    /// Singular values in decreasing order, relative to the largest.
    pub singular_values: Vec<f64>,
}

/// Numerical rank of `χ_{s_1 s_2}(z_1, z_2, t)` as a matrix over
/// `(s_1, z_1) × (s_2, z_2)`. Singular values below `svd_tol · σ_max` are
/// dropped.
pub fn schmidt_rank(psi: &WaveFunction, t: f64, grid: &GridSpec, svd_tol: f64) -> Result<SchmidtReport> {
    if psi.n_particles() != 2 {
        return Err(Error::InvalidParams("Schmidt rank needs 2 particles".into()));
    }
    if grid.points < 2 || !(grid.hi > grid.lo) {
        return Err(Error::Grid(format!("degenerate grid {grid:?}")));
    }
    let reach = t.abs();
    for &(a, b) in psi.data().coordinate_support() {
        if a - reach < grid.lo || b + reach > grid.hi {
            return Err(Error::Grid(format!(
                "support [{a}, {b}] widened by |t| = {reach} leaves the grid [{}, {}]",
                grid.lo, grid.hi
            )));
        }
    }
    let (za, zb) = (grid.first(), grid.second());
    let m = grid.points;
    let mut mat = DMatrix::<Complex64>::zeros(2 * m, 2 * m);
    for (i, &z1) in za.iter().enumerate() {
        for (j, &z2) in zb.iter().enumerate() {
            let c = chi(psi, z1, z2, t)?;
            // Row block is s_1, column block s_2; canonical index = 2·[s_1 = +] + [s_2 = +].
            for (idx, v) in c.iter().enumerate() {
                mat[((idx >> 1) * m + i, (idx & 1) * m + j)] = *v;
            }
        }
    }
    let sv = mat.singular_values();
    let mut values: Vec<f64> = sv.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let top = values.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(SchmidtReport {
            t,
            rank: 0,
            singular_values: values,
        });
    }
    let rank = values.iter().filter(|&&s| s > svd_tol * top).count();
    Ok(SchmidtReport {
        t,
        rank,
        singular_values: values.iter().map(|s| s / top).collect(),
    })
}

/// `α(c_1) β(c_2) ζ(c_3 …) (Θ(c_2 - c_1) - e^{iφ} Θ(c_1 - c_2))` for the
/// component `+-+…+` at the equal-time point `(t, z)`. At `c_1 = c_2` the
/// first branch applies. Profiles are raised to `smoothness + 1`, as in
/// [`crate::InitialData`].
pub fn heaviside_component(family: &ProductFamily, phi: f64, smoothness: u32, t: f64, z: &[f64]) -> Complex64 {
    let power = smoothness as i32 + 1;
    let c1 = z[0] + t;
    let c2 = z[1] - t;
    let mut v = family.alpha.value(c1, power) * family.beta.value(c2, power);
    for (p, &zk) in family.zeta.iter().zip(&z[2..]) {
        v *= p.value(zk + t, power);
    }
    if c2 >= c1 {
        v
    } else {
        -v * Complex64::from_polar(1.0, phi)
    }
}
