//! Equal-time restriction `χ(z_1, z_2, t) = ψ(t, z_1, t, z_2)` of a
//! two-particle wave function.
//!
//! Components are numbered `χ_1 … χ_4` in canonical order, that is
//! `(--, -+, +-, ++)`. Relative and centre coordinates are
//! `u = (z_1 - z_2)/2` and `v = (z_1 + z_2)/2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Configuration;
use crate::solver::WaveFunction;

pub fn uv_from_z(z1: f64, z2: f64) -> (f64, f64) {
    (0.5 * (z1 - z2), 0.5 * (z1 + z2))
}

pub fn z_from_uv(u: f64, v: f64) -> (f64, f64) {
    (v + u, v - u)
}

fn require_two(psi: &WaveFunction) -> Result<()> {
    if psi.n_particles() != 2 {
        return Err(Error::InvalidParams(format!(
            "single-time analysis needs 2 particles, got {}",
            psi.n_particles()
        )));
    }
    Ok(())
}

/// `χ(z_1, z_2, t)` for `z_1 ≠ z_2` in either order.
pub fn chi(psi: &WaveFunction, z1: f64, z2: f64, t: f64) -> Result<[Complex64; 4]> {
    require_two(psi)?;
    if z1 == z2 {
        return Err(Error::Domain("χ is not evaluated on the coincidence line".into()));
    }
    let v = psi.spinor_full(&Configuration::equal_time(t, &[z1, z2]))?;
    Ok([v[0], v[1], v[2], v[3]])
}

pub fn chi_uv(psi: &WaveFunction, u: f64, v: f64, t: f64) -> Result<[Complex64; 4]> {
    let (z1, z2) = z_from_uv(u, v);
    chi(psi, z1, z2, t)
}

/// `χ` on a `u × v` grid at one time.
#[derive(Clone, Debug, Serialize)]
pub struct SingleTimeState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `values[i][j]` is `χ(u_i, v_j)`.
    pub values: Vec<Vec<[Complex64; 4]>>,
}

impl SingleTimeState {
    /// `u` must avoid zero.
    pub fn sample(psi: &WaveFunction, t: f64, u: &[f64], v: &[f64]) -> Result<Self> {
        let values = u
            .iter()
            .map(|&ui| v.iter().map(|&vj| chi_uv(psi, ui, vj, t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            t,
            u: u.to_vec(),
            v: v.to_vec(),
            values,
        })
    }

    /// Largest `|χ_2(u, v) + χ_3(-u, v)|`, taken over grid rows whose mirror
    /// `-u` is also on the grid.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, &ui) in self.u.iter().enumerate() {
            let Some(m) = self.u.iter().position(|&x| x == -ui) else {
                continue;
            };
            for j in 0..self.v.len() {
                worst = worst.max((self.values[i][j][1] + self.values[m][j][2]).norm());
            }
        }
        worst
    }
}
