//! The boundary condition seen as a jump condition at `u = 0` in the
//! single-time picture.
//!
//! With `χ_2(u, v) = -χ_3(-u, v)` the condition becomes
//! `χ_2(0⁻) = -e^{-iφ} χ_2(0⁺)` and `χ_3(0⁻) = -e^{iφ} χ_3(0⁺)`, while the
//! equal-sign components vanish at `u = 0`.

use num_complex::Complex64;
use serde::Serialize;

use super::single_time::chi_uv;
use crate::error::{Error, Result};
use crate::solver::WaveFunction;

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSample {
    pub v: f64,
    /// One-sided limits `[χ_1, χ_2, χ_3, χ_4]` at `u → 0⁻`.
    pub left: [Complex64; 4],
    /// One-sided limits at `u → 0⁺`.
    pub right: [Complex64; 4],
    /// `|χ_2(0⁻) + e^{-iφ} χ_2(0⁺)|`.
    pub chi2_residual: f64,
    /// `|χ_3(0⁻) + e^{iφ} χ_3(0⁺)|`.
    pub chi3_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub t: f64,
    pub phi: f64,
    pub eps: f64,
    pub max_relation_residual: f64,
    /// Largest one-sided limit of `|χ_1|` or `|χ_4|`.
    pub max_equal_sign: f64,
    pub samples: Vec<DeltaSample>,
}

/// One-sided limits from `u = ±ε, ±2ε` by linear extrapolation; `u = 0` is
/// never evaluated.
pub fn delta_bc_check(psi: &WaveFunction, t: f64, v_samples: &[f64], eps: f64) -> Result<DeltaReport> {
    if psi.n_particles() != 2 {
        return Err(Error::InvalidParams("the single-time relation needs 2 particles".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParams(format!("extrapolation step {eps} must be positive")));
    }
    let phi = psi.params().phase(0);
    let cis = Complex64::from_polar(1.0, phi);
    let limit = |v: f64, side: f64| -> Result<[Complex64; 4]> {
        let a = chi_uv(psi, side * eps, v, t)?;
        let b = chi_uv(psi, side * 2.0 * eps, v, t)?;
        Ok(std::array::from_fn(|i| 2.0 * a[i] - b[i]))
    };
    let mut samples = Vec::with_capacity(v_samples.len());
    for &v in v_samples {
        let left = limit(v, -1.0)?;
        let right = limit(v, 1.0)?;
        samples.push(DeltaSample {
            v,
            chi2_residual: (left[1] + cis.conj() * right[1]).norm(),
            chi3_residual: (left[2] + cis * right[2]).norm(),
            left,
            right,
        });
    }
    let max_relation_residual = samples
        .iter()
        .map(|s| s.chi2_residual.max(s.chi3_residual))
        .fold(0.0, f64::max);
    let max_equal_sign = samples
        .iter()
        .flat_map(|s| [s.left[0], s.left[3], s.right[0], s.right[3]])
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    Ok(DeltaReport {
        t,
        phi,
        eps,
        max_relation_residual,
        max_equal_sign,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{CoupledFamily, InitialData};
    use crate::model::ModelParams;
    use std::f64::consts::PI;

    fn coupled(phi: f64) -> WaveFunction {
        let d = InitialData::coupled(CoupledFamily::default_layout(phi), 3).unwrap();
        WaveFunction::new(ModelParams::new(2, vec![phi], 3).unwrap(), d).unwrap()
    }

    #[test]
    fn jump_relation_holds() {
        for phi in [PI, PI / 2.0, -1.2] {
            let psi = coupled(phi);
            let vs: Vec<f64> = (0..25).map(|i| -2.0 + 0.17 * i as f64).collect();
            for t in [0.0, 0.5, 1.7] {
                let r = delta_bc_check(&psi, t, &vs, 1e-4).unwrap();
                assert!(r.max_relation_residual < 1e-6, "{phi} {t}: {}", r.max_relation_residual);
                assert!(r.max_equal_sign < 1e-9, "{}", r.max_equal_sign);
            }
        }
    }

    #[test]
    fn free_case_is_continuity() {
        let psi = coupled(PI);
        let r = delta_bc_check(&psi, 0.8, &[-0.3, 0.4], 1e-4).unwrap();
        for s in &r.samples {
            assert!((s.left[1] - s.right[1]).norm() < 1e-6);
        }
    }

    #[test]
    fn wrong_phase_breaks_the_relation() {
        let d = InitialData::coupled(CoupledFamily::default_layout(0.3), 3).unwrap();
        let psi = WaveFunction::new(ModelParams::new(2, vec![1.4], 3).unwrap(), d).unwrap();
        let r = delta_bc_check(&psi, 0.0, &[-0.5, 0.0, 0.5], 1e-4).unwrap();
        assert!(r.max_relation_residual > 1e-3);
    }
}
