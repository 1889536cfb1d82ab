//! Common interface for anything that can be integrated over a hypersurface.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Configuration, Event, SpinIndex};
use crate::solver::WaveFunction;

pub trait SpinorField: Sync {
    fn n_particles(&self) -> usize;

    /// All `2^N` components at a configuration of the closed ordered domain.
    fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>>;

    /// Intervals containing every characteristic value `z_k + s_k t_k` at
    /// which a particle of chirality `sign` can carry a non-zero amplitude.
    fn characteristic_support(&self, sign: i8) -> Vec<(f64, f64)>;

    /// `Σ_s |ψ_s|² Π_k (1 + s_k slopes[k])` at ordered events.
    fn weighted_density(&self, events: &[Event], slopes: &[f64]) -> Result<f64> {
        let psi = self.spinor(&Configuration::new(events.to_vec()))?;
        Ok(weighted_sum(&psi, slopes))
    }
}

pub(crate) fn weighted_sum(psi: &[Complex64], slopes: &[f64]) -> f64 {
    let n = slopes.len();
    SpinIndex::all(n)
        .zip(psi)
        .map(|(s, v)| {
            let w: f64 = (0..n).map(|k| 1.0 + f64::from(s.sign(k)) * slopes[k]).product();
            v.norm_sqr() * w
        })
        .sum()
}

impl SpinorField for WaveFunction {
    fn n_particles(&self) -> usize {
        WaveFunction::n_particles(self)
    }

    fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        WaveFunction::spinor(self, cfg)
    }

    fn characteristic_support(&self, _sign: i8) -> Vec<(f64, f64)> {
        self.data().coordinate_support().to_vec()
    }

    fn weighted_density(&self, events: &[Event], slopes: &[f64]) -> Result<f64> {
        let n = events.len();
        let mut acc = 0.0;
        for s in SpinIndex::all(n) {
            let d = self.density_unchecked(events, s);
            if d == 0.0 {
                continue;
            }
            let w: f64 = (0..n).map(|k| 1.0 + f64::from(s.sign(k)) * slopes[k]).product();
            acc += d * w;
        }
        Ok(acc)
    }
}

impl<T: SpinorField> SpinorField for &T {
    fn n_particles(&self) -> usize {
        (**self).n_particles()
    }

    fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        (**self).spinor(cfg)
    }

    fn characteristic_support(&self, sign: i8) -> Vec<(f64, f64)> {
        (**self).characteristic_support(sign)
    }

    fn weighted_density(&self, events: &[Event], slopes: &[f64]) -> Result<f64> {
        (**self).weighted_density(events, slopes)
    }
}

/// Component-wise difference of two fields.
pub struct Difference<A, B> {
    pub a: A,
    pub b: B,
}

impl<A: SpinorField, B: SpinorField> SpinorField for Difference<A, B> {
    fn n_particles(&self) -> usize {
        self.a.n_particles()
    }

    fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        if self.a.n_particles() != self.b.n_particles() {
            return Err(Error::InvalidParams("fields differ in particle number".into()));
        }
        let x = self.a.spinor(cfg)?;
        let y = self.b.spinor(cfg)?;
        Ok(x.iter().zip(&y).map(|(p, q)| p - q).collect())
    }

    fn characteristic_support(&self, sign: i8) -> Vec<(f64, f64)> {
        let mut out = self.a.characteristic_support(sign);
        out.extend(self.b.characteristic_support(sign));
        out
    }
}
