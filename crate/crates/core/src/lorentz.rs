//! Boosts along `z`, parametrised by rapidity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpinorField;
use crate::model::{Configuration, Event, SpinIndex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Boost {
    pub rapidity: f64,
}

impl Boost {
    pub fn new(rapidity: f64) -> Self {
        Self { rapidity }
    }

    pub fn from_velocity(v: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(Error::InvalidParams(format!("velocity {v} is not below the speed of light")));
        }
        Ok(Self::new(v.atanh()))
    }

    pub fn velocity(&self) -> f64 {
        self.rapidity.tanh()
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.rapidity)
    }

    pub fn compose(&self, other: &Boost) -> Self {
        Self::new(self.rapidity + other.rapidity)
    }

    pub fn apply(&self, e: Event) -> Event {
        boost_event(*self, e)
    }

    pub fn apply_configuration(&self, cfg: &Configuration) -> Configuration {
        Configuration::new(cfg.events().iter().map(|&e| self.apply(e)).collect())
    }

    /// Factor multiplying component `s`: `Π_k (cosh(β/2) - s_k sinh(β/2))`.
    ///
    /// Each `±` light-cone coordinate scales by `e^{±β}`, so the spinor
    /// factor must scale `|ψ_s|²` by `e^{-s β}` per particle for the density
    /// on a boosted surface to integrate to the same total.
    pub fn spinor_factor(&self, s: SpinIndex) -> f64 {
        let (ch, sh) = ((self.rapidity / 2.0).cosh(), (self.rapidity / 2.0).sinh());
        (0..s.len()).map(|k| ch - f64::from(s.sign(k)) * sh).product()
    }
}

/// `(t, z) ↦ (t cosh β + z sinh β, z cosh β + t sinh β)`.
pub fn boost_event(b: Boost, e: Event) -> Event {
    let (ch, sh) = (b.rapidity.cosh(), b.rapidity.sinh());
    Event::new(e.t * ch + e.z * sh, e.z * ch + e.t * sh)
}

/// `ψ'_s(x) = f_s(β) ψ_s(Λ^{-1} x_1, …, Λ^{-1} x_N)`, evaluated on demand.
pub struct BoostedField<F> {
    inner: F,
    boost: Boost,
}

impl<F: SpinorField> BoostedField<F> {
    pub fn new(inner: F, boost: Boost) -> Self {
        Self { inner, boost }
    }

    pub fn boost(&self) -> Boost {
        self.boost
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

/// Boosted evaluator for any field, typically a [`crate::WaveFunction`].
pub fn boost_wavefunction<F: SpinorField>(b: Boost, psi: F) -> BoostedField<F> {
    BoostedField::new(psi, b)
}

impl<F: SpinorField> SpinorField for BoostedField<F> {
    fn n_particles(&self) -> usize {
        self.inner.n_particles()
    }

    fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        let back = self.boost.inverse().apply_configuration(cfg);
        let psi = self.inner.spinor(&back)?;
        Ok(SpinIndex::all(self.n_particles())
            .zip(psi)
            .map(|(s, v)| v * self.boost.spinor_factor(s))
            .collect())
    }

    fn characteristic_support(&self, sign: i8) -> Vec<(f64, f64)> {
        let scale = (f64::from(sign) * self.boost.rapidity).exp();
        self.inner
            .characteristic_support(sign)
            .into_iter()
            .map(|(a, b)| (a * scale, b * scale))
            .collect()
    }
}
