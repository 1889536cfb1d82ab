//! The spinor factor of a boost uses half the rapidity. The same product
//! with the full rapidity, `Π_k (cosh β - s_k sinh β)`, does not conserve
//! the norm; this file keeps both side by side.

use multitime::geometry::{surface_integral, AdaptiveOptions, IntegralOptions};
use multitime::initial::{CoupledFamily, InitialData};
use multitime::lorentz::{boost_wavefunction, Boost};
use multitime::{Complex64, Configuration, Hypersurface, ModelParams, Result, SpinIndex, SpinorField, WaveFunction};

struct FullRapidity<'a> {
    inner: &'a WaveFunction,
    boost: Boost,
}

impl SpinorField for FullRapidity<'_> {
    fn n_particles(&self) -> usize {
        self.inner.n_particles()
    }

    fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        let back = self.boost.inverse().apply_configuration(cfg);
        let (ch, sh) = (self.boost.rapidity.cosh(), self.boost.rapidity.sinh());
        let psi = self.inner.spinor(&back)?;
        Ok(SpinIndex::all(self.n_particles())
            .zip(psi)
            .map(|(s, v)| v * (0..s.len()).map(|k| ch - f64::from(s.sign(k)) * sh).product::<f64>())
            .collect())
    }

    fn characteristic_support(&self, sign: i8) -> Vec<(f64, f64)> {
        boost_wavefunction(self.boost, self.inner).characteristic_support(sign)
    }
}

#[test]
fn only_the_half_rapidity_factor_conserves_the_norm() {
    let phi = 0.8;
    let d = InitialData::coupled(CoupledFamily::default_layout(phi), 3).unwrap();
    let psi = WaveFunction::new(ModelParams::new(2, vec![phi], 3).unwrap(), d).unwrap();
    let opts = IntegralOptions {
        quadrature: AdaptiveOptions { rel_tol: 1e-9, ..Default::default() },
        half_width: None,
    };
    let base = Hypersurface::flat(0.0);
    let norm = surface_integral(&psi, &base, &opts).unwrap().value;
    for beta in [-0.6, 0.4, 0.9] {
        let b = Boost::new(beta);
        let image = Hypersurface::boosted(base.clone(), beta);
        let half = surface_integral(&boost_wavefunction(b, &psi), &image, &opts).unwrap().value;
        let full = surface_integral(&FullRapidity { inner: &psi, boost: b }, &image, &opts)
            .unwrap()
            .value;
        assert!((half - norm).abs() < 1e-7 * norm, "{beta}: {half} vs {norm}");
        assert!((full - norm).abs() > 1e-2 * norm, "{beta}: {full} vs {norm}");
    }
}
