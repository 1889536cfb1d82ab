//! Closed-form evaluation of the multi-time wave function.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::model::{classify, Classification, Configuration, Event, ModelParams, SpinIndex, DEFAULT_TOL};
use crate::phases::bubble_swaps;

/// `ψ_s(x) = e^{iφ^π_s} g_{s∘π}(c_{π(1)}, …, c_{π(N)})` with `π` the stable
/// sorting permutation of the characteristic values `c_k = z_k + s_k t_k`.
#[derive(Clone, Debug)]
pub struct WaveFunction {
    params: ModelParams,
    data: InitialData,
    tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryPair {
    /// Component with `(+, -)` on the coinciding pair.
    pub spin: String,
    pub lhs: Complex64,
    /// `e^{iφ_k}` times the component with the pair flipped to `(-, +)`.
    pub rhs: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCheck {
    pub stratum: usize,
    pub pairs: Vec<BoundaryPair>,
}

impl BoundaryCheck {
    pub fn max_mismatch(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| (p.lhs - p.rhs).norm())
            .fold(0.0, f64::max)
    }
}

impl WaveFunction {
    pub fn new(params: ModelParams, data: InitialData) -> Result<Self> {
        if params.n_particles() != data.n_particles() {
            return Err(Error::InvalidParams(format!(
                "model has {} particles, data have {}",
                params.n_particles(),
                data.n_particles()
            )));
        }
        Ok(Self {
            params,
            data,
            tol: DEFAULT_TOL,
        })
    }

    /// Coincidence tolerance used when classifying configurations.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn data(&self) -> &InitialData {
        &self.data
    }

    pub fn n_particles(&self) -> usize {
        self.params.n_particles()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn check(&self, cfg: &Configuration) -> Result<Classification> {
        if cfg.len() != self.n_particles() {
            return Err(Error::InvalidParams(format!(
                "configuration has {} events, model has {} particles",
                cfg.len(),
                self.n_particles()
            )));
        }
        let c = classify(cfg, self.tol);
        if c.in_closed_domain() {
            Ok(c)
        } else {
            Err(Error::Domain(format!("{c:?}")))
        }
    }

    /// Component `s` at a configuration in the closed ordered domain.
    pub fn evaluate(&self, cfg: &Configuration, s: SpinIndex) -> Result<Complex64> {
        self.check(cfg)?;
        Ok(self.evaluate_unchecked(cfg.events(), s))
    }

    /// All `2^N` components, in canonical order.
    pub fn spinor(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        self.check(cfg)?;
        Ok(SpinIndex::all(self.n_particles())
            .map(|s| self.evaluate_unchecked(cfg.events(), s))
            .collect())
    }

    /// The closed formula without the domain check.
    pub fn evaluate_unchecked(&self, events: &[Event], s: SpinIndex) -> Complex64 {
        let n = events.len();
        let c: SmallVec<[f64; 8]> = events
            .iter()
            .enumerate()
            .map(|(k, e)| e.z + f64::from(s.sign(k)) * e.t)
            .collect();
        let mut labels: SmallVec<[usize; 8]> = (0..n).collect();
        let mut coeff: SmallVec<[i32; 8]> = smallvec![0; n.saturating_sub(1)];
        bubble_swaps(&mut labels, |a, b| c[a] > c[b], |k, a| coeff[k] += i32::from(s.sign(a)));
        let args: SmallVec<[f64; 8]> = labels.iter().map(|&l| c[l]).collect();
        let g = self.data.value(s.permuted(&labels), &args);
        if coeff.iter().all(|&x| x == 0) {
            return g;
        }
        let phase: f64 = coeff
            .iter()
            .zip(self.params.phases())
            .map(|(&n, &p)| f64::from(n) * p)
            .sum();
        g * Complex64::from_polar(1.0, phase)
    }

    /// `|ψ_s|²` from the closed formula; the phase factor has modulus one and
    /// is skipped.
    pub fn density_unchecked(&self, events: &[Event], s: SpinIndex) -> f64 {
        let n = events.len();
        let c: SmallVec<[f64; 8]> = events
            .iter()
            .enumerate()
            .map(|(k, e)| e.z + f64::from(s.sign(k)) * e.t)
            .collect();
        let mut labels: SmallVec<[usize; 8]> = (0..n).collect();
        bubble_swaps(&mut labels, |a, b| c[a] > c[b], |_, _| {});
        let args: SmallVec<[f64; 8]> = labels.iter().map(|&l| c[l]).collect();
        self.data.value(s.permuted(&labels), &args).norm_sqr()
    }

    /// Antisymmetric extension to space-like configurations in any order:
    /// the events are sorted by position and the sign of the sorting
    /// permutation is applied.
    pub fn evaluate_full(&self, cfg: &Configuration, s: SpinIndex) -> Result<Complex64> {
        let (sorted, rho, sign) = self.sort_events(cfg)?;
        let v = self.evaluate_unchecked(sorted.events(), s.permuted(&rho));
        Ok(if sign { v } else { -v })
    }

    pub fn spinor_full(&self, cfg: &Configuration) -> Result<Vec<Complex64>> {
        let (sorted, rho, sign) = self.sort_events(cfg)?;
        Ok(SpinIndex::all(self.n_particles())
            .map(|s| {
                let v = self.evaluate_unchecked(sorted.events(), s.permuted(&rho));
                if sign {
                    v
                } else {
                    -v
                }
            })
            .collect())
    }

    fn sort_events(&self, cfg: &Configuration) -> Result<(Configuration, Vec<usize>, bool)> {
        if cfg.len() != self.n_particles() {
            return Err(Error::InvalidParams(format!(
                "configuration has {} events, model has {} particles",
                cfg.len(),
                self.n_particles()
            )));
        }
        let mut rho: Vec<usize> = (0..cfg.len()).collect();
        let ev = cfg.events();
        rho.sort_by(|&a, &b| ev[a].z.total_cmp(&ev[b].z));
        let sorted = Configuration::new(rho.iter().map(|&i| ev[i]).collect());
        let c = classify(&sorted, self.tol);
        if !c.in_closed_domain() {
            return Err(Error::Domain(format!("{c:?}")));
        }
        let mut inversions = 0usize;
        for a in 0..rho.len() {
            for b in a + 1..rho.len() {
                if rho[a] > rho[b] {
                    inversions += 1;
                }
            }
        }
        Ok((sorted, rho, inversions % 2 == 0))
    }

    /// Largest `|D_{t_k} ψ_s - s_k D_{z_k} ψ_s|` over particles, with central
    /// differences of step `h`. The shifted configurations must stay in the
    /// closed domain.
    pub fn residual(&self, cfg: &Configuration, s: SpinIndex, h: f64) -> Result<f64> {
        self.check(cfg)?;
        let mut worst = 0.0f64;
        for k in 0..cfg.len() {
            let e = cfg.events()[k];
            let at = |t: f64, z: f64| self.evaluate(&cfg.with_event(k, Event::new(t, z)), s);
            let dt = (at(e.t + h, e.z)? - at(e.t - h, e.z)?) / (2.0 * h);
            let dz = (at(e.t, e.z + h)? - at(e.t, e.z - h)?) / (2.0 * h);
            worst = worst.max((dt - dz * f64::from(s.sign(k))).norm());
        }
        Ok(worst)
    }

    /// Compares both sides of the boundary condition at a point of a
    /// coincidence stratum.
    pub fn boundary_check(&self, cfg: &Configuration) -> Result<BoundaryCheck> {
        let k = match self.check(cfg)? {
            Classification::BoundaryStratum(k) => k,
            c => return Err(Error::Domain(format!("not on a coincidence stratum: {c:?}"))),
        };
        let cis = Complex64::from_polar(1.0, self.params.phase(k));
        let pairs = SpinIndex::all(self.n_particles())
            .filter(|s| s.is_plus(k) && !s.is_plus(k + 1))
            .map(|s| BoundaryPair {
                spin: s.to_string(),
                lhs: self.evaluate_unchecked(cfg.events(), s),
                rhs: cis * self.evaluate_unchecked(cfg.events(), s.swapped(k)),
            })
            .collect();
        Ok(BoundaryCheck { stratum: k, pairs })
    }

    /// True when every boundary phase equals `π` (no interaction).
    pub fn is_free(&self) -> bool {
        self.params
            .phases()
            .iter()
            .all(|p| (p.rem_euclid(2.0 * PI) - PI).abs() < 1e-15)
    }
}
