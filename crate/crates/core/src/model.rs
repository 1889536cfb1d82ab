//! Spin indices, configurations and domain classification.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by [`classify`] when none is given.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest supported particle number. Spin indices are stored as a bit mask.
pub const MAX_PARTICLES: usize = 16;

/// An N-tuple of chiralities `s_k ∈ {-1, +1}`.
///
/// Bit `N-1-k` holds particle `k` (`1` for `+`), so the raw bit pattern is the
/// position of the component in the canonical ordering where `-` precedes `+`
/// and the first particle is the most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinIndex {
    bits: u32,
    n: u8,
}

impl SpinIndex {
    pub fn new(signs: &[i8]) -> Result<Self> {
        check_particles(signs.len())?;
        let mut bits = 0u32;
        for (k, &s) in signs.iter().enumerate() {
            match s {
                1 => bits |= 1 << (signs.len() - 1 - k),
                -1 => {}
                _ => return Err(Error::InvalidParams(format!("sign {s} is not ±1"))),
            }
        }
        Ok(Self {
            bits,
            n: signs.len() as u8,
        })
    }

    /// Component at position `linear` (0-based) of the canonical ordering.
    pub fn from_linear(n: usize, linear: usize) -> Result<Self> {
        check_particles(n)?;
        if linear >= 1 << n {
            return Err(Error::InvalidParams(format!(
                "component {linear} out of range for {n} particles"
            )));
        }
        Ok(Self {
            bits: linear as u32,
            n: n as u8,
        })
    }

    /// Component with the 1-based label `1 + Σ_k b_k 2^(N-k)`.
    pub fn from_component_index(n: usize, index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidParams("component labels start at 1".into()));
        }
        Self::from_linear(n, index - 1)
    }

    pub fn all_plus(n: usize) -> Self {
        Self {
            bits: ((1u64 << n) - 1) as u32,
            n: n as u8,
        }
    }

    pub fn all_minus(n: usize) -> Self {
        Self { bits: 0, n: n as u8 }
    }

    /// Iterates over all `2^N` components in canonical order.
    pub fn all(n: usize) -> impl Iterator<Item = SpinIndex> {
        (0..1u32 << n).map(move |bits| SpinIndex { bits, n: n as u8 })
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn linear(&self) -> usize {
        self.bits as usize
    }

    pub fn component_index(&self) -> usize {
        self.bits as usize + 1
    }

    #[inline]
    pub fn is_plus(&self, k: usize) -> bool {
        (self.bits >> (self.n as usize - 1 - k)) & 1 == 1
    }

    #[inline]
    pub fn sign(&self, k: usize) -> i8 {
        if self.is_plus(k) {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len()).map(|k| self.sign(k)).collect()
    }

    pub fn with_sign(&self, k: usize, sign: i8) -> Self {
        let bit = 1 << (self.n as usize - 1 - k);
        let bits = if sign > 0 {
            self.bits | bit
        } else {
            self.bits & !bit
        };
        Self { bits, n: self.n }
    }

    /// Exchanges the chiralities of particles `k` and `k + 1`.
    pub fn swapped(&self, k: usize) -> Self {
        let (a, b) = (self.sign(k), self.sign(k + 1));
        self.with_sign(k, b).with_sign(k + 1, a)
    }

    /// Spin index `s'` with `s'_j = s_{images[j]}`.
    pub fn permuted(&self, images: &[usize]) -> Self {
        let mut out = Self::all_minus(self.len());
        for (j, &i) in images.iter().enumerate() {
            if self.is_plus(i) {
                out = out.with_sign(j, 1);
            }
        }
        out
    }
}

impl fmt::Display for SpinIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            f.write_str(if self.is_plus(k) { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SpinIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::InvalidParams(format!("bad spin character {c:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SpinIndex::new(&signs)
    }
}

fn check_particles(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PARTICLES {
        return Err(Error::InvalidParams(format!(
            "particle number {n} outside 1..={MAX_PARTICLES}"
        )));
    }
    Ok(())
}

/// A space-time point `(t, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub z: f64,
}

impl Event {
    pub fn new(t: f64, z: f64) -> Self {
        Self { t, z }
    }
}

/// Minkowski interval `(Δt)² - (Δz)²`; negative for space-like separation.
pub fn interval(a: Event, b: Event) -> f64 {
    let dt = a.t - b.t;
    let dz = a.z - b.z;
    dt * dt - dz * dz
}

/// One event per particle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    events: Vec<Event>,
}

impl Configuration {
    pub fn new(events: Vec<Event>) -> Self {
        Self { events }
    }

    /// Builds a configuration from `(t, z)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self::new(pairs.iter().map(|&(t, z)| Event::new(t, z)).collect())
    }

    pub fn equal_time(t: f64, zs: &[f64]) -> Self {
        Self::new(zs.iter().map(|&z| Event::new(t, z)).collect())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn events_mut(&mut self) -> &mut [Event] {
        &mut self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.t).collect()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.z).collect()
    }

    pub fn with_event(&self, k: usize, e: Event) -> Self {
        let mut out = self.clone();
        out.events[k] = e;
        out
    }
}

/// Where a configuration lies relative to the closed ordered domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Interior,
    /// Particles `k` and `k + 1` (0-based) coincide.
    BoundaryStratum(usize),
    OutsideOrderedDomain,
    NotSpacelike,
}

impl Classification {
    pub fn in_closed_domain(&self) -> bool {
        matches!(self, Classification::Interior | Classification::BoundaryStratum(_))
    }
}

fn coincident(a: Event, b: Event, tol: f64) -> bool {
    (a.t - b.t).abs() <= tol && (a.z - b.z).abs() <= tol
}

/// Classifies a configuration.
///
/// Events closer than `tol` in both coordinates count as coincident. Every
/// other pair must be strictly space-like, and neighbours must be ordered in
/// `z`. When several neighbouring pairs coincide the first one is reported.
pub fn classify(cfg: &Configuration, tol: f64) -> Classification {
    let ev = cfg.events();
    let n = ev.len();
    for a in 0..n {
        for b in a + 1..n {
            if !coincident(ev[a], ev[b], tol) && (ev[a].z - ev[b].z).abs() - (ev[a].t - ev[b].t).abs() <= tol {
                return Classification::NotSpacelike;
            }
        }
    }
    let mut stratum = None;
    for k in 0..n.saturating_sub(1) {
        if coincident(ev[k], ev[k + 1], tol) {
            stratum.get_or_insert(k);
        } else if ev[k + 1].z < ev[k].z {
            return Classification::OutsideOrderedDomain;
        }
    }
    match stratum {
        Some(k) => Classification::BoundaryStratum(k),
        None => Classification::Interior,
    }
}

/// Particle number, boundary phases and smoothness order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n_particles: usize,
    phases: Vec<f64>,
    smoothness: u32,
}

impl ModelParams {
    /// `phases[k]` couples particles `k` and `k + 1` (0-based).
    pub fn new(n_particles: usize, phases: Vec<f64>, smoothness: u32) -> Result<Self> {
        check_particles(n_particles)?;
        if phases.len() != n_particles - 1 {
            return Err(Error::InvalidParams(format!(
                "{} particles need {} phases, got {}",
                n_particles,
                n_particles - 1,
                phases.len()
            )));
        }
        if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidParams(format!("phase {p} is not finite")));
        }
        Ok(Self {
            n_particles,
            phases,
            smoothness,
        })
    }

    /// All phases equal to `π`: the non-interacting antisymmetric case.
    pub fn free(n_particles: usize, smoothness: u32) -> Result<Self> {
        Self::new(n_particles, vec![PI; n_particles.saturating_sub(1)], smoothness)
    }

    pub fn uniform(n_particles: usize, phase: f64, smoothness: u32) -> Result<Self> {
        Self::new(n_particles, vec![phase; n_particles.saturating_sub(1)], smoothness)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn phase(&self, k: usize) -> f64 {
        self.phases[k]
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn n_components(&self) -> usize {
        1 << self.n_particles
    }
}

/// `c_k = z_k + s_k t_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicValues {
    pub values: Vec<f64>,
}

pub fn characteristic_values(cfg: &Configuration, s: SpinIndex) -> CharacteristicValues {
    CharacteristicValues {
        values: cfg
            .events()
            .iter()
            .enumerate()
            .map(|(k, e)| e.z + f64::from(s.sign(k)) * e.t)
            .collect(),
    }
}

/// Reduces an angle to `(-π, π]`.
pub fn reduce_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    PI - (PI - x).rem_euclid(2.0 * PI)
}
