//! Seeded random geometry for tests and verification sweeps.

use std::f64::consts::PI;

use rand::Rng;

use crate::geometry::{Hypersurface, TanhKink};
use crate::model::{Configuration, Event};

/// Shape of random configurations.
#[derive(Clone, Debug)]
pub struct ConfigSampler {
    /// Range of the spatial gap between neighbours.
    pub gap: (f64, f64),
    /// Largest `|t_{k+1} - t_k|` as a fraction of the gap.
    pub time_ratio: f64,
    /// Common time offset drawn from `[-time_offset, time_offset]`.
    pub time_offset: f64,
    /// Range for the leftmost position.
    pub start: (f64, f64),
}

impl Default for ConfigSampler {
    fn default() -> Self {
        Self {
            gap: (0.2, 3.0),
            time_ratio: 0.95,
            time_offset: 6.0,
            start: (-6.0, 2.0),
        }
    }
}

impl ConfigSampler {
    /// Ordered, pairwise space-like configuration. Neighbouring time
    /// differences stay below the gap, which makes every pair space-like.
    pub fn interior<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Configuration {
        let mut z = rng.gen_range(self.start.0..self.start.1);
        let mut t = rng.gen_range(-self.time_offset..=self.time_offset);
        let mut events = Vec::with_capacity(n);
        events.push(Event::new(t, z));
        for _ in 1..n {
            let gap = rng.gen_range(self.gap.0..self.gap.1);
            let dt = gap * self.time_ratio * rng.gen_range(-1.0..1.0);
            z += gap;
            t += dt;
            events.push(Event::new(t, z));
        }
        Configuration::new(events)
    }

    /// Like [`Self::interior`] with particles `k` and `k + 1` (0-based) at one
    /// space-time point.
    pub fn stratum<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, k: usize) -> Configuration {
        let base = self.interior(rng, n - 1);
        let mut events = base.events().to_vec();
        events.insert(k, events[k]);
        Configuration::new(events)
    }

    /// Equal-time ordered configuration.
    pub fn equal_time<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, t: f64) -> Configuration {
        let mut z = rng.gen_range(self.start.0..self.start.1);
        let mut zs = vec![z];
        for _ in 1..n {
            z += rng.gen_range(self.gap.0..self.gap.1);
            zs.push(z);
        }
        Configuration::equal_time(t, &zs)
    }
}

/// Angle in `(-π, π]`.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let x = rng.gen_range(-PI..PI);
    if x == -PI {
        PI
    } else {
        x
    }
}

/// `t = offset + v z + Σ a tanh((z - c)/w)` with `|v| + Σ |a/w| ≤ bound`,
/// so `|t'| ≤ bound` everywhere.
pub fn random_tanh_surface<R: Rng + ?Sized>(rng: &mut R, bound: f64) -> Hypersurface {
    let kinks = rng.gen_range(1..=3);
    let mut budget: Vec<f64> = (0..=kinks).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = budget.iter().sum();
    for b in &mut budget {
        *b *= bound / total;
    }
    let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let velocity = sign(rng) * budget[0] * rng.gen_range(0.0..=1.0);
    let kinks = budget[1..]
        .iter()
        .map(|&b| {
            let width = rng.gen_range(0.5..3.0);
            TanhKink {
                amplitude: sign(rng) * b * width,
                center: rng.gen_range(-4.0..4.0),
                width,
            }
        })
        .collect();
    Hypersurface::Tanh {
        offset: rng.gen_range(-2.0..2.0),
        velocity,
        kinks,
    }
}
