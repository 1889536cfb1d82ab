//! Space-like hypersurfaces given as graphs `t = t_Σ(z)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One term `amplitude · tanh((z - center) / width)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TanhKink {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

/// Graph surfaces. JSON form: `{"type": "flat" | "boost" | "tanh" | "boosted", "params": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "lowercase")]
pub enum Hypersurface {
    /// `t ≡ t0`.
    Flat {
        #[serde(default)]
        t0: f64,
    },
    /// Image of `t ≡ t0` under a boost: `t = t0 / cosh β + z tanh β`.
    Boost {
        #[serde(default)]
        t0: f64,
        rapidity: f64,
    },
    /// `t = offset + velocity · z + Σ a · tanh((z - c) / w)`.
    Tanh {
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        velocity: f64,
        #[serde(default)]
        kinks: Vec<TanhKink>,
    },
    /// Image of another surface under a boost.
    Boosted {
        base: Box<Hypersurface>,
        rapidity: f64,
    },
}

impl Hypersurface {
    pub fn flat(t0: f64) -> Self {
        Hypersurface::Flat { t0 }
    }

    pub fn boosted(base: Hypersurface, rapidity: f64) -> Self {
        Hypersurface::Boosted {
            base: Box::new(base),
            rapidity,
        }
    }

    /// `(t_Σ(z), t_Σ'(z))`.
    pub fn time_and_slope(&self, z: f64) -> (f64, f64) {
        match self {
            Hypersurface::Flat { t0 } => (*t0, 0.0),
            Hypersurface::Boost { t0, rapidity } => (t0 / rapidity.cosh() + z * rapidity.tanh(), rapidity.tanh()),
            Hypersurface::Tanh {
                offset,
                velocity,
                kinks,
            } => {
                let mut t = offset + velocity * z;
                let mut d = *velocity;
                for k in kinks {
                    let th = ((z - k.center) / k.width).tanh();
                    t += k.amplitude * th;
                    d += k.amplitude / k.width * (1.0 - th * th);
                }
                (t, d)
            }
            Hypersurface::Boosted { base, rapidity } => {
                let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
                let zb = base.invert_boosted_position(z, ch, sh);
                let (tb, db) = base.time_and_slope(zb);
                (tb * ch + zb * sh, (db * ch + sh) / (ch + db * sh))
            }
        }
    }

    pub fn time(&self, z: f64) -> f64 {
        self.time_and_slope(z).0
    }

    /// Solves `z cosh β + t(z) sinh β = target` for `z`; the left side is
    /// strictly increasing on a space-like surface.
    fn invert_boosted_position(&self, target: f64, ch: f64, sh: f64) -> f64 {
        let h = |z: f64| {
            let (t, d) = self.time_and_slope(z);
            (z * ch + t * sh - target, ch + d * sh)
        };
        let mut z = target / ch;
        for _ in 0..60 {
            let (f, df) = h(z);
            if f.abs() <= 1e-15 * (1.0 + target.abs()) || !(df > 0.0) {
                break;
            }
            let step = f / df;
            z -= step;
            if step.abs() <= 1e-16 * (1.0 + z.abs()) {
                break;
            }
        }
        let (f, _) = h(z);
        if f.abs() <= 1e-12 * (1.0 + target.abs()) {
            return z;
        }
        let (lo, hi) = bracket(|x| h(x).0, 0.0, z);
        bisect(|x| h(x).0, lo, hi)
    }

    /// Checks `|t'| < 1` on a sample of `[lo, hi]`.
    pub fn check_spacelike(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        for i in 0..=samples {
            let z = lo + (hi - lo) * i as f64 / samples.max(1) as f64;
            let (_, d) = self.time_and_slope(z);
            if !(d.abs() < 1.0) {
                return Err(Error::Slope { z, slope: d });
            }
        }
        Ok(())
    }

    /// Largest `|t'|` the description allows; exact for the linear forms.
    pub fn slope_bound(&self) -> f64 {
        match self {
            Hypersurface::Flat { .. } => 0.0,
            Hypersurface::Boost { rapidity, .. } => rapidity.tanh().abs(),
            Hypersurface::Tanh { velocity, kinks, .. } => {
                velocity.abs() + kinks.iter().map(|k| (k.amplitude / k.width).abs()).sum::<f64>()
            }
            Hypersurface::Boosted { base, rapidity } => {
                let b = base.slope_bound();
                if b >= 1.0 {
                    return b;
                }
                let v = rapidity.tanh().abs();
                (b + v) / (1.0 + b * v)
            }
        }
    }
}

/// Expands `[a, b]` around `seed` until the increasing function `f` changes sign.
pub(crate) fn bracket<F: Fn(f64) -> f64>(f: F, target: f64, seed: f64) -> (f64, f64) {
    let mut step = 1.0;
    let (mut a, mut b) = (seed - step, seed + step);
    for _ in 0..200 {
        let (fa, fb) = (f(a) - target, f(b) - target);
        if fa <= 0.0 && fb >= 0.0 {
            break;
        }
        step *= 2.0;
        if fa > 0.0 {
            a -= step;
        }
        if fb < 0.0 {
            b += step;
        }
    }
    (a, b)
}

/// Root of an increasing function on a bracketing interval.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
