//! Built-in families of smooth, compactly supported initial data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::model::SpinIndex;

/// `amplitude · e^{i k (z - center)} · (1 - ((z - center)/width)²)^p` on
/// `|z - center| < width`, zero elsewhere. With `p = m + 1` it is `C^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lobe {
    pub center: f64,
    pub width: f64,
    #[serde(default = "one")]
    pub amplitude: Complex64,
    #[serde(default)]
    pub wavenumber: f64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl Lobe {
    pub fn new(center: f64, width: f64) -> Self {
        Self {
            center,
            width,
            amplitude: one(),
            wavenumber: 0.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_wavenumber(mut self, k: f64) -> Self {
        self.wavenumber = k;
        self
    }

    #[inline]
    pub fn value(&self, z: f64, power: i32) -> Complex64 {
        let d = z - self.center;
        let x = d / self.width;
        if x.abs() >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let base = (1.0 - x * x).powi(power);
        if self.wavenumber == 0.0 {
            self.amplitude * base
        } else {
            self.amplitude * Complex64::from_polar(base, self.wavenumber * d)
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }
}

/// A one-particle function built from lobes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub lobes: Vec<Lobe>,
}

impl Profile {
    pub fn new(lobes: Vec<Lobe>) -> Self {
        Self { lobes }
    }

    pub fn bump(center: f64, width: f64) -> Self {
        Self::new(vec![Lobe::new(center, width)])
    }

    #[inline]
    pub fn value(&self, z: f64, power: i32) -> Complex64 {
        self.lobes.iter().map(|l| l.value(z, power)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.lobes.iter().all(|l| l.amplitude == Complex64::new(0.0, 0.0))
    }

    pub fn supports(&self) -> Vec<(f64, f64)> {
        self.lobes.iter().map(Lobe::support).collect()
    }

    pub fn negated(&self) -> Self {
        Self::new(
            self.lobes
                .iter()
                .map(|l| l.clone().with_amplitude(-l.amplitude))
                .collect(),
        )
    }
}

/// A two-component one-particle spinor.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Orbital {
    #[serde(default)]
    pub minus: Profile,
    #[serde(default)]
    pub plus: Profile,
}

impl Orbital {
    #[inline]
    pub fn component(&self, sign: i8, z: f64, power: i32) -> Complex64 {
        if sign > 0 {
            self.plus.value(z, power)
        } else {
            self.minus.value(z, power)
        }
    }

    fn supports(&self) -> Vec<(f64, f64)> {
        let mut out = self.minus.supports();
        out.extend(self.plus.supports());
        out
    }
}

/// `g_s(z) = det[ orbital_j^{s_k}(z_k) ]`. Orbitals with pairwise disjoint
/// supports make every boundary value vanish, so the data are admissible for
/// any phases and any smoothness order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlaterFamily {
    pub orbitals: Vec<Orbital>,
}

type Row = SmallVec<[Complex64; 16]>;

impl SlaterFamily {
    pub fn value(&self, s: SpinIndex, z: &[f64], power: i32) -> Complex64 {
        let n = self.orbitals.len();
        let mut m: Row = SmallVec::with_capacity(n * n);
        for (k, &zk) in z.iter().enumerate() {
            let sk = s.sign(k);
            for orb in &self.orbitals {
                m.push(orb.component(sk, zk, power));
            }
        }
        determinant(&mut m, n)
    }

    pub fn supports(&self) -> Vec<(f64, f64)> {
        self.orbitals.iter().flat_map(Orbital::supports).collect()
    }

    /// `2N` slots at `spacing · (j - (2N-1)/2)`; orbital `k` lives on slots
    /// `k` and `k + N`.
    pub fn bump_layout(n: usize, spacing: f64) -> Self {
        let slot = |j: usize| spacing * (j as f64 - (2 * n - 1) as f64 / 2.0);
        let w = 0.45 * spacing;
        let orbitals = (0..n)
            .map(|k| {
                let (a, b) = (slot(k), slot(k + n));
                Orbital {
                    minus: Profile::new(vec![
                        Lobe::new(a, w).with_wavenumber(0.7),
                        Lobe::new(b, w).with_amplitude(Complex64::new(0.0, 0.4)),
                    ]),
                    plus: Profile::new(vec![
                        Lobe::new(a, w).with_amplitude(Complex64::new(0.5, 0.0)),
                        Lobe::new(b, w)
                            .with_amplitude(Complex64::new(0.8, -0.2))
                            .with_wavenumber(-1.1),
                    ]),
                }
            })
            .collect();
        Self { orbitals }
    }
}

impl SlaterFamily {
    /// One slot per orbital at `spacing · (k - (N-1)/2)`, one real-shaped
    /// lobe per component. Cheaper to integrate than [`Self::bump_layout`].
    pub fn compact_layout(n: usize, spacing: f64) -> Self {
        let w = 0.45 * spacing;
        let orbitals = (0..n)
            .map(|k| {
                let c = spacing * (k as f64 - (n - 1) as f64 / 2.0);
                Orbital {
                    minus: Profile::bump(c, w),
                    plus: Profile::new(vec![Lobe::new(c, w).with_amplitude(Complex64::new(0.5, -0.3 * k as f64))]),
                }
            })
            .collect();
        Self { orbitals }
    }
}

/// Determinant by Gaussian elimination with partial pivoting; `m` is row-major
/// and is overwritten.
fn determinant(m: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r * n + col].norm_sqr() > m[piv * n + col].norm_sqr() {
                piv = r;
            }
        }
        let p = m[piv * n + col];
        if p == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for c in 0..n {
                m.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        det *= p;
        for r in col + 1..n {
            let f = m[r * n + col] / p;
            if f != Complex64::new(0.0, 0.0) {
                for c in col..n {
                    let v = m[col * n + c];
                    m[r * n + c] -= f * v;
                }
            }
        }
    }
    det
}

/// Data with two non-zero components,
/// `g_{+-+…+} = α(z_1) β(z_2) ζ(z_3…)` and `g_{-++…+} = -β(z_1) α(z_2) ζ(z_3…)`,
/// where `ζ` is a product of one-particle profiles. `α`, `β` and `ζ` need
/// pairwise disjoint supports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductFamily {
    pub alpha: Profile,
    pub beta: Profile,
    #[serde(default)]
    pub zeta: Vec<Profile>,
}

impl ProductFamily {
    pub fn n_particles(&self) -> usize {
        2 + self.zeta.len()
    }

    fn tail(&self, z: &[f64], power: i32) -> Complex64 {
        self.zeta
            .iter()
            .zip(&z[2..])
            .map(|(p, &x)| p.value(x, power))
            .product()
    }

    fn tail_is_plus(&self, s: SpinIndex) -> bool {
        (2..s.len()).all(|k| s.is_plus(k))
    }

    pub fn value(&self, s: SpinIndex, z: &[f64], power: i32) -> Complex64 {
        if !self.tail_is_plus(s) {
            return Complex64::new(0.0, 0.0);
        }
        match (s.sign(0), s.sign(1)) {
            (1, -1) => self.alpha.value(z[0], power) * self.beta.value(z[1], power) * self.tail(z, power),
            (-1, 1) => -self.beta.value(z[0], power) * self.alpha.value(z[1], power) * self.tail(z, power),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn supports(&self) -> Vec<(f64, f64)> {
        let mut out = self.alpha.supports();
        out.extend(self.beta.supports());
        for z in &self.zeta {
            out.extend(z.supports());
        }
        out
    }

    /// Interleaved layout: `α` on lobes at `-3` and `1`, `β` on lobes at `-1`
    /// and `3`, spectators to the right.
    pub fn entangle_layout(n: usize) -> Self {
        let w = 0.9;
        Self {
            alpha: Profile::new(vec![
                Lobe::new(-3.0, w),
                Lobe::new(1.0, w).with_amplitude(Complex64::new(0.6, 0.3)),
            ]),
            beta: Profile::new(vec![
                Lobe::new(-1.0, w).with_wavenumber(0.5),
                Lobe::new(3.0, w).with_amplitude(Complex64::new(-0.7, 0.0)),
            ]),
            zeta: (2..n).map(|j| Profile::bump(6.0 + 2.0 * (j - 2) as f64, w)).collect(),
        }
    }
}

/// Two-particle data with non-vanishing boundary values:
/// `g_{+-}(x, y) = e^{iθ} h_1(x) h_2(y)` and `g_{-+}(x, y) = h_1(y) h_2(x)`.
/// They satisfy the boundary condition with phase `θ` and join smoothly
/// across the coincidence line. The equal-sign components carry the
/// antisymmetric pair `p(x) q(y) - q(x) p(y)` when given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledFamily {
    pub theta: f64,
    pub h1: Profile,
    pub h2: Profile,
    #[serde(default)]
    pub equal_sign: Option<(Profile, Profile)>,
}

impl CoupledFamily {
    pub fn value(&self, s: SpinIndex, z: &[f64], power: i32) -> Complex64 {
        let (x, y) = (z[0], z[1]);
        match (s.sign(0), s.sign(1)) {
            (1, -1) => {
                Complex64::from_polar(1.0, self.theta) * self.h1.value(x, power) * self.h2.value(y, power)
            }
            (-1, 1) => self.h1.value(y, power) * self.h2.value(x, power),
            _ => match &self.equal_sign {
                Some((p, q)) => {
                    p.value(x, power) * q.value(y, power) - q.value(x, power) * p.value(y, power)
                }
                None => Complex64::new(0.0, 0.0),
            },
        }
    }

    pub fn supports(&self) -> Vec<(f64, f64)> {
        let mut out = self.h1.supports();
        out.extend(self.h2.supports());
        if let Some((p, q)) = &self.equal_sign {
            out.extend(p.supports());
            out.extend(q.supports());
        }
        out
    }

    pub fn default_layout(theta: f64) -> Self {
        Self {
            theta,
            h1: Profile::new(vec![Lobe::new(-0.4, 2.0).with_wavenumber(0.8)]),
            h2: Profile::new(vec![Lobe::new(0.5, 1.8).with_amplitude(Complex64::new(0.7, 0.4))]),
            equal_sign: Some((Profile::bump(-0.5, 1.5), Profile::bump(0.8, 1.2).with_wavenumber_all(1.3))),
        }
    }
}

impl Profile {
    fn with_wavenumber_all(mut self, k: f64) -> Self {
        for l in &mut self.lobes {
            l.wavenumber = k;
        }
        self
    }
}

/// Only `g_{+…+} = ∏_k p_k(z_k)` is non-zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleFamily {
    pub profiles: Vec<Profile>,
}

impl SingleFamily {
    pub fn value(&self, s: SpinIndex, z: &[f64], power: i32) -> Complex64 {
        if s != SpinIndex::all_plus(self.profiles.len()) {
            return Complex64::new(0.0, 0.0);
        }
        self.profiles
            .iter()
            .zip(z)
            .map(|(p, &x)| p.value(x, power))
            .product()
    }

    pub fn supports(&self) -> Vec<(f64, f64)> {
        self.profiles.iter().flat_map(Profile::supports).collect()
    }

    pub fn default_layout(n: usize) -> Self {
        Self {
            profiles: (0..n)
                .map(|k| {
                    Profile::new(vec![
                        Lobe::new(2.5 * k as f64 - 1.25 * (n - 1) as f64, 1.0).with_wavenumber(0.9)
                    ])
                })
                .collect(),
        }
    }
}
