//! Initial data `g_s` on the ordered simplex.

pub mod families;
pub mod grid_file;
pub mod validate;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{SpinIndex, MAX_PARTICLES};
use crate::phases::{sort_permutation, Permutation};

pub use families::{CoupledFamily, Lobe, Orbital, ProductFamily, Profile, SingleFamily, SlaterFamily};
pub use grid_file::{load_grid, read_grid, sample_grid, save_grid, write_grid, GridData};
pub use validate::{validate, FailureKind, ValidateOptions, ValidationFailure, ValidationReport};

pub type DataFn = dyn Fn(SpinIndex, &[f64]) -> Complex64 + Send + Sync;

#[derive(Clone)]
pub enum DataSource {
    Slater(SlaterFamily),
    Product(ProductFamily),
    Coupled(CoupledFamily),
    Single(SingleFamily),
    Grid(GridData),
    Custom(Arc<DataFn>),
    Antisymmetrized(Box<InitialData>),
}

impl fmt::Debug for DataSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSource::Slater(x) => f.debug_tuple("Slater").field(x).finish(),
            DataSource::Product(x) => f.debug_tuple("Product").field(x).finish(),
            DataSource::Coupled(x) => f.debug_tuple("Coupled").field(x).finish(),
            DataSource::Single(x) => f.debug_tuple("Single").field(x).finish(),
            DataSource::Grid(x) => f.debug_tuple("Grid").field(&x.points()).finish(),
            DataSource::Custom(_) => f.write_str("Custom"),
            DataSource::Antisymmetrized(x) => f.debug_tuple("Antisymmetrized").field(x).finish(),
        }
    }
}

/// Initial data for `N` particles: `2^N` complex functions of `N` positions,
/// supported in `[-R, R]^N` and of smoothness class `C^m`.
#[derive(Clone, Debug)]
pub struct InitialData {
    n: usize,
    smoothness: u32,
    supports: Vec<(f64, f64)>,
    source: DataSource,
}

fn merge(mut iv: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

impl InitialData {
    fn build(n: usize, smoothness: u32, supports: Vec<(f64, f64)>, source: DataSource) -> Result<Self> {
        if n == 0 || n > MAX_PARTICLES {
            return Err(Error::InvalidParams(format!("particle number {n} unsupported")));
        }
        if supports.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
            return Err(Error::InvalidParams("support intervals must be finite".into()));
        }
        Ok(Self {
            n,
            smoothness,
            supports: merge(supports),
            source,
        })
    }

    pub fn slater(family: SlaterFamily, smoothness: u32) -> Result<Self> {
        let n = family.orbitals.len();
        let sup = family.supports();
        Self::build(n, smoothness, sup, DataSource::Slater(family))
    }

    pub fn product(family: ProductFamily, smoothness: u32) -> Result<Self> {
        let n = family.n_particles();
        let sup = family.supports();
        Self::build(n, smoothness, sup, DataSource::Product(family))
    }

    pub fn coupled(family: CoupledFamily, smoothness: u32) -> Result<Self> {
        let sup = family.supports();
        Self::build(2, smoothness, sup, DataSource::Coupled(family))
    }

    pub fn single(family: SingleFamily, smoothness: u32) -> Result<Self> {
        let n = family.profiles.len();
        let sup = family.supports();
        Self::build(n, smoothness, sup, DataSource::Single(family))
    }

    pub fn grid(grid: GridData) -> Result<Self> {
        let r = grid.radius();
        Self::build(grid.n_particles(), grid.smoothness(), vec![(-r, r)], DataSource::Grid(grid))
    }

    /// Data given by a closure, assumed to vanish outside `[-radius, radius]^N`.
    pub fn custom<F>(n: usize, smoothness: u32, radius: f64, f: F) -> Result<Self>
    where
        F: Fn(SpinIndex, &[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self::build(n, smoothness, vec![(-radius, radius)], DataSource::Custom(Arc::new(f)))
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn source(&self) -> &DataSource {
        &self.source
    }

    /// Merged intervals outside of which every coordinate argument gives zero.
    pub fn coordinate_support(&self) -> &[(f64, f64)] {
        &self.supports
    }

    pub fn support_radius(&self) -> f64 {
        self.supports
            .iter()
            .fold(0.0f64, |r, &(a, b)| r.max(a.abs()).max(b.abs()))
    }

    /// Evaluates the underlying function at arbitrary positions.
    ///
    /// Family and closure data are defined on all of `R^N`; grid data are
    /// extended antisymmetrically from the ordered simplex.
    pub fn value(&self, s: SpinIndex, z: &[f64]) -> Complex64 {
        let p = self.smoothness as i32 + 1;
        match &self.source {
            DataSource::Slater(f) => f.value(s, z, p),
            DataSource::Product(f) => f.value(s, z, p),
            DataSource::Coupled(f) => f.value(s, z, p),
            DataSource::Single(f) => f.value(s, z, p),
            DataSource::Grid(g) => {
                if z.windows(2).all(|w| w[0] <= w[1]) {
                    g.value(s, z)
                } else {
                    self.extended(s, z)
                }
            }
            DataSource::Custom(f) => f(s, z),
            DataSource::Antisymmetrized(raw) => antisymmetric_average(raw, s, z),
        }
    }

    /// Antisymmetric extension: sorts the arguments (stably) and multiplies by
    /// the sign of the sorting permutation.
    pub fn extended(&self, s: SpinIndex, z: &[f64]) -> Complex64 {
        let pi = sort_permutation(z);
        if pi.is_identity() {
            return self.value(s, z);
        }
        let zs = pi.apply(z);
        let ss = s.permuted(pi.images());
        let v = self.value(ss, &zs);
        if pi.sign() == 1 {
            v
        } else {
            -v
        }
    }
}

fn antisymmetric_average(raw: &InitialData, s: SpinIndex, z: &[f64]) -> Complex64 {
    let perms = Permutation::all(z.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for rho in &perms {
        let v = raw.value(s.permuted(rho.images()), &rho.apply(z));
        if rho.sign() == 1 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    acc / perms.len() as f64
}

/// Projects data onto the antisymmetric subspace:
/// `(1/N!) Σ_ρ sgn(ρ) f_{s∘ρ}(z∘ρ)`. The input must be defined on all of `R^N`.
/// Applying the projector twice returns the first result unchanged.
pub fn antisymmetrize(raw: &InitialData) -> InitialData {
    if matches!(raw.source, DataSource::Antisymmetrized(_)) {
        return raw.clone();
    }
    InitialData {
        n: raw.n,
        smoothness: raw.smoothness,
        supports: raw.supports.clone(),
        source: DataSource::Antisymmetrized(Box::new(raw.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw() -> InitialData {
        InitialData::custom(3, 2, 4.0, |s, z| {
            Complex64::new(z[0] + 2.0 * z[1] * z[1] - z[2], s.linear() as f64 * z[2])
        })
        .unwrap()
    }

    #[test]
    fn antisymmetrized_data_changes_sign_under_exchange() {
        let a = antisymmetrize(&raw());
        let z = [0.3, -1.2, 2.5];
        for s in SpinIndex::all(3) {
            for k in 0..2 {
                let mut zz = z;
                zz.swap(k, k + 1);
                let lhs = a.value(s.swapped(k), &zz);
                assert!((lhs + a.value(s, &z)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn projector_is_idempotent_numerically() {
        let once = antisymmetrize(&raw());
        let f = once.clone();
        let as_closure = InitialData::custom(3, 2, 4.0, move |s, z| f.value(s, z)).unwrap();
        let twice = antisymmetrize(&as_closure);
        let z = [1.1, -0.4, 0.7];
        for s in SpinIndex::all(3) {
            assert!((twice.value(s, &z) - once.value(s, &z)).norm() < 1e-14);
        }
    }

    #[test]
    fn supports_are_merged() {
        let d = InitialData::single(SingleFamily::default_layout(3), 1).unwrap();
        assert_eq!(d.coordinate_support().len(), 3);
        assert!((d.support_radius() - 3.5).abs() < 1e-15);
        assert_eq!(merge(vec![(0.0, 2.0), (1.0, 3.0), (5.0, 6.0)]), vec![(0.0, 3.0), (5.0, 6.0)]);
    }
}
