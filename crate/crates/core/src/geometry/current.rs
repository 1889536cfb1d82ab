//! The tensor current `j^{μ_1…μ_N}` of the multi-time wave function.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::model::{Configuration, SpinIndex};
use crate::solver::WaveFunction;

/// `2^N` current components. Entry `μ` is stored at the bit pattern with
/// `μ_k` at bit `N-1-k`, so `(0, …, 0)` comes first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurrentTensor {
    n: usize,
    values: Vec<f64>,
}

impl CurrentTensor {
    /// `j^μ = Σ_s |ψ_s|² Π_k (-s_k)^{μ_k}`.
    ///
    /// With `γ⁰ = σ_1` and `γ¹ = σ_1 σ_3` acting on `(ψ_-, ψ_+)`, the matrix
    /// `γ⁰γ¹` is `diag(1, -1)`, hence the factor `-s_k` for every spatial
    /// index.
    pub fn from_spinor(n: usize, psi: &[Complex64]) -> Self {
        let mut values = vec![0.0; 1 << n];
        for (s, v) in SpinIndex::all(n).zip(psi) {
            let rho = v.norm_sqr();
            if rho == 0.0 {
                continue;
            }
            for (mu, out) in values.iter_mut().enumerate() {
                let mut sign = 1.0;
                for k in 0..n {
                    if (mu >> (n - 1 - k)) & 1 == 1 {
                        sign *= -f64::from(s.sign(k));
                    }
                }
                *out += sign * rho;
            }
        }
        Self { n, values }
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn get(&self, mu: &[u8]) -> f64 {
        let idx = mu.iter().fold(0usize, |acc, &m| (acc << 1) | usize::from(m & 1));
        self.values[idx]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `Σ_μ j^μ Π_k n_k(μ_k)` with one covector `(n_k^0, n_k^1)` per particle.
    pub fn contract(&self, covectors: &[(f64, f64)]) -> f64 {
        let n = self.n;
        self.values
            .iter()
            .enumerate()
            .map(|(mu, &j)| {
                let w: f64 = (0..n)
                    .map(|k| {
                        if (mu >> (n - 1 - k)) & 1 == 1 {
                            covectors[k].1
                        } else {
                            covectors[k].0
                        }
                    })
                    .product();
                j * w
            })
            .sum()
    }
}

/// Current at a space-like configuration in any particle order.
pub fn current(psi: &WaveFunction, cfg: &Configuration) -> Result<CurrentTensor> {
    let spinor = psi.spinor_full(cfg)?;
    Ok(CurrentTensor::from_spinor(psi.n_particles(), &spinor))
}
