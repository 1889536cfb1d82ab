//! Sorting permutations and the phase picked up along a chain of collisions.
//!
//! Phases are accumulated as integer multiples of the boundary phases so that
//! different decompositions can be compared exactly.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{characteristic_values, reduce_angle, Configuration, ModelParams, SpinIndex};

/// A permutation of `0..N`, stored as its images `π(0), …, π(N-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidParams(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from 1-based images such as `[2, 1, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidParams("1-based images must be positive".into()));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &i)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (j, &i) in self.images.iter().enumerate() {
            inv[i] = j;
        }
        Self { images: inv }
    }

    /// Pairs of particles `a < b` that appear in reversed order.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let rank = self.inverse();
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rank.images[a] > rank.images[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of inversions, i.e. the minimal number of adjacent exchanges.
    pub fn collisions(&self) -> usize {
        self.inversions().len()
    }

    pub fn sign(&self) -> i32 {
        if self.collisions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Applies the permutation to a list: `out[j] = xs[π(j)]`.
    pub fn apply<T: Copy>(&self, xs: &[T]) -> Vec<T> {
        self.images.iter().map(|&i| xs[i]).collect()
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation { images: cur.clone() });
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// Stable sorting permutation: `c[π(0)] ≤ … ≤ c[π(N-1)]`, ties kept in input order.
pub fn sort_permutation(c: &[f64]) -> Permutation {
    let mut images: Vec<usize> = (0..c.len()).collect();
    images.sort_by(|&a, &b| c[a].total_cmp(&c[b]));
    Permutation { images }
}

/// Integer coefficients `n_k` of a phase `Σ_k n_k φ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseLedger {
    pub coefficients: Vec<i32>,
}

impl PhaseLedger {
    pub fn zero(n_phases: usize) -> Self {
        Self {
            coefficients: vec![0; n_phases],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    /// Unreduced value `Σ_k n_k φ_k`.
    pub fn raw(&self, phases: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(phases)
            .map(|(&c, &p)| f64::from(c) * p)
            .sum()
    }

    pub fn reduced(&self, phases: &[f64]) -> f64 {
        reduce_angle(self.raw(phases))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseResult {
    /// Total phase reduced to `(-π, π]`.
    pub value: f64,
    pub ledger: PhaseLedger,
    /// The spin index `s ∘ π` that labels the evaluated data component.
    pub sorted_spin: SpinIndex,
}

/// Left-to-right bubble sort of `labels`. `greater(a, b)` decides whether the
/// label `a` must move right past `b`; `on_swap(k, a)` sees every exchange at
/// position `k` before it happens, with `a` the label that moves right.
pub(crate) fn bubble_swaps<F, G>(labels: &mut [usize], mut greater: F, mut on_swap: G)
where
    F: FnMut(usize, usize) -> bool,
    G: FnMut(usize, usize),
{
    let n = labels.len();
    loop {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1) {
            if greater(labels[k], labels[k + 1]) {
                on_swap(k, labels[k]);
                labels.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

fn check_lengths(s: SpinIndex, pi: &Permutation, n_phases: usize) -> Result<()> {
    if s.len() != pi.len() || n_phases + 1 != pi.len() {
        return Err(Error::InvalidParams(format!(
            "spin of length {}, permutation of length {} and {} phases do not match",
            s.len(),
            pi.len(),
            n_phases
        )));
    }
    Ok(())
}

/// Ledger of the bubble-order decomposition of `π` into adjacent exchanges.
/// An exchange at position `k` adds `s_a φ_k`, where `a` is the particle
/// moving right.
pub fn bubble_ledger(s: SpinIndex, pi: &Permutation) -> PhaseLedger {
    let rank = pi.inverse();
    let mut labels: Vec<usize> = (0..pi.len()).collect();
    let mut ledger = PhaseLedger::zero(pi.len().saturating_sub(1));
    bubble_swaps(
        &mut labels,
        |a, b| rank.images[a] > rank.images[b],
        |k, a| ledger.coefficients[k] += i32::from(s.sign(a)),
    );
    ledger
}

/// Phase `φ^π_s` accumulated along the bubble-order decomposition of `π`.
///
/// For permutations reached by admissible collision sequences every
/// decomposition gives the same value; see [`decomposition_ledgers`].
pub fn phase(s: SpinIndex, pi: &Permutation, params: &ModelParams) -> Result<PhaseResult> {
    check_lengths(s, pi, params.phases().len())?;
    let ledger = bubble_ledger(s, pi);
    Ok(PhaseResult {
        value: ledger.reduced(params.phases()),
        sorted_spin: s.permuted(pi.images()),
        ledger,
    })
}

/// Distinct ledgers over all reduced decompositions of `π` into adjacent
/// exchanges. The search is exhaustive, so keep `N` small.
pub fn decomposition_ledgers(s: SpinIndex, pi: &Permutation) -> BTreeSet<PhaseLedger> {
    let rank = pi.inverse();
    let mut labels: Vec<usize> = (0..pi.len()).collect();
    let mut ledger = PhaseLedger::zero(pi.len().saturating_sub(1));
    let mut out = BTreeSet::new();
    fn rec(
        s: SpinIndex,
        rank: &[usize],
        labels: &mut Vec<usize>,
        ledger: &mut PhaseLedger,
        out: &mut BTreeSet<PhaseLedger>,
    ) {
        let mut any = false;
        for k in 0..labels.len().saturating_sub(1) {
            let (a, b) = (labels[k], labels[k + 1]);
            if rank[a] > rank[b] {
                any = true;
                let d = i32::from(s.sign(a));
                ledger.coefficients[k] += d;
                labels.swap(k, k + 1);
                rec(s, rank, labels, ledger, out);
                labels.swap(k, k + 1);
                ledger.coefficients[k] -= d;
            }
        }
        if !any {
            out.insert(ledger.clone());
        }
    }
    rec(s, rank.images(), &mut labels, &mut ledger, &mut out);
    out
}

/// Pairs `a < b` whose characteristic values are reversed although the
/// chirality rule forbids it. Inside the ordered domain a reversal needs
/// `(s_a, s_b) = (+, -)` with `t_a + t_b > 0` or `(-, +)` with `t_a + t_b < 0`;
/// the returned list is empty when that holds.
pub fn collision_rule_violations(cfg: &Configuration, s: SpinIndex) -> Vec<(usize, usize)> {
    let c = characteristic_values(cfg, s).values;
    let ev = cfg.events();
    let mut bad = Vec::new();
    for a in 0..c.len() {
        for b in a + 1..c.len() {
            if c[a] > c[b] {
                let tsum = ev[a].t + ev[b].t;
                let ok = match (s.sign(a), s.sign(b)) {
                    (1, -1) => tsum > 0.0,
                    (-1, 1) => tsum < 0.0,
                    _ => false,
                };
                if !ok {
                    bad.push((a, b));
                }
            }
        }
    }
    bad
}
