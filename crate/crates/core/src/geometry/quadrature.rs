//! Adaptive Gauss–Legendre cubature over ordered point sets
//! `lo ≤ z_1 ≤ … ≤ z_N ≤ hi`.
//!
//! A cell is a product of ordered blocks: `r` consecutive coordinates that
//! share an interval `[a, b]` and are ordered inside it. Each block is mapped
//! to the unit cube by the collapsed coordinates
//! `x_r = a + (b - a) u_r`, `x_{j-1} = a + (x_j - a) u_{j-1}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub a: f64,
    pub b: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub runs: SmallVec<[Run; 4]>,
    pub depth: u32,
}

impl Cell {
    pub fn volume(&self) -> f64 {
        self.runs
            .iter()
            .map(|r| (r.b - r.a).powi(r.count as i32) / factorial(r.count))
            .product()
    }

    fn children(&self) -> Vec<Cell> {
        let mut out = vec![Cell {
            runs: SmallVec::new(),
            depth: self.depth + 1,
        }];
        for run in &self.runs {
            let m = 0.5 * (run.a + run.b);
            let mut next = Vec::with_capacity(out.len() * (run.count + 1));
            for c in &out {
                for left in (0..=run.count).rev() {
                    let mut d = c.clone();
                    if left > 0 {
                        d.runs.push(Run { a: run.a, b: m, count: left });
                    }
                    if left < run.count {
                        d.runs.push(Run { a: m, b: run.b, count: run.count - left });
                    }
                    next.push(d);
                }
            }
            out = next;
        }
        out
    }
}

fn factorial(r: usize) -> f64 {
    (1..=r).map(|k| k as f64).product()
}

/// Nodes of an ordered block in `[0, 1]^r` with weights including the
/// collapse Jacobian.
#[derive(Clone, Debug)]
struct BlockRule {
    r: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl BlockRule {
    fn new(r: usize, gl: &[(f64, f64)]) -> Self {
        let q = gl.len();
        let total = q.pow(r as u32);
        let mut points = Vec::with_capacity(total * r);
        let mut weights = Vec::with_capacity(total);
        let mut digits = vec![0usize; r];
        let mut y = vec![0.0; r];
        for _ in 0..total {
            let mut w = 1.0;
            for j in (0..r).rev() {
                let (x, wj) = gl[digits[j]];
                let u = 0.5 * (x + 1.0);
                w *= 0.5 * wj;
                y[j] = if j + 1 == r { u } else { y[j + 1] * u };
                if j + 1 < r {
                    w *= y[j + 1];
                }
            }
            points.extend_from_slice(&y);
            weights.push(w);
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
        Self { r, points, weights }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }
}

/// Fine and coarse rules for every block size up to `N`.
#[derive(Clone, Debug)]
pub struct SimplexRules {
    fine: Vec<BlockRule>,
    coarse: Vec<BlockRule>,
}

impl SimplexRules {
    /// `order`-point Gauss–Legendre per collapsed direction, compared
    /// against `order - 2` points for the error estimate.
    pub fn new(n: usize, order: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::InvalidParams(format!("quadrature order {order} below 3")));
        }
        let nodes = |q: usize| -> Result<Vec<(f64, f64)>> {
            let q = NonZeroUsize::new(q).ok_or_else(|| Error::InvalidParams("order 0".into()))?;
            let rule = GaussLegendre::new(q);
            Ok(rule.as_node_weight_pairs().to_vec())
        };
        let hi = nodes(order)?;
        let lo = nodes(order - 2)?;
        Ok(Self {
            fine: (0..=n).map(|r| BlockRule::new(r, &hi)).collect(),
            coarse: (0..=n).map(|r| BlockRule::new(r, &lo)).collect(),
        })
    }

    fn apply<F>(&self, rules: &[BlockRule], cell: &Cell, z: &mut [f64], f: &F) -> Result<f64>
    where
        F: Fn(&[f64]) -> Result<f64>,
    {
        let blocks: SmallVec<[&BlockRule; 4]> = cell.runs.iter().map(|r| &rules[r.count]).collect();
        let scale: f64 = cell
            .runs
            .iter()
            .map(|r| (r.b - r.a).powi(r.count as i32))
            .product();
        let mut idx: SmallVec<[usize; 4]> = SmallVec::from_elem(0, blocks.len());
        let mut acc = 0.0;
        loop {
            let mut w = scale;
            let mut off = 0;
            for (bi, (run, rule)) in cell.runs.iter().zip(&blocks).enumerate() {
                let i = idx[bi];
                w *= rule.weights[i];
                for (j, y) in rule.points[i * rule.r..(i + 1) * rule.r].iter().enumerate() {
                    z[off + j] = run.a + (run.b - run.a) * y;
                }
                off += rule.r;
            }
            acc += w * f(z)?;
            let mut bi = 0;
            loop {
                if bi == blocks.len() {
                    return Ok(acc);
                }
                idx[bi] += 1;
                if idx[bi] < blocks[bi].len() {
                    break;
                }
                idx[bi] = 0;
                bi += 1;
            }
        }
    }

    fn evaluate<F>(&self, cell: &Cell, n: usize, f: &F) -> Result<(f64, f64, usize)>
    where
        F: Fn(&[f64]) -> Result<f64>,
    {
        let mut z: SmallVec<[f64; 8]> = SmallVec::from_elem(0.0, n);
        let fine = self.apply(&self.fine, cell, &mut z, f)?;
        let coarse = self.apply(&self.coarse, cell, &mut z, f)?;
        let evals = cell
            .runs
            .iter()
            .map(|r| self.fine[r.count].len())
            .product::<usize>()
            + cell
                .runs
                .iter()
                .map(|r| self.coarse[r.count].len())
                .product::<usize>();
        Ok((fine, (fine - coarse).abs(), evals))
    }
}

#[derive(Clone, Debug)]
pub struct AdaptiveOptions {
    pub order: usize,
    /// Equal intervals per coordinate for the initial partition.
    pub initial_intervals: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_cells: usize,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            order: 6,
            initial_intervals: 8,
            rel_tol: 1e-9,
            abs_tol: 1e-13,
            max_cells: 400_000,
            max_depth: 14,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cells: usize,
    pub pruned: usize,
    pub evaluations: usize,
}

struct Scored {
    cell: Cell,
    value: f64,
    error: f64,
    id: usize,
}

impl PartialEq for Scored {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Scored {}
impl PartialOrd for Scored {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scored {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn initial_cells(n: usize, edges: &[f64]) -> Vec<Cell> {
    let m = edges.len() - 1;
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut runs: SmallVec<[Run; 4]> = SmallVec::new();
        for &i in &idx {
            match runs.last_mut() {
                Some(r) if r.a == edges[i] => r.count += 1,
                _ => runs.push(Run { a: edges[i], b: edges[i + 1], count: 1 }),
            }
        }
        out.push(Cell { runs, depth: 0 });
        // next nondecreasing tuple
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] + 1 < m {
                idx[k] += 1;
                let v = idx[k];
                for j in k + 1..n {
                    idx[j] = v;
                }
                break;
            }
        }
    }
}

/// Sorted partition of `[lo, hi]` through every breakpoint strictly inside
/// it, with gaps longer than `(hi - lo) / intervals` split evenly.
pub fn partition(lo: f64, hi: f64, breakpoints: &[f64], intervals: usize) -> Vec<f64> {
    let min_gap = 1e-9 * (hi - lo);
    let mut pts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo + min_gap && x < hi - min_gap)
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|b, a| *b - *a < min_gap);
    let cap = (hi - lo) / intervals.max(1) as f64;
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let pieces = ((w[1] - w[0]) / cap).ceil().max(1.0) as usize;
        for i in 1..pieces {
            out.push(w[0] + (w[1] - w[0]) * i as f64 / pieces as f64);
        }
        out.push(w[1]);
    }
    *out.last_mut().unwrap() = hi;
    out
}

/// Integrates `f` over `lo ≤ z_1 ≤ … ≤ z_N ≤ hi`, starting from
/// `initial_intervals` equal intervals per coordinate.
pub fn integrate_ordered<F, P>(
    n: usize,
    lo: f64,
    hi: f64,
    opts: &AdaptiveOptions,
    f: F,
    prune: P,
) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
    P: Fn(&Cell) -> bool + Sync,
{
    if !(hi > lo) {
        return Err(Error::InvalidParams(format!("empty integration box [{lo}, {hi}]")));
    }
    integrate_partition(n, &partition(lo, hi, &[], opts.initial_intervals), opts, f, prune)
}

/// Integrates `f` over `edges[0] ≤ z_1 ≤ … ≤ z_N ≤ edges[last]`, with initial
/// cells on the given partition. Placing the edges where `f` is not smooth
/// keeps refinement away from them. Cells for which `prune` returns true
/// contribute zero and are not evaluated. Refinement always splits the cell
/// with the largest error estimate; the result does not depend on the number
/// of threads.
pub fn integrate_partition<F, P>(
    n: usize,
    edges: &[f64],
    opts: &AdaptiveOptions,
    f: F,
    prune: P,
) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
    P: Fn(&Cell) -> bool + Sync,
{
    if n == 0 || edges.len() < 2 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams(format!("integration needs an increasing partition, got {edges:?}")));
    }
    let rules = SimplexRules::new(n, opts.order)?;
    let mut next_id = 0usize;
    let mut pruned = 0usize;
    let mut evaluations = 0usize;
    let mut heap = BinaryHeap::new();
    let mut finished: Vec<(f64, f64)> = Vec::new();

    let mut process = |cells: Vec<Cell>, heap: &mut BinaryHeap<Scored>| -> Result<(f64, f64)> {
        let total = cells.len();
        let keep: Vec<Cell> = cells.into_iter().filter(|c| !prune(c)).collect();
        pruned += total - keep.len();
        let results: Vec<Result<(f64, f64, usize)>> =
            keep.par_iter().map(|c| rules.evaluate(c, n, &f)).collect();
        let (mut dv, mut de) = (0.0, 0.0);
        for (cell, r) in keep.into_iter().zip(results) {
            let (value, error, ev) = r?;
            evaluations += ev;
            dv += value;
            de += error;
            heap.push(Scored { cell, value, error, id: next_id });
            next_id += 1;
        }
        Ok((dv, de))
    };

    let (mut value, mut error) = process(initial_cells(n, edges), &mut heap)?;
    let mut steps = 0usize;
    while error > opts.abs_tol.max(opts.rel_tol * value.abs()) {
        if heap.len() + finished.len() >= opts.max_cells {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.cell.depth >= opts.max_depth {
            finished.push((worst.value, worst.error));
            continue;
        }
        let (dv, de) = process(worst.cell.children(), &mut heap)?;
        value += dv - worst.value;
        error += de - worst.error;
        steps += 1;
        if steps % 512 == 0 {
            value = heap.iter().map(|s| s.value).sum::<f64>() + finished.iter().map(|x| x.0).sum::<f64>();
            error = heap.iter().map(|s| s.error).sum::<f64>() + finished.iter().map(|x| x.1).sum::<f64>();
        }
    }
    drop(process);

    let mut parts: Vec<(usize, f64, f64)> = heap.into_iter().map(|s| (s.id, s.value, s.error)).collect();
    parts.sort_by_key(|p| p.0);
    let mut vals: Vec<f64> = parts.iter().map(|p| p.1).collect();
    vals.extend(finished.iter().map(|x| x.0));
    let err = parts.iter().map(|p| p.2).sum::<f64>() + finished.iter().map(|x| x.1).sum::<f64>();
    let cells = vals.len();
    Ok(QuadratureResult {
        value: pairwise_sum(&vals),
        error_estimate: err,
        cells,
        pruned,
        evaluations,
    })
}

fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 16 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
