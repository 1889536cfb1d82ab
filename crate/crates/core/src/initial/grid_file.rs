//! Tabulated initial data on a uniform grid restricted to the ordered simplex.
//!
//! File layout:
//!
//! ```text
//! N=2 m=3 R=4 grid=9
//! component 1
//! z1 z2 re im
//! ...
//! component 2
//! ...
//! ```
//!
//! Rows list the nodes `z_1 ≤ … ≤ z_N` of the grid `-R + i·2R/(grid-1)` in
//! lexicographic order. Components appear in canonical spin order.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::InitialData;
use crate::error::{Error, Result};
use crate::model::{SpinIndex, MAX_PARTICLES};

#[derive(Clone, Debug)]
pub struct GridData {
    n: usize,
    smoothness: u32,
    radius: f64,
    points: usize,
    index: HashMap<Vec<u32>, usize>,
    nodes: Vec<Vec<u32>>,
    values: Vec<Vec<Complex64>>,
}

/// Nondecreasing index tuples in lexicographic order.
fn simplex_nodes(n: usize, points: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(k: usize, lo: u32, points: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in lo..points {
            cur[k] = i;
            rec(k + 1, i, points, cur, out);
        }
    }
    rec(0, 0, points as u32, &mut cur, &mut out);
    out
}

impl GridData {
    fn with_values(n: usize, smoothness: u32, radius: f64, points: usize, values: Vec<Vec<Complex64>>) -> Self {
        let nodes = simplex_nodes(n, points);
        let index = nodes.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self {
            n,
            smoothness,
            radius,
            points,
            index,
            nodes,
            values,
        }
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / (self.points - 1) as f64
    }

    pub fn coordinate(&self, i: u32) -> f64 {
        -self.radius + f64::from(i) * self.spacing()
    }

    pub fn nodes(&self) -> &[Vec<u32>] {
        &self.nodes
    }

    pub fn node_value(&self, s: SpinIndex, node: &[u32]) -> Option<Complex64> {
        self.index.get(node).map(|&i| self.values[s.linear()][i])
    }

    fn at(&self, s: usize, node: &[u32]) -> Complex64 {
        self.index
            .get(node)
            .map_or(Complex64::new(0.0, 0.0), |&i| self.values[s][i])
    }

    /// Interpolated value at ordered positions.
    ///
    /// Uses tensor Lagrange interpolation of degree `min(m, 3)` when the whole
    /// stencil lies in the simplex, otherwise linear interpolation on the
    /// Freudenthal simplex that contains the point. Node values are
    /// reproduced exactly.
    pub fn value(&self, s: SpinIndex, z: &[f64]) -> Complex64 {
        let h = self.spacing();
        let last = (self.points - 1) as u32;
        let mut base = Vec::with_capacity(self.n);
        let mut frac = Vec::with_capacity(self.n);
        let mut u_all = Vec::with_capacity(self.n);
        for &x in z {
            if !(x >= -self.radius && x <= self.radius) {
                return Complex64::new(0.0, 0.0);
            }
            let u = (x + self.radius) / h;
            let r = (u.round() as u32).min(last);
            let (i, f) = if self.coordinate(r) == x {
                if r == last {
                    (last - 1, 1.0)
                } else {
                    (r, 0.0)
                }
            } else {
                let i = (u.floor().max(0.0) as u32).min(last - 1);
                (i, (u - f64::from(i)).clamp(0.0, 1.0))
            };
            base.push(i);
            frac.push(f);
            u_all.push(u);
        }
        let degree = self.smoothness.min(3) as usize;
        if degree >= 2 {
            if let Some(v) = self.lagrange(s.linear(), z, &u_all, degree) {
                return v;
            }
        }
        self.freudenthal(s.linear(), &base, &frac)
    }

    fn freudenthal(&self, s: usize, base: &[u32], frac: &[f64]) -> Complex64 {
        let n = base.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| frac[b].total_cmp(&frac[a]).then(b.cmp(&a)));
        let mut vertex = base.to_vec();
        let mut acc = self.at(s, &vertex) * (1.0 - frac[order[0]]);
        for j in 0..n {
            vertex[order[j]] += 1;
            let next = if j + 1 < n { frac[order[j + 1]] } else { 0.0 };
            let w = frac[order[j]] - next;
            if w != 0.0 {
                acc += self.at(s, &vertex) * w;
            }
        }
        acc
    }

    fn lagrange(&self, s: usize, z: &[f64], u: &[f64], degree: usize) -> Option<Complex64> {
        let last = self.points - 1;
        if last < degree {
            return None;
        }
        let starts: Vec<usize> = u
            .iter()
            .map(|&x| ((x - degree as f64 / 2.0).round().max(0.0) as usize).min(last - degree))
            .collect();
        if starts.windows(2).any(|w| w[0] + degree > w[1]) {
            return None;
        }
        let weights: Vec<Vec<f64>> = z
            .iter()
            .zip(&starts)
            .map(|(&x, &st)| {
                (0..=degree)
                    .map(|j| {
                        let xj = self.coordinate((st + j) as u32);
                        (0..=degree)
                            .filter(|&l| l != j)
                            .map(|l| {
                                let xl = self.coordinate((st + l) as u32);
                                (x - xl) / (xj - xl)
                            })
                            .product()
                    })
                    .collect()
            })
            .collect();
        let n = z.len();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut digits = vec![0usize; n];
        let mut node = vec![0u32; n];
        loop {
            let mut w = 1.0;
            for k in 0..n {
                w *= weights[k][digits[k]];
                node[k] = (starts[k] + digits[k]) as u32;
            }
            if w != 0.0 {
                acc += self.at(s, &node) * w;
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return Some(acc);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] <= degree {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
}

/// Samples `data` at the grid nodes.
pub fn sample_grid(data: &InitialData, radius: f64, points: usize) -> Result<GridData> {
    if points < 2 || !(radius > 0.0) {
        return Err(Error::Grid(format!("need at least 2 points and R > 0, got {points}, {radius}")));
    }
    let n = data.n_particles();
    let probe = GridData::with_values(n, data.smoothness(), radius, points, Vec::new());
    let values = SpinIndex::all(n)
        .map(|s| {
            probe
                .nodes
                .iter()
                .map(|node| {
                    let z: Vec<f64> = node.iter().map(|&i| probe.coordinate(i)).collect();
                    data.value(s, &z)
                })
                .collect()
        })
        .collect();
    Ok(GridData { values, ..probe })
}

pub fn write_grid<W: Write>(grid: &GridData, mut w: W) -> Result<()> {
    writeln!(w, "N={} m={} R={:.16e} grid={}", grid.n, grid.smoothness, grid.radius, grid.points)?;
    for s in SpinIndex::all(grid.n) {
        writeln!(w, "component {}", s.component_index())?;
        for (node, v) in grid.nodes.iter().zip(&grid.values[s.linear()]) {
            for &i in node {
                write!(w, "{:.16e} ", grid.coordinate(i))?;
            }
            writeln!(w, "{:.16e} {:.16e}", v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn save_grid(grid: &GridData, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_grid(grid, &mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn header_field<T: std::str::FromStr>(tok: Option<&str>, key: &str, line: usize) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {key}= in header")))?;
    let v = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {key}=..., found {tok:?}")))?;
    v.parse()
        .map_err(|_| parse_err(line, format!("bad value for {key}: {v:?}")))
}

pub fn read_grid<R: Read>(r: R) -> Result<GridData> {
    let mut lines = BufReader::new(r)
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)))
        .filter(|l| !matches!(l, Ok((_, s)) if s.trim().is_empty() || s.trim_start().starts_with('#')));
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))??;
    let mut toks = header.split_whitespace();
    let n: usize = header_field(toks.next(), "N", ln)?;
    let m: u32 = header_field(toks.next(), "m", ln)?;
    let radius: f64 = header_field(toks.next(), "R", ln)?;
    let points: usize = header_field(toks.next(), "grid", ln)?;
    if toks.next().is_some() {
        return Err(parse_err(ln, "trailing tokens in header"));
    }
    if n == 0 || n > MAX_PARTICLES {
        return Err(parse_err(ln, format!("particle number {n} unsupported")));
    }
    if points < 2 || !(radius > 0.0 && radius.is_finite()) {
        return Err(parse_err(ln, "need grid >= 2 and finite R > 0"));
    }
    let mut grid = GridData::with_values(n, m, radius, points, Vec::new());
    let h = grid.spacing();
    let total = grid.nodes.len();
    let mut current: Option<(Vec<Complex64>, Vec<bool>, usize)> = None;
    let mut blocks: Vec<Vec<Complex64>> = Vec::new();

    let finish = |cur: Option<(Vec<Complex64>, Vec<bool>, usize)>, blocks: &mut Vec<Vec<Complex64>>, line: usize| {
        if let Some((vals, seen, count)) = cur {
            if count != seen.len() {
                return Err(parse_err(line, format!("component {} lists {count} of {} nodes", blocks.len() + 1, seen.len())));
            }
            blocks.push(vals);
        }
        Ok(())
    };

    let mut last_line = ln;
    for item in lines {
        let (ln, line) = item?;
        last_line = ln;
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("component") {
            finish(current.take(), &mut blocks, ln)?;
            let idx: usize = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(ln, format!("bad component label {rest:?}")))?;
            if idx != blocks.len() + 1 {
                return Err(parse_err(ln, format!("expected component {}, found {idx}", blocks.len() + 1)));
            }
            if idx > 1 << n {
                return Err(parse_err(ln, format!("component count exceeds 2^{n}")));
            }
            current = Some((vec![Complex64::new(0.0, 0.0); total], vec![false; total], 0));
            continue;
        }
        let (vals, seen, count) = current
            .as_mut()
            .ok_or_else(|| parse_err(ln, "data row before any component header"))?;
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(ln, format!("bad number {t:?}"))))
            .collect::<Result<Vec<f64>>>()?;
        if nums.len() != n + 2 {
            return Err(parse_err(ln, format!("expected {} numbers, found {}", n + 2, nums.len())));
        }
        let mut node = Vec::with_capacity(n);
        for &x in &nums[..n] {
            let u = (x + radius) / h;
            let i = u.round();
            if !(i >= 0.0 && i <= (points - 1) as f64) || (grid.coordinate(i as u32) - x).abs() > 1e-9 * h {
                return Err(parse_err(ln, format!("position {x} is not a grid node")));
            }
            node.push(i as u32);
        }
        if node.windows(2).any(|w| w[0] > w[1]) {
            return Err(parse_err(ln, "non-monotone grid row: positions must be nondecreasing"));
        }
        let slot = grid.index[&node];
        if seen[slot] {
            return Err(parse_err(ln, "duplicate grid node"));
        }
        seen[slot] = true;
        *count += 1;
        vals[slot] = Complex64::new(nums[n], nums[n + 1]);
    }
    finish(current.take(), &mut blocks, last_line)?;
    if blocks.len() != 1 << n {
        return Err(parse_err(
            last_line,
            format!("found {} components, expected {}", blocks.len(), 1 << n),
        ));
    }
    grid.values = blocks;
    Ok(grid)
}

pub fn load_grid(path: &Path) -> Result<GridData> {
    read_grid(std::fs::File::open(path)?)
}
