//! Run configuration: a JSON file, overridden field by field by flags.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use multitime::analysis::{AlphaProfile, GridSpec};
use multitime::initial::{load_grid, CoupledFamily, ProductFamily, SingleFamily, SlaterFamily};
use multitime::{Hypersurface, InitialData, ModelParams, WaveFunction};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Slater determinant of two-lobe orbitals; valid for any phases.
    Bump,
    /// Slater determinant with one lobe per component.
    Compact,
    /// Two particles with non-zero boundary values; the phase is `φ^(1)`.
    Coupled,
    /// Antisymmetrized product used by `entangle`.
    Product,
    /// Only the all-plus component.
    Single,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlphaConfig {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub alpha_sq: f64,
    pub profile: AlphaProfile,
}

impl Default for AlphaConfig {
    fn default() -> Self {
        Self {
            a1: 1.0,
            b1: 2.0,
            a2: 5.0,
            b2: 6.0,
            alpha_sq: 6.0,
            profile: AlphaProfile::Linear,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    /// `φ^(1) … φ^(N-1)`; missing entries default to `π/2`.
    pub phases: Vec<f64>,
    pub smoothness: u32,
    /// Built-in data; each command has its own default.
    pub family: Option<Family>,
    /// Grid file with initial data; replaces `family`.
    pub initial: Option<PathBuf>,
    pub boost: f64,
    pub surface: Option<Hypersurface>,
    pub grid: Option<GridSpec>,
    pub times: Vec<f64>,
    /// Pointwise pass/fail threshold; each command has its own default.
    pub tol: Option<f64>,
    /// Relative tolerance of the adaptive surface quadrature.
    /// Defaults to 1e-8 for two particles and 1e-6 beyond, where the
    /// order-6 against order-4 estimate is far more pessimistic.
    pub quad_tol: Option<f64>,
    /// Largest accepted relative deviation between surface integrals.
    pub norm_tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Random surfaces per conservation check.
    pub surfaces: usize,
    /// Random configurations per pointwise check.
    pub samples: usize,
    /// Extrapolation step of `delta-check`.
    pub eps: f64,
    pub alpha: AlphaConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 2,
            phases: Vec::new(),
            smoothness: 3,
            family: None,
            initial: None,
            boost: 0.0,
            surface: None,
            grid: None,
            times: vec![0.0],
            tol: None,
            quad_tol: None,
            norm_tol: 1e-6,
            seed: 0,
            out: PathBuf::from("multitime-out"),
            surfaces: 4,
            samples: 500,
            eps: 1e-4,
            alpha: AlphaConfig::default(),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of particles.
    #[arg(long)]
    pub n: Option<usize>,
    /// Boundary phase, `K=ANGLE` for `φ^(K)` (1-based) or `ANGLE` for the
    /// one after the previous flag.
    #[arg(long = "phi", value_name = "K=ANGLE", allow_hyphen_values = true)]
    pub phi: Vec<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Grid file with initial data.
    #[arg(long)]
    pub initial: Option<PathBuf>,
    /// Smoothness order m of the data.
    #[arg(long)]
    pub smoothness: Option<u32>,
    /// Rapidity of the boost.
    #[arg(long, allow_hyphen_values = true)]
    pub boost: Option<f64>,
    /// Hypersurface as JSON, or `@FILE`.
    #[arg(long)]
    pub surface: Option<String>,
    /// Sampling grid `LO,HI,POINTS`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Comma-separated times.
    #[arg(long, allow_hyphen_values = true)]
    pub times: Option<String>,
    /// Pointwise pass/fail threshold.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative tolerance of the surface quadrature.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    /// Accepted relative deviation between surface integrals.
    #[arg(long)]
    pub norm_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random surfaces per conservation check.
    #[arg(long)]
    pub surfaces: Option<usize>,
    /// Random configurations per pointwise check.
    #[arg(long)]
    pub samples: Option<usize>,
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number {x:?} in {s:?}")))
        .collect()
}

pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi, points] = parts.as_slice() else {
        bail!("grid must be LO,HI,POINTS, got {s:?}");
    };
    let grid = GridSpec::new(
        lo.parse().with_context(|| format!("bad grid bound {lo:?}"))?,
        hi.parse().with_context(|| format!("bad grid bound {hi:?}"))?,
        points.parse().with_context(|| format!("bad grid size {points:?}"))?,
    );
    if !(grid.hi > grid.lo) || grid.points < 2 {
        bail!("grid {s:?} is empty");
    }
    Ok(grid)
}

fn parse_surface(s: &str) -> Result<Hypersurface> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading surface file {path}"))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).context("surface JSON")
}

/// `(k, angle)` with `k` 0-based, or `None` for every boundary.
fn parse_phi(s: &str) -> Result<(Option<usize>, f64)> {
    match s.split_once('=') {
        Some((k, v)) => {
            let k: usize = k.trim().parse().with_context(|| format!("bad phase index in {s:?}"))?;
            if k == 0 {
                bail!("phase indices start at 1, got {s:?}");
            }
            let v = v.trim().parse().with_context(|| format!("bad angle in {s:?}"))?;
            Ok((Some(k - 1), v))
        }
        None => Ok((None, s.trim().parse().with_context(|| format!("bad angle {s:?}"))?)),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("config {}", path.display()))
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let mut cfg = match &args.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        if let Some(n) = args.n {
            cfg.n = n;
        }
        if let Some(f) = args.family {
            cfg.family = Some(f);
        }
        if let Some(p) = &args.initial {
            cfg.initial = Some(p.clone());
        }
        if let Some(m) = args.smoothness {
            cfg.smoothness = m;
        }
        if let Some(b) = args.boost {
            cfg.boost = b;
        }
        if let Some(s) = &args.surface {
            cfg.surface = Some(parse_surface(s)?);
        }
        if let Some(g) = &args.grid {
            cfg.grid = Some(parse_grid(g)?);
        }
        if let Some(t) = &args.times {
            cfg.times = parse_list(t)?;
        }
        if let Some(t) = args.tol {
            cfg.tol = Some(t);
        }
        if let Some(t) = args.quad_tol {
            cfg.quad_tol = Some(t);
        }
        if let Some(t) = args.norm_tol {
            cfg.norm_tol = t;
        }
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        if let Some(o) = &args.out {
            cfg.out = o.clone();
        }
        if let Some(s) = args.surfaces {
            cfg.surfaces = s;
        }
        if let Some(s) = args.samples {
            cfg.samples = s;
        }
        if cfg.n < 2 {
            bail!("need at least 2 particles, got {}", cfg.n);
        }
        let m = cfg.n - 1;
        if cfg.phases.len() > m {
            bail!("{} phases given for {} particles", cfg.phases.len(), cfg.n);
        }
        cfg.phases.resize(m, FRAC_PI_2);
        let mut next = 0;
        for p in &args.phi {
            let (k, v) = parse_phi(p)?;
            let k = k.unwrap_or(next);
            if k >= m {
                bail!("phase index {} exceeds N-1 = {m}", k + 1);
            }
            cfg.phases[k] = v;
            next = k + 1;
        }
        for (name, t) in [("tol", cfg.tol.unwrap_or(1.0)), ("quad-tol", cfg.quad_tol.unwrap_or(1.0)), ("norm-tol", cfg.norm_tol)] {
            if !(t > 0.0) {
                bail!("{name} must be positive, got {t}");
            }
        }
        if let Some(g) = cfg.grid {
            if !(g.hi > g.lo) || g.points < 2 {
                bail!("grid {g:?} is empty");
            }
        }
        if cfg.times.is_empty() {
            bail!("no times given");
        }
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.n, self.phases.clone(), self.smoothness)?)
    }

    pub fn family_or(&self, default: Family) -> Family {
        self.family.unwrap_or(default)
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol.unwrap_or(if self.n == 2 { 1e-8 } else { 1e-6 })
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn grid_or(&self, default: GridSpec) -> GridSpec {
        self.grid.unwrap_or(default)
    }

    pub fn data(&self, default: Family) -> Result<InitialData> {
        if let Some(path) = &self.initial {
            let grid = load_grid(path).with_context(|| format!("loading {}", path.display()))?;
            if grid.n_particles() != self.n {
                bail!("grid file has {} particles, run has {}", grid.n_particles(), self.n);
            }
            return Ok(InitialData::grid(grid)?);
        }
        let (n, m) = (self.n, self.smoothness);
        Ok(match self.family_or(default) {
            Family::Bump => InitialData::slater(SlaterFamily::bump_layout(n, 1.0), m)?,
            Family::Compact => InitialData::slater(SlaterFamily::compact_layout(n, 2.0), m)?,
            Family::Coupled => {
                if n != 2 {
                    bail!("the coupled family has 2 particles");
                }
                InitialData::coupled(CoupledFamily::default_layout(self.phases[0]), m)?
            }
            Family::Product => InitialData::product(ProductFamily::entangle_layout(n), m)?,
            Family::Single => InitialData::single(SingleFamily::default_layout(n), m)?,
        })
    }

    pub fn wavefunction(&self, default: Family) -> Result<WaveFunction> {
        Ok(WaveFunction::new(self.params()?, self.data(default)?)?)
    }

    pub fn surface(&self) -> Hypersurface {
        self.surface.clone().unwrap_or(Hypersurface::flat(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_from_flags() {
        let args = CommonArgs {
            n: Some(4),
            phi: vec!["0.5".into(), "3=1.25".into()],
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.phases, vec![0.5, FRAC_PI_2, 1.25]);
        let args = CommonArgs {
            n: Some(3),
            phi: vec!["0.6".into(), "-2.2".into()],
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(&args).unwrap().phases, vec![0.6, -2.2]);
        let extra = CommonArgs {
            phi: vec!["1".into(), "2".into()],
            ..Default::default()
        };
        assert!(RunConfig::resolve(&extra).is_err());
        let bad = CommonArgs {
            phi: vec!["2=1".into()],
            ..Default::default()
        };
        assert!(RunConfig::resolve(&bad).is_err());
    }

    #[test]
    fn grid_and_surface_strings() {
        let g = parse_grid("-3, 3, 40").unwrap();
        assert_eq!((g.lo, g.hi, g.points), (-3.0, 3.0, 40));
        assert!(parse_grid("1,0,4").is_err());
        let s = parse_surface(r#"{"type":"boost","params":{"rapidity":0.3}}"#).unwrap();
        assert_eq!(s, Hypersurface::Boost { t0: 0.0, rapidity: 0.3 });
    }

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.quad_tol, cfg.quad_tol);
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
