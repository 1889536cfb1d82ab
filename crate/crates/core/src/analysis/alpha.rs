//! Two particles kept at least `α` apart in the space-like sense.
//!
//! For `a_1 < b_1 < a_2 < b_2` the construction finds two boundary points
//! `(t_1, y_1, t_2, y_2)` and `(s_1, x_1, s_2, x_2)`, each on the `-+`
//! characteristic through `(0, a_1, 0, a_2)` resp. `(0, b_1, 0, b_2)`, and
//! joined by one `+-` characteristic. Reading `ψ_{+-}` at the first point
//! through either boundary condition gives `e^{iφ} g_{-+}(a_1, a_2)` and
//! `e^{iφ} g_{-+}(b_1, b_2)`, so unless `g_{-+}` takes equal values the
//! problem has no solution.
//!
//! With `p = b_1 - a_1`, `q = b_2 - a_2` and `ξ² = q² + 4α² q / p`, put
//! `P = (ξ - q)/2` and `Q = p (P + q)/q`. Then
//! `t_1 = (a_2 - a_1 - P)/2`, `t_2 = (a_2 - a_1 - Q)/2`, `s_1 = t_1 - p/2`,
//! `s_2 = t_2 + q/2`, and the positions follow from the characteristics.
//! `P` and `Q` are the spatial separations `y_2 - y_1` and `x_2 - x_1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::Boost;
use crate::model::Event;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaInstance {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub alpha: f64,
}

impl AlphaInstance {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64, alpha: f64) -> Result<Self> {
        let inst = Self { a1, b1, a2, b2, alpha };
        inst.check()?;
        Ok(inst)
    }

    fn check(&self) -> Result<()> {
        if !(self.a1 < self.b1 && self.b1 < self.a2 && self.a2 < self.b2) {
            return Err(Error::InvalidParams("need a1 < b1 < a2 < b2".into()));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha = {} must be positive", self.alpha)));
        }
        Ok(())
    }

    /// Instance whose points are the boosted images: `z - t` scales by
    /// `e^{-β}` and `z + t` by `e^{β}`.
    pub fn boosted(&self, b: Boost) -> Self {
        let (dn, up) = ((-b.rapidity).exp(), b.rapidity.exp());
        Self {
            a1: self.a1 * dn,
            b1: self.b1 * dn,
            a2: self.a2 * up,
            b2: self.b2 * up,
            alpha: self.alpha,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaPoints {
    pub y1: f64,
    pub t1: f64,
    pub y2: f64,
    pub t2: f64,
    pub x1: f64,
    pub s1: f64,
    pub x2: f64,
    pub s2: f64,
    /// The root of `ξ² = q² + 4α² q / p` that was selected.
    pub xi: f64,
}

impl AlphaPoints {
    pub fn events(&self) -> [Event; 4] {
        [
            Event::new(self.t1, self.y1),
            Event::new(self.t2, self.y2),
            Event::new(self.s1, self.x1),
            Event::new(self.s2, self.x2),
        ]
    }

    /// Residuals of the eight defining equations, in order: the two
    /// characteristic relations and the boundary relation for the `y`
    /// point, the same for the `x` point, then the two relations joining
    /// them along the `+-` characteristic.
    pub fn residuals(&self, inst: &AlphaInstance) -> [f64; 8] {
        let a2 = inst.alpha * inst.alpha;
        [
            self.y1 - self.t1 - inst.a1,
            self.y2 + self.t2 - inst.a2,
            (self.t1 - self.t2).powi(2) - (self.y1 - self.y2).powi(2) + a2,
            self.x1 - self.s1 - inst.b1,
            self.x2 + self.s2 - inst.b2,
            (self.s1 - self.s2).powi(2) - (self.x1 - self.x2).powi(2) + a2,
            self.x1 + self.s1 - self.y1 - self.t1,
            self.x2 - self.s2 - self.y2 + self.t2,
        ]
    }

    /// Both configurations keep the particle order of the initial points.
    pub fn ordered(&self) -> bool {
        self.y1 < self.y2 && self.x1 < self.x2
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaSolution {
    pub instance: AlphaInstance,
    pub points: AlphaPoints,
    pub residuals: [f64; 8],
    /// The other root, which satisfies the equations with the particles
    /// swapped and is therefore rejected.
    pub rejected: Option<AlphaPoints>,
}

fn points_for_root(inst: &AlphaInstance, xi: f64) -> AlphaPoints {
    let p = inst.b1 - inst.a1;
    let q = inst.b2 - inst.a2;
    let big_p = 0.5 * (xi - q);
    let big_q = p * (big_p + q) / q;
    let d = inst.a2 - inst.a1;
    let t1 = 0.5 * (d - big_p);
    let t2 = 0.5 * (d - big_q);
    let s1 = t1 - 0.5 * p;
    let s2 = t2 + 0.5 * q;
    AlphaPoints {
        y1: inst.a1 + t1,
        t1,
        y2: inst.a2 - t2,
        t2,
        x1: inst.b1 + s1,
        s1,
        x2: inst.b2 - s2,
        s2,
        xi,
    }
}

/// Evaluates both roots and keeps the one that satisfies all eight
/// equations with the particles in their initial order.
pub fn alpha_points(inst: &AlphaInstance) -> Result<AlphaSolution> {
    inst.check()?;
    let p = inst.b1 - inst.a1;
    let q = inst.b2 - inst.a2;
    let radicand = q * q + 4.0 * inst.alpha * inst.alpha * q / p;
    let root = radicand.sqrt();
    let scale = 1.0 + [inst.a1, inst.b1, inst.a2, inst.b2, inst.alpha].iter().map(|x| x * x).fold(0.0, f64::max);
    let mut accepted = None;
    let mut rejected = None;
    for xi in [root, -root] {
        let pts = points_for_root(inst, xi);
        let res = pts.residuals(inst);
        let ok = res.iter().all(|r| r.abs() <= 1e-9 * scale) && pts.ordered();
        if ok && accepted.is_none() {
            accepted = Some((pts, res));
        } else {
            rejected = Some(pts);
        }
    }
    let (points, residuals) = accepted.ok_or(Error::NoRoot)?;
    Ok(AlphaSolution {
        instance: *inst,
        points,
        residuals,
        rejected,
    })
}

/// Built-in choices for `g_{-+}` in the contradiction demonstration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlphaProfile {
    /// `g_{-+}(z_1, z_2) = z_1`.
    Linear,
    /// `g_{-+} ≡ value`.
    Constant { value: f64 },
    Zero,
}

impl AlphaProfile {
    pub fn value(&self, z1: f64, _z2: f64) -> Complex64 {
        match self {
            AlphaProfile::Linear => Complex64::new(z1, 0.0),
            AlphaProfile::Constant { value } => Complex64::new(*value, 0.0),
            AlphaProfile::Zero => Complex64::new(0.0, 0.0),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaContradiction {
    pub solution: AlphaSolution,
    /// `ψ_{+-}` at the `y` point from its own boundary condition.
    pub via_boundary: Complex64,
    /// `ψ_{+-}` at the `y` point transported from the `x` point.
    pub via_characteristic: Complex64,
    pub conflict: f64,
}

/// Follows both evaluation chains for `ψ_{+-}(t_1, y_1, t_2, y_2)`.
pub fn alpha_contradiction_demo<G>(g_minus_plus: G, phi: f64, inst: &AlphaInstance) -> Result<AlphaContradiction>
where
    G: Fn(f64, f64) -> Complex64,
{
    let solution = alpha_points(inst)?;
    let cis = Complex64::from_polar(1.0, phi);
    let p = solution.points;
    // ψ_{-+} is constant along its characteristic, so it is read off the
    // data at the characteristic values of each point.
    let via_boundary = cis * g_minus_plus(p.y1 - p.t1, p.y2 + p.t2);
    // ψ_{+-}(y) = ψ_{+-}(x) along the joining characteristic, then the
    // boundary condition at x.
    let via_characteristic = cis * g_minus_plus(p.x1 - p.s1, p.x2 + p.s2);
    Ok(AlphaContradiction {
        solution,
        via_boundary,
        via_characteristic,
        conflict: (via_boundary - via_characteristic).norm(),
    })
}

/// Why only the phase condition is examined on this domain.
pub fn alpha_bc_uniqueness_note() -> &'static str {
    "On the minimum-distance domain the two particle orders form separate \
components. Antisymmetry maps the current through the boundary of one component \
onto minus the current through the other, so probability is conserved only if the \
net current vanishes pointwise on the boundary. That forces |psi_{+-}| = |psi_{-+}| \
there, and invariance under translations and boosts makes the relative phase \
constant on each component, with opposite signs on the two. Hence the phase \
condition is the only candidate, and the demonstration shows that it already \
over-determines the solution for any g_{-+} that is not constant."
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::interval;

    fn reference_instance() -> AlphaInstance {
        AlphaInstance::new(1.0, 2.0, 5.0, 6.0, 6f64.sqrt()).unwrap()
    }

    #[test]
    fn reproduces_the_reference_points() {
        let sol = alpha_points(&reference_instance()).unwrap();
        let p = sol.points;
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(p.y1, 2.0) && close(p.t1, 1.0));
        assert!(close(p.y2, 4.5) && close(p.t2, 0.5));
        assert!(close(p.x1, 2.5) && close(p.s1, 0.5));
        assert!(close(p.x2, 5.0) && close(p.s2, 1.0));
        assert!(close(p.xi.abs(), 5.0));
        assert!(sol.residuals.iter().all(|r| r.abs() < 1e-12));
        let other = sol.rejected.unwrap();
        assert!(other.residuals(&reference_instance()).iter().all(|r| r.abs() < 1e-12));
        assert!(!other.ordered());
    }

    #[test]
    fn random_instances_solve() {
        let mut x = 0.37f64;
        let mut next = || {
            x = (x * 997.0 + 0.123).fract();
            x
        };
        for _ in 0..500 {
            let a1 = -5.0 + 10.0 * next();
            let b1 = a1 + 0.05 + 3.0 * next();
            let a2 = b1 + 0.05 + 3.0 * next();
            let b2 = a2 + 0.05 + 3.0 * next();
            let inst = AlphaInstance::new(a1, b1, a2, b2, 0.05 + 4.0 * next()).unwrap();
            let sol = alpha_points(&inst).unwrap();
            assert!(sol.residuals.iter().all(|r| r.abs() < 1e-9), "{inst:?} {:?}", sol.residuals);
        }
    }

    #[test]
    fn boosts_map_solutions_to_solutions() {
        let inst = reference_instance();
        let sol = alpha_points(&inst).unwrap();
        for beta in [-0.4, 0.3, 0.9] {
            let b = Boost::new(beta);
            let image = alpha_points(&inst.boosted(b)).unwrap();
            let ev = sol.points.events();
            let iv = image.points.events();
            for (e, f) in ev.iter().zip(&iv) {
                let g = b.apply(*e);
                assert!((g.t - f.t).abs() < 1e-12 && (g.z - f.z).abs() < 1e-12);
            }
            let a2 = inst.alpha * inst.alpha;
            assert!((interval(iv[0], iv[1]) + a2).abs() < 1e-12);
            assert!((interval(iv[2], iv[3]) + a2).abs() < 1e-12);
        }
    }

    #[test]
    fn demonstration_conflicts() {
        let inst = reference_instance();
        let lin = AlphaProfile::Linear;
        let d = alpha_contradiction_demo(|a, b| lin.value(a, b), 0.7, &inst).unwrap();
        assert!((d.conflict - 1.0).abs() < 1e-12);
        let c = AlphaProfile::Constant { value: 2.5 };
        assert_eq!(alpha_contradiction_demo(|a, b| c.value(a, b), 0.7, &inst).unwrap().conflict, 0.0);
        let z = AlphaProfile::Zero;
        assert_eq!(alpha_contradiction_demo(|a, b| z.value(a, b), 0.7, &inst).unwrap().conflict, 0.0);
    }

    #[test]
    fn bad_instances() {
        assert!(AlphaInstance::new(1.0, 0.5, 5.0, 6.0, 1.0).is_err());
        assert!(AlphaInstance::new(1.0, 2.0, 5.0, 6.0, 0.0).is_err());
    }
}
