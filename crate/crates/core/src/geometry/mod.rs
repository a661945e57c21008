//! Homeomorphisms of the half-plane `Pi = R x (0, inf)` and their extensions
//! to the compactified closure.
//!
//! Every map here is *vertical*: it keeps the first coordinate and acts on
//! the second by a strictly increasing function, so inverses reduce to
//! scalar monotone solves.
//!
//! * `Phi(x1, x2) = (x1, x2 / (x1^2 + 1))`
//! * `Theta(t1, t2) = (t1, t2 + c f(t2 (t1^2 + 1)))`, `c = t1^2 / (t1^2 + 1)`
//! * level rescaling `(tau1, tau2 (1 + g(lambda(s))))` with
//!   `lambda(s) = s1 + beta sqrt(s2 (s1^2 + 1))` and `s = base^{-1}(tau)`.
//!   With an empty base this is `Upsilon_beta`; with base `[Theta]` it is
//!   `Theta_beta`; inside a chain each stage uses the preceding stages.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::BoundaryPoint;
use crate::symbols::ExtReal;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Increasing bijection `[-inf, inf] -> [-1/2, 1/2]` with `g(0) = 0`.
#[derive(Clone)]
pub enum Squash {
    /// `atan(s) / pi`
    Atan,
    /// `g = 0`; makes the rescaling the identity.
    Zero,
    /// Value and derivative.
    Custom(ScalarFn, ScalarFn),
}

impl Squash {
    pub fn value(&self, s: f64) -> f64 {
        match self {
            Squash::Atan => s.atan() / std::f64::consts::PI,
            Squash::Zero => 0.0,
            Squash::Custom(g, _) => g(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Squash::Atan => 1.0 / (std::f64::consts::PI * (1.0 + s * s)),
            Squash::Zero => 0.0,
            Squash::Custom(_, dg) => dg(s),
        }
    }

    /// `g^{-1}(x)` for `x` in `[-1/2, 1/2]`; the endpoints map to `-+inf`.
    pub fn inverse(&self, x: f64) -> f64 {
        if x <= -0.5 {
            return f64::NEG_INFINITY;
        }
        if x >= 0.5 {
            return f64::INFINITY;
        }
        match self {
            Squash::Atan => (std::f64::consts::PI * x).tan(),
            Squash::Zero => 0.0,
            Squash::Custom(..) => invert_by_doubling(|s| (self.value(s), self.derivative(s)), x, true),
        }
    }
}

/// Inverts an increasing function by doubling a bracket around 0, then a
/// monotone solve. `two_sided` allows negative arguments.
fn invert_by_doubling(f: impl Fn(f64) -> (f64, f64), target: f64, two_sided: bool) -> f64 {
    let (mut lo, mut hi) = (if two_sided { -1.0 } else { 0.0 }, 1.0);
    while f(hi).0 < target && hi < 1e300 {
        hi *= 2.0;
    }
    while two_sided && f(lo).0 > target && lo > -1e300 {
        lo *= 2.0;
    }
    solve_increasing(f, target, lo, hi)
}

impl fmt::Debug for Squash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Squash::Atan => "Atan",
            Squash::Zero => "Zero",
            Squash::Custom(..) => "Custom",
        })
    }
}

/// Increasing bijection `[0, inf] -> [0, 1]`.
#[derive(Clone)]
pub enum Saturation {
    /// `t / (1 + t)`
    Rational,
    /// `f = 0`; makes `Theta` the identity.
    Zero,
    /// Value and derivative.
    Custom(ScalarFn, ScalarFn),
}

impl Saturation {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Saturation::Rational if t == f64::INFINITY => 1.0,
            Saturation::Rational => t / (1.0 + t),
            Saturation::Zero => 0.0,
            Saturation::Custom(f, _) => f(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Saturation::Rational => 1.0 / ((1.0 + t) * (1.0 + t)),
            Saturation::Zero => 0.0,
            Saturation::Custom(_, df) => df(t),
        }
    }

    /// `f^{-1}(y)` for `y` in `[0, 1]`; `f^{-1}(1) = +inf`.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return f64::INFINITY;
        }
        match self {
            Saturation::Rational => y / (1.0 - y),
            Saturation::Zero => 0.0,
            Saturation::Custom(..) => invert_by_doubling(|t| (self.value(t), self.derivative(t)), y, false),
        }
    }
}

/// Where an inverse map sent a point of an inserted boundary segment.
///
/// The forward maps open up a boundary point into a segment; the inverse
/// collapses the segment back. Positions along the segment correspond to
/// the level sets that accumulated at that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Collapse {
    /// Segment inserted by a level rescaling at `(-inf, 1/beta^2)`; the
    /// position is the level `lambda` of `phi^{chi_beta}`.
    Level { beta: f64, lambda: f64 },
    /// Segment inserted by `Theta` at `(+-inf, 0)`; the position is the
    /// level `x2 = mu` of `gamma^b`.
    Saturated { mu: f64 },
}

impl fmt::Debug for Saturation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Saturation::Rational => "Rational",
            Saturation::Zero => "Zero",
            Saturation::Custom(..) => "Custom",
        })
    }
}

/// `(tau1, tau2) -> (tau1, tau2 (1 + g(lambda(base^{-1}(tau)))))`.
#[derive(Debug, Clone)]
pub struct LevelRescale {
    beta: f64,
    g: Squash,
    base: Vec<PlaneMap>,
    /// Height of the excluded point `base((-inf, 1/beta^2))`.
    excluded: f64,
}

impl LevelRescale {
    pub fn new(beta: f64, g: Squash, base: Vec<PlaneMap>) -> Result<LevelRescale> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        let start = BoundaryPoint { t1: ExtReal::NegInf, t2: ExtReal::Finite(1.0 / (beta * beta)) };
        let end = compose_forward(&base, start)?;
        let ExtReal::Finite(excluded) = end.t2 else {
            return Err(Error::domain("base maps the accumulation point off the vertical edge"));
        };
        Ok(LevelRescale { beta, g, base, excluded })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The point `(-inf, e)` at which the map has no continuous extension.
    pub fn excluded_point(&self) -> BoundaryPoint {
        BoundaryPoint { t1: ExtReal::NegInf, t2: ExtReal::Finite(self.excluded) }
    }

    fn lambda(&self, s: (f64, f64)) -> f64 {
        s.0 + self.beta * s.1.sqrt() * s.0.hypot(1.0)
    }

    /// Factor `1 + g(lambda)` and its derivative in `tau2`.
    fn factor(&self, tau: (f64, f64)) -> Result<(f64, f64)> {
        let s = compose_inverse_interior(&self.base, tau)?;
        let (_, ds_dtau) = compose_forward_deriv(&self.base, s)?;
        let lam = self.lambda(s);
        let dlam_ds2 = self.beta * s.0.hypot(1.0) / (2.0 * s.1.sqrt());
        Ok((1.0 + self.g.value(lam), self.g.derivative(lam) * dlam_ds2 / ds_dtau))
    }

    fn forward_deriv(&self, tau: (f64, f64)) -> Result<((f64, f64), f64)> {
        let (h, dh) = self.factor(tau)?;
        Ok(((tau.0, tau.1 * h), h + tau.1 * dh))
    }

    fn inverse_interior(&self, q: (f64, f64)) -> Result<(f64, f64)> {
        let d = q.1;
        let mut failure = None;
        let t2 = solve_increasing(
            |t2| match self.forward_deriv((q.0, t2)) {
                Ok((p, dp)) => (p.1, dp),
                Err(e) => {
                    failure.get_or_insert(e);
                    (f64::NAN, f64::NAN)
                }
            },
            d,
            2.0 * d / 3.0,
            2.0 * d,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok((q.0, t2)),
        }
    }

    /// Boundary factors `1 + g(-inf)` and `1 + g(+inf)`, normally 1/2 and 3/2.
    fn edge_factors(&self) -> (f64, f64) {
        (1.0 + self.g.value(f64::NEG_INFINITY), 1.0 + self.g.value(f64::INFINITY))
    }

    fn forward_boundary(&self, p: BoundaryPoint) -> Result<BoundaryPoint> {
        let (low, high) = self.edge_factors();
        let scaled = |k: f64| match p.t2 {
            ExtReal::Finite(t2) => Ok(BoundaryPoint { t1: p.t1, t2: ExtReal::Finite(k * t2) }),
            _ => Ok(p),
        };
        match (p.t1, p.t2) {
            (_, ExtReal::Finite(t2)) if t2 == 0.0 => Ok(p),
            (_, ExtReal::PosInf) => Ok(p),
            (ExtReal::PosInf, _) => scaled(high),
            (ExtReal::NegInf, ExtReal::Finite(t2)) => {
                if (t2 - self.excluded).abs() <= 4.0 * f64::EPSILON * self.excluded {
                    Err(Error::ExcludedPoint { point: p.to_string(), stage: None })
                } else if t2 < self.excluded {
                    scaled(low)
                } else {
                    scaled(high)
                }
            }
            _ => unreachable!("interior points are handled separately"),
        }
    }

    /// The segment `[low e, high e]` on the left edge collapses to `(-inf, e)`.
    fn inverse_boundary(&self, q: BoundaryPoint) -> (BoundaryPoint, Option<Collapse>) {
        let (low, high) = self.edge_factors();
        let e = self.excluded;
        match (q.t1, q.t2) {
            (_, ExtReal::Finite(y)) if y == 0.0 => (q, None),
            (_, ExtReal::PosInf) => (q, None),
            (ExtReal::PosInf, ExtReal::Finite(y)) => (BoundaryPoint { t1: q.t1, t2: ExtReal::Finite(y / high) }, None),
            (ExtReal::NegInf, ExtReal::Finite(y)) => {
                let (t2, collapse) = if y < low * e {
                    (y / low, None)
                } else if y > high * e {
                    (y / high, None)
                } else {
                    let lambda = self.g.inverse(y / e - 1.0);
                    (e, Some(Collapse::Level { beta: self.beta, lambda }))
                };
                (BoundaryPoint { t1: q.t1, t2: ExtReal::Finite(t2) }, collapse)
            }
            _ => unreachable!("interior points are handled separately"),
        }
    }
}

/// A vertical homeomorphism of the half-plane.
#[derive(Debug, Clone)]
pub enum PlaneMap {
    Phi,
    Theta(Saturation),
    Rescale(Arc<LevelRescale>),
    /// Stages in application order.
    Chain(Vec<PlaneMap>),
}

impl fmt::Display for PlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneMap::Phi => f.write_str("phi"),
            PlaneMap::Theta(_) => f.write_str("theta"),
            PlaneMap::Rescale(r) if r.base.iter().any(|m| matches!(m, PlaneMap::Theta(_))) => {
                write!(f, "theta_beta:{}", r.beta)
            }
            PlaneMap::Rescale(r) => write!(f, "upsilon:{}", r.beta),
            PlaneMap::Chain(stages) if stages.is_empty() => f.write_str("none"),
            PlaneMap::Chain(stages) => {
                let parts: Vec<String> = stages.iter().map(|s| s.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

fn interior(p: (f64, f64)) -> Result<()> {
    if !(p.0.is_finite() && p.1.is_finite() && p.1 > 0.0) {
        return Err(Error::domain(format!("({}, {}) is not an interior point", p.0, p.1)));
    }
    Ok(())
}

impl PlaneMap {
    /// `Upsilon_beta`: the level rescaling in the coordinates of `phi^a`.
    pub fn upsilon(beta: f64, g: Squash) -> Result<PlaneMap> {
        Ok(PlaneMap::Rescale(Arc::new(LevelRescale::new(beta, g, vec![])?)))
    }

    pub fn theta(f: Saturation) -> PlaneMap {
        PlaneMap::Theta(f)
    }

    /// `Theta_beta`: the level rescaling after `Theta`.
    pub fn theta_beta(beta: f64, g: Squash, f: Saturation) -> Result<PlaneMap> {
        Ok(PlaneMap::Rescale(Arc::new(LevelRescale::new(beta, g, vec![PlaneMap::Theta(f)])?)))
    }

    pub fn chain(maps: Vec<PlaneMap>) -> PlaneMap {
        PlaneMap::Chain(maps)
    }

    /// Chain of rescalings for jumps at `beta_i / 2`, each stage re-centred
    /// on the accumulation point as seen through the previous stages.
    /// The betas must be strictly increasing.
    pub fn separating_chain(betas: &[f64], g: Squash) -> Result<PlaneMap> {
        if betas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("chain betas must be strictly increasing"));
        }
        let mut stages: Vec<PlaneMap> = Vec::with_capacity(betas.len());
        for &beta in betas {
            let stage = LevelRescale::new(beta, g.clone(), stages.clone())?;
            stages.push(PlaneMap::Rescale(Arc::new(stage)));
        }
        Ok(PlaneMap::Chain(stages))
    }

    /// Parses a comma-separated chain: `none`, `phi`, `theta`, `upsilon:<beta>`,
    /// `theta_beta:<beta>`. Rescaling stages use every preceding stage except
    /// `phi` as their base; default profiles throughout.
    pub fn parse_chain(spec: &str) -> Result<PlaneMap> {
        let spec = spec.trim();
        if spec.is_empty() || spec == "none" {
            return Ok(PlaneMap::Chain(vec![]));
        }
        let mut stages: Vec<PlaneMap> = Vec::new();
        for part in spec.split(',') {
            let part = part.trim();
            let (name, arg) = match part.split_once(':') {
                Some((n, a)) => (n.trim(), Some(a.trim())),
                None => (part, None),
            };
            let beta = || -> Result<f64> {
                arg.and_then(|a| a.parse::<f64>().ok())
                    .ok_or_else(|| Error::domain(format!("chain stage '{part}' needs a numeric beta")))
            };
            let stage = match (name, arg) {
                ("phi", None) => PlaneMap::Phi,
                ("theta", None) => PlaneMap::Theta(Saturation::Rational),
                ("upsilon" | "theta_beta", _) => {
                    let base: Vec<PlaneMap> = stages.iter().filter(|m| !matches!(m, PlaneMap::Phi)).cloned().collect();
                    if name == "theta_beta" && !base.iter().any(|m| matches!(m, PlaneMap::Theta(_))) {
                        return Err(Error::domain("theta_beta must follow theta in a chain"));
                    }
                    PlaneMap::Rescale(Arc::new(LevelRescale::new(beta()?, Squash::Atan, base)?))
                }
                _ => return Err(Error::domain(format!("unknown chain stage '{part}'"))),
            };
            stages.push(stage);
        }
        Ok(PlaneMap::Chain(stages))
    }

    /// Forward map on the open half-plane.
    pub fn forward_interior(&self, p: (f64, f64)) -> Result<(f64, f64)> {
        interior(p)?;
        Ok(self.forward_deriv(p)?.0)
    }

    /// Inverse map on the open half-plane.
    pub fn inverse_interior(&self, q: (f64, f64)) -> Result<(f64, f64)> {
        interior(q)?;
        match self {
            PlaneMap::Phi => Ok((q.0, q.1 * (q.0 * q.0 + 1.0))),
            PlaneMap::Theta(f) => {
                let w = q.0 * q.0 + 1.0;
                let c = q.0 * q.0 / w;
                let t2 = solve_increasing(
                    |t2| (t2 + c * f.value(t2 * w), 1.0 + c * w * f.derivative(t2 * w)),
                    q.1,
                    (q.1 - 1.0).max(0.0),
                    q.1,
                );
                Ok((q.0, t2))
            }
            PlaneMap::Rescale(r) => r.inverse_interior(q),
            PlaneMap::Chain(stages) => compose_inverse_interior(stages, q),
        }
    }

    /// Forward point and `d forward_2 / d t2`.
    fn forward_deriv(&self, p: (f64, f64)) -> Result<((f64, f64), f64)> {
        match self {
            PlaneMap::Phi => {
                let w = p.0 * p.0 + 1.0;
                Ok(((p.0, p.1 / w), 1.0 / w))
            }
            PlaneMap::Theta(f) => {
                let w = p.0 * p.0 + 1.0;
                let c = p.0 * p.0 / w;
                Ok(((p.0, p.1 + c * f.value(p.1 * w)), 1.0 + c * w * f.derivative(p.1 * w)))
            }
            PlaneMap::Rescale(r) => r.forward_deriv(p),
            PlaneMap::Chain(stages) => compose_forward_deriv(stages, p),
        }
    }

    /// Forward map on the compactified half-plane.
    pub fn forward(&self, p: BoundaryPoint) -> Result<BoundaryPoint> {
        if let PlaneMap::Chain(stages) = self {
            return compose_forward(stages, p);
        }
        if p.is_interior() {
            let (t1, t2) = self.forward_interior((p.t1.to_f64(), p.t2.to_f64()))?;
            return BoundaryPoint::from_f64(t1, t2);
        }
        match self {
            PlaneMap::Phi => phi_boundary(p),
            PlaneMap::Theta(f) => theta_forward_boundary(f, p),
            PlaneMap::Rescale(r) => r.forward_boundary(p),
            PlaneMap::Chain(_) => unreachable!(),
        }
    }

    /// Inverse map on the compactified half-plane. Segments that the
    /// forward map inserts collapse back to the excluded point.
    pub fn inverse(&self, q: BoundaryPoint) -> Result<BoundaryPoint> {
        self.inverse_traced(q).map(|(p, _)| p)
    }

    /// Like [`inverse`](Self::inverse), also reporting the first (outermost)
    /// collapsed segment the point went through.
    pub fn inverse_traced(&self, q: BoundaryPoint) -> Result<(BoundaryPoint, Option<Collapse>)> {
        if let PlaneMap::Chain(stages) = self {
            let mut p = q;
            let mut collapse = None;
            for (i, stage) in stages.iter().enumerate().rev() {
                let (next, c) = stage.inverse_traced(p).map_err(|e| e.at_stage(i))?;
                p = next;
                collapse = collapse.or(c);
            }
            return Ok((p, collapse));
        }
        if q.is_interior() {
            let (t1, t2) = self.inverse_interior((q.t1.to_f64(), q.t2.to_f64()))?;
            return Ok((BoundaryPoint::from_f64(t1, t2)?, None));
        }
        match self {
            PlaneMap::Phi => phi_boundary(q).map(|p| (p, None)),
            PlaneMap::Theta(f) => Ok(theta_inverse_boundary(f, q)),
            PlaneMap::Rescale(r) => Ok(r.inverse_boundary(q)),
            PlaneMap::Chain(_) => unreachable!(),
        }
    }
}

fn compose_forward(stages: &[PlaneMap], p: BoundaryPoint) -> Result<BoundaryPoint> {
    let mut q = p;
    for (i, stage) in stages.iter().enumerate() {
        q = stage.forward(q).map_err(|e| e.at_stage(i))?;
    }
    Ok(q)
}

fn compose_forward_deriv(stages: &[PlaneMap], p: (f64, f64)) -> Result<((f64, f64), f64)> {
    let mut q = p;
    let mut d = 1.0;
    for stage in stages {
        let (next, ds) = stage.forward_deriv(q)?;
        q = next;
        d *= ds;
    }
    Ok((q, d))
}

fn compose_inverse_interior(stages: &[PlaneMap], q: (f64, f64)) -> Result<(f64, f64)> {
    let mut p = q;
    for stage in stages.iter().rev() {
        p = stage.inverse_interior(p)?;
    }
    Ok(p)
}

fn phi_boundary(p: BoundaryPoint) -> Result<BoundaryPoint> {
    if p.t1.is_finite() {
        Ok(p)
    } else {
        Err(Error::ExcludedPoint { point: p.to_string(), stage: None })
    }
}

fn theta_forward_boundary(f: &Saturation, p: BoundaryPoint) -> Result<BoundaryPoint> {
    match (p.t1, p.t2) {
        (ExtReal::Finite(_), _) => Ok(p),
        (_, ExtReal::PosInf) => Ok(p),
        (_, ExtReal::Finite(t2)) if t2 == 0.0 => Err(Error::ExcludedPoint { point: p.to_string(), stage: None }),
        (t1, ExtReal::Finite(t2)) => Ok(BoundaryPoint { t1, t2: ExtReal::Finite(t2 + f.value(f64::INFINITY)) }),
        _ => unreachable!("t2 is never -inf"),
    }
}

/// The segments `(+-inf, [0, 1])` collapse to `P+-`.
fn theta_inverse_boundary(f: &Saturation, q: BoundaryPoint) -> (BoundaryPoint, Option<Collapse>) {
    let top = f.value(f64::INFINITY);
    match (q.t1, q.t2) {
        (ExtReal::Finite(_), _) => (q, None),
        (_, ExtReal::PosInf) => (q, None),
        (t1, ExtReal::Finite(y)) if y > top => (BoundaryPoint { t1, t2: ExtReal::Finite(y - top) }, None),
        (t1, ExtReal::Finite(y)) => {
            (BoundaryPoint { t1, t2: ExtReal::Finite(0.0) }, Some(Collapse::Saturated { mu: f.inverse(y) }))
        }
        _ => unreachable!("t2 is never -inf"),
    }
}

/// Solves `F(x) = target` for increasing `F` on the bracket `[lo, hi]` by
/// Newton steps, falling back to bisection whenever a step leaves the
/// bracket or fails to halve the residual. `F` returns value and derivative.
pub(crate) fn solve_increasing(mut f: impl FnMut(f64) -> (f64, f64), target: f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut x = 0.5 * (lo + hi);
    let tol = 1e-12 * target.abs().max(1.0);
    let mut last_r = f64::INFINITY;
    for _ in 0..200 {
        let (v, dv) = f(x);
        if !v.is_finite() {
            return f64::NAN;
        }
        let r = v - target;
        if r == 0.0 {
            return x;
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - r / dv;
        let stalled = r.abs() > 0.5 * last_r;
        last_r = r.abs();
        let next = if dv > 0.0 && !stalled && newton >= lo && newton <= hi { newton } else { 0.5 * (lo + hi) };
        let step = (next - x).abs();
        x = next;
        if (r.abs() <= tol && step <= 4.0 * f64::EPSILON * x.abs()) || hi - lo <= 2.0 * f64::EPSILON * hi.abs() {
            break;
        }
    }
    x
}

/// Kind of a sampled level curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// Level set `lambda(t) = lambda0` of `phi^{chi_beta}`.
    ChiBeta { beta: f64 },
    /// Image under `Theta` of a level set `x2 = mu` of `gamma^b`.
    ThetaImage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelCurve {
    pub parameter: f64,
    pub samples: Vec<(f64, f64)>,
    pub kind: CurveKind,
}

/// `t2 = (t1 - lambda0)^2 / (beta^2 (t1^2 + 1))` for `t1 <= lambda0`.
pub fn level_curve_chi_beta(beta: f64, lambda0: f64, t1_grid: &[f64]) -> Result<LevelCurve> {
    if !(beta > 0.0 && beta.is_finite()) || !lambda0.is_finite() {
        return Err(Error::domain("beta must be positive and lambda0 finite"));
    }
    let samples = t1_grid
        .iter()
        .map(|&t1| {
            if !(t1 <= lambda0) {
                return Err(Error::domain(format!("grid point {t1} exceeds lambda0 = {lambda0}")));
            }
            let d = t1 - lambda0;
            Ok((t1, d * d / (beta * beta * (t1 * t1 + 1.0))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LevelCurve { parameter: lambda0, samples, kind: CurveKind::ChiBeta { beta } })
}

/// `tau2 = mu / (tau1^2 + 1) + f(mu) tau1^2 / (tau1^2 + 1)`.
pub fn theta_image_of_gamma_b_level(mu: f64, f: &Saturation, tau1_grid: &[f64]) -> Result<LevelCurve> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::domain(format!("mu must be positive, got {mu}")));
    }
    let fm = f.value(mu);
    let samples = tau1_grid
        .iter()
        .map(|&t| {
            let w = t * t + 1.0;
            (t, mu / w + fm * (t * t / w))
        })
        .collect();
    Ok(LevelCurve { parameter: mu, samples, kind: CurveKind::ThetaImage })
}
