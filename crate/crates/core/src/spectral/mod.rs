//! Spectral functions of Toeplitz operators with nilpotent symbols.
//!
//! For `L = (j, k)` and a product symbol `c = a (x) b`,
//!
//! ```text
//! gamma^a(x1, x2) = int_R a((y - x1) / (2 sqrt(x2))) h_{j-1}(y)^2 dy
//! gamma^b(x2)     = int_0^inf b(u / (2 x2)) l_{k-1}(u)^2 du
//! gamma^c         = gamma^a * gamma^b
//! phi^a(t1, t2)   = gamma^a(t1, t2 (t1^2 + 1))
//! ```
//!
//! All integrals are split at the images of the symbol's breakpoints, so
//! every panel carries a smooth integrand. Constant branches of a vertical
//! symbol are integrated exactly through the Hermite tail mass. `phi^a` is
//! extended to the compactified half-plane by its limit values on the
//! boundary.

use std::fmt;

use crate::error::{Error, LimitId, Result};
use crate::special_fn::{
    cached_rule, hermite_support, hermite_tail_mass, hermite_unchecked, integrate_adaptive, laguerre_support,
    laguerre_unchecked, Estimate, RuleKind, MAX_DEGREE, MAX_RULE_ORDER,
};
use crate::symbols::{ExtReal, NilpotentSymbol, RadialSymbol, VerticalSymbol};

/// `L = (j, k)`, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub j: usize,
    pub k: usize,
}

impl MultiIndex {
    pub fn new(j: usize, k: usize) -> Result<MultiIndex> {
        check_index("j", j)?;
        check_index("k", k)?;
        Ok(MultiIndex { j, k })
    }
}

fn check_index(name: &str, v: usize) -> Result<()> {
    if v == 0 || v - 1 > MAX_DEGREE {
        return Err(Error::domain(format!("{name} must lie in [1, {}], got {v}", MAX_DEGREE + 1)));
    }
    Ok(())
}

/// A point of the compactified half-plane `[-inf, +inf] x [0, +inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub t1: ExtReal,
    pub t2: ExtReal,
}

impl BoundaryPoint {
    pub fn new(t1: ExtReal, t2: ExtReal) -> Result<BoundaryPoint> {
        if t2 < ExtReal::Finite(0.0) {
            return Err(Error::domain(format!("t2 must be >= 0, got {t2}")));
        }
        let t2 = if t2 == ExtReal::Finite(-0.0) { ExtReal::Finite(0.0) } else { t2 };
        Ok(BoundaryPoint { t1, t2 })
    }

    /// From `f64` coordinates; infinities become the boundary tags.
    pub fn from_f64(t1: f64, t2: f64) -> Result<BoundaryPoint> {
        BoundaryPoint::new(ExtReal::new(t1)?, ExtReal::new(t2)?)
    }

    /// True for points of the open half-plane.
    pub fn is_interior(&self) -> bool {
        self.t1.is_finite() && matches!(self.t2, ExtReal::Finite(t) if t > 0.0)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t1, self.t2)
    }
}

/// Quadrature orders and tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub hermite_order: usize,
    pub laguerre_order: usize,
    /// Gauss–Legendre order per adaptive panel.
    pub legendre_order: usize,
    /// Inputs with `t2 < eps` or `|t1| > 1 / eps` use the boundary formulas.
    pub boundary_eps: f64,
    /// Absolute accuracy target of every integral.
    pub value_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            hermite_order: 200,
            laguerre_order: 300,
            legendre_order: 64,
            boundary_eps: 1e-12,
            value_tol: 1e-9,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, order) in
            [("hermite", self.hermite_order), ("laguerre", self.laguerre_order), ("legendre", self.legendre_order)]
        {
            if !(2..=MAX_RULE_ORDER).contains(&order) {
                return Err(Error::domain(format!("{name} order must lie in [2, {MAX_RULE_ORDER}], got {order}")));
            }
        }
        if !(self.boundary_eps > 0.0 && self.boundary_eps < 1.0) {
            return Err(Error::domain("boundary_eps must lie in (0, 1)"));
        }
        if !(self.value_tol > 0.0) {
            return Err(Error::domain("value_tol must be positive"));
        }
        Ok(())
    }
}

/// Largest Hermite or Laguerre degree for which the fixed Gauss rules are
/// tried before panel quadrature.
const FAST_PATH_DEGREE: usize = 20;

/// `int_R a((y - center) / scale) h_m(y)^2 dy`.
pub(crate) fn vertical_integral(
    a: &VerticalSymbol,
    m: usize,
    center: f64,
    scale: f64,
    cfg: &SpectralConfig,
) -> Estimate {
    let support = hermite_support(m);
    let to_y = |s: f64| center + scale * s;
    let bulk_breaks = a.breakpoints().iter().any(|&b| to_y(b).abs() < support);
    if !bulk_breaks && m <= FAST_PATH_DEGREE {
        if let Some(e) = vertical_gauss_hermite(a, m, center, scale, cfg) {
            return e;
        }
    }

    let mut cuts: Vec<f64> = a.breakpoints().iter().map(|&b| to_y(b)).collect();
    cuts.extend([-support, support]);
    cuts.extend([-1.0, 0.0, 1.0].map(to_y).into_iter().filter(|y| y.abs() < support));
    cuts.retain(|y| y.is_finite());
    cuts.push(f64::NEG_INFINITY);
    cuts.push(f64::INFINITY);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = Estimate::default();
    let bound = a.sup_norm_bound();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let s_mid = if lo.is_finite() && hi.is_finite() {
            (0.5 * (lo + hi) - center) / scale
        } else if lo.is_finite() {
            (lo + 1.0 - center) / scale
        } else {
            (hi - 1.0 - center) / scale
        };
        let branch = &a.branches()[a.branch_index(s_mid)];
        if let Some(v) = branch.constant_value() {
            if v != 0.0 {
                let mass = hermite_tail_mass(m, lo) - hermite_tail_mass(m, hi);
                total += Estimate { value: v * mass, error: 4.0 * f64::EPSILON * v.abs() };
            }
        } else if lo >= support || hi <= -support {
            // Tail beyond the support: mass below 1e-20, weighted by the bound.
            let mass = hermite_tail_mass(m, lo) - hermite_tail_mass(m, hi);
            total += Estimate { value: 0.0, error: bound * mass };
        } else {
            let panel_tol = cfg.value_tol * (hi - lo) / (2.0 * support);
            let f = |y: f64| {
                let h = hermite_unchecked(m, y);
                branch.eval((y - center) / scale) * h * h
            };
            total += integrate_adaptive(&f, lo, hi, panel_tol, cfg.legendre_order);
        }
    }
    total
}

fn vertical_gauss_hermite(
    a: &VerticalSymbol,
    m: usize,
    center: f64,
    scale: f64,
    cfg: &SpectralConfig,
) -> Option<Estimate> {
    let sum = |order: usize| {
        let rule = cached_rule(RuleKind::GaussHermite, order);
        rule.nodes
            .iter()
            .zip(&rule.log_weights)
            .map(|(&y, &lw)| {
                let h = hermite_unchecked(m, y);
                (lw + y * y).exp() * h * h * a.eval_f64((y - center) / scale)
            })
            .sum::<f64>()
    };
    let fine = sum(cfg.hermite_order);
    let coarse = sum(cfg.hermite_order / 2);
    let error = (fine - coarse).abs();
    (error <= 0.1 * cfg.value_tol).then_some(Estimate { value: fine, error })
}

/// `int_0^inf b(u / (2 x2)) l_n(u)^2 du`.
fn radial_integral(b: &RadialSymbol, n: usize, x2: f64, cfg: &SpectralConfig) -> Estimate {
    let support = laguerre_support(n);
    let scale = 2.0 * x2;
    let bulk_breaks = b.breakpoints().iter().any(|&br| scale * br < support);
    if !bulk_breaks && n <= FAST_PATH_DEGREE {
        if let Some(e) = radial_gauss_laguerre(b, n, scale, cfg) {
            return e;
        }
    }

    let mut cuts: Vec<f64> = b.breakpoints().iter().map(|&br| scale * br).filter(|&u| u < support).collect();
    cuts.extend((-3..=3).map(|k| scale * 10f64.powi(k)).filter(|&u| u < support));
    cuts.extend([0.0, support]);
    cuts.retain(|u| u.is_finite() && *u >= 0.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = Estimate::default();
    let density = |u: f64| {
        let l = laguerre_unchecked(n, 0.0, u);
        l * l
    };
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        let branch = &b.branches()[b.branch_index(0.5 * (lo + hi) / scale)];
        let panel_tol = cfg.value_tol * (hi - lo) / support;
        total += match branch.constant_value() {
            Some(0.0) => Estimate::default(),
            Some(v) => integrate_adaptive(&density, lo, hi, panel_tol / v.abs(), cfg.legendre_order) * v,
            None => integrate_adaptive(&|u| branch.eval(u / scale) * density(u), lo, hi, panel_tol, cfg.legendre_order),
        };
    }
    // Mass beyond the support is below 1e-20.
    total.error += b.sup_norm_bound() * 1e-20;
    total
}

fn radial_gauss_laguerre(b: &RadialSymbol, n: usize, scale: f64, cfg: &SpectralConfig) -> Option<Estimate> {
    let sum = |order: usize| {
        let rule = cached_rule(RuleKind::GaussLaguerre, order);
        rule.nodes
            .iter()
            .zip(&rule.log_weights)
            .map(|(&u, &lw)| {
                let l = laguerre_unchecked(n, 0.0, u);
                (lw + u).exp() * l * l * b.eval(u / scale)
            })
            .sum::<f64>()
    };
    let fine = sum(cfg.laguerre_order);
    let coarse = sum(cfg.laguerre_order / 2);
    let error = (fine - coarse).abs();
    (error <= 0.1 * cfg.value_tol).then_some(Estimate { value: fine, error })
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || v.is_nan() {
        return Err(Error::domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::domain(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

/// `gamma^a(x1, x2)` with its error estimate.
pub fn gamma_a_estimate(a: &VerticalSymbol, j: usize, x1: f64, x2: f64, cfg: &SpectralConfig) -> Result<Estimate> {
    check_index("j", j)?;
    check_finite("x1", x1)?;
    check_positive("x2", x2)?;
    if x2 == f64::INFINITY {
        return Err(Error::domain("x2 must be finite"));
    }
    Ok(vertical_integral(a, j - 1, x1, 2.0 * x2.sqrt(), cfg))
}

pub fn gamma_a(a: &VerticalSymbol, j: usize, x1: f64, x2: f64, cfg: &SpectralConfig) -> Result<f64> {
    gamma_a_estimate(a, j, x1, x2, cfg).map(|e| e.value)
}

/// `gamma^b(x2)` with its error estimate.
pub fn gamma_b_estimate(b: &RadialSymbol, k: usize, x2: f64, cfg: &SpectralConfig) -> Result<Estimate> {
    check_index("k", k)?;
    check_positive("x2", x2)?;
    if x2 == f64::INFINITY {
        return Err(Error::domain("x2 must be finite"));
    }
    Ok(radial_integral(b, k - 1, x2, cfg))
}

pub fn gamma_b(b: &RadialSymbol, k: usize, x2: f64, cfg: &SpectralConfig) -> Result<f64> {
    gamma_b_estimate(b, k, x2, cfg).map(|e| e.value)
}

/// `gamma^c = gamma^a * gamma^b` with a first-order error estimate.
pub fn gamma_c_estimate(
    c: &NilpotentSymbol,
    l: MultiIndex,
    x1: f64,
    x2: f64,
    cfg: &SpectralConfig,
) -> Result<Estimate> {
    let ea = gamma_a_estimate(&c.a, l.j, x1, x2, cfg)?;
    let eb = gamma_b_estimate(&c.b, l.k, x2, cfg)?;
    Ok(Estimate { value: ea.value * eb.value, error: ea.value.abs() * eb.error + eb.value.abs() * ea.error })
}

pub fn gamma_c(c: &NilpotentSymbol, l: MultiIndex, x1: f64, x2: f64, cfg: &SpectralConfig) -> Result<f64> {
    gamma_c_estimate(c, l, x1, x2, cfg).map(|e| e.value)
}

/// Tail mass `int_{t1}^inf h_{j-1}^2`.
pub fn varphi(j: usize, t1: ExtReal) -> f64 {
    hermite_tail_mass(j.max(1) - 1, t1.to_f64())
}

fn exact(value: f64) -> Estimate {
    Estimate { value, error: 0.0 }
}

fn require_continuous(a: &VerticalSymbol, s: f64, lemma: LimitId, p: BoundaryPoint) -> Result<f64> {
    if a.is_continuous_at(s) {
        Ok(a.eval_f64(s))
    } else {
        Err(Error::BoundaryUndefined { lemma, point: p.to_string(), at: s })
    }
}

/// Boundary value of `phi^a` at `p`, or `None` for interior points.
fn phi_a_boundary(a: &VerticalSymbol, j: usize, p: BoundaryPoint) -> Result<Option<f64>> {
    match (p.t1, p.t2) {
        (_, ExtReal::PosInf) => require_continuous(a, 0.0, LimitId::L5_4, p).map(Some),
        (ExtReal::PosInf, ExtReal::Finite(t2)) if t2 == 0.0 => Ok(Some(a.limit_neg_inf())),
        (ExtReal::NegInf, ExtReal::Finite(t2)) if t2 == 0.0 => Ok(Some(a.limit_pos_inf())),
        (ExtReal::Finite(t1), ExtReal::Finite(t2)) if t2 == 0.0 => {
            let f = varphi(j, ExtReal::Finite(t1));
            Ok(Some(a.limit_neg_inf() * (1.0 - f) + a.limit_pos_inf() * f))
        }
        (ExtReal::PosInf, ExtReal::Finite(t2)) => require_continuous(a, -0.5 / t2.sqrt(), LimitId::L5_3, p).map(Some),
        (ExtReal::NegInf, ExtReal::Finite(t2)) => require_continuous(a, 0.5 / t2.sqrt(), LimitId::L5_3, p).map(Some),
        _ => Ok(None),
    }
}

/// `phi^a(p)` with its error estimate.
///
/// Boundary points take their limit values. Interior points closer to the
/// boundary than `cfg.boundary_eps` (that is, `t2 < eps` or `|t1| > 1/eps`)
/// are snapped to it when the corresponding limit exists.
pub fn phi_a_estimate(a: &VerticalSymbol, j: usize, p: BoundaryPoint, cfg: &SpectralConfig) -> Result<Estimate> {
    check_index("j", j)?;
    if let Some(v) = phi_a_boundary(a, j, p)? {
        return Ok(exact(v));
    }
    let (ExtReal::Finite(t1), ExtReal::Finite(t2)) = (p.t1, p.t2) else {
        unreachable!("every non-interior point is a boundary point")
    };
    let eps = cfg.boundary_eps;
    let snap_t1 = if t1 > 1.0 / eps {
        ExtReal::PosInf
    } else if t1 < -1.0 / eps {
        ExtReal::NegInf
    } else {
        p.t1
    };
    let snap_t2 = if t2 < eps { ExtReal::Finite(0.0) } else { p.t2 };
    if snap_t1 != p.t1 || snap_t2 != p.t2 {
        if let Ok(Some(v)) = phi_a_boundary(a, j, BoundaryPoint { t1: snap_t1, t2: snap_t2 }) {
            return Ok(exact(v));
        }
    }
    Ok(vertical_integral(a, j - 1, t1, 2.0 * t2.sqrt() * t1.hypot(1.0), cfg))
}

pub fn phi_a(a: &VerticalSymbol, j: usize, p: BoundaryPoint, cfg: &SpectralConfig) -> Result<f64> {
    phi_a_estimate(a, j, p, cfg).map(|e| e.value)
}

/// The ramp part of `phi^{a_alpha}`:
/// `int_{t1-w}^{t1} ((s - t1) / w + 1) h_{j-1}(s)^2 ds`, `w = 2 alpha sqrt(t2 (t1^2 + 1))`.
pub fn psi_alpha(alpha: f64, j: usize, t1: f64, t2: f64, cfg: &SpectralConfig) -> Result<f64> {
    check_positive("alpha", alpha)?;
    check_positive("t2", t2)?;
    check_finite("t1", t1)?;
    check_index("j", j)?;
    let m = j - 1;
    let w = 2.0 * alpha * t2.sqrt() * t1.hypot(1.0);
    let support = hermite_support(m);
    let (lo, hi) = ((t1 - w).max(-support), t1.min(support));
    if !(hi > lo) {
        return Ok(0.0);
    }
    let f = |s: f64| {
        let h = hermite_unchecked(m, s);
        ((s - t1) / w + 1.0) * h * h
    };
    Ok(integrate_adaptive(&f, lo, hi, cfg.value_tol * (hi - lo) / (2.0 * support), cfg.legendre_order).value)
}
