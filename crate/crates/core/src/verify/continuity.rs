//! Continuity of transported spectral functions, estimated by grid
//! oscillation in compact coordinates.
//!
//! A point `(t1, t2)` of the closed half-plane has compact coordinates
//! `u = 2 atan(t1) / pi` in `[-1, 1]` and `v = 2 atan(t2) / pi` in `[0, 1]`.
//! Each window is sampled on a tensor grid with uniform spacing plus nodes
//! at `radius * 2^-k` from every domain edge it touches. The oscillation is
//! the largest difference between node values at max-norm distance at most
//! `radius`. A function passes when it stays within the budget
//! `5 sqrt(radius) (1 + |f|)`, which a Holder-1/2 function with modest
//! constant meets and a jump does not.

use rayon::prelude::*;

use crate::error::{Error, LimitId, Result};
use crate::geometry::{Collapse, PlaneMap};
use crate::spectral::{gamma_b, phi_a, varphi, BoundaryPoint, SpectralConfig};
use crate::symbols::{ExtReal, RadialSymbol, VerticalSymbol};

/// Oscillation that counts as a detected discontinuity.
pub const DISCONTINUITY_THRESHOLD: f64 = 0.05;

/// A spectral function pulled back to the coordinates of a map chain.
#[derive(Debug, Clone)]
pub enum Transported {
    /// `phi^a`, in the coordinates of `Phi`.
    Phi { a: VerticalSymbol, j: usize },
    /// `gamma^a gamma^b`, also in the coordinates of `Phi`.
    GammaAb { a: VerticalSymbol, b: RadialSymbol, j: usize, k: usize },
}

impl Transported {
    fn sup_norm(&self) -> f64 {
        match self {
            Transported::Phi { a, .. } => a.sup_norm_bound(),
            Transported::GammaAb { a, b, .. } => a.sup_norm_bound() * b.sup_norm_bound(),
        }
    }

    fn label(&self) -> String {
        match self {
            Transported::Phi { a, j } => format!("a={} j={j}", a.name()),
            Transported::GammaAb { a, b, j, k } => format!("a={} b={} j={j} k={k}", a.name(), b.name()),
        }
    }

    fn vertical(&self) -> (&VerticalSymbol, usize) {
        match self {
            Transported::Phi { a, j } | Transported::GammaAb { a, j, .. } => (a, *j),
        }
    }

    /// Value at `tau`, the image point under `chain`. Points of inserted
    /// segments take the value along the level set they stand for.
    pub fn eval(&self, chain: &PlaneMap, tau: BoundaryPoint, cfg: &SpectralConfig) -> Result<f64> {
        let (t, collapse) = chain.inverse_traced(tau)?;
        let (a, j) = self.vertical();
        let phi = match collapse {
            Some(Collapse::Level { beta, lambda }) => level_value(a, j, beta, lambda),
            _ => phi_extended(a, j, t, cfg)?,
        };
        match self {
            Transported::Phi { .. } => Ok(phi),
            Transported::GammaAb { b, k, .. } => {
                let g = match collapse {
                    Some(Collapse::Saturated { mu }) => gamma_b_extended(b, *k, mu, cfg)?,
                    _ => gamma_b_in_phi_coordinates(b, *k, t, cfg)?,
                };
                Ok(phi * g)
            }
        }
    }
}

/// Limit of `phi^a` at `(-inf, 1/beta^2)` along the level set `lambda` of
/// `phi^{chi_beta}`: the jump of `a` at `beta/2` is seen through `varphi`.
fn level_value(a: &VerticalSymbol, j: usize, beta: f64, lambda: f64) -> f64 {
    let s = 0.5 * beta;
    let f = varphi(j, ExtReal::new(lambda).unwrap_or(ExtReal::Finite(0.0)));
    a.eval_left(s) * (1.0 - f) + a.eval_f64(s) * f
}

/// `phi^a`, extended to the top edge when `a` jumps at 0: the limit there is
/// `a(0-) (1 - varphi(t1)) + a(0+) varphi(t1)`.
fn phi_extended(a: &VerticalSymbol, j: usize, t: BoundaryPoint, cfg: &SpectralConfig) -> Result<f64> {
    match phi_a(a, j, t, cfg) {
        Err(Error::BoundaryUndefined { lemma: LimitId::L5_4, .. }) => {
            let f = varphi(j, t.t1);
            Ok(a.eval_left(0.0) * (1.0 - f) + a.eval_f64(0.0) * f)
        }
        other => other,
    }
}

fn gamma_b_extended(b: &RadialSymbol, k: usize, x2: f64, cfg: &SpectralConfig) -> Result<f64> {
    if x2 <= 0.0 {
        Ok(b.b_inf())
    } else if x2 == f64::INFINITY {
        Ok(b.b0())
    } else {
        gamma_b(b, k, x2, cfg)
    }
}

/// `gamma^b(t2 (t1^2 + 1))` with its limits on the boundary. The corners
/// `(+-inf, 0)` carry no value.
fn gamma_b_in_phi_coordinates(b: &RadialSymbol, k: usize, t: BoundaryPoint, cfg: &SpectralConfig) -> Result<f64> {
    match (t.t1, t.t2) {
        (ExtReal::Finite(t1), ExtReal::Finite(t2)) => gamma_b_extended(b, k, t2 * (t1 * t1 + 1.0), cfg),
        (_, ExtReal::PosInf) => Ok(b.b0()),
        (_, ExtReal::Finite(t2)) if t2 > 0.0 => Ok(b.b0()),
        _ => Err(Error::ExcludedPoint { point: t.to_string(), stage: None }),
    }
}

/// Compact coordinates of a point.
pub fn point_to_compact(p: BoundaryPoint) -> (f64, f64) {
    let c = |x: f64| std::f64::consts::FRAC_2_PI * x.atan();
    (c(p.t1.to_f64()), c(p.t2.to_f64()))
}

/// The point with compact coordinates `(u, v)`.
pub fn compact_to_point(u: f64, v: f64) -> BoundaryPoint {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let t1 = if u <= -1.0 {
        ExtReal::NegInf
    } else if u >= 1.0 {
        ExtReal::PosInf
    } else {
        ExtReal::Finite((half_pi * u).tan())
    };
    let t2 = if v <= 0.0 {
        ExtReal::Finite(0.0)
    } else if v >= 1.0 {
        ExtReal::PosInf
    } else {
        ExtReal::Finite((half_pi * v).tan())
    };
    BoundaryPoint { t1, t2 }
}

/// A rectangle in compact coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub label: String,
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Window {
    pub fn new(label: impl Into<String>, u: (f64, f64), v: (f64, f64)) -> Window {
        Window { label: label.into(), u: (u.0.max(-1.0), u.1.min(1.0)), v: (v.0.max(0.0), v.1.min(1.0)) }
    }

    /// Strip of width `width` along the left (`side < 0`) or right edge.
    pub fn edge_strip(label: impl Into<String>, side: f64, width: f64, v: (f64, f64)) -> Window {
        let u = if side < 0.0 { (-1.0, -1.0 + width) } else { (1.0 - width, 1.0) };
        Window::new(label, u, v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityOptions {
    /// Ball radius in compact coordinates.
    pub radius: f64,
    /// Uniform node spacing; at most `radius` for neighbours to be compared.
    pub spacing: f64,
    /// Smallest edge offset of the refinement nodes. Keeps `|t1|` well below
    /// `1 / boundary_eps` so interior nodes are not snapped to the edge.
    pub min_offset: f64,
}

impl Default for ContinuityOptions {
    fn default() -> Self {
        ContinuityOptions { radius: 1e-3, spacing: 5e-4, min_offset: 1e-10 }
    }
}

impl ContinuityOptions {
    pub fn budget(&self, sup_norm: f64) -> f64 {
        5.0 * self.radius.sqrt() * (1.0 + sup_norm)
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius < 1.0) {
            return Err(Error::domain(format!("radius must lie in (0, 1), got {}", self.radius)));
        }
        if !(self.spacing > 0.0 && self.spacing <= self.radius) {
            return Err(Error::domain(format!("spacing must lie in (0, radius], got {}", self.spacing)));
        }
        if !(self.min_offset > 0.0 && self.min_offset < self.radius) {
            return Err(Error::domain("min_offset must lie in (0, radius)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub label: String,
    pub radius: f64,
    pub budget: f64,
    pub max_oscillation: f64,
    /// Window and node pair where the largest difference occurred.
    pub worst_window: String,
    pub worst_pair: Option<(BoundaryPoint, BoundaryPoint)>,
    pub nodes: usize,
    /// Nodes at excluded points or without a boundary value.
    pub skipped: usize,
    pub expected_continuous: bool,
    pub within_budget: bool,
    /// True when the outcome matches the expectation: within budget for a
    /// continuous function, oscillation of at least
    /// [`DISCONTINUITY_THRESHOLD`] otherwise.
    pub pass: bool,
}

fn axis(lo: f64, hi: f64, domain: (f64, f64), opts: &ContinuityOptions) -> Vec<f64> {
    let n = ((hi - lo) / opts.spacing).ceil().max(1.0) as usize;
    let mut xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let mut offset = opts.radius;
    while offset >= opts.min_offset {
        if lo == domain.0 {
            xs.push(domain.0 + offset);
        }
        if hi == domain.1 {
            xs.push(domain.1 - offset);
        }
        offset *= 0.5;
    }
    xs.retain(|x| *x >= lo && *x <= hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

struct WindowResult {
    oscillation: f64,
    pair: Option<(BoundaryPoint, BoundaryPoint)>,
    nodes: usize,
    skipped: usize,
}

fn scan_window(
    f: &Transported,
    chain: &PlaneMap,
    w: &Window,
    opts: &ContinuityOptions,
    cfg: &SpectralConfig,
) -> WindowResult {
    let us = axis(w.u.0, w.u.1, (-1.0, 1.0), opts);
    let vs = axis(w.v.0, w.v.1, (0.0, 1.0), opts);
    let (nu, nv) = (us.len(), vs.len());
    let values: Vec<Option<f64>> = (0..nu * nv)
        .into_par_iter()
        .map(|idx| f.eval(chain, compact_to_point(us[idx / nv], vs[idx % nv]), cfg).ok())
        .collect();
    let skipped = values.iter().filter(|v| v.is_none()).count();
    let r = opts.radius;
    let within = |xs: &[f64], i: usize| {
        let lo = xs.partition_point(|&x| x < xs[i] - r);
        let hi = xs.partition_point(|&x| x <= xs[i] + r);
        lo..hi
    };
    let row_best = |i: usize| {
        let mut best = (0.0f64, usize::MAX, usize::MAX);
        let ui = within(&us, i);
        for jdx in 0..nv {
            let Some(x) = values[i * nv + jdx] else { continue };
            for i2 in ui.clone() {
                for j2 in within(&vs, jdx) {
                    if let Some(y) = values[i2 * nv + j2] {
                        let d = (x - y).abs();
                        if d > best.0 {
                            best = (d, i * nv + jdx, i2 * nv + j2);
                        }
                    }
                }
            }
        }
        best
    };
    let rows: Vec<(f64, usize, usize)> = (0..nu).into_par_iter().map(row_best).collect();
    let best = rows.into_iter().fold((0.0, usize::MAX, usize::MAX), |acc, r| if r.0 > acc.0 { r } else { acc });
    let node = |idx: usize| compact_to_point(us[idx / nv], vs[idx % nv]);
    WindowResult {
        oscillation: best.0,
        pair: (best.1 != usize::MAX).then(|| (node(best.1), node(best.2))),
        nodes: nu * nv,
        skipped,
    }
}

fn scan(
    f: &Transported,
    chain: &PlaneMap,
    windows: &[Window],
    expected_continuous: bool,
    opts: &ContinuityOptions,
    cfg: &SpectralConfig,
) -> Result<ContinuityReport> {
    opts.validate()?;
    cfg.validate()?;
    let budget = opts.budget(f.sup_norm());
    let mut report = ContinuityReport {
        label: format!("{} chain={chain}", f.label()),
        radius: opts.radius,
        budget,
        max_oscillation: 0.0,
        worst_window: String::new(),
        worst_pair: None,
        nodes: 0,
        skipped: 0,
        expected_continuous,
        within_budget: true,
        pass: false,
    };
    for w in windows {
        let r = scan_window(f, chain, w, opts, cfg);
        report.nodes += r.nodes;
        report.skipped += r.skipped;
        if r.oscillation > report.max_oscillation || report.worst_window.is_empty() {
            report.max_oscillation = report.max_oscillation.max(r.oscillation);
            report.worst_window = w.label.clone();
            report.worst_pair = r.pair;
        }
    }
    report.within_budget = report.max_oscillation <= budget;
    report.pass =
        if expected_continuous { report.within_budget } else { report.max_oscillation >= DISCONTINUITY_THRESHOLD };
    Ok(report)
}

fn stages(chain: &PlaneMap) -> Vec<&PlaneMap> {
    match chain {
        PlaneMap::Chain(s) => s.iter().flat_map(stages).collect(),
        other => vec![other],
    }
}

fn rescale_betas(chain: &PlaneMap) -> Vec<f64> {
    stages(chain)
        .into_iter()
        .filter_map(|m| match m {
            PlaneMap::Rescale(r) => Some(r.beta()),
            _ => None,
        })
        .collect()
}

/// A jump at `s > 0` is repaired by a rescaling with `beta = 2 s`; jumps at
/// 0 are harmless; jumps at `s < 0` are never repaired.
fn jumps_repaired(a: &VerticalSymbol, chain: &PlaneMap) -> bool {
    let betas = rescale_betas(chain);
    a.jumps().iter().all(|&s| s == 0.0 || (s > 0.0 && betas.iter().any(|&b| (b - 2.0 * s).abs() <= 1e-12 * b)))
}

/// Compact `v` of the image of the boundary point `(side, t2)`, or of the
/// nearest admissible point when that one is excluded.
fn image_v(chain: &PlaneMap, side: f64, t2: f64) -> f64 {
    let p = BoundaryPoint::from_f64(side, t2).expect("valid point");
    match chain.forward(p) {
        Ok(q) => point_to_compact(q).1,
        Err(_) => point_to_compact(p).1,
    }
}

/// Windows at the places where continuity can fail: along the edge around
/// every nonzero jump's accumulation point, at the four corners, and across
/// the middle of the top and bottom edges.
fn default_windows(a: &VerticalSymbol, chain: &PlaneMap, opts: &ContinuityOptions) -> Vec<Window> {
    let width = 4.0 * opts.radius;
    let mut out = Vec::new();
    for s in a.jumps() {
        if s == 0.0 {
            continue;
        }
        let e = 0.25 / (s * s);
        let side = if s > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
        let (lo, hi) = (image_v(chain, side, 0.75 * e), image_v(chain, side, 1.25 * e));
        out.push(Window::edge_strip(format!("jump:{s}"), side, width, (lo - width, hi + width)));
    }
    for (name, u, v) in [
        ("corner(-inf,0)", (-1.0, -1.0 + 2.0 * width), (0.0, 2.0 * width)),
        ("corner(+inf,0)", (1.0 - 2.0 * width, 1.0), (0.0, 2.0 * width)),
        ("corner(-inf,+inf)", (-1.0, -1.0 + 2.0 * width), (1.0 - 2.0 * width, 1.0)),
        ("corner(+inf,+inf)", (1.0 - 2.0 * width, 1.0), (1.0 - 2.0 * width, 1.0)),
        ("top", (-0.1, 0.1), (1.0 - width, 1.0)),
        ("bottom", (-0.1, 0.1), (0.0, width)),
    ] {
        out.push(Window::new(name, u, v));
    }
    out
}

/// Oscillation of `phi^a` composed with the inverse of `chain`.
///
/// Without explicit `windows` the default set covers every jump's
/// accumulation point, the corners and the top and bottom edges. The
/// expectation is continuity iff every jump of `a` at `s > 0` has a
/// rescaling stage with `beta = 2 s` and there are no jumps at `s < 0`.
pub fn check_chain_continuity(
    a: &VerticalSymbol,
    j: usize,
    chain: &PlaneMap,
    windows: Option<&[Window]>,
    opts: &ContinuityOptions,
    cfg: &SpectralConfig,
) -> Result<ContinuityReport> {
    let f = Transported::Phi { a: a.clone(), j };
    let defaults;
    let windows = match windows {
        Some(w) => w,
        None => {
            defaults = default_windows(a, chain, opts);
            &defaults
        }
    };
    scan(&f, chain, windows, jumps_repaired(a, chain), opts, cfg)
}

/// Oscillation of `gamma^a gamma^b`, written in the coordinates of `Phi`,
/// composed with the inverse of `maps`. A leading `Phi` stage in `maps` is
/// implied and may be omitted.
///
/// The default windows add strips along both vertical edges from the corners
/// `P+-` upward. The expectation is continuity iff the jumps of `a` are
/// repaired and either `b(0) = b(inf)` or `maps` contains `Theta`.
pub fn check_gamma_ab_continuity(
    a: &VerticalSymbol,
    b: &RadialSymbol,
    j: usize,
    k: usize,
    maps: &PlaneMap,
    windows: Option<&[Window]>,
    opts: &ContinuityOptions,
    cfg: &SpectralConfig,
) -> Result<ContinuityReport> {
    let mut rest: Vec<PlaneMap> = stages(maps).into_iter().cloned().collect();
    if matches!(rest.first(), Some(PlaneMap::Phi)) {
        rest.remove(0);
    }
    if rest.iter().any(|m| matches!(m, PlaneMap::Phi)) {
        return Err(Error::domain("Phi may only appear as the first map"));
    }
    let chain = PlaneMap::chain(rest);
    let has_theta = stages(&chain).iter().any(|m| matches!(m, PlaneMap::Theta(_)));
    let expected = jumps_repaired(a, &chain) && (has_theta || (b.b0() - b.b_inf()).abs() <= 1e-12);
    let f = Transported::GammaAb { a: a.clone(), b: b.clone(), j, k };
    let defaults;
    let windows = match windows {
        Some(w) => w,
        None => {
            let width = 4.0 * opts.radius;
            let mut w = default_windows(a, &chain, opts);
            for (name, side) in [("P-", f64::NEG_INFINITY), ("P+", f64::INFINITY)] {
                w.push(Window::edge_strip(name, side, width, (0.0, image_v(&chain, side, 0.25) + width)));
            }
            defaults = w;
            &defaults
        }
    };
    let mut report = scan(&f, &chain, windows, expected, opts, cfg)?;
    report.label = match chain.to_string().as_str() {
        "none" => format!("{} maps=phi", f.label()),
        rest => format!("{} maps=phi,{rest}", f.label()),
    };
    Ok(report)
}
