//! Point separation by spectral functions of continuous symbols.
//!
//! Random pairs come from a `ChaCha8Rng` seeded with the caller's seed, so a
//! given seed always produces the same pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{phi_a, BoundaryPoint, SpectralConfig};
use crate::symbols::{make_a_alpha, named_symbols, ExtReal, VerticalSymbol};

/// Gap required between two boundary points.
pub const BOUNDARY_GAP: f64 = 1e-6;
/// Gap required when at least one point is interior.
pub const INTERIOR_GAP: f64 = 1e-8;

/// Smallest ramp width tried is `2^-ALPHA_STEPS`.
const ALPHA_STEPS: i32 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub point_pair: (BoundaryPoint, BoundaryPoint),
    /// The first witness that separated the pair, or the best one tried.
    pub witness_symbol: String,
    pub values: (f64, f64),
    pub gap: f64,
    pub threshold: f64,
    pub separated: bool,
}

fn on_top(p: &BoundaryPoint) -> bool {
    p.t2 == ExtReal::PosInf
}

fn try_witnesses(
    p: BoundaryPoint,
    q: BoundaryPoint,
    j: usize,
    threshold: f64,
    witnesses: impl IntoIterator<Item = Result<(String, VerticalSymbol)>>,
    cfg: &SpectralConfig,
) -> Result<SeparationReport> {
    let mut best: Option<SeparationReport> = None;
    for w in witnesses {
        let (label, a) = w?;
        let v = (phi_a(&a, j, p, cfg)?, phi_a(&a, j, q, cfg)?);
        let gap = (v.0 - v.1).abs();
        let report = SeparationReport {
            point_pair: (p, q),
            witness_symbol: label,
            values: v,
            gap,
            threshold,
            separated: gap > threshold,
        };
        if report.separated {
            return Ok(report);
        }
        if best.as_ref().is_none_or(|b| gap > b.gap) {
            best = Some(report);
        }
    }
    best.ok_or_else(|| Error::domain("no witness to try"))
}

/// Separates two distinct boundary points, not both on the top edge, with
/// `a1` and then `a2`.
pub fn check_separation_boundary(
    p: BoundaryPoint,
    q: BoundaryPoint,
    j: usize,
    cfg: &SpectralConfig,
) -> Result<SeparationReport> {
    if p.is_interior() || q.is_interior() {
        return Err(Error::domain(format!("{p} and {q} must both lie on the boundary")));
    }
    if p == q {
        return Err(Error::domain(format!("points coincide: {p}")));
    }
    if on_top(&p) && on_top(&q) {
        return Err(Error::domain(format!("{p} and {q} both lie on the top edge, which is one point of the quotient")));
    }
    let cat = named_symbols();
    try_witnesses(p, q, j, BOUNDARY_GAP, [Ok(("a1".into(), cat.a1)), Ok(("a2".into(), cat.a2))], cfg)
}

/// Separates two distinct points, at least one of them interior, with
/// ramps `a_alpha` for `alpha = 1, 1/2, ..., 2^-20`.
///
/// Two interior points on one vertical line first try
/// `alpha = 1 / (2 sqrt(t1^2 + 1))`. Against a point `(+inf, y2)` each ramp
/// is also tried shifted right by `alpha`.
pub fn check_separation_interior(
    p: BoundaryPoint,
    q: BoundaryPoint,
    j: usize,
    cfg: &SpectralConfig,
) -> Result<SeparationReport> {
    if !p.is_interior() && !q.is_interior() {
        return Err(Error::domain(format!("at least one of {p}, {q} must be interior")));
    }
    if p == q {
        return Err(Error::domain(format!("points coincide: {p}")));
    }
    let mut alphas = Vec::new();
    if p.is_interior() && q.is_interior() && p.t1 == q.t1 {
        alphas.push(0.5 / p.t1.to_f64().hypot(1.0));
    }
    alphas.extend((0..=ALPHA_STEPS).map(|n| 2f64.powi(-n)));
    let right_edge = |x: &BoundaryPoint| x.t1 == ExtReal::PosInf && matches!(x.t2, ExtReal::Finite(y) if y > 0.0);
    let shifted = right_edge(&p) || right_edge(&q);
    let witnesses = alphas.into_iter().flat_map(move |alpha| {
        let plain = make_a_alpha(alpha).map(|a| (format!("a_alpha:{alpha}"), a));
        let moved = shifted
            .then(|| make_a_alpha(alpha).map(|a| (format!("a_alpha:{alpha} shifted:{alpha}"), a.shifted(alpha))));
        std::iter::once(plain).chain(moved)
    });
    try_witnesses(p, q, j, INTERIOR_GAP, witnesses, cfg)
}

const T1_SPAN: f64 = 2.5;
const T2_RANGE: (f64, f64) = (0.05, 20.0);

fn log_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_boundary_point(rng: &mut ChaCha8Rng) -> BoundaryPoint {
    let pt = |t1: f64, t2: f64| BoundaryPoint::from_f64(t1, t2).expect("sampled points are valid");
    let side = if rng.gen_bool(0.5) { f64::INFINITY } else { f64::NEG_INFINITY };
    match rng.gen_range(0..5) {
        0 | 1 => pt(rng.gen_range(-T1_SPAN..T1_SPAN), 0.0),
        2 => pt(side, log_uniform(rng, T2_RANGE)),
        3 => pt(side, 0.0),
        _ => {
            let t1 = if rng.gen_bool(0.8) { rng.gen_range(-T1_SPAN..T1_SPAN) } else { side };
            pt(t1, f64::INFINITY)
        }
    }
}

fn random_interior_point(rng: &mut ChaCha8Rng) -> BoundaryPoint {
    BoundaryPoint::from_f64(rng.gen_range(-T1_SPAN..T1_SPAN), log_uniform(rng, T2_RANGE)).expect("valid")
}

/// Points closer than this (absolute in finite `t1`, relative in `t2`) are
/// not drawn together, so every gap stays well above the thresholds.
const MIN_SEPARATION: f64 = 0.01;

fn close(a: ExtReal, b: ExtReal, relative: bool) -> bool {
    match (a, b) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => {
            let scale = if relative { x.abs().max(y.abs()) } else { 1.0 };
            (x - y).abs() <= MIN_SEPARATION * scale
        }
        _ => a == b,
    }
}

fn well_separated(p: &BoundaryPoint, q: &BoundaryPoint) -> bool {
    if on_top(p) && on_top(q) {
        return false;
    }
    !(close(p.t1, q.t1, false) && close(p.t2, q.t2, true))
}

fn draw_pairs(
    n: usize,
    seed: u64,
    stream: u64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> (BoundaryPoint, BoundaryPoint),
) -> Vec<(BoundaryPoint, BoundaryPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (p, q) = draw(&mut rng);
        if well_separated(&p, &q) {
            out.push((p, q));
        }
    }
    out
}

/// `n` pairs of distinct boundary points, not both on the top edge.
pub fn random_boundary_pairs(n: usize, seed: u64) -> Vec<(BoundaryPoint, BoundaryPoint)> {
    draw_pairs(n, seed, 1, |rng| (random_boundary_point(rng), random_boundary_point(rng)))
}

/// `n` pairs of distinct interior points; a quarter share their `t1`.
pub fn random_interior_pairs(n: usize, seed: u64) -> Vec<(BoundaryPoint, BoundaryPoint)> {
    draw_pairs(n, seed, 2, |rng| {
        let p = random_interior_point(rng);
        let mut q = random_interior_point(rng);
        if rng.gen_bool(0.25) {
            q.t1 = p.t1;
        }
        (p, q)
    })
}

/// `n` pairs of an interior point and a boundary point.
pub fn random_mixed_pairs(n: usize, seed: u64) -> Vec<(BoundaryPoint, BoundaryPoint)> {
    draw_pairs(n, seed, 3, |rng| (random_interior_point(rng), random_boundary_point(rng)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(t1: f64, t2: f64) -> BoundaryPoint {
        BoundaryPoint::from_f64(t1, t2).unwrap()
    }

    fn cfg() -> SpectralConfig {
        SpectralConfig::default()
    }

    #[test]
    fn boundary_examples() {
        let r = check_separation_boundary(bp(f64::NEG_INFINITY, 1.0), bp(f64::INFINITY, 1.0), 1, &cfg()).unwrap();
        assert_eq!(r.witness_symbol, "a1");
        assert!((r.values.0 - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((r.gap - 2.0 / 5f64.sqrt()).abs() < 1e-15);

        let r = check_separation_boundary(bp(0.0, 0.0), bp(0.0, f64::INFINITY), 1, &cfg()).unwrap();
        assert_eq!(r.witness_symbol, "a2");
        assert_eq!(r.values, (0.0, 1.0));

        let r = check_separation_boundary(bp(0.3, 0.0), bp(0.7, 0.0), 1, &cfg()).unwrap();
        assert_eq!(r.witness_symbol, "a1");
        let erfc = |x: f64| libm::erfc(x);
        assert!((r.gap - (erfc(0.3) - erfc(0.7))).abs() < 1e-14, "{r:?}");
    }

    #[test]
    fn boundary_preconditions() {
        let top = bp(0.0, f64::INFINITY);
        assert!(check_separation_boundary(top, bp(f64::INFINITY, f64::INFINITY), 1, &cfg()).is_err());
        assert!(check_separation_boundary(top, top, 1, &cfg()).is_err());
        assert!(check_separation_boundary(bp(0.0, 1.0), top, 1, &cfg()).is_err());
    }

    #[test]
    fn interior_examples() {
        let r = check_separation_interior(bp(0.0, 1.0), bp(0.0, 4.0), 1, &cfg()).unwrap();
        assert_eq!(r.witness_symbol, "a_alpha:0.5");
        assert!(r.values.0 < r.values.1, "{r:?}");

        let r = check_separation_interior(bp(0.0, 1.0), bp(1.0, 1.0), 1, &cfg()).unwrap();
        assert!(r.separated);

        let r = check_separation_interior(bp(0.0, 1.0), bp(f64::NEG_INFINITY, 3.0), 1, &cfg()).unwrap();
        assert!(r.values.0 < 1.0 && r.values.1 == 1.0, "{r:?}");

        let r = check_separation_interior(bp(0.0, 1.0), bp(f64::INFINITY, 3.0), 2, &cfg()).unwrap();
        assert!(r.separated, "{r:?}");
        assert!(check_separation_interior(bp(0.0, 0.0), bp(1.0, 0.0), 1, &cfg()).is_err());
    }

    #[test]
    fn generators_are_seeded_and_valid() {
        assert_eq!(random_boundary_pairs(20, 7), random_boundary_pairs(20, 7));
        assert_ne!(random_interior_pairs(20, 7), random_interior_pairs(20, 8));
        for (p, q) in random_boundary_pairs(200, 3) {
            assert!(!p.is_interior() && !q.is_interior());
            assert!(p != q && !(on_top(&p) && on_top(&q)));
        }
        for (p, q) in random_interior_pairs(200, 3) {
            assert!(p.is_interior() && q.is_interior() && p != q);
        }
        let mixed = random_mixed_pairs(200, 3);
        assert!(mixed.iter().all(|(p, q)| p.is_interior() && !q.is_interior()));
        assert!(random_interior_pairs(200, 3).iter().any(|(p, q)| p.t1 == q.t1));
    }

    #[test]
    fn random_pairs_separate() {
        for (p, q) in random_boundary_pairs(40, 11) {
            let r = check_separation_boundary(p, q, 1, &cfg()).unwrap();
            assert!(r.separated, "{r:?}");
        }
        for (p, q) in random_interior_pairs(20, 11).into_iter().chain(random_mixed_pairs(20, 11)) {
            let r = check_separation_interior(p, q, 1, &cfg()).unwrap();
            assert!(r.separated, "{r:?}");
        }
    }
}
