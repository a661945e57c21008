//! Numerical checks of the limit, separation and continuity statements.
//!
//! Every check is a pure function of its inputs and the [`SpectralConfig`],
//! so reports are reproducible bit for bit. Suites in [`suite`] bundle the
//! checks and turn them into [`Record`] lines.

mod continuity;
mod separation;
pub mod suite;

use std::fmt;

pub use continuity::{
    check_chain_continuity, check_gamma_ab_continuity, compact_to_point, point_to_compact, ContinuityOptions,
    ContinuityReport, Transported, Window, DISCONTINUITY_THRESHOLD,
};
pub use separation::{
    check_separation_boundary, check_separation_interior, random_boundary_pairs, random_interior_pairs,
    random_mixed_pairs, SeparationReport, BOUNDARY_GAP, INTERIOR_GAP,
};
pub use suite::{run_suite, Suite, SuiteOptions};

use crate::error::{Error, LimitId, Result};
use crate::spectral::{gamma_a, gamma_b, phi_a, psi_alpha, varphi, BoundaryPoint, SpectralConfig};
use crate::symbols::{ExtReal, RadialSymbol, VerticalSymbol};

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub id: String,
    pub params: String,
    pub target: f64,
    pub value: f64,
    pub gap: f64,
    pub pass: bool,
}

fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "+inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Tab separated: `id params target value gap PASS|FAIL`.
impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.params,
            fmt_float(self.target),
            fmt_float(self.value),
            fmt_float(self.gap),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Approach of a sequence of values to a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCheckReport {
    pub lemma_id: LimitId,
    /// Which limit, e.g. `x2->0+`.
    pub label: String,
    /// Evaluation points `(x1, x2)` or `(t1, t2)`, in approach order.
    pub approach_sequence: Vec<(f64, f64)>,
    pub values: Vec<f64>,
    pub target: f64,
    pub tol: f64,
    pub converged: bool,
    pub final_gap: f64,
}

impl LimitCheckReport {
    pub fn gaps(&self) -> Vec<f64> {
        self.values.iter().map(|v| (v - self.target).abs()).collect()
    }

    pub fn to_record(&self, params: &str) -> Record {
        Record {
            id: self.lemma_id.id().to_string(),
            params: format!("{params} {}", self.label),
            target: self.target,
            value: self.values.last().copied().unwrap_or(f64::NAN),
            gap: self.final_gap,
            pass: self.converged,
        }
    }
}

/// Gaps below this are quadrature noise and count as settled.
fn noise_floor(cfg: &SpectralConfig) -> f64 {
    10.0 * cfg.value_tol
}

fn limit_report(
    lemma_id: LimitId,
    label: String,
    approach_sequence: Vec<(f64, f64)>,
    gaps_and_values: Vec<(f64, f64)>,
    target: f64,
    tol: f64,
    cfg: &SpectralConfig,
) -> LimitCheckReport {
    let values: Vec<f64> = gaps_and_values.iter().map(|&(_, v)| v).collect();
    let gaps: Vec<f64> = gaps_and_values.iter().map(|&(g, _)| g).collect();
    let final_gap = gaps.last().copied().unwrap_or(f64::NAN);
    let tail_settles = match gaps.as_slice() {
        [.., prev, last] => last <= prev || *last <= noise_floor(cfg),
        _ => true,
    };
    LimitCheckReport {
        lemma_id,
        label,
        approach_sequence,
        values,
        target,
        tol,
        converged: final_gap <= tol && tail_settles,
        final_gap,
    }
}

fn plain(values: Vec<f64>, target: f64) -> Vec<(f64, f64)> {
    values.into_iter().map(|v| ((v - target).abs(), v)).collect()
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tol must be positive, got {tol}")));
    }
    Ok(())
}

/// `gamma^b` along `x2 = 10^-n` (target `b_inf`) and `x2 = 10^n` (target
/// `b0`), `n = 1..8`.
pub fn check_gamma_b_limits(
    b: &RadialSymbol,
    k: usize,
    tol: f64,
    cfg: &SpectralConfig,
) -> Result<[LimitCheckReport; 2]> {
    check_tol(tol)?;
    let run = |sign: i32, target: f64, label: &str| -> Result<LimitCheckReport> {
        let xs: Vec<f64> = (1..=8).map(|n| 10f64.powi(sign * n)).collect();
        let values = xs.iter().map(|&x2| gamma_b(b, k, x2, cfg)).collect::<Result<Vec<_>>>()?;
        let seq = xs.iter().map(|&x2| (0.0, x2)).collect();
        Ok(limit_report(LimitId::L4_1, label.into(), seq, plain(values, target), target, tol, cfg))
    };
    Ok([run(-1, b.b_inf(), "x2->0+")?, run(1, b.b0(), "x2->+inf")?])
}

/// `gamma^a` along `(x0 + d, d)`, `d = 10^-n`, `n = 1..7`, against
/// `a(-inf) (1 - varphi(x0)) + a(+inf) varphi(x0)`.
#[allow(non_snake_case)]
pub fn check_limit_R(
    a: &VerticalSymbol,
    j: usize,
    x0: f64,
    tol: f64,
    cfg: &SpectralConfig,
) -> Result<LimitCheckReport> {
    check_tol(tol)?;
    if !x0.is_finite() {
        return Err(Error::domain(format!("x0 must be finite, got {x0}")));
    }
    let f = varphi(j, ExtReal::Finite(x0));
    let target = a.limit_neg_inf() * (1.0 - f) + a.limit_pos_inf() * f;
    let seq: Vec<(f64, f64)> = (1..=7).map(|n| 10f64.powi(-n)).map(|d| (x0 + d, d)).collect();
    let values = seq.iter().map(|&(x1, x2)| gamma_a(a, j, x1, x2, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(limit_report(LimitId::L5_1, format!("x->({x0}, 0+)"), seq, plain(values, target), target, tol, cfg))
}

/// Which boundary statement of `phi^a` to test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiEdge {
    /// `(10^n, 10^-n) -> a(-inf)` and `(-10^n, 10^-n) -> a(+inf)`.
    Corners,
    /// `(+-10^n, t0) -> a(-+1 / (2 sqrt(t0)))`.
    Vertical { t0: f64 },
    /// `t2 = 10^n`, uniformly over `t1` in `{-1e6, -1, 0, 1, 1e6}`, to `a(0)`.
    Top,
}

const TOP_SWEEP: [f64; 5] = [-1e6, -1.0, 0.0, 1.0, 1e6];

/// Limits of `phi^a` at the boundary, `n = 1..8`. Returns one report per
/// approach direction. Fails with `BoundaryUndefined` when the symbol is
/// discontinuous where the statement needs continuity.
pub fn check_phi_boundary(
    a: &VerticalSymbol,
    j: usize,
    edge: PhiEdge,
    tol: f64,
    cfg: &SpectralConfig,
) -> Result<Vec<LimitCheckReport>> {
    check_tol(tol)?;
    let ns = 1..=8;
    let eval = |t1: f64, t2: f64| phi_a(a, j, BoundaryPoint::from_f64(t1, t2)?, cfg);
    let sequence = |lemma: LimitId, label: String, seq: Vec<(f64, f64)>, target: f64| -> Result<LimitCheckReport> {
        let values = seq.iter().map(|&(t1, t2)| eval(t1, t2)).collect::<Result<Vec<_>>>()?;
        Ok(limit_report(lemma, label, seq, plain(values, target), target, tol, cfg))
    };
    match edge {
        PhiEdge::Corners => {
            let right = ns.clone().map(|n| (10f64.powi(n), 10f64.powi(-n))).collect();
            let left = ns.map(|n| (-(10f64.powi(n)), 10f64.powi(-n))).collect();
            Ok(vec![
                sequence(LimitId::L5_2, "t->(+inf, 0)".into(), right, a.limit_neg_inf())?,
                sequence(LimitId::L5_2, "t->(-inf, 0)".into(), left, a.limit_pos_inf())?,
            ])
        }
        PhiEdge::Vertical { t0 } => {
            if !(t0 > 0.0 && t0.is_finite()) {
                return Err(Error::domain(format!("t0 must be positive and finite, got {t0}")));
            }
            let s = 0.5 / t0.sqrt();
            let mut out = Vec::with_capacity(2);
            for (sign, at, point) in [(1.0, -s, "+inf"), (-1.0, s, "-inf")] {
                if !a.is_continuous_at(at) {
                    return Err(Error::BoundaryUndefined {
                        lemma: LimitId::L5_3,
                        point: format!("({point}, {t0})"),
                        at,
                    });
                }
                let seq = ns.clone().map(|n| (sign * 10f64.powi(n), t0)).collect();
                out.push(sequence(LimitId::L5_3, format!("t->({point}, {t0})"), seq, a.eval_f64(at))?);
            }
            Ok(out)
        }
        PhiEdge::Top => {
            if !a.is_continuous_at(0.0) {
                return Err(Error::BoundaryUndefined { lemma: LimitId::L5_4, point: "(t1, +inf)".into(), at: 0.0 });
            }
            let target = a.eval_f64(0.0);
            let mut seq = Vec::new();
            let mut worst = Vec::new();
            for n in ns {
                let t2 = 10f64.powi(n);
                let mut best = (f64::NEG_INFINITY, f64::NAN, f64::NAN);
                for t1 in TOP_SWEEP {
                    let v = eval(t1, t2)?;
                    let gap = (v - target).abs();
                    if gap > best.0 {
                        best = (gap, v, t1);
                    }
                }
                seq.push((best.2, t2));
                worst.push((best.0, best.1));
            }
            Ok(vec![limit_report(LimitId::L5_4, "t2->+inf uniform in t1".into(), seq, worst, target, tol, cfg)])
        }
    }
}

/// `psi^alpha(t1, t2)` along `alpha = 10^-n`, `n = 1..8`, to 0.
pub fn check_psi_vanish(j: usize, t1: f64, t2: f64, tol: f64, cfg: &SpectralConfig) -> Result<LimitCheckReport> {
    check_tol(tol)?;
    let alphas: Vec<f64> = (1..=8).map(|n| 10f64.powi(-n)).collect();
    let values = alphas.iter().map(|&al| psi_alpha(al, j, t1, t2, cfg)).collect::<Result<Vec<_>>>()?;
    let seq = alphas.iter().map(|&al| (al, 0.0)).collect();
    Ok(limit_report(LimitId::PsiVanish, format!("alpha->0+ at ({t1}, {t2})"), seq, plain(values, 0.0), 0.0, tol, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{make_a_alpha, named_symbols, radial_catalog, radial_chi01};

    fn cfg() -> SpectralConfig {
        SpectralConfig::default()
    }

    #[test]
    fn gamma_b_limits_chi01() {
        let [zero, inf] = check_gamma_b_limits(&radial_chi01(), 1, 1e-6, &cfg()).unwrap();
        assert_eq!(zero.target, 0.0);
        assert_eq!(inf.target, 1.0);
        assert!(zero.converged && inf.converged, "{zero:?} {inf:?}");
        assert!(zero.final_gap <= 1e-6 && inf.final_gap <= 1e-6);
        assert_eq!(zero.approach_sequence.len(), 8);
    }

    #[test]
    fn gamma_b_limits_catalog_and_constants() {
        for b in radial_catalog() {
            for r in check_gamma_b_limits(&b, 1, 1e-4, &cfg()).unwrap() {
                assert!(r.converged, "{} {:?}", b.name(), r);
            }
        }
        let half = RadialSymbol::constant(0.5);
        for r in check_gamma_b_limits(&half, 2, 1e-12, &cfg()).unwrap() {
            assert_eq!(r.target, 0.5);
            assert!(r.final_gap <= 1e-12);
        }
        assert!(check_gamma_b_limits(&half, 1, 0.0, &cfg()).is_err());
    }

    #[test]
    fn limit_r_examples() {
        let cat = named_symbols();
        let r = check_limit_R(&cat.chi_plus, 1, 0.0, 1e-3, &cfg()).unwrap();
        assert!((r.target - 0.5).abs() < 1e-15);
        assert!(r.converged, "{r:?}");
        let r = check_limit_R(&cat.a1, 1, 0.0, 1e-3, &cfg()).unwrap();
        assert!(r.target.abs() < 1e-15);
        assert!(r.converged, "{r:?}");
        let r = check_limit_R(&VerticalSymbol::constant(0.7), 3, 2.0, 1e-9, &cfg()).unwrap();
        assert!((r.target - 0.7).abs() < 1e-15 && r.converged);
    }

    #[test]
    fn limit_r_grid() {
        let cat = named_symbols();
        let ramp = make_a_alpha(1.0).unwrap();
        for a in [&cat.chi_plus, &cat.a1, &ramp] {
            for j in 1..=3 {
                for x0 in [-1.0, 0.0, 2.0] {
                    let r = check_limit_R(a, j, x0, 1e-3, &cfg()).unwrap();
                    assert!(r.converged, "{} j={j} x0={x0} {:?}", a.name(), r.gaps());
                }
            }
        }
    }

    #[test]
    fn phi_boundary_examples() {
        let cat = named_symbols();
        let rs = check_phi_boundary(&cat.a1, 1, PhiEdge::Vertical { t0: 2.0 }, 1e-5, &cfg()).unwrap();
        assert!((rs[0].target + 1.0 / 3.0).abs() < 1e-15);
        assert!((rs[1].target - 1.0 / 3.0).abs() < 1e-15);
        for r in &rs {
            assert!(r.converged, "{r:?}");
            assert!(r.gaps()[5] <= 1e-5);
        }
        let top = check_phi_boundary(&cat.a2, 1, PhiEdge::Top, 1e-5, &cfg()).unwrap();
        assert_eq!(top[0].target, 1.0);
        assert!(top[0].converged, "{:?}", top[0].gaps());
        for r in check_phi_boundary(&cat.a1, 2, PhiEdge::Corners, 1e-6, &cfg()).unwrap() {
            assert!(r.converged, "{r:?}");
        }
        let c = VerticalSymbol::constant(-2.0);
        for edge in [PhiEdge::Corners, PhiEdge::Vertical { t0: 0.5 }, PhiEdge::Top] {
            for r in check_phi_boundary(&c, 1, edge, 1e-12, &cfg()).unwrap() {
                assert_eq!(r.target, -2.0);
                assert!(r.final_gap <= 1e-12);
            }
        }
    }

    #[test]
    fn phi_boundary_preconditions() {
        let cat = named_symbols();
        let err = check_phi_boundary(&cat.chi_plus, 1, PhiEdge::Top, 1e-5, &cfg()).unwrap_err();
        assert!(matches!(err, Error::BoundaryUndefined { lemma: LimitId::L5_4, at, .. } if at == 0.0));
        let chi = crate::symbols::make_chi_beta(1.0).unwrap();
        let err = check_phi_boundary(&chi, 1, PhiEdge::Vertical { t0: 1.0 }, 1e-5, &cfg()).unwrap_err();
        assert!(matches!(err, Error::BoundaryUndefined { lemma: LimitId::L5_3, at, .. } if at == 0.5));
    }

    #[test]
    fn psi_vanishes() {
        let r = check_psi_vanish(1, 0.0, 1.0, 1e-3, &cfg()).unwrap();
        assert!(r.converged, "{r:?}");
    }

    #[test]
    fn tail_rule() {
        let c = cfg();
        let r = limit_report(LimitId::L4_1, "x".into(), vec![], plain(vec![0.5, 0.1, 0.2], 0.0), 0.0, 1.0, &c);
        assert!(!r.converged);
        let r = limit_report(LimitId::L4_1, "x".into(), vec![], plain(vec![0.5, 1e-12, 2e-12], 0.0), 0.0, 1e-6, &c);
        assert!(r.converged);
    }

    #[test]
    fn record_format() {
        let r = Record { id: "L4_1".into(), params: "b=chi01".into(), target: 1.0, value: 0.5, gap: 0.5, pass: false };
        assert_eq!(
            r.to_string(),
            "L4_1\tb=chi01\t1.0000000000000000e0\t5.0000000000000000e-1\t5.0000000000000000e-1\tFAIL"
        );
        assert_eq!(fmt_float(f64::NEG_INFINITY), "-inf");
    }
}
