//! Gauss rules by the Golub–Welsch construction.
//!
//! Nodes are eigenvalues of the Jacobi matrix of the weight's orthonormal
//! polynomials (implicit QL), polished by Newton steps on the three-term
//! recurrence. Weights come from the Christoffel formula
//! `w_i = mu_0 / sum_k q_k(x_i)^2`, accumulated in log space, which keeps
//! them positive and avoids the overflow of `q_k` at large Laguerre nodes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MAX_RULE_ORDER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Weight `e^{-y^2}` on the real line.
    GaussHermite,
    /// Lebesgue measure on a finite segment.
    GaussLegendreSegment,
    /// Weight `e^{-y}` on the half-line.
    GaussLaguerre,
}

/// An immutable Gauss rule.
///
/// `weights[i] == log_weights[i].exp()`. For large Hermite and Laguerre
/// orders the outermost weights are below the `f64` range and are stored
/// as `0.0`; `log_weights` stays finite for every node.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub log_weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    /// `sum_i w_i f(x_i)`, accumulated in node order.
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).fold(0.0, |acc, (&x, &w)| if w == 0.0 { acc } else { acc + w * f(x) })
    }
}

/// Builds the `order`-point rule of the requested kind. `segment` is
/// required for `GaussLegendreSegment` and rejected otherwise.
pub fn gauss_rule(kind: RuleKind, order: usize, segment: Option<(f64, f64)>) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_RULE_ORDER {
        return Err(Error::domain(format!("rule order must lie in [1, {MAX_RULE_ORDER}], got {order}")));
    }
    match (kind, segment) {
        (RuleKind::GaussLegendreSegment, None) => {
            return Err(Error::domain("Gauss-Legendre rule needs a segment"));
        }
        (RuleKind::GaussLegendreSegment, Some((lo, hi))) if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
            return Err(Error::domain(format!("invalid segment ({lo}, {hi})")));
        }
        (RuleKind::GaussHermite | RuleKind::GaussLaguerre, Some(_)) => {
            return Err(Error::domain("only Gauss-Legendre rules take a segment"));
        }
        _ => {}
    }
    let reference = cached_rule(kind, order);
    Ok(match segment {
        Some((lo, hi)) => {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            QuadratureRule {
                kind,
                nodes: reference.nodes.iter().map(|x| mid + half * x).collect(),
                weights: reference.weights.iter().map(|w| w * half).collect(),
                log_weights: reference.log_weights.iter().map(|lw| lw + half.ln()).collect(),
                order,
            }
        }
        None => (*reference).clone(),
    })
}

/// Reference rule (Legendre on `[-1, 1]`), built once per `(kind, order)`.
pub(crate) fn cached_rule(kind: RuleKind, order: usize) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<(RuleKind, usize), Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&(kind, order)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build_reference(kind, order));
    cache.lock().unwrap().entry((kind, order)).or_insert(rule).clone()
}

/// Recurrence coefficients `(a_k, b_k, mu_0)` of the orthonormal polynomials:
/// `b_{k+1} q_{k+1} = (x - a_k) q_k - b_k q_{k-1}`.
fn jacobi(kind: RuleKind, n: usize) -> (Vec<f64>, Vec<f64>, f64) {
    // b[k] for k = 0..=n; b[0] is unused, b[n] drives the Newton polish.
    match kind {
        RuleKind::GaussHermite => {
            (vec![0.0; n], (0..=n).map(|k| (k as f64 / 2.0).sqrt()).collect(), std::f64::consts::PI.sqrt())
        }
        RuleKind::GaussLaguerre => {
            ((0..n).map(|k| 2.0 * k as f64 + 1.0).collect(), (0..=n).map(|k| k as f64).collect(), 1.0)
        }
        RuleKind::GaussLegendreSegment => (
            vec![0.0; n],
            (0..=n)
                .map(|k| {
                    let k = k as f64;
                    k / (4.0 * k * k - 1.0).abs().sqrt()
                })
                .collect(),
            2.0,
        ),
    }
}

fn build_reference(kind: RuleKind, n: usize) -> QuadratureRule {
    let (a, b, mu0) = jacobi(kind, n);
    let mut diag = a.clone();
    let mut off: Vec<f64> = (0..n).map(|k| if k + 1 < n { b[k + 1] } else { 0.0 }).collect();
    tridiagonal_eigenvalues(&mut diag, &mut off);
    diag.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut nodes: Vec<f64> = diag.iter().map(|&x| newton_polish(x, &a, &b)).collect();
    if matches!(kind, RuleKind::GaussHermite | RuleKind::GaussLegendreSegment) {
        for i in 0..n / 2 {
            let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -m;
            nodes[n - 1 - i] = m;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
    }
    let mut log_weights: Vec<f64> = nodes.iter().map(|&x| mu0.ln() - log_christoffel_sum(x, &a, &b)).collect();
    if matches!(kind, RuleKind::GaussHermite | RuleKind::GaussLegendreSegment) {
        for i in 0..n / 2 {
            let m = 0.5 * (log_weights[i] + log_weights[n - 1 - i]);
            log_weights[i] = m;
            log_weights[n - 1 - i] = m;
        }
    }
    let weights = log_weights.iter().map(|lw| lw.exp()).collect();
    QuadratureRule { kind, nodes, weights, log_weights, order: n }
}

/// `q_n(x)` and `q_n'(x)` up to a common positive factor.
fn recurrence_with_derivative(x: f64, a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len();
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..n {
        let p_next = ((x - a[k]) * p - b[k] * p_prev) / b[k + 1];
        let d_next = (p + (x - a[k]) * d - b[k] * d_prev) / b[k + 1];
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let scale = p.abs().max(d.abs());
        if scale > 1e150 {
            p /= scale;
            p_prev /= scale;
            d /= scale;
            d_prev /= scale;
        }
    }
    (p, d)
}

fn newton_polish(x0: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut x = x0;
    for _ in 0..8 {
        let (p, d) = recurrence_with_derivative(x, a, b);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let dx = p / d;
        if !dx.is_finite() || dx.abs() > 1e-6 * (1.0 + x0.abs()) {
            return x0;
        }
        x -= dx;
        if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
    }
    x
}

/// `ln sum_{k<n} q_k(x)^2` with `q_0 = 1`.
fn log_christoffel_sum(x: f64, a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut log_scale = 0.0;
    let (mut q_prev, mut q) = (0.0, 1.0);
    let mut sum = 1.0;
    for k in 0..n - 1 {
        let q_next = ((x - a[k]) * q - b[k] * q_prev) / b[k + 1];
        q_prev = q;
        q = q_next;
        sum += q * q;
        if q.abs() > 1e100 {
            q /= 1e100;
            q_prev /= 1e100;
            sum /= 1e200;
            log_scale += 2.0 * 230.258_509_299_404_57;
        }
    }
    sum.ln() + log_scale
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method.
/// `off[i]` couples rows `i` and `i + 1`; on return `diag` holds the
/// (unsorted) eigenvalues.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) {
    let n = diag.len();
    if n < 2 {
        return;
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 100 {
                break;
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let bb = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - bb;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_hermite() {
        let r = gauss_rule(RuleKind::GaussHermite, 2, None).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        let half_sqrt_pi = 0.5 * std::f64::consts::PI.sqrt();
        for w in &r.weights {
            assert!((w - half_sqrt_pi).abs() < 1e-15);
        }
    }

    #[test]
    fn one_point_legendre_is_midpoint() {
        let r = gauss_rule(RuleKind::GaussLegendreSegment, 1, Some((0.0, 2.0))).unwrap();
        assert_eq!(r.nodes, vec![1.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_laguerre() {
        let r = gauss_rule(RuleKind::GaussLaguerre, 2, None).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nodes[0] - (2.0 - s2)).abs() < 1e-14);
        assert!((r.nodes[1] - (2.0 + s2)).abs() < 1e-14);
        assert!((r.weights[0] - (2.0 + s2) / 4.0).abs() < 1e-14);
        assert!((r.weights[1] - (2.0 - s2) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn argument_validation() {
        assert!(gauss_rule(RuleKind::GaussHermite, 0, None).is_err());
        assert!(gauss_rule(RuleKind::GaussHermite, 513, None).is_err());
        assert!(gauss_rule(RuleKind::GaussLegendreSegment, 4, None).is_err());
        assert!(gauss_rule(RuleKind::GaussLaguerre, 4, Some((0.0, 1.0))).is_err());
        assert!(gauss_rule(RuleKind::GaussLegendreSegment, 4, Some((1.0, 1.0))).is_err());
    }

    #[test]
    fn structural_invariants() {
        for kind in [RuleKind::GaussHermite, RuleKind::GaussLaguerre, RuleKind::GaussLegendreSegment] {
            for order in [1, 2, 3, 17, 64, 150, 200] {
                let seg = (kind == RuleKind::GaussLegendreSegment).then_some((-1.0, 1.0));
                let r = gauss_rule(kind, order, seg).unwrap();
                assert_eq!(r.nodes.len(), order);
                assert_eq!(r.weights.len(), order);
                assert!(r.nodes.windows(2).all(|w| w[0] < w[1]), "{kind:?} {order}");
                // Outer Laguerre weights drop below the f64 range near order 190.
                assert!(r.log_weights.iter().all(|lw| lw.is_finite()), "{kind:?} {order}");
                assert!(r.weights.iter().zip(&r.log_weights).all(|(&w, &lw)| w > 0.0 || lw < -700.0));
            }
        }
    }

    #[test]
    fn large_orders_keep_finite_log_weights() {
        for kind in [RuleKind::GaussHermite, RuleKind::GaussLaguerre] {
            let r = gauss_rule(kind, 512, None).unwrap();
            assert!(r.log_weights.iter().all(|lw| lw.is_finite()));
            assert!(r.weights.iter().all(|&w| w >= 0.0));
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            let mass: f64 = r.weights.iter().sum();
            let expected = if kind == RuleKind::GaussHermite { std::f64::consts::PI.sqrt() } else { 1.0 };
            assert!((mass - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn hermite_moments_exact_to_degree_2n_minus_1() {
        // int y^{2k} e^{-y^2} dy = Gamma(k + 1/2)
        for order in [5usize, 20, 60] {
            let r = gauss_rule(RuleKind::GaussHermite, order, None).unwrap();
            for k in 0..order {
                let exact = libm::tgamma(k as f64 + 0.5);
                let got = r.apply(|y| y.powi(2 * k as i32));
                assert!(((got - exact) / exact).abs() < 1e-12, "order {order} k {k}: {got} vs {exact}");
                let odd = r.apply(|y| y.powi(2 * k as i32 + 1));
                assert!(odd.abs() < 1e-12 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn laguerre_moments() {
        // int y^k e^{-y} dy = k!
        let r = gauss_rule(RuleKind::GaussLaguerre, 30, None).unwrap();
        for k in 0..59 {
            let exact = libm::tgamma(k as f64 + 1.0);
            let got = r.apply(|y| y.powi(k));
            assert!(((got - exact) / exact).abs() < 1e-11, "k {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn legendre_segment_polynomials() {
        let r = gauss_rule(RuleKind::GaussLegendreSegment, 64, Some((-0.5, 3.0))).unwrap();
        for k in 0..127 {
            let exact = (3f64.powi(k + 1) - (-0.5f64).powi(k + 1)) / (k + 1) as f64;
            let got = r.apply(|y| y.powi(k));
            assert!(((got - exact) / exact).abs() < 1e-12, "k {k}");
        }
    }
}
