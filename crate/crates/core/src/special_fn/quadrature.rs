use super::gauss::{cached_rule, QuadratureRule, RuleKind};

/// Value and absolute error estimate of a numerical integral.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

impl std::ops::AddAssign for Estimate {
    fn add_assign(&mut self, rhs: Estimate) {
        *self = *self + rhs;
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, c: f64) -> Estimate {
        Estimate { value: self.value * c, error: self.error * c.abs() }
    }
}

const MAX_DEPTH: u32 = 50;

fn panel(rule: &QuadratureRule, f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    half * rule.apply(|x| f(mid + half * x))
}

/// Integrates `f` over `[lo, hi]` by panel bisection, comparing an
/// `order`-point against an `order / 2`-point Gauss–Legendre rule on every
/// panel. The absolute tolerance is shared among panels in proportion to
/// their width. Panels are visited left to right, so the result is
/// independent of scheduling.
pub(crate) fn integrate_adaptive(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, abs_tol: f64, order: usize) -> Estimate {
    if !(hi > lo) {
        return Estimate::default();
    }
    let order = order.clamp(2, super::MAX_RULE_ORDER);
    let fine = cached_rule(RuleKind::GaussLegendreSegment, order);
    let coarse = cached_rule(RuleKind::GaussLegendreSegment, order / 2);
    let total_width = hi - lo;
    let mut out = Estimate::default();
    let mut stack = vec![(lo, hi, 0u32)];
    while let Some((a, b, depth)) = stack.pop() {
        let v_fine = panel(&fine, f, a, b);
        let v_coarse = panel(&coarse, f, a, b);
        let err = (v_fine - v_coarse).abs();
        let budget = abs_tol * (b - a) / total_width;
        let m = 0.5 * (a + b);
        if err <= budget || depth >= MAX_DEPTH || !(a < m && m < b) {
            out += Estimate { value: v_fine, error: err };
        } else {
            // Right half first so the left half is popped next.
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_integrand() {
        let e = integrate_adaptive(&|x: f64| x.exp(), 0.0, 1.0, 1e-14, 64);
        assert!((e.value - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn kink_is_resolved() {
        let e = integrate_adaptive(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 64);
        assert!((e.value - 0.29).abs() < 1e-12, "{}", e.value);
    }

    #[test]
    fn jump_is_resolved_to_tolerance() {
        let e = integrate_adaptive(&|x: f64| if x < 1.0 / 3.0 { 1.0 } else { 0.0 }, 0.0, 1.0, 1e-10, 64);
        assert!((e.value - 1.0 / 3.0).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate_adaptive(&|_| 1.0, 2.0, 2.0, 1e-9, 64).value, 0.0);
    }
}
