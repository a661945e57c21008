//! Nilpotent symbols `c = a(Im z1) * b(Im z2 - |z1|^2)`.
//!
//! A [`VerticalSymbol`] is piecewise continuous on the extended line with
//! finitely many breakpoints and limits at both infinities. A
//! [`RadialSymbol`] lives on the open half-line with limits at `0+` and
//! `+inf`. Both are real-valued; complex symbols split into real and
//! imaginary parts, and every spectral map is linear.
//!
//! At a breakpoint, evaluation returns the right limit.

mod expr;
mod file;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use expr::Expr;
pub use file::{load_symbol_file, parse_symbol_file, SymbolSpec};

use crate::error::{Error, Result};

/// A point of `[-inf, +inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Maps `+-inf` to the tags; rejects NaN.
    pub fn new(x: f64) -> Result<ExtReal> {
        if x.is_nan() {
            Err(Error::domain("NaN is not an extended real"))
        } else if x == f64::INFINITY {
            Ok(ExtReal::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtReal::NegInf)
        } else {
            Ok(ExtReal::Finite(x))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_f64().total_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtReal> {
        match s.trim() {
            "-inf" | "-infinity" => Ok(ExtReal::NegInf),
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtReal::PosInf),
            t => t
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("not an extended real: '{t}'")))
                .and_then(ExtReal::new),
        }
    }
}

/// The restriction of a symbol to one open interval between breakpoints.
/// It must extend continuously to the closed interval.
#[derive(Clone)]
pub enum Branch {
    Constant(f64),
    Expr(Arc<Expr>),
    Func(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Branch {
    pub fn func(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Branch {
        Branch::Func(Arc::new(f))
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Branch::Constant(v) => *v,
            Branch::Expr(e) => e.eval(s),
            Branch::Func(f) => f(s),
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Branch::Constant(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Constant(v) => write!(f, "Constant({v})"),
            Branch::Expr(e) => write!(f, "Expr({e})"),
            Branch::Func(_) => f.write_str("Func(..)"),
        }
    }
}

#[derive(Debug, Clone)]
struct Piecewise {
    breakpoints: Vec<f64>,
    branches: Vec<Branch>,
}

impl Piecewise {
    fn new(breakpoints: Vec<f64>, branches: Vec<Branch>) -> Result<Piecewise> {
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::domain("breakpoints must be finite"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("breakpoints must be strictly increasing"));
        }
        if branches.len() != breakpoints.len() + 1 {
            return Err(Error::domain(format!(
                "{} breakpoints need {} branches, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                branches.len()
            )));
        }
        Ok(Piecewise { breakpoints, branches })
    }

    /// Index of the branch owning `s`; breakpoints belong to the right.
    fn index(&self, s: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= s)
    }

    fn eval(&self, s: f64) -> f64 {
        self.branches[self.index(s)].eval(s)
    }

    /// `(lo, hi)` of branch `i`, with infinite ends.
    fn interval(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { f64::NEG_INFINITY } else { self.breakpoints[i - 1] };
        let hi = self.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }
}

/// Sample points strictly inside `(lo, hi)`, spread evenly in `atan` scale.
fn interior_samples(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (ulo, uhi) = (lo.atan(), hi.atan());
    (1..=n).map(move |i| (ulo + (uhi - ulo) * i as f64 / (n + 1) as f64).tan())
}

const ENDPOINT_PROBE: f64 = 1e-9;
const FAR_PROBE: f64 = 1e9;

fn check_branches(pw: &Piecewise, bound: f64, limits: (f64, f64), domain_lo: f64, what: &str) -> Result<()> {
    let tol = 1e-6 * (1.0 + bound);
    for (i, branch) in pw.branches.iter().enumerate() {
        let (lo, hi) = pw.interval(i);
        let lo = lo.max(domain_lo);
        for s in interior_samples(lo, hi, 64) {
            let v = branch.eval(s);
            if !v.is_finite() || v.abs() > bound * (1.0 + 1e-12) {
                return Err(Error::domain(format!("{what}: |value| = {v} at s = {s} exceeds the bound {bound}")));
            }
        }
        for (end, inward, limit) in [(lo, 1.0, limits.0), (hi, -1.0, limits.1)] {
            if end.is_finite() {
                if end == domain_lo {
                    continue;
                }
                let v0 = branch.eval(end);
                let v1 = branch.eval(end + inward * ENDPOINT_PROBE * (1.0 + end.abs()));
                if !v0.is_finite() || (v1 - v0).abs() > tol {
                    return Err(Error::domain(format!("{what}: branch {i} does not extend continuously to s = {end}")));
                }
            } else {
                let v = branch.eval(-inward * FAR_PROBE);
                if (v - limit).abs() > tol {
                    return Err(Error::domain(format!(
                        "{what}: branch {i} at s = {} is {v}, far from the declared limit {limit}",
                        -inward * FAR_PROBE
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A piecewise-continuous function on the extended line.
#[derive(Debug, Clone)]
pub struct VerticalSymbol {
    name: String,
    pw: Piecewise,
    left_limits: Vec<f64>,
    right_limits: Vec<f64>,
    limit_neg_inf: f64,
    limit_pos_inf: f64,
    sup_norm_bound: f64,
}

impl VerticalSymbol {
    /// Builds and validates a symbol. One-sided limits at breakpoints are
    /// read off the neighbouring branches.
    pub fn new(
        name: impl Into<String>,
        breakpoints: Vec<f64>,
        branches: Vec<Branch>,
        limit_neg_inf: f64,
        limit_pos_inf: f64,
        sup_norm_bound: f64,
    ) -> Result<VerticalSymbol> {
        let name = name.into();
        let pw = Piecewise::new(breakpoints, branches)?;
        if !(sup_norm_bound > 0.0 && sup_norm_bound.is_finite()) {
            return Err(Error::domain(format!("{name}: sup-norm bound must be positive and finite")));
        }
        if !(limit_neg_inf.is_finite() && limit_pos_inf.is_finite()) {
            return Err(Error::domain(format!("{name}: limits at infinity must be finite")));
        }
        if limit_neg_inf.abs().max(limit_pos_inf.abs()) > sup_norm_bound * (1.0 + 1e-12) {
            return Err(Error::domain(format!("{name}: limits exceed the sup-norm bound")));
        }
        check_branches(&pw, sup_norm_bound, (limit_neg_inf, limit_pos_inf), f64::NEG_INFINITY, &name)?;
        let left_limits = pw.breakpoints.iter().enumerate().map(|(i, &b)| pw.branches[i].eval(b)).collect();
        let right_limits = pw.breakpoints.iter().enumerate().map(|(i, &b)| pw.branches[i + 1].eval(b)).collect();
        Ok(VerticalSymbol { name, pw, left_limits, right_limits, limit_neg_inf, limit_pos_inf, sup_norm_bound })
    }

    /// The symbol identically equal to `v`.
    pub fn constant(v: f64) -> VerticalSymbol {
        let bound = if v == 0.0 { 1.0 } else { v.abs() };
        VerticalSymbol::new(format!("constant:{v}"), vec![], vec![Branch::Constant(v)], v, v, bound)
            .expect("finite constant")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.pw.breakpoints
    }

    pub fn branches(&self) -> &[Branch] {
        &self.pw.branches
    }

    pub fn left_limits(&self) -> &[f64] {
        &self.left_limits
    }

    pub fn right_limits(&self) -> &[f64] {
        &self.right_limits
    }

    pub fn limit_neg_inf(&self) -> f64 {
        self.limit_neg_inf
    }

    pub fn limit_pos_inf(&self) -> f64 {
        self.limit_pos_inf
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.sup_norm_bound
    }

    /// Index of the branch owning `s` (right-continuous at breakpoints).
    pub fn branch_index(&self, s: f64) -> usize {
        self.pw.index(s)
    }

    /// `(lo, hi)` of branch `i`.
    pub fn branch_interval(&self, i: usize) -> (f64, f64) {
        self.pw.interval(i)
    }

    pub fn eval(&self, s: ExtReal) -> f64 {
        self.eval_f64(s.to_f64())
    }

    /// Like [`eval`](Self::eval) with `+-inf` allowed as `f64`.
    pub fn eval_f64(&self, s: f64) -> f64 {
        if s == f64::INFINITY {
            self.limit_pos_inf
        } else if s == f64::NEG_INFINITY {
            self.limit_neg_inf
        } else {
            self.pw.eval(s)
        }
    }

    /// Left limit at `s` (differs from `eval` only at breakpoints).
    pub fn eval_left(&self, s: f64) -> f64 {
        match self.pw.breakpoints.binary_search_by(|b| b.total_cmp(&s)) {
            Ok(i) => self.left_limits[i],
            Err(_) => self.eval_f64(s),
        }
    }

    /// False only at breakpoints where the one-sided limits differ.
    pub fn is_continuous_at(&self, s: f64) -> bool {
        match self.pw.breakpoints.binary_search_by(|b| b.total_cmp(&s)) {
            Ok(i) => (self.left_limits[i] - self.right_limits[i]).abs() <= 1e-12 * self.sup_norm_bound,
            Err(_) => true,
        }
    }

    /// True when the symbol has no jump anywhere on the real line.
    pub fn is_continuous(&self) -> bool {
        self.pw.breakpoints.iter().all(|&b| self.is_continuous_at(b))
    }

    /// Breakpoints carrying an actual jump.
    pub fn jumps(&self) -> Vec<f64> {
        self.pw.breakpoints.iter().copied().filter(|&b| !self.is_continuous_at(b)).collect()
    }

    /// `s -> a(s - delta)`.
    pub fn shifted(&self, delta: f64) -> VerticalSymbol {
        let branches = self
            .pw
            .branches
            .iter()
            .map(|b| match b {
                Branch::Constant(v) => Branch::Constant(*v),
                other => {
                    let inner = other.clone();
                    Branch::func(move |s| inner.eval(s - delta))
                }
            })
            .collect();
        VerticalSymbol {
            name: format!("{}(s-{delta})", self.name),
            pw: Piecewise { breakpoints: self.pw.breakpoints.iter().map(|b| b + delta).collect(), branches },
            left_limits: self.left_limits.clone(),
            right_limits: self.right_limits.clone(),
            ..self.clone()
        }
    }

    /// `lambda * a + mu * b`, on the union of the breakpoint sets.
    pub fn linear_combination(lambda: f64, a: &VerticalSymbol, mu: f64, b: &VerticalSymbol) -> VerticalSymbol {
        let mut breakpoints: Vec<f64> = a.breakpoints().iter().chain(b.breakpoints()).copied().collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        let n = breakpoints.len();
        let branches = (0..=n)
            .map(|i| {
                let lo = if i == 0 { f64::NEG_INFINITY } else { breakpoints[i - 1] };
                let hi = breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
                let probe = match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => 0.5 * (lo + hi),
                    (true, false) => lo + 1.0,
                    (false, true) => hi - 1.0,
                    (false, false) => 0.0,
                };
                let ba = a.branches()[a.branch_index(probe)].clone();
                let bb = b.branches()[b.branch_index(probe)].clone();
                match (ba.constant_value(), bb.constant_value()) {
                    (Some(x), Some(y)) => Branch::Constant(lambda * x + mu * y),
                    _ => Branch::func(move |s| lambda * ba.eval(s) + mu * bb.eval(s)),
                }
            })
            .collect::<Vec<_>>();
        let pw = Piecewise { breakpoints, branches };
        let left_limits = pw.breakpoints.iter().enumerate().map(|(i, &s)| pw.branches[i].eval(s)).collect();
        let right_limits = pw.breakpoints.iter().enumerate().map(|(i, &s)| pw.branches[i + 1].eval(s)).collect();
        VerticalSymbol {
            name: format!("{lambda}*{} + {mu}*{}", a.name, b.name),
            pw,
            left_limits,
            right_limits,
            limit_neg_inf: lambda * a.limit_neg_inf + mu * b.limit_neg_inf,
            limit_pos_inf: lambda * a.limit_pos_inf + mu * b.limit_pos_inf,
            sup_norm_bound: (lambda.abs() * a.sup_norm_bound + mu.abs() * b.sup_norm_bound).max(f64::MIN_POSITIVE),
        }
    }
}

/// A bounded function on `(0, +inf)` with limits `b0` at `0+` and `b_inf`
/// at `+inf`. Breakpoints mark jumps of the body, if any.
#[derive(Debug, Clone)]
pub struct RadialSymbol {
    name: String,
    pw: Piecewise,
    b0: f64,
    b_inf: f64,
    sup_norm_bound: f64,
}

impl RadialSymbol {
    /// Builds and validates a radial symbol. Breakpoints must be positive.
    /// The limits are checked at `y = 10^(-k)` and `10^k`, `k = 4..=8`:
    /// the deviations must not grow and must end below `1e-6 (1 + bound)`.
    pub fn new(
        name: impl Into<String>,
        breakpoints: Vec<f64>,
        branches: Vec<Branch>,
        b0: f64,
        b_inf: f64,
        sup_norm_bound: f64,
    ) -> Result<RadialSymbol> {
        let name = name.into();
        if breakpoints.iter().any(|&b| !(b > 0.0)) {
            return Err(Error::domain(format!("{name}: radial breakpoints must be positive")));
        }
        let pw = Piecewise::new(breakpoints, branches)?;
        if !(sup_norm_bound > 0.0 && sup_norm_bound.is_finite()) {
            return Err(Error::domain(format!("{name}: sup-norm bound must be positive and finite")));
        }
        if !(b0.is_finite() && b_inf.is_finite()) || b0.abs().max(b_inf.abs()) > sup_norm_bound * (1.0 + 1e-12) {
            return Err(Error::domain(format!("{name}: limits must be finite and within the bound")));
        }
        check_branches(&pw, sup_norm_bound, (b0, b_inf), 0.0, &name)?;
        let tol = 1e-6 * (1.0 + sup_norm_bound);
        for (target, sign, label) in [(b0, -1.0, "0+"), (b_inf, 1.0, "+inf")] {
            let gaps: Vec<f64> = (4..=8).map(|k| (pw.eval(10f64.powf(sign * k as f64)) - target).abs()).collect();
            let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-15);
            if !monotone || gaps[4] > tol {
                return Err(Error::domain(format!("{name}: body does not approach its limit at {label}")));
            }
        }
        Ok(RadialSymbol { name, pw, b0, b_inf, sup_norm_bound })
    }

    pub fn constant(v: f64) -> RadialSymbol {
        let bound = if v == 0.0 { 1.0 } else { v.abs() };
        RadialSymbol::new(format!("constant:{v}"), vec![], vec![Branch::Constant(v)], v, v, bound)
            .expect("finite constant")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.pw.breakpoints
    }

    pub fn branches(&self) -> &[Branch] {
        &self.pw.branches
    }

    pub fn branch_index(&self, y: f64) -> usize {
        self.pw.index(y)
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn b_inf(&self) -> f64 {
        self.b_inf
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.sup_norm_bound
    }

    /// Body value for `y > 0`; the limits at `y = 0` and `y = +inf`.
    pub fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            self.b0
        } else if y == f64::INFINITY {
            self.b_inf
        } else {
            self.pw.eval(y)
        }
    }

    /// `c * b`.
    pub fn scaled(&self, c: f64) -> RadialSymbol {
        let branches = self
            .pw
            .branches
            .iter()
            .map(|b| match b {
                Branch::Constant(v) => Branch::Constant(c * v),
                other => {
                    let inner = other.clone();
                    Branch::func(move |y| c * inner.eval(y))
                }
            })
            .collect();
        RadialSymbol {
            name: format!("{c}*{}", self.name),
            pw: Piecewise { breakpoints: self.pw.breakpoints.clone(), branches },
            b0: c * self.b0,
            b_inf: c * self.b_inf,
            sup_norm_bound: (c.abs() * self.sup_norm_bound).max(f64::MIN_POSITIVE),
        }
    }
}

/// `c(v1, v2) = a(v1) b(v2)`.
#[derive(Debug, Clone)]
pub struct NilpotentSymbol {
    pub a: VerticalSymbol,
    pub b: RadialSymbol,
}

impl NilpotentSymbol {
    pub fn new(a: VerticalSymbol, b: RadialSymbol) -> NilpotentSymbol {
        NilpotentSymbol { a, b }
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.a.sup_norm_bound() * self.b.sup_norm_bound()
    }
}

/// Ramp from 0 at `-alpha` to 1 at `0`, constant outside.
pub fn make_a_alpha(alpha: f64) -> Result<VerticalSymbol> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    VerticalSymbol::new(
        format!("a_alpha:{alpha}"),
        vec![-alpha, 0.0],
        vec![Branch::Constant(0.0), Branch::func(move |s| s / alpha + 1.0), Branch::Constant(1.0)],
        0.0,
        1.0,
        1.0,
    )
}

/// Indicator of `[beta/2, +inf]`.
pub fn make_chi_beta(beta: f64) -> Result<VerticalSymbol> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    VerticalSymbol::new(
        format!("chi_beta:{beta}"),
        vec![0.5 * beta],
        vec![Branch::Constant(0.0), Branch::Constant(1.0)],
        0.0,
        1.0,
        1.0,
    )
}

/// The fixed vertical catalog.
#[derive(Debug, Clone)]
pub struct Catalog {
    /// `s / sqrt(s^2 + 1)`
    pub a1: VerticalSymbol,
    /// `1 / (s^2 + 1)`
    pub a2: VerticalSymbol,
    /// Indicator of `[0, +inf]`.
    pub chi_plus: VerticalSymbol,
}

impl Catalog {
    pub fn constant(&self, v: f64) -> VerticalSymbol {
        VerticalSymbol::constant(v)
    }
}

pub fn named_symbols() -> Catalog {
    Catalog {
        a1: VerticalSymbol::new("a1", vec![], vec![Branch::func(|s| s / s.hypot(1.0))], -1.0, 1.0, 1.0)
            .expect("a1 is valid"),
        a2: VerticalSymbol::new("a2", vec![], vec![Branch::func(|s| 1.0 / (s * s + 1.0))], 0.0, 0.0, 1.0)
            .expect("a2 is valid"),
        chi_plus: VerticalSymbol::new(
            "chi_plus",
            vec![0.0],
            vec![Branch::Constant(0.0), Branch::Constant(1.0)],
            0.0,
            1.0,
            1.0,
        )
        .expect("chi_plus is valid"),
    }
}

/// Indicator of `(0, 1)`.
pub fn radial_chi01() -> RadialSymbol {
    RadialSymbol::new("chi01", vec![1.0], vec![Branch::Constant(1.0), Branch::Constant(0.0)], 1.0, 0.0, 1.0)
        .expect("chi01 is valid")
}

/// `e^{-t}`.
pub fn radial_exp_neg() -> RadialSymbol {
    RadialSymbol::new("exp_neg", vec![], vec![Branch::func(|t| (-t).exp())], 1.0, 0.0, 1.0).expect("exp_neg is valid")
}

/// `1 / (1 + t)`.
pub fn radial_inv1p() -> RadialSymbol {
    RadialSymbol::new("inv1p", vec![], vec![Branch::func(|t| 1.0 / (1.0 + t))], 1.0, 0.0, 1.0).expect("inv1p is valid")
}

/// `chi01`, `constant:1`, `exp_neg`, `inv1p`.
pub fn radial_catalog() -> Vec<RadialSymbol> {
    vec![radial_chi01(), RadialSymbol::constant(1.0), radial_exp_neg(), radial_inv1p()]
}

fn split_param(spec: &str) -> (&str, Option<&str>) {
    match spec.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p.trim())),
        None => (spec.trim(), None),
    }
}

fn param(name: &str, p: Option<&str>) -> Result<f64> {
    let p = p.ok_or_else(|| Error::domain(format!("{name} needs a parameter, e.g. {name}:1")))?;
    p.parse::<f64>().map_err(|_| Error::domain(format!("bad parameter '{p}' for {name}")))
}

/// Looks up a vertical symbol by catalog name: `a1`, `a2`, `chi_plus`,
/// `constant:<v>`, `a_alpha:<alpha>`, `chi_beta:<beta>`.
pub fn vertical_by_name(spec: &str) -> Result<VerticalSymbol> {
    let cat = named_symbols();
    match split_param(spec) {
        ("a1", None) => Ok(cat.a1),
        ("a2", None) => Ok(cat.a2),
        ("chi_plus", None) => Ok(cat.chi_plus),
        ("constant", p) => Ok(VerticalSymbol::constant(param("constant", p)?)),
        ("a_alpha", p) => make_a_alpha(param("a_alpha", p)?),
        ("chi_beta", p) => make_chi_beta(param("chi_beta", p)?),
        _ => Err(Error::domain(format!("unknown vertical symbol '{spec}'"))),
    }
}

/// Looks up a radial symbol by catalog name: `chi01`, `exp_neg`, `inv1p`,
/// `constant:<v>`.
pub fn radial_by_name(spec: &str) -> Result<RadialSymbol> {
    match split_param(spec) {
        ("chi01", None) => Ok(radial_chi01()),
        ("exp_neg", None) => Ok(radial_exp_neg()),
        ("inv1p", None) => Ok(radial_inv1p()),
        ("constant", p) => Ok(RadialSymbol::constant(param("constant", p)?)),
        _ => Err(Error::domain(format!("unknown radial symbol '{spec}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ext_real_order_and_parsing() {
        assert!(ExtReal::NegInf < ExtReal::Finite(-1e300));
        assert!(ExtReal::Finite(1e300) < ExtReal::PosInf);
        assert_eq!("-inf".parse::<ExtReal>().unwrap(), ExtReal::NegInf);
        assert_eq!("+inf".parse::<ExtReal>().unwrap(), ExtReal::PosInf);
        assert_eq!("2.5".parse::<ExtReal>().unwrap(), ExtReal::Finite(2.5));
        assert!("nan".parse::<ExtReal>().is_err());
        assert!(ExtReal::new(f64::NAN).is_err());
        assert_eq!(ExtReal::PosInf.to_string(), "+inf");
    }

    #[test]
    fn catalog_values() {
        let c = named_symbols();
        assert_eq!(c.a1.eval(ExtReal::Finite(0.0)), 0.0);
        assert_eq!(c.a1.eval(ExtReal::PosInf), 1.0);
        assert_eq!(c.a1.eval(ExtReal::NegInf), -1.0);
        assert_eq!(c.a2.eval(ExtReal::Finite(0.0)), 1.0);
        assert_eq!(c.a2.eval(ExtReal::PosInf), 0.0);
        assert_eq!(c.a2.eval(ExtReal::NegInf), 0.0);
        assert_eq!(c.chi_plus.eval(ExtReal::Finite(-3.0)), 0.0);
        assert_eq!(c.chi_plus.eval(ExtReal::Finite(0.0)), 1.0);
        assert_eq!(c.constant(1.0).eval(ExtReal::Finite(-7.0)), 1.0);
        assert!(c.a1.is_continuous() && c.a2.is_continuous());
        assert!(!c.chi_plus.is_continuous_at(0.0));
    }

    #[test]
    fn catalog_limits_at_far_points() {
        let c = named_symbols();
        for a in [&c.a1, &c.a2, &c.chi_plus, &make_a_alpha(0.3).unwrap(), &make_chi_beta(2.0).unwrap()] {
            assert!((a.eval_f64(1e9) - a.limit_pos_inf()).abs() <= 1e-6);
            assert!((a.eval_f64(-1e9) - a.limit_neg_inf()).abs() <= 1e-6);
        }
    }

    #[test]
    fn ramp_values() {
        assert_eq!(make_a_alpha(1.0).unwrap().eval_f64(-0.5), 0.5);
        assert_eq!(make_a_alpha(2.0).unwrap().eval_f64(-3.0), 0.0);
        assert_eq!(make_a_alpha(0.5).unwrap().eval_f64(1.0), 1.0);
        assert!(make_a_alpha(0.0).is_err());
        assert!(make_a_alpha(-1.0).is_err());
        assert!(make_a_alpha(0.25).unwrap().is_continuous());
    }

    #[test]
    fn chi_beta_values() {
        let chi = make_chi_beta(2.0).unwrap();
        assert_eq!(chi.eval_f64(0.99), 0.0);
        assert_eq!(chi.eval_f64(1.01), 1.0);
        assert_eq!(chi.eval(ExtReal::PosInf), 1.0);
        assert_eq!(chi.eval_f64(1.0), 1.0);
        assert_eq!(chi.eval_left(1.0), 0.0);
        assert_eq!(chi.jumps(), vec![1.0]);
        assert!(make_chi_beta(0.0).is_err());
    }

    #[test]
    fn validation_rejects_bad_symbols() {
        let unsorted = VerticalSymbol::new("x", vec![1.0, 0.0], vec![Branch::Constant(0.0); 3], 0.0, 0.0, 1.0);
        assert!(unsorted.is_err());
        let too_big = VerticalSymbol::new("x", vec![], vec![Branch::func(|s| 2.0 * s / s.hypot(1.0))], -2.0, 2.0, 1.0);
        assert!(too_big.is_err());
        let wrong_limit = VerticalSymbol::new("x", vec![], vec![Branch::func(|s| s / s.hypot(1.0))], 1.0, 1.0, 1.0);
        assert!(wrong_limit.is_err());
        let blows_up = VerticalSymbol::new(
            "x",
            vec![0.0],
            vec![Branch::Constant(0.0), Branch::func(|s| (1.0 / s).sin())],
            0.0,
            0.0,
            1.0,
        );
        assert!(blows_up.is_err());
        let count = VerticalSymbol::new("x", vec![0.0], vec![Branch::Constant(0.0)], 0.0, 0.0, 1.0);
        assert!(count.is_err());
    }

    #[test]
    fn radial_catalog_limits() {
        for b in radial_catalog() {
            assert!((b.eval(1e-8) - b.b0()).abs() <= 1e-6, "{}", b.name());
            assert!((b.eval(1e8) - b.b_inf()).abs() <= 1e-6, "{}", b.name());
        }
        let chi = radial_chi01();
        assert_eq!(chi.eval(0.5), 1.0);
        assert_eq!(chi.eval(1.0), 0.0);
        assert_eq!(chi.eval(0.0), 1.0);
        assert_eq!(chi.eval(f64::INFINITY), 0.0);
        let slow = RadialSymbol::new("slow", vec![], vec![Branch::func(|t| 1.0 / (1.0 + t.ln().abs()))], 0.0, 0.0, 1.0);
        assert!(slow.is_err());
    }

    #[test]
    fn shift_and_combination() {
        let a = make_a_alpha(1.0).unwrap().shifted(1.0);
        assert_eq!(a.breakpoints(), &[0.0, 1.0]);
        assert_eq!(a.eval_f64(0.5), 0.5);
        assert_eq!(a.eval_f64(-2.0), 0.0);
        let c = named_symbols();
        let mix = VerticalSymbol::linear_combination(2.0, &c.chi_plus, -0.5, &c.a1);
        for s in [-3.0, -0.1, 0.0, 0.7, 40.0] {
            assert_eq!(mix.eval_f64(s), 2.0 * c.chi_plus.eval_f64(s) - 0.5 * c.a1.eval_f64(s));
        }
        assert_eq!(mix.limit_pos_inf(), 1.5);
        assert_eq!(mix.left_limits(), &[0.0]);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(vertical_by_name("chi_beta:2").unwrap().breakpoints(), &[1.0]);
        assert_eq!(vertical_by_name("constant:0.5").unwrap().eval_f64(3.0), 0.5);
        assert!(vertical_by_name("a_alpha").is_err());
        assert!(vertical_by_name("nope").is_err());
        assert_eq!(radial_by_name("chi01").unwrap().b0(), 1.0);
        assert!(radial_by_name("chi02").is_err());
    }

    proptest! {
        #[test]
        fn ramp_is_monotone(alpha in 1e-3f64..10.0, s in -20.0f64..20.0, ds in 0.0f64..5.0) {
            let a = make_a_alpha(alpha).unwrap();
            let (v, w) = (a.eval_f64(s), a.eval_f64(s + ds));
            prop_assert!(v <= w);
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn chi_beta_is_an_indicator(beta in 1e-3f64..10.0, s in -20.0f64..20.0) {
            let v = make_chi_beta(beta).unwrap().eval_f64(s);
            prop_assert!(v == 0.0 || v == 1.0);
            prop_assert_eq!(v == 1.0, s >= beta / 2.0);
        }

        #[test]
        fn catalog_respects_bounds(s in -1e6f64..1e6) {
            let c = named_symbols();
            for a in [&c.a1, &c.a2, &c.chi_plus] {
                prop_assert!(a.eval_f64(s).abs() <= a.sup_norm_bound());
            }
        }
    }

    #[test]
    fn ramp_monotone_on_dense_grid() {
        for alpha in [0.01, 0.5, 1.0, 3.0] {
            let a = make_a_alpha(alpha).unwrap();
            let v: Vec<f64> = (0..10_000).map(|i| a.eval_f64(-5.0 + 10.0 * i as f64 / 9_999.0)).collect();
            assert!(v.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
