//! Orthonormal Hermite and Laguerre functions, Gauss rules, and the
//! adaptive panel integrator used by the spectral module.
//!
//! Both function families are evaluated by three-term recurrences on the
//! *normalized* functions, carrying the Gaussian (resp. exponential) factor
//! as a separate log-scale so that neither the polynomial nor the weight
//! overflows for degrees up to [`MAX_DEGREE`].
//!
//! Sign conventions: `h_m` drops the `(-1)^m` prefactor (it has a positive
//! leading coefficient), `l_m^lambda` keeps it. Every spectral formula only
//! uses squares, so neither choice is visible downstream.

mod gauss;
mod quadrature;

use std::sync::OnceLock;

pub(crate) use gauss::cached_rule;
pub use gauss::{gauss_rule, QuadratureRule, RuleKind, MAX_RULE_ORDER};
pub(crate) use quadrature::integrate_adaptive;
pub use quadrature::Estimate;

use crate::error::{Error, Result};

/// Largest supported degree for `hermite_fn` / `laguerre_fn`.
pub const MAX_DEGREE: usize = 200;

/// `pi^(-1/4)`
pub(crate) const PI_POW_MINUS_QUARTER: f64 = 0.751_125_544_464_942_5;

const RESCALE_ABOVE: f64 = 1e100;
const RESCALE_LN: f64 = 230.258_509_299_404_57; // ln(1e100)

/// Orthonormal Hermite function `h_m(y)`, normalized so that the integral of
/// `h_m^2` over the real line is one.
pub fn hermite_fn(m: usize, y: f64) -> Result<f64> {
    if m > MAX_DEGREE {
        return Err(Error::domain(format!("hermite degree {m} exceeds {MAX_DEGREE}")));
    }
    if !y.is_finite() {
        return Err(Error::domain(format!("hermite argument must be finite, got {y}")));
    }
    Ok(hermite_unchecked(m, y))
}

/// Values `h_0(y), ..., h_m(y)`.
pub(crate) fn hermite_values(m: usize, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m + 1);
    let gauss = -0.5 * y * y;
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = PI_POW_MINUS_QUARTER;
    out.push(cur * gauss.exp());
    for n in 0..m {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * y * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_LN;
        }
        out.push(cur * (gauss + log_scale).exp());
    }
    out
}

pub(crate) fn hermite_unchecked(m: usize, y: f64) -> f64 {
    let gauss = -0.5 * y * y;
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = PI_POW_MINUS_QUARTER;
    for n in 0..m {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * y * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_LN;
        }
    }
    cur * (gauss + log_scale).exp()
}

/// Tail mass `int_t^inf h_m(s)^2 ds`.
///
/// Closed form from the ladder identity
/// `h_m^2 = h_{m-1}^2 - (2m)^{-1/2} d/ds (h_m h_{m-1})`:
/// `F_m(t) = erfc(t)/2 + sum_{i=1}^m h_i(t) h_{i-1}(t) / sqrt(2i)`.
pub fn hermite_tail_mass(m: usize, t: f64) -> f64 {
    if t == f64::INFINITY {
        return 0.0;
    }
    if t == f64::NEG_INFINITY {
        return 1.0;
    }
    let mut acc = 0.5 * libm::erfc(t);
    if m > 0 && t.abs() < 40.0 + (2.0 * m as f64 + 1.0).sqrt() {
        let h = hermite_values(m, t);
        for i in 1..=m {
            acc += h[i] * h[i - 1] / (2.0 * i as f64).sqrt();
        }
    }
    acc.clamp(0.0, 1.0)
}

/// Half-width `Y` outside of which `h_m^2` carries less than `1e-20` of mass.
pub(crate) fn hermite_support(m: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_DEGREE)
            .map(|m| {
                let mut y = (2.0 * m as f64 + 1.0).sqrt() + 2.0;
                while hermite_tail_mass(m, y) > 5e-21 {
                    y += 0.25;
                }
                y
            })
            .collect()
    });
    table[m.min(MAX_DEGREE)]
}

/// Orthonormal Laguerre function `l_m^lambda(y) = (-1)^m c_m L_m^lambda(y) e^{-y/2}`
/// with `c_m = sqrt(m! / Gamma(m + lambda + 1))`, orthonormal in
/// `L^2(R_+, y^lambda dy)`.
pub fn laguerre_fn(m: usize, lambda: f64, y: f64) -> Result<f64> {
    if m > MAX_DEGREE {
        return Err(Error::domain(format!("laguerre degree {m} exceeds {MAX_DEGREE}")));
    }
    if !(lambda > -1.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("laguerre parameter must satisfy lambda > -1, got {lambda}")));
    }
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("laguerre argument must be finite and >= 0, got {y}")));
    }
    Ok(laguerre_unchecked(m, lambda, y))
}

pub(crate) fn laguerre_unchecked(m: usize, lambda: f64, y: f64) -> f64 {
    let mut log_scale = -0.5 * y;
    let mut prev = 0.0;
    let mut cur = if lambda == 0.0 { 1.0 } else { (-0.5 * libm::lgamma(lambda + 1.0)).exp() };
    for n in 0..m {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + lambda - y) * cur - (nf * (nf + lambda)).sqrt() * prev)
            / ((nf + 1.0) * (nf + lambda + 1.0)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_LN;
        }
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * cur * log_scale.exp()
}

/// Point beyond which `l_m^0` squared carries less than about `1e-20` of mass.
pub(crate) fn laguerre_support(m: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=MAX_DEGREE)
            .map(|m| {
                let mf = m as f64;
                let mut y = 4.0 * mf + 6.0;
                loop {
                    let l = laguerre_unchecked(m, 0.0, y);
                    // Past the turning point the tail is bounded by l^2 * y / (y - 2m).
                    if l * l * y / (y - 2.0 * mf) < 1e-21 {
                        break y;
                    }
                    y += 1.0;
                }
            })
            .collect()
    });
    table[m.min(MAX_DEGREE)]
}
