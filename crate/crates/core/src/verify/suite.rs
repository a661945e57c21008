//! Named verification suites producing report records.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::continuity::{ContinuityOptions, ContinuityReport, DISCONTINUITY_THRESHOLD};
use super::separation::SeparationReport;
use super::{
    check_chain_continuity, check_gamma_ab_continuity, check_gamma_b_limits, check_limit_R, check_phi_boundary,
    check_psi_vanish, check_separation_boundary, check_separation_interior, random_boundary_pairs,
    random_interior_pairs, random_mixed_pairs, PhiEdge, Record,
};
use crate::error::{Error, Result};
use crate::geometry::{PlaneMap, Squash};
use crate::spectral::SpectralConfig;
use crate::symbols::{
    make_a_alpha, make_chi_beta, named_symbols, radial_catalog, radial_chi01, RadialSymbol, VerticalSymbol,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    LimitsB,
    LimitsR,
    PhiBoundary,
    Separation,
    ChainContinuity,
    GammaAb,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::LimitsB, Suite::LimitsR, Suite::PhiBoundary, Suite::Separation, Suite::ChainContinuity, Suite::GammaAb];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LimitsB => "limits-b",
            Suite::LimitsR => "limits-R",
            Suite::PhiBoundary => "phi-boundary",
            Suite::Separation => "separation",
            Suite::ChainContinuity => "chain-continuity",
            Suite::GammaAb => "gamma-ab",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::domain(format!("unknown suite '{s}', expected one of {}", names.join(", ")))
        })
    }
}

/// Inputs shared by all suites. `None` fields fall back to each suite's
/// built-in cases.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub symbol_a: Option<VerticalSymbol>,
    pub symbol_b: Option<RadialSymbol>,
    pub chain: Option<PlaneMap>,
    /// Use the radial catalog in `limits-b` even when `symbol_b` is set.
    pub catalog: bool,
    /// Pairs per separation class.
    pub pairs: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub continuity: ContinuityOptions,
    pub spectral: SpectralConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            j: None,
            k: None,
            symbol_a: None,
            symbol_b: None,
            chain: None,
            catalog: false,
            pairs: 200,
            seed: 0,
            tol: None,
            continuity: ContinuityOptions::default(),
            spectral: SpectralConfig::default(),
        }
    }
}

/// Runs a suite. Records come back in a fixed order whatever the thread
/// count.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<Record>> {
    opts.spectral.validate()?;
    match suite {
        Suite::LimitsB => limits_b(opts),
        Suite::LimitsR => limits_r(opts),
        Suite::PhiBoundary => phi_boundary(opts),
        Suite::Separation => separation(opts),
        Suite::ChainContinuity => chain_continuity(opts),
        Suite::GammaAb => gamma_ab(opts),
    }
}

fn indices(given: Option<usize>) -> Vec<usize> {
    given.map_or_else(|| vec![1, 2, 3], |i| vec![i])
}

fn flatten(chunks: Vec<Result<Vec<Record>>>) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

fn limits_b(opts: &SuiteOptions) -> Result<Vec<Record>> {
    let symbols = match (&opts.symbol_b, opts.catalog) {
        (Some(b), false) => vec![b.clone()],
        _ => radial_catalog(),
    };
    let tol = opts.tol.unwrap_or(1e-4);
    let cases: Vec<(RadialSymbol, usize)> =
        symbols.iter().flat_map(|b| indices(opts.k).into_iter().map(move |k| (b.clone(), k))).collect();
    let chunks = cases
        .par_iter()
        .map(|(b, k)| {
            let reports = check_gamma_b_limits(b, *k, tol, &opts.spectral)?;
            Ok(reports.iter().map(|r| r.to_record(&format!("b={} k={k}", b.name()))).collect())
        })
        .collect();
    flatten(chunks)
}

fn limits_r(opts: &SuiteOptions) -> Result<Vec<Record>> {
    let symbols = match &opts.symbol_a {
        Some(a) => vec![a.clone()],
        None => {
            let cat = named_symbols();
            vec![cat.chi_plus, cat.a1, make_a_alpha(1.0)?]
        }
    };
    let tol = opts.tol.unwrap_or(1e-3);
    let mut cases = Vec::new();
    for a in &symbols {
        for j in indices(opts.j) {
            for x0 in [-1.0, 0.0, 2.0] {
                cases.push((a, j, x0));
            }
        }
    }
    let chunks = cases
        .par_iter()
        .map(|&(a, j, x0)| {
            let r = check_limit_R(a, j, x0, tol, &opts.spectral)?;
            Ok(vec![r.to_record(&format!("a={} j={j}", a.name()))])
        })
        .collect();
    flatten(chunks)
}

/// Runs every boundary statement whose continuity precondition holds.
fn phi_boundary(opts: &SuiteOptions) -> Result<Vec<Record>> {
    let symbols = match &opts.symbol_a {
        Some(a) => vec![a.clone()],
        None => {
            let cat = named_symbols();
            vec![cat.a1, cat.a2, VerticalSymbol::constant(1.0)]
        }
    };
    let tol = opts.tol.unwrap_or(1e-4);
    let edges = [
        PhiEdge::Corners,
        PhiEdge::Vertical { t0: 0.5 },
        PhiEdge::Vertical { t0: 1.0 },
        PhiEdge::Vertical { t0: 2.0 },
        PhiEdge::Top,
    ];
    let mut cases = Vec::new();
    for a in &symbols {
        for j in indices(opts.j) {
            for edge in edges {
                cases.push((a, j, edge));
            }
        }
    }
    let mut chunks: Vec<Result<Vec<Record>>> = cases
        .par_iter()
        .map(|&(a, j, edge)| match check_phi_boundary(a, j, edge, tol, &opts.spectral) {
            Ok(reports) => Ok(reports.iter().map(|r| r.to_record(&format!("a={} j={j}", a.name()))).collect()),
            Err(Error::BoundaryUndefined { .. }) => Ok(vec![]),
            Err(e) => Err(e),
        })
        .collect();
    let psi_points = [(0.0, 1.0), (1.0, 0.5), (-2.0, 4.0)];
    let psi: Vec<Result<Vec<Record>>> = indices(opts.j)
        .into_iter()
        .flat_map(|j| psi_points.into_iter().map(move |p| (j, p)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(j, (t1, t2))| {
            let r = check_psi_vanish(j, t1, t2, opts.tol.unwrap_or(1e-3), &opts.spectral)?;
            Ok(vec![r.to_record(&format!("j={j}"))])
        })
        .collect();
    chunks.extend(psi);
    flatten(chunks)
}

fn separation_record(id: &str, r: &SeparationReport) -> Record {
    Record {
        id: id.into(),
        params: format!("p={} q={} witness={}", r.point_pair.0, r.point_pair.1, r.witness_symbol),
        target: r.values.0,
        value: r.values.1,
        gap: r.gap,
        pass: r.separated,
    }
}

fn separation(opts: &SuiteOptions) -> Result<Vec<Record>> {
    let j = opts.j.unwrap_or(1);
    let n = opts.pairs;
    let cfg = &opts.spectral;
    let classes = [
        ("sep-boundary", random_boundary_pairs(n, opts.seed)),
        ("sep-interior", random_interior_pairs(n, opts.seed)),
        ("sep-mixed", random_mixed_pairs(n, opts.seed)),
    ];
    let mut out = Vec::with_capacity(3 * n);
    for (id, pairs) in classes {
        let records: Vec<Result<Record>> = pairs
            .par_iter()
            .map(|&(p, q)| {
                let r = if id == "sep-boundary" {
                    check_separation_boundary(p, q, j, cfg)?
                } else {
                    check_separation_interior(p, q, j, cfg)?
                };
                Ok(separation_record(id, &r))
            })
            .collect();
        for r in records {
            out.push(r?);
        }
    }
    Ok(out)
}

fn continuity_record(id: &str, r: &ContinuityReport) -> Record {
    let (expect, target) =
        if r.expected_continuous { ("continuous", r.budget) } else { ("discontinuous", DISCONTINUITY_THRESHOLD) };
    Record {
        id: id.into(),
        params: format!(
            "{} expect={expect} radius={} worst={} nodes={} skipped={}",
            r.label, r.radius, r.worst_window, r.nodes, r.skipped
        ),
        target,
        value: r.max_oscillation,
        gap: (r.max_oscillation - target).abs(),
        pass: r.pass,
    }
}

/// The chain that separates the level sets of every positive jump of `a`.
fn repairing_chain(a: &VerticalSymbol) -> Result<Option<PlaneMap>> {
    let betas: Vec<f64> = a.jumps().into_iter().filter(|&s| s > 0.0).map(|s| 2.0 * s).collect();
    if betas.is_empty() {
        return Ok(None);
    }
    PlaneMap::separating_chain(&betas, Squash::Atan).map(Some)
}

fn chain_continuity(opts: &SuiteOptions) -> Result<Vec<Record>> {
    let a = match &opts.symbol_a {
        Some(a) => a.clone(),
        None => make_chi_beta(1.0)?,
    };
    let j = opts.j.unwrap_or(1);
    let chains = match &opts.chain {
        Some(c) => vec![c.clone()],
        None => std::iter::once(PlaneMap::chain(vec![])).chain(repairing_chain(&a)?).collect(),
    };
    chains
        .iter()
        .map(|c| {
            let r = check_chain_continuity(&a, j, c, None, &opts.continuity, &opts.spectral)?;
            Ok(continuity_record("continuity", &r))
        })
        .collect()
}

fn gamma_ab(opts: &SuiteOptions) -> Result<Vec<Record>> {
    let a = opts.symbol_a.clone().unwrap_or_else(|| VerticalSymbol::constant(1.0));
    let b = opts.symbol_b.clone().unwrap_or_else(radial_chi01);
    let (j, k) = (opts.j.unwrap_or(1), opts.k.unwrap_or(1));
    let maps = match &opts.chain {
        Some(c) => vec![c.clone()],
        None => {
            let mut spec = "phi,theta".to_string();
            for s in a.jumps().into_iter().filter(|&s| s > 0.0) {
                spec.push_str(&format!(",theta_beta:{}", 2.0 * s));
            }
            vec![PlaneMap::Phi, PlaneMap::parse_chain(&spec)?]
        }
    };
    maps.iter()
        .map(|m| {
            let r = check_gamma_ab_continuity(&a, &b, j, k, m, None, &opts.continuity, &opts.spectral)?;
            Ok(continuity_record("gamma-ab", &r))
        })
        .collect()
}
