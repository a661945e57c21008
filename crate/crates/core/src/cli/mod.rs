//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input,
//! 3 the requested boundary point has no value, 4 the output could not be
//! written.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::Error;
use crate::geometry::{level_curve_chi_beta, theta_image_of_gamma_b_level, PlaneMap, Saturation};
use crate::spectral::{
    gamma_a_estimate, gamma_b_estimate, gamma_c_estimate, phi_a_estimate, psi_alpha, varphi, BoundaryPoint, MultiIndex,
    SpectralConfig,
};
use crate::symbols::{
    load_symbol_file, make_chi_beta, radial_by_name, radial_chi01, vertical_by_name, ExtReal, NilpotentSymbol,
    RadialSymbol, SymbolSpec, VerticalSymbol,
};
use crate::verify::{run_suite, ContinuityOptions, Suite, SuiteOptions, Transported};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SIEGEL_SPECTRA_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "siegel-spectra",
    version,
    about = "Spectral functions of Toeplitz operators with nilpotent symbols on the Siegel domain D2",
    after_help = "Points and ranges accept -inf/+inf where boundary values exist.\n\
                  Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 point without value, 4 unwritable output.\n\
                  SIEGEL_SPECTRA_THREADS caps the number of worker threads."
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Options shared by all commands.
#[derive(Debug, Args)]
pub struct Common {
    /// Hermite index j (vertical part), at least 1.
    #[arg(long = "j", global = true)]
    pub j: Option<usize>,
    /// Laguerre index k (radial part), at least 1.
    #[arg(long = "k", global = true)]
    pub k: Option<usize>,
    /// Vertical symbol: catalog name (a1, a2, chi_plus, constant:<v>, a_alpha:<alpha>, chi_beta:<beta>) or file.
    #[arg(long = "symbol-a", visible_alias = "symbol", global = true)]
    pub symbol_a: Option<String>,
    /// Radial symbol: catalog name (chi01, exp_neg, inv1p, constant:<v>) or file.
    #[arg(long = "symbol-b", global = true)]
    pub symbol_b: Option<String>,
    /// Parameter for a bare `chi_beta` symbol name and for chi-beta curves.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Ramp width for a bare `a_alpha` symbol name and for `psi`.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Map chain, e.g. `upsilon:1,upsilon:3` or `phi,theta,theta_beta:1`; `none` for the identity.
    #[arg(long, global = true)]
    pub chain: Option<String>,
    /// Gauss–Hermite order of the fast path.
    #[arg(long = "order-hermite", global = true)]
    pub order_hermite: Option<usize>,
    /// Gauss–Laguerre order of the fast path.
    #[arg(long = "order-laguerre", global = true)]
    pub order_laguerre: Option<usize>,
    /// Absolute accuracy of integrals (eval, grid, curve) or suite tolerance (verify).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output path; written atomically. Standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// phi^a(t1, t2) in half-plane coordinates, optionally through --chain.
    Phi,
    /// gamma^a(x1, x2).
    GammaA,
    /// gamma^b(x2).
    GammaB,
    /// gamma^c(x1, x2) = gamma^a gamma^b.
    GammaC,
    /// psi^alpha(t1, t2).
    Psi,
    /// varphi(t1).
    Varphi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKindArg {
    /// Level curve of phi^{chi_beta} through lambda0.
    ChiBeta,
    /// Image under Theta of the level curve x2 = mu of gamma^b.
    ThetaImage,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one spectral function at one point.
    Eval {
        #[arg(long, value_enum, default_value = "phi")]
        function: Function,
        /// Point `t1,t2` (or `x1,x2`; a single coordinate for gamma-b and varphi).
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Tabulate a function of two variables over a grid as CSV.
    Grid {
        #[arg(long, value_enum, default_value = "phi")]
        function: Function,
        /// `t1lo:t1hi:n,t2lo:t2hi:n`, n >= 2.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Sample uniformly in 2 atan(t) / pi, so infinite endpoints are allowed.
        #[arg(long)]
        compactified: bool,
    },
    /// Trace a level curve as CSV.
    Curve {
        #[arg(long, value_enum, default_value = "chi-beta")]
        kind: CurveKindArg,
        #[arg(long = "lambda0", allow_hyphen_values = true, default_value_t = 0.0)]
        lambda0: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Abscissae `lo:hi:n`, n >= 2.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Append the spectral function along the curve.
        #[arg(long)]
        with_values: bool,
    },
    /// Run a verification suite and write its report.
    Verify {
        /// limits-b, limits-R, phi-boundary, separation, chain-continuity or gamma-ab.
        suite: String,
        /// Use the whole radial catalog (limits-b).
        #[arg(long)]
        catalog: bool,
        /// Random pairs per class (separation).
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        /// Seed of the ChaCha8 pair generator (separation).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ball radius in compact coordinates (continuity suites).
        #[arg(long)]
        radius: Option<f64>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    NoValue(String),
    Output(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoValue(_) => 3,
            CliError::Output(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NoValue(m) | CliError::Output(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundaryUndefined { .. } | Error::ExcludedPoint { .. } => CliError::NoValue(e.to_string()),
            Error::Domain(_) | Error::Parse { .. } => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            return e.code();
        }
    };
    let mut buffer = Vec::new();
    let result = pool.install(|| execute(&cfg, &mut buffer));
    if let Err(e) = stdout.write_all(&buffer).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 4;
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Input(format!("cannot start worker threads: {e}")))
}

fn execute(cfg: &RunConfig, stdout: &mut Vec<u8>) -> CliResult<i32> {
    let c = &cfg.common;
    let spectral = spectral_config(c)?;
    match &cfg.command {
        Command::Eval { function, at } => {
            let line = cmd_eval(c, *function, at, &spectral)?;
            emit(c.out.as_deref(), &line, stdout)?;
            Ok(0)
        }
        Command::Grid { function, grid, compactified } => {
            let csv = cmd_grid(c, *function, grid, *compactified, &spectral)?;
            emit(c.out.as_deref(), &csv, stdout)?;
            Ok(0)
        }
        Command::Curve { kind, lambda0, mu, grid, with_values } => {
            let csv = cmd_curve(c, *kind, *lambda0, *mu, grid, *with_values, &spectral)?;
            emit(c.out.as_deref(), &csv, stdout)?;
            Ok(0)
        }
        Command::Verify { suite, catalog, pairs, seed, radius } => {
            let suite: Suite = suite.parse().map_err(CliError::from)?;
            let (text, failures) = cmd_verify(c, suite, *catalog, *pairs, *seed, *radius, spectral)?;
            emit(c.out.as_deref(), &text, stdout)?;
            if c.out.is_some() {
                let total = text.lines().count();
                let _ = writeln!(stdout, "{suite}: {} of {total} checks passed", total - failures);
            }
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}

fn spectral_config(c: &Common) -> CliResult<SpectralConfig> {
    let mut s = SpectralConfig::default();
    if let Some(o) = c.order_hermite {
        s.hermite_order = o;
    }
    if let Some(o) = c.order_laguerre {
        s.laguerre_order = o;
    }
    s.validate()?;
    Ok(s)
}

/// Writes to `path` through a temporary file in the same directory, or to
/// standard output.
fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    let Some(path) = path else {
        return stdout.write_all(text.as_bytes()).map_err(|e| CliError::Output(format!("cannot write output: {e}")));
    };
    let fail = |e: &dyn std::fmt::Display| CliError::Output(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn vertical_symbol(c: &Common) -> CliResult<VerticalSymbol> {
    let spec = c.symbol_a.as_deref().ok_or_else(|| CliError::Input("--symbol-a is required".into()))?;
    if Path::new(spec).is_file() {
        return match load_symbol_file(Path::new(spec))? {
            SymbolSpec::Vertical(a) => Ok(a),
            SymbolSpec::Radial(_) => Err(CliError::Input(format!("{spec} holds a radial symbol"))),
        };
    }
    let named = match (spec, c.beta, c.alpha) {
        ("chi_beta", Some(beta), _) => format!("chi_beta:{beta}"),
        ("a_alpha", _, Some(alpha)) => format!("a_alpha:{alpha}"),
        _ => spec.to_string(),
    };
    Ok(vertical_by_name(&named)?)
}

fn radial_symbol(c: &Common) -> CliResult<RadialSymbol> {
    let spec = c.symbol_b.as_deref().ok_or_else(|| CliError::Input("--symbol-b is required".into()))?;
    if Path::new(spec).is_file() {
        return match load_symbol_file(Path::new(spec))? {
            SymbolSpec::Radial(b) => Ok(b),
            SymbolSpec::Vertical(_) => Err(CliError::Input(format!("{spec} holds a vertical symbol"))),
        };
    }
    Ok(radial_by_name(spec)?)
}

fn chain(c: &Common) -> CliResult<Option<PlaneMap>> {
    c.chain.as_deref().map(PlaneMap::parse_chain).transpose().map_err(CliError::from)
}

fn parse_coordinate(text: &str) -> CliResult<ExtReal> {
    text.trim().parse::<ExtReal>().map_err(|_| CliError::Input(format!("bad coordinate '{}'", text.trim())))
}

fn parse_point(text: &str, arity: usize) -> CliResult<Vec<ExtReal>> {
    let parts: Vec<&str> = text.trim().trim_start_matches('(').trim_end_matches(')').split(',').collect();
    if parts.len() != arity {
        return Err(CliError::Input(format!("expected {arity} coordinate(s) in '--at {text}'")));
    }
    parts.into_iter().map(parse_coordinate).collect()
}

fn finite(x: ExtReal, name: &str) -> CliResult<f64> {
    match x {
        ExtReal::Finite(v) => Ok(v),
        _ => Err(CliError::Input(format!("{name} must be finite for this function"))),
    }
}

/// Formats a value with 17 significant digits.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "+inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

/// Shortest round-trip form, with `-inf`/`+inf` tokens.
fn fmt_coord(x: ExtReal) -> String {
    match x {
        ExtReal::Finite(v) => format!("{v}"),
        other => other.to_string(),
    }
}

fn j_of(c: &Common) -> usize {
    c.j.unwrap_or(1)
}

fn k_of(c: &Common) -> usize {
    c.k.unwrap_or(1)
}

fn with_tol(c: &Common, s: &SpectralConfig) -> CliResult<SpectralConfig> {
    let mut s = *s;
    if let Some(t) = c.tol {
        s.value_tol = t;
    }
    s.validate()?;
    Ok(s)
}

fn cmd_eval(c: &Common, function: Function, at: &str, spectral: &SpectralConfig) -> CliResult<String> {
    let s = with_tol(c, spectral)?;
    let (j, k) = (j_of(c), k_of(c));
    let (name, point, value, error, order) = match function {
        Function::Phi => {
            let a = vertical_symbol(c)?;
            let p = parse_point(at, 2)?;
            let p = BoundaryPoint::new(p[0], p[1])?;
            let (value, error) = match chain(c)? {
                Some(ch) => (Transported::Phi { a: a.clone(), j }.eval(&ch, p, &s)?, f64::NAN),
                None => {
                    let e = phi_a_estimate(&a, j, p, &s)?;
                    (e.value, e.error)
                }
            };
            (format!("phi a={} j={j}", a.name()), p.to_string(), value, error, format!("hermite={}", s.hermite_order))
        }
        Function::GammaA => {
            let a = vertical_symbol(c)?;
            let p = parse_point(at, 2)?;
            let (x1, x2) = (finite(p[0], "x1")?, finite(p[1], "x2")?);
            let e = gamma_a_estimate(&a, j, x1, x2, &s)?;
            (
                format!("gamma_a a={} j={j}", a.name()),
                format!("({x1}, {x2})"),
                e.value,
                e.error,
                format!("hermite={}", s.hermite_order),
            )
        }
        Function::GammaB => {
            let b = radial_symbol(c)?;
            let x2 = finite(parse_point(at, 1)?[0], "x2")?;
            let e = gamma_b_estimate(&b, k, x2, &s)?;
            (
                format!("gamma_b b={} k={k}", b.name()),
                format!("{x2}"),
                e.value,
                e.error,
                format!("laguerre={}", s.laguerre_order),
            )
        }
        Function::GammaC => {
            let cs = NilpotentSymbol::new(vertical_symbol(c)?, radial_symbol(c)?);
            let p = parse_point(at, 2)?;
            let (x1, x2) = (finite(p[0], "x1")?, finite(p[1], "x2")?);
            let e = gamma_c_estimate(&cs, MultiIndex::new(j, k)?, x1, x2, &s)?;
            (
                format!("gamma_c a={} b={} j={j} k={k}", cs.a.name(), cs.b.name()),
                format!("({x1}, {x2})"),
                e.value,
                e.error,
                format!("hermite={},laguerre={}", s.hermite_order, s.laguerre_order),
            )
        }
        Function::Psi => {
            let alpha = c.alpha.ok_or_else(|| CliError::Input("--alpha is required for psi".into()))?;
            let p = parse_point(at, 2)?;
            let (t1, t2) = (finite(p[0], "t1")?, finite(p[1], "t2")?);
            let v = psi_alpha(alpha, j, t1, t2, &s)?;
            (
                format!("psi alpha={alpha} j={j}"),
                format!("({t1}, {t2})"),
                v,
                f64::NAN,
                format!("legendre={}", s.legendre_order),
            )
        }
        Function::Varphi => {
            let t1 = parse_point(at, 1)?[0];
            (format!("varphi j={j}"), t1.to_string(), varphi(j, t1), 0.0, "closed-form".into())
        }
    };
    Ok(format!("{name}\tpoint={point}\tvalue={}\torder={order}\terror={}\n", fmt_value(value), fmt_value(error)))
}

struct Range {
    lo: ExtReal,
    hi: ExtReal,
    n: usize,
}

fn parse_range(text: &str) -> CliResult<Range> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(CliError::Input(format!("range '{text}' must look like lo:hi:n")));
    };
    let n: usize = n.trim().parse().map_err(|_| CliError::Input(format!("bad point count in '{text}'")))?;
    if n < 2 {
        return Err(CliError::Input(format!("range '{text}' needs at least 2 points")));
    }
    Ok(Range { lo: parse_coordinate(lo)?, hi: parse_coordinate(hi)?, n })
}

fn sample(r: &Range, compactified: bool) -> CliResult<Vec<ExtReal>> {
    let lerp = |a: f64, b: f64, i: usize| {
        if i == 0 {
            a
        } else if i == r.n - 1 {
            b
        } else {
            a + (b - a) * i as f64 / (r.n - 1) as f64
        }
    };
    if compactified {
        let c = |x: ExtReal| std::f64::consts::FRAC_2_PI * x.to_f64().atan();
        let (a, b) = (c(r.lo), c(r.hi));
        Ok((0..r.n)
            .map(|i| match i {
                0 => r.lo,
                _ if i == r.n - 1 => r.hi,
                _ => ExtReal::Finite((std::f64::consts::FRAC_PI_2 * lerp(a, b, i)).tan()),
            })
            .collect())
    } else {
        let (ExtReal::Finite(a), ExtReal::Finite(b)) = (r.lo, r.hi) else {
            return Err(CliError::Input("infinite range endpoints need --compactified".into()));
        };
        Ok((0..r.n).map(|i| ExtReal::Finite(lerp(a, b, i))).collect())
    }
}

fn cmd_grid(
    c: &Common,
    function: Function,
    grid: &str,
    compactified: bool,
    spectral: &SpectralConfig,
) -> CliResult<String> {
    let s = with_tol(c, spectral)?;
    let (r1, r2) = grid
        .split_once(',')
        .ok_or_else(|| CliError::Input(format!("grid '{grid}' must look like t1lo:t1hi:n,t2lo:t2hi:n")))?;
    let t1s = sample(&parse_range(r1)?, compactified)?;
    let t2s: Vec<ExtReal> =
        sample(&parse_range(r2)?, compactified)?.into_iter().filter(|t| *t >= ExtReal::Finite(0.0)).collect();
    let (j, k) = (j_of(c), k_of(c));
    let eval: Box<dyn Fn(ExtReal, ExtReal) -> crate::error::Result<f64> + Sync> = match function {
        Function::Phi => {
            let a = vertical_symbol(c)?;
            match chain(c)? {
                Some(ch) => {
                    let f = Transported::Phi { a, j };
                    Box::new(move |t1, t2| f.eval(&ch, BoundaryPoint::new(t1, t2)?, &s))
                }
                None => Box::new(move |t1, t2| Ok(phi_a_estimate(&a, j, BoundaryPoint::new(t1, t2)?, &s)?.value)),
            }
        }
        Function::GammaA => {
            let a = vertical_symbol(c)?;
            Box::new(move |x1, x2| crate::spectral::gamma_a(&a, j, x1.to_f64(), x2.to_f64(), &s))
        }
        Function::GammaC => {
            let cs = NilpotentSymbol::new(vertical_symbol(c)?, radial_symbol(c)?);
            let l = MultiIndex::new(j, k)?;
            Box::new(move |x1, x2| crate::spectral::gamma_c(&cs, l, x1.to_f64(), x2.to_f64(), &s))
        }
        Function::Psi => {
            let alpha = c.alpha.ok_or_else(|| CliError::Input("--alpha is required for psi".into()))?;
            Box::new(move |t1, t2| psi_alpha(alpha, j, t1.to_f64(), t2.to_f64(), &s))
        }
        Function::GammaB | Function::Varphi => {
            return Err(CliError::Input("grid needs a function of two variables: phi, gamma-a, gamma-c or psi".into()))
        }
    };
    let cells: Vec<(ExtReal, ExtReal)> = t1s.iter().flat_map(|&a| t2s.iter().map(move |&b| (a, b))).collect();
    let rows: Vec<crate::error::Result<String>> = cells
        .par_iter()
        .map(|&(t1, t2)| {
            let v = match eval(t1, t2) {
                Ok(v) => v,
                Err(Error::BoundaryUndefined { .. } | Error::ExcludedPoint { .. }) => f64::NAN,
                Err(e) => return Err(e),
            };
            Ok(format!("{},{},{}\n", fmt_coord(t1), fmt_coord(t2), fmt_value(v)))
        })
        .collect();
    let mut out = String::from("t1,t2,value\n");
    for r in rows {
        out.push_str(&r?);
    }
    Ok(out)
}

fn cmd_curve(
    c: &Common,
    kind: CurveKindArg,
    lambda0: f64,
    mu: f64,
    grid: &str,
    with_values: bool,
    spectral: &SpectralConfig,
) -> CliResult<String> {
    let s = with_tol(c, spectral)?;
    let xs: Vec<f64> = sample(&parse_range(grid)?, false)?.into_iter().map(ExtReal::to_f64).collect();
    let mut out = String::new();
    match kind {
        CurveKindArg::ChiBeta => {
            let beta = c.beta.unwrap_or(1.0);
            let curve = level_curve_chi_beta(beta, lambda0, &xs)?;
            let chi = make_chi_beta(beta)?;
            let j = j_of(c);
            out.push_str(if with_values { "t1,t2,phi_value\n" } else { "t1,t2\n" });
            let values: Vec<crate::error::Result<f64>> = curve
                .samples
                .par_iter()
                .map(|&(t1, t2)| {
                    if with_values && t2 >= 0.0 {
                        Ok(phi_a_estimate(&chi, j, BoundaryPoint::from_f64(t1, t2)?, &s)?.value)
                    } else {
                        Ok(f64::NAN)
                    }
                })
                .collect();
            for (&(t1, t2), v) in curve.samples.iter().zip(values) {
                let v = v?;
                let _ = write!(out, "{t1},{t2}");
                if with_values {
                    let _ = write!(out, ",{}", fmt_value(v));
                }
                out.push('\n');
            }
        }
        CurveKindArg::ThetaImage => {
            let f = Saturation::Rational;
            let curve = theta_image_of_gamma_b_level(mu, &f, &xs)?;
            let b = match &c.symbol_b {
                Some(_) => radial_symbol(c)?,
                None => radial_chi01(),
            };
            let value = if with_values { crate::spectral::gamma_b(&b, k_of(c), mu, &s)? } else { f64::NAN };
            out.push_str(if with_values { "t1,t2,gamma_b_value\n" } else { "t1,t2\n" });
            for &(t1, t2) in &curve.samples {
                let _ = write!(out, "{t1},{t2}");
                if with_values {
                    let _ = write!(out, ",{}", fmt_value(value));
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn cmd_verify(
    c: &Common,
    suite: Suite,
    catalog: bool,
    pairs: usize,
    seed: u64,
    radius: Option<f64>,
    spectral: SpectralConfig,
) -> CliResult<(String, usize)> {
    let mut continuity = ContinuityOptions::default();
    if let Some(r) = radius {
        continuity.radius = r;
        continuity.spacing = 0.5 * r;
        continuity.min_offset = continuity.min_offset.min(0.5 * r);
    }
    let opts = SuiteOptions {
        j: c.j,
        k: c.k,
        symbol_a: c.symbol_a.as_ref().map(|_| vertical_symbol(c)).transpose()?,
        symbol_b: c.symbol_b.as_ref().map(|_| radial_symbol(c)).transpose()?,
        chain: chain(c)?,
        catalog,
        pairs,
        seed,
        tol: c.tol,
        continuity,
        spectral,
    };
    let records = run_suite(suite, &opts)?;
    let failures = records.iter().filter(|r| !r.pass).count();
    let mut text = String::new();
    for r in &records {
        let _ = writeln!(text, "{r}");
    }
    Ok((text, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv: Vec<&str> = std::iter::once("siegel-spectra").chain(args.iter().copied()).collect();
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn value_of(line: &str) -> f64 {
        let v = line.split('\t').find_map(|f| f.strip_prefix("value=")).unwrap();
        v.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let (code, out, _) = run_args(&["eval", "--symbol-a", "a1", "--at", "+inf,2", "--j", "1"]);
        assert_eq!(code, 0);
        assert!((value_of(&out) + 1.0 / 3.0).abs() < 1e-15, "{out}");
        assert!(out.contains("point=(+inf, 2)"));

        let (code, out, _) = run_args(&["eval", "--function", "gamma-b", "--symbol-b", "constant:1", "--at", "5"]);
        assert_eq!(code, 0);
        assert!((value_of(&out) - 1.0).abs() < 1e-12, "{out}");

        let (_, out, _) = run_args(&["eval", "--function", "gamma-b", "--symbol-b", "chi01", "--k", "1", "--at", "1"]);
        assert!((value_of(&out) - 0.8646647168).abs() < 1e-10, "{out}");
    }

    #[test]
    fn eval_exit_codes() {
        assert_eq!(run_args(&["eval", "--symbol-a", "a1", "--at", "1,x"]).0, 2);
        assert_eq!(run_args(&["eval", "--symbol-a", "nope", "--at", "1,1"]).0, 2);
        assert_eq!(run_args(&["eval", "--symbol-a", "chi_beta:1", "--at", "-inf,1"]).0, 3);
        assert_eq!(run_args(&["eval", "--symbol-a", "a1", "--chain", "phi", "--at", "-inf,1"]).0, 3);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn eval_through_chain_on_inserted_segment() {
        let (code, out, err) =
            run_args(&["eval", "--symbol", "chi_beta", "--beta", "1", "--chain", "upsilon:1", "--at", "-inf,1"]);
        assert_eq!(code, 0, "{err}");
        assert!((value_of(&out) - 0.5).abs() < 1e-15, "{out}");
    }

    #[test]
    fn grid_output() {
        let (code, out, _) = run_args(&["grid", "--symbol-a", "a2", "--grid", "-1:1:3,1:4:3"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "t1,t2,value");
        assert_eq!(lines.len(), 10);
        assert!(lines[1].starts_with("-1,1,"));
        assert!(lines[2].starts_with("-1,2.5,"));

        let (_, out, _) = run_args(&["grid", "--symbol-a", "a2", "--grid", "-inf:inf:3,1:4:2", "--compactified"]);
        let row = out.lines().find(|l| l.starts_with("-inf,4,")).unwrap();
        let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((v - 16.0 / 17.0).abs() < 1e-15);

        let (code, out, _) = run_args(&["grid", "--symbol-a", "a2", "--grid", "0:1:2,-2:-1:2"]);
        assert_eq!((code, out.as_str()), (0, "t1,t2,value\n"));
        assert_eq!(run_args(&["grid", "--symbol-a", "a2", "--grid", "0:1:1,1:2:2"]).0, 2);
        assert_eq!(run_args(&["grid", "--symbol-a", "a2", "--grid", "-inf:1:2,1:2:2"]).0, 2);
    }

    #[test]
    fn curve_output() {
        let (code, out, _) =
            run_args(&["curve", "--beta", "1", "--lambda0", "0", "--grid", "-50:0:100", "--with-values"]);
        assert_eq!(code, 0);
        let rows: Vec<Vec<f64>> =
            out.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 100);
        assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1]));
        let vals: Vec<f64> = rows.iter().filter(|r| r[1] > 0.0).map(|r| r[2]).collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread <= 1e-8, "{spread}");

        let (_, out, _) = run_args(&["curve", "--kind", "theta-image", "--mu", "1", "--grid", "0:100:5"]);
        let t2: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert_eq!(t2[0], 1.0);
        assert!(t2.windows(2).all(|w| w[1] < w[0]) && (t2[4] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(run_args(&["verify", "limits-b", "--catalog"]).0, 0);
        assert_eq!(run_args(&["verify", "nonsense"]).0, 2);
        let (code, out, _) = run_args(&["verify", "chain-continuity", "--symbol", "chi_beta:1", "--chain", "none"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("expect=discontinuous"));
    }

    #[test]
    fn unwritable_output() {
        let (code, _, err) = run_args(&["eval", "--symbol-a", "a1", "--at", "0,1", "--out", "/nonexistent/dir/x.txt"]);
        assert_eq!(code, 4, "{err}");
    }

    #[test]
    fn atomic_file_output() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.csv");
        let p = path.to_str().unwrap();
        assert_eq!(run_args(&["grid", "--symbol-a", "a1", "--grid", "0:1:2,1:2:2", "--out", p]).0, 0);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
