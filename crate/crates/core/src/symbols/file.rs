//! Symbol specification files.
//!
//! ```text
//! # ramp of width 2, shifted
//! kind = vertical
//! breakpoints = -2, 0
//! branch = 0
//! branch = s / 2 + 1
//! branch = 1
//! limit_neg_inf = 0
//! limit_pos_inf = 1
//! sup_bound = 1
//! ```
//!
//! Radial files use `kind = radial`, `limit_zero` and `limit_inf`.
//! Blank lines and `#` comments are ignored. Branches are listed left to
//! right, one per interval between breakpoints.

use std::path::Path;
use std::sync::Arc;

use super::expr::Expr;
use super::{Branch, RadialSymbol, VerticalSymbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum SymbolSpec {
    Vertical(VerticalSymbol),
    Radial(RadialSymbol),
}

struct Located<T> {
    line: usize,
    column: usize,
    value: T,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn number(line: usize, column: usize, text: &str) -> Result<f64> {
    let e = Expr::parse(text).map_err(|e| relocate(e, line, column))?;
    e.constant_value()
        .filter(|v| v.is_finite())
        .ok_or_else(|| err(line, column, format!("expected a finite constant, got '{}'", text.trim())))
}

fn relocate(e: Error, line: usize, offset: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse { line, column: offset + column - 1, message },
        other => other,
    }
}

/// Parses a symbol file. Parse errors carry 1-based line and column;
/// validation failures of the assembled symbol are reported as domain errors.
pub fn parse_symbol_file(text: &str, name: &str) -> Result<SymbolSpec> {
    let mut kind: Option<Located<String>> = None;
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut branches: Vec<Branch> = Vec::new();
    let mut limits: [Option<f64>; 4] = [None; 4];
    let mut bound: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.len() - content.trim_start().len() + 1;
            return Err(err(line, col, "expected 'key = value'"));
        };
        let key = content[..eq].trim();
        let value = &content[eq + 1..];
        let vcol = eq + 2;
        match key {
            "kind" => {
                let column = vcol + value.len() - value.trim_start().len();
                kind = Some(Located { line, column, value: value.trim().to_string() });
            }
            "breakpoints" => {
                let mut offset = vcol;
                breakpoints.clear();
                if !value.trim().is_empty() {
                    for piece in value.split(',') {
                        breakpoints.push(number(line, offset, piece)?);
                        offset += piece.len() + 1;
                    }
                }
            }
            "branch" => {
                let e = Expr::parse(value).map_err(|e| relocate(e, line, vcol))?;
                branches.push(match e.constant_value() {
                    Some(v) => Branch::Constant(v),
                    None => Branch::Expr(Arc::new(e)),
                });
            }
            "limit_neg_inf" => limits[0] = Some(number(line, vcol, value)?),
            "limit_pos_inf" => limits[1] = Some(number(line, vcol, value)?),
            "limit_zero" => limits[2] = Some(number(line, vcol, value)?),
            "limit_inf" => limits[3] = Some(number(line, vcol, value)?),
            "sup_bound" => bound = Some(number(line, vcol, value)?),
            other => {
                let col = content.len() - content.trim_start().len() + 1;
                return Err(err(line, col, format!("unknown key '{other}'")));
            }
        }
    }

    let last = text.lines().count().max(1);
    let kind = kind.ok_or_else(|| err(last, 1, "missing 'kind'"))?;
    let bound = bound.ok_or_else(|| err(last, 1, "missing 'sup_bound'"))?;
    let need = |i: usize, key: &str| limits[i].ok_or_else(|| err(last, 1, format!("missing '{key}'")));
    match kind.value.as_str() {
        "vertical" => Ok(SymbolSpec::Vertical(VerticalSymbol::new(
            name,
            breakpoints,
            branches,
            need(0, "limit_neg_inf")?,
            need(1, "limit_pos_inf")?,
            bound,
        )?)),
        "radial" => Ok(SymbolSpec::Radial(RadialSymbol::new(
            name,
            breakpoints,
            branches,
            need(2, "limit_zero")?,
            need(3, "limit_inf")?,
            bound,
        )?)),
        other => Err(err(kind.line, kind.column, format!("kind must be 'vertical' or 'radial', got '{other}'"))),
    }
}

pub fn load_symbol_file(path: &Path) -> Result<SymbolSpec> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    parse_symbol_file(&text, &format!("file:{}", path.display()))
}
