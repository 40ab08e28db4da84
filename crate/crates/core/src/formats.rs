//! Line-oriented text formats for the polynomial types and CSV for point
//! clouds.
//!
//! Polynomial files carry one term per line; `#` starts a comment and
//! blank lines are skipped. The part before `:` is the coefficient, the
//! part after is the integer exponent vector:
//!
//! * tropical:  `-1/2 : 1 0`
//! * complex:   `0.25 -1 : 1 0`
//! * family:    `0.25 -1 @ 3/2 : 1 0`   (the `@` field is the t-exponent)
//! * series:    `(1,0)t^-1+(0,2)t^1/2+O(t^3) : 1 0`
//!
//! Cloud CSV: two header lines (`space,n,t,seed`, then their values),
//! then one point per row — log coordinates first, arguments in radians
//! after. All writers are deterministic, so rewriting a parsed file
//! reproduces it byte for byte.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::amoeba::{CloudMeta, ComplexPolynomial, PointCloud, Space, ViroFamily};
use crate::error::{Error, Result};
use crate::exact::{Q, Z};
use crate::lattice::LatticePoint;
use crate::puiseux::{PuiseuxPolynomial, PuiseuxSeries, Truncation};
use crate::tropical::TropicalPolynomial;

/// A token paired with its 1-based column.
fn tokens_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn bad(line_no: usize, col: usize, what: impl std::fmt::Display) -> Error {
    Error::invalid(format!("line {line_no}, column {col}: {what}"))
}

/// Exact rational in the form `p` or `p/q`.
pub fn parse_rational(tok: &str) -> std::result::Result<Q, String> {
    let (numer, denom) = match tok.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (tok, None),
    };
    let n = Z::from_str(numer).map_err(|_| format!("unreadable rational '{tok}'"))?;
    let d = match denom {
        Some(d) => Z::from_str(d).map_err(|_| format!("unreadable rational '{tok}'"))?,
        None => Z::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in '{tok}'"));
    }
    Ok(Q::new(n, d))
}

/// Canonical form of a rational: `p` when integral, `p/q` otherwise.
pub fn write_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_f64(line_no: usize, col: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| bad(line_no, col, format_args!("unreadable number '{tok}'")))?;
    if !v.is_finite() {
        return Err(bad(line_no, col, format_args!("non-finite coefficient '{tok}'")));
    }
    Ok(v)
}

fn parse_exponents(line_no: usize, toks: &[(usize, &str)]) -> Result<LatticePoint> {
    if toks.is_empty() {
        return Err(bad(line_no, 1, "missing exponent vector after ':'"));
    }
    let coords = toks
        .iter()
        .map(|(col, tok)| {
            tok.parse::<i64>()
                .map_err(|_| bad(line_no, *col, format_args!("unreadable exponent '{tok}'")))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(LatticePoint::new(coords))
}

/// Splits a term line at its `:` token; yields (line_no, before, after).
fn term_lines(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens_with_cols(line);
        if toks.is_empty() {
            return None;
        }
        let split = toks.iter().position(|(_, t)| *t == ":");
        match split {
            Some(pos) => {
                let after = toks[pos + 1..].to_vec();
                let before = toks[..pos].to_vec();
                Some((i + 1, before, after))
            }
            None => Some((i + 1, toks, Vec::new())),
        }
    })
}

fn require_colon(line_no: usize, after: &[(usize, &str)]) -> Result<()> {
    if after.is_empty() {
        return Err(bad(line_no, 1, "expected 'coefficient : exponents'"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tropical polynomials
// ---------------------------------------------------------------------------

pub fn parse_tropical(text: &str) -> Result<TropicalPolynomial> {
    let mut terms = Vec::new();
    for (line_no, before, after) in term_lines(text) {
        require_colon(line_no, &after)?;
        if before.len() != 1 {
            return Err(bad(line_no, 1, "tropical terms are 'coefficient : exponents'"));
        }
        let (col, tok) = before[0];
        let c = parse_rational(tok).map_err(|e| bad(line_no, col, e))?;
        let p = parse_exponents(line_no, &after)?;
        if terms.iter().any(|(seen, _)| seen == &p) {
            return Err(bad(line_no, col, format_args!("duplicate exponent {p:?}")));
        }
        terms.push((p, c));
    }
    TropicalPolynomial::new(terms)
}

pub fn write_tropical(f: &TropicalPolynomial) -> String {
    let mut out = String::new();
    for (p, c) in f.terms() {
        out.push_str(&write_rational(c));
        out.push_str(" :");
        for e in &p.0 {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Complex polynomials
// ---------------------------------------------------------------------------

pub fn parse_complex(text: &str) -> Result<ComplexPolynomial> {
    let mut terms = Vec::new();
    for (line_no, before, after) in term_lines(text) {
        require_colon(line_no, &after)?;
        if before.len() != 2 {
            return Err(bad(line_no, 1, "complex terms are 're im : exponents'"));
        }
        let re = parse_f64(line_no, before[0].0, before[0].1)?;
        let im = parse_f64(line_no, before[1].0, before[1].1)?;
        let p = parse_exponents(line_no, &after)?;
        if terms.iter().any(|(seen, _)| seen == &p) {
            return Err(bad(line_no, before[0].0, format_args!("duplicate exponent {p:?}")));
        }
        terms.push((p, Complex64::new(re, im)));
    }
    ComplexPolynomial::new(terms)
}

pub fn write_complex(f: &ComplexPolynomial) -> String {
    let mut out = String::new();
    for (p, c) in f.terms() {
        out.push_str(&format!("{} {} :", c.re, c.im));
        for e in &p.0 {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Families with t-exponents
// ---------------------------------------------------------------------------

pub fn parse_viro(text: &str) -> Result<ViroFamily> {
    let mut base = BTreeMap::new();
    let mut exponents = BTreeMap::new();
    for (line_no, before, after) in term_lines(text) {
        require_colon(line_no, &after)?;
        if before.len() != 4 || before[2].1 != "@" {
            return Err(bad(line_no, 1, "family terms are 're im @ exponent : exponents'"));
        }
        let re = parse_f64(line_no, before[0].0, before[0].1)?;
        let im = parse_f64(line_no, before[1].0, before[1].1)?;
        let (ecol, etok) = before[3];
        let e = parse_rational(etok).map_err(|msg| bad(line_no, ecol, msg))?;
        let p = parse_exponents(line_no, &after)?;
        if base.insert(p.clone(), Complex64::new(re, im)).is_some() {
            return Err(bad(line_no, before[0].0, format_args!("duplicate exponent {p:?}")));
        }
        exponents.insert(p, e);
    }
    ViroFamily::new(base, exponents)
}

pub fn write_viro(v: &ViroFamily) -> String {
    let mut out = String::new();
    for (p, c) in v.base() {
        let e = &v.exponents()[p];
        out.push_str(&format!("{} {} @ {} :", c.re, c.im, write_rational(e)));
        for coord in &p.0 {
            out.push_str(&format!(" {coord}"));
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Polynomials over the series field
// ---------------------------------------------------------------------------

fn write_series(s: &PuiseuxSeries) -> String {
    let mut parts: Vec<String> = s
        .terms()
        .iter()
        .map(|(e, c)| format!("({},{})t^{}", c.re, c.im, write_rational(e)))
        .collect();
    if let Truncation::Order(order) = s.truncation() {
        parts.push(format!("O(t^{})", write_rational(order)));
    }
    if parts.is_empty() {
        parts.push("(0,0)t^0".to_string());
    }
    parts.join("+")
}

fn parse_series(line_no: usize, col: usize, tok: &str) -> Result<PuiseuxSeries> {
    let mut terms = Vec::new();
    let mut truncation = Truncation::Exact;
    // Split on '+' that separate terms; terms contain no '+' except a
    // leading exponent sign, which always follows '^'.
    let mut pieces = Vec::new();
    let mut start = 0usize;
    let bytes = tok.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'+' && i > 0 && bytes[i - 1] != b'^' && bytes[i - 1] != b'e' {
            pieces.push(&tok[start..i]);
            start = i + 1;
        }
    }
    pieces.push(&tok[start..]);
    for piece in pieces {
        if let Some(rest) = piece.strip_prefix("O(t^") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| bad(line_no, col, format_args!("unclosed truncation '{piece}'")))?;
            let order =
                parse_rational(inner).map_err(|msg| bad(line_no, col, msg))?;
            truncation = Truncation::Order(order);
            continue;
        }
        let rest = piece
            .strip_prefix('(')
            .ok_or_else(|| bad(line_no, col, format_args!("series term must start with '(': '{piece}'")))?;
        let (coeff_str, tail) = rest
            .split_once(')')
            .ok_or_else(|| bad(line_no, col, format_args!("unclosed coefficient in '{piece}'")))?;
        let (re_str, im_str) = coeff_str
            .split_once(',')
            .ok_or_else(|| bad(line_no, col, format_args!("coefficient must be '(re,im)': '{piece}'")))?;
        let re = parse_f64(line_no, col, re_str)?;
        let im = parse_f64(line_no, col, im_str)?;
        let exp = if tail.is_empty() {
            Q::zero()
        } else {
            let e = tail.strip_prefix("t^").ok_or_else(|| {
                bad(line_no, col, format_args!("expected 't^exponent' in '{piece}'"))
            })?;
            parse_rational(e).map_err(|msg| bad(line_no, col, msg))?
        };
        terms.push((exp, Complex64::new(re, im)));
    }
    Ok(PuiseuxSeries::from_terms(terms, truncation))
}

pub fn parse_puiseux(text: &str) -> Result<PuiseuxPolynomial> {
    let mut terms = Vec::new();
    for (line_no, before, after) in term_lines(text) {
        require_colon(line_no, &after)?;
        if before.len() != 1 {
            return Err(bad(line_no, 1, "series terms are 'series : exponents' with no spaces inside the series"));
        }
        let (col, tok) = before[0];
        let s = parse_series(line_no, col, tok)?;
        let p = parse_exponents(line_no, &after)?;
        if terms.iter().any(|(seen, _)| seen == &p) {
            return Err(bad(line_no, col, format_args!("duplicate exponent {p:?}")));
        }
        terms.push((p, s));
    }
    PuiseuxPolynomial::new(terms)
}

pub fn write_puiseux(f: &PuiseuxPolynomial) -> String {
    let mut out = String::new();
    for (p, s) in f.terms() {
        out.push_str(&write_series(s));
        out.push_str(" :");
        for e in &p.0 {
            out.push_str(&format!(" {e}"));
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Point-cloud CSV
// ---------------------------------------------------------------------------

fn space_name(space: Space) -> &'static str {
    match space {
        Space::Log => "log",
        Space::Arg => "arg",
        Space::Phase => "phase",
    }
}

pub fn write_cloud_csv(cloud: &PointCloud) -> String {
    let mut out = String::from("space,n,t,seed\n");
    out.push_str(&format!(
        "{},{},{},{}\n",
        space_name(cloud.space()),
        cloud.dim(),
        cloud.meta.t,
        cloud.meta.seed
    ));
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_cloud_csv(text: &str) -> Result<PointCloud> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid("empty cloud file"))?;
    if header.1.trim() != "space,n,t,seed" {
        return Err(Error::invalid("line 1: expected header 'space,n,t,seed'"));
    }
    let (_, meta_line) = lines
        .next()
        .ok_or_else(|| Error::invalid("line 2: missing metadata row"))?;
    let fields: Vec<&str> = meta_line.trim().split(',').collect();
    if fields.len() != 4 {
        return Err(Error::invalid("line 2: expected 'space,n,t,seed' values"));
    }
    let space = match fields[0] {
        "log" => Space::Log,
        "arg" => Space::Arg,
        "phase" => Space::Phase,
        other => return Err(Error::invalid(format!("line 2: unknown space '{other}'"))),
    };
    let n: usize = fields[1]
        .parse()
        .map_err(|_| Error::invalid(format!("line 2: unreadable dimension '{}'", fields[1])))?;
    let t: f64 = fields[2]
        .parse()
        .map_err(|_| Error::invalid(format!("line 2: unreadable t '{}'", fields[2])))?;
    let seed: u64 = fields[3]
        .parse()
        .map_err(|_| Error::invalid(format!("line 2: unreadable seed '{}'", fields[3])))?;
    let mut points = Vec::new();
    for (i, row) in lines {
        if row.trim().is_empty() {
            continue;
        }
        let coords = row
            .trim()
            .split(',')
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("line {}: unreadable value '{tok}'", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(coords);
    }
    let requested = points.len();
    PointCloud::new(space, n, points, CloudMeta { t, seed, requested, bounds: None })
}
