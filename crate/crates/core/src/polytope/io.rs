//! Text formats for vertex and facet files.
//!
//! ```text
//! lambda-hvm vertices v1
//! <d> <n> <count>
//! <w_0> <w_1> ... <w_{d^2n - 1}>      one line per vertex, rationals p/q
//! ```
//!
//! ```text
//! lambda-hvm facets v1
//! <d> <n> <count>
//! <label>=<r> ... ; <row entries>     one line per stabilizer state
//! ```

use std::fmt::Write as _;

use num_rational::BigRational;

use super::{LambdaHRep, PolytopeError, VertexSet};
use crate::exact_arith::parse_rational;
use crate::pauli::PhasePoint;

const VERTEX_HEADER: &str = "lambda-hvm vertices v1";
const FACET_HEADER: &str = "lambda-hvm facets v1";

pub fn write_vertices(v: &VertexSet) -> String {
    let s = v.space();
    let mut out = format!("{VERTEX_HEADER}\n{} {} {}\n", s.d(), s.n(), v.len());
    for a in 0..v.len() {
        let line: Vec<String> = v.w(a).iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

fn fmt_err(line: usize, msg: &str) -> PolytopeError {
    PolytopeError::Format(format!("line {line}: {msg}"))
}

/// `(d, n, count, body lines with their line numbers)`.
type Header = (u32, usize, usize, Vec<(usize, String)>);

fn header(text: &str, tag: &str) -> Result<Header, PolytopeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or_else(|| fmt_err(1, "empty file"))?;
    if first != tag {
        return Err(fmt_err(ln, &format!("expected header {tag:?}")));
    }
    let (ln, dims) = lines.next().ok_or_else(|| fmt_err(2, "missing dimensions"))?;
    let nums: Vec<usize> = dims
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| fmt_err(ln, "bad integer")))
        .collect::<Result<_, _>>()?;
    if nums.len() != 3 {
        return Err(fmt_err(ln, "expected `d n count`"));
    }
    let body: Vec<(usize, String)> = lines.collect();
    if body.len() != nums[2] {
        return Err(fmt_err(ln, &format!("count {} but {} entries", nums[2], body.len())));
    }
    Ok((nums[0] as u32, nums[1], nums[2], body))
}

/// Reads a vertex file and certifies every entry against `h`.
pub fn read_vertices(text: &str, h: &LambdaHRep) -> Result<VertexSet, PolytopeError> {
    let (d, n, _, body) = header(text, VERTEX_HEADER)?;
    let s = h.space();
    if d != s.d() || n != s.n() {
        return Err(PolytopeError::Format(format!(
            "file is for d={d} n={n}, expected d={} n={}",
            s.d(),
            s.n()
        )));
    }
    let mut rays = Vec::with_capacity(body.len());
    for (ln, line) in &body {
        let w: Vec<BigRational> = line
            .split_whitespace()
            .map(|t| parse_rational(t).ok_or_else(|| fmt_err(*ln, &format!("bad rational {t:?}"))))
            .collect::<Result<_, _>>()?;
        if w.len() != s.size() {
            return Err(fmt_err(*ln, &format!("expected {} coordinates", s.size())));
        }
        let sum: BigRational = w.iter().sum();
        if sum != BigRational::from_integer(1.into()) {
            return Err(fmt_err(*ln, "coordinates do not sum to one"));
        }
        rays.push(super::integer_row(&w));
    }
    let count = rays.len();
    let v = VertexSet::from_rays(h, rays)?;
    if let Some((_, why)) = v.rejected().first() {
        return Err(PolytopeError::Format(format!("entry is not a vertex: {why}")));
    }
    if v.len() != count {
        return Err(PolytopeError::Format("duplicate vertices".into()));
    }
    Ok(v)
}

pub fn write_facets(h: &LambdaHRep) -> Result<String, PolytopeError> {
    let s = h.space();
    let rows = h.rows()?;
    let mut out = format!("{FACET_HEADER}\n{} {} {}\n", s.d(), s.n(), h.len());
    for (st, row) in h.states().iter().zip(rows) {
        let labels: Vec<String> = st
            .assignment()
            .pairs()
            .map(|(a, r)| format!("{}={}", s.point(a), r))
            .collect();
        let nums: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{} ; {}", labels.join(" "), nums.join(" "));
    }
    Ok(out)
}

/// Parsed facet file: `(d, n, [(assignment pairs, row)])`.
pub type FacetFile = (u32, usize, Vec<(Vec<(PhasePoint, u32)>, Vec<i64>)>);

pub fn read_facets(text: &str) -> Result<FacetFile, PolytopeError> {
    let (d, n, _, body) = header(text, FACET_HEADER)?;
    let mut out = Vec::with_capacity(body.len());
    for (ln, line) in &body {
        let (lhs, rhs) = line
            .split_once(';')
            .ok_or_else(|| fmt_err(*ln, "missing `;`"))?;
        let pairs = lhs
            .split_whitespace()
            .map(|t| {
                let (p, r) = t.rsplit_once('=').ok_or_else(|| fmt_err(*ln, "missing `=`"))?;
                let p = PhasePoint::parse(p, d).map_err(|e| fmt_err(*ln, &e.to_string()))?;
                let r = r.parse().map_err(|_| fmt_err(*ln, "bad value"))?;
                Ok((p, r))
            })
            .collect::<Result<Vec<_>, PolytopeError>>()?;
        let row = rhs
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| fmt_err(*ln, "bad integer")))
            .collect::<Result<Vec<i64>, _>>()?;
        out.push((pairs, row));
    }
    Ok((d, n, out))
}
