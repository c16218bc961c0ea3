//! Text formats shared by the CLI and the test corpus: exact rationals,
//! triangle specs, lattice points, and comma-separated integer lists. All
//! parsers are total (no panics on arbitrary input) and reject anything they
//! cannot represent exactly.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::lattice::{LatticePoint, Triangle};

fn parse_err(what: &str, input: &str, why: impl AsRef<str>) -> Error {
    Error::Parse(format!("{what} {input:?}: {}", why.as_ref()))
}

/// Strict decimal integer: optional leading '-', at least one digit, no
/// whitespace, no '+', no leading-zero restrictions.
pub fn parse_int(input: &str) -> Result<Int> {
    let body = input.strip_prefix('-').unwrap_or(input);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err("integer", input, "expected decimal digits"));
    }
    input
        .parse::<Int>()
        .map_err(|e| parse_err("integer", input, e.to_string()))
}

/// `num` or `num/den` with nonzero denominator, e.g. `-5/16` or `3`.
pub fn parse_rational(input: &str) -> Result<Rat> {
    match input.split_once('/') {
        None => Ok(Rat::from(parse_int(input)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(parse_err("rational", input, "zero denominator"));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// `x,y` with integer coordinates.
pub fn parse_point(input: &str) -> Result<LatticePoint> {
    let (x, y) = input
        .split_once(',')
        .ok_or_else(|| parse_err("point", input, "expected x,y"))?;
    Ok(LatticePoint {
        x: parse_int(x)?,
        y: parse_int(y)?,
    })
}

/// Triangle spec: three vertices separated by `;`, each `x,y` with rational
/// coordinates, e.g. `-5/16,23/16;0,0;5/8,1/8`. The triangle must be
/// non-degenerate.
pub fn parse_triangle(input: &str) -> Result<Triangle> {
    let parts: Vec<&str> = input.split(';').collect();
    if parts.len() != 3 {
        return Err(parse_err(
            "triangle",
            input,
            "expected three vertices separated by ';'",
        ));
    }
    let mut vertices = Vec::with_capacity(3);
    for part in parts {
        let (x, y) = part
            .split_once(',')
            .ok_or_else(|| parse_err("vertex", part, "expected x,y"))?;
        vertices.push((parse_rational(x)?, parse_rational(y)?));
    }
    Triangle::new([
        vertices[0].clone(),
        vertices[1].clone(),
        vertices[2].clone(),
    ])
}

/// Comma-separated list of positive integers, e.g. degree lists. Empty input
/// is rejected.
pub fn parse_positive_int_list(input: &str) -> Result<Vec<Int>> {
    let mut out = Vec::new();
    for part in input.split(',') {
        let v = parse_int(part)?;
        if v <= Int::zero() {
            return Err(parse_err("list entry", part, "must be >= 1"));
        }
        out.push(v);
    }
    Ok(out)
}

/// `a,b,c,d` with positive pairwise-coprime weights and d >= 0; validation
/// of the weights happens in the lattice layer.
pub fn parse_wpp(input: &str) -> Result<(Int, Int, Int, Int)> {
    let parts: Vec<&str> = input.split(',').collect();
    if parts.len() != 4 {
        return Err(parse_err("weighted support", input, "expected a,b,c,d"));
    }
    Ok((
        parse_int(parts[0])?,
        parse_int(parts[1])?,
        parse_int(parts[2])?,
        parse_int(parts[3])?,
    ))
}

/// Canonical form: `num` when the denominator is 1, else `num/den`.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`parse_triangle`] up to vertex order (vertices print sorted).
pub fn format_triangle(t: &Triangle) -> String {
    t.vertices()
        .iter()
        .map(|(x, y)| format!("{},{}", format_rat(x), format_rat(y)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn format_point(p: &LatticePoint) -> String {
    format!("{},{}", p.x, p.y)
}
