//! Text syntax for infinite paths and twist polynomials.
//!
//! Paths are written `prefix|cycle` with comma-separated edge ids (an
//! absent `|` means a pure cycle, an empty prefix is allowed: `|f`).
//! Polynomials use `t`, integer or fractional coefficients, `^` powers,
//! and `+`/`-`, e.g. `t^2-t-1`.

use ulpa::field::Field;
use ulpa::graph::{PathWord, Ultragraph};
use ulpa::path::InfinitePath;

use crate::CliError;

pub fn parse_word(g: &Ultragraph, src: &str) -> Result<PathWord, CliError> {
    let mut edges = Vec::new();
    for part in src.split(',') {
        let name = part.trim();
        if name.is_empty() {
            continue;
        }
        let e = g
            .edge_by_name(name)
            .ok_or_else(|| CliError::unsupported(format!("unknown edge {name}")))?;
        edges.push(e);
    }
    Ok(PathWord::new(edges))
}

/// Parse `prefix|cycle` into an eventually periodic path.
pub fn parse_path(g: &Ultragraph, src: &str) -> Result<InfinitePath, CliError> {
    let (prefix_src, cycle_src) = match src.split_once('|') {
        Some((p, c)) => (p, c),
        None => ("", src),
    };
    let prefix = parse_word(g, prefix_src)?;
    let cycle = parse_word(g, cycle_src)?;
    if cycle.is_empty() {
        return Err(CliError::parse("path cycle part must be nonempty"));
    }
    InfinitePath::periodic(g, prefix, cycle)
        .map_err(|e| CliError::parse(format!("invalid path: {e}")))
}

pub fn print_word(g: &Ultragraph, w: &PathWord) -> String {
    w.iter().map(|e| g.edge_name(e).to_string()).collect::<Vec<_>>().join(",")
}

/// Canonical `prefix|cycle` text of an eventually periodic path.
pub fn print_path(g: &Ultragraph, p: &InfinitePath) -> String {
    match p.cycle_word() {
        Some(c) => format!("{}|{}", print_word(g, p.prefix_word()), print_word(g, c)),
        None => format!("<stream {}>", p.stream_ref().map_or("?", |s| s.name())),
    }
}

/// Parse a polynomial in `t` into its coefficient vector.
pub fn parse_poly<F: Field>(field: &F, src: &str) -> Result<Vec<F::Elem>, CliError> {
    let bytes = src.as_bytes();
    let mut pos = 0usize;
    let mut coeffs: Vec<F::Elem> = Vec::new();
    let err = |msg: &str| CliError::parse(format!("polynomial parse error: {msg}"));
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let parse_int = |pos: &mut usize| -> Result<i64, CliError> {
        skip_ws(pos);
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return Err(CliError::parse("polynomial parse error: expected an integer"));
        }
        std::str::from_utf8(&bytes[start..*pos])
            .unwrap()
            .parse()
            .map_err(|_| CliError::parse("polynomial parse error: integer out of range"))
    };

    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(err("empty polynomial"));
            }
            break;
        }
        let negative = match bytes[pos] {
            b'+' => {
                pos += 1;
                false
            }
            b'-' => {
                pos += 1;
                true
            }
            _ if first => false,
            c => return Err(err(&format!("expected '+' or '-', found '{}'", c as char))),
        };
        first = false;
        skip_ws(&mut pos);
        // term := coeff ['*' tpart] | tpart
        let mut coeff = if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let num = parse_int(&mut pos)?;
            skip_ws(&mut pos);
            let value = if pos < bytes.len() && bytes[pos] == b'/' {
                pos += 1;
                let den = parse_int(&mut pos)?;
                field
                    .from_ratio(num, den)
                    .ok_or_else(|| err("coefficient denominator is zero in this field"))?
            } else {
                field.from_i64(num)
            };
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            }
            Some(value)
        } else {
            None
        };
        skip_ws(&mut pos);
        let power = if pos < bytes.len() && bytes[pos] == b't' {
            pos += 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                parse_int(&mut pos)? as usize
            } else {
                1
            }
        } else {
            if coeff.is_none() {
                return Err(err("expected a coefficient or 't'"));
            }
            0
        };
        let mut value = coeff.take().unwrap_or_else(|| field.one());
        if negative {
            value = field.neg(&value);
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, field.zero());
        }
        coeffs[power] = field.add(&coeffs[power], &value);
    }
    Ok(coeffs)
}
