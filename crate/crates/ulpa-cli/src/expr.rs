//! The element expression grammar and its pretty-printer.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := [coeff '*'] factor ('*' factor)*
//! factor := 'p' '{' id (',' id)* '}' | 's' '[' id ']' | 's*' '[' id ']'
//! coeff  := int | int '/' int
//! ```
//!
//! Whitespace is insignificant. Ids are read greedily up to the closing
//! delimiter, so edge and vertex names may contain `@` and `-`.

use ulpa::algebra::{Lpa, LpaElem, Monomial};
use ulpa::field::Field;
use ulpa::graph::PathWord;
use ulpa::graph::VertexSet;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    P(Vec<String>),
    S(String),
    SStar(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Option<(i64, Option<i64>)>,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    /// Sign and term, in source order.
    pub terms: Vec<(bool, Term)>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, msg: impl Into<String>) -> CliError {
        CliError::parse(format!(
            "expression parse error at line {}, column {}: {}",
            self.line,
            self.col,
            msg.into()
        ))
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), CliError> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.bump();
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected '{}', found '{}'", c as char, got as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn parse_int(&mut self) -> Result<i64, CliError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    /// An id: everything up to the closing delimiter or comma, trimmed.
    fn parse_id(&mut self, closers: &[u8]) -> Result<String, CliError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if closers.contains(&c) || c == b',' {
                break;
            }
            self.bump();
        }
        let raw = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| self.error("invalid id"))?
            .trim()
            .to_string();
        if raw.is_empty() {
            Err(self.error("expected an id"))
        } else {
            Ok(raw)
        }
    }

    fn parse_factor(&mut self) -> Result<Factor, CliError> {
        self.skip_ws();
        match self.peek() {
            Some(b'p') => {
                self.bump();
                self.expect(b'{')?;
                let mut ids = vec![self.parse_id(b"}")?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.bump();
                            ids.push(self.parse_id(b"}")?);
                        }
                        Some(b'}') => {
                            self.bump();
                            break;
                        }
                        _ => return Err(self.error("expected ',' or '}' in vertex set")),
                    }
                }
                Ok(Factor::P(ids))
            }
            Some(b's') => {
                self.bump();
                self.skip_ws();
                let star = self.peek() == Some(b'*');
                if star {
                    self.bump();
                }
                self.expect(b'[')?;
                let id = self.parse_id(b"]")?;
                self.expect(b']')?;
                Ok(if star { Factor::SStar(id) } else { Factor::S(id) })
            }
            Some(c) => Err(self.error(format!("expected a factor, found '{}'", c as char))),
            None => Err(self.error("expected a factor, found end of input")),
        }
    }

    fn parse_term(&mut self) -> Result<Term, CliError> {
        self.skip_ws();
        let coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num = self.parse_int()?;
            self.skip_ws();
            let den = if self.peek() == Some(b'/') {
                self.bump();
                Some(self.parse_int()?)
            } else {
                None
            };
            Some((num, den))
        } else {
            None
        };
        let mut factors = Vec::new();
        if coeff.is_some() {
            self.skip_ws();
            // A bare coefficient is a scalar multiple of the unit.
            if self.peek() == Some(b'*') {
                self.bump();
                factors.push(self.parse_factor()?);
            }
        } else {
            factors.push(self.parse_factor()?);
        }
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.bump();
                factors.push(self.parse_factor()?);
            } else {
                break;
            }
        }
        Ok(Term { coeff, factors })
    }

    fn parse_expr(&mut self) -> Result<Expr, CliError> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.bump();
            negative = true;
        } else if self.peek() == Some(b'+') {
            self.bump();
        }
        terms.push((negative, self.parse_term()?));
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    terms.push((false, self.parse_term()?));
                }
                Some(b'-') => {
                    self.bump();
                    terms.push((true, self.parse_term()?));
                }
                Some(c) => {
                    return Err(self.error(format!("unexpected '{}'", c as char)));
                }
                None => break,
            }
        }
        Ok(Expr { terms })
    }
}

pub fn parse(src: &str) -> Result<Expr, CliError> {
    Parser::new(src).parse_expr()
}

/// Evaluate a parsed expression against the algebra. Unknown ids are
/// reported as unsupported-operation errors.
pub fn eval<F: Field>(alg: &Lpa<F>, expr: &Expr) -> Result<LpaElem<F>, CliError> {
    let g = alg.graph();
    let field = alg.field();
    let mut acc = LpaElem::zero();
    for (negative, term) in &expr.terms {
        let mut value = alg.unit();
        for factor in &term.factors {
            let next = match factor {
                Factor::P(names) => {
                    let mut set = VertexSet::new();
                    for name in names {
                        let v = g
                            .vertex_by_name(name)
                            .ok_or_else(|| CliError::unsupported(format!("unknown vertex {name}")))?;
                        set.insert(v);
                    }
                    alg.p(&set)
                }
                Factor::S(name) => {
                    let e = g
                        .edge_by_name(name)
                        .ok_or_else(|| CliError::unsupported(format!("unknown edge {name}")))?;
                    alg.s(e)
                }
                Factor::SStar(name) => {
                    let e = g
                        .edge_by_name(name)
                        .ok_or_else(|| CliError::unsupported(format!("unknown edge {name}")))?;
                    alg.s_star(e)
                }
            };
            value = alg.mul(&value, &next);
        }
        let mut coeff = match term.coeff {
            None => field.one(),
            Some((num, None)) => field.from_i64(num),
            Some((num, Some(den))) => field
                .from_ratio(num, den)
                .ok_or_else(|| CliError::unsupported("coefficient denominator is zero in this field"))?,
        };
        if *negative {
            coeff = field.neg(&coeff);
        }
        acc = alg.add(&acc, &alg.scale(&coeff, &value));
    }
    Ok(acc)
}

pub fn parse_eval<F: Field>(alg: &Lpa<F>, src: &str) -> Result<LpaElem<F>, CliError> {
    eval(alg, &parse(src)?)
}

/// Render an element in the expression grammar: terms in monomial order,
/// redundant range projections omitted, starred letters printed so the
/// text re-parses to the same monomial.
pub fn print<F: Field>(alg: &Lpa<F>, elem: &LpaElem<F>) -> String {
    let field = alg.field();
    let g = alg.graph();
    if elem.is_structurally_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in elem.terms().enumerate() {
        let (negative, magnitude) = field.render_signed(coeff);
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let body = print_monomial(alg, mono);
        if magnitude == "1" {
            out.push_str(&body);
        } else {
            out.push_str(&magnitude);
            out.push('*');
            out.push_str(&body);
        }
        let _ = g;
    }
    out
}

fn print_monomial<F: Field>(alg: &Lpa<F>, mono: &Monomial) -> String {
    let g = alg.graph();
    let eff = |w: &PathWord| match g.path_range(w) {
        Some(r) => r.clone(),
        None => g.full_vertex_set(),
    };
    let natural = eff(mono.alpha()).intersect(&eff(mono.beta()));
    let mut parts: Vec<String> = Vec::new();
    for e in mono.alpha().iter() {
        parts.push(format!("s[{}]", g.edge_name(e)));
    }
    if *mono.mid() != natural || (mono.alpha().is_empty() && mono.beta().is_empty()) {
        let names: Vec<&str> = mono.mid().iter().map(|v| g.vertex_name(v)).collect();
        parts.push(format!("p{{{}}}", names.join(",")));
    }
    for &e in mono.beta().as_slice().iter().rev() {
        parts.push(format!("s*[{}]", g.edge_name(e)));
    }
    if parts.is_empty() {
        // A full-range degree-zero monomial with nonempty words, e.g.
        // s[e]*s*[e]: words present, middle omitted; never reached with
        // both words empty.
        unreachable!("monomials always render at least one factor");
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ulpa::field::Rationals;
    use ulpa::samples;

    fn setup() -> Lpa<Rationals> {
        Lpa::new(samples::fan_and_loop(), Rationals).unwrap()
    }

    #[test]
    fn parses_and_evaluates_relations() {
        let alg = setup();
        let zero = parse_eval(&alg, "p{v} - s[e]*s*[e]").unwrap();
        assert!(alg.is_zero(&zero));
        let lhs = parse_eval(&alg, "s*[e]*s[e]").unwrap();
        let rhs = parse_eval(&alg, "p{v,w}").unwrap();
        assert!(alg.eq(&lhs, &rhs));
    }

    #[test]
    fn coefficients_parse() {
        let alg = setup();
        let a = parse_eval(&alg, "3/2*p{v} + 2*p{w} - p{v}").unwrap();
        let b = parse_eval(&alg, "1/2*p{v} + 2*p{w}").unwrap();
        assert!(alg.eq(&a, &b));
        // A bare coefficient scales the unit.
        let two = parse_eval(&alg, "2").unwrap();
        let unit2 = alg.scale(&alg.field().from_i64(2), &alg.unit());
        assert!(alg.eq(&two, &unit2));
    }

    #[test]
    fn print_reparses_to_equal_element() {
        let alg = setup();
        for src in [
            "p{v} + p{w}",
            "s[e]*s[f]",
            "s[e]*p{w}*s*[e]",
            "-3*s[e] + 1/2*s*[f]",
            "s[e]*s[f]*s*[f]*s*[e]",
        ] {
            let elem = parse_eval(&alg, src).unwrap();
            let printed = print(&alg, &elem);
            let back = parse_eval(&alg, &printed).unwrap();
            assert!(alg.eq(&elem, &back), "{src} -> {printed}");
        }
        assert_eq!(print(&alg, &LpaElem::zero()), "0");
    }

    #[test]
    fn mul_prints_without_redundant_projection() {
        let alg = setup();
        let g = alg.graph().clone();
        let e = g.edge_by_name("e").unwrap();
        let f = g.edge_by_name("f").unwrap();
        let prod = alg.mul(&alg.s(e), &alg.s(f));
        assert_eq!(print(&alg, &prod), "s[e]*s[f]");
    }

    #[test]
    fn unknown_ids_are_unsupported() {
        let alg = setup();
        let err = parse_eval(&alg, "s[zz]").unwrap_err();
        assert_eq!(err.code, 2);
        let err = parse_eval(&alg, "p{qq}").unwrap_err();
        assert_eq!(err.code, 2);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let alg = setup();
        let err = parse_eval(&alg, "p{v} +").unwrap_err();
        assert_eq!(err.code, 1);
        assert!(err.message.contains("line 1"));
    }
}
