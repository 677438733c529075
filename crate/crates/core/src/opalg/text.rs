//! Text form of [`Element`].
//!
//! ```text
//! dim 3
//! {(1/2)*hbar} r^-2 x(1,0,1) p(0,1,0) s3
//! ```
//!
//! The first line gives the dimension; every further line is one term with
//! its coefficient in braces and tuples of length `dim`. The single-line form
//! joins the same parts with `"; "`. Parsing canonicalizes, so any term list
//! is accepted and printing a parsed element is stable.

use std::fmt;
use std::str::FromStr;

use super::element::{Dim, Element, OpMonomial, Pauli, Term};
use super::scalar::ScalarPoly;
use super::OpAlgError;

fn write_tuple(f: &mut impl fmt::Write, name: char, v: &[u8]) -> fmt::Result {
    write!(f, " {name}(")?;
    for (k, e) in v.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

fn term_line(dim: Dim, t: &Term) -> String {
    let mut s = format!("{{{}}} r^{}", t.coeff, t.mono.r_pow);
    let n = dim.get();
    write_tuple(&mut s, 'x', &t.mono.x[..n]).expect("writing to String");
    write_tuple(&mut s, 'p', &t.mono.p[..n]).expect("writing to String");
    s.push(' ');
    s.push_str(t.mono.pauli.label());
    s
}

impl Element {
    /// One-line form, parts separated by `"; "`.
    pub fn to_line(&self) -> String {
        let mut parts = vec![format!("dim {}", self.dim())];
        parts.extend(self.terms().iter().map(|t| term_line(self.dim(), t)));
        parts.join("; ")
    }

    /// Parse either the multi-line or the one-line form.
    pub fn parse(s: &str) -> Result<Element, OpAlgError> {
        s.parse()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {}", self.dim())?;
        for t in self.terms() {
            write!(f, "\n{}", term_line(self.dim(), t))?;
        }
        Ok(())
    }
}

fn parse_tuple(tok: &str, name: char, dim: usize) -> Result<[u8; 3], OpAlgError> {
    let bad = || OpAlgError::Parse(format!("expected {name}(..) with {dim} entries, got `{tok}`"));
    let body = tok
        .strip_prefix(name)
        .and_then(|t| t.strip_prefix('('))
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let mut out = [0u8; 3];
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != dim {
        return Err(bad());
    }
    for (k, p) in parts.iter().enumerate() {
        out[k] = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(out)
}

fn parse_term(line: &str, dim: usize) -> Result<Term, OpAlgError> {
    let rest = line
        .strip_prefix('{')
        .ok_or_else(|| OpAlgError::Parse(format!("term must start with `{{`: `{line}`")))?;
    let close = rest
        .find('}')
        .ok_or_else(|| OpAlgError::Parse(format!("unclosed coefficient: `{line}`")))?;
    let coeff: ScalarPoly = rest[..close].parse()?;
    let toks: Vec<&str> = rest[close + 1..].split_whitespace().collect();
    let [r, x, p, s] = toks.as_slice() else {
        return Err(OpAlgError::Parse(format!("term needs `r^s x(..) p(..) sK`: `{line}`")));
    };
    let r_pow = r
        .strip_prefix("r^")
        .and_then(|e| e.parse::<i16>().ok())
        .ok_or_else(|| OpAlgError::Parse(format!("bad radial power `{r}`")))?;
    let pauli = s
        .strip_prefix('s')
        .and_then(|k| k.parse::<usize>().ok())
        .and_then(Pauli::from_index)
        .ok_or_else(|| OpAlgError::Parse(format!("bad Pauli label `{s}`")))?;
    Ok(Term {
        coeff,
        mono: OpMonomial { r_pow, x: parse_tuple(x, 'x', dim)?, p: parse_tuple(p, 'p', dim)?, pauli },
    })
}

impl FromStr for Element {
    type Err = OpAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(['\n', ';']).map(str::trim).filter(|l| !l.is_empty());
        let head = parts.next().ok_or_else(|| OpAlgError::Parse("empty element text".into()))?;
        let n: usize = head
            .strip_prefix("dim")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| OpAlgError::Parse(format!("expected `dim N`, got `{head}`")))?;
        let dim = Dim::new(n)?;
        let terms = parts.map(|l| parse_term(l, n)).collect::<Result<Vec<_>, _>>()?;
        Element::from_terms(dim, terms)
    }
}
