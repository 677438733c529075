//! Polynomials in the model parameters `ħ, α, γ, m` with Gaussian-rational
//! coefficients. These are the scalars of the operator algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::One;

use super::gauss::{parse_rational, GaussInt, GaussianRational, Rational};
use super::OpAlgError;

/// Model parameters that may appear in coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Hbar,
    Alpha,
    Gamma,
    M,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Hbar, Symbol::Alpha, Symbol::Gamma, Symbol::M];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Hbar => "hbar",
            Symbol::Alpha => "alpha",
            Symbol::Gamma => "gamma",
            Symbol::M => "m",
        }
    }

    pub fn from_name(s: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|sym| sym.name() == s)
    }
}

/// Exponent vector over `(ħ, α, γ, m)`.
pub type Powers = [u8; 4];

/// Partial assignment of exact rational values to parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Bindings {
    values: [Option<Rational>; 4],
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, sym: Symbol, value: Rational) -> Self {
        self.values[sym.index()] = Some(value);
        self
    }

    pub fn set(&mut self, sym: Symbol, value: Rational) {
        self.values[sym.index()] = Some(value);
    }

    pub fn get(&self, sym: Symbol) -> Option<Rational> {
        self.values[sym.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(Option::is_none)
    }

    pub fn bound(&self) -> impl Iterator<Item = (Symbol, Rational)> + '_ {
        Symbol::ALL.into_iter().filter_map(|s| self.get(s).map(|v| (s, v)))
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bound()
            .map(|(s, v)| format!("{}={}", s.name(), GaussianRational::real(v)))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Bindings {
    type Err = OpAlgError;

    /// Comma-separated `sym=value`, the inverse of `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut b = Bindings::new();
        for kv in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| OpAlgError::Parse(format!("expected sym=value, got `{kv}`")))?;
            let sym = Symbol::from_name(k.trim())
                .ok_or_else(|| OpAlgError::Parse(format!("unknown symbol `{}`", k.trim())))?;
            b.set(sym, parse_rational(v)?);
        }
        Ok(b)
    }
}

/// Sparse polynomial: sorted by exponent vector, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ScalarPoly {
    terms: Vec<(Powers, GaussianRational)>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussianRational::real(r))
    }

    pub fn int(n: i128) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    /// `i`
    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn monomial(powers: Powers, c: GaussianRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(powers, c)] }
        }
    }

    pub fn symbol(sym: Symbol) -> Self {
        let mut p = [0; 4];
        p[sym.index()] = 1;
        Self::monomial(p, GaussianRational::one())
    }

    pub fn hbar() -> Self {
        Self::symbol(Symbol::Hbar)
    }

    pub fn alpha() -> Self {
        Self::symbol(Symbol::Alpha)
    }

    pub fn gamma() -> Self {
        Self::symbol(Symbol::Gamma)
    }

    pub fn m() -> Self {
        Self::symbol(Symbol::M)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Powers, GaussianRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Build from arbitrary (unsorted, possibly repeated) monomials.
    pub fn from_terms(mut raw: Vec<(Powers, GaussianRational)>) -> Self {
        raw.sort_by_key(|a| a.0);
        let mut terms: Vec<(Powers, GaussianRational)> = Vec::with_capacity(raw.len());
        for (p, c) in raw {
            match terms.last_mut() {
                Some((lp, lc)) if *lp == p => *lc += &c,
                _ => terms.push((p, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Self { terms }
    }

    /// Constant coefficient if this polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::zero()),
            [(p, c)] if *p == [0; 4] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(p, a)| (*p, a * c)).collect() }
    }

    pub fn scale_rational(&self, r: Rational) -> Self {
        self.scale(&GaussianRational::real(r))
    }

    /// `self += g · ħ^shift · src`
    pub fn add_scaled(&mut self, src: &ScalarPoly, g: GaussInt, hbar_shift: u8) {
        if g.is_zero() {
            return;
        }
        for (p, c) in &src.terms {
            let mut p = *p;
            p[0] += hbar_shift;
            let c = c.mul_gauss_int(g);
            match self.terms.binary_search_by(|(q, _)| q.cmp(&p)) {
                Ok(k) => {
                    self.terms[k].1 += &c;
                    if self.terms[k].1.is_zero() {
                        self.terms.remove(k);
                    }
                }
                Err(k) => self.terms.insert(k, (p, c)),
            }
        }
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect() }
    }

    /// Exact substitution of the bound parameters.
    pub fn substitute(&self, b: &Bindings) -> Self {
        if b.is_empty() {
            return self.clone();
        }
        let raw = self
            .terms
            .iter()
            .map(|(p, c)| {
                let mut p = *p;
                let mut k = Rational::one();
                for sym in Symbol::ALL {
                    if let Some(v) = b.get(sym) {
                        let e = p[sym.index()];
                        for _ in 0..e {
                            k *= v;
                        }
                        p[sym.index()] = 0;
                    }
                }
                (p, c.scale(k))
            })
            .collect();
        Self::from_terms(raw)
    }

    /// Largest exponent of `sym` (0 for the zero polynomial).
    pub fn degree(&self, sym: Symbol) -> u8 {
        self.terms.iter().map(|(p, _)| p[sym.index()]).max().unwrap_or(0)
    }

    /// Floating-point value at `(ħ, α, γ, m)`, as `(re, im)`.
    pub fn eval_f64(&self, params: [f64; 4]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, c) in &self.terms {
            let mut w = 1.0;
            for k in 0..4 {
                w *= params[k].powi(p[k] as i32);
            }
            let (a, b) = c.to_f64();
            re += a * w;
            im += b * w;
        }
        (re, im)
    }
}

impl Add for &ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, o: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out.add_scaled(o, GaussInt::ONE, 0);
        out
    }
}

impl Sub for &ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, o: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out.add_scaled(o, GaussInt(-1, 0), 0);
        out
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly { terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect() }
    }
}

impl Mul for &ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, o: &ScalarPoly) -> ScalarPoly {
        if self.is_zero() || o.is_zero() {
            return ScalarPoly::zero();
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (pa, ca) in &self.terms {
            for (pb, cb) in &o.terms {
                let p = [pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2], pa[3] + pb[3]];
                raw.push((p, ca * cb));
            }
        }
        ScalarPoly::from_terms(raw)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarPoly {
            type Output = ScalarPoly;
            fn $m(self, o: ScalarPoly) -> ScalarPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for ScalarPoly {
    /// `(c)*hbar^2*gamma + (d)`; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (p, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for sym in Symbol::ALL {
                match p[sym.index()] {
                    0 => {}
                    1 => write!(f, "*{}", sym.name())?,
                    e => write!(f, "*{}^{}", sym.name(), e)?,
                }
            }
        }
        Ok(())
    }
}

impl FromStr for ScalarPoly {
    type Err = OpAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut raw = Vec::new();
        for mono in s.split(" + ") {
            let mono = mono.trim();
            let rest = mono
                .strip_prefix('(')
                .ok_or_else(|| OpAlgError::Parse(format!("monomial `{mono}` must start with `(`")))?;
            let close = rest
                .find(')')
                .ok_or_else(|| OpAlgError::Parse(format!("unclosed coefficient in `{mono}`")))?;
            let c: GaussianRational = rest[..close].parse()?;
            let mut powers = [0u8; 4];
            for factor in rest[close + 1..].split('*').filter(|f| !f.is_empty()) {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u8>()
                            .map_err(|_| OpAlgError::Parse(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let sym = Symbol::from_name(name)
                    .ok_or_else(|| OpAlgError::Parse(format!("unknown symbol `{name}`")))?;
                powers[sym.index()] += e;
            }
            raw.push((powers, c));
        }
        Ok(Self::from_terms(raw))
    }
}

impl From<Rational> for ScalarPoly {
    fn from(r: Rational) -> Self {
        ScalarPoly::rational(r)
    }
}

impl From<i128> for ScalarPoly {
    fn from(n: i128) -> Self {
        ScalarPoly::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::gauss::q;

    fn p(s: &str) -> ScalarPoly {
        s.parse().unwrap()
    }

    #[test]
    fn ring_basics() {
        let a = &ScalarPoly::hbar() + &ScalarPoly::gamma();
        let b = &a * &a;
        assert_eq!(b, p("(2)*hbar*gamma + (1)*gamma^2 + (1)*hbar^2"));
        assert!((&b - &b).is_zero());
    }

    #[test]
    fn substitution() {
        let f = p("(3/2)*hbar^2*gamma + (1i)*alpha");
        let b = Bindings::new().with(Symbol::Hbar, q(2, 1)).with(Symbol::Gamma, q(1, 3));
        assert_eq!(f.substitute(&b), p("(2) + (1i)*alpha"));
        assert_eq!(f.substitute(&Bindings::new()), f);
    }

    #[test]
    fn text_round_trip() {
        let f = p("(-1/2+3i)*hbar^3*m + (7)*alpha^2*gamma + (1)");
        assert_eq!(f.to_string().parse::<ScalarPoly>().unwrap(), f);
        assert_eq!(ScalarPoly::zero().to_string(), "0");
    }

    #[test]
    fn degrees() {
        let f = p("(1)*hbar^3*gamma + (2)*gamma^4");
        assert_eq!(f.degree(Symbol::Gamma), 4);
        assert_eq!(f.degree(Symbol::Hbar), 3);
        assert_eq!(f.degree(Symbol::M), 0);
    }
}
