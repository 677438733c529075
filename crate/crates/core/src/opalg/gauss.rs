//! Exact complex rationals `a + b i` with `a, b ∈ ℚ`.
//!
//! Components are `Ratio<i128>`, which keeps denominators positive and in
//! lowest terms. Overflow panics (overflow checks are enabled in every
//! profile of this workspace), so a result is either exact or absent.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::OpAlgError;

/// Exact rational number used throughout the crate.
pub type Rational = Ratio<i128>;

/// Shorthand for `num/den` as a [`Rational`].
pub fn q(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(n: i128) -> Self {
        Self::real(Rational::from_integer(n))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    /// `|z|²`
    pub fn norm_sqr(&self) -> Rational {
        self.re * self.re + self.im * self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: self.re / n, im: -self.im / n })
    }

    pub fn scale(&self, k: Rational) -> Self {
        Self { re: self.re * k, im: self.im * k }
    }

    /// Multiply by a Gaussian integer given as `(re, im)`.
    pub fn mul_gauss_int(&self, g: GaussInt) -> Self {
        let (a, b) = (Rational::from_integer(g.0 as i128), Rational::from_integer(g.1 as i128));
        Self {
            re: self.re * a - self.im * b,
            im: self.re * b + self.im * a,
        }
    }

    /// Approximate value as `(re, im)` floats.
    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

/// Gaussian integer `(re, im)`; used for the phases and binomials produced
/// while normal ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussInt(pub i64, pub i64);

impl GaussInt {
    pub const ONE: GaussInt = GaussInt(1, 0);

    pub fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }

    pub fn scale(self, k: i64) -> GaussInt {
        GaussInt(self.0 * k, self.1 * k)
    }

    /// `(-i)^k`
    pub fn minus_i_pow(k: u32) -> GaussInt {
        match k % 4 {
            0 => GaussInt(1, 0),
            1 => GaussInt(0, -1),
            2 => GaussInt(-1, 0),
            _ => GaussInt(0, 1),
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parse `p`, `-p`, `p/q` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, OpAlgError> {
    let s = s.trim();
    let bad = || OpAlgError::Parse(format!("invalid rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// `re`, `imi` or `re+imi` / `re-imi`; e.g. `-1/2`, `3/4i`, `1-2i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                fmt_rational(&self.im, f)?;
                write!(f, "i")
            }
            (false, false) => {
                fmt_rational(&self.re, f)?;
                if self.im.is_positive() {
                    write!(f, "+")?;
                }
                fmt_rational(&self.im, f)?;
                write!(f, "i")
            }
        }
    }
}

impl FromStr for GaussianRational {
    type Err = OpAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.strip_suffix('i') {
            None => Ok(Self::real(parse_rational(s)?)),
            Some(body) => {
                // split at the last sign that is not the leading one
                let split = body
                    .char_indices()
                    .skip(1)
                    .filter(|(_, c)| *c == '+' || *c == '-')
                    .map(|(k, _)| k)
                    .last();
                match split {
                    Some(k) => {
                        let re = parse_rational(&body[..k])?;
                        let im_str = &body[k..];
                        let im = parse_rational(im_str.strip_prefix('+').unwrap_or(im_str))?;
                        Ok(Self { re, im })
                    }
                    None => Ok(Self { re: Rational::zero(), im: parse_rational(body)? }),
                }
            }
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= o.re;
        self.im -= o.im;
    }
}
