use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;

use super::gauss::{GaussInt, GaussianRational, Rational};
use super::scalar::{Bindings, ScalarPoly, Symbol};
use super::{product, OpAlgError};

/// Number of Cartesian coordinates an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(u8);

impl Dim {
    pub const ONE: Dim = Dim(1);
    pub const TWO: Dim = Dim(2);
    pub const THREE: Dim = Dim(3);

    pub fn new(n: usize) -> Result<Dim, OpAlgError> {
        match n {
            1..=3 => Ok(Dim(n as u8)),
            _ => Err(OpAlgError::InvalidDimension(n)),
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Index of the coordinate eliminated by `r² = Σ x_i²`.
    pub(crate) fn last(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identity or one of the three Pauli matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Option<Pauli> {
        [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z].get(k).copied()
    }

    /// `σ_a σ_b = δ_ab + i ε_abc σ_c`, returned as `(phase, σ_c)`.
    pub fn mul(self, other: Pauli) -> (GaussInt, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, s) | (s, I) => (GaussInt::ONE, s),
            (a, b) if a == b => (GaussInt::ONE, I),
            (X, Y) => (GaussInt(0, 1), Z),
            (Y, X) => (GaussInt(0, -1), Z),
            (Y, Z) => (GaussInt(0, 1), X),
            (Z, Y) => (GaussInt(0, -1), X),
            (Z, X) => (GaussInt(0, 1), Y),
            (X, Z) => (GaussInt(0, -1), Y),
            _ => unreachable!(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pauli::I => "s0",
            Pauli::X => "s1",
            Pauli::Y => "s2",
            Pauli::Z => "s3",
        }
    }
}

/// `r^s x^a` with the last coordinate's exponent at most one once reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct FnMono {
    pub r: i16,
    pub x: [u8; 3],
}

/// Operator monomial `r^s · x^a · p^b · σ`. Field order is the sort order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpMonomial {
    pub r_pow: i16,
    pub x: [u8; 3],
    pub p: [u8; 3],
    pub pauli: Pauli,
}

impl OpMonomial {
    pub const ONE: OpMonomial = OpMonomial { r_pow: 0, x: [0; 3], p: [0; 3], pauli: Pauli::I };

    pub(crate) fn fn_part(&self) -> FnMono {
        FnMono { r: self.r_pow, x: self.x }
    }

    pub fn p_degree(&self) -> u32 {
        self.p.iter().map(|&e| e as u32).sum()
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }
}

/// `coeff · r^s x^a p^b σ`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: ScalarPoly,
    pub mono: OpMonomial,
}

/// A canonical, normally ordered operator.
///
/// Terms are sorted by [`OpMonomial`] and have distinct monomials, nonzero
/// coefficients and `x_n` exponent at most one. The zero operator has no
/// terms, so structural equality is operator equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    dim: Dim,
    terms: Vec<Term>,
}

/// Unordered term accumulator used while building canonical elements.
#[derive(Default)]
pub(crate) struct Accum {
    map: FxHashMap<OpMonomial, ScalarPoly>,
}

impl Accum {
    pub fn add_scaled(&mut self, mono: OpMonomial, c: &ScalarPoly, g: GaussInt, hbar_shift: u8) {
        self.map.entry(mono).or_default().add_scaled(c, g, hbar_shift);
    }

    pub fn merge(&mut self, other: Accum) {
        for (m, c) in other.map {
            self.add_scaled(m, &c, GaussInt::ONE, 0);
        }
    }

    pub fn into_element(self, dim: Dim) -> Element {
        let mut terms: Vec<Term> = self
            .map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        terms.sort_unstable_by_key(|a| a.mono);
        Element { dim, terms }
    }
}

/// Rewrite `r^s x^a` so that the last coordinate has exponent ≤ 1, using
/// `x_n² = r² − Σ_{i<n} x_i²`. Pushes `(coef · c, mono)` pairs.
pub(crate) fn reduce_fn(dim: Dim, coef: i64, f: FnMono, out: &mut Vec<(i64, FnMono)>) {
    let l = dim.last();
    let e = f.x[l];
    if e < 2 {
        out.push((coef, f));
        return;
    }
    let mut base = f;
    base.x[l] = e % 2;
    expand_power(l, (e / 2) as u32, coef, base, out);
}

fn expand_power(l: usize, q: u32, coef: i64, base: FnMono, out: &mut Vec<(i64, FnMono)>) {
    // (r² − x_0² − … − x_{l−1}²)^q by peeling one factor at a time
    if q == 0 {
        out.push((coef, base));
        return;
    }
    let mut with_r = base;
    with_r.r += 2;
    expand_power(l, q - 1, coef, with_r, out);
    for i in 0..l {
        let mut with_x = base;
        with_x.x[i] += 2;
        expand_power(l, q - 1, -coef, with_x, out);
    }
}

impl Element {
    pub fn zero(dim: Dim) -> Element {
        Element { dim, terms: Vec::new() }
    }

    pub fn one(dim: Dim) -> Element {
        Element::scalar(dim, ScalarPoly::one())
    }

    pub fn scalar(dim: Dim, c: ScalarPoly) -> Element {
        Element::from_terms(dim, vec![Term { coeff: c, mono: OpMonomial::ONE }])
            .expect("identity monomial is valid in every dimension")
    }

    pub fn rational(dim: Dim, r: Rational) -> Element {
        Element::scalar(dim, ScalarPoly::rational(r))
    }

    pub fn symbol(dim: Dim, s: Symbol) -> Element {
        Element::scalar(dim, ScalarPoly::symbol(s))
    }

    /// Coordinate `x_i`, `i` 1-based.
    pub fn x(dim: Dim, i: usize) -> Element {
        let mut m = OpMonomial::ONE;
        m.x[Self::coord(dim, i)] = 1;
        Element::monomial(dim, ScalarPoly::one(), m)
    }

    /// Momentum `p_i = −iħ ∂_i`, `i` 1-based.
    pub fn p(dim: Dim, i: usize) -> Element {
        let mut m = OpMonomial::ONE;
        m.p[Self::coord(dim, i)] = 1;
        Element::monomial(dim, ScalarPoly::one(), m)
    }

    /// `r^s`
    pub fn r_pow(dim: Dim, s: i16) -> Element {
        let mut m = OpMonomial::ONE;
        m.r_pow = s;
        Element::monomial(dim, ScalarPoly::one(), m)
    }

    /// Pauli matrix `σ_k`, `k ∈ {1,2,3}`.
    pub fn sigma(dim: Dim, k: usize) -> Element {
        let pauli = Pauli::from_index(k).filter(|_| k >= 1).expect("sigma index must be 1, 2 or 3");
        let mut m = OpMonomial::ONE;
        m.pauli = pauli;
        Element::monomial(dim, ScalarPoly::one(), m)
    }

    fn coord(dim: Dim, i: usize) -> usize {
        assert!(i >= 1 && i <= dim.get(), "coordinate index {i} out of range for dimension {dim}");
        i - 1
    }

    /// Single term; reduced if its monomial carries `x_n^k`, `k ≥ 2`.
    pub fn monomial(dim: Dim, c: ScalarPoly, mono: OpMonomial) -> Element {
        Element::from_terms(dim, vec![Term { coeff: c, mono }]).expect("monomial must fit its dimension")
    }

    /// Canonicalize an arbitrary list of terms.
    ///
    /// Fails if a term uses a coordinate or momentum beyond `dim`.
    pub fn from_terms(dim: Dim, terms: Vec<Term>) -> Result<Element, OpAlgError> {
        let mut acc = Accum::default();
        let mut buf = Vec::new();
        for t in terms {
            for k in dim.get()..3 {
                if t.mono.x[k] != 0 || t.mono.p[k] != 0 {
                    return Err(OpAlgError::CoordinateOutOfRange { index: k + 1, dim: dim.get() });
                }
            }
            buf.clear();
            reduce_fn(dim, 1, t.mono.fn_part(), &mut buf);
            for &(c, f) in &buf {
                let mono = OpMonomial { r_pow: f.r, x: f.x, p: t.mono.p, pauli: t.mono.pauli };
                acc.add_scaled(mono, &t.coeff, GaussInt(c, 0), 0);
            }
        }
        Ok(acc.into_element(dim))
    }

    /// Re-run canonicalization. Elements are canonical on construction, so
    /// this is the identity; it exists as the explicit normal-form map.
    pub fn canonicalize(&self) -> Element {
        Element::from_terms(self.dim, self.terms.clone()).expect("canonical element stays in range")
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total momentum degree (0 for the zero operator).
    pub fn max_p_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.p_degree()).max().unwrap_or(0)
    }

    /// Highest exponent of `sym` over all coefficients.
    pub fn param_degree(&self, sym: Symbol) -> u8 {
        self.terms.iter().map(|t| t.coeff.degree(sym)).max().unwrap_or(0)
    }

    /// Constant value if the element is a parameter-free multiple of 1.
    pub fn as_scalar(&self) -> Option<ScalarPoly> {
        match self.terms.as_slice() {
            [] => Some(ScalarPoly::zero()),
            [t] if t.mono == OpMonomial::ONE => Some(t.coeff.clone()),
            _ => None,
        }
    }

    fn check_dim(&self, other: &Element) -> Result<(), OpAlgError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(OpAlgError::DimensionMismatch { left: self.dim.get(), right: other.dim.get() })
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, OpAlgError> {
        self.check_dim(other)?;
        Ok(self.merge_with(other, GaussInt::ONE))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, OpAlgError> {
        self.check_dim(other)?;
        Ok(self.merge_with(other, GaussInt(-1, 0)))
    }

    /// Normally ordered product `self · other`.
    pub fn try_mul(&self, other: &Element) -> Result<Element, OpAlgError> {
        self.check_dim(other)?;
        Ok(product::product(self, other))
    }

    /// `[self, other] = self·other − other·self`
    pub fn commutator(&self, other: &Element) -> Result<Element, OpAlgError> {
        self.check_dim(other)?;
        let ab = product::product(self, other);
        let ba = product::product(other, self);
        Ok(ab.merge_with(&ba, GaussInt(-1, 0)))
    }

    fn merge_with(&self, other: &Element, g: GaussInt) -> Element {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let scaled = |t: &Term| {
            let mut c = ScalarPoly::zero();
            c.add_scaled(&t.coeff, g, 0);
            Term { coeff: c, mono: t.mono }
        };
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.mono.cmp(&y.mono),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(scaled(&b[j]));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = a[i].coeff.clone();
                    c.add_scaled(&b[j].coeff, g, 0);
                    if !c.is_zero() {
                        out.push(Term { coeff: c, mono: a[i].mono });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Element { dim: self.dim, terms: out }
    }

    /// Multiply every coefficient by a scalar polynomial.
    pub fn scale(&self, c: &ScalarPoly) -> Element {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: &t.coeff * c, mono: t.mono })
            .filter(|t| !t.coeff.is_zero())
            .collect();
        Element { dim: self.dim, terms }
    }

    pub fn scale_rational(&self, r: Rational) -> Element {
        self.scale(&ScalarPoly::rational(r))
    }

    pub fn scale_gauss(&self, g: &GaussianRational) -> Element {
        self.scale(&ScalarPoly::constant(g.clone()))
    }

    /// Formal adjoint: anti-linear anti-automorphism fixing `x_k`, `p_k`,
    /// `r^s`, `σ_μ` and the real parameters.
    pub fn adjoint(&self) -> Element {
        let mut acc = Element::zero(self.dim);
        // group terms by (p, pauli) so each momentum block is reordered once
        let mut groups: FxHashMap<([u8; 3], Pauli), Vec<Term>> = FxHashMap::default();
        for t in &self.terms {
            let mut fmono = t.mono;
            fmono.p = [0; 3];
            fmono.pauli = Pauli::I;
            groups
                .entry((t.mono.p, t.mono.pauli))
                .or_default()
                .push(Term { coeff: t.coeff.conj(), mono: fmono });
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort();
        for key in keys {
            let (p, pauli) = key;
            let fpart = Element { dim: self.dim, terms: sorted(groups.remove(&key).unwrap()) };
            let mut pm = OpMonomial::ONE;
            pm.p = p;
            pm.pauli = pauli;
            let pm = Element::monomial(self.dim, ScalarPoly::one(), pm);
            acc = &acc + &product::product(&pm, &fpart);
        }
        acc
    }

    /// Exact substitution of bound parameters in every coefficient.
    pub fn substitute_params(&self, b: &Bindings) -> Element {
        if b.is_empty() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff.substitute(b), mono: t.mono })
            .filter(|t| !t.coeff.is_zero())
            .collect();
        Element { dim: self.dim, terms }
    }

    /// Integer power; `e^0 = 1`.
    pub fn pow(&self, n: u32) -> Element {
        let mut out = Element::one(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `(scaling weight, ħ weight)` of every term. Under `x → λx` an operator
    /// term scales as `λ^{s + |a| − |b| − deg α}`; the ħ weight counts
    /// `deg ħ + |b| + 2 deg α`. Both are additive under the product.
    pub fn term_weights(&self) -> Vec<(i32, i32)> {
        self.terms
            .iter()
            .flat_map(|t| {
                let base_s = t.mono.r_pow as i32 + t.mono.x_degree() as i32 - t.mono.p_degree() as i32;
                let base_h = t.mono.p_degree() as i32;
                t.coeff.terms().iter().map(move |(pw, _)| {
                    (base_s - pw[1] as i32, base_h + pw[0] as i32 + 2 * pw[1] as i32)
                })
            })
            .collect()
    }
}

fn sorted(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort_by_key(|a| a.mono);
    terms
}

// Operator sugar for code that has already matched dimensions; a mismatch
// here is a programming error and panics. Use the `try_*` methods on
// untrusted input.
impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        self.try_add(o).expect("dimension mismatch in Element addition")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        self.try_sub(o).expect("dimension mismatch in Element subtraction")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.try_mul(o).expect("dimension mismatch in Element product")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let terms = self.terms.iter().map(|t| Term { coeff: -&t.coeff, mono: t.mono }).collect();
        Element { dim: self.dim, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Element {
            type Output = Element;
            fn $m(self, o: Element) -> Element {
                (&self).$m(&o)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $m(self, o: &Element) -> Element {
                (&self).$m(o)
            }
        }
        impl $tr<Element> for &Element {
            type Output = Element;
            fn $m(self, o: Element) -> Element {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}
