//! Shared test support: a random element generator and an independent
//! differential-action oracle.
//!
//! The oracle never normal-orders. It applies an operator to explicit
//! spinor-valued test functions `r^t x^c χ` by direct differentiation and
//! evaluates the result exactly at points with rational `r`.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spinorbit::opalg::{
    q, Bindings, Dim, Element, GaussianRational, OpMonomial, Pauli, Rational, ScalarPoly, Symbol,
    Term,
};

pub type Spinor = [GaussianRational; 2];

/// `Σ r^t x^c χ`, unreduced.
#[derive(Clone, Debug, Default)]
pub struct Func {
    pub terms: Vec<(i32, [u32; 3], Spinor)>,
}

fn zero_spinor() -> Spinor {
    [GaussianRational::zero(), GaussianRational::zero()]
}

fn scale_spinor(s: &Spinor, c: &GaussianRational) -> Spinor {
    [&s[0] * c, &s[1] * c]
}

fn pauli_apply(p: Pauli, s: &Spinor) -> Spinor {
    let i = GaussianRational::i();
    let mi = -&i;
    match p {
        Pauli::I => s.clone(),
        Pauli::X => [s[1].clone(), s[0].clone()],
        Pauli::Y => [&mi * &s[1], &i * &s[0]],
        Pauli::Z => [s[0].clone(), -&s[1]],
    }
}

impl Func {
    pub fn basis(t: i32, c: [u32; 3], upper: bool) -> Func {
        let mut s = zero_spinor();
        s[if upper { 0 } else { 1 }] = GaussianRational::one();
        Func { terms: vec![(t, c, s)] }
    }

    fn partial(&self, i: usize) -> Func {
        let mut out = Vec::new();
        for (t, c, s) in &self.terms {
            if *t != 0 {
                let mut c2 = *c;
                c2[i] += 1;
                out.push((t - 2, c2, scale_spinor(s, &GaussianRational::from_int(*t as i128))));
            }
            if c[i] > 0 {
                let mut c2 = *c;
                c2[i] -= 1;
                out.push((*t, c2, scale_spinor(s, &GaussianRational::from_int(c[i] as i128))));
            }
        }
        Func { terms: out }
    }
}

/// Numeric value of a coefficient after binding every symbol.
pub fn bind(c: &ScalarPoly, b: &Bindings) -> GaussianRational {
    c.substitute(b).as_constant().expect("all parameters bound")
}

pub fn apply(e: &Element, f: &Func, b: &Bindings) -> Func {
    let hbar = b.get(Symbol::Hbar).unwrap();
    let minus_i_hbar = GaussianRational::new(q(0, 1), -hbar);
    let mut out = Vec::new();
    for Term { coeff, mono } in e.terms() {
        let c = bind(coeff, b);
        let mut g = f.clone();
        for i in 0..3 {
            for _ in 0..mono.p[i] {
                g = g.partial(i);
                for term in &mut g.terms {
                    term.2 = scale_spinor(&term.2, &minus_i_hbar);
                }
            }
        }
        for (t, cx, s) in g.terms {
            let cx = [cx[0] + mono.x[0] as u32, cx[1] + mono.x[1] as u32, cx[2] + mono.x[2] as u32];
            out.push((t + mono.r_pow as i32, cx, scale_spinor(&pauli_apply(mono.pauli, &s), &c)));
        }
    }
    Func { terms: out }
}

fn pow(v: Rational, e: i32) -> Rational {
    let mut acc = q(1, 1);
    let base = if e < 0 { q(1, 1) / v } else { v };
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    acc
}

pub fn eval(f: &Func, x: [Rational; 3], r: Rational) -> Spinor {
    let mut acc = zero_spinor();
    for (t, c, s) in &f.terms {
        let mut w = pow(r, *t);
        for i in 0..3 {
            w *= pow(x[i], c[i] as i32);
        }
        let w = GaussianRational::real(w);
        acc[0] += &(&s[0] * &w);
        acc[1] += &(&s[1] * &w);
    }
    acc
}

/// Points with rational `r` for the given dimension.
pub fn points(dim: Dim) -> Vec<([Rational; 3], Rational)> {
    let z = q(0, 1);
    match dim.get() {
        1 => vec![([q(3, 2), z, z], q(3, 2)), ([q(5, 1), z, z], q(5, 1))],
        2 => vec![
            ([q(3, 1), q(4, 1), z], q(5, 1)),
            ([q(-5, 1), q(12, 1), z], q(13, 1)),
            ([q(8, 1), q(-15, 1), z], q(17, 1)),
        ],
        _ => vec![
            ([q(1, 1), q(2, 1), q(2, 1)], q(3, 1)),
            ([q(2, 1), q(-3, 1), q(6, 1)], q(7, 1)),
            ([q(-1, 1), q(4, 1), q(-8, 1)], q(9, 1)),
            ([q(2, 1), q(6, 1), q(9, 1)], q(11, 1)),
        ],
    }
}

pub fn default_bindings() -> Bindings {
    Bindings::new()
        .with(Symbol::Hbar, q(2, 3))
        .with(Symbol::Alpha, q(-5, 7))
        .with(Symbol::Gamma, q(3, 4))
        .with(Symbol::M, q(1, 2))
}

pub fn test_functions(dim: Dim) -> Vec<Func> {
    let n = dim.get();
    let mut fs = vec![Func::basis(1, [0; 3], true), Func::basis(0, [0; 3], false)];
    for i in 0..n {
        let mut c = [0; 3];
        c[i] = 1;
        fs.push(Func::basis(1, c, i % 2 == 0));
        c[i] = 2;
        fs.push(Func::basis(-1, c, i % 2 == 1));
    }
    let mut c = [0; 3];
    c[n - 1] = 3;
    c[0] += 1;
    fs.push(Func::basis(3, c, true));
    fs
}

/// True when `a` and `b` act identically on every test function at every
/// point.
pub fn same_action(a: &Element, b: &Element, bnd: &Bindings) -> bool {
    let dim = a.dim();
    test_functions(dim).iter().all(|f| {
        let fa = apply(a, f, bnd);
        let fb = apply(b, f, bnd);
        points(dim).into_iter().all(|(x, r)| eval(&fa, x, r) == eval(&fb, x, r))
    })
}

/// `(a·b) f` against `a (b f)`.
pub fn product_matches_composition(a: &Element, b: &Element, ab: &Element, bnd: &Bindings) -> bool {
    let dim = a.dim();
    test_functions(dim).iter().all(|f| {
        let lhs = apply(ab, f, bnd);
        let rhs = apply(a, &apply(b, f, bnd), bnd);
        points(dim).into_iter().all(|(x, r)| eval(&lhs, x, r) == eval(&rhs, x, r))
    })
}

fn random_coeff(rng: &mut ChaCha8Rng) -> ScalarPoly {
    let mut raw = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let re = q(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let im = if rng.gen_bool(0.4) { q(rng.gen_range(-3..=3), rng.gen_range(1..=2)) } else { q(0, 1) };
        let mut pw = [0u8; 4];
        pw[0] = rng.gen_range(0..=1);
        pw[1] = rng.gen_range(0..=1) * rng.gen_range(0..=1);
        pw[2] = rng.gen_range(0..=1);
        raw.push((pw, GaussianRational::new(re, im)));
    }
    ScalarPoly::from_terms(raw)
}

/// Random element with at most `max_terms` terms and momentum degree ≤ 2.
pub fn random_element(rng: &mut ChaCha8Rng, dim: Dim, max_terms: usize) -> Element {
    let n = dim.get();
    let count = rng.gen_range(1..=max_terms);
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let mut mono = OpMonomial::ONE;
        mono.r_pow = rng.gen_range(-3..=2);
        let mut budget = 2u8;
        for i in 0..n {
            mono.x[i] = rng.gen_range(0..=2);
            let e = rng.gen_range(0..=budget);
            mono.p[i] = e;
            budget -= e;
        }
        mono.pauli = Pauli::from_index(rng.gen_range(0..4)).unwrap();
        terms.push(Term { coeff: random_coeff(rng), mono });
    }
    Element::from_terms(dim, terms).unwrap()
}

pub fn random_dim(rng: &mut ChaCha8Rng) -> Dim {
    Dim::new(rng.gen_range(1..=3)).unwrap()
}
