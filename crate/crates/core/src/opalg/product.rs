//! Normal-ordering product.
//!
//! For `A = c f p^b σ` and `B = d g p^e τ` the product is
//! `c d Σ_k C(b,k) (−iħ)^{|k|} f (∂^k g) p^{b−k+e} στ`, with every function
//! part reduced so the last coordinate has exponent at most one.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::element::{reduce_fn, Accum, Dim, Element, FnMono, OpMonomial, Term};
use super::gauss::GaussInt;

/// Term pairs above which the left factor is split across threads.
const PAR_THRESHOLD: usize = 4096;

type FnPoly = Vec<(i64, FnMono)>;

/// Per-call memo of `∂^k g`, keyed by `(g, k)`.
#[derive(Default)]
struct DerivCache {
    map: FxHashMap<(FnMono, [u8; 3]), FnPoly>,
}

impl DerivCache {
    fn get(&mut self, dim: Dim, g: FnMono, k: [u8; 3]) -> &FnPoly {
        self.map.entry((g, k)).or_insert_with(|| {
            
            derivative(dim, g, k)
        });
        &self.map[&(g, k)]
    }
}

/// `∂_i (r^s x^a) = s r^{s−2} x_i x^a + a_i r^s x^{a−e_i}`, then reduced.
fn partial(dim: Dim, poly: &FnPoly, i: usize) -> FnPoly {
    let mut raw = Vec::with_capacity(poly.len() * 2);
    for &(c, f) in poly {
        if f.r != 0 {
            let mut g = f;
            g.r -= 2;
            g.x[i] += 1;
            reduce_fn(dim, c * f.r as i64, g, &mut raw);
        }
        if f.x[i] > 0 {
            let mut g = f;
            g.x[i] -= 1;
            raw.push((c * f.x[i] as i64, g));
        }
    }
    merge(raw)
}

fn merge(mut raw: FnPoly) -> FnPoly {
    raw.sort_unstable_by_key(|a| a.1);
    let mut out: FnPoly = Vec::with_capacity(raw.len());
    for (c, f) in raw {
        match out.last_mut() {
            Some((lc, lf)) if *lf == f => *lc += c,
            _ => out.push((c, f)),
        }
    }
    out.retain(|(c, _)| *c != 0);
    out
}

fn derivative(dim: Dim, g: FnMono, k: [u8; 3]) -> FnPoly {
    let mut poly = vec![(1i64, g)];
    for (i, &ki) in k.iter().enumerate() {
        for _ in 0..ki {
            poly = partial(dim, &poly, i);
        }
    }
    poly
}

fn binom(n: u8, k: u8) -> i64 {
    let mut c = 1i64;
    for j in 0..k as i64 {
        c = c * (n as i64 - j) / (j + 1);
    }
    c
}

fn multiply_terms(dim: Dim, left: &[Term], right: &[Term]) -> Accum {
    let mut acc = Accum::default();
    let mut cache = DerivCache::default();
    let mut buf: FnPoly = Vec::new();
    for ta in left {
        let pa = ta.mono.p;
        let fa = ta.mono.fn_part();
        for tb in right {
            let (phase, pauli) = ta.mono.pauli.mul(tb.mono.pauli);
            let cab = &ta.coeff * &tb.coeff;
            if cab.is_zero() {
                continue;
            }
            let fb = tb.mono.fn_part();
            for k0 in 0..=pa[0] {
                for k1 in 0..=pa[1] {
                    for k2 in 0..=pa[2] {
                        let k = [k0, k1, k2];
                        let kk = (k0 + k1 + k2) as u32;
                        let bin = binom(pa[0], k0) * binom(pa[1], k1) * binom(pa[2], k2);
                        let g = GaussInt::minus_i_pow(kk).mul(phase).scale(bin);
                        let p = [
                            pa[0] - k0 + tb.mono.p[0],
                            pa[1] - k1 + tb.mono.p[1],
                            pa[2] - k2 + tb.mono.p[2],
                        ];
                        let derivs = cache.get(dim, fb, k);
                        for &(c1, h) in derivs {
                            buf.clear();
                            let prod = FnMono {
                                r: fa.r + h.r,
                                x: [fa.x[0] + h.x[0], fa.x[1] + h.x[1], fa.x[2] + h.x[2]],
                            };
                            reduce_fn(dim, c1, prod, &mut buf);
                            for &(c2, f) in &buf {
                                let mono = OpMonomial { r_pow: f.r, x: f.x, p, pauli };
                                acc.add_scaled(mono, &cab, g.scale(c2), kk as u8);
                            }
                        }
                    }
                }
            }
        }
    }
    acc
}

/// `a · b`; both factors must share a dimension.
pub(crate) fn product(a: &Element, b: &Element) -> Element {
    debug_assert_eq!(a.dim(), b.dim());
    let dim = a.dim();
    let (left, right) = (a.terms(), b.terms());
    if left.is_empty() || right.is_empty() {
        return Element::zero(dim);
    }
    if left.len() * right.len() < PAR_THRESHOLD || left.len() < 2 {
        return multiply_terms(dim, left, right).into_element(dim);
    }
    let chunk = left.len().div_ceil(rayon::current_num_threads().max(1) * 2).max(1);
    let parts: Vec<Accum> = left.par_chunks(chunk).map(|c| multiply_terms(dim, c, right)).collect();
    let mut acc = Accum::default();
    for part in parts {
        acc.merge(part);
    }
    acc.into_element(dim)
}
