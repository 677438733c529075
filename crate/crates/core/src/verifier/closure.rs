//! Exact fit of a commutator against a list of basis operators with
//! coefficients polynomial in the parameters.
//!
//! Every catalog operator is homogeneous in two gradings: the scaling
//! weight `s + |x| − |p| − deg α` and the ħ weight `deg ħ + |p| + 2 deg α`.
//! Matching both fixes the powers of ħ and α in each coefficient, so only
//! the γ dependence is unknown; it is solved for by exact elimination.

use std::collections::BTreeMap;


use crate::opalg::{Element, GaussianRational, OpMonomial, Powers, ScalarPoly, Symbol};

/// Result of [`solve_closure_coefficients`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureFit {
    /// One coefficient per basis label, in basis order.
    pub coefficients: Vec<(String, ScalarPoly)>,
    /// `target − Σ c_k B_k`, exact.
    pub leftover: Element,
}

impl ClosureFit {
    pub fn closed(&self) -> bool {
        self.leftover.is_zero()
    }

    pub fn coefficient(&self, label: &str) -> Option<&ScalarPoly> {
        self.coefficients.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }

    /// `Σ c_k F_k` for caller-supplied factors, e.g. to rebuild a fitted
    /// polynomial without its common prefactor.
    pub fn combine(&self, factors: &[Element]) -> Element {
        let dim = self.leftover.dim();
        self.coefficients
            .iter()
            .zip(factors)
            .fold(Element::zero(dim), |acc, ((_, c), f)| acc + f.scale(c))
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| format!("{l}: {c}"))
            .collect();
        format!("{{{}}} leftover_terms={}", parts.join("; "), self.leftover.len())
    }
}

fn homogeneous_weight(e: &Element) -> Option<(i32, i32)> {
    let w = e.term_weights();
    let first = *w.first()?;
    w.iter().all(|&x| x == first).then_some(first)
}

type RowKey = (OpMonomial, Powers);

fn sparse(e: &Element) -> BTreeMap<RowKey, GaussianRational> {
    let mut m = BTreeMap::new();
    for t in e.terms() {
        for (pw, c) in t.coeff.terms() {
            m.insert((t.mono, *pw), c.clone());
        }
    }
    m
}

/// Express `target` as `Σ c_k basis_k` with each `c_k` a polynomial in
/// `(ħ, α, γ)`. Basis elements whose weights cannot match get a zero
/// coefficient; unconstrained directions are set to zero. The leftover is
/// always recomputed exactly, so an inconsistent system shows up as a
/// nonzero leftover rather than an error.
pub fn solve_closure_coefficients(target: &Element, basis: &[(String, Element)]) -> ClosureFit {
    let zero_fit = |leftover: Element| ClosureFit {
        coefficients: basis.iter().map(|(l, _)| (l.clone(), ScalarPoly::zero())).collect(),
        leftover,
    };
    if target.is_zero() {
        return zero_fit(target.clone());
    }
    let Some((st, ht)) = homogeneous_weight(target) else {
        return zero_fit(target.clone());
    };
    let gamma_deg = target.param_degree(Symbol::Gamma) as usize;

    // candidate columns: (basis index, scalar prefactor, column element)
    let mut cols: Vec<(usize, ScalarPoly, Element)> = Vec::new();
    for (k, (_, b)) in basis.iter().enumerate() {
        let Some((sb, hb)) = homogeneous_weight(b) else { continue };
        let v = sb - st;
        let u = ht - hb - 2 * v;
        if v < 0 || u < 0 {
            continue;
        }
        for w in 0..=gamma_deg {
            let pw: Powers = [u as u8, v as u8, w as u8, 0];
            let s = ScalarPoly::monomial(pw, GaussianRational::one());
            let col = b.scale(&s);
            if !col.is_zero() {
                cols.push((k, s, col));
            }
        }
    }

    let ncols = cols.len();
    let col_maps: Vec<_> = cols.iter().map(|(_, _, c)| sparse(c)).collect();
    let tgt_map = sparse(target);
    let mut keys: Vec<RowKey> = col_maps.iter().flat_map(|m| m.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let mut rows: Vec<Vec<GaussianRational>> = keys
        .iter()
        .map(|key| {
            let mut row: Vec<GaussianRational> =
                col_maps.iter().map(|m| m.get(key).cloned().unwrap_or_else(GaussianRational::zero)).collect();
            row.push(tgt_map.get(key).cloned().unwrap_or_else(GaussianRational::zero));
            row
        })
        .collect();

    // reduced row echelon form
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r0 = 0;
    for c in 0..ncols {
        let Some(pr) = (r0..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(r0, pr);
        let inv = rows[r0][c].inv().expect("pivot is nonzero");
        for x in rows[r0].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r0].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != r0 && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push((r0, c));
        r0 += 1;
    }

    let mut coeffs: Vec<ScalarPoly> = vec![ScalarPoly::zero(); basis.len()];
    for (r, c) in pivots {
        let val = &rows[r][ncols];
        if !val.is_zero() {
            let (k, s, _) = &cols[c];
            coeffs[*k] = &coeffs[*k] + &s.scale(val);
        }
    }
    let fitted = basis
        .iter()
        .zip(&coeffs)
        .fold(Element::zero(target.dim()), |acc, ((_, b), c)| acc + b.scale(c));
    ClosureFit {
        coefficients: basis.iter().map(|(l, _)| l.clone()).zip(coeffs).collect(),
        leftover: target - &fitted,
    }
}
