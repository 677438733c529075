//! Multivariable sl(2) realizations from the iterated primitive coproduct,
//! their Casimirs, and the sl(2) ⋉ Heisenberg structure relations.

use thiserror::Error;

use crate::opalg::{Dim, Element, OpAlgError, ScalarPoly};
use crate::verifier::{Relation, SuiteReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error("variable subset must be nonempty")]
    EmptySubset,
    #[error("variable index {index} invalid for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
    #[error("duplicate variable index {0}")]
    DuplicateIndex(usize),
    #[error("partial Casimirs need n in {{2, 3}}, got {0}")]
    TooFewVariables(usize),
    #[error(transparent)]
    Algebra(#[from] OpAlgError),
}

/// `(J₊, J₋, J₃)` acting on the coordinates in `subset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Realization {
    pub dim: Dim,
    pub subset: Vec<usize>,
    pub j_plus: Element,
    pub j_minus: Element,
    pub j_3: Element,
}

impl Sl2Realization {
    /// Number of variables the realization acts on.
    pub fn n(&self) -> usize {
        self.subset.len()
    }

    pub fn generators(&self) -> [&Element; 3] {
        [&self.j_plus, &self.j_minus, &self.j_3]
    }
}

fn i_hbar(k: i128, den: i128) -> ScalarPoly {
    ScalarPoly::constant(crate::opalg::GaussianRational::new(
        crate::opalg::q(0, 1),
        crate::opalg::q(k, den),
    )) * ScalarPoly::hbar()
}

/// Realization on the 1-based coordinates `subset` inside dimension `dim`:
/// `J₊ = Σ p_i²`, `J₋ = Σ x_i²`, `J₃ = Σ x_i p_i − iħ n/2`.
pub fn realize_sl2(dim: Dim, subset: &[usize]) -> Result<Sl2Realization, CoalgebraError> {
    if subset.is_empty() {
        return Err(CoalgebraError::EmptySubset);
    }
    for (k, &i) in subset.iter().enumerate() {
        if i == 0 || i > dim.get() {
            return Err(CoalgebraError::BadIndex { index: i, dim: dim.get() });
        }
        if subset[..k].contains(&i) {
            return Err(CoalgebraError::DuplicateIndex(i));
        }
    }
    let mut jp = Element::zero(dim);
    let mut jm = Element::zero(dim);
    let mut j3 = Element::scalar(dim, i_hbar(-(subset.len() as i128), 2));
    for &i in subset {
        let (x, p) = (Element::x(dim, i), Element::p(dim, i));
        jp = jp + &p * &p;
        jm = jm + &x * &x;
        j3 = j3 + &x * &p;
    }
    Ok(Sl2Realization { dim, subset: subset.to_vec(), j_plus: jp, j_minus: jm, j_3: j3 })
}

/// Realization on all coordinates `1..=n` in dimension `n`.
pub fn realize_full(n: usize) -> Result<Sl2Realization, CoalgebraError> {
    let dim = Dim::new(n)?;
    realize_sl2(dim, &(1..=n).collect::<Vec<_>>())
}

/// `C = ½(J₋J₊ + J₊J₋) − J₃²`
pub fn casimir(real: &Sl2Realization) -> Element {
    let half = ScalarPoly::rational(crate::opalg::q(1, 2));
    let sym = &real.j_minus * &real.j_plus + &real.j_plus * &real.j_minus;
    sym.scale(&half) - &real.j_3 * &real.j_3
}

/// `C⁽²⁾…C⁽ⁿ⁾` on leading index sets and `C₍₂₎…C₍ₙ₋₁₎` on trailing ones.
#[derive(Clone, Debug)]
pub struct CasimirSet {
    pub n: usize,
    pub left: Vec<Element>,
    pub right: Vec<Element>,
}

impl CasimirSet {
    pub fn count(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

pub fn partial_casimirs(n: usize) -> Result<CasimirSet, CoalgebraError> {
    if !(2..=3).contains(&n) {
        return Err(CoalgebraError::TooFewVariables(n));
    }
    let dim = Dim::new(n)?;
    let left = (2..=n)
        .map(|i| realize_sl2(dim, &(1..=i).collect::<Vec<_>>()).map(|r| casimir(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    let right = (2..n)
        .map(|i| realize_sl2(dim, &(n - i + 1..=n).collect::<Vec<_>>()).map(|r| casimir(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CasimirSet { n, left, right })
}

/// sl(2) relations, Casimir centrality and coproduct additivity of the
/// full `n`-variable realization.
pub fn sl2_relations(n: usize) -> Result<Vec<Relation>, CoalgebraError> {
    let real = realize_full(n)?;
    let dim = real.dim;
    let (jp, jm, j3) = (&real.j_plus, &real.j_minus, &real.j_3);
    let ih = |k| Element::scalar(dim, i_hbar(k, 1));
    let mut rels = vec![
        Relation::exact("J3_Jplus", j3.commutator(jp)?, &ih(2) * jp),
        Relation::exact("J3_Jminus", j3.commutator(jm)?, &ih(-2) * jm),
        Relation::exact("Jminus_Jplus", jm.commutator(jp)?, &ih(4) * j3),
    ];
    let c = casimir(&real);
    for (name, g) in [("Jplus", jp), ("Jminus", jm), ("J3", j3)] {
        rels.push(Relation::commutes(format!("casimir_{name}"), &c, g));
    }
    if n == 3 {
        rels.push(Relation::exact("Jminus_is_r2", jm.clone(), Element::r_pow(dim, 2)));
        let head = realize_sl2(dim, &[1, 2])?;
        let tail = realize_sl2(dim, &[3])?;
        for (name, whole, a, b) in [
            ("coproduct_Jplus", jp, &head.j_plus, &tail.j_plus),
            ("coproduct_Jminus", jm, &head.j_minus, &tail.j_minus),
            ("coproduct_J3", j3, &head.j_3, &tail.j_3),
        ] {
            rels.push(Relation::exact(name, whole.clone(), a + b));
        }
    }
    if n >= 2 {
        let cs = partial_casimirs(n)?;
        for (k, ck) in cs.left.iter().enumerate() {
            for (name, g) in [("Jplus", jp), ("Jminus", jm), ("J3", j3)] {
                rels.push(Relation::commutes(format!("left_casimir{}_{name}", k + 2), ck, g));
            }
        }
        for (k, ck) in cs.right.iter().enumerate() {
            for (name, g) in [("Jplus", jp), ("Jminus", jm), ("J3", j3)] {
                rels.push(Relation::commutes(format!("right_casimir{}_{name}", k + 2), ck, g));
            }
        }
    }
    Ok(rels)
}

/// The six mixed sl(2)–Heisenberg relations per coordinate and the
/// canonical commutators `[p_k, x_l] = −iħ δ_kl`.
pub fn heisenberg_relations(n: usize) -> Result<Vec<Relation>, CoalgebraError> {
    let real = realize_full(n)?;
    let dim = real.dim;
    let ih = |k| Element::scalar(dim, i_hbar(k, 1));
    let zero = Element::zero(dim);
    let mut rels = Vec::new();
    for k in 1..=n {
        let (x, p) = (Element::x(dim, k), Element::p(dim, k));
        rels.push(Relation::exact(format!("Jplus_x{k}"), real.j_plus.commutator(&x)?, &ih(-2) * &p));
        rels.push(Relation::exact(format!("Jplus_p{k}"), real.j_plus.commutator(&p)?, zero.clone()));
        rels.push(Relation::exact(format!("Jminus_x{k}"), real.j_minus.commutator(&x)?, zero.clone()));
        rels.push(Relation::exact(format!("Jminus_p{k}"), real.j_minus.commutator(&p)?, &ih(2) * &x));
        rels.push(Relation::exact(format!("J3_x{k}"), real.j_3.commutator(&x)?, &ih(-1) * &x));
        rels.push(Relation::exact(format!("J3_p{k}"), real.j_3.commutator(&p)?, &ih(1) * &p));
    }
    for k in 1..=n {
        for l in 1..=n {
            let rhs = if k == l { ih(-1) } else { zero.clone() };
            let lhs = Element::p(dim, k).commutator(&Element::x(dim, l))?;
            rels.push(Relation::exact(format!("p{k}_x{l}"), lhs, rhs));
        }
    }
    Ok(rels)
}

/// Every sl(2) and Heisenberg structure relation for `n` variables.
pub fn verify_structure(n: usize) -> Result<SuiteReport, CoalgebraError> {
    let mut rels = sl2_relations(n)?;
    rels.extend(heisenberg_relations(n)?);
    Ok(SuiteReport::from_relations(format!("STRUCTURE({n})"), rels))
}
