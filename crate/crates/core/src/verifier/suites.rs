use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::coalgebra::{heisenberg_relations, sl2_relations};
use crate::models::{
    algebraic_hamiltonian, casimirs_3d, conjugate_by_integer_gauge, ladder_lowering, ladder_raising, lhat,
    radial_family_2d, Catalog, CatalogKey, CatalogName as N, ModelError,
};
use crate::opalg::{q, Bindings, Dim, Element, GaussianRational, ScalarPoly, Symbol};
use crate::Error;

use super::closure::{solve_closure_coefficients, ClosureFit};
use super::{Diagnosis, Diagnostic, Relation, Report, SuiteReport};

/// Named relation suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    Sl2(u8),
    HeisMixed(u8),
    O3_2D,
    Shape2D,
    Intertwine(u8),
    LadderSq,
    Fund3D,
    Conserve3D,
    PolyAlg,
    SpecialGamma,
}

impl SuiteId {
    pub fn all() -> Vec<SuiteId> {
        use SuiteId::*;
        vec![
            Sl2(1),
            Sl2(2),
            Sl2(3),
            HeisMixed(1),
            HeisMixed(2),
            HeisMixed(3),
            O3_2D,
            Shape2D,
            Intertwine(2),
            Intertwine(3),
            LadderSq,
            Fund3D,
            Conserve3D,
            PolyAlg,
            SpecialGamma,
        ]
    }

    /// Parse one id, or a family name (`SL2`, `HEIS_MIXED`, `INTERTWINE`)
    /// expanding to all its members.
    pub fn parse_selection(s: &str) -> Result<Vec<SuiteId>, Error> {
        let s = s.trim();
        let family: Vec<SuiteId> = SuiteId::all()
            .into_iter()
            .filter(|id| id.to_string().split('(').next() == Some(s) && id.to_string() != s)
            .collect();
        if !family.is_empty() {
            return Ok(family);
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteId::Sl2(n) => write!(f, "SL2({n})"),
            SuiteId::HeisMixed(n) => write!(f, "HEIS_MIXED({n})"),
            SuiteId::O3_2D => write!(f, "O3_2D"),
            SuiteId::Shape2D => write!(f, "SHAPE_2D"),
            SuiteId::Intertwine(n) => write!(f, "INTERTWINE({n})"),
            SuiteId::LadderSq => write!(f, "LADDER_SQ"),
            SuiteId::Fund3D => write!(f, "FUND_3D"),
            SuiteId::Conserve3D => write!(f, "CONSERVE_3D"),
            SuiteId::PolyAlg => write!(f, "POLY_ALG"),
            SuiteId::SpecialGamma => write!(f, "SPECIAL_GAMMA"),
        }
    }
}

impl FromStr for SuiteId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::all()
            .into_iter()
            .find(|id| id.to_string() == s.trim())
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

// ---------------------------------------------------------------------------
// helpers

fn cat() -> &'static Catalog {
    Catalog::global()
}

fn op(name: N) -> Result<Element, Error> {
    Ok((*cat().op(name)?).clone())
}

fn scalar(dim: Dim, re: (i128, i128), im: (i128, i128), hbar_pow: u8) -> Element {
    let c = ScalarPoly::monomial([hbar_pow, 0, 0, 0], GaussianRational::new(q(re.0, re.1), q(im.0, im.1)));
    Element::scalar(dim, c)
}

/// `k·iħ` as an element.
fn i_hbar(dim: Dim, k: i128) -> Element {
    scalar(dim, (0, 1), (k, 1), 1)
}

fn hbar(dim: Dim, num: i128, den: i128) -> Element {
    scalar(dim, (num, den), (0, 1), 1)
}

fn eps(i: usize, j: usize) -> Option<(usize, i128)> {
    match (i, j) {
        (1, 2) => Some((3, 1)),
        (2, 3) => Some((1, 1)),
        (3, 1) => Some((2, 1)),
        (2, 1) => Some((3, -1)),
        (3, 2) => Some((1, -1)),
        (1, 3) => Some((2, -1)),
        _ => None,
    }
}

fn rel(
    id: impl Into<String>,
    f: impl Fn() -> Result<(Element, Element), Error> + Send + Sync + 'static,
) -> Relation {
    Relation::lazy(id, move || {
        let (l, r) = f()?;
        Ok(l.try_sub(&r)?)
    })
}

fn commutes(id: impl Into<String>, a: N, b: N) -> Relation {
    Relation::lazy(id, move || Ok(op(a)?.commutator(&op(b)?)?))
}

fn diag(id: impl Into<String>, f: impl Fn() -> Result<Diagnosis, Error> + Send + Sync + 'static) -> Diagnostic {
    Diagnostic::lazy(id, f)
}

// ---------------------------------------------------------------------------
// suites

/// Run one suite.
pub fn run_suite(id: SuiteId) -> Result<SuiteReport, Error> {
    let (rels, diags) = match id {
        SuiteId::Sl2(n) => (sl2_relations(n as usize)?, Vec::new()),
        SuiteId::HeisMixed(n) => (heisenberg_relations(n as usize)?, Vec::new()),
        SuiteId::O3_2D => o3_2d(),
        SuiteId::Shape2D => shape_2d()?,
        SuiteId::Intertwine(n) => intertwine(n)?,
        SuiteId::LadderSq => ladder_sq(),
        SuiteId::Fund3D => fund_3d(),
        SuiteId::Conserve3D => conserve_3d(),
        SuiteId::PolyAlg => poly_alg(),
        SuiteId::SpecialGamma => special_gamma(),
    };
    Ok(SuiteReport::run(id.to_string(), rels, diags))
}

/// Run several suites concurrently; the report keeps the given order.
pub fn run_suites(ids: &[SuiteId]) -> Result<Report, Error> {
    use rayon::prelude::*;
    let suites = ids.par_iter().map(|&id| run_suite(id)).collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new(suites))
}

type Checks = (Vec<Relation>, Vec<Diagnostic>);

fn o3_2d() -> Checks {
    let d = Dim::TWO;
    let mut rels = vec![
        commutes("H_R1", N::H2Gauged, N::R1_2D),
        commutes("H_L", N::H2Gauged, N::L2Gauged),
        commutes("H_R2", N::H2Gauged, N::R2_2D),
        rel("R1_L", move || Ok((op(N::R1_2D)?.commutator(&op(N::L2Gauged)?)?, i_hbar(d, -1) * op(N::R2_2D)?))),
        rel("R2_L", move || Ok((op(N::R2_2D)?.commutator(&op(N::L2Gauged)?)?, i_hbar(d, 1) * op(N::R1_2D)?))),
        rel("R1_R2", move || {
            let rhs = i_hbar(d, -2) * op(N::L2Gauged)? * op(N::H2Gauged)?;
            Ok((op(N::R1_2D)?.commutator(&op(N::R2_2D)?)?, rhs))
        }),
        rel("X_is_R1", || Ok((op(N::X2D)?, op(N::R1_2D)?))),
        rel("Y_is_R2", || Ok((op(N::Y2D)?, op(N::R2_2D)?))),
        rel("hamiltonian_adjoint", || Ok((op(N::H2Gauged)?.adjoint(), op(N::H2Gauged)?))),
    ];
    // integer gauge powers reproduce the gauged operators at γ = k
    for k in [1i128, 2, -1] {
        let at = move || Bindings::new().with(Symbol::Gamma, q(k, 1));
        rels.push(rel(format!("gauge_H_k{k}"), move || {
            let lhs = conjugate_by_integer_gauge(&op(N::H2Coulomb)?, q(k, 1))?;
            Ok((lhs, op(N::H2Gauged)?.substitute_params(&at())))
        }));
        rels.push(rel(format!("gauge_L_k{k}"), move || {
            let l0 = op(N::L2Gauged)?.substitute_params(&Bindings::new().with(Symbol::Gamma, q(0, 1)));
            Ok((conjugate_by_integer_gauge(&l0, q(k, 1))?, op(N::L2Gauged)?.substitute_params(&at())))
        }));
        for (name, r) in [("R1", N::R1_2D), ("R2", N::R2_2D)] {
            rels.push(rel(format!("gauge_{name}_k{k}"), move || {
                let r0 = op(r)?.substitute_params(&Bindings::new().with(Symbol::Gamma, q(0, 1)));
                Ok((conjugate_by_integer_gauge(&r0, q(k, 1))?, op(r)?.substitute_params(&at())))
            }));
        }
    }
    let diags = vec![diag("runge_lenz_reading", || {
        let plain = op(N::H2Gauged)?.commutator(&op(N::R1_2D)?)?;
        let squared = op(N::H2Gauged)?.commutator(&op(N::R1_2DAlt)?)?;
        let chosen = match (plain.is_zero(), squared.is_zero()) {
            (true, false) => "gauged angular momentum (first power)",
            (false, true) => "squared angular momentum",
            (true, true) => "both readings commute",
            (false, false) => "neither reading commutes",
        };
        Ok(Diagnosis {
            residual_terms: Some(squared.len()),
            detail: format!(
                "selected: {chosen}; [H, R1] terms: first power {}, squared {}",
                plain.len(),
                squared.len()
            ),
        })
    })];
    (rels, diags)
}

/// Grid `Π_s {v_s,0..v_s,deg_s}` over the given symbols.
fn sample_grid(axes: &[(Symbol, Vec<crate::opalg::Rational>)]) -> Vec<Bindings> {
    let mut out = vec![Bindings::new()];
    for (sym, vals) in axes {
        out = out
            .into_iter()
            .flat_map(|b| vals.iter().map(move |v| b.clone().with(*sym, *v)))
            .collect();
    }
    out
}

fn shape_2d() -> Result<Checks, Error> {
    let d = Dim::TWO;
    let m = ScalarPoly::m();
    let m1 = &m + &ScalarPoly::int(1);
    let k_sq = || {
        let k = &(&ScalarPoly::m() + &ScalarPoly::rational(q(1, 2))) + &ScalarPoly::gamma();
        &k * &k
    };
    let cleared_norm = move || -> (Element, Element) {
        let (a, ad, h) = radial_family_2d(&ScalarPoly::m());
        let two_h2 = &ScalarPoly::int(2) * &(&ScalarPoly::hbar() * &ScalarPoly::hbar());
        let alpha_sq = &ScalarPoly::alpha() * &ScalarPoly::alpha();
        (&ad * &a, h.scale(&(&two_h2 * &k_sq())) + Element::scalar(d, alpha_sq))
    };
    let mut rels = vec![
        rel("cleared_adag_a", move || Ok(cleared_norm())),
        {
            let (m, m1) = (m.clone(), m1.clone());
            rel("cleared_a_H", move || {
                let (a, _, h) = radial_family_2d(&m);
                let (_, _, h1) = radial_family_2d(&m1);
                Ok((&a * &h, &h1 * &a))
            })
        },
        {
            let (m, m1) = (m.clone(), m1.clone());
            rel("cleared_H_adag", move || {
                let (_, ad, h) = radial_family_2d(&m);
                let (_, _, h1) = radial_family_2d(&m1);
                Ok((&h * &ad, &ad * &h1))
            })
        },
        rel("cleared_adjoint_pair", || Ok((op(N::A2M)?.adjoint(), op(N::A2MDag)?))),
    ];

    // sample counts exceed the parameter degrees of the cleared relation
    let (l, r) = cleared_norm();
    let (a, _, h) = radial_family_2d(&m);
    let (_, _, h1) = radial_family_2d(&m1);
    let shape_l = &a * &h;
    let shape_r = &h1 * &a;
    let degree = |s: Symbol| {
        [&l, &r, &shape_l, &shape_r].iter().map(|e| e.param_degree(s)).max().unwrap_or(0) as usize
    };
    let axes: Vec<(Symbol, Vec<crate::opalg::Rational>)> = vec![
        (Symbol::Hbar, (0..=degree(Symbol::Hbar)).map(|i| q(i as i128 + 1, 2)).collect()),
        (Symbol::Gamma, (0..=degree(Symbol::Gamma)).map(|i| q(2 * i as i128 + 1, 7)).collect()),
        (Symbol::M, (0..=degree(Symbol::M)).map(|i| q(i as i128, 1)).collect()),
    ];
    let samples = sample_grid(&axes);
    let raw = |b: &Bindings, dag: bool| -> Result<Element, Error> {
        let mut key = CatalogKey::new(if dag { N::A2MRawDag } else { N::A2MRaw });
        key.params = b.clone();
        Ok((*cat().get(&key)?).clone())
    };
    let bumped = |b: &Bindings| {
        let mut b1 = b.clone();
        b1.set(Symbol::M, b.get(Symbol::M).unwrap() + q(1, 1));
        b1
    };
    rels.push(Relation::sampled("sampled_adag_a", samples.clone(), move |b| {
        let (bm, bd) = (raw(b, false)?, raw(b, true)?);
        let (_, _, h) = radial_family_2d(&ScalarPoly::m());
        let h = h.substitute_params(b);
        let hbar = b.get(Symbol::Hbar).unwrap();
        let k = b.get(Symbol::M).unwrap() + q(1, 2) + b.get(Symbol::Gamma).unwrap();
        let shift = ScalarPoly::alpha() * ScalarPoly::rational(q(1, 1) / (hbar * hbar * k * k));
        let rhs = h.scale(&ScalarPoly::int(2)) + Element::scalar(d, &shift * &ScalarPoly::alpha());
        Ok((&bd * &bm - rhs).substitute_params(b))
    }));
    rels.push(Relation::sampled("sampled_a_H", samples.clone(), move |b| {
        let bm = raw(b, false)?;
        let (_, _, h) = radial_family_2d(&ScalarPoly::m());
        let (hm, hm1) = (h.substitute_params(b), h.substitute_params(&bumped(b)));
        Ok((&bm * &hm - &hm1 * &bm).substitute_params(b))
    }));
    rels.push(Relation::sampled("sampled_H_adag", samples, move |b| {
        let bd = raw(b, true)?;
        let (_, _, h) = radial_family_2d(&ScalarPoly::m());
        let (hm, hm1) = (h.substitute_params(b), h.substitute_params(&bumped(b)));
        Ok((&hm * &bd - &bd * &hm1).substitute_params(b))
    }));
    Ok((rels, Vec::new()))
}

fn intertwine(n: u8) -> Result<Checks, Error> {
    let dim = Dim::new(n as usize)?;
    if n < 2 {
        return Err(Error::UnknownSuite(format!("INTERTWINE({n})")));
    }
    let shifted = move |k: i128| -> Result<Element, Error> { Ok(lhat(dim)? + hbar(dim, k, 1)) };
    let mut rels = vec![
        rel("A_H", move || {
            let l = lhat(dim)?;
            let a = ladder_lowering(dim, &l)?;
            Ok((&a * &algebraic_hamiltonian(dim, &l)?, algebraic_hamiltonian(dim, &shifted(1)?)? * &a))
        }),
        rel("H_Adag", move || {
            let l = lhat(dim)?;
            let ad = ladder_raising(dim, &l)?;
            Ok((algebraic_hamiltonian(dim, &l)? * &ad, &ad * &algebraic_hamiltonian(dim, &shifted(1)?)?))
        }),
    ];
    if n == 2 {
        rels.push(rel("H_alg_is_gauged_H", || Ok((op(N::H2Alg)?, op(N::H2Gauged)?))));
    } else {
        rels.push(rel("H_alg_is_H3", || Ok((op(N::H3Alg)?, op(N::H3)?))));
        rels.push(rel("gamma0_is_hydrogen", || {
            let b = Bindings::new().with(Symbol::Gamma, q(0, 1));
            let o = Dim::THREE;
            let p2 = (1..=3).fold(Element::zero(o), |a, i| a + Element::p(o, i) * Element::p(o, i));
            let hyd = p2.scale_rational(q(1, 2)) - Element::symbol(o, Symbol::Alpha) * Element::r_pow(o, -1);
            Ok((op(N::H3)?.substitute_params(&b), hyd))
        }));
    }
    let diags = vec![diag("adjoint_of_A", move || {
        let l = lhat(dim)?;
        let res = ladder_lowering(dim, &l)?.adjoint() - ladder_raising(dim, &l)?;
        Ok(Diagnosis::residual("adjoint(√2A) − √2A†", &res))
    })];
    Ok((rels, diags))
}

fn ladder_sq() -> Checks {
    let d3 = Dim::THREE;
    let mut rels = Vec::new();
    for k in 1..=3u8 {
        rels.push(rel(format!("Lsq_Lminus{k}"), move || {
            let l = op(N::L3Op)?;
            let lm = op(N::LMinus3(k))?;
            let s = &l - &hbar(d3, 1, 1);
            Ok((&(&l * &l) * &lm, &lm * &(&s * &s)))
        }));
        rels.push(rel(format!("Lsq_Lplus{k}"), move || {
            let l = op(N::L3Op)?;
            let lp = op(N::LPlus3(k))?;
            let s = &l + &hbar(d3, 1, 1);
            Ok((&(&l * &l) * &lp, &lp * &(&s * &s)))
        }));
        rels.push(rel(format!("L_Lplus{k}"), move || {
            let lp = op(N::LPlus3(k))?;
            Ok((op(N::L3Op)?.commutator(&lp)?, &hbar(d3, 1, 1) * &lp))
        }));
        rels.push(rel(format!("L_Lminus{k}"), move || {
            let lm = op(N::LMinus3(k))?;
            Ok((op(N::L3Op)?.commutator(&lm)?, &hbar(d3, -1, 1) * &lm))
        }));
    }
    let d2 = Dim::TWO;
    rels.push(rel("L_Lplus_2D", move || {
        let (l, lp) = (op(N::L2Gauged)?, op(N::LPlus2D)?);
        Ok((&l * &lp, &lp * &(&l + &hbar(d2, 1, 1))))
    }));
    rels.push(rel("L_Lminus_2D", move || {
        let (l, lm) = (op(N::L2Gauged)?, op(N::LMinus2D)?);
        Ok((&l * &lm, &lm * &(&l - &hbar(d2, 1, 1))))
    }));
    rels.push(rel("Lminus_Lplus_2D", move || Ok((op(N::LMinus2D)? * op(N::LPlus2D)?, Element::one(d2)))));
    (rels, Vec::new())
}

fn fund_3d() -> Checks {
    let d = Dim::THREE;
    let mut rels = Vec::new();
    for j in 1..=3u8 {
        for k in 1..=3u8 {
            let sym = move || -> Result<Element, Error> {
                let (a, b) = (op(N::J(j))?, op(N::J(k))?);
                Ok((&a * &b + &b * &a).scale_rational(q(-1, 2)))
            };
            rels.push(rel(format!("Lminus{j}_Lplus{k}"), move || {
                let mut rhs = sym()?;
                if let Some((l, s)) = eps(j as usize, k as usize) {
                    let jl = op(N::J(l as u8))?;
                    rhs = rhs + &(&jl * &(op(N::SigmaDotL)? + hbar(d, 2, 1)))
                        .scale(&ScalarPoly::constant(GaussianRational::new(q(0, 1), q(-s, 1))));
                }
                if j == k {
                    rhs = rhs + op(N::JSq)? + &hbar(d, 1, 1) * &(op(N::SigmaDotL)? + hbar(d, 3, 2));
                }
                Ok((op(N::LMinus3(j))? * op(N::LPlus3(k))?, rhs))
            }));
            rels.push(rel(format!("Lplus{j}_Lminus{k}"), move || {
                let mut rhs = sym()?;
                if let Some((l, s)) = eps(j as usize, k as usize) {
                    let jl = op(N::J(l as u8))?;
                    rhs = rhs
                        + (&jl * &op(N::SigmaDotL)?)
                            .scale(&ScalarPoly::constant(GaussianRational::new(q(0, 1), q(s, 1))));
                }
                if j == k {
                    // the diagonal shift enters with a minus sign
                    rhs = rhs + op(N::JSq)? - &hbar(d, 1, 1) * &(op(N::SigmaDotL)? + hbar(d, 1, 2));
                }
                Ok((op(N::LPlus3(j))? * op(N::LMinus3(k))?, rhs))
            }));
        }
    }
    let norm = move |shift: i128, half: i128| -> Result<(Element, Element), Error> {
        let l = op(N::L3Op)? + hbar(d, shift, 1);
        let (a, ad) = (ladder_lowering(d, &l)?, ladder_raising(d, &l)?);
        let lhs = if shift == 0 { &ad * &a } else { &a * &ad };
        let hg = ScalarPoly::hbar() * ScalarPoly::gamma();
        let m = op(N::L3Op)? + hbar(d, half, 2) + Element::scalar(d, hg);
        let alpha_sq = ScalarPoly::alpha() * ScalarPoly::alpha();
        let rhs = (&m * &m).scale_rational(q(2, 1)) * op(N::H3)? + Element::scalar(d, alpha_sq);
        Ok((lhs, rhs))
    };
    rels.push(rel("Adag_A", move || norm(0, 1)));
    rels.push(rel("A_Adag_shifted", move || norm(-1, -1)));
    for (name, ctor) in [("Lplus_dot_J", N::LPlus3 as fn(u8) -> N), ("Lminus_dot_J", N::LMinus3)] {
        rels.push(Relation::lazy(name, move || {
            let mut acc = Element::zero(d);
            for k in 1..=3u8 {
                acc = acc + op(ctor(k))? * op(N::J(k))?;
            }
            Ok(acc)
        }));
    }
    let diags = (1..=3u8)
        .map(|j| {
            diag(format!("Lplus{j}_Lminus{j}_positive_shift"), move || {
                let a = op(N::J(j))?;
                let rhs = op(N::JSq)? - &a * &a + &hbar(d, 1, 1) * &(op(N::SigmaDotL)? + hbar(d, 1, 2));
                let res = op(N::LPlus3(j))? * op(N::LMinus3(j))? - rhs;
                Ok(Diagnosis::residual("diagonal with +ħ(σ·L + ħ/2)", &res))
            })
        })
        .collect();
    (rels, diags)
}

fn conserve_3d() -> Checks {
    let mut rels = Vec::new();
    for i in 1..=3u8 {
        rels.push(commutes(format!("H_J{i}"), N::H3, N::J(i)));
    }
    for j in 1..=3u8 {
        rels.push(commutes(format!("H_X{j}"), N::H3, N::X(j)));
        rels.push(commutes(format!("H_Y{j}"), N::H3, N::Y(j)));
    }
    rels.push(commutes("H_sigma_dot_L", N::H3, N::SigmaDotL));
    rels.push(rel("H_hermitian", || Ok((op(N::H3)?.adjoint(), op(N::H3)?))));
    rels.push(Relation::lazy("H_casimir3", || Ok(op(N::H3)?.commutator(&casimirs_3d()?[1])?)));
    let g0 = || Bindings::new().with(Symbol::Gamma, q(0, 1));
    for (name, idx) in [("H_casimir2_left_gamma0", 0usize), ("H_casimir2_right_gamma0", 2)] {
        rels.push(Relation::lazy(name, move || {
            let h = op(N::H3)?.substitute_params(&g0());
            Ok(h.commutator(&casimirs_3d()?[idx])?)
        }));
    }

    let mut diags = Vec::new();
    for (name, idx) in [("H_casimir2_left", 0usize), ("H_casimir2_right", 2)] {
        diags.push(diag(name, move || {
            let res = op(N::H3)?.commutator(&casimirs_3d()?[idx])?;
            Ok(Diagnosis::residual("[H, partial Casimir] at symbolic γ", &res))
        }));
    }
    for j in 1..=3u8 {
        diags.push(diag(format!("H_X_RUNGE{j}"), move || {
            let res = op(N::H3)?.commutator(&op(N::XRunge(j))?)?;
            Ok(Diagnosis::residual("[H, X_RUNGE]", &res))
        }));
        diags.push(diag(format!("H_X_EXPLICIT{j}"), move || {
            let res = op(N::H3)?.commutator(&op(N::XExplicit(j))?)?;
            Ok(Diagnosis::residual("[H, X_EXPLICIT]", &res))
        }));
        for (label, a, b) in [
            ("X_vs_X_RUNGE", N::X(j), N::XRunge(j)),
            ("X_vs_X_EXPLICIT", N::X(j), N::XExplicit(j)),
            ("X_RUNGE_vs_X_EXPLICIT", N::XRunge(j), N::XExplicit(j)),
        ] {
            diags.push(diag(format!("{label}{j}"), move || {
                let res = op(a)? - op(b)?;
                Ok(Diagnosis::residual("difference", &res))
            }));
        }
    }
    (rels, diags)
}

/// `H^a (σ·L)^b` for the exponents admitted by the closure fits.
fn hs_monomials(max_a: u32, max_b: u32) -> Result<Vec<(String, Element)>, Error> {
    let (h, s) = (op(N::H3)?, op(N::SigmaDotL)?);
    let mut out = Vec::new();
    for a in 0..=max_a {
        for b in 0..=max_b {
            out.push((format!("H^{a}*(sigma.L)^{b}"), h.pow(a) * s.pow(b)));
        }
    }
    Ok(out)
}

type FFit = Arc<(ClosureFit, Element)>;
type XyFit = Arc<(ClosureFit, Element, Element)>;

fn index_error(msg: String) -> Error {
    Error::Model(ModelError::Domain(msg))
}

/// `F̂` from `[A_i, A_j] = −iħ ε_ijk 𝒥_k F̂` for `A = X` or `Y`, `i ≠ j`;
/// returns the fit and the rebuilt `F̂`. Results are memoized.
pub fn fit_f(use_y: bool, i: u8, j: u8) -> Result<FFit, Error> {
    static CACHE: [OnceLock<FFit>; 18] = [const { OnceLock::new() }; 18];
    let (k, s) = eps(i as usize, j as usize).ok_or_else(|| index_error(format!("fit_f needs i ≠ j in 1..=3, got ({i}, {j})")))?;
    let slot = &CACHE[usize::from(use_y) * 9 + (i as usize - 1) * 3 + (j as usize - 1)];
    if let Some(v) = slot.get() {
        return Ok(v.clone());
    }
    let a = if use_y { N::Y } else { N::X };
    let target = op(a(i))?.commutator(&op(a(j))?)?;
    let pref = &i_hbar(Dim::THREE, -s) * &op(N::J(k as u8))?;
    let mono = hs_monomials(2, 3)?;
    let basis: Vec<_> = mono.iter().map(|(l, m)| (l.clone(), &pref * m)).collect();
    let fit = solve_closure_coefficients(&target, &basis);
    let factors: Vec<Element> = mono.into_iter().map(|(_, m)| m).collect();
    let fhat = fit.combine(&factors);
    Ok(slot.get_or_init(|| Arc::new((fit, fhat))).clone())
}

/// Fit of `[X_i, Y_j]` against `S_ij H^a (σ·L)^b` and, for `i = j`,
/// `H^a (σ·L)^b`, with `S_ij = 𝒥_i𝒥_j + 𝒥_j𝒥_i`. Returns the fit, the
/// combined factor of `S_ij` and `Ĝ`. Results are memoized.
pub fn fit_xy(i: u8, j: u8) -> Result<XyFit, Error> {
    static CACHE: [OnceLock<XyFit>; 9] = [const { OnceLock::new() }; 9];
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(index_error(format!("fit_xy needs indices in 1..=3, got ({i}, {j})")));
    }
    let slot = &CACHE[(i as usize - 1) * 3 + (j as usize - 1)];
    if let Some(v) = slot.get() {
        return Ok(v.clone());
    }
    let d = Dim::THREE;
    let target = op(N::X(i))?.commutator(&op(N::Y(j))?)?;
    let (ji, jj) = (op(N::J(i))?, op(N::J(j))?);
    let sij = &ji * &jj + &jj * &ji;
    let mono = hs_monomials(2, 4)?;
    let mut basis: Vec<(String, Element)> =
        mono.iter().map(|(l, m)| (format!("S_ij*{l}"), &sij * m)).collect();
    let mut sym_f: Vec<Element> = mono.iter().map(|(_, m)| m.clone()).collect();
    let mut g_f: Vec<Element> = vec![Element::zero(d); mono.len()];
    if i == j {
        for (l, m) in &mono {
            basis.push((l.clone(), m.clone()));
            sym_f.push(Element::zero(d));
            g_f.push(m.clone());
        }
    }
    let fit = solve_closure_coefficients(&target, &basis);
    let sym = fit.combine(&sym_f);
    let g = fit.combine(&g_f);
    Ok(slot.get_or_init(|| Arc::new((fit, sym, g))).clone())
}

/// `iħ(σ·L + ħ(γ + ½))H`
fn printed_xy_factor() -> Result<Element, Error> {
    let d = Dim::THREE;
    let hg = ScalarPoly::hbar() * (ScalarPoly::gamma() + ScalarPoly::rational(q(1, 2)));
    Ok(i_hbar(d, 1) * (op(N::SigmaDotL)? + Element::scalar(d, hg)) * op(N::H3)?)
}

fn poly_alg() -> Checks {
    let d = Dim::THREE;
    let mut rels = Vec::new();
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            if let Some((k, s)) = eps(i as usize, j as usize) {
                if i < j {
                    rels.push(rel(format!("J{i}_J{j}"), move || {
                        Ok((op(N::J(i))?.commutator(&op(N::J(j))?)?, i_hbar(d, s) * op(N::J(k as u8))?))
                    }));
                }
                for (name, v) in [("X", N::X as fn(u8) -> N), ("Y", N::Y)] {
                    rels.push(rel(format!("{name}{i}_J{j}"), move || {
                        Ok((op(v(i))?.commutator(&op(N::J(j))?)?, i_hbar(d, s) * op(v(k as u8))?))
                    }));
                }
            } else {
                for (name, v) in [("X", N::X as fn(u8) -> N), ("Y", N::Y)] {
                    rels.push(Relation::lazy(format!("{name}{i}_J{j}"), move || {
                        Ok(op(v(i))?.commutator(&op(N::J(j))?)?)
                    }));
                }
            }
        }
    }
    for i in 1..=3u8 {
        rels.push(commutes(format!("J{i}_sigma_dot_L"), N::J(i), N::SigmaDotL));
        rels.push(rel(format!("X{i}_sigma_dot_L"), move || {
            Ok((op(N::X(i))?.commutator(&op(N::SigmaDotL)?)?, i_hbar(d, -1) * op(N::Y(i))?))
        }));
        rels.push(rel(format!("Y{i}_sigma_dot_L"), move || {
            Ok((op(N::Y(i))?.commutator(&op(N::SigmaDotL)?)?, i_hbar(d, 1) * op(N::X(i))?))
        }));
    }
    rels.push(commutes("H_sigma_dot_L", N::H3, N::SigmaDotL));
    for (i, j) in [(1u8, 2u8), (2, 3), (3, 1)] {
        for (name, use_y) in [("X", false), ("Y", true)] {
            rels.push(Relation::lazy(format!("{name}{i}_{name}{j}_closure"), move || {
                Ok(fit_f(use_y, i, j)?.0.leftover.clone())
            }));
            rels.push(rel(format!("{name}{i}_{name}{j}_F_matches"), move || {
                Ok((fit_f(use_y, i, j)?.1.clone(), op(N::FPoly)?))
            }));
        }
    }
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            rels.push(Relation::lazy(format!("X{i}_Y{j}_closure"), move || Ok(fit_xy(i, j)?.0.leftover.clone())));
            rels.push(rel(format!("X{i}_Y{j}_sym_factor_matches"), move || {
                Ok((fit_xy(i, j)?.1.clone(), printed_xy_factor()?))
            }));
        }
    }
    let mut diags = vec![diag("F_hat", || {
        Ok(Diagnosis::note(fit_f(false, 1, 2)?.0.summary()))
    })];
    for i in 1..=3u8 {
        diags.push(diag(format!("G_hat_vs_printed_{i}"), move || {
            let fitted = fit_xy(i, i)?;
            let (fit, g) = (&fitted.0, &fitted.2);
            let res = g - &op(N::GPoly)?;
            let verdict = if res.is_zero() { "fitted G equals the printed G" } else { "fitted G differs from the printed G" };
            Ok(Diagnosis::residual(format!("{verdict}; fit {}", fit.summary()), &res))
        }));
    }
    (rels, diags)
}

fn special_gamma() -> Checks {
    let mut rels = Vec::new();
    for j in 1..=3u8 {
        for (name, v) in [("X", N::X as fn(u8) -> N), ("Y", N::Y)] {
            rels.push(Relation::lazy(format!("{name}{j}_third_order_symbolic"), move || {
                let deg = op(v(j))?.max_p_degree();
                // residual is nonzero exactly when the p-degree is not 3
                Ok(Element::scalar(Dim::THREE, ScalarPoly::int(deg as i128 - 3)))
            }));
        }
    }
    let mut diags = Vec::new();
    for (label, g) in [("0", q(0, 1)), ("1/2", q(1, 2)), ("1", q(1, 1))] {
        diags.push(diag(format!("p_degree_gamma_{label}"), move || {
            let b = Bindings::new().with(Symbol::Gamma, g);
            let mut parts = Vec::new();
            for j in 1..=3u8 {
                for (name, v) in [("X", N::X as fn(u8) -> N), ("Y", N::Y)] {
                    let e = op(v(j))?.substitute_params(&b);
                    let top = e.terms().iter().filter(|t| t.mono.p_degree() == e.max_p_degree()).count();
                    parts.push(format!("{name}{j}: degree {} ({top} top terms)", e.max_p_degree()));
                }
            }
            Ok(Diagnosis::note(parts.join(", ")))
        }));
    }
    (rels, diags)
}
