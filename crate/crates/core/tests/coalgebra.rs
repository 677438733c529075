use spinorbit::coalgebra::{
    casimir, partial_casimirs, realize_full, realize_sl2, verify_structure, CoalgebraError,
};
use spinorbit::opalg::{q, Dim, Element, GaussianRational, ScalarPoly};

fn i_hbar(k: i128, den: i128) -> Element {
    Element::scalar(
        Dim::THREE,
        ScalarPoly::constant(GaussianRational::new(q(0, 1), q(k, den))) * ScalarPoly::hbar(),
    )
}

fn hbar_sq(dim: Dim, k: i128, den: i128) -> Element {
    Element::scalar(dim, ScalarPoly::hbar() * ScalarPoly::hbar()).scale_rational(q(k, den))
}

/// `ε_ijk x_j p_k`
fn ang(i: usize) -> Element {
    let d = Dim::THREE;
    let (j, k) = ((i % 3) + 1, ((i + 1) % 3) + 1);
    &Element::x(d, j) * &Element::p(d, k) - &Element::x(d, k) * &Element::p(d, j)
}

#[test]
fn subset_validation() {
    assert_eq!(realize_sl2(Dim::TWO, &[]), Err(CoalgebraError::EmptySubset));
    assert_eq!(realize_sl2(Dim::TWO, &[3]), Err(CoalgebraError::BadIndex { index: 3, dim: 2 }));
    assert_eq!(realize_sl2(Dim::THREE, &[1, 1]), Err(CoalgebraError::DuplicateIndex(1)));
    assert!(realize_full(4).is_err());
}

#[test]
fn single_variable_generators() {
    let r = realize_full(1).unwrap();
    let (x, p) = (Element::x(Dim::ONE, 1), Element::p(Dim::ONE, 1));
    assert_eq!(r.j_plus, &p * &p);
    assert_eq!(r.j_minus, &x * &x);
    let shift = Element::scalar(
        Dim::ONE,
        ScalarPoly::constant(GaussianRational::new(q(0, 1), q(-1, 2))) * ScalarPoly::hbar(),
    );
    assert_eq!(r.j_3, &x * &p + shift);
    assert_eq!(r.n(), 1);
}

#[test]
fn sl2_brackets_on_a_subset() {
    let r = realize_sl2(Dim::THREE, &[1, 2]).unwrap();
    let [jp, jm, j3] = r.generators();
    assert_eq!(jm.commutator(jp).unwrap(), &i_hbar(4, 1) * j3);
    assert_eq!(j3.commutator(jp).unwrap(), &i_hbar(2, 1) * jp);
    assert_eq!(j3.commutator(jm).unwrap(), &i_hbar(-2, 1) * jm);
}

#[test]
fn casimir_one_variable_is_constant() {
    let c = casimir(&realize_full(1).unwrap());
    assert_eq!(c, hbar_sq(Dim::ONE, -3, 4));
}

#[test]
fn casimir_two_variables_is_angular_square() {
    let d = Dim::TWO;
    let c = casimir(&realize_full(2).unwrap());
    let l0 = &Element::x(d, 1) * &Element::p(d, 2) - &Element::x(d, 2) * &Element::p(d, 1);
    assert_eq!(c + hbar_sq(d, 1, 1), &l0 * &l0);
}

#[test]
fn casimir_three_variables_is_angular_square() {
    let d = Dim::THREE;
    let c = casimir(&realize_full(3).unwrap());
    let l_sq = (1..=3).fold(Element::zero(d), |acc, i| acc + &ang(i) * &ang(i));
    assert_eq!(c, &l_sq + &hbar_sq(d, -3, 4));
}

#[test]
fn casimirs_are_central() {
    for n in 1..=3 {
        let r = realize_full(n).unwrap();
        let c = casimir(&r);
        for g in r.generators() {
            assert!(c.commutator(g).unwrap().is_zero(), "n={n}");
        }
    }
    for subset in [&[1usize][..], &[2], &[1, 3], &[2, 3], &[1, 2, 3]] {
        let r = realize_sl2(Dim::THREE, subset).unwrap();
        let c = casimir(&r);
        for g in r.generators() {
            assert!(c.commutator(g).unwrap().is_zero(), "subset {subset:?}");
        }
    }
}

#[test]
fn partial_casimir_counts() {
    assert_eq!(partial_casimirs(3).unwrap().count(), 3);
    assert_eq!(partial_casimirs(2).unwrap().count(), 1);
    assert_eq!(partial_casimirs(1).unwrap_err(), CoalgebraError::TooFewVariables(1));
}

#[test]
fn partial_casimirs_commute_with_full_generators() {
    let cs = partial_casimirs(3).unwrap();
    let full = realize_full(3).unwrap();
    for c in cs.left.iter().chain(&cs.right) {
        for g in full.generators() {
            assert!(c.commutator(g).unwrap().is_zero());
        }
    }
    // C₍₂₎ acts on the trailing pair
    assert_eq!(cs.right[0], casimir(&realize_sl2(Dim::THREE, &[2, 3]).unwrap()));
}

#[test]
fn coproduct_is_additive() {
    let d = Dim::THREE;
    let full = realize_full(3).unwrap();
    let head = realize_sl2(d, &[1, 2]).unwrap();
    let tail = realize_sl2(d, &[3]).unwrap();
    assert_eq!(full.j_plus, &head.j_plus + &tail.j_plus);
    assert_eq!(full.j_minus, &head.j_minus + &tail.j_minus);
    assert_eq!(full.j_3, &head.j_3 + &tail.j_3);
    assert_eq!(full.j_minus, Element::r_pow(d, 2));
}

#[test]
fn structure_reports_pass() {
    for n in 1..=3 {
        let rep = verify_structure(n).unwrap();
        assert!(rep.pass, "{}", rep.to_text());
        assert!(rep.relations.iter().all(|r| r.residual_terms == 0));
    }
    let rep = verify_structure(2).unwrap();
    assert!(rep.relation("J3_p1").unwrap().pass);
    assert!(rep.relation("Jminus_Jplus").unwrap().pass);
    assert!(verify_structure(1).unwrap().relation("p1_x1").unwrap().pass);
}
