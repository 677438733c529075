use spinorbit::models::{
    conjugate_by_integer_gauge, lhat, radial_hamiltonian, Branch, Catalog, CatalogKey, CatalogName,
    ModelError, Params,
};
use spinorbit::opalg::{q, Bindings, Dim, Element, ScalarPoly, Symbol};

fn op(name: CatalogName) -> Element {
    Catalog::global().op(name).unwrap().as_ref().clone()
}

fn d3_ang(i: usize) -> Element {
    let d = Dim::THREE;
    let (j, k) = ((i % 3) + 1, ((i + 1) % 3) + 1);
    &Element::x(d, j) * &Element::p(d, k) - &Element::x(d, k) * &Element::p(d, j)
}

#[test]
fn names_round_trip() {
    let all = CatalogName::all();
    assert_eq!(all.len(), 25 + 7 * 3 + 3);
    for name in all {
        assert_eq!(name.to_string().parse::<CatalogName>().unwrap(), name);
        let key = CatalogKey::new(name);
        assert_eq!(key.to_string().parse::<CatalogKey>().unwrap(), key);
    }
    assert_eq!("X_2".parse::<CatalogName>().unwrap(), CatalogName::X(2));
    assert!(matches!("X_4".parse::<CatalogName>(), Err(ModelError::UnknownKey(_))));
    assert!(matches!("NOPE".parse::<CatalogKey>(), Err(ModelError::UnknownKey(_))));
}

#[test]
fn parametrized_keys() {
    let key: CatalogKey = "A2M_RAW[hbar=1,gamma=1/3,m=2]".parse().unwrap();
    assert_eq!(key.name, CatalogName::A2MRaw);
    assert_eq!(key.params.get(Symbol::Gamma), Some(q(1, 3)));
    assert_eq!(key.to_string().parse::<CatalogKey>().unwrap(), key);
    let e = Catalog::global().get(&key).unwrap();
    assert_eq!(e.param_degree(Symbol::Gamma), 0);
    assert_eq!(e.param_degree(Symbol::M), 0);

    let missing = Catalog::new().get(&CatalogKey::new(CatalogName::A2MRaw));
    assert!(matches!(missing, Err(ModelError::MissingParameter { param: "hbar", .. })));
    assert!("A2M_RAW[q=1]".parse::<CatalogKey>().is_err());
}

#[test]
fn entries_carry_dimension_and_description() {
    let cat = Catalog::new();
    for name in [CatalogName::H2Coulomb, CatalogName::H3, CatalogName::LPlus3(1)] {
        let entry = cat.build_operator(&name.into()).unwrap();
        assert_eq!(entry.dim, name.dim());
        assert_eq!(entry.element.dim(), name.dim());
        assert!(!entry.description.is_empty());
    }
}

#[test]
fn hydrogen_limit() {
    let d = Dim::THREE;
    let h = op(CatalogName::H3).substitute_params(&Bindings::new().with(Symbol::Gamma, q(0, 1)));
    let p_sq = (1..=3).fold(Element::zero(d), |acc, i| acc + &Element::p(d, i) * &Element::p(d, i));
    let coulomb = Element::scalar(d, ScalarPoly::alpha()) * Element::r_pow(d, -1);
    assert_eq!(h, p_sq.scale_rational(q(1, 2)) - coulomb);
}

#[test]
fn lhat_square_is_angular_square_plus_quarter() {
    let d = Dim::THREE;
    let l = op(CatalogName::L3Op);
    assert_eq!(l, lhat(d).unwrap());
    let l_sq = (1..=3).fold(Element::zero(d), |acc, i| acc + &d3_ang(i) * &d3_ang(i));
    let quarter = Element::scalar(d, ScalarPoly::hbar() * ScalarPoly::hbar()).scale_rational(q(1, 4));
    assert_eq!(&l * &l, l_sq + quarter);
}

#[test]
fn angular_factors_multiply_to_one() {
    let prod = &op(CatalogName::LMinus2D) * &op(CatalogName::LPlus2D);
    assert_eq!(prod, Element::one(Dim::TWO));
    let prod = &op(CatalogName::LPlus2D) * &op(CatalogName::LMinus2D);
    assert_eq!(prod, Element::one(Dim::TWO));
}

#[test]
fn algebraic_hamiltonian_matches_spin_orbit_form() {
    assert_eq!(op(CatalogName::H3Alg), op(CatalogName::H3));
}

#[test]
fn gauge_conjugation() {
    let h0 = op(CatalogName::H2Coulomb);
    let gauged_at_one =
        op(CatalogName::H2Gauged).substitute_params(&Bindings::new().with(Symbol::Gamma, q(1, 1)));
    assert_eq!(conjugate_by_integer_gauge(&h0, q(1, 1)).unwrap(), gauged_at_one);
    assert_eq!(conjugate_by_integer_gauge(&h0, q(0, 1)).unwrap(), h0);

    let d = Dim::TWO;
    let l0 = lhat(d).unwrap();
    let two_hbar = Element::scalar(d, ScalarPoly::hbar()).scale_rational(q(2, 1));
    assert_eq!(conjugate_by_integer_gauge(&l0, q(2, 1)).unwrap(), &l0 + &two_hbar);
    assert_eq!(conjugate_by_integer_gauge(&l0, q(-1, 1)).unwrap(), &l0 - &two_hbar.scale_rational(q(1, 2)));

    assert_eq!(conjugate_by_integer_gauge(&l0, q(1, 2)), Err(ModelError::NonIntegerGauge(q(1, 2))));
    assert!(matches!(
        conjugate_by_integer_gauge(&op(CatalogName::H3), q(1, 1)),
        Err(ModelError::WrongDimension { expected: 2, got: 3 })
    ));
}

#[test]
fn cubic_integrals_have_momentum_degree_three() {
    for j in 1..=3 {
        assert_eq!(op(CatalogName::X(j)).max_p_degree(), 3);
        assert_eq!(op(CatalogName::Y(j)).max_p_degree(), 3);
    }
}

#[test]
fn dump_is_deterministic_and_parses() {
    let a = Catalog::new().dump().unwrap();
    let b = Catalog::new().dump().unwrap();
    assert_eq!(a, b);
    assert_eq!(a, Catalog::global().dump().unwrap());
    for line in a.lines() {
        let (key, body) = line.split_once('\t').unwrap();
        let name: CatalogName = key.parse().unwrap();
        assert_eq!(Element::parse(body).unwrap(), op(name), "{key}");
    }
}

#[test]
fn radial_operator_lambda() {
    let p = |gamma| Params { hbar: 1.0, alpha: 1.0, gamma };
    assert_eq!(radial_hamiltonian(Branch::Plus, 0, p(0.0)).unwrap().lambda, 0.0);
    assert_eq!(radial_hamiltonian(Branch::Plus, 1, p(0.5)).unwrap().lambda, 1.5);
    assert_eq!(radial_hamiltonian(Branch::Minus, 1, p(0.5)).unwrap().lambda, 0.5);
    assert!(radial_hamiltonian(Branch::Minus, 0, p(0.5)).is_err());
    assert!(radial_hamiltonian(Branch::Plus, 0, Params { hbar: 1.0, alpha: -1.0, gamma: 0.0 }).is_err());
}

#[test]
fn radial_operator_annihilates_hydrogen_ground_state() {
    let h = radial_hamiltonian(Branch::Plus, 0, Params::default()).unwrap();
    for r in [0.3, 1.0, 2.5] {
        let rho = (-r as f64).exp();
        let residual = h.apply(r, rho, -rho, rho) - (-0.5) * rho;
        assert!(residual.abs() < 1e-14, "r={r}: {residual}");
    }
    assert!((h.effective_potential(2.0) + 0.5).abs() < 1e-15);
}

#[test]
fn branch_labels() {
    assert_eq!(Branch::Plus.two_j(0), Some(1));
    assert_eq!(Branch::Minus.two_j(0), None);
    assert_eq!(Branch::Minus.two_j(2), Some(3));
    assert_eq!(Branch::Minus.orbital_l(3), Some(2));
    assert_eq!(Branch::Plus.orbital_l(3), Some(1));
    assert_eq!("minus".parse::<Branch>().unwrap(), Branch::Minus);
    assert!("sideways".parse::<Branch>().is_err());
}
