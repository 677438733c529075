use proptest::prelude::*;
use spinorbit::opalg::{q, Rational};
use spinorbit::spectral::*;

fn params(gamma: f64) -> Params {
    Params { hbar: 1.0, alpha: 1.0, gamma }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// `L_n^{(a)}(x) = Σ_k (−1)^k C(n+a, n−k) x^k / k!`
fn laguerre_sum(n: u32, a: f64, x: f64) -> f64 {
    (0..=n)
        .map(|k| {
            let binom: f64 = (1..=n - k).map(|i| (a + k as f64 + i as f64) / i as f64).product();
            let fact: f64 = (1..=k).map(f64::from).product();
            (-1f64).powi(k as i32) * binom * x.powi(k as i32) / fact
        })
        .sum()
}

#[test]
fn closed_form_energies() {
    assert_eq!(closed_form_energy(0, 1, Branch::Plus, &params(0.0)).unwrap(), -0.5);
    let e = closed_form_energy(0, 1, Branch::Plus, &params(1.0 / 3.0)).unwrap();
    assert!(close(e, -9.0 / 32.0, 1e-15), "{e}");
    // minus branch at j = ½ is the l = 1 sector: N = n + j − γ + 3/2
    let e = closed_form_energy(0, 1, Branch::Minus, &params(1.0 / 3.0)).unwrap();
    assert!(close(e, -9.0 / 50.0, 1e-15), "{e}");
    let e = closed_form_energy(2, 3, Branch::Plus, &Params { hbar: 0.5, alpha: 2.0, gamma: 0.25 }).unwrap();
    assert!(close(e, -4.0 / (2.0 * 0.25 * 4.25 * 4.25), 1e-15), "{e}");
}

#[test]
fn domain_is_enforced() {
    assert!(matches!(closed_form_energy(0, 2, Branch::Plus, &params(0.0)), Err(SpectralError::Domain(_))));
    // plus needs j > −γ − 1
    assert!(closed_form_energy(0, 1, Branch::Plus, &params(-1.6)).is_err());
    assert!(closed_form_energy(0, 1, Branch::Plus, &params(-1.4)).is_err(), "N = λ + 1 ≤ 0");
    assert!(closed_form_energy(1, 1, Branch::Plus, &params(-1.4)).is_ok());
    // minus needs j > γ − 2
    assert!(closed_form_energy(0, 1, Branch::Minus, &params(3.0)).is_err());
    assert!(closed_form_wavefunction(0, 1, Branch::Plus, &params(0.0), 0.0).is_err());
    assert!(RadialProblem::new(Branch::Minus, 0, params(0.0)).is_err());
    assert!(RadialProblem::new(Branch::Plus, 0, params(0.0)).unwrap().with_grid(None, 10).is_err());
}

#[test]
fn energies_increase_with_n() {
    for g in [0.0, 0.3, 0.5, 1.0 / 3.0] {
        for (b, two_j) in [(Branch::Plus, 1), (Branch::Plus, 3), (Branch::Minus, 1), (Branch::Minus, 5)] {
            let e: Vec<f64> = (0..6).map(|n| closed_form_energy(n, two_j, b, &params(g)).unwrap()).collect();
            assert!(e.windows(2).all(|w| w[0] < w[1]), "{e:?}");
            assert!(e.iter().all(|&x| x < 0.0));
        }
    }
}

#[test]
fn laguerre_recurrence_matches_explicit_sum() {
    for n in 0..8 {
        for a in [0.0, 0.6, 1.0, 2.5, 4.0] {
            for x in [0.0, 0.3, 1.0, 3.7, 9.0] {
                let (r, s) = (laguerre(n, a, x), laguerre_sum(n, a, x));
                assert!((r - s).abs() <= 1e-10 * s.abs().max(1.0), "n={n} a={a} x={x}: {r} vs {s}");
            }
        }
    }
}

#[test]
fn exact_laguerre_matches_float() {
    for n in 0..6 {
        let a = q(5, 3);
        let c = laguerre_poly(n, a).unwrap();
        assert_eq!(c.len(), n as usize + 1);
        for x in [0.25, 1.5, 4.0] {
            let v: f64 = c.iter().enumerate().map(|(k, ck)| {
                (*ck.numer() as f64 / *ck.denom() as f64) * f64::powi(x, k as i32)
            }).sum();
            assert!((v - laguerre(n, 5.0 / 3.0, x)).abs() < 1e-10);
        }
    }
    assert_eq!(laguerre_poly(1, q(1, 1)).unwrap(), vec![q(2, 1), q(-1, 1)]);
}

#[test]
fn wavefunction_examples() {
    let v = closed_form_wavefunction(1, 1, Branch::Plus, &params(0.0), 1.0).unwrap();
    assert!(close(v, (-0.5f64).exp(), 1e-15), "{v}");
    let v0 = closed_form_wavefunction(0, 3, Branch::Plus, &params(0.0), 2.0).unwrap();
    assert!(close(v0, 2.0 * (-1.0f64).exp(), 1e-15), "L₀ = 1: {v0}");
    for (b, two_j, g) in [(Branch::Plus, 1, 0.3), (Branch::Plus, 3, 0.5), (Branch::Minus, 1, 0.3)] {
        let r = 1e-6;
        let f = |r| closed_form_wavefunction(2, two_j, b, &params(g), r).unwrap();
        let lam = lambda(two_j, b, g);
        assert!(close(f(2.0 * r) / f(r), 2f64.powf(lam), 1e-5));
    }
}

#[test]
fn exact_residual_examples() {
    let p = |g: Rational| ExactParams { hbar: q(1, 1), alpha: q(1, 1), gamma: g };
    assert!(residual_check_exact(0, 1, Branch::Plus, &p(q(0, 1)), Centrifugal::Repulsive).unwrap().is_zero());
    let r = residual_check_exact(2, 1, Branch::Plus, &p(q(1, 3)), Centrifugal::Repulsive).unwrap();
    assert!(r.is_zero(), "{r}");
    assert_eq!(r.lambda, q(1, 3));
    assert_eq!(r.energy, q(-9, 200));
    let flipped = residual_check_exact(2, 1, Branch::Plus, &p(q(1, 3)), Centrifugal::Flipped).unwrap();
    assert!(!flipped.is_zero());
    assert!(flipped.to_string().starts_with("e^(-("));
    let s_wave = residual_check_exact(0, 1, Branch::Plus, &p(q(0, 1)), Centrifugal::Flipped).unwrap();
    assert!(s_wave.is_zero(), "λ = 0 has no centrifugal term to flip");
}

#[test]
fn exact_residual_vanishes_on_a_grid() {
    let pts = [
        ExactParams { hbar: q(2, 3), alpha: q(5, 7), gamma: q(1, 3) },
        ExactParams { hbar: q(1, 1), alpha: q(1, 1), gamma: q(1, 2) },
        ExactParams { hbar: q(3, 2), alpha: q(2, 1), gamma: q(-2, 5) },
    ];
    for p in &pts {
        for branch in [Branch::Plus, Branch::Minus] {
            for two_j in [1, 3, 5] {
                for n in 0..=5 {
                    let r = residual_check_exact(n, two_j, branch, p, Centrifugal::Repulsive).unwrap();
                    assert!(r.is_zero(), "{branch} 2j={two_j} n={n}: {r}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residual_is_zero_at_random_rationals(
        gn in -6i128..12, gd in 1i128..6, hn in 1i128..4, an in 1i128..4,
        n in 0u32..=5, l in 0u32..3, minus in any::<bool>(),
    ) {
        let branch = if minus && l > 0 { Branch::Minus } else { Branch::Plus };
        let two_j = branch.two_j(l).unwrap();
        let p = ExactParams { hbar: q(hn, 2), alpha: q(an, 3), gamma: q(gn, gd) };
        match residual_check_exact(n, two_j, branch, &p, Centrifugal::Repulsive) {
            Ok(r) => {
                prop_assert!(r.is_zero(), "{}", r);
                let flipped = residual_check_exact(n, two_j, branch, &p, Centrifugal::Flipped).unwrap();
                prop_assert_eq!(flipped.is_zero(), r.lambda * (r.lambda + q(1, 1)) == q(0, 1));
            }
            Err(SpectralError::Domain(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn spinor_norm_is_exactly_one(l in 0u32..8, k_off in 0u32..16, minus in any::<bool>()) {
        let branch = if minus && l > 0 { Branch::Minus } else { Branch::Plus };
        let two_j = branch.two_j(l).unwrap();
        let two_k = -(two_j as i32) + 2 * (k_off % (two_j + 1)) as i32;
        let c = spinor_coefficients(two_j, two_k, branch).unwrap();
        prop_assert_eq!(c.norm_sq(), q(1, 1));
        prop_assert!((c.upper * c.upper + c.lower * c.lower - 1.0).abs() < 1e-14);
        prop_assert_eq!(c.orbital_l(), l);
    }
}

#[test]
fn spinor_examples() {
    let c = spinor_coefficients(1, 1, Branch::Plus).unwrap();
    assert_eq!((c.upper, c.lower), (1.0, 0.0));
    assert!(spinor_coefficients(1, 3, Branch::Plus).is_err());
    assert!(spinor_coefficients(2, 0, Branch::Plus).is_err());
    assert!(spinor_coefficients(3, 0, Branch::Minus).is_err());
}

#[test]
fn branches_are_orthogonal_at_equal_l() {
    for l in 1..6u32 {
        let (tp, tm) = (2 * l + 1, 2 * l - 1);
        for two_k in (-(tm as i32)..=tm as i32).step_by(2) {
            let p = spinor_coefficients(tp, two_k, Branch::Plus).unwrap();
            let m = spinor_coefficients(tm, two_k, Branch::Minus).unwrap();
            assert_eq!(p.upper_sq * m.upper_sq, p.lower_sq * m.lower_sq);
            assert!((p.upper * m.upper + p.lower * m.lower).abs() < 1e-14);
        }
    }
}

#[test]
fn hydrogen_degeneracies() {
    let t = degeneracy_table(&params(0.0), 3).unwrap();
    let m: Vec<u32> = t.levels.iter().map(|l| l.multiplicity).collect();
    assert_eq!(m, vec![2, 8, 18]);
    for (k, level) in t.levels.iter().enumerate() {
        let n = (k + 1) as f64;
        assert!(close(level.energy, -0.5 / (n * n), 1e-15));
    }
    assert_eq!(t.levels[1].states.len(), 3);
}

#[test]
fn generic_gamma_separates_branches() {
    let t = degeneracy_table(&params(0.3), 4).unwrap();
    for level in &t.levels {
        let b = level.states[0].branch;
        assert!(level.states.iter().all(|s| s.branch == b));
        let nj = level.states[0].n * 2 + level.states[0].two_j;
        assert!(level.states.iter().all(|s| s.n * 2 + s.two_j == nj));
    }
    let total: u32 = t.levels.iter().map(|l| l.multiplicity).sum();
    assert_eq!(total, 2 * (1 + 4 + 9 + 16));
}

#[test]
fn fd_hydrogen_levels() {
    let p = RadialProblem::new(Branch::Plus, 0, params(0.0)).unwrap();
    let s = fd_spectrum(&p, 3, true).unwrap();
    let want = [-0.5, -0.125, -1.0 / 18.0];
    assert_eq!(s.levels.len(), 3);
    for (lv, w) in s.levels.iter().zip(want) {
        assert!(close(lv.energy_fd, w, 5e-6), "{lv:?}");
    }
    assert!(!s.truncated);
}

#[test]
fn fd_fractional_lambda_level() {
    let p = RadialProblem::new(Branch::Plus, 0, params(0.3)).unwrap();
    let s = fd_spectrum(&p, 1, true).unwrap();
    assert!(s.levels[0].rel_error <= 5e-6, "{:?}", s.levels[0]);
    let p = RadialProblem::new(Branch::Minus, 2, params(0.5)).unwrap();
    assert!(fd_spectrum(&p, 2, true).unwrap().max_rel_error() <= 5e-6);
}

#[test]
fn grid_halving_reduces_error_fourfold() {
    let p = RadialProblem::new(Branch::Plus, 0, params(0.0)).unwrap().with_scheme(Scheme::Plain).unwrap();
    let rows = grid_study(&p, 0, 2000).unwrap();
    assert_eq!(rows.iter().map(|r| r.points).collect::<Vec<_>>(), vec![2000, 4000, 8000]);
    for r in &rows[1..] {
        let red = r.reduction.unwrap();
        assert!((3.7..4.3).contains(&red), "{red}");
    }
    let p = RadialProblem::new(Branch::Plus, 1, params(0.3)).unwrap();
    for r in &grid_study(&p, 1, 2000).unwrap()[1..] {
        assert!((3.7..4.3).contains(&r.reduction.unwrap()));
    }
}

#[test]
fn small_box_truncates() {
    let p = RadialProblem::new(Branch::Plus, 0, params(0.0)).unwrap().with_grid(Some(8.0), 2000).unwrap();
    let s = fd_spectrum(&p, 4, false).unwrap();
    assert!(s.truncated);
    assert!(s.levels.len() < 4);
    let ev = fd_eigenvalues(&p, 8.0, 2000, 2).unwrap();
    assert!(ev[0] < ev[1]);
}

#[test]
fn fd_eigenvector_matches_closed_form_shape() {
    for (b, l, g, n) in [(Branch::Plus, 0, 0.0, 1), (Branch::Plus, 0, 0.3, 2), (Branch::Minus, 1, 0.3, 1)] {
        let p = RadialProblem::new(b, l, params(g)).unwrap();
        let two_j = p.two_j().unwrap();
        let fd = fd_radial_function(&p, n, 16000).unwrap();
        let exact: Vec<f64> =
            fd.iter().map(|&(r, _)| closed_form_wavefunction(n, two_j, b, &params(g), r).unwrap()).collect();
        let dot: f64 = fd.iter().zip(&exact).map(|((_, a), e)| a * e).sum();
        let norm: f64 = exact.iter().map(|e| e * e).sum();
        let scale = dot / norm;
        let peak = exact.iter().fold(0.0f64, |m, e| m.max(e.abs())) * scale.abs();
        let worst = fd.iter().zip(&exact).map(|((_, a), e)| (a - scale * e).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-3 * peak, "{b} l={l} n={n}: {worst} vs {peak}");
    }
}

#[test]
fn spectrum_csv_columns() {
    let rows = vec![
        SpectrumRow { branch: Branch::Plus, l: 0, two_j: 1, n: 0, e_closed: Some(-0.5), e_fd: Some(-0.5), rel_error: Some(0.0) },
        SpectrumRow { branch: Branch::Minus, l: 1, two_j: 1, n: 0, e_closed: None, e_fd: None, rel_error: None },
    ];
    let csv = spectrum_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("branch,l,2j,n,E_closed,E_fd,rel_error"));
    assert_eq!(lines.next(), Some("plus,0,1,0,-0.5,-0.5,0.0"));
    assert_eq!(lines.next(), Some("minus,1,1,0,,,"));
    assert_eq!(spectrum_csv(&[]).trim(), "branch,l,2j,n,E_closed,E_fd,rel_error");
}
