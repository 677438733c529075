//! Radial bound states of the spin-orbit Coulomb problem: closed-form
//! energies and Laguerre eigenfunctions, a finite-difference eigensolver,
//! exact residual checks, degeneracy tables and spinor coefficients.
//!
//! Half-integers are stored doubled (`two_j`, `two_k`). On the `plus`
//! branch `j = l + ½` and `λ = l + γ`; on `minus`, `j = l − ½` and
//! `λ = l − γ`. Bound energies are `E = −α²/(2ħ²N²)` with `N = n + λ + 1`.

mod exact;
mod fd;
mod table;

use thiserror::Error;

pub use crate::models::{Branch, Params};
pub use exact::{laguerre_poly, residual_check_exact, Centrifugal, ExactParams, ExpPolyResidual};
pub use fd::{fd_eigenvalues, fd_radial_function, fd_spectrum, grid_study, GridStudyRow, Level, RadialProblem, Scheme, SpectrumResult};
pub use table::{
    degeneracy_table, spectrum_csv, spinor_coefficients, DegeneracyTable, DegenerateLevel, SpectrumRow, SpinorCoeffs,
    StateLabel,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("normalization domain violated: {0}")]
    Domain(String),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid spinor index: {0}")]
    SpinorIndex(String),
    #[error("rational overflow in exact evaluation")]
    Overflow,
}

/// `λ` for `(2j, branch)` at coupling `γ`.
pub fn lambda(two_j: u32, branch: Branch, gamma: f64) -> f64 {
    let j = two_j as f64 / 2.0;
    match branch {
        Branch::Plus => j - 0.5 + gamma,
        Branch::Minus => j + 0.5 - gamma,
    }
}

fn check_two_j(two_j: u32) -> Result<(), SpectralError> {
    if two_j % 2 == 1 {
        Ok(())
    } else {
        Err(SpectralError::Domain(format!("2j must be odd, got {two_j}")))
    }
}

/// Normalization domain `λ > −3/2`, i.e. `j > −γ − 1` (plus) or
/// `j > γ − 2` (minus), together with `N > 0`.
pub fn check_domain(n: u32, two_j: u32, branch: Branch, params: &Params) -> Result<f64, SpectralError> {
    check_two_j(two_j)?;
    if !(params.hbar > 0.0 && params.alpha > 0.0 && params.gamma.is_finite()) {
        return Err(SpectralError::Domain("need ħ > 0, α > 0 and finite γ".into()));
    }
    let lam = lambda(two_j, branch, params.gamma);
    let j = two_j as f64 / 2.0;
    if lam <= -1.5 {
        let rule = match branch {
            Branch::Plus => format!("plus branch needs j > −γ − 1, got j = {j}, γ = {}", params.gamma),
            Branch::Minus => format!("minus branch needs j > γ − 2, got j = {j}, γ = {}", params.gamma),
        };
        return Err(SpectralError::Domain(rule));
    }
    let big_n = n as f64 + lam + 1.0;
    if big_n <= 0.0 {
        return Err(SpectralError::Domain(format!("N = n + λ + 1 = {big_n} must be positive")));
    }
    Ok(lam)
}

/// Effective principal number `N = n + λ + 1`.
pub fn principal(n: u32, two_j: u32, branch: Branch, params: &Params) -> Result<f64, SpectralError> {
    Ok(n as f64 + check_domain(n, two_j, branch, params)? + 1.0)
}

/// `E = −α²/(2ħ²N²)`
pub fn closed_form_energy(n: u32, two_j: u32, branch: Branch, params: &Params) -> Result<f64, SpectralError> {
    let big_n = principal(n, two_j, branch, params)?;
    Ok(-params.alpha * params.alpha / (2.0 * params.hbar * params.hbar * big_n * big_n))
}

/// Unnormalized `R(r) = r^λ e^{−κr} L_n^{(2λ+1)}(2κr)`, `κ = α/(ħ²N)`.
pub fn closed_form_wavefunction(
    n: u32,
    two_j: u32,
    branch: Branch,
    params: &Params,
    r: f64,
) -> Result<f64, SpectralError> {
    if !(r > 0.0) {
        return Err(SpectralError::Domain(format!("r must be positive, got {r}")));
    }
    let lam = check_domain(n, two_j, branch, params)?;
    let kappa = params.alpha / (params.hbar * params.hbar * (n as f64 + lam + 1.0));
    Ok(r.powf(lam) * (-kappa * r).exp() * laguerre(n, 2.0 * lam + 1.0, 2.0 * kappa * r))
}

/// Generalized Laguerre `L_n^{(a)}(x)` by the three-term recurrence.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
