//! Exact residual of the closed-form eigenfunctions.
//!
//! Functions are `e^{−κr} Σ_k c_k r^{λ+k}` with rational `λ`, `κ`, `c_k`,
//! stored as offsets `k`. Derivatives stay in this class, so `(H − E)R` is
//! computed with no approximation. Arithmetic is checked; overflow is an
//! error rather than a wrong answer.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use super::{Branch, SpectralError};
use crate::opalg::{q, Rational};

/// Exact model parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactParams {
    pub hbar: Rational,
    pub alpha: Rational,
    pub gamma: Rational,
}

impl Default for ExactParams {
    fn default() -> Self {
        ExactParams { hbar: q(1, 1), alpha: q(1, 1), gamma: q(0, 1) }
    }
}

/// Sign of the centrifugal term in the radial operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Centrifugal {
    /// `−(ħ²/2)(∂² + (2/r)∂ − λ(λ+1)/r²)`
    Repulsive,
    /// `−(ħ²/2)(∂² + (2/r)∂ + λ(λ+1)/r²)`, the negative control.
    Flipped,
}

type Coeffs = BTreeMap<i32, Rational>;

fn ov<T>(x: Option<T>) -> Result<T, SpectralError> {
    x.ok_or(SpectralError::Overflow)
}

fn add(a: Rational, b: Rational) -> Result<Rational, SpectralError> {
    ov(a.checked_add(&b))
}

fn sub(a: Rational, b: Rational) -> Result<Rational, SpectralError> {
    ov(a.checked_sub(&b))
}

fn mul(a: Rational, b: Rational) -> Result<Rational, SpectralError> {
    ov(a.checked_mul(&b))
}

fn div(a: Rational, b: Rational) -> Result<Rational, SpectralError> {
    ov(a.checked_div(&b))
}

fn accumulate(out: &mut Coeffs, k: i32, c: Rational) -> Result<(), SpectralError> {
    let slot = out.entry(k).or_insert_with(Rational::zero);
    *slot = add(*slot, c)?;
    Ok(())
}

/// Coefficients of `L_n^{(a)}(x)` in ascending powers of `x`, from
/// `(k+1)L_{k+1} = (2k+1+a−x)L_k − (k+a)L_{k−1}`.
pub fn laguerre_poly(n: u32, a: Rational) -> Result<Vec<Rational>, SpectralError> {
    let mut prev = vec![Rational::one()];
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = vec![add(Rational::one(), a)?, -Rational::one()];
    for k in 1..n {
        let kr = q(k as i128, 1);
        let lead = add(add(mul(q(2, 1), kr)?, Rational::one())?, a)?;
        let back = add(kr, a)?;
        let mut next = vec![Rational::zero(); cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i] = add(next[i], mul(lead, c)?)?;
            next[i + 1] = sub(next[i + 1], c)?;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] = sub(next[i], mul(back, c)?)?;
        }
        let denom = add(kr, Rational::one())?;
        for c in next.iter_mut() {
            *c = div(*c, denom)?;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `(H − E)R` for a closed-form eigenfunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyResidual {
    pub lambda: Rational,
    pub kappa: Rational,
    pub energy: Rational,
    /// Nonzero `(k, c_k)` of `e^{−κr} Σ c_k r^{λ+k}`, ascending in `k`.
    pub coeffs: Vec<(i32, Rational)>,
}

impl ExpPolyResidual {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for ExpPolyResidual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "e^(-({})r) * (", self.kappa)?;
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) r^({} + {k})", self.lambda)?;
        }
        write!(f, ")")
    }
}

/// `d/dr` on `e^{−κr} Σ c_k r^{λ+k}`.
fn derivative(f: &Coeffs, lambda: Rational, kappa: Rational) -> Result<Coeffs, SpectralError> {
    let mut out = Coeffs::new();
    for (&k, &c) in f {
        accumulate(&mut out, k - 1, mul(c, add(lambda, q(k as i128, 1))?)?)?;
        accumulate(&mut out, k, -mul(c, kappa)?)?;
    }
    Ok(out)
}

/// Exact `(H − E)R` for `R = r^λ e^{−κr} L_n^{(2λ+1)}(2κr)` with
/// `E = −α²/(2ħ²N²)`, `N = n + λ + 1`, `κ = α/(ħ²N)`.
pub fn residual_check_exact(
    n: u32,
    two_j: u32,
    branch: Branch,
    params: &ExactParams,
    centrifugal: Centrifugal,
) -> Result<ExpPolyResidual, SpectralError> {
    if two_j.is_multiple_of(2) {
        return Err(SpectralError::Domain(format!("2j must be odd, got {two_j}")));
    }
    let ExactParams { hbar, alpha, gamma } = *params;
    if !hbar.is_positive() || !alpha.is_positive() {
        return Err(SpectralError::Domain("need ħ > 0 and α > 0".into()));
    }
    let j = q(two_j as i128, 2);
    let lambda = match branch {
        Branch::Plus => add(sub(j, q(1, 2))?, gamma)?,
        Branch::Minus => sub(add(j, q(1, 2))?, gamma)?,
    };
    if lambda <= q(-3, 2) {
        return Err(SpectralError::Domain(format!("λ = {lambda} must exceed −3/2")));
    }
    let big_n = add(add(q(n as i128, 1), lambda)?, Rational::one())?;
    if !big_n.is_positive() {
        return Err(SpectralError::Domain(format!("N = {big_n} must be positive")));
    }
    let h2 = mul(hbar, hbar)?;
    let kappa = div(alpha, mul(h2, big_n)?)?;
    let energy = -div(mul(alpha, alpha)?, mul(mul(q(2, 1), h2)?, mul(big_n, big_n)?)?)?;

    let a = add(mul(q(2, 1), lambda)?, Rational::one())?;
    let lag = laguerre_poly(n, a)?;
    let mut rho = Coeffs::new();
    let mut scale = Rational::one();
    let two_kappa = mul(q(2, 1), kappa)?;
    for (i, &c) in lag.iter().enumerate() {
        accumulate(&mut rho, i as i32, mul(c, scale)?)?;
        scale = mul(scale, two_kappa)?;
    }

    let d1 = derivative(&rho, lambda, kappa)?;
    let d2 = derivative(&d1, lambda, kappa)?;
    let cent = mul(lambda, add(lambda, Rational::one())?)?;
    let cent = match centrifugal {
        Centrifugal::Repulsive => -cent,
        Centrifugal::Flipped => cent,
    };
    // bracket = R'' + (2/r)R' ± λ(λ+1)R/r²
    let mut bracket = d2;
    for (&k, &c) in &d1 {
        accumulate(&mut bracket, k - 1, mul(q(2, 1), c)?)?;
    }
    for (&k, &c) in &rho {
        accumulate(&mut bracket, k - 2, mul(cent, c)?)?;
    }
    let kinetic = -div(h2, q(2, 1))?;
    let mut out = Coeffs::new();
    for (&k, &c) in &bracket {
        accumulate(&mut out, k, mul(kinetic, c)?)?;
    }
    for (&k, &c) in &rho {
        accumulate(&mut out, k - 1, -mul(alpha, c)?)?;
        accumulate(&mut out, k, -mul(energy, c)?)?;
    }
    let coeffs = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    Ok(ExpPolyResidual { lambda, kappa, energy, coeffs })
}
