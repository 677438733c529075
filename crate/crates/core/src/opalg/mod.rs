//! Exact noncommutative algebra of differential operators with Pauli
//! matrix coefficients on `ℝ^n`, `n ∈ {1,2,3}`.
//!
//! Every [`Element`] is a finite sum `c · r^s x^a p^b σ_μ` with all momenta
//! to the right, using `[p_i, x_j] = −iħ δ_ij` and `p_i = −iħ ∂_i`.

mod element;
pub mod gauss;
mod product;
pub mod scalar;
mod text;

use thiserror::Error;

pub use element::{Dim, Element, OpMonomial, Pauli, Term};
pub use gauss::{parse_rational, q, GaussianRational, Rational};
pub use scalar::{Bindings, Powers, ScalarPoly, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpAlgError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension must be 1, 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("coordinate {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
}

/// `Σ_i a_i b_i` over the coordinates of `dim`.
pub fn dot(dim: Dim, a: impl Fn(usize) -> Element, b: impl Fn(usize) -> Element) -> Element {
    (1..=dim.get()).fold(Element::zero(dim), |acc, i| acc + a(i) * b(i))
}
