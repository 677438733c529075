//! Degeneracy tables, spinor coefficients and CSV output.

use serde::Serialize;

use super::{check_domain, closed_form_energy, Branch, Params, SpectralError};
use crate::opalg::gauss::ratio_to_f64;
use crate::opalg::{q, Rational};

/// One `(n, l, 2j, branch)` radial state; it carries `2j + 1` states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StateLabel {
    pub n: u32,
    pub l: u32,
    pub two_j: u32,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateLevel {
    pub energy: f64,
    pub multiplicity: u32,
    pub states: Vec<StateLabel>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyTable {
    pub hbar: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub n_max: u32,
    pub levels: Vec<DegenerateLevel>,
}

/// Relative tolerance for grouping closed-form energies.
pub const GROUPING_TOLERANCE: f64 = 1e-12;

/// Groups all states with `n + l + 1 ≤ n_max` by closed-form energy.
/// States outside the normalization domain are skipped.
pub fn degeneracy_table(params: &Params, n_max: u32) -> Result<DegeneracyTable, SpectralError> {
    let mut states: Vec<(f64, StateLabel)> = Vec::new();
    for branch in [Branch::Plus, Branch::Minus] {
        for l in 0..n_max {
            let Some(two_j) = branch.two_j(l) else { continue };
            for n in 0..(n_max - l) {
                if check_domain(n, two_j, branch, params).is_err() {
                    continue;
                }
                let e = closed_form_energy(n, two_j, branch, params)?;
                states.push((e, StateLabel { n, l, two_j, branch }));
            }
        }
    }
    states.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut levels: Vec<DegenerateLevel> = Vec::new();
    for (e, label) in states {
        match levels.last_mut() {
            Some(last) if (last.energy - e).abs() <= GROUPING_TOLERANCE * last.energy.abs().max(e.abs()) => {
                last.multiplicity += label.two_j + 1;
                last.states.push(label);
            }
            _ => levels.push(DegenerateLevel { energy: e, multiplicity: label.two_j + 1, states: vec![label] }),
        }
    }
    Ok(DegeneracyTable { hbar: params.hbar, alpha: params.alpha, gamma: params.gamma, n_max, levels })
}

/// Spinor components `(upper, lower)` multiplying `Y_{l,k−½}` and
/// `Y_{l,k+½}`. Squares are exact rationals; the lower component of the
/// minus branch carries the Condon–Shortley sign.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorCoeffs {
    pub two_j: u32,
    pub two_k: i32,
    pub branch: Branch,
    pub upper_sq: Rational,
    pub lower_sq: Rational,
    pub upper: f64,
    pub lower: f64,
}

impl SpinorCoeffs {
    /// `upper² + lower²` in exact arithmetic.
    pub fn norm_sq(&self) -> Rational {
        self.upper_sq + self.lower_sq
    }

    /// Orbital `l` of both components.
    pub fn orbital_l(&self) -> u32 {
        self.branch.orbital_l(self.two_j).expect("two_j validated on construction")
    }
}

/// Plus: `(√(j+k), √(j−k))/√(2j)`. Minus: `(√(j−k+1), −√(j+k+1))/√(2j+2)`.
pub fn spinor_coefficients(two_j: u32, two_k: i32, branch: Branch) -> Result<SpinorCoeffs, SpectralError> {
    if two_j.is_multiple_of(2) {
        return Err(SpectralError::SpinorIndex(format!("2j must be odd, got {two_j}")));
    }
    if two_k.unsigned_abs() > two_j || two_k % 2 == 0 {
        return Err(SpectralError::SpinorIndex(format!("need |k| ≤ j with k half-integer, got 2k = {two_k}, 2j = {two_j}")));
    }
    let (tj, tk) = (two_j as i128, two_k as i128);
    let (upper_sq, lower_sq, lower_sign) = match branch {
        Branch::Plus => (q(tj + tk, 2 * tj), q(tj - tk, 2 * tj), 1.0),
        Branch::Minus => (q(tj - tk + 2, 2 * tj + 4), q(tj + tk + 2, 2 * tj + 4), -1.0),
    };
    Ok(SpinorCoeffs {
        two_j,
        two_k,
        branch,
        upper_sq,
        lower_sq,
        upper: ratio_to_f64(&upper_sq).sqrt(),
        lower: lower_sign * ratio_to_f64(&lower_sq).sqrt(),
    })
}

/// One CSV line; the energy columns are empty for rejected states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub branch: Branch,
    pub l: u32,
    #[serde(rename = "2j")]
    pub two_j: u32,
    pub n: u32,
    #[serde(rename = "E_closed")]
    pub e_closed: Option<f64>,
    #[serde(rename = "E_fd")]
    pub e_fd: Option<f64>,
    pub rel_error: Option<f64>,
}

/// Columns `branch,l,2j,n,E_closed,E_fd,rel_error`.
pub fn spectrum_csv(rows: &[SpectrumRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["branch", "l", "2j", "n", "E_closed", "E_fd", "rel_error"]).expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}
