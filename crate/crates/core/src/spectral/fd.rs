//! Finite-difference radial eigensolver.
//!
//! `Weighted` discretizes `v = u/r^{λ+1}` on cell centres `r_i = (i+½)h`
//! in the self-adjoint form `−(ħ²/2)(r^{2λ+2}v')' − α r^{2λ+1}v =
//! E r^{2λ+2}v`, with cell-averaged weights and a ghost cell enforcing
//! `v(r_max) = 0`. `Plain` is the textbook three-point scheme for `u = rR`
//! on `r_i = ih`. Both reduce to a symmetric tridiagonal matrix whose
//! eigenvalues are isolated by Sturm-sequence bisection.

use serde::Serialize;

use super::{check_domain, closed_form_energy, lambda, Branch, Params, SpectralError};

/// Discretization of the radial equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Weighted,
    Plain,
}

impl std::str::FromStr for Scheme {
    type Err = SpectralError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weighted" => Ok(Scheme::Weighted),
            "plain" => Ok(Scheme::Plain),
            _ => Err(SpectralError::Grid(format!("scheme must be weighted or plain, got `{s}`"))),
        }
    }
}

/// One radial sector with its grid. `r_max = None` sizes the box per level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialProblem {
    pub params: Params,
    pub branch: Branch,
    pub l: u32,
    pub r_max: Option<f64>,
    pub points: usize,
    pub scheme: Scheme,
}

impl RadialProblem {
    pub const DEFAULT_POINTS: usize = 20_000;

    pub fn new(branch: Branch, l: u32, params: Params) -> Result<RadialProblem, SpectralError> {
        let p = RadialProblem {
            params,
            branch,
            l,
            r_max: None,
            points: Self::DEFAULT_POINTS,
            scheme: Scheme::Weighted,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_grid(mut self, r_max: Option<f64>, points: usize) -> Result<RadialProblem, SpectralError> {
        self.r_max = r_max;
        self.points = points;
        self.validate()?;
        Ok(self)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Result<RadialProblem, SpectralError> {
        self.scheme = scheme;
        self.validate()?;
        Ok(self)
    }

    /// `2j` of this sector.
    pub fn two_j(&self) -> Result<u32, SpectralError> {
        self.branch
            .two_j(self.l)
            .ok_or_else(|| SpectralError::Domain("minus branch needs l ≥ 1".into()))
    }

    pub fn lambda(&self) -> Result<f64, SpectralError> {
        Ok(lambda(self.two_j()?, self.branch, self.params.gamma))
    }

    fn validate(&self) -> Result<(), SpectralError> {
        let two_j = self.two_j()?;
        check_domain(0, two_j, self.branch, &self.params)?;
        if self.points < 100 {
            return Err(SpectralError::Grid(format!("need at least 100 points, got {}", self.points)));
        }
        if let Some(r) = self.r_max {
            if !(r > 0.0 && r.is_finite()) {
                return Err(SpectralError::Grid(format!("r_max must be positive, got {r}")));
            }
        }
        let lam = self.lambda()?;
        if lam * (lam + 1.0) < -0.25 {
            return Err(SpectralError::Domain(format!("λ(λ+1) = {} below −1/4", lam * (lam + 1.0))));
        }
        // below −1 a Dirichlet grid selects r^{−λ} instead of r^{λ+1}
        if lam <= -1.0 {
            return Err(SpectralError::Grid(format!("finite differences need λ > −1, got {lam}")));
        }
        Ok(())
    }

    /// Box radius for level `n`: `60ħ²N_b²/α` with `N_b` covering both
    /// `n + j + |γ| + ½` and `n + λ + 1`.
    pub fn r_max_for(&self, n: u32) -> Result<f64, SpectralError> {
        if let Some(r) = self.r_max {
            return Ok(r);
        }
        let j = self.two_j()? as f64 / 2.0;
        let nb = (n as f64 + j + self.params.gamma.abs() + 0.5).max(n as f64 + self.lambda()? + 1.0);
        Ok(60.0 * self.params.hbar * self.params.hbar * nb * nb / self.params.alpha)
    }
}

/// Symmetric tridiagonal matrix: diagonal `d`, off-diagonal `e`.
struct Tridiag {
    d: Vec<f64>,
    e: Vec<f64>,
    /// `R(r_i) = scale_i · y_i` for eigenvector entries `y_i`.
    scale: Vec<f64>,
    r: Vec<f64>,
}

/// `(i+1)^p − i^p` without cancellation.
fn power_step(i: usize, p: f64) -> f64 {
    if i == 0 {
        return 1.0;
    }
    let x = i as f64;
    x.powf(p) * (p * (1.0 / x).ln_1p()).exp_m1()
}

fn build(problem: &RadialProblem, r_max: f64, points: usize) -> Result<Tridiag, SpectralError> {
    let Params { hbar, alpha, .. } = problem.params;
    let lam = problem.lambda()?;
    let h2 = hbar * hbar;
    match problem.scheme {
        Scheme::Weighted => {
            let h = r_max / points as f64;
            let a = 2.0 * lam + 2.0;
            let c = h2 / (2.0 * h * h);
            let face = |f: usize| (f as f64).powf(a);
            let mass: Vec<f64> = (0..points).map(|i| power_step(i, a + 1.0) / (a + 1.0)).collect();
            let mut d = Vec::with_capacity(points);
            let mut e = Vec::with_capacity(points - 1);
            for i in 0..points {
                let right = if i + 1 == points { 2.0 * face(points) } else { face(i + 1) };
                let pot = alpha * power_step(i, a) / (a * h);
                d.push((c * (face(i) + right) - pot) / mass[i]);
                if i + 1 < points {
                    e.push(-c * face(i + 1) / (mass[i] * mass[i + 1]).sqrt());
                }
            }
            let r: Vec<f64> = (0..points).map(|i| (i as f64 + 0.5) * h).collect();
            let scale = (0..points).map(|i| r[i].powf(lam) / mass[i].sqrt()).collect();
            Ok(Tridiag { d, e, scale, r })
        }
        Scheme::Plain => {
            let h = r_max / points as f64;
            let m = points - 1;
            let r: Vec<f64> = (1..=m).map(|i| i as f64 * h).collect();
            let d = r
                .iter()
                .map(|&ri| h2 / (h * h) + h2 * lam * (lam + 1.0) / (2.0 * ri * ri) - alpha / ri)
                .collect();
            let e = vec![-h2 / (2.0 * h * h); m - 1];
            let scale = r.iter().map(|ri| 1.0 / ri).collect();
            Ok(Tridiag { d, e, scale, r })
        }
    }
}

impl Tridiag {
    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.d.len() {
            let off = if i == 0 { 0.0 } else { self.e[i - 1] * self.e[i - 1] / q };
            q = self.d[i] - x - off;
            if q == 0.0 {
                q = -f64::EPSILON * (self.d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let rad = if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - rad);
            hi = hi.max(self.d[i] + rad);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue, 0-based.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for a converged eigenvalue by inverse iteration.
    fn eigenvector(&self, ev: f64) -> Vec<f64> {
        let n = self.d.len();
        let shift = ev + 1e-10 * ev.abs().max(1e-300);
        let mut y = vec![1.0; n];
        for _ in 0..4 {
            y = self.solve_shifted(shift, &y);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= norm);
        }
        y
    }

    /// Thomas algorithm for `(T − s)x = b`.
    fn solve_shifted(&self, s: f64, b: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut piv = self.d[0] - s;
        x[0] = b[0] / piv;
        for i in 1..n {
            c[i - 1] = self.e[i - 1] / piv;
            piv = self.d[i] - s - self.e[i - 1] * c[i - 1];
            if piv == 0.0 {
                piv = f64::EPSILON;
            }
            x[i] = (b[i] - self.e[i - 1] * x[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }
}

/// Lowest `count` eigenvalues on one grid, bound or not.
pub fn fd_eigenvalues(problem: &RadialProblem, r_max: f64, points: usize, count: usize) -> Result<Vec<f64>, SpectralError> {
    let t = build(problem, r_max, points)?;
    Ok((0..count.min(t.d.len())).map(|k| t.eigenvalue(k)).collect())
}

/// Radial function `R(r_i)` of level `n` on one grid, scaled so the
/// entry of largest magnitude is positive.
pub fn fd_radial_function(problem: &RadialProblem, n: u32, points: usize) -> Result<Vec<(f64, f64)>, SpectralError> {
    let t = build(problem, problem.r_max_for(n)?, points)?;
    let y = t.eigenvector(t.eigenvalue(n as usize));
    let vals: Vec<f64> = y.iter().zip(&t.scale).map(|(a, b)| a * b).collect();
    let sign = vals.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m }).signum();
    Ok(t.r.iter().zip(vals).map(|(&r, v)| (r, sign * v)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub n: u32,
    pub two_j: u32,
    pub energy_fd: f64,
    pub energy_closed: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub branch: Branch,
    pub l: u32,
    pub two_j: u32,
    pub scheme: Scheme,
    pub levels: Vec<Level>,
    /// Point counts of the grids used per level.
    pub grids: Vec<usize>,
    pub extrapolated: bool,
    /// Set when fewer than the requested bound levels fit in the box.
    pub truncated: bool,
}

impl SpectrumResult {
    pub fn max_rel_error(&self) -> f64 {
        self.levels.iter().map(|l| l.rel_error).fold(0.0, f64::max)
    }
}

/// Level `n` on `points` cells, optionally Richardson-extrapolated with a
/// grid of twice the points: `(4E(h/2) − E(h))/3`.
fn level_energy(problem: &RadialProblem, n: u32, points: usize, extrapolate: bool) -> Result<f64, SpectralError> {
    let r_max = problem.r_max_for(n)?;
    let coarse = build(problem, r_max, points)?.eigenvalue(n as usize);
    if !extrapolate {
        return Ok(coarse);
    }
    let fine = build(problem, r_max, 2 * points)?.eigenvalue(n as usize);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Lowest `count` bound levels of `problem`, compared with the closed form.
pub fn fd_spectrum(problem: &RadialProblem, count: u32, extrapolate: bool) -> Result<SpectrumResult, SpectralError> {
    let two_j = problem.two_j()?;
    let mut levels = Vec::new();
    let mut truncated = false;
    for n in 0..count {
        let closed = closed_form_energy(n, two_j, problem.branch, &problem.params)?;
        let fd = level_energy(problem, n, problem.points, extrapolate)?;
        if fd >= 0.0 {
            truncated = true;
            break;
        }
        levels.push(Level { n, two_j, energy_fd: fd, energy_closed: closed, rel_error: ((fd - closed) / closed).abs() });
    }
    let grids = if extrapolate { vec![problem.points, 2 * problem.points] } else { vec![problem.points] };
    Ok(SpectrumResult {
        branch: problem.branch,
        l: problem.l,
        two_j,
        scheme: problem.scheme,
        levels,
        grids,
        extrapolated: extrapolate,
        truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridStudyRow {
    pub scheme: Scheme,
    pub points: usize,
    pub h: f64,
    pub energy_fd: f64,
    pub rel_error: f64,
    /// Error ratio to the previous, coarser row.
    pub reduction: Option<f64>,
}

/// Unextrapolated error of level `n` on `points`, `2·points`, `4·points`.
pub fn grid_study(problem: &RadialProblem, n: u32, points: usize) -> Result<Vec<GridStudyRow>, SpectralError> {
    let closed = closed_form_energy(n, problem.two_j()?, problem.branch, &problem.params)?;
    let r_max = problem.r_max_for(n)?;
    let mut rows: Vec<GridStudyRow> = Vec::new();
    for p in [points, 2 * points, 4 * points] {
        let e = level_energy(problem, n, p, false)?;
        let err = ((e - closed) / closed).abs();
        let reduction = rows.last().map(|prev| prev.rel_error / err);
        rows.push(GridStudyRow { scheme: problem.scheme, points: p, h: r_max / p as f64, energy_fd: e, rel_error: err, reduction });
    }
    Ok(rows)
}
