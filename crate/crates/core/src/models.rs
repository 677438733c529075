//! Catalog of the named operators of the 2D gauged Coulomb system and the
//! 3D spin-orbit system, each built as a canonical [`Element`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coalgebra::{casimir, realize_full, realize_sl2, CoalgebraError};
use crate::opalg::{q, Bindings, Dim, Element, GaussianRational, OpAlgError, Rational, ScalarPoly, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
    #[error("catalog key {key} needs parameter `{param}` bound")]
    MissingParameter { key: String, param: &'static str },
    #[error("parameter domain violation: {0}")]
    Domain(String),
    #[error("gauge conjugation needs an integer power, got {0}")]
    NonIntegerGauge(Rational),
    #[error("operation needs a {expected}D element, got {got}D")]
    WrongDimension { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] OpAlgError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
}

// ---------------------------------------------------------------------------
// scalar shorthands

fn hb() -> ScalarPoly {
    ScalarPoly::hbar()
}
fn ga() -> ScalarPoly {
    ScalarPoly::gamma()
}
fn al() -> ScalarPoly {
    ScalarPoly::alpha()
}
fn rat(n: i128, d: i128) -> ScalarPoly {
    ScalarPoly::rational(q(n, d))
}
fn im(n: i128, d: i128) -> ScalarPoly {
    ScalarPoly::constant(GaussianRational::new(q(0, 1), q(n, d)))
}

/// Element-building helpers for one dimension.
#[derive(Clone, Copy)]
struct Ops {
    dim: Dim,
}

impl Ops {
    fn n(self) -> usize {
        self.dim.get()
    }
    fn c(self, s: ScalarPoly) -> Element {
        Element::scalar(self.dim, s)
    }
    fn x(self, i: usize) -> Element {
        Element::x(self.dim, i)
    }
    fn p(self, i: usize) -> Element {
        Element::p(self.dim, i)
    }
    fn r(self, s: i16) -> Element {
        Element::r_pow(self.dim, s)
    }
    fn sig(self, k: usize) -> Element {
        Element::sigma(self.dim, k)
    }
    fn zero(self) -> Element {
        Element::zero(self.dim)
    }
    fn sum(self, it: impl IntoIterator<Item = Element>) -> Element {
        it.into_iter().fold(self.zero(), |a, b| a + b)
    }
    fn x_dot_p(self) -> Element {
        self.sum((1..=self.n()).map(|i| self.x(i) * self.p(i)))
    }
    fn p_sq(self) -> Element {
        self.sum((1..=self.n()).map(|i| self.p(i) * self.p(i)))
    }
    /// Orbital angular momentum `L_k = ε_kab x_a p_b`; in 2D only `k = 3`
    /// exists and is written `L₀`.
    fn ang(self, k: usize) -> Element {
        let (a, b) = [(2, 3), (3, 1), (1, 2)][k - 1];
        self.x(a) * self.p(b) - self.x(b) * self.p(a)
    }
    fn l0(self) -> Element {
        self.ang(3)
    }
    /// `(u ∧ v)_j = ε_jab u_a v_b`
    fn wedge(self, j: usize, u: impl Fn(usize) -> Element, v: impl Fn(usize) -> Element) -> Element {
        let (a, b) = [(2, 3), (3, 1), (1, 2)][j - 1];
        u(a) * v(b) - u(b) * v(a)
    }
    fn sigma_dot_l(self) -> Element {
        self.sum((1..=3).map(|k| self.sig(k) * self.ang(k)))
    }
    /// `J₃ = x·p − iħ n/2`
    fn j3(self) -> Element {
        self.x_dot_p() + self.c(&im(-(self.n() as i128), 2) * &hb())
    }

    /// `√2·A = −i M r⁻¹ J₃ − α + M (L̂ + ħγ + ħ) r⁻¹`, `M = L̂ + ħγ + ħ/2`.
    fn a_tilde(self, lhat: &Element) -> Element {
        let m = self.ladder_m(lhat);
        let shift = lhat + &self.c(&(&hb() * &ga()) + &hb());
        &(&self.c(im(-1, 1)) * &m) * &(self.r(-1) * self.j3()) - self.c(al()) + &m * &(shift * self.r(-1))
    }

    /// `√2·A† = i M r⁻¹ J₃ − α + M (L̂ + ħγ) r⁻¹`.
    fn a_tilde_dag(self, lhat: &Element) -> Element {
        let m = self.ladder_m(lhat);
        let shift = lhat + &self.c(&hb() * &ga());
        &(&self.c(im(1, 1)) * &m) * &(self.r(-1) * self.j3()) - self.c(al()) + &m * &(shift * self.r(-1))
    }

    fn ladder_m(self, lhat: &Element) -> Element {
        lhat + &self.c(&(&hb() * &ga()) + &(&hb() * &rat(1, 2)))
    }

    /// `½(r⁻²(J₃ + iħ)² + (L̂ + ħγ)² r⁻²) − α r⁻¹`
    fn h_alg(self, lhat: &Element) -> Element {
        let j = self.j3() + self.c(&im(1, 1) * &hb());
        let lg = lhat + &self.c(&hb() * &ga());
        let inner = self.r(-2) * (&j * &j) + (&lg * &lg) * self.r(-2);
        inner.scale(&rat(1, 2)) - self.c(al()) * self.r(-1)
    }

    /// `L⁻_k = x_k r⁻¹ L̂ − i r⁻¹ (x_k J₃ − J₋ p_k + iħ x_k)`
    fn l_minus(self, k: usize, lhat: &Element, jm: &Element) -> Element {
        let inner = self.x(k) * self.j3() - jm * &self.p(k) + self.c(&im(1, 1) * &hb()) * self.x(k);
        self.x(k) * self.r(-1) * lhat.clone() - self.c(im(1, 1)) * self.r(-1) * inner
    }

    /// `L⁺_k = L̂ x_k r⁻¹ + i r⁻¹ (x_k J₃ − J₋ p_k)`
    fn l_plus(self, k: usize, lhat: &Element, jm: &Element) -> Element {
        let inner = self.x(k) * self.j3() - jm * &self.p(k);
        lhat * &(self.x(k) * self.r(-1)) + self.c(im(1, 1)) * self.r(-1) * inner
    }
}

const D2: Ops = Ops { dim: Dim::TWO };
const D3: Ops = Ops { dim: Dim::THREE };

// ---------------------------------------------------------------------------
// keys

/// Identifier of a catalog recipe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogName {
    H2Coulomb,
    H2Gauged,
    L2Gauged,
    R1_2D,
    R2_2D,
    R1_2DAlt,
    R2_2DAlt,
    H2Alg,
    A2,
    A2Dag,
    LPlus2D,
    LMinus2D,
    X2D,
    Y2D,
    A2M,
    A2MDag,
    H2M,
    A2MRaw,
    A2MRawDag,
    L3Op,
    SigmaDotL,
    A3,
    A3Dag,
    H3Alg,
    H3,
    J(u8),
    JSq,
    LPlus3(u8),
    LMinus3(u8),
    X(u8),
    Y(u8),
    XRunge(u8),
    XExplicit(u8),
    FPoly,
    GPoly,
}

impl CatalogName {
    /// Every recipe, indices expanded, in dump order.
    pub fn all() -> Vec<CatalogName> {
        use CatalogName::*;
        let mut v = vec![
            H2Coulomb, H2Gauged, L2Gauged, R1_2D, R2_2D, R1_2DAlt, R2_2DAlt, H2Alg, A2, A2Dag, LPlus2D,
            LMinus2D, X2D, Y2D, A2M, A2MDag, H2M, A2MRaw, A2MRawDag, L3Op, SigmaDotL, A3, A3Dag, H3Alg, H3,
        ];
        for ctor in [J as fn(u8) -> CatalogName, LPlus3, LMinus3, X, Y, XRunge, XExplicit] {
            v.extend((1..=3).map(ctor));
        }
        v.extend([JSq, FPoly, GPoly]);
        v
    }

    pub fn dim(self) -> Dim {
        use CatalogName::*;
        match self {
            H2Coulomb | H2Gauged | L2Gauged | R1_2D | R2_2D | R1_2DAlt | R2_2DAlt | H2Alg | A2 | A2Dag
            | LPlus2D | LMinus2D | X2D | Y2D | A2M | A2MDag | H2M | A2MRaw | A2MRawDag => Dim::TWO,
            _ => Dim::THREE,
        }
    }

    /// Parameters that must be bound before the recipe can run.
    pub fn required_params(self) -> &'static [Symbol] {
        match self {
            CatalogName::A2MRaw | CatalogName::A2MRawDag => &[Symbol::Hbar, Symbol::Gamma, Symbol::M],
            _ => &[],
        }
    }

    pub fn description(self) -> &'static str {
        use CatalogName::*;
        match self {
            H2Coulomb => "2D Coulomb Hamiltonian, Cartesian form",
            H2Gauged => "2D Coulomb Hamiltonian after the U(1) gauge e^{iγφ}",
            L2Gauged => "gauged 2D angular momentum L₀ + ħγ",
            R1_2D => "gauged 2D Runge-Lenz component R₁",
            R2_2D => "gauged 2D Runge-Lenz component R₂",
            R1_2DAlt => "R₁ with the x₁r⁻² term multiplying the squared angular momentum",
            R2_2DAlt => "R₂ with the x₂r⁻² term multiplying the squared angular momentum",
            H2Alg => "sl(2) form of the Hamiltonian for n = 2, L̂ = L₀",
            A2 => "√2·A for n = 2, L̂ = L₀",
            A2Dag => "√2·A† for n = 2, L̂ = L₀",
            LPlus2D => "angular raising factor e^{iφ} = r⁻¹(x₁ + i x₂)",
            LMinus2D => "angular lowering factor e^{−iφ} = r⁻¹(x₁ − i x₂)",
            X2D => "½(L⁺ √2A + √2A† L⁻), 2D",
            Y2D => "−(i/2)(L⁺ √2A − √2A† L⁻), 2D",
            A2M => "radial lowering operator √2·ħ(m+½+γ)·a_m, denominators cleared",
            A2MDag => "radial raising operator √2·ħ(m+½+γ)·a_m†, denominators cleared",
            H2M => "2D radial Hamiltonian at separation constant m",
            A2MRaw => "√2·a_m with ħ, γ, m bound to rationals",
            A2MRawDag => "√2·a_m† with ħ, γ, m bound to rationals",
            L3Op => "L̂ = σ·L + ħ/2",
            SigmaDotL => "spin-orbit factor σ·L",
            A3 => "√2·A for n = 3, L̂ = σ·L + ħ/2",
            A3Dag => "√2·A† for n = 3, L̂ = σ·L + ħ/2",
            H3Alg => "sl(2) form of the Hamiltonian for n = 3, L̂ = σ·L + ħ/2",
            H3 => "spin-orbit Coulomb Hamiltonian in 3D",
            J(_) => "total angular momentum component L_i + ħσ_i/2",
            JSq => "total angular momentum squared",
            LPlus3(_) => "3D angular raising operator L⁺_k",
            LMinus3(_) => "3D angular lowering operator L⁻_k",
            X(_) => "½(L⁺_j √2A + √2A† L⁻_j)",
            Y(_) => "−(i/2)(L⁺_j √2A − √2A† L⁻_j)",
            XRunge(_) => "Runge-Lenz form ½{σ·L, 𝒜} + (3ħ/2)𝒜",
            XExplicit(_) => "expanded form of X with quadratic Pauli terms removed",
            FPoly => "α² + H(4(σ·L)² + ħ(6γ+5)σ·L + 2ħ²(γ+1)²)",
            GPoly => "printed 𝒢(H, σ·L, 𝒥²)",
        }
    }

    fn stem(self) -> (&'static str, Option<u8>) {
        use CatalogName::*;
        match self {
            H2Coulomb => ("H2_COULOMB", None),
            H2Gauged => ("H2_GAUGED", None),
            L2Gauged => ("L2_GAUGED", None),
            R1_2D => ("R1_2D", None),
            R2_2D => ("R2_2D", None),
            R1_2DAlt => ("R1_2D_ALT", None),
            R2_2DAlt => ("R2_2D_ALT", None),
            H2Alg => ("H2_ALG", None),
            A2 => ("A2", None),
            A2Dag => ("A2_DAG", None),
            LPlus2D => ("LPLUS_2D", None),
            LMinus2D => ("LMINUS_2D", None),
            X2D => ("X_2D", None),
            Y2D => ("Y_2D", None),
            A2M => ("A2M", None),
            A2MDag => ("A2M_DAG", None),
            H2M => ("H2M", None),
            A2MRaw => ("A2M_RAW", None),
            A2MRawDag => ("A2M_RAW_DAG", None),
            L3Op => ("L3_OP", None),
            SigmaDotL => ("SIGMA_DOT_L", None),
            A3 => ("A3", None),
            A3Dag => ("A3_DAG", None),
            H3Alg => ("H3_ALG", None),
            H3 => ("H3", None),
            J(i) => ("J", Some(i)),
            JSq => ("J_SQ", None),
            LPlus3(k) => ("LPLUS3", Some(k)),
            LMinus3(k) => ("LMINUS3", Some(k)),
            X(j) => ("X", Some(j)),
            Y(j) => ("Y", Some(j)),
            XRunge(j) => ("X_RUNGE", Some(j)),
            XExplicit(j) => ("X_EXPLICIT", Some(j)),
            FPoly => ("F_POLY", None),
            GPoly => ("G_POLY", None),
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stem() {
            (s, None) => write!(f, "{s}"),
            (s, Some(i)) => write!(f, "{s}_{i}"),
        }
    }
}

impl FromStr for CatalogName {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CatalogName::all()
            .into_iter()
            .find(|n| n.to_string() == s)
            .ok_or_else(|| ModelError::UnknownKey(s.to_string()))
    }
}

/// A recipe plus optional exact parameter bindings applied after building.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatalogKey {
    pub name: CatalogName,
    pub params: Bindings,
}

impl CatalogKey {
    pub fn new(name: CatalogName) -> CatalogKey {
        CatalogKey { name, params: Bindings::new() }
    }

    pub fn with(mut self, sym: Symbol, v: Rational) -> CatalogKey {
        self.params.set(sym, v);
        self
    }
}

impl From<CatalogName> for CatalogKey {
    fn from(name: CatalogName) -> Self {
        CatalogKey::new(name)
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}[{}]", self.name, self.params)
        }
    }
}

impl FromStr for CatalogKey {
    type Err = ModelError;

    /// `NAME` or `NAME[sym=value,...]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, params) = match s.split_once('[') {
            Some((n, rest)) => {
                let body = rest.strip_suffix(']').ok_or_else(|| ModelError::UnknownKey(s.to_string()))?;
                (n, body)
            }
            None => (s, ""),
        };
        let mut key = CatalogKey::new(name.parse()?);
        key.params = params.parse().map_err(|_| ModelError::UnknownKey(s.to_string()))?;
        Ok(key)
    }
}

#[derive(Clone, Debug)]
pub struct OperatorCatalogEntry {
    pub key: CatalogKey,
    pub element: Arc<Element>,
    pub dim: Dim,
    pub description: &'static str,
}

// ---------------------------------------------------------------------------
// catalog

/// Memoizing catalog; safe to share between threads.
#[derive(Default)]
pub struct Catalog {
    cache: RwLock<HashMap<CatalogKey, Arc<Element>>>,
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    /// Process-wide shared catalog.
    pub fn global() -> &'static Catalog {
        static GLOBAL: std::sync::OnceLock<Catalog> = std::sync::OnceLock::new();
        GLOBAL.get_or_init(Catalog::new)
    }

    pub fn build_operator(&self, key: &CatalogKey) -> Result<OperatorCatalogEntry, ModelError> {
        Ok(OperatorCatalogEntry {
            key: key.clone(),
            element: self.get(key)?,
            dim: key.name.dim(),
            description: key.name.description(),
        })
    }

    /// Element for `key`, built on first use.
    pub fn get(&self, key: &CatalogKey) -> Result<Arc<Element>, ModelError> {
        if let Some(e) = self.cache.read().expect("catalog lock").get(key) {
            return Ok(e.clone());
        }
        for sym in key.name.required_params() {
            if key.params.get(*sym).is_none() {
                return Err(ModelError::MissingParameter { key: key.name.to_string(), param: sym.name() });
            }
        }
        let e = Arc::new(self.build(key)?.substitute_params(&key.params));
        self.cache.write().expect("catalog lock").insert(key.clone(), e.clone());
        Ok(e)
    }

    /// Unparametrized element by name.
    pub fn op(&self, name: CatalogName) -> Result<Arc<Element>, ModelError> {
        self.get(&CatalogKey::new(name))
    }

    fn el(&self, name: CatalogName) -> Result<Element, ModelError> {
        Ok((*self.op(name)?).clone())
    }

    fn build(&self, key: &CatalogKey) -> Result<Element, ModelError> {
        use CatalogName::*;
        let o2 = D2;
        let o3 = D3;
        Ok(match key.name {
            H2Coulomb => o2.p_sq().scale(&rat(1, 2)) - o2.c(al()) * o2.r(-1),
            H2Gauged => {
                let cent = o2.c(&(&hb() * &ga()) * &rat(2, 1)) * o2.l0() + o2.c(&(&hb() * &hb()) * &(&ga() * &ga()));
                o2.p_sq().scale(&rat(1, 2)) + (o2.r(-2) * cent).scale(&rat(1, 2)) - o2.c(al()) * o2.r(-1)
            }
            L2Gauged => o2.l0() + o2.c(&hb() * &ga()),
            R1_2D | R1_2DAlt | R2_2D | R2_2DAlt => {
                let l = self.el(L2Gauged)?;
                let alt = matches!(key.name, R1_2DAlt | R2_2DAlt);
                let lfac = if alt { &l * &l } else { l.clone() };
                let hg = &hb() * &ga();
                let h2g = &hg * &hb();
                if matches!(key.name, R1_2D | R1_2DAlt) {
                    (o2.p(2) * l.clone() + l.clone() * o2.p(2)).scale(&rat(1, 2))
                        + o2.c(&h2g * &im(1, 2)) * o2.x(2) * o2.r(-2)
                        + o2.c(hg) * o2.x(1) * o2.r(-2) * lfac
                        - o2.c(al()) * o2.x(1) * o2.r(-1)
                } else {
                    -(o2.p(1) * l.clone() + l.clone() * o2.p(1)).scale(&rat(1, 2))
                        + o2.c(&h2g * &im(-1, 2)) * o2.x(1) * o2.r(-2)
                        + o2.c(hg) * o2.x(2) * o2.r(-2) * lfac
                        - o2.c(al()) * o2.x(2) * o2.r(-1)
                }
            }
            H2Alg => o2.h_alg(&o2.l0()),
            A2 => o2.a_tilde(&o2.l0()),
            A2Dag => o2.a_tilde_dag(&o2.l0()),
            LPlus2D => o2.r(-1) * (o2.x(1) + o2.c(im(1, 1)) * o2.x(2)),
            LMinus2D => o2.r(-1) * (o2.x(1) - o2.c(im(1, 1)) * o2.x(2)),
            X2D | Y2D => {
                let lp = self.el(LPlus2D)?;
                let lm = self.el(LMinus2D)?;
                let first = lp * self.el(A2)?;
                let second = self.el(A2Dag)? * lm;
                if key.name == X2D {
                    (first + second).scale(&rat(1, 2))
                } else {
                    (first - second).scale(&im(-1, 2))
                }
            }
            A2M => radial_lowering_2d(&ScalarPoly::m()),
            A2MDag => radial_raising_2d(&ScalarPoly::m()),
            H2M => radial_hamiltonian_2d(&ScalarPoly::m()),
            A2MRaw | A2MRawDag => raw_radial_ladder_2d(&key.params, key.name == A2MRawDag)?,
            L3Op => o3.sigma_dot_l() + o3.c(&hb() * &rat(1, 2)),
            SigmaDotL => o3.sigma_dot_l(),
            A3 => o3.a_tilde(&self.el(L3Op)?),
            A3Dag => o3.a_tilde_dag(&self.el(L3Op)?),
            H3Alg => o3.h_alg(&self.el(L3Op)?),
            H3 => {
                let so = o3.c(&hb() * &ga()) * o3.r(-2) * o3.sigma_dot_l();
                let shift = o3.c(&(&(&hb() * &hb()) * &ga()) * &(&ga() + &rat(1, 1))) * o3.r(-2);
                o3.p_sq().scale(&rat(1, 2)) + so + shift.scale(&rat(1, 2)) - o3.c(al()) * o3.r(-1)
            }
            J(i) => {
                let i = index(key, i)?;
                o3.ang(i) + o3.c(&hb() * &rat(1, 2)) * o3.sig(i)
            }
            JSq => o3.sum((1..=3).map(|i| {
                let j = self.el(J(i)).expect("J components build");
                &j * &j
            })),
            LPlus3(k) | LMinus3(k) => {
                let k = index(key, k)?;
                let lhat = self.el(L3Op)?;
                let jm = realize_full(3)?.j_minus;
                if matches!(key.name, LPlus3(_)) {
                    o3.l_plus(k, &lhat, &jm)
                } else {
                    o3.l_minus(k, &lhat, &jm)
                }
            }
            X(j) | Y(j) => {
                index(key, j)?;
                let first = self.el(LPlus3(j))? * self.el(A3)?;
                let second = self.el(A3Dag)? * self.el(LMinus3(j))?;
                if matches!(key.name, X(_)) {
                    (first + second).scale(&rat(1, 2))
                } else {
                    (first - second).scale(&im(-1, 2))
                }
            }
            XRunge(j) => {
                let j = index(key, j)?;
                let a = runge_a(j);
                let sl = o3.sigma_dot_l();
                (&sl * &a + &a * &sl).scale(&rat(1, 2)) + a.scale(&(&hb() * &rat(3, 2)))
            }
            XExplicit(j) => x_explicit(index(key, j)?),
            FPoly => {
                let h = self.el(H3)?;
                let sl = o3.sigma_dot_l();
                let inner = (&sl * &sl).scale(&rat(4, 1))
                    + sl.scale(&(&hb() * &(&(&ga() * &rat(6, 1)) + &rat(5, 1))))
                    + o3.c(&(&(&hb() * &hb()) * &rat(2, 1)) * &(&(&ga() + &rat(1, 1)) * &(&ga() + &rat(1, 1))));
                o3.c(&al() * &al()) + h * inner
            }
            GPoly => {
                let h = self.el(H3)?;
                let sl = o3.sigma_dot_l();
                let jsq = self.el(JSq)?;
                let g1 = ga() + rat(1, 1);
                let h2 = &hb() * &hb();
                let h3 = &h2 * &hb();
                let first = (&sl + &o3.c(hb())).scale(&(&(&al() * &al()) * &rat(2, 1)));
                let inner = (&sl * &(&jsq + &(&sl * &sl))).scale(&rat(4, 1))
                    + (jsq.scale(&(&rat(1, 1) + &(&ga() * &rat(2, 1))))
                        + (&sl * &sl).scale(&(&g1 * &rat(4, 1))))
                    .scale(&(&hb() * &rat(2, 1)))
                    + sl.scale(&(&(&h2 * &rat(4, 1)) * &(&g1 * &(&ga() + &rat(2, 1)))))
                    + o3.c(&h3 * &(&(&rat(3, 1) + &(&ga() * &rat(6, 1))) + &(&(&ga() * &ga()) * &rat(4, 1))));
                (first + h * inner).scale(&(&im(-1, 2) * &hb()))
            }
        })
    }

    /// `KEY<TAB>one-line element` for every unparametrized recipe.
    pub fn dump(&self) -> Result<String, ModelError> {
        let mut out = String::new();
        for name in CatalogName::all() {
            if !name.required_params().is_empty() {
                continue;
            }
            let e = self.op(name)?;
            out += &format!("{name}\t{}\n", e.to_line());
        }
        Ok(out)
    }
}

fn index(key: &CatalogKey, i: u8) -> Result<usize, ModelError> {
    if (1..=3).contains(&i) {
        Ok(i as usize)
    } else {
        Err(ModelError::UnknownKey(key.to_string()))
    }
}

/// `𝒜_j = ½(p∧L − L∧p)_j + ħγ (p∧σ)_j + ½(x_j 𝒱 + 𝒱 x_j)` with
/// `𝒱 = −α/r + ħγ r⁻² σ·L + ħ²γ(2γ+1)/(2r²)`.
fn runge_a(j: usize) -> Element {
    let o = D3;
    let pl = o.wedge(j, |a| o.p(a), |b| o.ang(b));
    let lp = o.wedge(j, |a| o.ang(a), |b| o.p(b));
    let ps = o.wedge(j, |a| o.p(a), |b| o.sig(b));
    let v = -(o.c(al()) * o.r(-1))
        + o.c(&hb() * &ga()) * o.r(-2) * o.sigma_dot_l()
        + o.c(&(&(&hb() * &hb()) * &ga()) * &(&(&ga() * &rat(1, 1)) + &rat(1, 2))) * o.r(-2);
    (pl - lp).scale(&rat(1, 2))
        + ps.scale(&(&hb() * &ga()))
        + (o.x(j) * v.clone() + v * o.x(j)).scale(&rat(1, 2))
}

/// Expanded component of X, products taken in the printed order.
fn x_explicit(j: usize) -> Element {
    let o = D3;
    let sl = o.sigma_dot_l();
    let xp = o.x_dot_p();
    let p2 = o.p_sq();
    let h2 = &hb() * &hb();
    let g1 = &ga() + &rat(1, 1);
    let two_g1 = &(&ga() * &rat(2, 1)) + &rat(1, 1);

    let first = -(o.c(al()) * o.r(-1))
        + o.c(&(&h2 * &ga()) * &g1) * o.r(-2)
        + &sl * &p2
        + p2.scale(&(&hb() * &two_g1))
        + o.c(&(&h2 * &ga()) * &im(2, 1)) * o.r(-2) * xp.clone()
        - o.c(&hb() * &ga()) * o.r(-2) * (&xp * &xp);
    let second = -(&sl * &xp) + sl.scale(&im(1, 1)).scale(&hb())
        - o.c(&(&h2 * &ga()) * &im(1, 1))
        - xp.scale(&(&hb() * &g1))
        + o.c(&(&h2 * &g1) * &im(1, 1))
        + (o.c(al()).scale(&rat(-1, 1)) * o.r(-1) + o.c(&h2 * &(&ga() * &ga())) * o.r(-2)) * sl.clone();
    let third = p2.scale(&im(1, 2)).scale(&hb()) + o.c(&(&hb() * &al()) * &im(1, 2)) * o.r(-1)
        - o.c(&(&h2 * &ga()) * &rat(1, 2)) * o.r(-2) * xp.clone();
    let fourth = o.c(&(&h2 * &two_g1) * &rat(1, 2)) + xp.scale(&(&hb() * &im(1, 2)));

    o.x(j) * first
        + second * o.p(j)
        + o.wedge(j, |a| o.x(a), |b| o.sig(b)) * third
        + fourth * o.wedge(j, |a| o.p(a), |b| o.sig(b))
}

/// `K = m + ½ + γ` for a separation constant expression `m`.
fn k_factor(m: &ScalarPoly) -> ScalarPoly {
    &(m + &rat(1, 2)) + &ga()
}

/// `ħK (r⁻¹ x·p + iħ(m+γ) r⁻¹) − iα`
pub(crate) fn radial_lowering_2d(m: &ScalarPoly) -> Element {
    let o = D2;
    let mg = m + &ga();
    let inner = o.r(-1) * o.x_dot_p() + o.c(&(&hb() * &mg) * &im(1, 1)) * o.r(-1);
    inner.scale(&(&hb() * &k_factor(m))) - o.c(&al() * &im(1, 1))
}

/// `ħK (r⁻¹ x·p − iħ(m+γ+1) r⁻¹) + iα`
pub(crate) fn radial_raising_2d(m: &ScalarPoly) -> Element {
    let o = D2;
    let mg1 = &(m + &ga()) + &rat(1, 1);
    let inner = o.r(-1) * o.x_dot_p() + o.c(&(&hb() * &mg1) * &im(-1, 1)) * o.r(-1);
    inner.scale(&(&hb() * &k_factor(m))) + o.c(&al() * &im(1, 1))
}

/// `½p² − L₀²/(2r²) − α/r + ħ²(m+γ)²/(2r²)`
pub(crate) fn radial_hamiltonian_2d(m: &ScalarPoly) -> Element {
    let o = D2;
    let l0 = o.l0();
    let mg = m + &ga();
    let cent = o.c(&(&hb() * &hb()) * &(&mg * &mg)) - &l0 * &l0;
    o.p_sq().scale(&rat(1, 2)) + (o.r(-2) * cent).scale(&rat(1, 2)) - o.c(al()) * o.r(-1)
}

/// Uncleared `√2·a_m` (or its partner) with numeric ħ, γ, m.
fn raw_radial_ladder_2d(b: &Bindings, dagger: bool) -> Result<Element, ModelError> {
    let o = D2;
    let val = |s: Symbol| b.get(s).expect("checked by caller");
    let (h, g, m) = (val(Symbol::Hbar), val(Symbol::Gamma), val(Symbol::M));
    let k = m + q(1, 2) + g;
    if k.is_zero() || h.is_zero() {
        return Err(ModelError::Domain("m + ½ + γ and ħ must be nonzero".into()));
    }
    let sign = if dagger { -1 } else { 1 };
    // −iα/(ħK) on the lowering operator, +iα/(ħK) on the raising one
    let alpha_term = ScalarPoly::constant(GaussianRational::new(q(0, 1), -Rational::one() * sign / (h * k))) * al();
    let centrifugal = if dagger { m + g + Rational::one() } else { m + g };
    let cent = ScalarPoly::constant(GaussianRational::new(q(0, 1), h * centrifugal * sign));
    Ok(o.r(-1) * o.x_dot_p() + o.c(alpha_term) + o.c(cent) * o.r(-1))
}

/// `U⁻¹ e U` with `U = e^{ikφ} = (r⁻¹(x₁ + i x₂))^k`, for integer `k`.
pub fn conjugate_by_integer_gauge(e: &Element, k: Rational) -> Result<Element, ModelError> {
    if e.dim() != Dim::TWO {
        return Err(ModelError::WrongDimension { expected: 2, got: e.dim().get() });
    }
    if !k.is_integer() {
        return Err(ModelError::NonIntegerGauge(k));
    }
    let n = k.to_integer();
    let o = D2;
    let plus = o.r(-1) * (o.x(1) + o.c(im(1, 1)) * o.x(2));
    let minus = o.r(-1) * (o.x(1) - o.c(im(1, 1)) * o.x(2));
    let (u, u_inv) = if n >= 0 { (plus, minus) } else { (minus, plus) };
    let power = n.unsigned_abs() as u32;
    Ok(u_inv.pow(power) * e * u.pow(power))
}

/// `C⁽²⁾`, `C⁽³⁾` and `C₍₂₎` in 3D.
pub fn casimirs_3d() -> Result<[Element; 3], ModelError> {
    let d = Dim::THREE;
    Ok([
        casimir(&realize_sl2(d, &[1, 2])?),
        casimir(&realize_sl2(d, &[1, 2, 3])?),
        casimir(&realize_sl2(d, &[2, 3])?),
    ])
}

// ---------------------------------------------------------------------------
// radial reduction

/// Spin-orbit sector: `j = l + ½` (`plus`, `q = l`) or `j = l − ½`
/// (`minus`, `q = −l − 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }

    /// Orbital `l` carrying total `j` (given as `2j`) on this branch.
    pub fn orbital_l(self, two_j: u32) -> Option<u32> {
        match self {
            Branch::Plus => two_j.checked_sub(1).map(|t| t / 2),
            Branch::Minus => Some(two_j / 2 + 1).filter(|_| two_j % 2 == 1),
        }
    }

    /// `2j` for orbital `l`, `None` when the sector is empty.
    pub fn two_j(self, l: u32) -> Option<u32> {
        match self {
            Branch::Plus => Some(2 * l + 1),
            Branch::Minus => (l >= 1).then(|| 2 * l - 1),
        }
    }
}

impl FromStr for Branch {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(ModelError::Domain(format!("branch must be plus or minus, got `{s}`"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Floating-point model parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub hbar: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { hbar: 1.0, alpha: 1.0, gamma: 0.0 }
    }
}

/// `−(ħ²/2)(d²/dr² + (2/r) d/dr − λ(λ+1)/r²) − α/r`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialOperator1D {
    pub branch: Branch,
    pub l: u32,
    pub lambda: f64,
    pub params: Params,
}

impl RadialOperator1D {
    /// Effective potential `ħ²λ(λ+1)/(2r²) − α/r` seen by `u = rR`.
    pub fn effective_potential(&self, r: f64) -> f64 {
        let Params { hbar, alpha, .. } = self.params;
        hbar * hbar * self.lambda * (self.lambda + 1.0) / (2.0 * r * r) - alpha / r
    }

    /// `(Hρ)(r)` from `ρ, ρ', ρ''`.
    pub fn apply(&self, r: f64, rho: f64, d1: f64, d2: f64) -> f64 {
        let h2 = self.params.hbar * self.params.hbar;
        -0.5 * h2 * (d2 + 2.0 * d1 / r - self.lambda * (self.lambda + 1.0) * rho / (r * r))
            - self.params.alpha * rho / r
    }
}

/// Radial operator with `λ = l + γ` (plus) or `λ = l − γ` (minus).
pub fn radial_hamiltonian(branch: Branch, l: u32, params: Params) -> Result<RadialOperator1D, ModelError> {
    if !(params.hbar > 0.0 && params.alpha > 0.0 && params.gamma.is_finite()) {
        return Err(ModelError::Domain("need ħ > 0, α > 0 and finite γ".into()));
    }
    if branch == Branch::Minus && l == 0 {
        return Err(ModelError::Domain("minus branch needs l ≥ 1".into()));
    }
    let lambda = match branch {
        Branch::Plus => l as f64 + params.gamma,
        Branch::Minus => l as f64 - params.gamma,
    };
    Ok(RadialOperator1D { branch, l, lambda, params })
}

/// `L̂` of the `n`-variable realization: `L₀` in 2D, `σ·L + ħ/2` in 3D.
pub fn lhat(dim: Dim) -> Result<Element, ModelError> {
    match dim.get() {
        2 => Ok(D2.l0()),
        3 => Ok(D3.sigma_dot_l() + D3.c(&hb() * &rat(1, 2))),
        n => Err(ModelError::WrongDimension { expected: 3, got: n }),
    }
}

fn ops(dim: Dim) -> Result<Ops, ModelError> {
    match dim.get() {
        2 | 3 => Ok(Ops { dim }),
        n => Err(ModelError::WrongDimension { expected: 3, got: n }),
    }
}

/// `√2·A` as a function of the formal argument `L̂`.
pub fn ladder_lowering(dim: Dim, lhat: &Element) -> Result<Element, ModelError> {
    Ok(ops(dim)?.a_tilde(lhat))
}

/// `√2·A†` as a function of the formal argument `L̂`.
pub fn ladder_raising(dim: Dim, lhat: &Element) -> Result<Element, ModelError> {
    Ok(ops(dim)?.a_tilde_dag(lhat))
}

/// Hamiltonian in sl(2) form as a function of the formal argument `L̂`.
pub fn algebraic_hamiltonian(dim: Dim, lhat: &Element) -> Result<Element, ModelError> {
    Ok(ops(dim)?.h_alg(lhat))
}

/// Gauged 2D radial objects at a separation-constant expression `m`
/// (for instance `m + 1`): `(ã_m, ã_m†, H_m)`.
pub fn radial_family_2d(m: &ScalarPoly) -> (Element, Element, Element) {
    (radial_lowering_2d(m), radial_raising_2d(m), radial_hamiltonian_2d(m))
}
