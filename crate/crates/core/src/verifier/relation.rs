use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::opalg::{Bindings, Element};
use crate::Error;

type ExactFn = Box<dyn Fn() -> Result<Element, Error> + Send + Sync>;
type SampledFn = Box<dyn Fn(&Bindings) -> Result<Element, Error> + Send + Sync>;
type DiagFn = Box<dyn Fn() -> Result<Diagnosis, Error> + Send + Sync>;

enum Check {
    Exact(ExactFn),
    Sampled { samples: Vec<Bindings>, residual: SampledFn },
}

/// A claimed identity `lhs = rhs`, evaluated lazily to its residual.
pub struct Relation {
    pub id: String,
    check: Check,
}

impl Relation {
    /// Residual of already built sides.
    pub fn exact(id: impl Into<String>, lhs: Element, rhs: Element) -> Relation {
        Relation::lazy(id, move || Ok(lhs.try_sub(&rhs)?))
    }

    /// `[a, b] = 0`, computed when the suite runs.
    pub fn commutes(id: impl Into<String>, a: &Element, b: &Element) -> Relation {
        let (a, b) = (a.clone(), b.clone());
        Relation::lazy(id, move || Ok(a.commutator(&b)?))
    }

    /// Residual produced by `f`; passes iff it is the zero element.
    pub fn lazy(
        id: impl Into<String>,
        f: impl Fn() -> Result<Element, Error> + Send + Sync + 'static,
    ) -> Relation {
        Relation { id: id.into(), check: Check::Exact(Box::new(f)) }
    }

    /// Residual evaluated once per parameter sample; passes iff every
    /// residual is zero.
    pub fn sampled(
        id: impl Into<String>,
        samples: Vec<Bindings>,
        f: impl Fn(&Bindings) -> Result<Element, Error> + Send + Sync + 'static,
    ) -> Relation {
        Relation { id: id.into(), check: Check::Sampled { samples, residual: Box::new(f) } }
    }

    pub fn run(&self) -> RelationResult {
        let start = Instant::now();
        let mut out = RelationResult {
            id: self.id.clone(),
            pass: false,
            residual_terms: 0,
            millis: None,
            residual: String::new(),
            samples: Vec::new(),
            error: None,
        };
        match &self.check {
            Check::Exact(f) => match f() {
                Ok(res) => {
                    out.pass = res.is_zero();
                    out.residual_terms = res.len();
                    if !out.pass {
                        out.residual = res.to_line();
                    }
                }
                Err(e) => out.error = Some(e.to_string()),
            },
            Check::Sampled { samples, residual } => {
                out.samples = samples.iter().map(|b| b.to_string()).collect();
                let results: Vec<Result<Element, Error>> = samples.par_iter().map(residual).collect();
                out.pass = !samples.is_empty();
                for (b, r) in samples.iter().zip(results) {
                    match r {
                        Ok(res) if res.is_zero() => {}
                        Ok(res) => {
                            if out.pass {
                                out.residual = format!("at {b}: {}", res.to_line());
                            }
                            out.pass = false;
                            out.residual_terms += res.len();
                        }
                        Err(e) => {
                            out.pass = false;
                            out.error.get_or_insert_with(|| format!("at {b}: {e}"));
                        }
                    }
                }
            }
        }
        out.millis = Some(start.elapsed().as_millis() as u64);
        out
    }
}

/// Outcome of a report-only check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    /// Term count of the relevant residual, when there is one.
    pub residual_terms: Option<usize>,
    pub detail: String,
}

impl Diagnosis {
    pub fn note(detail: impl Into<String>) -> Diagnosis {
        Diagnosis { residual_terms: None, detail: detail.into() }
    }

    /// `detail` plus the size of `residual`, with the residual appended
    /// when it is nonzero.
    pub fn residual(detail: impl Into<String>, residual: &Element) -> Diagnosis {
        let mut d = detail.into();
        if !residual.is_zero() {
            d = format!("{d}; residual: {}", residual.to_line());
        }
        Diagnosis { residual_terms: Some(residual.len()), detail: d }
    }
}

/// A reported quantity that is never asserted.
pub struct Diagnostic {
    pub id: String,
    f: DiagFn,
}

impl Diagnostic {
    pub fn lazy(
        id: impl Into<String>,
        f: impl Fn() -> Result<Diagnosis, Error> + Send + Sync + 'static,
    ) -> Diagnostic {
        Diagnostic { id: id.into(), f: Box::new(f) }
    }

    pub fn run(&self) -> DiagnosticResult {
        match (self.f)() {
            Ok(d) => DiagnosticResult { id: self.id.clone(), residual_terms: d.residual_terms, detail: d.detail },
            Err(e) => DiagnosticResult { id: self.id.clone(), residual_terms: None, detail: format!("error: {e}") },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationResult {
    pub id: String,
    pub pass: bool,
    pub residual_terms: usize,
    /// Wall time; `None` unless timings were requested, which keeps
    /// reports byte-identical across runs.
    pub millis: Option<u64>,
    /// One-line serialized residual; empty when the relation holds.
    pub residual: String,
    /// Parameter samples used by a sampled relation.
    pub samples: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticResult {
    pub id: String,
    pub residual_terms: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub relations: Vec<RelationResult>,
    pub diagnostics: Vec<DiagnosticResult>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn from_relations(suite: impl Into<String>, rels: Vec<Relation>) -> SuiteReport {
        SuiteReport::run(suite, rels, Vec::new())
    }

    /// Evaluate every check in parallel; results keep input order.
    pub fn run(suite: impl Into<String>, rels: Vec<Relation>, diags: Vec<Diagnostic>) -> SuiteReport {
        let (relations, diagnostics) = rayon::join(
            || rels.par_iter().map(Relation::run).collect::<Vec<_>>(),
            || diags.par_iter().map(Diagnostic::run).collect::<Vec<_>>(),
        );
        let pass = relations.iter().all(|r| r.pass);
        SuiteReport { suite: suite.into(), relations, diagnostics, pass }
    }

    pub fn relation(&self, id: &str) -> Option<&RelationResult> {
        self.relations.iter().find(|r| r.id == id)
    }

    pub fn diagnostic(&self, id: &str) -> Option<&DiagnosticResult> {
        self.diagnostics.iter().find(|d| d.id == id)
    }

    pub fn strip_timings(&mut self) {
        for r in &mut self.relations {
            r.millis = None;
        }
    }

    /// Human-readable summary, one line per relation and diagnostic.
    pub fn to_text(&self) -> String {
        let mut s = format!("suite {} {}\n", self.suite, if self.pass { "PASS" } else { "FAIL" });
        for r in &self.relations {
            s += &format!("  {} {}", if r.pass { "ok  " } else { "FAIL" }, r.id);
            if let Some(ms) = r.millis {
                s += &format!(" ({ms} ms)");
            }
            if !r.samples.is_empty() {
                s += &format!(" [{} samples]", r.samples.len());
            }
            if !r.pass {
                s += &format!(" residual_terms={}", r.residual_terms);
            }
            if let Some(e) = &r.error {
                s += &format!(" error: {e}");
            }
            s.push('\n');
        }
        for d in &self.diagnostics {
            s += &format!("  note {}: {}\n", d.id, clip(&d.detail, TEXT_DETAIL_CHARS));
        }
        s
    }
}

/// Diagnostic details longer than this are shortened in text reports.
const TEXT_DETAIL_CHARS: usize = 240;

fn clip(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((cut, _)) => format!("{} … ({} chars)", &s[..cut], s.chars().count()),
        None => s.to_string(),
    }
}

/// Collection of suite reports with an overall verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl Report {
    pub fn new(suites: Vec<SuiteReport>) -> Report {
        let pass = suites.iter().all(|s| s.pass);
        Report { suites, pass }
    }

    pub fn strip_timings(&mut self) {
        self.suites.iter_mut().for_each(SuiteReport::strip_timings);
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self.suites.iter().map(SuiteReport::to_text).collect();
        s += &format!("overall {}\n", if self.pass { "PASS" } else { "FAIL" });
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
