//! Suites of exact relation checks and the closure-coefficient solver.

mod closure;
mod relation;
mod suites;

pub use closure::{solve_closure_coefficients, ClosureFit};
pub use relation::{Diagnosis, Diagnostic, DiagnosticResult, Relation, RelationResult, Report, SuiteReport};
pub use suites::{fit_f, fit_xy, run_suite, run_suites, SuiteId};
