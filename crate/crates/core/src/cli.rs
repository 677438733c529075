//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or tolerance failure, 2 usage or
//! configuration error. A `--config` file holds flat `key = value` lines
//! whose keys are the long flag names; flags given on the command line win.
//! Relative `--out` paths resolve against `SPINORBIT_OUT_DIR` when set.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::models::{Catalog, CatalogName};
use crate::opalg::parse_rational;
use crate::opalg::gauss::ratio_to_f64;
use crate::spectral::{
    closed_form_energy, closed_form_wavefunction, degeneracy_table, fd_spectrum, grid_study, spectrum_csv, Branch,
    GridStudyRow, Params, RadialProblem, Scheme, SpectrumRow,
};
use crate::verifier::{run_suites, SuiteId};

/// Environment variable naming the directory for relative `--out` paths.
pub const OUT_DIR_ENV: &str = "SPINORBIT_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "spinorbit", version, about = "Exact operator-algebra verifier and radial spectrum lab")]
pub struct Cli {
    /// Flat key=value file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run relation suites and report exact residuals
    Verify(VerifyArgs),
    /// Finite-difference bound spectrum against the closed form
    Spectrum(SpectrumArgs),
    /// Tabulate a closed-form radial eigenfunction
    Wavefunction(WavefunctionArgs),
    /// Group closed-form levels by energy
    Degeneracy(DegeneracyArgs),
    /// Print every parameter-free catalog operator, one per line
    CatalogDump(OutputArgs),
    /// Compare alternative constructions and grid resolutions
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct ParamArgs {
    /// ħ, as a decimal or p/q
    #[arg(long, value_parser = parse_number)]
    hbar: Option<f64>,
    /// Coulomb strength α, as a decimal or p/q
    #[arg(long, value_parser = parse_number)]
    alpha: Option<f64>,
    /// Spin-orbit coupling γ, as a decimal or p/q
    #[arg(long, value_parser = parse_number)]
    gamma: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite id such as CONSERVE_3D or SL2(2); a family name selects all its members
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Run every suite (the default when no suite is named)
    #[arg(long)]
    all: bool,
    /// Record per-relation wall time (makes output run-dependent)
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest orbital l
    #[arg(long)]
    lmax: Option<u32>,
    /// Largest radial quantum number n
    #[arg(long)]
    nmax: Option<u32>,
    /// plus, minus or both
    #[arg(long)]
    branch: Option<String>,
    /// Grid points of the coarse grid
    #[arg(long)]
    points: Option<usize>,
    /// Fixed box radius; sized per level when absent
    #[arg(long, value_parser = parse_number)]
    r_max: Option<f64>,
    /// weighted or plain
    #[arg(long)]
    scheme: Option<String>,
    /// Skip the two-grid Richardson step
    #[arg(long)]
    no_extrapolate: bool,
    /// Largest accepted relative error
    #[arg(long, value_parser = parse_number)]
    threshold: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct WavefunctionArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Radial quantum number
    #[arg(long)]
    n: Option<u32>,
    /// Twice the total angular momentum
    #[arg(long)]
    two_j: Option<u32>,
    /// plus or minus
    #[arg(long)]
    branch: Option<String>,
    /// Largest radius sampled
    #[arg(long, value_parser = parse_number)]
    r_max: Option<f64>,
    /// Number of equally spaced radii in (0, r_max]
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DegeneracyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest shell n + l + 1
    #[arg(long)]
    nmax: Option<u32>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Error table at three grid resolutions instead of the default report
    #[arg(long)]
    grid_study: bool,
    /// Coarsest grid of the study
    #[arg(long)]
    points: Option<usize>,
    /// Orbital l of the studied level
    #[arg(long)]
    l: Option<u32>,
    /// Radial quantum number of the studied level
    #[arg(long)]
    n: Option<u32>,
    /// plus or minus
    #[arg(long)]
    branch: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure of a command, mapped onto the exit-code contract.
#[derive(Debug)]
enum CliError {
    Usage(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Decimal or `p/q`; the rational is converted explicitly for numerical use.
fn parse_number(s: &str) -> Result<f64, String> {
    if s.contains('/') {
        return parse_rational(s).map(|r| ratio_to_f64(&r)).map_err(|e| e.to_string());
    }
    s.trim().parse::<f64>().map_err(|_| format!("`{s}` is neither a decimal nor p/q"))
}

const CONFIG_KEYS: &[&str] = &[
    "hbar", "alpha", "gamma", "suite", "all", "timings", "format", "out", "lmax", "nmax", "branch", "points", "r_max",
    "scheme", "extrapolate", "threshold", "n", "two_j", "samples", "grid_study", "l",
];

/// Values read from a `--config` file.
#[derive(Debug, Default)]
struct Settings(BTreeMap<String, String>);

impl Settings {
    fn load(path: Option<&Path>) -> Result<Settings, CliError> {
        let Some(path) = path else { return Ok(Settings::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Settings::parse(&text)
    }

    fn parse(text: &str) -> Result<Settings, CliError> {
        let mut map = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key = value", no + 1)))?;
            let key = k.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(usage(format!("config line {}: unknown key `{key}`", no + 1)));
            }
            map.insert(key, v.trim().to_string());
        }
        Ok(Settings(map))
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn number(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, CliError> {
        match (flag, self.raw(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(s)) => parse_number(s).map_err(|e| usage(format!("config `{key}`: {e}"))),
            (None, None) => Ok(default),
        }
    }

    fn opt_number(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        match (flag, self.raw(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(s)) => parse_number(s).map(Some).map_err(|e| usage(format!("config `{key}`: {e}"))),
            (None, None) => Ok(None),
        }
    }

    fn integer<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        match (flag, self.raw(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(s)) => s.parse().map_err(|_| usage(format!("config `{key}`: `{s}` is not an integer"))),
            (None, None) => Ok(default),
        }
    }

    fn text(&self, flag: Option<String>, key: &str, default: &str) -> String {
        flag.or_else(|| self.raw(key).map(str::to_string)).unwrap_or_else(|| default.to_string())
    }

    fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        match self.raw(key) {
            None | Some("false") | Some("0") => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some(s) => Err(usage(format!("config `{key}`: `{s}` is not a boolean"))),
        }
    }

    fn format(&self, out: &OutputArgs, default: Format) -> Result<Format, CliError> {
        match (out.format, self.raw("format")) {
            (Some(f), _) => Ok(f),
            (None, Some(s)) => Format::from_str(s, true).map_err(|_| usage(format!("config `format`: `{s}`"))),
            (None, None) => Ok(default),
        }
    }

    fn out(&self, out: &OutputArgs) -> Option<PathBuf> {
        out.out.clone().or_else(|| self.raw("out").map(PathBuf::from))
    }

    fn params(&self, p: &ParamArgs) -> Result<Params, CliError> {
        Ok(Params {
            hbar: self.number(p.hbar, "hbar", 1.0)?,
            alpha: self.number(p.alpha, "alpha", 1.0)?,
            gamma: self.number(p.gamma, "gamma", 0.0)?,
        })
    }
}

fn parse_branch(s: &str) -> Result<Branch, CliError> {
    s.parse().map_err(|e: crate::models::ModelError| usage(e.to_string()))
}

fn branches(s: &str) -> Result<Vec<Branch>, CliError> {
    match s {
        "both" => Ok(vec![Branch::Plus, Branch::Minus]),
        other => Ok(vec![parse_branch(other)?]),
    }
}

fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            use std::io::Write;
            // a closed pipe (`| head`) is not an error
            match std::io::stdout().lock().write_all(content.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage(format!("cannot write stdout: {e}"))),
                _ => Ok(()),
            }
        }
        Some(p) => {
            let path = resolve_out(&p);
            if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
            }
            std::fs::write(&path, content).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn cmd_verify(a: VerifyArgs, cfg: &Settings) -> CliResult {
    let mut names = a.suite.clone();
    if names.is_empty() {
        if let Some(s) = cfg.raw("suite") {
            names = s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
        }
    }
    let all = cfg.switch(a.all, "all")? || names.is_empty();
    let ids = if all {
        SuiteId::all()
    } else {
        let mut ids = Vec::new();
        for n in &names {
            let found = SuiteId::parse_selection(n).map_err(|_| {
                let known: Vec<String> = SuiteId::all().iter().map(|s| s.to_string()).collect();
                usage(format!("unknown suite `{n}`; known suites: {}", known.join(", ")))
            })?;
            ids.extend(found.into_iter().filter(|id| !ids.contains(id)).collect::<Vec<_>>());
        }
        ids
    };
    let mut report = run_suites(&ids).map_err(|e| usage(e.to_string()))?;
    if !cfg.switch(a.timings, "timings")? {
        report.strip_timings();
    }
    let body = match cfg.format(&a.output, Format::Text)? {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => return Err(usage("verify supports --format text or json")),
    };
    emit(cfg.out(&a.output), &body)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

/// Rows for one `(branch, l)` sector, plus human-readable problems.
fn spectrum_sector(
    branch: Branch,
    l: u32,
    nmax: u32,
    params: Params,
    grid: (Option<f64>, usize, Scheme, bool),
) -> (Vec<SpectrumRow>, Vec<String>) {
    let Some(two_j) = branch.two_j(l) else { return (Vec::new(), Vec::new()) };
    let (r_max, points, scheme, extrapolate) = grid;
    let mut rows: Vec<SpectrumRow> = (0..=nmax)
        .map(|n| SpectrumRow { branch, l, two_j, n, e_closed: None, e_fd: None, rel_error: None })
        .collect();
    let mut problems = Vec::new();
    let mut valid = Vec::new();
    for row in rows.iter_mut() {
        match closed_form_energy(row.n, two_j, branch, &params) {
            Ok(e) => {
                row.e_closed = Some(e);
                valid.push(row.n);
            }
            Err(e) => problems.push(format!("{branch} l={l} 2j={two_j} n={}: {e}", row.n)),
        }
    }
    let Some(&top) = valid.last() else { return (rows, problems) };
    let problem = RadialProblem::new(branch, l, params)
        .and_then(|p| p.with_grid(r_max, points))
        .and_then(|p| p.with_scheme(scheme));
    let result = problem.and_then(|p| fd_spectrum(&p, top + 1, extrapolate));
    match result {
        Ok(res) => {
            for lv in &res.levels {
                let row = &mut rows[lv.n as usize];
                if row.e_closed.is_some() {
                    row.e_fd = Some(lv.energy_fd);
                    row.rel_error = Some(lv.rel_error);
                }
            }
            if res.truncated {
                problems.push(format!("{branch} l={l}: only {} bound levels fit in the box", res.levels.len()));
            }
        }
        Err(e) => problems.push(format!("{branch} l={l}: finite differences unavailable: {e}")),
    }
    (rows, problems)
}

fn spectrum_text(rows: &[SpectrumRow]) -> String {
    let cell = |v: Option<f64>, prec: usize| v.map_or("-".to_string(), |x| format!("{x:.prec$e}"));
    let mut s = format!("{:<6} {:>2} {:>3} {:>2} {:>22} {:>22} {:>10}\n", "branch", "l", "2j", "n", "E_closed", "E_fd", "rel_error");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<6} {:>2} {:>3} {:>2} {:>22} {:>22} {:>10}",
            r.branch.name(),
            r.l,
            r.two_j,
            r.n,
            cell(r.e_closed, 15),
            cell(r.e_fd, 15),
            cell(r.rel_error, 3)
        );
    }
    s
}

fn cmd_spectrum(a: SpectrumArgs, cfg: &Settings) -> CliResult {
    let params = cfg.params(&a.params)?;
    let lmax = cfg.integer(a.lmax, "lmax", 2u32)?;
    let nmax = cfg.integer(a.nmax, "nmax", 3u32)?;
    let branch_list = branches(&cfg.text(a.branch, "branch", "both"))?;
    let points = cfg.integer(a.points, "points", RadialProblem::DEFAULT_POINTS)?;
    let r_max = cfg.opt_number(a.r_max, "r_max")?;
    let scheme: Scheme = cfg.text(a.scheme, "scheme", "weighted").parse()?;
    let extrapolate = match cfg.raw("extrapolate") {
        _ if a.no_extrapolate => false,
        None | Some("true") | Some("1") => true,
        Some("false") | Some("0") => false,
        Some(s) => return Err(usage(format!("config `extrapolate`: `{s}` is not a boolean"))),
    };
    let threshold = cfg.number(a.threshold, "threshold", 5e-6)?;
    if !(params.alpha > 0.0) {
        return Err(usage("spectrum needs α > 0"));
    }
    if points < 100 {
        return Err(usage("--points must be at least 100"));
    }
    let sectors: Vec<(Branch, u32)> =
        branch_list.iter().flat_map(|&b| (0..=lmax).map(move |l| (b, l))).collect();
    let parts: Vec<(Vec<SpectrumRow>, Vec<String>)> = sectors
        .par_iter()
        .map(|&(b, l)| spectrum_sector(b, l, nmax, params, (r_max, points, scheme, extrapolate)))
        .collect();
    let rows: Vec<SpectrumRow> = parts.iter().flat_map(|p| p.0.clone()).collect();
    let problems: Vec<String> = parts.iter().flat_map(|p| p.1.clone()).collect();
    let pass = problems.is_empty() && rows.iter().all(|r| r.rel_error.is_some_and(|e| e <= threshold));
    for p in &problems {
        eprintln!("rejected: {p}");
    }
    let body = match cfg.format(&a.output, Format::Csv)? {
        Format::Csv => spectrum_csv(&rows),
        Format::Text => spectrum_text(&rows),
        Format::Json => to_json(&json!({
            "hbar": params.hbar,
            "alpha": params.alpha,
            "gamma": params.gamma,
            "scheme": scheme,
            "extrapolated": extrapolate,
            "threshold": threshold,
            "rows": rows,
            "rejected": problems,
            "pass": pass,
        })),
    };
    emit(cfg.out(&a.output), &body)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_wavefunction(a: WavefunctionArgs, cfg: &Settings) -> CliResult {
    let params = cfg.params(&a.params)?;
    let n = cfg.integer(a.n, "n", 0u32)?;
    let two_j = cfg.integer(a.two_j, "two_j", 1u32)?;
    let branch = parse_branch(&cfg.text(a.branch, "branch", "plus"))?;
    let r_max = cfg.number(a.r_max, "r_max", 20.0)?;
    let samples = cfg.integer(a.samples, "samples", 200usize)?;
    if samples == 0 || !(r_max > 0.0) {
        return Err(usage("need --samples ≥ 1 and --r-max > 0"));
    }
    let mut points = Vec::with_capacity(samples);
    for i in 1..=samples {
        let r = r_max * i as f64 / samples as f64;
        match closed_form_wavefunction(n, two_j, branch, &params, r) {
            Ok(v) => points.push((r, v)),
            Err(e) => {
                eprintln!("rejected: {e}");
                return Ok(EXIT_FAIL);
            }
        }
    }
    let body = match cfg.format(&a.output, Format::Csv)? {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "R"])?;
            for (r, v) in &points {
                w.serialize((r, v))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| usage(e.to_string()))?)?
        }
        Format::Text => points.iter().map(|(r, v)| format!("{r:.6} {v:.15e}\n")).collect(),
        Format::Json => to_json(&json!({
            "n": n, "two_j": two_j, "branch": branch, "hbar": params.hbar, "alpha": params.alpha,
            "gamma": params.gamma, "points": points,
        })),
    };
    emit(cfg.out(&a.output), &body)?;
    Ok(EXIT_OK)
}

fn cmd_degeneracy(a: DegeneracyArgs, cfg: &Settings) -> CliResult {
    let params = cfg.params(&a.params)?;
    let n_max = cfg.integer(a.nmax, "nmax", 3u32)?;
    let table = degeneracy_table(&params, n_max)?;
    let body = match cfg.format(&a.output, Format::Json)? {
        Format::Json => to_json(&table),
        Format::Text => {
            let mut s = String::new();
            for lv in &table.levels {
                let states: Vec<String> = lv
                    .states
                    .iter()
                    .map(|st| format!("(n={},l={},2j={},{})", st.n, st.l, st.two_j, st.branch))
                    .collect();
                let _ = writeln!(s, "E={:.15e} multiplicity={} {}", lv.energy, lv.multiplicity, states.join(" "));
            }
            s
        }
        Format::Csv => return Err(usage("degeneracy supports --format json or text")),
    };
    emit(cfg.out(&a.output), &body)?;
    Ok(EXIT_OK)
}

fn cmd_catalog_dump(a: OutputArgs, cfg: &Settings) -> CliResult {
    if !matches!(cfg.format(&a, Format::Text)?, Format::Text) {
        return Err(usage("catalog-dump supports --format text"));
    }
    let dump = Catalog::global().dump()?;
    emit(cfg.out(&a), &dump)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ConstructionDiff {
    j: u8,
    pair: &'static str,
    difference_terms: usize,
}

#[derive(Serialize)]
struct Conservation {
    name: String,
    commutator_terms: usize,
}

fn x_construction_report() -> Result<(Vec<ConstructionDiff>, Vec<Conservation>), CliError> {
    let cat = Catalog::global();
    let h = cat.op(CatalogName::H3)?;
    let mut diffs = Vec::new();
    let mut cons = Vec::new();
    for j in 1..=3u8 {
        let x = cat.op(CatalogName::X(j))?;
        let xr = cat.op(CatalogName::XRunge(j))?;
        let xe = cat.op(CatalogName::XExplicit(j))?;
        for (pair, a, b) in [("X/X_RUNGE", &x, &xr), ("X/X_EXPLICIT", &x, &xe), ("X_RUNGE/X_EXPLICIT", &xr, &xe)] {
            diffs.push(ConstructionDiff { j, pair, difference_terms: (a.as_ref() - b.as_ref()).len() });
        }
        for (name, e) in [(CatalogName::X(j), &x), (CatalogName::XRunge(j), &xr), (CatalogName::XExplicit(j), &xe)] {
            let c = h.commutator(e).map_err(|e| usage(e.to_string()))?;
            cons.push(Conservation { name: name.to_string(), commutator_terms: c.len() });
        }
    }
    Ok((diffs, cons))
}

fn cmd_compare(a: CompareArgs, cfg: &Settings) -> CliResult {
    let params = cfg.params(&a.params)?;
    let format = cfg.format(&a.output, Format::Text)?;
    if format == Format::Csv {
        return Err(usage("compare supports --format text or json"));
    }
    let body = if cfg.switch(a.grid_study, "grid_study")? {
        let branch = parse_branch(&cfg.text(a.branch, "branch", "plus"))?;
        let l = cfg.integer(a.l, "l", 0u32)?;
        let n = cfg.integer(a.n, "n", 0u32)?;
        let points = cfg.integer(a.points, "points", 2000usize)?;
        let mut rows: Vec<GridStudyRow> = Vec::new();
        for scheme in [Scheme::Plain, Scheme::Weighted] {
            let p = RadialProblem::new(branch, l, params)?.with_grid(None, points)?.with_scheme(scheme)?;
            rows.extend(grid_study(&p, n, points)?);
        }
        match format {
            Format::Json => to_json(&json!({ "branch": branch, "l": l, "n": n, "rows": rows })),
            _ => {
                let mut s = format!("{:<8} {:>7} {:>12} {:>22} {:>10} {:>9}\n", "scheme", "points", "h", "E_fd", "rel_error", "reduction");
                for r in &rows {
                    let red = r.reduction.map_or("-".to_string(), |x| format!("{x:.3}"));
                    let name = if r.scheme == Scheme::Plain { "plain" } else { "weighted" };
                    let _ = writeln!(s, "{:<8} {:>7} {:>12.6e} {:>22.15e} {:>10.3e} {:>9}", name, r.points, r.h, r.energy_fd, r.rel_error, red);
                }
                s
            }
        }
    } else {
        let (diffs, cons) = x_construction_report()?;
        let agree: Vec<String> = diffs
            .iter()
            .filter(|d| d.difference_terms == 0)
            .map(|d| format!("{}_{}", d.pair, d.j))
            .collect();
        let mut fd = Vec::new();
        for (branch, l, n) in [(Branch::Plus, 0u32, 0u32), (Branch::Plus, 0, 1), (Branch::Plus, 1, 0), (Branch::Minus, 1, 0)] {
            let mut rows = spectrum_sector(branch, l, n, params, (None, RadialProblem::DEFAULT_POINTS, Scheme::Weighted, true)).0;
            if let Some(r) = rows.pop() {
                fd.push(r);
            }
        }
        match format {
            Format::Json => to_json(&json!({
                "x_constructions": diffs,
                "conservation": cons,
                "exact_agreements": agree,
                "fd_vs_closed": fd,
            })),
            _ => {
                let mut s = String::from("X constructions (difference term counts)\n");
                for d in &diffs {
                    let _ = writeln!(s, "  j={} {:<20} {}", d.j, d.pair, d.difference_terms);
                }
                s += "commutators with H (term counts)\n";
                for c in &cons {
                    let _ = writeln!(s, "  {:<14} {}", c.name, c.commutator_terms);
                }
                let _ = writeln!(s, "exact agreements: {}", if agree.is_empty() { "none".to_string() } else { agree.join(", ") });
                s += "finite differences against closed form\n";
                s += &spectrum_text(&fd);
                s
            }
        }
    };
    emit(cfg.out(&a.output), &body)?;
    Ok(EXIT_OK)
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let outcome = Settings::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Verify(a) => cmd_verify(a, &cfg),
        Command::Spectrum(a) => cmd_spectrum(a, &cfg),
        Command::Wavefunction(a) => cmd_wavefunction(a, &cfg),
        Command::Degeneracy(a) => cmd_degeneracy(a, &cfg),
        Command::CatalogDump(a) => cmd_catalog_dump(a, &cfg),
        Command::Compare(a) => cmd_compare(a, &cfg),
    });
    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `spinorbit --help` for usage");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_accept_decimals_and_fractions() {
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert_eq!(parse_number("3/4").unwrap(), 0.75);
        assert!(parse_number("x").is_err());
    }

    #[test]
    fn config_lines() {
        let s = Settings::parse("# comment\n\nhbar = 1/2\nr-max=40 # trailing\n").unwrap();
        assert_eq!(s.number(None, "hbar", 1.0).unwrap(), 0.5);
        assert_eq!(s.number(Some(2.0), "hbar", 1.0).unwrap(), 2.0);
        assert_eq!(s.opt_number(None, "r_max").unwrap(), Some(40.0));
        assert!(Settings::parse("bogus = 1").is_err());
        assert!(Settings::parse("no equals sign").is_err());
    }
}
