//! Command-line front end. Every command renders to a string so it can be
//! exercised without spawning a process; the binary only prints.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arrangement::{
    cross_validate, dense_edges_formula, euler_characteristic_magnitude, find_shift,
    nonresonance_verdict, ArrangementSpec, CrossValidation, EdgeRecord, ShiftVector, VerdictMode,
};
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::exact_linalg::{format_rational, parse_rational, Rational, RationalMatrix};
use crate::multiplicity::{
    decomposition_via_recursion, decomposition_via_tensor, w_via_recursion, w_via_tensor,
};
use crate::orlik_solomon::{
    poincare_dims, verify_main_theorem, IntegerWeightVector, OrlikSolomon, VerifyReport,
    DEFAULT_MAX_DIM,
};
use crate::sl2_weight::{
    e_matrix_dual, f_matrix_dual, f_matrix_irreducible, kernel_cokernel_dims, predicted_dims,
    shapovalov_matrix, HighestWeights, Regime,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SCALE: i32 = 3;

/// Environment variable overriding the default cap on `dim A^k`.
pub const MAX_DIM_ENV: &str = "DISCRIM_MAX_DIM";

/// Default cap on the source dimension `C(n+k-2, k-1)` in sweeps.
pub const DEFAULT_MAX_SOURCE_DIM: u128 = 2000;

#[derive(Debug, Parser)]
#[command(
    name = "discrim",
    version,
    about = "Exact sl2 weight-space and Aomoto cohomology computations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    /// `A_k(m)`, degree k-1 → degree k on the dual Verma side
    F,
    /// `E_k`, degree k → degree k-1
    E,
    /// f on the irreducible tensor product
    FIrreducible,
    /// Shapovalov map, irreducible → dual Verma, degree k
    Shapovalov,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel and cokernel of A_k(m) against the multiplicity prediction
    Kernel(KernelArgs),
    /// Multiplicities w(m, j) by both algorithms
    W(WArgs),
    /// Aomoto cohomology of the discriminantal arrangement
    Aomoto(AomotoArgs),
    /// Dense edges with weights and nonresonance verdicts
    Dense(DenseArgs),
    /// Graded dimensions and Euler characteristic of the complement
    Euler(EulerArgs),
    /// Kernel theorem over a grid of (m, k)
    Sweep(SweepArgs),
    /// Dump an operator matrix as JSON
    DumpMatrix(DumpArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Comma-separated highest weights
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub j: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AomotoArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated distinct rationals z_1..z_n (default 0,1,..,n-1)
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Skew-symmetric part only (combine with --full for both)
    #[arg(long)]
    pub skew: bool,
    #[arg(long)]
    pub full: bool,
    /// Compare skew cohomology with ker/coker of A_k(m)
    #[arg(long)]
    pub verify: bool,
    /// Cap on dim A^k (overrides DISCRIM_MAX_DIM)
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DenseArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated integer shift a (default: found automatically when possible)
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Cross-check the formula against exhaustive enumeration
    #[arg(long)]
    pub bruteforce: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EulerArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Also build the algebra and compare its dimensions
    #[arg(long)]
    pub compute: bool,
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0)]
    pub m_min: u32,
    #[arg(long)]
    pub m_max: u32,
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long)]
    pub k_max: u32,
    /// Skip cases whose source dimension C(n+k-2, k-1) exceeds this
    #[arg(long, default_value_t = DEFAULT_MAX_SOURCE_DIM)]
    pub max_source_dim: u128,
    /// Also verify skew Aomoto cohomology on cases with k, n <= 3
    #[arg(long)]
    pub aomoto: bool,
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value = "f")]
    pub kind: MatrixKind,
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, pass: bool) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: if pass { EXIT_OK } else { EXIT_FAILURE },
        }
    }

    fn error(e: &Error) -> Self {
        let code = match e {
            Error::ScaleGuard { .. } => EXIT_SCALE,
            Error::Internal(_) => EXIT_FAILURE,
            _ => EXIT_INVALID,
        };
        Self {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(out) => out,
        Err(e) => Outcome::error(&e),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Kernel(a) => cmd_kernel(a),
        Command::W(a) => cmd_multiplicity(a),
        Command::Aomoto(a) => cmd_aomoto(a),
        Command::Dense(a) => cmd_dense_edges(a),
        Command::Euler(a) => cmd_euler(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::DumpMatrix(a) => cmd_dump_matrix(a),
    }
}

fn parse_list<T>(s: &str, what: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Err(Error::InvalidInput(format!("{what} must be nonempty")));
    }
    s.split(',').map(|t| f(t.trim())).collect()
}

fn parse_z(z: &Option<String>) -> Result<Option<Vec<Rational>>> {
    z.as_deref()
        .map(|s| parse_list(s, "z", parse_rational))
        .transpose()
}

fn parse_shift(a: &str) -> Result<ShiftVector> {
    Ok(ShiftVector(parse_list(a, "a", |t| {
        t.parse::<i64>()
            .map_err(|e| Error::InvalidInput(format!("bad shift entry {t:?}: {e}")))
    })?))
}

fn require_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    Ok(())
}

fn max_dim(flag: Option<usize>) -> Result<usize> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| Error::InvalidInput(format!("{MAX_DIM_ENV}={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn csv_table<R: Serialize>(rows: &[R], header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// One `(m, k)` case of the kernel theorem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCase {
    pub n: usize,
    pub k: u32,
    pub m: String,
    pub total: u64,
    pub regime: Regime,
    pub ker_computed: u64,
    pub ker_predicted: u64,
    pub coker_computed: u64,
    pub coker_predicted: u64,
    /// `w(m, |m|-k+1)` by tensor folding; empty outside the resonant range.
    pub w_tensor: Option<u64>,
    pub w_recursion: Option<u64>,
    pub pass: bool,
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "n",
    "k",
    "m",
    "|m|",
    "regime",
    "ker_computed",
    "ker_predicted",
    "coker_computed",
    "coker_predicted",
    "w_tensor",
    "w_recursion",
    "pass",
];

pub fn kernel_case(m: &HighestWeights, k: u32) -> Result<KernelCase> {
    let (ker, coker) = kernel_cokernel_dims(m, k)?;
    let p = predicted_dims(m, k)?;
    let (w_tensor, w_recursion) = if p.regime == Regime::Resonant {
        let j = m.total() + 1 - u64::from(k);
        (Some(w_via_tensor(m, j)), Some(w_via_recursion(m, j)))
    } else {
        (None, None)
    };
    Ok(KernelCase {
        n: m.n(),
        k,
        m: m.to_string(),
        total: m.total(),
        regime: p.regime,
        ker_computed: ker,
        ker_predicted: p.kernel,
        coker_computed: coker,
        coker_predicted: p.cokernel,
        pass: ker == p.kernel && coker == p.cokernel && w_tensor == w_recursion,
        w_tensor,
        w_recursion,
    })
}

impl KernelCase {
    pub fn csv_record(&self) -> Vec<String> {
        let o = |v: Option<u64>| v.map_or_else(String::new, |x| x.to_string());
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.m.clone(),
            self.total.to_string(),
            self.regime.to_string(),
            self.ker_computed.to_string(),
            self.ker_predicted.to_string(),
            self.coker_computed.to_string(),
            self.coker_predicted.to_string(),
            o(self.w_tensor),
            o(self.w_recursion),
            self.pass.to_string(),
        ]
    }
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

pub fn cmd_kernel(a: &KernelArgs) -> Result<Outcome> {
    let m = HighestWeights::parse(&a.m)?;
    if a.k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let c = kernel_case(&m, a.k)?;
    let text = match a.out.output {
        OutputFormat::Json => to_json(&c),
        OutputFormat::Csv => csv_table(&[c.csv_record()], &SWEEP_COLUMNS)?,
        OutputFormat::Text => format!(
            "m=({}) k={} regime={}\nkernel={} cokernel={}\npredicted kernel={} cokernel={}\nw_tensor={} w_recursion={}\npredicted-match={}\n",
            c.m,
            c.k,
            c.regime,
            c.ker_computed,
            c.coker_computed,
            c.ker_predicted,
            c.coker_predicted,
            opt(c.w_tensor),
            opt(c.w_recursion),
            c.pass
        ),
    };
    Ok(Outcome::ok(text, c.pass))
}

pub fn cmd_multiplicity(a: &WArgs) -> Result<Outcome> {
    let m = HighestWeights::parse(&a.m)?;
    let (tensor, recursion): (BTreeMap<u64, u64>, BTreeMap<u64, u64>) = match a.j {
        Some(j) => (
            BTreeMap::from([(j, w_via_tensor(&m, j))]),
            BTreeMap::from([(j, w_via_recursion(&m, j))]),
        ),
        None => {
            let nonzero = |c: BTreeMap<u64, u64>| c.into_iter().filter(|&(_, w)| w > 0).collect();
            (
                nonzero(decomposition_via_tensor(&m).counts),
                nonzero(decomposition_via_recursion(&m).counts),
            )
        }
    };
    let agree = tensor == recursion;
    let text = match a.out.output {
        OutputFormat::Json => {
            let key = |c: &BTreeMap<u64, u64>| -> BTreeMap<String, u64> {
                c.iter().map(|(j, w)| (j.to_string(), *w)).collect()
            };
            to_json(&json!({
                "m": m,
                "j": a.j,
                "w_tensor": key(&tensor),
                "w_recursion": key(&recursion),
                "agree": agree,
            }))
        }
        OutputFormat::Csv => {
            let rows: Vec<(u64, u64, u64)> = tensor
                .iter()
                .map(|(&j, &w)| (j, w, recursion.get(&j).copied().unwrap_or(0)))
                .collect();
            csv_table(&rows, &["j", "w_tensor", "w_recursion"])?
        }
        OutputFormat::Text => {
            let show = |c: &BTreeMap<u64, u64>| match a.j {
                Some(j) => c[&j].to_string(),
                None => format!(
                    "{{{}}}",
                    c.iter()
                        .map(|(j, w)| format!("{j}:{w}"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            };
            format!(
                "tensor: {}\nrecursion: {}\nagree={agree}\n",
                show(&tensor),
                show(&recursion)
            )
        }
    };
    Ok(Outcome::ok(text, agree))
}

#[derive(Debug, Serialize)]
struct AomotoReport {
    k: usize,
    n: usize,
    m: HighestWeights,
    z: Vec<String>,
    os_dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    full: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skew: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<VerifyReport>,
}

fn dims_text(label: &str, dims: &[usize]) -> String {
    let parts: Vec<String> = dims
        .iter()
        .enumerate()
        .map(|(q, d)| format!("H^{q}={d}"))
        .collect();
    format!("{label}: {}\n", parts.join(" "))
}

pub fn cmd_aomoto(a: &AomotoArgs) -> Result<Outcome> {
    let m = HighestWeights::parse(&a.m)?;
    require_k(a.k)?;
    let spec = ArrangementSpec::build(a.k, m.n(), parse_z(&a.z)?)?;
    let os = OrlikSolomon::with_limit(spec, max_dim(a.max_dim)?)?;
    let weights = IntegerWeightVector::master(&m, os.spec())?;
    let want_full = a.full || !a.skew;
    let full = want_full
        .then(|| os.aomoto_cohomology_dims(&weights))
        .transpose()?;
    let skew = a
        .skew
        .then(|| os.skew_cohomology_dims(&weights))
        .transpose()?;
    let verify = a.verify.then(|| verify_main_theorem(&os, &m)).transpose()?;
    let pass = verify.as_ref().is_none_or(|r| r.pass);
    let report = AomotoReport {
        k: a.k,
        n: m.n(),
        z: os.spec().z().iter().map(format_rational).collect(),
        m,
        os_dims: os.dims(),
        full,
        skew,
        verify,
    };
    let text = match a.out.output {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let rows: Vec<(usize, usize, String, String)> = (0..=report.k)
                .map(|q| {
                    let pick = |v: &Option<Vec<usize>>| {
                        v.as_ref().map_or_else(String::new, |d| d[q].to_string())
                    };
                    (q, report.os_dims[q], pick(&report.full), pick(&report.skew))
                })
                .collect();
            csv_table(&rows, &["q", "os_dim", "full", "skew"])?
        }
        OutputFormat::Text => {
            let mut s = format!("m=({}) k={} n={}\n", report.m, report.k, report.n);
            s += &format!(
                "os dims: {}\n",
                report
                    .os_dims
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            if let Some(d) = &report.full {
                s += &dims_text("full", d);
            }
            if let Some(d) = &report.skew {
                s += &dims_text("skew", d);
            }
            if let Some(r) = &report.verify {
                for c in &r.checks {
                    s += &format!(
                        "  {}: {} vs {} {}\n",
                        c.name,
                        c.lhs,
                        c.rhs,
                        if c.pass { "ok" } else { "FAIL" }
                    );
                }
                s += if r.pass {
                    "verify: pass\n"
                } else {
                    "verify: FAIL\n"
                };
            }
            s
        }
    };
    Ok(Outcome::ok(text, pass))
}

#[derive(Debug, Serialize)]
struct DenseReport {
    k: usize,
    n: usize,
    m: HighestWeights,
    a: ShiftVector,
    shift_source: &'static str,
    edges: Vec<EdgeRecord>,
    comb: bool,
    nonres: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce: Option<CrossValidation>,
}

pub fn cmd_dense_edges(a: &DenseArgs) -> Result<Outcome> {
    let m = HighestWeights::parse(&a.m)?;
    require_k(a.k)?;
    let n = m.n();
    let (shift, source) = match &a.a {
        Some(s) => (parse_shift(s)?, "given"),
        None => match find_shift(&m, a.k) {
            Ok(s) => (s, "found"),
            Err(Error::Precondition(_)) => (ShiftVector::zero(n), "zero"),
            Err(e) => return Err(e),
        },
    };
    if shift.0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: shift.0.len(),
        });
    }
    let edges: Vec<EdgeRecord> = dense_edges_formula(a.k, n, &m, &shift)?
        .iter()
        .map(EdgeRecord::from)
        .collect();
    let comb = nonresonance_verdict(edges.iter().map(|e| &e.weight), VerdictMode::Comb);
    let nonres = nonresonance_verdict(edges.iter().map(|e| &e.weight), VerdictMode::Nonres);
    let bruteforce = if a.bruteforce {
        let spec = ArrangementSpec::build(a.k, n, parse_z(&a.z)?)?;
        Some(cross_validate(&spec, &m, &shift)?)
    } else {
        None
    };
    let pass = bruteforce
        .as_ref()
        .is_none_or(|c| c.weights_match && c.edges_match);
    let report = DenseReport {
        k: a.k,
        n,
        m,
        a: shift,
        shift_source: source,
        edges,
        comb,
        nonres,
        bruteforce,
    };
    let text = match a.out.output {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let rows: Vec<(String, usize, String, String, String)> = report
                .edges
                .iter()
                .map(|e| {
                    (
                        e.kind.clone(),
                        e.codim,
                        e.hyperplanes
                            .iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" "),
                        format_rational(&e.weight.constant),
                        format_rational(&e.weight.kappa_inverse),
                    )
                })
                .collect();
            csv_table(&rows, &["kind", "codim", "hyperplanes", "q0", "q1"])?
        }
        OutputFormat::Text => {
            let mut s = format!(
                "m=({}) k={} a=({}) [{}]\n",
                report.m,
                report.k,
                report
                    .a
                    .0
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
                report.shift_source
            );
            for e in &report.edges {
                let hs: Vec<String> = e.hyperplanes.iter().map(ToString::to_string).collect();
                s += &format!(
                    "  ({}) codim {} {{{}}} weight {}\n",
                    e.kind,
                    e.codim,
                    hs.join(" "),
                    e.weight
                );
            }
            s += &format!("verdict comb={} nonres={}\n", report.comb, report.nonres);
            if let Some(c) = &report.bruteforce {
                s += &format!(
                    "bruteforce: formula {} edges, bruteforce {} edges, multiset match={} edges match={}\n",
                    c.formula_count, c.bruteforce_count, c.weights_match, c.edges_match
                );
            }
            s
        }
    };
    Ok(Outcome::ok(text, pass))
}

pub fn cmd_euler(a: &EulerArgs) -> Result<Outcome> {
    require_k(a.k)?;
    if a.n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let predicted: Vec<u128> = poincare_dims(a.k, a.n);
    let alternating: i128 = predicted
        .iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i128 } else { -(d as i128) })
        .sum();
    let magnitude = if a.n >= 2 {
        euler_characteristic_magnitude(a.k, a.n)?.to_string()
    } else {
        "0".to_string()
    };
    let signed = if a.k % 2 == 1 && magnitude != "0" {
        format!("-{magnitude}")
    } else {
        magnitude
    };
    let mut pass = alternating.to_string() == signed;
    let computed = if a.compute {
        let os =
            OrlikSolomon::with_limit(ArrangementSpec::build(a.k, a.n, None)?, max_dim(a.max_dim)?)?;
        let dims = os.dims();
        pass &= dims
            .iter()
            .map(|&d| d as u128)
            .eq(predicted.iter().copied());
        Some(dims)
    } else {
        None
    };
    let predicted_s: Vec<String> = predicted.iter().map(ToString::to_string).collect();
    let text = match a.out {
        OutputArgs {
            output: OutputFormat::Json,
        } => to_json(&json!({
            "k": a.k,
            "n": a.n,
            "hyperplanes": a.k * a.n + binomial(a.k as u64, 2) as usize,
            "poincare": predicted_s,
            "computed": computed,
            "euler_characteristic": signed,
            "pass": pass,
        })),
        OutputArgs {
            output: OutputFormat::Csv,
        } => {
            let rows: Vec<(usize, String, String)> = predicted_s
                .iter()
                .enumerate()
                .map(|(q, d)| {
                    (
                        q,
                        d.clone(),
                        computed
                            .as_ref()
                            .map_or_else(String::new, |c| c[q].to_string()),
                    )
                })
                .collect();
            csv_table(&rows, &["q", "poincare", "computed"])?
        }
        OutputArgs {
            output: OutputFormat::Text,
        } => {
            let mut s = format!("k={} n={}\ndim A^q: {}\n", a.k, a.n, predicted_s.join(" "));
            if let Some(c) = &computed {
                s += &format!(
                    "computed: {}\n",
                    c.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            s += &format!("euler characteristic: {signed}\n");
            s
        }
    };
    Ok(Outcome::ok(text, pass))
}

/// Sweep row: the kernel case plus optional Aomoto columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub case: KernelCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skew_dims: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aomoto_pass: Option<bool>,
}

fn weight_grid(n: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    if lo > hi {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Cases of a sweep in emission order: by n, then m lexicographically, then k.
pub fn sweep_cases(a: &SweepArgs) -> Vec<(HighestWeights, u32)> {
    let mut cases = Vec::new();
    for n in a.n_min.max(1)..=a.n_max {
        for m in weight_grid(n, a.m_min, a.m_max) {
            let m = HighestWeights::new(m).expect("n >= 1");
            for k in a.k_min.max(1)..=a.k_max {
                let source = binomial((n + k as usize - 2) as u64, u64::from(k) - 1);
                if source <= a.max_source_dim {
                    cases.push((m.clone(), k));
                }
            }
        }
    }
    cases
}

/// `(n, m, k)`: the emission order of sweep rows.
type CaseKey = (usize, Vec<u32>, u32);

fn sweep_row(m: &HighestWeights, k: u32, aomoto: bool) -> Result<SweepRow> {
    let case = kernel_case(m, k)?;
    let (skew_dims, aomoto_pass) = if aomoto && k <= 3 && m.n() <= 3 {
        let spec = ArrangementSpec::build(k as usize, m.n(), None)?;
        let report = verify_main_theorem(&OrlikSolomon::new(spec)?, m)?;
        let dims: Vec<String> = report.skew_dims.iter().map(ToString::to_string).collect();
        (Some(dims.join(" ")), Some(report.pass))
    } else if aomoto {
        (Some(String::new()), None)
    } else {
        (None, None)
    };
    Ok(SweepRow {
        case,
        skew_dims,
        aomoto_pass,
    })
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    if a.parallelism == 0 {
        return Err(Error::InvalidInput("parallelism must be at least 1".into()));
    }
    let cases = sweep_cases(a);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.parallelism)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let mut rows: Vec<(CaseKey, SweepRow)> = pool.install(|| {
        cases
            .par_iter()
            .map(|(m, k)| {
                let row = sweep_row(m, *k, a.aomoto)?;
                Ok(((m.n(), m.as_slice().to_vec(), *k), row))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by(|x, y| x.0.cmp(&y.0));
    let rows: Vec<SweepRow> = rows.into_iter().map(|(_, r)| r).collect();
    let failures = rows
        .iter()
        .filter(|r| !r.case.pass || r.aomoto_pass == Some(false))
        .count();
    let summary = format!("cases={} failures={}\n", rows.len(), failures);
    let stdout = match a.output {
        OutputFormat::Json => to_json(&json!({
            "rows": rows,
            "cases": rows.len(),
            "failures": failures,
        })),
        OutputFormat::Csv => {
            let mut header: Vec<&str> = SWEEP_COLUMNS.to_vec();
            if a.aomoto {
                header.extend(["skew_dims", "aomoto_pass"]);
            }
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut rec = r.case.csv_record();
                    if a.aomoto {
                        rec.push(r.skew_dims.clone().unwrap_or_default());
                        rec.push(r.aomoto_pass.map_or_else(String::new, |p| p.to_string()));
                    }
                    rec
                })
                .collect();
            csv_table(&records, &header)?
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for r in rows
                .iter()
                .filter(|r| !r.case.pass || r.aomoto_pass == Some(false))
            {
                s += &format!("FAIL m=({}) k={}\n", r.case.m, r.case.k);
            }
            s + &summary
        }
    };
    Ok(Outcome {
        stdout,
        stderr: if a.output == OutputFormat::Csv {
            summary
        } else {
            String::new()
        },
        code: if failures == 0 { EXIT_OK } else { EXIT_FAILURE },
    })
}

pub fn cmd_dump_matrix(a: &DumpArgs) -> Result<Outcome> {
    let m = HighestWeights::parse(&a.m)?;
    let matrix: RationalMatrix = match a.kind {
        MatrixKind::F => f_matrix_dual(&m, a.k)?,
        MatrixKind::E => e_matrix_dual(&m, a.k)?,
        MatrixKind::FIrreducible => f_matrix_irreducible(&m, a.k)?,
        MatrixKind::Shapovalov => shapovalov_matrix(&m, a.k),
    };
    let mut s = serde_json::to_string(&matrix.to_dump()).expect("serializable dump");
    s.push('\n');
    Ok(Outcome::ok(s, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("discrim").chain(args.iter().copied()))
    }

    #[test]
    fn kernel_examples() {
        let out = run_args(&["kernel", "--m", "1,1", "--k", "2"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("kernel=1 cokernel=2"));
        assert!(out.stdout.contains("predicted-match=true"));

        let out = run_args(&["kernel", "--m", "1,1,1", "--k", "2"]);
        assert!(out.stdout.contains("kernel=0 cokernel=3"));

        let out = run_args(&["kernel", "--m", "0", "--k", "1", "--output", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["ker_computed"], 1);
        assert_eq!(v["coker_computed"], 1);
        assert_eq!(v["regime"], "resonant");
    }

    #[test]
    fn multiplicity_examples() {
        let out = run_args(&["w", "--m", "1,1,1"]);
        assert!(out.stdout.contains("tensor: {0:1, 1:2}"));
        let out = run_args(&["w", "--m", "2,1,1", "--j", "2"]);
        assert!(out.stdout.contains("recursion: 1\n"));
        let out = run_args(&["w", "--m", "5"]);
        assert!(out.stdout.contains("tensor: {0:1}\n"));
    }

    #[test]
    fn invalid_input_exits_two() {
        assert_eq!(run_args(&["kernel", "--m", "1,x", "--k", "2"]).code, 2);
        assert_eq!(run_args(&["kernel", "--m", "1", "--k", "0"]).code, 2);
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(
            run_args(&["aomoto", "--m", "1,1", "--k", "2", "--z", "0,0"]).code,
            2
        );
    }

    #[test]
    fn scale_guard_exits_three() {
        let out = run_args(&["aomoto", "--m", "1,1,1", "--k", "3", "--max-dim", "5"]);
        assert_eq!(out.code, 3);
    }

    #[test]
    fn empty_sweep() {
        let out = run_args(&["sweep", "--n-max", "0", "--m-max", "0", "--k-max", "0"]);
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout.lines().count(), 1);
    }
}
