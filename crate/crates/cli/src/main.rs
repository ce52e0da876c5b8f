//! `qrep`: command-line front end for qrep-core.
//!
//! Reports are JSON on stdout, summaries on stderr. Exit codes: 0 success,
//! 1 negative decision, 2 input error, 3 resource or tolerance limit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrep_core::envgroup::{
    abelianization, central_exponents, coset_enumerate, enveloping_abelian_report, AbelianReport,
    EnvGroupError, ExponentMode, ReportOptions, DEFAULT_MAX_COSETS,
};
use qrep_core::qnm::{build_qnm, classify_irreducibles, qnm_equivalent, rho_alb, IrrepParams, QnmError, QnmParams};
use qrep_core::rep::{
    decompose, det_character, equivalence_witness, is_irreducible, is_unitarizable,
    is_unitary, non_diagonalizable_element, twist, unitarize, UnitarizeOptions,
};
use qrep_core::scalar::set_tolerance;
use qrep_core::{ApproxComplex, Character, Cyclo, Gram, Matrix, Quandle, Rational, RepError, Representation, Scalar};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Largest `n` or `m` accepted by the `qnm` commands.
const MAX_QNM_SIDE: usize = 1000;

#[derive(Parser)]
#[command(name = "qrep", version, about = "Finite quandles and their matrix representations")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Scalar backend; defaults to the backend recorded in the input document.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Central exponents used for the finite quotient.
    #[arg(long, global = true, value_enum, default_value = "per-gen")]
    exponents: ExponentsArg,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    /// Seed for randomized numerical steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Equality tolerance of the approximate backend.
    #[arg(long, global = true, default_value_t = qrep_core::scalar::DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum BackendArg {
    Exact,
    Approx,
}

#[derive(ValueEnum, Clone, Copy)]
enum ExponentsArg {
    /// `e_x` is the order of the left translation by `x`.
    PerGen,
    /// `e_x` is the order of the inner automorphism group.
    InnOrder,
}

impl From<ExponentsArg> for ExponentMode {
    fn from(e: ExponentsArg) -> Self {
        match e {
            ExponentsArg::PerGen => ExponentMode::PerGenerator,
            ExponentsArg::InnOrder => ExponentMode::Uniform,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Quandle tables.
    #[command(subcommand)]
    Quandle(QuandleCmd),
    /// Representations.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Invariants of the enveloping group.
    #[command(subcommand)]
    Envgroup(EnvgroupCmd),
    /// The family Q_{n,m} and its irreducible representations.
    #[command(subcommand)]
    Qnm(QnmCmd),
}

#[derive(Subcommand)]
enum QuandleCmd {
    /// Check the quandle axioms.
    Validate { file: PathBuf },
    /// Orbits, inner group and translation orders.
    Info { file: PathBuf },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Check that the images form a representation.
    Validate { file: PathBuf },
    /// Decide irreducibility.
    Irreducible { file: PathBuf },
    /// Decide complete reducibility.
    Reducible { file: PathBuf },
    /// Split into irreducible blocks (approximate).
    Decompose { file: PathBuf },
    /// Check invariance of a Gram matrix.
    Unitary { file: PathBuf, gram: PathBuf },
    /// Decide unitarizability of an irreducible representation.
    Unitarizable { file: PathBuf },
    /// Produce an invariant Gram matrix by averaging over the finite quotient.
    Unitarize { file: PathBuf },
    /// Orbit character `x ↦ det ρ(x)^{-1/d}`.
    DetCharacter { file: PathBuf },
    /// Multiply every image by a character value.
    Twist { file: PathBuf, character: PathBuf },
    /// Decide equivalence, with an intertwiner when equivalent.
    Equiv { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand)]
enum EnvgroupCmd {
    /// Rank of the abelianization and the orbit of each generator.
    Abelianization { file: PathBuf },
    /// Finite quotient by the central exponents, via coset enumeration.
    Quotient { file: PathBuf },
    /// Sound detection of a nonabelian enveloping group.
    AbelianReport {
        file: PathBuf,
        /// Representations to test as irreducible witnesses.
        #[arg(long = "rep")]
        reps: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QnmCmd {
    /// Operation table of Q_{n,m}.
    Build { n: usize, m: usize },
    /// The representation ρ_{α,λ,β} with α = ζ_d^k. Scalars: `q`, `zN^k` or `q*zN^k`.
    Rep {
        n: usize,
        m: usize,
        d: usize,
        k: u64,
        #[arg(allow_hyphen_values = true)]
        lambda: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
    },
    /// Irreducible representations of Q_{n,m} up to equivalence.
    Classify { n: usize, m: usize },
    /// Decide equivalence of two ρ_{α,λ,β} by the parameter rule.
    Equiv {
        n: usize,
        m: usize,
        /// `d k lambda beta` for each representation.
        #[arg(num_args = 8, allow_hyphen_values = true, value_names = ["D", "K", "LAMBDA", "BETA"])]
        params: Vec<String>,
    },
}

/// A failed command and its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        let code = match e {
            RepError::EnvGroup(EnvGroupError::CosetLimitExceeded(_)) | RepError::ToleranceFailure(_) => 3,
            RepError::NotCompletelyReducible(_) | RepError::NotUnitarizable(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<EnvGroupError> for Failure {
    fn from(e: EnvGroupError) -> Self {
        let code = if matches!(e, EnvGroupError::CosetLimitExceeded(_)) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

impl From<QnmError> for Failure {
    fn from(e: QnmError) -> Self {
        match e {
            QnmError::Rep(r) => r.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

/// A JSON report, a human summary and an exit code.
struct Report {
    json: Value,
    summary: String,
    code: u8,
}

impl Report {
    fn ok(json: Value, summary: impl Into<String>) -> Self {
        Report { json, summary: summary.into(), code: 0 }
    }

    fn decision(holds: bool, json: Value, summary: impl Into<String>) -> Self {
        Report { json, summary: summary.into(), code: if holds { 0 } else { 1 } }
    }
}

type Outcome = Result<Report, Failure>;

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: invalid JSON: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::input(format!("invalid {what}: {e}")))
}

/// Scalar types the CLI can load. The approximate backend also accepts exact documents.
trait Backend: Scalar + Serialize + DeserializeOwned {
    fn rep(v: Value) -> Result<Representation<Self>, Failure>;
    fn matrix(v: Value) -> Result<Matrix<Self>, Failure>;
    fn character(v: Value) -> Result<Character<Self>, Failure>;
    fn from_exact(r: Representation<Cyclo>) -> Representation<Self>;
}

impl Backend for Cyclo {
    fn rep(v: Value) -> Result<Representation<Self>, Failure> {
        parse(v, "representation")
    }

    fn matrix(v: Value) -> Result<Matrix<Self>, Failure> {
        parse(v, "matrix")
    }

    fn character(v: Value) -> Result<Character<Self>, Failure> {
        parse(v, "character")
    }

    fn from_exact(r: Representation<Cyclo>) -> Representation<Self> {
        r
    }
}

impl Backend for ApproxComplex {
    fn rep(v: Value) -> Result<Representation<Self>, Failure> {
        match serde_json::from_value::<Representation<Cyclo>>(v.clone()) {
            Ok(r) => Ok(r.to_approx()),
            Err(_) => parse(v, "representation"),
        }
    }

    fn matrix(v: Value) -> Result<Matrix<Self>, Failure> {
        match serde_json::from_value::<Matrix<Cyclo>>(v.clone()) {
            Ok(m) => Ok(m.to_approx()),
            Err(_) => parse(v, "matrix"),
        }
    }

    fn character(v: Value) -> Result<Character<Self>, Failure> {
        #[derive(Deserialize)]
        struct Exact {
            orbit_values: Vec<Cyclo>,
        }
        match serde_json::from_value::<Exact>(v.clone()) {
            Ok(c) => parse(json!({ "orbit_values": c.orbit_values.iter().map(|z| z.to_approx()).collect::<Vec<_>>() }), "character"),
            Err(_) => parse(v, "character"),
        }
    }

    fn from_exact(r: Representation<Cyclo>) -> Representation<Self> {
        r.to_approx()
    }
}

/// Backend recorded in a representation document: that of its first image.
fn document_backend(v: &Value) -> BackendArg {
    let first = v.get("images").and_then(Value::as_object).and_then(|m| m.values().next());
    match first.and_then(|m| m.get("backend")).and_then(Value::as_str) {
        Some("approx") => BackendArg::Approx,
        _ => BackendArg::Exact,
    }
}

fn load_quandle(path: &Path) -> Result<Quandle, Failure> {
    parse(read_json(path)?, "quandle")
}

/// Parses `q`, `zN^k`, `q*zN^k` (also `-zN^k`), with `q` an integer or fraction.
fn parse_scalar(s: &str) -> Result<Cyclo, Failure> {
    let bad = || Failure::input(format!("cannot parse scalar {s:?}; expected q, zN^k or q*zN^k"));
    let rational = |t: &str| t.trim().parse::<Rational>().map_err(|_| bad());
    let t = s.trim();
    let Some(zpos) = t.find('z') else {
        return Ok(Cyclo::from_rational(rational(t)?));
    };
    let coeff = match t[..zpos].trim() {
        "" => Rational::from_integer(1.into()),
        "-" => Rational::from_integer((-1).into()),
        c => rational(c.strip_suffix('*').ok_or_else(bad)?)?,
    };
    let root = &t[zpos + 1..];
    let (n, k) = match root.split_once('^') {
        Some((n, k)) => (n, k.parse::<i64>().map_err(|_| bad())?),
        None => (root, 1),
    };
    let n = n.parse::<u64>().ok().filter(|&n| n > 0).ok_or_else(bad)?;
    Ok(Cyclo::from_rational(coeff).mul(&Cyclo::root_of_unity(n, k)))
}

fn qnm_params(n: usize, m: usize) -> Result<QnmParams, Failure> {
    if n > MAX_QNM_SIDE || m > MAX_QNM_SIDE {
        return Err(Failure::input(format!("n and m are limited to {MAX_QNM_SIDE}")));
    }
    Ok(QnmParams::new(n, m)?)
}

fn irrep_params(d: &str, k: &str, lambda: &str, beta: &str) -> Result<IrrepParams, Failure> {
    let d = d.parse::<usize>().map_err(|_| Failure::input(format!("invalid dimension {d:?}")))?;
    let k = k.parse::<u64>().map_err(|_| Failure::input(format!("invalid exponent {k:?}")))?;
    Ok(IrrepParams::new(d, k, parse_scalar(lambda)?, parse_scalar(beta)?))
}

fn run_quandle(cmd: QuandleCmd) -> Outcome {
    match cmd {
        QuandleCmd::Validate { file } => {
            let v = read_json(&file)?;
            match serde_json::from_value::<Quandle>(v) {
                Ok(q) => Ok(Report::ok(json!({ "valid": true, "size": q.size() }), "valid")),
                Err(e) => Ok(Report::decision(false, json!({ "valid": false, "error": e.to_string() }), format!("invalid: {e}"))),
            }
        }
        QuandleCmd::Info { file } => {
            let q = load_quandle(&file)?;
            let inn = q.inner_group();
            let orders: Vec<u64> = (0..q.size()).map(|x| q.translation(x).order()).collect();
            let orbits = q.orbits();
            let summary = format!("size {}, {} orbits, |Inn| = {}", q.size(), orbits.len(), inn.order());
            Ok(Report::ok(
                json!({
                    "size": q.size(),
                    "trivial": q.is_trivial(),
                    "orbits": orbits,
                    "inner_group_order": inn.order(),
                    "inner_group_abelian": inn.is_abelian(),
                    "translation_orders": orders,
                }),
                summary,
            ))
        }
    }
}

/// Commands whose document determines the backend.
fn run_rep(cmd: RepCmd, opts: &GlobalOpts) -> Outcome {
    let primary = match &cmd {
        RepCmd::Validate { file }
        | RepCmd::Irreducible { file }
        | RepCmd::Reducible { file }
        | RepCmd::Decompose { file }
        | RepCmd::Unitary { file, .. }
        | RepCmd::Unitarizable { file }
        | RepCmd::Unitarize { file }
        | RepCmd::DetCharacter { file }
        | RepCmd::Twist { file, .. } => file,
        RepCmd::Equiv { first, .. } => first,
    };
    let doc = read_json(primary)?;
    match opts.backend.unwrap_or_else(|| document_backend(&doc)) {
        BackendArg::Exact => run_rep_with::<Cyclo>(cmd, doc, opts),
        BackendArg::Approx => run_rep_with::<ApproxComplex>(cmd, doc, opts),
    }
}

fn run_rep_with<S: Backend>(cmd: RepCmd, doc: Value, opts: &GlobalOpts) -> Outcome {
    if let RepCmd::Validate { .. } = cmd {
        return Ok(match S::rep(doc) {
            Ok(r) => Report::ok(json!({ "valid": true, "dim": r.dim() }), format!("valid, dimension {}", r.dim())),
            Err(f) => Report::decision(false, json!({ "valid": false, "error": f.message }), "invalid"),
        });
    }
    let rep = S::rep(doc)?;
    match cmd {
        RepCmd::Validate { .. } => unreachable!("handled above"),
        RepCmd::Irreducible { .. } => {
            let irr = is_irreducible(&rep);
            Ok(Report::decision(
                irr,
                json!({ "irreducible": irr, "dim": rep.dim() }),
                if irr { "irreducible" } else { "reducible" },
            ))
        }
        RepCmd::Reducible { .. } => Ok(match non_diagonalizable_element(&rep) {
            None => Report::ok(json!({ "completely_reducible": true }), "completely reducible"),
            Some(x) => {
                let label = rep.quandle().label(x);
                Report::decision(
                    false,
                    json!({
                        "completely_reducible": false,
                        "witness": { "element": x, "label": label, "image": to_json(rep.image(x)) },
                    }),
                    format!("not completely reducible: image of {label} is not diagonalizable"),
                )
            }
        }),
        RepCmd::Decompose { .. } => {
            let blocks = decompose(&rep, opts.seed)?;
            let dims: Vec<usize> = blocks.iter().map(|b| b.dim()).collect();
            let json_blocks: Vec<Value> = blocks
                .into_iter()
                .map(|b| {
                    let basis = to_json(b.basis());
                    json!({ "dim": b.dim(), "basis": basis, "rep": to_json(&b.into_representation()) })
                })
                .collect();
            Ok(Report::ok(json!({ "blocks": json_blocks }), format!("block dimensions {dims:?}")))
        }
        RepCmd::Unitary { gram, .. } => {
            let g = Gram::new(S::matrix(read_json(&gram)?)?)?;
            let u = is_unitary(&rep, &g)?;
            Ok(Report::decision(u, json!({ "unitary": u }), if u { "unitary" } else { "not unitary" }))
        }
        RepCmd::Unitarizable { .. } => {
            let u = is_unitarizable(&rep)?;
            let mut report = json!({ "unitarizable": u });
            if !u {
                let witness = rep
                    .images()
                    .iter()
                    .position(|m| m.det().map(|d| !d.norm_sq().is_one()).unwrap_or(false));
                report["witness"] = json!(witness);
            }
            Ok(Report::decision(u, report, if u { "unitarizable" } else { "not unitarizable" }))
        }
        RepCmd::Unitarize { .. } => {
            let uopts = UnitarizeOptions { mode: opts.exponents.into(), max_cosets: opts.max_cosets };
            let g = unitarize(&rep, &uopts)?;
            Ok(Report::ok(to_json(&g), "invariant Gram matrix"))
        }
        RepCmd::DetCharacter { .. } => {
            let chi = det_character(&rep).map_err(|e| {
                let hint = matches!(e, RepError::NotExactlyRepresentable(_));
                let mut f = Failure::from(e);
                if hint {
                    f.message.push_str("; rerun with --backend approx");
                }
                f
            })?;
            Ok(Report::ok(to_json(&chi), format!("{} orbit values", chi.orbit_values.len())))
        }
        RepCmd::Twist { character, .. } => {
            let chi = S::character(read_json(&character)?)?.bind(rep.quandle())?;
            let t = twist(&rep, &chi)?;
            Ok(Report::ok(to_json(&t), "twisted representation"))
        }
        RepCmd::Equiv { second, .. } => {
            let other = S::rep(read_json(&second)?)?;
            let w = equivalence_witness(&rep, &other)?;
            let eq = w.is_some();
            Ok(Report::decision(
                eq,
                json!({ "equivalent": eq, "witness": w.map(|t| to_json(&t)) }),
                if eq { "equivalent" } else { "not equivalent" },
            ))
        }
    }
}

fn run_envgroup(cmd: EnvgroupCmd, opts: &GlobalOpts) -> Outcome {
    match cmd {
        EnvgroupCmd::Abelianization { file } => {
            let q = load_quandle(&file)?;
            let ab = abelianization(&q);
            Ok(Report::ok(to_json(&ab), format!("rank {}", ab.rank)))
        }
        EnvgroupCmd::Quotient { file } => {
            let q = load_quandle(&file)?;
            let e = central_exponents(&q, opts.exponents.into());
            let h = coset_enumerate(&q, &e, opts.max_cosets)?;
            let lengths: Vec<usize> = h.sections().iter().map(|w| w.len()).collect();
            let summary = format!(
                "order {}, {}, section word lengths {lengths:?}",
                h.order(),
                if h.is_abelian() { "abelian" } else { "nonabelian" }
            );
            Ok(Report::ok(to_json(&h), summary))
        }
        EnvgroupCmd::AbelianReport { file, reps } => {
            let q = load_quandle(&file)?;
            let docs = reps.iter().map(|p| read_json(p)).collect::<Result<Vec<_>, _>>()?;
            let backend = opts
                .backend
                .or_else(|| docs.first().map(document_backend))
                .unwrap_or(BackendArg::Exact);
            let ropts = ReportOptions {
                mode: opts.exponents.into(),
                max_cosets: opts.max_cosets,
                seed: opts.seed,
                ..Default::default()
            };
            let report = match backend {
                BackendArg::Exact => abelian_report::<Cyclo>(&q, docs, &ropts)?,
                BackendArg::Approx => abelian_report::<ApproxComplex>(&q, docs, &ropts)?,
            };
            let (determined, summary) = match &report {
                AbelianReport::NonAbelian { witnesses } => (true, format!("nonabelian, {} witnesses", witnesses.len())),
                AbelianReport::AbelianCertified => (true, "abelian (trivial quandle)".to_string()),
                AbelianReport::Undetermined { .. } => (false, "undetermined".to_string()),
            };
            Ok(Report::decision(determined, to_json(&report), summary))
        }
    }
}

fn abelian_report<S: Backend>(q: &Quandle, docs: Vec<Value>, opts: &ReportOptions) -> Result<AbelianReport, Failure> {
    let reps = docs.into_iter().map(S::rep).collect::<Result<Vec<_>, _>>()?;
    if reps.iter().any(|r| r.quandle() != q) {
        return Err(RepError::QuandleMismatch.into());
    }
    Ok(enveloping_abelian_report(q, &reps, opts))
}

fn run_qnm(cmd: QnmCmd, opts: &GlobalOpts) -> Outcome {
    match cmd {
        QnmCmd::Build { n, m } => {
            qnm_params(n, m)?;
            let q = build_qnm(n, m)?;
            Ok(Report::ok(to_json(&q), format!("Q_{{{n},{m}}} with {} elements", q.size())))
        }
        QnmCmd::Rep { n, m, d, k, lambda, beta } => {
            let p = qnm_params(n, m)?;
            let ip = IrrepParams::new(d, k, parse_scalar(&lambda)?, parse_scalar(&beta)?);
            let rep = rho_alb(&p, &ip)?;
            let json = match opts.backend {
                Some(BackendArg::Approx) => to_json(&ApproxComplex::from_exact(rep)),
                _ => to_json(&rep),
            };
            Ok(Report::ok(json, format!("dimension {d} representation of Q_{{{n},{m}}}")))
        }
        QnmCmd::Classify { n, m } => {
            qnm_params(n, m)?;
            let c = classify_irreducibles(n, m)?;
            let dims: Vec<usize> = c.families.iter().map(|f| f.d).collect();
            Ok(Report::ok(to_json(&c), format!("characters plus {} families, dimensions {dims:?}", dims.len())))
        }
        QnmCmd::Equiv { n, m, params } => {
            let p = qnm_params(n, m)?;
            let a = irrep_params(&params[0], &params[1], &params[2], &params[3])?;
            let b = irrep_params(&params[4], &params[5], &params[6], &params[7])?;
            let eq = qnm_equivalent(&p, &a, &b)?;
            Ok(Report::decision(eq, json!({ "equivalent": eq }), if eq { "equivalent" } else { "not equivalent" }))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    set_tolerance(cli.opts.tolerance);
    let opts = cli.opts;
    match cli.command {
        Command::Quandle(c) => run_quandle(c),
        Command::Rep(c) => run_rep(c, &opts),
        Command::Envgroup(c) => run_envgroup(c, &opts),
        Command::Qnm(c) => run_qnm(c, &opts),
    }
}

/// Writes a report to stdout; a closed pipe is not an error.
fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if !(cli.opts.tolerance.is_finite() && cli.opts.tolerance > 0.0) {
        eprintln!("error: --tolerance must be a positive number");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(report) => {
            emit(&report.json);
            eprintln!("{}", report.summary);
            ExitCode::from(report.code)
        }
        Err(f) => {
            emit(&json!({ "error": f.message }));
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
