//! Command handlers for the `traceforge` binary.
//!
//! Every handler returns an [`Output`]: a status, a JSON value and a text
//! rendering. Exit codes are 0 pass, 1 fail, 2 unknown and 64 for usage
//! errors, including unreadable or malformed input files.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use traceforge::arith::{is_prime_u64, parse_scalar, Embedding, Field, QuadElem, ScalarWire};
use traceforge::forms::{
    equivalent_q, equivalent_scaled_family_qsqrt2, scale_form, similar_q, DiagonalForm, EquivalenceVerdict, FormError,
    SimilarityVerdict,
};
use traceforge::gluing::{delta5_obstruction, trace_field, GluingError, GluingPlan};
use traceforge::local::{find_split_primes, hasse_profile, q_sqrt2, Branch};
use traceforge::report::{Report, Status};
use traceforge::squareclass::MultiquadraticField;
use traceforge::twist::{
    assemble, build_odd_twist, build_quadfield_twist, reproduce_table1, search_blocks, verify_lemma61, SearchBounds,
    TwistCertificate, TwistError,
};

pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "traceforge", about = "Exact trace fields of gluings of arithmetic hyperbolic pieces")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, signature, discriminant and Hasse invariants of a diagonal form.
    Invariants {
        #[arg(long)]
        form: PathBuf,
    },
    /// Decide isometry of two forms over Q.
    Equiv {
        left: PathBuf,
        right: PathBuf,
    },
    /// Decide similarity of two forms over Q.
    Similar {
        left: PathBuf,
        right: PathBuf,
    },
    /// Trace field and arithmeticity verdict of a gluing plan.
    TraceField {
        #[arg(required_unless_present = "plan_file", conflicts_with = "plan_file")]
        plan: Option<PathBuf>,
        #[arg(long = "plan", id = "plan_file")]
        plan_file: Option<PathBuf>,
    },
    /// Twist certificates, block search and table reproduction.
    #[command(subcommand)]
    Twist(TwistCommand),
    /// Worked examples run end to end.
    #[command(subcommand)]
    Examples(ExampleCommand),
    /// The Delta_5 obstruction.
    Delta5,
    /// Print the version.
    Version,
}

#[derive(Debug, Subcommand)]
pub enum TwistCommand {
    /// Re-verify a certificate file.
    Verify {
        cert: PathBuf,
    },
    /// Exhaustive search for 2x2 blocks.
    Search {
        #[arg(long)]
        d: i64,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
        #[arg(long, default_value_t = 3)]
        entry_bound: i64,
        /// Assemble a certificate of this even dimension from the blocks found.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        mixed_signs: bool,
    },
    /// Check the ten rows of the even-d twist table.
    Table1,
    /// Certificate for Q(sqrt d), d odd and squarefree, in even dimension n.
    BuildOdd {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: usize,
    },
    /// Certificate for k(sqrt b) over k = Q(sqrt m), b totally positive.
    BuildQuad {
        /// Radicand of the base field Q(sqrt m).
        #[arg(long, default_value_t = 2)]
        m: i64,
        /// `x,y` for x + y sqrt(m).
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCommand {
    /// Canonical gluing of pieces scaled by the first r primes 1 mod 4.
    Ex45 {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Canonical gluing over Q(sqrt 2) of pieces scaled by split primes of Z[sqrt 2].
    Ex46 {
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        norm_bound: u64,
    },
    /// The Delta_5 obstruction.
    Delta5,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

impl Output {
    fn from_report(r: Report) -> Self {
        Output { status: r.status, json: serde_json::to_value(&r).expect("reports serialize"), text: r.render() }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() })
}

fn read_form(path: &Path) -> Result<DiagonalForm, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn gluing_error(e: GluingError) -> CliError {
    match e {
        GluingError::Parse(m) => CliError::Input(m),
        other => CliError::Failed(other.to_string()),
    }
}

fn invariants(path: &Path) -> Result<Output, CliError> {
    let f = read_form(path)?;
    let admissible = f.is_admissible();
    let sig = |e| f.signature(e).map(|(p, q)| json!([p, q])).unwrap_or(Value::Null);
    let (json, text) = if f.field().is_rationals() {
        let prof = hasse_profile(&f).map_err(|e| CliError::Failed(e.to_string()))?;
        let mut v = serde_json::to_value(&prof).expect("profiles serialize");
        v["admissible"] = json!(admissible);
        let places: Vec<String> = prof.minus_places.iter().map(|p| p.to_string()).collect();
        let text = format!(
            "form {f}\n  rank {}, signature ({}, {}), discriminant {}\n  Hasse invariant -1 at: {}\n  admissible: {admissible}\n",
            prof.rank,
            prof.signature.0,
            prof.signature.1,
            prof.disc,
            if places.is_empty() { "none".to_string() } else { places.join(", ") }
        );
        (v, text)
    } else {
        let disc = f.discriminant().map_err(|e| CliError::Failed(e.to_string()))?;
        let v = json!({
            "field": f.field().label(),
            "rank": f.rank(),
            "signature": sig(Embedding::Identity),
            "signature_conjugate": sig(Embedding::Conjugate),
            "disc": ScalarWire::from_elem(disc.representative()),
            "admissible": admissible,
        });
        let text = format!(
            "form {f} over {}\n  rank {}, signatures {} and {}, discriminant class {disc}\n  admissible: {admissible}\n",
            f.field(),
            f.rank(),
            sig(Embedding::Identity),
            sig(Embedding::Conjugate)
        );
        (v, text)
    };
    Ok(Output { status: Status::Pass, json, text })
}

fn equiv(left: &Path, right: &Path) -> Result<Output, CliError> {
    let (f, g) = (read_form(left)?, read_form(right)?);
    let verdict = match equivalent_q(&f, &g) {
        Ok(v) => v,
        Err(FormError::NotOverQ) => EquivalenceVerdict::Unknown { reason: "forms are not over Q".into() },
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let (status, text) = match &verdict {
        EquivalenceVerdict::Equivalent => (Status::Pass, format!("{f} and {g} are equivalent over Q\n")),
        EquivalenceVerdict::Inequivalent { witness } => (Status::Fail, format!("{f} and {g} differ: {witness}\n")),
        EquivalenceVerdict::Unknown { reason } => (Status::Unknown, format!("undecided: {reason}\n")),
    };
    Ok(Output { status, json: serde_json::to_value(&verdict).expect("verdicts serialize"), text })
}

fn similar(left: &Path, right: &Path) -> Result<Output, CliError> {
    let (f, g) = (read_form(left)?, read_form(right)?);
    let verdict = match similar_q(&f, &g) {
        Ok(v) => v,
        Err(FormError::NotOverQ) => SimilarityVerdict::Unknown { reason: "forms are not over Q".into() },
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let (status, text) = match &verdict {
        SimilarityVerdict::Similar { lambda } => (Status::Pass, format!("{f} is equivalent to {lambda} * {g}\n")),
        SimilarityVerdict::NotSimilar { witness } => (Status::Fail, format!("not similar: {witness}\n")),
        SimilarityVerdict::Unknown { reason } => (Status::Unknown, format!("undecided: {reason}\n")),
    };
    Ok(Output { status, json: serde_json::to_value(&verdict).expect("verdicts serialize"), text })
}

fn trace_field_cmd(path: &Path) -> Result<Output, CliError> {
    let plan = GluingPlan::from_json(&read(path)?).map_err(gluing_error)?;
    let ev = trace_field(&plan).map_err(gluing_error)?;
    let v = &ev.verdict;
    let mut text = String::new();
    for (i, s) in ev.trace.iter().enumerate() {
        text.push_str(&format!("  {:>2}. {} -> {} ({})\n", i + 1, s.op, s.field, s.note));
    }
    text.push_str(&format!(
        "trace field {} (degree {}), {}{}\n",
        v.trace_field,
        v.degree(),
        serde_json::to_value(v.arithmeticity).expect("serializes").as_str().unwrap_or_default(),
        v.rule.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
    ));
    Ok(Output { status: Status::Pass, json: serde_json::to_value(v).expect("verdicts serialize"), text })
}

fn certificate_output(cert: &TwistCertificate) -> Output {
    let mut text = format!("f0 = {}\na = {}\nA0 =\n", cert.f0, cert.a);
    for row in cert.a0.to_rows() {
        let r: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        text.push_str(&format!("  [{}]\n", r.join(", ")));
    }
    text.push_str(&format!("checks: {}\nresulting field: {}\n", cert.checks, cert.resulting_field));
    if cert.below_scope {
        text.push_str("note: rank below 4, outside the dimensions targeted by twists\n");
    }
    Output { status: Status::Pass, json: serde_json::to_value(cert).expect("certificates serialize"), text }
}

fn twist_failure(e: TwistError) -> Result<Output, CliError> {
    match e {
        TwistError::Conditions(c) => Ok(Output {
            status: Status::Fail,
            json: json!({"status": "fail", "checks": c, "failures": c.failures()}),
            text: format!("twist conditions fail: {c}\n"),
        }),
        TwistError::Parse(m) => Err(CliError::Input(m)),
        TwistError::Arith(e) => Err(CliError::Input(e.to_string())),
        TwistError::BadOddD(_)
        | TwistError::BadDimension(_)
        | TwistError::RationalB(_)
        | TwistError::NotTotallyPositive(_) => Err(CliError::Usage(e.to_string())),
        other => Err(CliError::Failed(other.to_string())),
    }
}

fn twist(cmd: &TwistCommand) -> Result<Output, CliError> {
    match cmd {
        TwistCommand::Verify { cert } => match TwistCertificate::from_json(&read(cert)?) {
            Ok(c) => Ok(certificate_output(&c)),
            Err(e) => twist_failure(e),
        },
        TwistCommand::Search { d, coeff_bound, entry_bound, dim, mixed_signs } => {
            if *coeff_bound < 1 || *entry_bound < 1 {
                return Err(CliError::Usage("bounds must be at least 1".into()));
            }
            if let Some(n) = dim {
                if *n < 2 || n % 2 == 1 {
                    return Err(CliError::Usage(format!("--dim {n} must be even and at least 2")));
                }
            }
            let bounds =
                SearchBounds { coeff_bound: *coeff_bound, entry_bound: *entry_bound, mixed_signs_only: *mixed_signs };
            let blocks = search_blocks(*d, bounds);
            let mut json = json!({
                "d": d.to_string(),
                "coeff_bound": coeff_bound,
                "entry_bound": entry_bound,
                "count": blocks.len(),
                "blocks": blocks,
            });
            let mut text = format!("{} blocks with d = {d}\n", blocks.len());
            for b in &blocks {
                let rows = b.a.to_rows();
                text.push_str(&format!(
                    "  q = {}, A = [[{}, {}], [{}, {}]]\n",
                    b.q, rows[0][0], rows[0][1], rows[1][0], rows[1][1]
                ));
            }
            let mut status = Status::Pass;
            if let Some(n) = dim {
                let neg = blocks.iter().find(|b| b.q.signature(Embedding::Identity).map(|s| s.1) == Ok(1));
                let pos = blocks.iter().find(|b| b.q.signature(Embedding::Identity).map(|s| s.1) == Ok(0));
                let chosen: Option<Vec<_>> = match (neg, pos) {
                    (Some(ng), _) if *n == 2 => Some(vec![ng.clone()]),
                    (Some(ng), Some(ps)) => {
                        Some(std::iter::once(ng.clone()).chain(std::iter::repeat_n(ps.clone(), n / 2 - 1)).collect())
                    }
                    _ => None,
                };
                match chosen {
                    None => {
                        status = Status::Unknown;
                        json["certificate"] = Value::Null;
                        text.push_str("no blocks with the needed signatures for an assembly\n");
                    }
                    Some(bs) => {
                        let asm = assemble(&bs).map_err(|e| CliError::Failed(e.to_string()))?;
                        match verify_lemma61(&asm.f0, &asm.d, &asm.a0) {
                            Ok(cert) => {
                                text.push_str(&certificate_output(&cert).text);
                                json["certificate"] = serde_json::to_value(&cert).expect("serializes");
                            }
                            Err(e) => {
                                let out = twist_failure(e)?;
                                status = out.status;
                                text.push_str(&out.text);
                                json["certificate"] = out.json;
                            }
                        }
                    }
                }
            }
            Ok(Output { status, json, text })
        }
        TwistCommand::Table1 => Ok(Output::from_report(reproduce_table1())),
        TwistCommand::BuildOdd { d, n } => match build_odd_twist(*d, *n) {
            Ok(c) => Ok(certificate_output(&c)),
            Err(e) => twist_failure(e),
        },
        TwistCommand::BuildQuad { m, b, n } => {
            let k = Field::real_quadratic(*m).map_err(|e| CliError::Usage(e.to_string()))?;
            let b = parse_scalar(b, k).map_err(|e| CliError::Usage(e.to_string()))?;
            match build_quadfield_twist(&b, *n) {
                Ok(t) => {
                    let cert = certificate_output(&t.certificate);
                    let json = json!({
                        "b": ScalarWire::from_elem(&t.b),
                        "b_used": ScalarWire::from_elem(&t.b_used),
                        "w": ScalarWire::from_elem(&t.w),
                        "certificate": cert.json,
                    });
                    let text = format!("b = {} rescaled to {} (w = {})\n{}", t.b, t.b_used, t.w, cert.text);
                    Ok(Output { status: Status::Pass, json, text })
                }
                Err(e) => twist_failure(e),
            }
        }
    }
}

fn primes_one_mod_four(r: usize) -> Vec<u64> {
    (5u64..).step_by(4).filter(|&p| is_prime_u64(p)).take(r).collect()
}

/// Primes `a ≡ 1 (mod 4)` with `a·f₀ ≅ f₀` in `n ≡ 0 (mod 4)` variables and
/// the canonical gluing of the pieces `{1, a₁, …, a_r}`.
pub fn run_example_ex45(r: usize, n: usize) -> Result<Report, CliError> {
    if r == 0 {
        return Err(CliError::Usage("r must be at least 1".into()));
    }
    if n == 0 || !n.is_multiple_of(4) {
        return Err(CliError::Usage(format!("n = {n} must be a positive multiple of 4")));
    }
    let q = Field::Rationals;
    let f0 = DiagonalForm::standard_lorentzian(q, n).map_err(|e| CliError::Failed(e.to_string()))?;
    let primes = primes_one_mod_four(r);
    let mut rep = Report::new(format!("ex45: r = {r}, n = {n}"));
    rep.step("primes", json!({"r": r, "rule": "p = 1 mod 4"}), json!(primes), "Example 4.5");
    for &p in &primes {
        let a = QuadElem::int(p as i64);
        let af0 = scale_form(&a, &f0).map_err(|e| CliError::Failed(e.to_string()))?;
        let v = equivalent_q(&af0, &f0).map_err(|e| CliError::Failed(e.to_string()))?;
        rep.degrade(Status::from_bool(v.is_equivalent()));
        rep.step("a_f0_equivalent_f0", json!({"a": p, "f0": f0.to_string()}), json!(v), "Example 4.5");
    }
    let mut values = vec![QuadElem::one()];
    values.extend(primes.iter().map(|&p| QuadElem::int(p as i64)));
    let plan =
        GluingPlan::canonical_chain(f0, &values).map_err(gluing_error)?.with_metadata("implicit_piece", "a0 = 1");
    let ev = trace_field(&plan).map_err(gluing_error)?;
    let expected =
        MultiquadraticField::from_generators(q, &values[1..]).map_err(|e| CliError::Failed(e.to_string()))?;
    let ok = ev.verdict.trace_field == expected && ev.verdict.degree() == 1u64 << r;
    rep.degrade(Status::from_bool(ok));
    rep.step(
        "trace_field",
        json!({"pieces": values.iter().map(ScalarWire::from_elem).collect::<Vec<_>>(), "isometries": "canonical"}),
        serde_json::to_value(&ev.verdict).expect("verdicts serialize"),
        "Thm 4.1",
    );
    rep.data = json!({"trace_field": ev.verdict.trace_field, "degree": ev.verdict.degree()});
    rep.conclusion = format!("trace field {} of degree {}", ev.verdict.trace_field, ev.verdict.degree());
    Ok(rep)
}

/// Split primes of ℤ[√2] with `a·f₀ ≅ f₀`, `f₀ = ⟨−√2, 1, …, 1⟩`, and the
/// canonical gluing of the pieces `{1, a₁, …, a_r}` over ℚ(√2).
pub fn run_example_ex46(r: usize, n: usize, norm_bound: u64) -> Result<Report, CliError> {
    if r == 0 {
        return Err(CliError::Usage("r must be at least 1".into()));
    }
    let Some(branch) = Branch::for_dimension(n) else {
        return Err(CliError::Usage(format!("n = {n} must be even and at least 2")));
    };
    let k = q_sqrt2();
    let delta = branch.delta();
    let mut rep = Report::new(format!("ex46: r = {r}, n = {n}, norm bound {norm_bound}"));
    let search = find_split_primes(&delta, r, norm_bound).map_err(|e| CliError::Failed(e.to_string()))?;
    let found: Vec<Value> = search
        .primes
        .iter()
        .map(|sp| {
            json!({
                "generator": ScalarWire::from_elem(&sp.generator),
                "norm": sp.prime.ideal_norm(),
                "p": sp.prime.p,
                "splitting": sp.prime.splitting,
            })
        })
        .collect();
    rep.step(
        "find_split_primes",
        json!({"delta": ScalarWire::from_elem(&delta), "count": r, "norm_bound": norm_bound}),
        json!({"primes": found, "truncated": search.truncated}),
        "Example 4.6",
    );
    if search.primes.len() < r {
        rep.degrade(Status::Unknown);
    }
    for sp in &search.primes {
        let v =
            equivalent_scaled_family_qsqrt2(&sp.generator, n, branch).map_err(|e| CliError::Failed(e.to_string()))?;
        rep.degrade(Status::from_bool(v.equivalent));
        rep.step(
            "a_f0_equivalent_f0",
            json!({"a": ScalarWire::from_elem(&sp.generator), "n": n}),
            serde_json::to_value(&v).expect("verdicts serialize"),
            "Example 4.6",
        );
    }
    let mut entries = vec![-QuadElem::sqrt_radicand(k).expect("quadratic field")];
    entries.extend((1..n).map(|_| QuadElem::one()));
    let f0 = DiagonalForm::new(k, entries).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut values = vec![QuadElem::one()];
    values.extend(search.primes.iter().map(|sp| sp.generator.clone()));
    let plan =
        GluingPlan::canonical_chain(f0, &values).map_err(gluing_error)?.with_metadata("implicit_piece", "a0 = 1");
    let ev = trace_field(&plan).map_err(gluing_error)?;
    let expected_degree = 1u64 << search.primes.len();
    rep.degrade(Status::from_bool(ev.verdict.degree() == expected_degree));
    rep.step(
        "trace_field",
        json!({"pieces": values.iter().map(ScalarWire::from_elem).collect::<Vec<_>>(), "isometries": "canonical"}),
        serde_json::to_value(&ev.verdict).expect("verdicts serialize"),
        "Thm 4.1",
    );
    rep.data = json!({"trace_field": ev.verdict.trace_field, "degree": ev.verdict.degree()});
    rep.conclusion = if search.primes.len() < r {
        format!(
            "only {} of {r} split primes below norm {norm_bound}; partial field {} of degree {}",
            search.primes.len(),
            ev.verdict.trace_field,
            ev.verdict.degree()
        )
    } else {
        format!("trace field {} of degree {} over {}", ev.verdict.trace_field, ev.verdict.degree(), k)
    };
    Ok(rep)
}

pub fn run_delta5() -> Report {
    delta5_obstruction()
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Invariants { form } => invariants(form),
        Command::Equiv { left, right } => equiv(left, right),
        Command::Similar { left, right } => similar(left, right),
        Command::TraceField { plan, plan_file } => {
            let path = plan
                .as_ref()
                .or(plan_file.as_ref())
                .ok_or_else(|| CliError::Usage("a plan file is required".into()))?;
            trace_field_cmd(path)
        }
        Command::Twist(t) => twist(t),
        Command::Examples(ExampleCommand::Ex45 { r, n }) => Ok(Output::from_report(run_example_ex45(*r, *n)?)),
        Command::Examples(ExampleCommand::Ex46 { r, n, norm_bound }) => {
            Ok(Output::from_report(run_example_ex46(*r, *n, *norm_bound)?))
        }
        Command::Examples(ExampleCommand::Delta5) | Command::Delta5 => Ok(Output::from_report(run_delta5())),
        Command::Version => {
            let v = env!("CARGO_PKG_VERSION");
            Ok(Output {
                status: Status::Pass,
                json: json!({"name": "traceforge", "version": v}),
                text: format!("traceforge {v}\n"),
            })
        }
    }
}

/// Parses arguments and runs one command: `(exit code, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string(), String::new()),
                _ => (EXIT_USAGE, String::new(), e.to_string()),
            };
        }
    };
    match execute(&cli) {
        Ok(out) => (out.status.exit_code(), out.render(cli.json), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
