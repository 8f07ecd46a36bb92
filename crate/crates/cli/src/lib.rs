//! `qdeform` command-line front end.
//!
//! Exit codes: 0 pass, 1 residual failure, 2 usage error, 3 domain error.
//! Every failure prints one line `error kind=<kind>: <reason>` on stderr.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

use qdeform::algebra::{casimir_report, casimir_word, verify_rep, AlgebraFamily, FamilyTag, ResidualReport, DEFAULT_TOLERANCE};
use qdeform::bracket::{gen_bracket, BracketBranch, DeformParams};
use qdeform::fock::FockRep;
use qdeform::hopf::{hopf_scan, suq2_homomorphism_residual, HopfScanConfig};
use qdeform::ladder::Window;
use qdeform::transforms::{
    dressing_solver_demo, f_obstruction_term, gen_mb_reduction_check, h_scan, reduction_check_with,
    sum_zero_rhs_difference, uniform_grid, ReductionCase,
};

pub mod golden;
mod output;

use output::{fmt_num, num, nums, object, write_csv, write_json};

pub const TOL_ENV: &str = "QDEFORM_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qdeform::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Core(qdeform::Error::InvalidParams(_)) => "usage",
            CliError::Core(qdeform::Error::Domain(_)) => "domain",
            CliError::Core(qdeform::Error::NonUnitary { .. }) => "non-unitary",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "domain" | "non-unitary" => 3,
            _ => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "qdeform", version, about = "Numerical workbench for two-parameter q-deformed oscillator algebras")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Residual tolerance (overrides QDEFORM_TOL; default 1e-10).
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the oscillator families and where they sit in the (alpha, beta) plane.
    Families,
    /// Evaluate the generalized bracket [x]_{alpha,beta}.
    Bracket(BracketArgs),
    /// Check a family's defining relations and Casimir on its Fock representation.
    Verify(VerifyArgs),
    /// Casimir centrality and eigenvalue profile.
    Casimir(VerifyArgs),
    /// Reduce the general oscillator to a known family by dressing.
    Transform(TransformArgs),
    /// h(n) over a k grid (CSV k,n,h).
    Hscan(HscanArgs),
    /// F(n, k1, k2) over a window (CSV n,F).
    Fscan(FscanArgs),
    /// Coproduct search over a k grid (CSV).
    Hopf(HopfArgs),
    /// su_q(2) coproduct homomorphism scan.
    Suq2(Suq2Args),
}

#[derive(Args, Debug, Clone, Default)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// k-form base; maps to q = qprime, alpha = 1, beta = k.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["q", "alpha", "beta"], requires = "k")]
    qprime: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "qprime")]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["q", "alpha", "beta", "qprime"])]
    q1: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["q", "alpha", "beta", "qprime"])]
    q2: Option<f64>,
}

impl ParamArgs {
    fn given(&self) -> Vec<&'static str> {
        [
            ("--q", self.q),
            ("--alpha", self.alpha),
            ("--beta", self.beta),
            ("--qprime", self.qprime),
            ("--k", self.k),
            ("--q1", self.q1),
            ("--q2", self.q2),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.map(|_| name))
        .collect()
    }

    fn only(&self, family: FamilyTag, allowed: &[&str]) -> CliResult<()> {
        match self.given().into_iter().find(|g| !allowed.contains(g)) {
            Some(g) => Err(usage(format!("family {family} does not take {g}"))),
            None => Ok(()),
        }
    }

    /// `(q, alpha, beta)` or the k-form; `defaults` fills missing exponents.
    fn deform(&self, defaults: Option<(f64, f64)>) -> CliResult<DeformParams> {
        if let (Some(qp), Some(k)) = (self.qprime, self.k) {
            return Ok(DeformParams::from_k_form(qp, k)?);
        }
        let q = self.q.ok_or_else(|| usage("missing --q (or --qprime with --k)"))?;
        let alpha = self.alpha.or(defaults.map(|d| d.0)).ok_or_else(|| usage("missing --alpha"))?;
        let beta = self.beta.or(defaults.map(|d| d.1)).ok_or_else(|| usage("missing --beta"))?;
        Ok(DeformParams::new(q, alpha, beta)?)
    }

    fn family(&self, tag: FamilyTag) -> CliResult<AlgebraFamily> {
        let q = || self.q.ok_or_else(|| usage(format!("family {tag} needs --q")));
        let single = |build: fn(f64) -> qdeform::Result<AlgebraFamily>| -> CliResult<AlgebraFamily> {
            self.only(tag, &["--q"])?;
            Ok(build(q()?)?)
        };
        let triple = |wrap: fn(DeformParams) -> AlgebraFamily| -> CliResult<AlgebraFamily> {
            self.only(tag, &["--q", "--alpha", "--beta", "--qprime", "--k"])?;
            Ok(wrap(self.deform(None)?))
        };
        match tag {
            FamilyTag::MacfarlaneBiedenharn => single(AlgebraFamily::mb),
            FamilyTag::ArikCoon => single(AlgebraFamily::arik_coon),
            FamilyTag::ChaturvediSrinivasan => single(AlgebraFamily::chaturvedi_srinivasan),
            FamilyTag::HongYan => single(AlgebraFamily::hong_yan),
            FamilyTag::ChakrabartiJagannathan => {
                let q1 = self.q1.ok_or_else(|| usage(format!("family {tag} needs --q1")))?;
                let q2 = self.q2.ok_or_else(|| usage(format!("family {tag} needs --q2")))?;
                Ok(AlgebraFamily::chakrabarti_jagannathan(q1, q2)?)
            }
            FamilyTag::GenMB => triple(AlgebraFamily::GenMB),
            FamilyTag::GenOsc => triple(AlgebraFamily::GenOsc),
            FamilyTag::SuQ2Gen => triple(AlgebraFamily::SuQ2Gen),
            FamilyTag::GenArikCoon => {
                self.only(tag, &["--q", "--alpha"])?;
                let alpha = self.alpha.ok_or_else(|| usage(format!("family {tag} needs --alpha")))?;
                Ok(AlgebraFamily::gen_arik_coon(q()?, alpha)?)
            }
        }
    }
}

#[derive(Args, Debug, Clone)]
struct RepArgs {
    /// Spectrum offset of N.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    casimir_const: f64,
    /// First basis state of the window.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n0: i64,
    #[arg(long, default_value_t = Window::DEFAULT_DIM)]
    dim: usize,
    /// Allow negative a^dagger a eigenvalues (imaginary amplitudes).
    #[arg(long)]
    non_unitary: bool,
}

impl RepArgs {
    fn window(&self) -> CliResult<Window> {
        window(self.n0, self.dim)
    }

    fn rep(&self, family: AlgebraFamily) -> CliResult<FockRep> {
        Ok(FockRep::new(family, self.nu, self.casimir_const)
            .with_window(self.window()?)
            .allow_non_unitary(self.non_unitary))
    }
}

fn window(n0: i64, dim: usize) -> CliResult<Window> {
    if dim < 2 {
        return Err(usage(format!("--dim must be >= 2 (got {dim})")));
    }
    Ok(Window::new(n0, dim))
}

fn family_parser() -> impl TypedValueParser<Value = FamilyTag> {
    PossibleValuesParser::new(FamilyTag::ALL.map(|t| t.name()))
        .map(|s| s.parse::<FamilyTag>().expect("restricted to known names"))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct BracketArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Arguments x (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = family_parser())]
    family: FamilyTag,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    rep: RepArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TransformCase {
    AlphaZero,
    BetaZero,
    SumZero,
    AlphaEqBeta,
    /// Generalized MB dressed to MB(q^{(alpha-beta)/2}).
    GenMb,
    /// State-by-state solve for an MB dressing of the k-form oscillator.
    DressingSolver,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[arg(long = "case", value_enum)]
    case: TransformCase,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    rep: RepArgs,
}

#[derive(Args, Debug)]
struct HscanArgs {
    #[arg(long, default_value_t = 1.5)]
    qprime: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, default_value_t = -0.6, allow_negative_numbers = true)]
    k_min: f64,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    k_max: f64,
    #[arg(long, default_value_t = 0.1)]
    k_step: f64,
    #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
    n_max: i64,
}

#[derive(Args, Debug)]
struct FscanArgs {
    #[arg(long)]
    qprime: f64,
    #[arg(long, allow_negative_numbers = true)]
    k1: f64,
    #[arg(long, allow_negative_numbers = true)]
    k2: f64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    n0: i64,
    #[arg(long, default_value_t = Window::DEFAULT_DIM)]
    dim: usize,
}

#[derive(Args, Debug)]
struct HopfArgs {
    #[arg(long, default_value_t = 1.5)]
    qprime: f64,
    /// k grid (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2,-1,-0.5,0,0.5,1")]
    k: Vec<f64>,
    /// Points per axis of the coarse grid.
    #[arg(long, default_value_t = 9)]
    coarse_points: usize,
    #[arg(long, default_value_t = 2)]
    refine_rounds: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    casimir_const: f64,
    /// Side of the two-site window.
    #[arg(long, default_value_t = 5)]
    dim: usize,
}

#[derive(Args, Debug)]
struct Suq2Args {
    #[command(flatten)]
    params: ParamArgs,
    /// Lowest-weight offset; -j gives the spin-j representation.
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    nu: f64,
    /// J+J- eigenvalue on the lowest state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    casimir_const: f64,
    /// Side of the two-site window.
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long)]
    non_unitary: bool,
}

fn tolerance(flag: Option<f64>, env: Option<&str>) -> CliResult<f64> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(s)) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("{TOL_ENV} is not a number ('{s}')")))?,
        (None, None) => DEFAULT_TOLERANCE,
    };
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(usage(format!("tolerance must be a positive number (got {tol})")));
    }
    Ok(tol)
}

/// Runs one command line. `args` includes the program name; `env_tol` is the
/// value of `QDEFORM_TOL`, if set. Returns the process exit code.
pub fn run<I, T>(args: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let text = e.render().to_string();
            let reason = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            report_error(err, &usage(reason.to_string()));
            return 2;
        }
    };
    let mut buf = Vec::new();
    let outcome = tolerance(cli.tol, env_tol).and_then(|tol| dispatch(&cli.cmd, tol, &mut buf, err));
    let outcome = outcome.and_then(|pass| {
        match &cli.out {
            Some(path) => std::fs::write(path, &buf)?,
            None => out.write_all(&buf)?,
        }
        out.flush()?;
        Ok(pass)
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            report_error(err, &e);
            e.exit_code()
        }
    }
}

fn report_error(err: &mut dyn Write, e: &CliError) {
    let reason = e.to_string().replace('\n', " ");
    let _ = writeln!(err, "error kind={}: {reason}", e.kind());
}

fn dispatch(cmd: &Command, tol: f64, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult<bool> {
    match cmd {
        Command::Families => families(out),
        Command::Bracket(a) => bracket(a, out),
        Command::Verify(a) => verify(a, tol, out),
        Command::Casimir(a) => casimir(a, tol, out),
        Command::Transform(a) => transform(a, tol, out),
        Command::Hscan(a) => hscan(a, out, err),
        Command::Fscan(a) => fscan(a, out),
        Command::Hopf(a) => hopf(a, out, err),
        Command::Suq2(a) => suq2(a, tol, out),
    }
}

fn families(out: &mut Vec<u8>) -> CliResult<bool> {
    let rows = FamilyTag::ALL.map(|t| vec![t.name(), t.chart_location()]);
    write_csv(out, &["family", "chart"], rows)?;
    Ok(true)
}

fn branch_name(b: BracketBranch) -> &'static str {
    match b {
        BracketBranch::Generic => "generic",
        BracketBranch::DegenerateLimit => "degenerate",
    }
}

fn bracket(a: &BracketArgs, out: &mut Vec<u8>) -> CliResult<bool> {
    // q alone gives the symmetric bracket [x] = [x]_{1,-1}
    let p = a.params.deform(Some((1.0, -1.0)))?;
    let values: Vec<_> = a.x.iter().map(|&x| (x, gen_bracket(x, &p))).collect();
    match a.format {
        Format::Csv => write_csv(
            out,
            &["x", "value", "branch"],
            values.iter().map(|(x, v)| vec![fmt_num(*x), fmt_num(v.value), branch_name(v.branch).to_string()]),
        )?,
        Format::Json => {
            let rows = values
                .iter()
                .map(|(x, v)| {
                    Value::Object(object([
                        ("x", num(*x)),
                        ("value", num(v.value)),
                        ("branch", branch_name(v.branch).into()),
                    ]))
                })
                .collect();
            let report = object([
                ("params", output::params(&[("q", p.q()), ("alpha", p.alpha()), ("beta", p.beta())])),
                ("values", Value::Array(rows)),
            ]);
            write_json(out, &Value::Object(report))?;
        }
    }
    Ok(true)
}

fn relations_json(r: &ResidualReport) -> Value {
    Value::Array(r.relations.iter().map(output::relation).collect())
}

fn verify(a: &VerifyArgs, tol: f64, out: &mut Vec<u8>) -> CliResult<bool> {
    let rep = a.rep.rep(a.params.family(a.family)?)?;
    let report = verify_rep(&rep, tol)?;
    let casimir = casimir_report(&rep)?;
    let pass = report.pass && casimir.as_ref().map_or(true, |c| c.pass(tol));
    let json = object([
        ("family", report.family.name().into()),
        ("params", output::params(&report.params)),
        ("window", output::window(report.window)),
        ("nu", num(rep.nu)),
        ("casimir_const", num(rep.casimir_const)),
        ("tolerance", num(tol)),
        ("relations", relations_json(&report)),
        ("casimir", casimir.as_ref().map_or(Value::Null, |c| output::casimir(c, tol))),
        ("pass", pass.into()),
    ]);
    write_json(out, &Value::Object(json))?;
    Ok(pass)
}

fn casimir(a: &VerifyArgs, tol: f64, out: &mut Vec<u8>) -> CliResult<bool> {
    let family = a.params.family(a.family)?;
    if casimir_word(&family).is_none() {
        return Err(usage(format!("no Casimir element is known for family {}", a.family)));
    }
    let rep = a.rep.rep(family)?;
    let c = casimir_report(&rep)?
        .ok_or_else(|| usage(format!("no Casimir element is known for family {}", a.family)))?;
    let pass = c.pass(tol);
    let json = object([
        ("family", a.family.name().into()),
        ("params", output::params(&rep.family.param_list())),
        ("window", output::window(rep.window)),
        ("nu", num(rep.nu)),
        ("casimir_const", num(rep.casimir_const)),
        ("tolerance", num(tol)),
        ("casimir", output::casimir(&c, tol)),
        ("pass", pass.into()),
    ]);
    write_json(out, &Value::Object(json))?;
    Ok(pass)
}

fn transform(a: &TransformArgs, tol: f64, out: &mut Vec<u8>) -> CliResult<bool> {
    let w = a.rep.window()?;
    let (nu, c) = (a.rep.nu, a.rep.casimir_const);
    match a.case {
        TransformCase::AlphaZero => reduction(a, ReductionCase::AlphaZero, tol, out),
        TransformCase::BetaZero => reduction(a, ReductionCase::BetaZero, tol, out),
        TransformCase::SumZero => reduction(a, ReductionCase::SumZero, tol, out),
        TransformCase::AlphaEqBeta => reduction(a, ReductionCase::AlphaEqBeta, tol, out),
        TransformCase::GenMb => {
            let p = a.params.deform(None)?;
            let report = gen_mb_reduction_check(&p, nu, c, w, tol)?;
            let json = object([
                ("case", "gen-mb".into()),
                ("source", source_json(FamilyTag::GenMB, &p)),
                ("dressing", format!("q^{{-(alpha+beta)N/4}}").into()),
                ("target", target_json(&report)),
                ("window", output::window(w)),
                ("nu", num(nu)),
                ("casimir_const", num(c)),
                ("tolerance", num(tol)),
                ("relations", relations_json(&report)),
                ("pass", report.pass.into()),
            ]);
            write_json(out, &Value::Object(json))?;
            Ok(report.pass)
        }
        TransformCase::DressingSolver => {
            let (Some(qprime), Some(k)) = (a.params.qprime, a.params.k) else {
                return Err(usage("dressing-solver needs --qprime and --k"));
            };
            let r = dressing_solver_demo(qprime, k, nu, w)?;
            let scale = r.q_values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let json = object([
                ("case", "dressing-solver".into()),
                ("params", output::params(&[("qprime", qprime), ("k", k)])),
                ("window", output::window(w)),
                ("nu", num(nu)),
                ("tolerance", num(tol)),
                ("q_values", nums(&r.q_values)),
                ("spread", num(r.spread)),
                ("f_values", nums(&r.f_values)),
                ("constant", (r.spread <= tol * scale).into()),
            ]);
            write_json(out, &Value::Object(json))?;
            Ok(true)
        }
    }
}

fn reduction(a: &TransformArgs, case: ReductionCase, tol: f64, out: &mut Vec<u8>) -> CliResult<bool> {
    let w = a.rep.window()?;
    let (nu, c) = (a.rep.nu, a.rep.casimir_const);
    let p = a.params.deform(None)?;
    let (map, _) = case.target(&p)?;
    let report = reduction_check_with(case, &p, nu, c, w, tol)?;
    let mut pass = report.pass;
    let mut json = object([
        ("case", case.name().into()),
        ("source", source_json(FamilyTag::GenOsc, &p)),
        ("dressing", map.label.clone().into()),
        ("target", target_json(&report)),
        ("window", output::window(w)),
        ("nu", num(nu)),
        ("casimir_const", num(c)),
        ("tolerance", num(tol)),
        ("relations", relations_json(&report)),
    ]);
    if case == ReductionCase::SumZero {
        let gap = sum_zero_rhs_difference(&p, nu, w)?;
        pass &= gap.within(tol);
        let gap_json = object([
            ("max_difference", num(gap.max_difference)),
            ("scale", num(gap.scale)),
            ("pass", gap.within(tol).into()),
        ]);
        json.insert("operator_gap".into(), Value::Object(gap_json));
    }
    json.insert("pass".into(), pass.into());
    write_json(out, &Value::Object(json))?;
    Ok(pass)
}

fn source_json(tag: FamilyTag, p: &DeformParams) -> Value {
    Value::Object(object([
        ("family", tag.name().into()),
        ("params", output::params(&[("q", p.q()), ("alpha", p.alpha()), ("beta", p.beta())])),
    ]))
}

fn target_json(r: &ResidualReport) -> Value {
    Value::Object(object([("family", r.family.name().into()), ("params", output::params(&r.params))]))
}

fn hscan(a: &HscanArgs, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult<bool> {
    let grid = uniform_grid(a.k_min, a.k_max, a.k_step)?;
    let scan = h_scan(a.qprime, &grid, a.nu, a.n_max)?;
    let rows = scan.rows.iter().map(|r| {
        let h = r.h.as_ref().map_or(String::new(), |h| fmt_num(*h));
        vec![fmt_num(r.k), r.n.to_string(), h]
    });
    write_csv(out, &["k", "n", "h"], rows)?;
    let failures: Vec<_> = scan.rows.iter().filter(|r| r.h.is_err()).collect();
    if !failures.is_empty() {
        writeln!(err, "note: {} grid points outside the domain of h (h left empty)", failures.len())?;
        for r in failures {
            if let Err(reason) = &r.h {
                writeln!(err, "note: k={} n={}: {reason}", fmt_num(r.k), r.n)?;
            }
        }
    }
    Ok(true)
}

fn fscan(a: &FscanArgs, out: &mut Vec<u8>) -> CliResult<bool> {
    let w = window(a.n0, a.dim)?;
    let rows = w
        .states()
        .map(|n| Ok(vec![n.to_string(), fmt_num(f_obstruction_term(n as f64, a.qprime, a.k1, a.k2)?)]))
        .collect::<CliResult<Vec<_>>>()?;
    write_csv(out, &["n", "F"], rows)?;
    Ok(true)
}

fn hopf(a: &HopfArgs, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult<bool> {
    if a.coarse_points < 2 {
        return Err(usage(format!("--coarse-points must be >= 2 (got {})", a.coarse_points)));
    }
    let cfg = HopfScanConfig {
        coarse_points: a.coarse_points,
        refine_rounds: a.refine_rounds,
        nu: a.nu,
        casimir_const: a.casimir_const,
        two_site: window(0, a.dim)?,
        three_site: window(0, a.dim.saturating_sub(1).max(2))?,
        ..HopfScanConfig::default()
    };
    let rows = hopf_scan(a.qprime, &a.k, &cfg)?;
    let header = ["k", "residual", "alpha1", "alpha2", "alpha3", "alpha4", "gamma", "gamma_im"];
    write_csv(
        out,
        &header,
        rows.iter().map(|r| {
            let mut cells = vec![fmt_num(r.k), fmt_num(r.min_residual)];
            match &r.best {
                Some(s) => {
                    cells.extend(s.alpha.iter().map(|x| fmt_num(*x)));
                    cells.extend([fmt_num(s.gamma.re), fmt_num(s.gamma.im)]);
                }
                None => cells.extend(std::iter::repeat(fmt_num(f64::NAN)).take(6)),
            }
            cells
        }),
    )?;
    for r in rows.iter().filter(|r| !r.converged()) {
        writeln!(err, "note: k={}: {}", fmt_num(r.k), r.failure.as_deref().unwrap_or("no finite residual"))?;
    }
    Ok(true)
}

fn suq2(a: &Suq2Args, tol: f64, out: &mut Vec<u8>) -> CliResult<bool> {
    let p = a.params.deform(None)?;
    let w = window(0, a.dim)?;
    let rep = FockRep::new(AlgebraFamily::SuQ2Gen(p), a.nu, a.casimir_const)
        .with_window(w)
        .allow_non_unitary(a.non_unitary);
    let scan = suq2_homomorphism_residual(&rep, w)?;
    let pass = scan.residual <= tol;
    let json = object([
        ("family", FamilyTag::SuQ2Gen.name().into()),
        ("params", output::params(&[("q", p.q()), ("alpha", p.alpha()), ("beta", p.beta())])),
        ("window", output::window(w)),
        ("nu", num(a.nu)),
        ("casimir_const", num(a.casimir_const)),
        ("tolerance", num(tol)),
        ("s", num(scan.s)),
        ("residual", num(scan.residual)),
        ("pass", pass.into()),
    ]);
    write_json(out, &Value::Object(json))?;
    Ok(pass)
}
