//! The `simrec` command line, as a library so it can be driven in-process.
//!
//! [`run`] parses arguments, reads the system file and returns a
//! [`CliReport`] plus the text to print. Exit codes: `0` success, `1` the
//! system lacks a property the command needs, `2` the arguments or the file
//! could not be parsed.

use std::fmt::Write;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use simrec::decouple::{
    char_poly, decouple_affine, decouple_homogeneous, direct_affine_small, RegularRecurrence,
};
use simrec::model::{render_system, sum_profile, RenderFormat};
use simrec::oracle::{check_invariant, check_regular, iterate, Trajectory};
use simrec::pairsolve::{
    closed_form_pair_col, closed_form_pair_row, difference_closed_form, ClosedFormPair, PairForm,
};
use simrec::triplesolve::{
    detect_weights, pair_route, proportional_constants, solve_triple_with, triple_constants,
    Provenance, TripleSolution,
};
use simrec::{parse_system, Rational, RecurrenceSystem, SolveError};

#[derive(Parser, Debug)]
#[command(
    name = "simrec",
    version,
    about = "Exact solver for simultaneous linear recurrences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also print each value as a K-digit decimal (approximate).
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Homogeneous,
    Augmented,
    Direct,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Echo the parsed system.
    Show { file: PathBuf },
    /// Print the regular recurrence every variable satisfies.
    Decouple {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Augmented)]
        mode: Mode,
    },
    /// Print row/column sums and any invariant weights.
    Detect { file: PathBuf },
    /// Evaluate the closed form at one step or an inclusive range `A..B`.
    ClosedForm(ClosedFormArgs),
    /// Compare every applicable formula against direct iteration.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 40)]
        steps: u64,
    },
}

#[derive(Args, Debug)]
struct ClosedFormArgs {
    file: PathBuf,
    #[arg(long, required_unless_present = "range", conflicts_with = "range")]
    at: Option<u64>,
    #[arg(long, value_parser = parse_range)]
    range: Option<(u64, u64)>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u64 = a.parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: u64 = b.parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    StructuralFailure,
    ParseFailure,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::StructuralFailure => 1,
            Outcome::ParseFailure => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CliReport {
    pub command: String,
    pub outcome: Outcome,
    pub payload: Value,
}

/// A finished invocation: the report and the text to print.
#[derive(Clone, Debug)]
pub struct Execution {
    pub report: CliReport,
    pub output: String,
    /// The output is a diagnostic and belongs on stderr.
    pub diagnostic: bool,
}

impl Execution {
    pub fn exit_code(&self) -> i32 {
        self.report.outcome.exit_code()
    }
}

struct Failure {
    outcome: Outcome,
    message: String,
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure {
            outcome: Outcome::StructuralFailure,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure {
        outcome: Outcome::ParseFailure,
        message: message.into(),
    }
}

/// Rendered text and structured payload of a successful command.
struct Done {
    text: String,
    payload: Value,
    outcome: Outcome,
}

pub fn run<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let outcome = if e.use_stderr() {
                Outcome::ParseFailure
            } else {
                Outcome::Success
            };
            return Execution {
                report: CliReport {
                    command: String::new(),
                    outcome,
                    payload: json!({ "message": e.to_string() }),
                },
                output: e.to_string(),
                diagnostic: outcome != Outcome::Success,
            };
        }
    };
    let command = match &cli.command {
        Command::Show { .. } => "show",
        Command::Decouple { .. } => "decouple",
        Command::Detect { .. } => "detect",
        Command::ClosedForm(_) => "closed-form",
        Command::Verify { .. } => "verify",
    }
    .to_string();
    let ctx = Ctx {
        decimal: cli.decimal,
    };
    let (outcome, text, payload, diagnostic) = match execute(&cli.command, &ctx) {
        Ok(done) => (done.outcome, done.text, done.payload, false),
        Err(f) => (
            f.outcome,
            format!("error: {}\n", f.message),
            json!({ "error": f.message }),
            true,
        ),
    };
    let report = CliReport {
        command,
        outcome,
        payload,
    };
    let output = match cli.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    let diagnostic = diagnostic && cli.format == Format::Text;
    Execution {
        report,
        output,
        diagnostic,
    }
}

fn load(file: &PathBuf) -> Result<RecurrenceSystem, Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| parse_failure(format!("cannot read {}: {e}", file.display())))?;
    parse_system(&text).map_err(|e| parse_failure(format!("{}: {e}", file.display())))
}

struct Ctx {
    decimal: Option<usize>,
}

impl Ctx {
    fn value(&self, r: &Rational) -> String {
        match self.decimal {
            Some(k) => format!("{r} (approx. {})", r.to_decimal_string(k)),
            None => r.to_string(),
        }
    }

    fn value_json(&self, r: &Rational) -> Value {
        match self.decimal {
            Some(k) => json!({ "exact": r.to_string(), "approximate": r.to_decimal_string(k) }),
            None => json!(r.to_string()),
        }
    }
}

fn execute(command: &Command, ctx: &Ctx) -> Result<Done, Failure> {
    match command {
        Command::Show { file } => {
            let sys = load(file)?;
            Ok(success(
                render_system(&sys, RenderFormat::Text),
                json!(sys.to_document()),
            ))
        }
        Command::Decouple { file, mode } => decouple(&load(file)?, *mode),
        Command::Detect { file } => detect(&load(file)?),
        Command::ClosedForm(args) => {
            let sys = load(&args.file)?;
            let (a, b) = match (args.at, args.range) {
                (Some(x), _) => (x, x),
                (None, Some(r)) => r,
                (None, None) => unreachable!("clap requires one of --at/--range"),
            };
            closed_form(&sys, a, b, ctx)
        }
        Command::Verify { file, steps } => verify(&load(file)?, *steps),
    }
}

fn success(text: String, payload: Value) -> Done {
    Done {
        text,
        payload,
        outcome: Outcome::Success,
    }
}

/// `a[x] = 9*a[x-1] - 18*a[x-2] - 2`
fn recurrence_line(name: &str, rec: &RegularRecurrence, var: usize) -> String {
    let mut terms: Vec<(Rational, String)> = rec
        .betas
        .iter()
        .enumerate()
        .filter(|(_, b)| !b.is_zero())
        .map(|(j, b)| (b.clone(), format!("{name}[x-{}]", j + 1)))
        .collect();
    if let Some(tail) = &rec.tail {
        if !tail[var].is_zero() {
            terms.push((tail[var].clone(), String::new()));
        }
    }
    let mut out = format!("{name}[x] = ");
    if terms.is_empty() {
        out.push('0');
    }
    for (k, (coef, var)) in terms.iter().enumerate() {
        let magnitude = coef.abs();
        if k == 0 {
            if coef.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if coef.is_negative() { " - " } else { " + " });
        }
        match (var.is_empty(), magnitude.is_one()) {
            (true, _) => write!(out, "{magnitude}").unwrap(),
            (false, true) => out.push_str(var),
            (false, false) => write!(out, "{magnitude}*{var}").unwrap(),
        }
    }
    out
}

fn decouple(sys: &RecurrenceSystem, mode: Mode) -> Result<Done, Failure> {
    let (rec, matrix) = match mode {
        Mode::Homogeneous => (decouple_homogeneous(sys)?, sys.coefficients().clone()),
        Mode::Augmented => (
            decouple_affine(sys)?,
            simrec::decouple::augment(sys).entries,
        ),
        Mode::Direct => (direct_affine_small(sys)?, sys.coefficients().clone()),
    };
    let phi = char_poly(&matrix)?;
    let mut text = format!("characteristic polynomial: {phi}\n");
    for (i, name) in sys.names().iter().enumerate() {
        writeln!(text, "{}", recurrence_line(name, &rec, i)).unwrap();
    }
    let payload = json!({
        "characteristic_polynomial": phi.to_string(),
        "recurrence": rec,
    });
    Ok(success(text, payload))
}

fn detect(sys: &RecurrenceSystem) -> Result<Done, Failure> {
    let profile = sum_profile(sys);
    let join = |v: &[Rational]| {
        v.iter()
            .map(Rational::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut text = format!(
        "row sums: ({}){}\ncolumn sums: ({}){}\n",
        join(&profile.row_sums),
        if profile.rows_equal { " equal" } else { "" },
        join(&profile.col_sums),
        if profile.cols_equal { " equal" } else { "" },
    );
    let weights = detect_weights(sys);
    let mut invariant = Value::Null;
    match &weights {
        Some(w) => {
            let init = sys.initial();
            let holds = w.holds(&init[0], &init[1], &init[2]);
            invariant = json!(holds);
            writeln!(
                text,
                "weights: w1 = {}, w2 = {} ({})",
                w.w1,
                w.w2,
                provenance_label(w.provenance)
            )
            .unwrap();
            if !holds {
                text.push_str("initial values do not satisfy the invariant\n");
            }
        }
        None if sys.order() == 3 => text.push_str("weights: none found\n"),
        None => {}
    }
    let payload = json!({
        "sum_profile": profile,
        "weights": weights,
        "initial_invariant": invariant,
    });
    Ok(success(text, payload))
}

fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::CoefficientProportion => "coefficient-proportion",
        Provenance::InitialValuePropagation => "initial-value-propagation",
    }
}

/// Whichever closed form applies to the system.
#[allow(clippy::large_enum_variant)]
enum Solver {
    Pair(ClosedFormPair),
    Triple(TripleSolution),
}

impl Solver {
    fn for_system(sys: &RecurrenceSystem) -> Result<Self, Failure> {
        match sys.order() {
            2 => {
                let profile = sum_profile(sys);
                if profile.rows_equal {
                    Ok(Solver::Pair(closed_form_pair_row(sys)?))
                } else if profile.cols_equal {
                    Ok(Solver::Pair(closed_form_pair_col(sys)?))
                } else {
                    Err(
                        SolveError::Structural("neither row sums nor column sums are equal".into())
                            .into(),
                    )
                }
            }
            3 => {
                let w = detect_weights(sys).ok_or_else(|| {
                    SolveError::Structural("no weights with b = w1·a + w2·c were found".into())
                })?;
                Ok(Solver::Triple(solve_triple_with(sys, &w)?))
            }
            n => Err(SolveError::UnsupportedOrder {
                order: n,
                reason: "closed forms cover two and three variables",
            }
            .into()),
        }
    }

    fn evaluate(&self, x: u64) -> Vec<Rational> {
        match self {
            Solver::Pair(p) => p.evaluate(x).to_vec(),
            Solver::Triple(t) => t.evaluate(x).to_vec(),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Solver::Pair(ClosedFormPair {
                form: PairForm::Row(_),
                ..
            }) => "pair-row-sums",
            Solver::Pair(ClosedFormPair {
                form: PairForm::Column(_),
                ..
            }) => "pair-column-sums",
            Solver::Triple(t) => match t {
                TripleSolution::Direct(_) => "triple",
                TripleSolution::AcPair { .. } => "triple-via-ac-pair",
            },
        }
    }

    fn case_id(&self) -> u8 {
        match self {
            Solver::Pair(p) => p.case_id(),
            Solver::Triple(t) => t.case_id(),
        }
    }

    fn constants(&self) -> Vec<(&'static str, Rational)> {
        let pair = |p: &ClosedFormPair| match &p.form {
            PairForm::Row(c) => vec![
                ("S", c.s.clone()),
                ("D", c.d.clone()),
                ("delta", c.delta.clone()),
                ("delta0", c.delta0.clone()),
            ],
            PairForm::Column(c) => vec![
                ("P", c.p.clone()),
                ("T", c.t.clone()),
                ("sigma0", c.sigma0.clone()),
                ("affine_sum", c.affine_sum.clone()),
            ],
        };
        match self {
            Solver::Pair(p) => pair(p),
            Solver::Triple(t) => {
                let w = t.weights();
                let mut out = vec![("w1", w.w1.clone()), ("w2", w.w2.clone())];
                match t {
                    TripleSolution::Direct(f) => {
                        let k = &f.constants;
                        out.extend([
                            ("C1", k.c1.clone()),
                            ("C2", k.c2.clone()),
                            ("C3", k.c3.clone()),
                            ("C4", k.c4.clone()),
                            ("C5", k.c5.clone()),
                            ("alpha2_star", k.alpha2_star.clone()),
                        ]);
                    }
                    TripleSolution::AcPair { pair: p, .. } => out.extend(pair(p)),
                }
                out
            }
        }
    }
}

fn closed_form(sys: &RecurrenceSystem, from: u64, to: u64, ctx: &Ctx) -> Result<Done, Failure> {
    let solver = Solver::for_system(sys)?;
    let constants = solver.constants();
    let mut text = format!("solver: {} (case {})\n", solver.label(), solver.case_id());
    let listed: Vec<String> = constants
        .iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect();
    writeln!(text, "constants: {}", listed.join(", ")).unwrap();
    let mut rows = Vec::new();
    for x in from..=to {
        let values = solver.evaluate(x);
        let cells: Vec<String> = sys
            .names()
            .iter()
            .zip(&values)
            .map(|(n, v)| format!("{n}[{x}] = {}", ctx.value(v)))
            .collect();
        writeln!(text, "{}", cells.join(", ")).unwrap();
        let named: serde_json::Map<String, Value> = sys
            .names()
            .iter()
            .cloned()
            .zip(values.iter().map(|v| ctx.value_json(v)))
            .collect();
        rows.push(json!({ "x": x, "values": named }));
    }
    let payload = json!({
        "solver": solver.label(),
        "case_id": solver.case_id(),
        "constants": constants.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "steps": rows,
    });
    Ok(success(text, payload))
}

#[derive(Serialize)]
struct Check {
    name: String,
    status: &'static str,
    detail: String,
}

struct Checks(Vec<Check>);

impl Checks {
    fn record(&mut self, name: impl Into<String>, result: Result<bool, SolveError>) {
        let (status, detail) = match result {
            Ok(true) => ("pass", String::new()),
            Ok(false) => ("fail", "differs from direct iteration".to_string()),
            Err(e @ (SolveError::TrajectoryTooShort { .. } | SolveError::UnsupportedCase(_))) => {
                ("skip", e.to_string())
            }
            Err(e) => ("fail", e.to_string()),
        };
        self.0.push(Check {
            name: name.into(),
            status,
            detail,
        });
    }

    fn skip(&mut self, name: impl Into<String>, why: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            status: "skip",
            detail: why.into(),
        });
    }
}

fn matches_rows(t: &Trajectory, f: impl Fn(u64) -> Vec<Rational>) -> bool {
    t.rows()
        .iter()
        .enumerate()
        .all(|(x, row)| f(x as u64) == *row)
}

fn verify(sys: &RecurrenceSystem, steps: u64) -> Result<Done, Failure> {
    let t = iterate(sys, steps)?;
    let mut checks = Checks(Vec::new());

    checks.record(
        "augmented recurrence",
        decouple_affine(sys).and_then(|r| check_regular(&t, &r)),
    );
    if sys.is_homogeneous() {
        checks.record(
            "homogeneous recurrence",
            decouple_homogeneous(sys).and_then(|r| check_regular(&t, &r)),
        );
    }
    if sys.order() <= 3 {
        checks.record(
            "direct-tail recurrence",
            direct_affine_small(sys).and_then(|r| check_regular(&t, &r)),
        );
    }

    match sys.order() {
        2 => verify_pair(sys, &t, &mut checks),
        3 => verify_triple(sys, &t, &mut checks),
        _ => checks.skip("closed form", "closed forms cover two and three variables"),
    }

    let mut text = format!("verified against {steps} steps of direct iteration\n");
    for c in &checks.0 {
        let status = c.status.to_uppercase();
        if c.detail.is_empty() {
            writeln!(text, "{status} {}", c.name).unwrap();
        } else {
            writeln!(text, "{status} {}: {}", c.name, c.detail).unwrap();
        }
    }
    let failed = checks.0.iter().any(|c| c.status == "fail");
    let outcome = if failed {
        Outcome::StructuralFailure
    } else {
        Outcome::Success
    };
    let payload = json!({ "steps": steps, "checks": checks.0 });
    Ok(Done {
        text,
        payload,
        outcome,
    })
}

fn verify_pair(sys: &RecurrenceSystem, t: &Trajectory, checks: &mut Checks) {
    let profile = sum_profile(sys);
    if profile.rows_equal {
        let form = closed_form_pair_row(sys);
        let name = match &form {
            Ok(f) => format!("pair closed form, row sums (case {})", f.case_id()),
            Err(_) => "pair closed form, row sums".into(),
        };
        checks.record(
            name,
            form.map(|f| matches_rows(t, |x| f.evaluate(x).to_vec())),
        );
        checks.record(
            "difference b - a",
            difference_closed_form(sys).map(|f| {
                t.rows()
                    .iter()
                    .enumerate()
                    .all(|(x, row)| f.evaluate(x as u64) == &row[1] - &row[0])
            }),
        );
    } else {
        checks.skip("pair closed form, row sums", "row sums differ");
    }
    if profile.cols_equal {
        checks.record(
            "pair closed form, column sums",
            closed_form_pair_col(sys).map(|f| matches_rows(t, |x| f.evaluate(x).to_vec())),
        );
    } else {
        checks.skip("pair closed form, column sums", "column sums differ");
    }
}

fn verify_triple(sys: &RecurrenceSystem, t: &Trajectory, checks: &mut Checks) {
    let Some(w) = detect_weights(sys) else {
        checks.skip("three-variable closed form", "no invariant weights found");
        return;
    };
    checks.record(
        format!("invariant b = {}*a + {}*c", w.w1, w.w2),
        check_invariant(t, &w),
    );
    match solve_triple_with(sys, &w) {
        Ok(sol) => {
            let name = match &sol {
                TripleSolution::Direct(_) => {
                    format!("three-variable closed form (case {})", sol.case_id())
                }
                TripleSolution::AcPair { .. } => {
                    format!("(a, c) pair with b = a (case {})", sol.case_id())
                }
            };
            checks.record(name, Ok(matches_rows(t, |x| sol.evaluate(x).to_vec())));
        }
        Err(e) => checks.record("three-variable closed form", Err(e)),
    }
    if w.w2.is_zero() {
        checks.skip("(a, b) pair route", "w2 = 0");
    } else {
        checks.record(
            "(a, b) pair route",
            pair_route(sys, &w).map(|route| matches_rows(t, |x| route.evaluate(x).to_vec())),
        );
    }
    if w.provenance == Provenance::CoefficientProportion && !w.w2.is_zero() {
        checks.record(
            "starred row equals row b",
            triple_constants(sys, &w).and_then(|general| {
                proportional_constants(sys, &w).map(|strict| general == strict)
            }),
        );
    }
}
