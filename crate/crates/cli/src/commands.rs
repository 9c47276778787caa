use std::str::FromStr;

use clap::Args;
use imago_core::algebra::BigRatio;
use imago_core::closed_forms::power_ratio_closed_form;
use imago_core::group::{gl2_class_reps, parse_group_spec, ClassScope, GroupError, GroupSpec};
use imago_core::image::{self, ImageError, ImageReport, Strategy};
use imago_core::planner::{self, PlanError};
use imago_core::ring::{parse_poly, parse_ring_spec, poly_image_ratio, RingError, RingImageReport};
use imago_core::verify::{self, Status, Suite};
use imago_core::word::{parse_word, power_word, Word, WordError};
use imago_core::Limits;
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::output::{self, Format};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl ToString) -> Self {
        CliError { code: EXIT_USAGE, message: message.to_string() }
    }

    fn cap(message: impl ToString) -> Self {
        CliError { code: EXIT_CAP, message: message.to_string() }
    }

    fn mismatch(message: impl ToString) -> Self {
        CliError { code: EXIT_MISMATCH, message: message.to_string() }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } => CliError::cap(e),
            _ => CliError::usage(e),
        }
    }
}

impl From<ImageError> for CliError {
    fn from(e: ImageError) -> Self {
        if e.is_cap() {
            CliError::cap(e)
        } else {
            CliError::usage(e)
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        if e.is_cap() {
            CliError::cap(e)
        } else {
            CliError::usage(e)
        }
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        match e {
            WordError::Group(g) => g.into(),
            _ => CliError::usage(e),
        }
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::IterationCap | PlanError::FieldTooLarge(_) => CliError::cap(e),
            _ => CliError::usage(e),
        }
    }
}

/// What a command prints. A command can produce output and still fail, in
/// which case `failure` carries the exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn print(stdout: String) -> Self {
        Outcome { stdout, ..Default::default() }
    }
}

fn render<T: Serialize>(format: Format, value: &T, header: &[&str], rows: Vec<Vec<String>>, text: String) -> String {
    match format {
        Format::Json => output::json(value),
        Format::Csv => output::csv(header, &rows),
        Format::Text => text,
    }
}

// ---------------------------------------------------------------- eval

#[derive(Args)]
pub struct EvalArgs {
    /// Word in x1, x2, ... (x, y also accepted), e.g. "[x1,x2]" or "x1^4"
    #[arg(long)]
    word: Option<String>,
    /// Group, e.g. "GL2(4)", "SL2(5)", "Z12 x GL2(3)"
    #[arg(long)]
    group: Option<String>,
    /// Noncommutative polynomial with integer coefficients, e.g. "x1^2"
    #[arg(long, conflicts_with_all = ["word", "group"])]
    poly: Option<String>,
    /// Ring, e.g. "M2(4)", "Z4^3", "Z4 x M2(2)"
    #[arg(long, conflicts_with_all = ["word", "group"])]
    ring: Option<String>,
    /// Enumeration strategy for words
    #[arg(long, default_value = "pruned")]
    strategy: Strategy,
}

#[derive(Serialize)]
struct WithFloat<'a, T: Serialize> {
    #[serde(flatten)]
    report: &'a T,
    ratio_float: f64,
}

pub fn eval(args: &EvalArgs, limits: &Limits, format: Format) -> Result<Outcome, CliError> {
    match (&args.word, &args.group, &args.poly, &args.ring) {
        (Some(w), Some(g), None, None) => eval_word(w, g, args.strategy, limits, format),
        (None, None, Some(p), Some(r)) => eval_poly(p, r, limits, format),
        _ => Err(CliError::usage("eval needs either --word with --group, or --poly with --ring")),
    }
}

const EVAL_HEADER: [&str; 6] = ["input", "structure", "order", "image_size", "ratio", "ratio_float"];

fn eval_word(word: &str, group: &str, strategy: Strategy, limits: &Limits, format: Format) -> Result<Outcome, CliError> {
    let w = parse_word(word)?;
    let spec = parse_group_spec(group)?;
    let report = image::ratio(&w, &spec, strategy, limits)?;
    let f = report.ratio.to_f64();
    let row = vec![
        report.word.to_string(),
        report.spec.to_string(),
        report.order.to_string(),
        report.image_size.to_string(),
        report.ratio.to_string(),
        f.to_string(),
    ];
    let text = format!(
        "{} on {}: {} of {} elements, ratio {} ({f}), strategy {}\n",
        report.word, report.spec, report.image_size, report.order, report.ratio, report.strategy
    );
    let value = WithFloat { report: &report, ratio_float: f };
    Ok(Outcome::print(render(format, &value, &EVAL_HEADER, vec![row], text)))
}

fn eval_poly(poly: &str, ring: &str, limits: &Limits, format: Format) -> Result<Outcome, CliError> {
    let p = parse_poly(poly)?;
    let spec = parse_ring_spec(ring)?;
    let report: RingImageReport = poly_image_ratio(&p, &spec, limits)?;
    let f = report.ratio.to_f64();
    let row = vec![
        report.poly.to_string(),
        report.ring.to_string(),
        report.order.to_string(),
        report.image_size.to_string(),
        report.ratio.to_string(),
        f.to_string(),
    ];
    let text = format!(
        "{} on {}: {} of {} elements, ratio {} ({f})\n",
        report.poly, report.ring, report.image_size, report.order, report.ratio
    );
    let value = WithFloat { report: &report, ratio_float: f };
    Ok(Outcome::print(render(format, &value, &EVAL_HEADER, vec![row], text)))
}

// ---------------------------------------------------------------- plan

#[derive(Args)]
pub struct PlanArgs {
    /// Target ratio in (0, 1): "p/q", decimal, or exponent form
    #[arg(long)]
    target: String,
    /// Allowed absolute error, positive
    #[arg(long, default_value = "1e-6")]
    epsilon: String,
    /// Exponent of the power word; a power of two, at least 2
    #[arg(long = "M", default_value = "2")]
    big_m: String,
    /// Also compute the ratio of x^M on the realized group by brute force
    #[arg(long)]
    check: bool,
}

#[derive(Serialize)]
struct PlanCheck {
    performed: bool,
    oracle: Option<BigRatio>,
    agrees: Option<bool>,
    note: Option<String>,
}

#[derive(Serialize)]
struct PlanOutput {
    target: BigRatio,
    epsilon: BigRatio,
    #[serde(rename = "M")]
    big_m: String,
    m: u64,
    field_sizes: Vec<u64>,
    achieved: BigRatio,
    error: BigRatio,
    exact: bool,
    group_spec: String,
    group_order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<PlanCheck>,
}

fn parse_ratio(what: &str, s: &str) -> Result<BigRatio, CliError> {
    BigRatio::from_str(s).map_err(|e| CliError::usage(format!("invalid {what} '{s}': {e}")))
}

pub fn plan(args: &PlanArgs, limits: &Limits, format: Format) -> Result<Outcome, CliError> {
    let target = parse_ratio("target", &args.target)?;
    let epsilon = parse_ratio("epsilon", &args.epsilon)?;
    let big_m = BigUint::from_str(args.big_m.trim())
        .map_err(|_| CliError::usage(format!("invalid M '{}': expected a positive integer", args.big_m)))?;

    let p = planner::approximate(&target, &epsilon)?;
    let spec = planner::realize(&p, &big_m)?;
    let mut failure = None;

    // The realized group's closed-form ratio must reproduce the plan.
    match power_ratio_closed_form(&spec, &big_m) {
        Ok(r) if r == p.achieved => {}
        Ok(r) => {
            failure = Some(CliError::mismatch(format!(
                "closed form for x^{big_m} on {spec} gives {r}, plan claims {}",
                p.achieved
            )))
        }
        Err(e) => failure = Some(CliError::mismatch(format!("no closed form for {spec}: {e}"))),
    }

    let check = args.check.then(|| {
        let outcome = power_word(BigInt::from(big_m.clone()))
            .map_err(CliError::from)
            .and_then(|w| image::ratio(&w, &spec, Strategy::Pruned, limits).map_err(CliError::from));
        match outcome {
            Ok(report) => {
                let agrees = report.ratio == p.achieved;
                if !agrees && failure.is_none() {
                    failure = Some(CliError::mismatch(format!(
                        "brute force gives {} on {spec}, plan claims {}",
                        report.ratio, p.achieved
                    )));
                }
                PlanCheck { performed: true, oracle: Some(report.ratio), agrees: Some(agrees), note: None }
            }
            Err(e) => PlanCheck {
                performed: false,
                oracle: None,
                agrees: None,
                note: Some(format!("skipped: {}", e.message)),
            },
        }
    });

    let out = PlanOutput {
        target: p.target.clone(),
        epsilon,
        big_m: big_m.to_string(),
        m: p.m,
        field_sizes: p.field_sizes.clone(),
        achieved: p.achieved.clone(),
        error: p.error.clone(),
        exact: p.exact,
        group_spec: spec.to_string(),
        group_order: spec.order().to_string(),
        check,
    };

    let header = [
        "target", "epsilon", "M", "m", "field_sizes", "achieved", "error", "exact", "group_spec", "check",
    ];
    let check_cell = match &out.check {
        None => String::new(),
        Some(PlanCheck { agrees: Some(true), .. }) => "agrees".into(),
        Some(PlanCheck { agrees: Some(false), oracle: Some(o), .. }) => format!("oracle {o}"),
        Some(c) => c.note.clone().unwrap_or_default(),
    };
    let sizes = out.field_sizes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let row = vec![
        out.target.to_string(),
        out.epsilon.to_string(),
        out.big_m.clone(),
        out.m.to_string(),
        sizes.clone(),
        out.achieved.to_string(),
        out.error.to_string(),
        out.exact.to_string(),
        out.group_spec.clone(),
        check_cell.clone(),
    ];
    let mut text = format!(
        "target    {}\nachieved  {} ({})\nerror     {}{}\ngroup     {}\nm         {}\nfields    {}\n",
        out.target,
        out.achieved,
        out.achieved.to_f64(),
        out.error,
        if out.exact { " (exact)" } else { "" },
        out.group_spec,
        out.m,
        if sizes.is_empty() { "-".into() } else { sizes },
    );
    if !check_cell.is_empty() {
        text.push_str(&format!("check     {check_cell}\n"));
    }
    let stdout = render(format, &out, &header, vec![row], text);
    Ok(Outcome { stdout, warnings: Vec::new(), failure })
}

// ---------------------------------------------------------------- verify

#[derive(Args)]
pub struct VerifyArgs {
    /// Which checks to run: group, ring or all
    #[arg(long, default_value = "all")]
    suite: Suite,
}

pub fn verify(args: &VerifyArgs, limits: &Limits, format: Format) -> Result<Outcome, CliError> {
    let rows = verify::run_suite(args.suite, limits);
    let header = ["suite", "check", "expected", "observed", "status", "note"];
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.suite.to_string(),
                r.check.clone(),
                r.expected.clone(),
                r.observed.clone(),
                r.status.to_string(),
                r.note.clone(),
            ]
        })
        .collect();
    let text_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.status.to_string(), r.check.clone(), r.expected.clone(), r.observed.clone(), r.note.clone()])
        .collect();
    let text = output::table(&["STATUS", "CHECK", "EXPECTED", "OBSERVED", "NOTE"], &text_rows);
    let stdout = render(format, &rows, &header, cells, text);

    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let mut warnings = Vec::new();
    let discrepancies = count(Status::Discrepancy);
    if discrepancies > 0 {
        warnings.push(format!(
            "{discrepancies} check(s) show a documented discrepancy between a published formula and brute force"
        ));
    }
    let failure = verify::has_failures(&rows)
        .then(|| CliError::mismatch(format!("{} check(s) failed", count(Status::Fail))));
    Ok(Outcome { stdout, warnings, failure })
}

// ---------------------------------------------------------------- classes

#[derive(Args)]
pub struct ClassesArgs {
    /// Field size, a prime power
    #[arg(long)]
    q: u64,
    /// Orbits of GL2(q) on all 2x2 matrices instead of conjugacy classes
    #[arg(long)]
    ring: bool,
}

#[derive(Serialize)]
struct ClassRow {
    rep: String,
    family: String,
    size: u64,
}

#[derive(Serialize)]
struct ClassesOutput {
    q: u64,
    scope: &'static str,
    count: usize,
    total: String,
    classes: Vec<ClassRow>,
}

pub fn classes(args: &ClassesArgs, format: Format) -> Result<Outcome, CliError> {
    let scope = if args.ring { ClassScope::Ring } else { ClassScope::Group };
    let reps = gl2_class_reps(args.q, scope)?;
    let rows: Vec<ClassRow> = reps
        .iter()
        .map(|c| ClassRow {
            rep: c.rep.to_string(),
            family: c.family.map(|f| f.to_string()).unwrap_or_default(),
            size: c.size,
        })
        .collect();
    let total: BigUint = rows.iter().map(|r| BigUint::from(r.size)).sum();
    let out = ClassesOutput {
        q: args.q,
        scope: if args.ring { "ring" } else { "group" },
        count: rows.len(),
        total: total.to_string(),
        classes: rows,
    };
    let cells: Vec<Vec<String>> = out
        .classes
        .iter()
        .map(|r| vec![r.rep.clone(), r.family.clone(), r.size.to_string()])
        .collect();
    let mut text = output::table(&["REP", "FAMILY", "SIZE"], &cells);
    text.push_str(&format!("{} classes, {} elements\n", out.count, out.total));
    Ok(Outcome::print(render(format, &out, &["rep", "family", "size"], cells, text)))
}

// ---------------------------------------------------------------- scan

#[derive(Args)]
pub struct ScanArgs {
    /// Word to evaluate; repeat for several
    #[arg(long = "word")]
    words: Vec<String>,
    /// Group to evaluate on; repeat for several
    #[arg(long = "group")]
    groups: Vec<String>,
    #[arg(long, default_value = "pruned")]
    strategy: Strategy,
}

#[derive(Serialize)]
struct ScanOutputRow {
    word: String,
    group: String,
    order: Option<String>,
    image_size: Option<String>,
    ratio: Option<BigRatio>,
    ratio_float: Option<f64>,
    error: Option<String>,
}

pub fn scan(args: &ScanArgs, limits: &Limits, format: Format) -> Result<Outcome, CliError> {
    let words = args.words.iter().map(|w| parse_word(w)).collect::<Result<Vec<Word>, _>>()?;
    let specs = args
        .groups
        .iter()
        .map(|g| parse_group_spec(g))
        .collect::<Result<Vec<GroupSpec>, _>>()?;
    let rows: Vec<ScanOutputRow> = image::scan(&words, &specs, args.strategy, limits)
        .into_iter()
        .map(|r| {
            let (report, error): (Option<ImageReport>, Option<String>) = match r.result {
                Ok(rep) => (Some(rep), None),
                Err(e) => (None, Some(e.to_string())),
            };
            ScanOutputRow {
                word: r.word.to_string(),
                group: r.spec.to_string(),
                order: report.as_ref().map(|x| x.order.to_string()),
                image_size: report.as_ref().map(|x| x.image_size.to_string()),
                ratio_float: report.as_ref().map(|x| x.ratio.to_f64()),
                ratio: report.map(|x| x.ratio),
                error,
            }
        })
        .collect();
    let opt = |s: &Option<String>| s.clone().unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.word.clone(),
                r.group.clone(),
                opt(&r.order),
                opt(&r.image_size),
                r.ratio.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                opt(&r.error),
            ]
        })
        .collect();
    let header = ["word", "group", "order", "image_size", "ratio", "error"];
    let text = output::table(&header.map(str::to_uppercase).each_ref().map(String::as_str), &cells);
    Ok(Outcome::print(render(format, &rows, &header, cells, text)))
}
