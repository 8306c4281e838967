//! `forbcfg`: exact searches, bounds and table reproduction for
//! `forb(m, r, M)` and triangle choice multigraphs.

mod output;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forbcfg::choice::{forb_via_choices, ChoiceMode, ChoiceSearchOptions};
use forbcfg::io::{choice_to_json, closed_sets_json, matrix_to_json, multiplicities_json, parse_pattern, tcm_from_json, tcm_to_json};
use forbcfg::recurrence::{bounds_with_eps, build_g, h2_table, lambda, predicted_split, sandwich_check, H2Table};
use forbcfg::scalar::parse_rational;
use forbcfg::tcm::{closed_sets, h_exact_rational, local_search, HExactOptions, LocalSearchOptions};
use forbcfg::{forb_exact, ConfigPattern, Error, ForbOptions, Scalar, Tcm};
use num::bigint::BigInt;
use num::rational::BigRational;
use serde_json::{json, Value};

use output::{sig6, Format, Output, Table};

#[derive(Parser)]
#[command(name = "forbcfg", version, about = "Forbidden configurations, choices and triangle choice multigraphs")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// forb(m, r, F) by exhaustive column search.
    ForbExact(ForbExactArgs),
    /// forb(m, r, M) as a maximum over choices.
    ForbChoices(ForbChoicesArgs),
    /// Exact H(m, alpha).
    HExact(HExactArgs),
    /// Hill-climbed lower bound on H(m, alpha).
    HLocal(HLocalArgs),
    /// The H2(m, alpha) table with optimal splits.
    H2(H2Args),
    /// Closed-form bounds on forb(m, r, M) and H(m, alpha).
    Bounds(BoundsArgs),
    /// lambda(alpha) = sum 2^(j-1) / alpha^(2^j).
    Lambda(LambdaArgs),
    /// forb(m, r, M) against its H2 and H sandwich.
    Sandwich(SandwichArgs),
    /// Run named verification suites.
    Verify(VerifyArgs),
    /// Recompute the reference tables of small values.
    EmitTables(EmitTablesArgs),
}

#[derive(Args)]
struct ForbExactArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: u8,
    /// Builtin name (M, A1, A2, I, Ic, K2, K3) or a pattern JSON file.
    #[arg(long, default_value = "M")]
    pattern: String,
    /// Search node budget.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    All,
    Good,
    Sample,
}

#[derive(Args)]
struct ForbChoicesArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: u64,
    #[arg(long, value_enum, default_value = "all")]
    mode: Mode,
    /// Number of random choices for `--mode sample`.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, required_if_eq("mode", "sample"))]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct HExactArgs {
    #[arg(long)]
    m: usize,
    /// Integer, fraction `p/q` or terminating decimal.
    #[arg(long, value_parser = rational, default_value = "2")]
    alpha: BigRational,
    #[arg(long)]
    budget: Option<u64>,
    /// Permit the m = 7 search.
    #[arg(long)]
    allow_m7: bool,
}

#[derive(Args)]
struct HLocalArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, value_parser = rational, default_value = "2")]
    alpha: BigRational,
    #[arg(long)]
    seed: u64,
    /// Improving moves per climb.
    #[arg(long, default_value_t = 100_000)]
    iters: usize,
    /// Additional climbs from random TCMs.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// TCM JSON file to start from; defaults to the recursive construction.
    #[arg(long)]
    start: Option<PathBuf>,
}

#[derive(Args)]
struct H2Args {
    #[arg(long)]
    max_m: usize,
    #[arg(long, value_parser = rational, default_value = "2")]
    alpha: BigRational,
    /// Exact arithmetic instead of binary64.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: u64,
    /// Override alpha = (r-1) / (r-2).
    #[arg(long, value_parser = rational)]
    alpha: Option<BigRational>,
    #[arg(long, default_value_t = forbcfg::recurrence::DEFAULT_EPS)]
    eps: f64,
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
}

#[derive(Args)]
struct SandwichArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// List the suites and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct EmitTablesArgs {
    #[arg(long, value_enum, default_value = "all")]
    table: tables::Which,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("{s:?} is not a rational number"))
}

/// An error with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleSize(_) | Error::Io(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("FORBCFG_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| usage(format!("FORBCFG_THREADS={v:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(format!("cannot size thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("forbcfg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let (out, default_format) = match cli.command {
        Command::ForbExact(a) => (forb_exact_cmd(a)?, Format::Json),
        Command::ForbChoices(a) => (forb_choices_cmd(a)?, Format::Json),
        Command::HExact(a) => (h_exact_cmd(a)?, Format::Json),
        Command::HLocal(a) => (h_local_cmd(a)?, Format::Json),
        Command::H2(a) => (h2_cmd(a)?, Format::Csv),
        Command::Bounds(a) => (bounds_cmd(a)?, Format::Json),
        Command::Lambda(a) => (lambda_cmd(a)?, Format::Text),
        Command::Sandwich(a) => (sandwich_cmd(a)?, Format::Json),
        Command::Verify(a) => (verify_cmd(a)?, Format::Text),
        Command::EmitTables(a) => (tables::emit(a.table)?, Format::Csv),
    };
    let text = out.render(cli.format.unwrap_or(default_format));
    output::write(cli.output.as_deref(), &text).map_err(|e| Failure { code: 1, message: e.to_string() })?;
    Ok(out.ok)
}

fn load_pattern(spec: &str) -> Result<ConfigPattern, Failure> {
    if let Some(p) = ConfigPattern::builtin(spec) {
        return Ok(p);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| usage(format!("pattern {spec:?} is not a builtin name and cannot be read: {e}")))?;
    Ok(parse_pattern(&text)?)
}

fn forb_exact_cmd(a: ForbExactArgs) -> Result<Output, Failure> {
    let pattern = load_pattern(&a.pattern)?;
    let mut opts = ForbOptions::default();
    if let Some(b) = a.budget {
        opts.node_budget = b;
    }
    let res = forb_exact(a.m, a.r, &pattern, &opts)?;
    let json = json!({
        "m": a.m,
        "r": a.r,
        "pattern": matrix_to_json(pattern.matrix()),
        "value": res.value,
        "status": res.status,
        "witness": matrix_to_json(&res.witness),
    });
    let table = Table::record(vec![
        ("m", a.m.to_string()),
        ("r", a.r.to_string()),
        ("value", res.value.to_string()),
        ("status", status_name(res.status.is_exact())),
    ]);
    Ok(Output::new("forb-exact", json, table))
}

fn status_name(exact: bool) -> String {
    if exact { "exact" } else { "lower_bound" }.into()
}

fn forb_choices_cmd(a: ForbChoicesArgs) -> Result<Output, Failure> {
    let mode = match a.mode {
        Mode::All => ChoiceMode::All,
        Mode::Good => ChoiceMode::GoodOnly,
        Mode::Sample => ChoiceMode::Sample { n: a.samples, seed: a.seed.expect("clap requires a seed") },
    };
    let mut opts = ChoiceSearchOptions::default();
    if let Some(b) = a.budget {
        opts.node_budget = b;
    }
    let res = forb_via_choices(a.m, a.r, mode, &opts)?;
    let mode_name = match a.mode {
        Mode::All => "all",
        Mode::Good => "good",
        Mode::Sample => "sample",
    };
    let json = json!({
        "m": a.m,
        "r": a.r,
        "mode": mode_name,
        "seed": a.seed.filter(|_| matches!(a.mode, Mode::Sample)),
        "value": res.value.to_string(),
        "status": res.status,
        "argmax_good": res.argmax.is_good(),
        "argmax": choice_to_json(&res.argmax),
        "tcm": res.tcm.as_ref().map_or(Value::Null, tcm_to_json),
    });
    let table = Table::record(vec![
        ("m", a.m.to_string()),
        ("r", a.r.to_string()),
        ("mode", mode_name.into()),
        ("value", res.value.to_string()),
        ("status", status_name(res.status.is_exact())),
        ("argmax_good", res.argmax.is_good().to_string()),
    ]);
    Ok(Output::new("forb-choices", json, table))
}

fn tcm_report(command: &'static str, m: usize, alpha: &BigRational, value: &BigRational, g: &Tcm, extra: Vec<(&str, Value)>) -> Output {
    let mut json = json!({
        "m": m,
        "alpha": alpha.to_string(),
        "value": value.to_string(),
        "value_f64": value.to_f64_lossy(),
        "multiplicities": multiplicities_json(g),
        "closed_sets": closed_sets_json(&closed_sets(g)),
        "tcm": tcm_to_json(g),
    });
    let mut cells = vec![("m", m.to_string()), ("alpha", alpha.to_string()), ("value", value.to_string())];
    for (k, v) in extra {
        cells.push((k, match &v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }));
        json[k] = v;
    }
    Output::new(command, json, Table::record(cells))
}

fn h_exact_cmd(a: HExactArgs) -> Result<Output, Failure> {
    let mut opts = HExactOptions { allow_m7: a.allow_m7, ..HExactOptions::default() };
    if let Some(b) = a.budget {
        opts.node_budget = b;
    }
    let res = h_exact_rational(a.m, &a.alpha, &opts)?;
    let status = json!(res.status);
    Ok(tcm_report("h-exact", a.m, &a.alpha, &res.value, &res.argmax, vec![("status", status)]))
}

fn h_local_cmd(a: HLocalArgs) -> Result<Output, Failure> {
    let start = match &a.start {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            let g = tcm_from_json(&text)?;
            if g.m() != a.m {
                return Err(usage(format!("start TCM has m = {}, expected {}", g.m(), a.m)));
            }
            g
        }
        None => build_g(a.m).tcm,
    };
    if a.alpha < BigRational::from_integer(1.into()) {
        return Err(usage(format!("alpha must be at least 1, got {}", a.alpha)));
    }
    let opts = LocalSearchOptions { seed: a.seed, iters: a.iters, restarts: a.restarts, pool: Vec::new() };
    let res = local_search(&start, &a.alpha, &opts);
    let extra = vec![
        ("seed", json!(a.seed)),
        ("moves", json!(res.moves)),
        ("status", json!("lower_bound")),
    ];
    Ok(tcm_report("h-local", a.m, &a.alpha, &res.weight, &res.tcm, extra))
}

fn h2_cmd(a: H2Args) -> Result<Output, Failure> {
    if a.max_m == 0 {
        return Err(usage("--max-m must be at least 1"));
    }
    if a.alpha < BigRational::from_integer(1.into()) {
        return Err(usage(format!("H2 is tabulated for alpha >= 1, got {}", a.alpha)));
    }
    let alpha_f = a.alpha.to_f64_lossy();
    let rows = if !a.exact {
        h2_rows(&h2_table(a.max_m, &alpha_f), alpha_f, |v| sig6(*v), |v| json!(v))
    } else if a.alpha.is_integer() {
        let t = h2_table(a.max_m, a.alpha.numer());
        h2_rows(&t, alpha_f, BigInt::to_string, |v| Value::String(v.to_string()))
    } else {
        let t = h2_table(a.max_m, &a.alpha);
        h2_rows(&t, alpha_f, BigRational::to_string, |v| Value::String(v.to_string()))
    };
    let (table, json_rows) = rows;
    let json = json!({
        "alpha": a.alpha.to_string(),
        "exact": a.exact,
        "rows": json_rows,
    });
    Ok(Output::new("h2", json, table))
}

fn h2_rows<S: Scalar>(
    t: &H2Table<S>,
    alpha: f64,
    cell: impl Fn(&S) -> String,
    js: impl Fn(&S) -> Value,
) -> (Table, Vec<Value>) {
    let mut table = Table::new(&["m", "H2", "h2", "split_a", "split_b", "predicted_k", "agrees_with_theorem"]);
    let mut rows = Vec::new();
    for r in t.rows() {
        let (sa, sb) = r.split().map_or((String::new(), String::new()), |(x, y)| (x.to_string(), y.to_string()));
        let pred = predicted_split(r.m, alpha);
        let agrees = pred.map(|p| r.splits.contains(&p.split));
        let h2 = t.normalized(r.m);
        table.push(vec![
            r.m.to_string(),
            cell(&r.value),
            sig6(h2),
            sa,
            sb,
            pred.map_or(String::new(), |p| p.k.to_string()),
            agrees.map_or(String::new(), |b| b.to_string()),
        ]);
        rows.push(json!({
            "m": r.m,
            "H2": js(&r.value),
            "h2": h2,
            "splits": r.splits,
            "predicted": pred,
            "agrees_with_theorem": agrees,
        }));
    }
    (table, rows)
}

fn bounds_cmd(a: BoundsArgs) -> Result<Output, Failure> {
    let rep = bounds_with_eps(a.m, a.r, a.alpha, a.eps)?;
    let json = rep.to_json();
    let mut table = Table::new(&["quantity", "value"]);
    for (k, v) in json.as_object().expect("object") {
        let cell = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_f64() => sig6(n.as_f64().unwrap_or(f64::NAN)),
            Value::Null => String::new(),
            other => other.to_string(),
        };
        table.push(vec![k.clone(), cell]);
    }
    let mut out = Output::new("bounds", json, table);
    out.ok = rep.is_consistent();
    Ok(out)
}

fn lambda_cmd(a: LambdaArgs) -> Result<Output, Failure> {
    let l = lambda(a.alpha, a.eps)?;
    let json = json!({
        "alpha": a.alpha,
        "eps": a.eps,
        "value": l.value,
        "terms": l.terms,
        "tail_bound": l.tail_bound,
    });
    let table = Table::record(vec![
        ("alpha", sig6(a.alpha)),
        ("eps", sig6(a.eps)),
        ("value", sig6(l.value)),
        ("terms", l.terms.to_string()),
        ("tail_bound", sig6(l.tail_bound)),
    ]);
    let mut out = Output::new("lambda", json, table);
    out.text = Some(format!(
        "lambda({}) = {}\nstop index: {}\ntail bound: {}\n",
        a.alpha,
        sig6(l.value),
        l.terms,
        sig6(l.tail_bound)
    ));
    Ok(out)
}

fn sandwich_cmd(a: SandwichArgs) -> Result<Output, Failure> {
    let rep = sandwich_check(a.m, a.r)?;
    let opt = |x: &Option<BigRational>| x.as_ref().map_or(String::new(), |v| v.to_string());
    let table = Table::record(vec![
        ("m", a.m.to_string()),
        ("r", a.r.to_string()),
        ("forb", rep.forb.to_string()),
        ("excess", rep.excess.to_string()),
        ("lower", rep.lower.to_string()),
        ("upper", opt(&rep.upper)),
        ("holds", rep.holds().to_string()),
        ("tight", rep.is_tight().to_string()),
        ("status", status_name(rep.status.is_exact())),
    ]);
    let mut out = Output::new("sandwich", rep.to_json(), table);
    out.ok = rep.holds();
    Ok(out)
}

fn verify_cmd(a: VerifyArgs) -> Result<Output, Failure> {
    if a.list {
        let mut table = Table::new(&["suite", "summary"]);
        for s in forbcfg::verify::SUITES {
            table.push(vec![s.name.into(), s.summary.into()]);
        }
        let names = forbcfg::verify::suite_names();
        return Ok(Output::new("verify", json!({ "suites": names }), table));
    }
    let outcomes = forbcfg::verify::run_suite(&a.suite)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut table = Table::new(&["suite", "check", "result", "detail"]);
    let mut text = String::new();
    for o in &outcomes {
        let result = if o.passed { "PASS" } else { "FAIL" };
        table.push(vec![o.suite.into(), o.name.clone(), result.into(), o.detail.clone()]);
        text.push_str(&format!("{result} {}/{}: {}\n", o.suite, o.name, o.detail));
    }
    text.push_str(&format!("{} checks, {failed} failed\n", outcomes.len()));
    let checks: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "suite": o.suite, "name": o.name, "passed": o.passed, "detail": o.detail }))
        .collect();
    let json = json!({ "suite": a.suite, "checks": checks, "failed": failed });
    let mut out = Output::new("verify", json, table);
    out.text = Some(text);
    out.ok = failed == 0;
    Ok(out)
}
