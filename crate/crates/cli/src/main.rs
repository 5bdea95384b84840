mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qtriterm::coeff::{contiguous, relation_residual, residual_of};
use qtriterm::group::{self, cayley_dot, check_relations, enumerate_group, parse_generator_list, GeneratorId};
use qtriterm::verify::{self, AdmissibleKind, Constraints, VerificationReport, VerifyOptions, Which};
use qtriterm::{phi21_sum, BasePoint, Error, Precision, QReal, Route, SeriesControl, ShiftVector};

use config::{resolve_point, resolve_point_strings, resolve_precision, resolve_shifts, PointFlags, RunConfig, PRECISION_ENV};

#[derive(Parser, Debug)]
#[command(name = "qtriterm", version, about = "Three-term relations of 2phi1 and their symmetry group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate 2phi1(a, b; c; q, x).
    EvalPhi {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Coefficients Q and R of the three-term relation at a shift.
    EvalQr {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        shift: ShiftArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate the symmetry group, check its relations, or export its Cayley graph.
    Group {
        action: GroupAction,
        /// Comma separated generators, e.g. s3,s4,s5 (default s0,s1,s2,s3).
        #[arg(long)]
        generators: Option<String>,
    },
    /// Certify symmetry identities numerically.
    Verify {
        suite: SuiteArg,
        #[arg(long, default_value = "Q")]
        which: Which,
        #[arg(long)]
        seed: Option<u64>,
        /// Semicolon separated shifts, e.g. "0,0,1,1;2,1,1,0".
        #[arg(long, allow_hyphen_values = true)]
        shifts: Option<ShiftList>,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Search for an admissible sample point.
    Admissible {
        action: AdmissibleAction,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "orbit")]
        kind: KindArg,
        #[arg(long, default_value_t = 1e-3)]
        margin: f64,
        #[arg(long, allow_hyphen_values = true)]
        shifts: Option<ShiftList>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupAction {
    Enum,
    Relations,
    Cayley,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Base,
    All,
    Bridge,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AdmissibleAction {
    Search,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Series,
    Orbit,
}

#[derive(Args, Debug, Default)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

impl PointArgs {
    fn flags(&self) -> PointFlags {
        PointFlags { a: self.a.clone(), b: self.b.clone(), c: self.c.clone(), x: self.x.clone(), q: self.q.clone() }
    }
}

#[derive(Args, Debug, Default)]
struct ShiftArgs {
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    l: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    n: i64,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Working precision in significant decimal digits (at least 15).
    #[arg(long)]
    precision: Option<u32>,
    /// Series truncation tolerance, or base tolerance for `verify`.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    route: Option<Route>,
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Debug)]
struct ShiftList(Vec<ShiftVector>);

impl FromStr for ShiftList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let v: Vec<ShiftVector> = s.split(';').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
        if v.is_empty() {
            return Err(Error::Parse("empty shift list".into()));
        }
        Ok(ShiftList(v))
    }
}

const POINT_REQUIRED: &str = "a point is required: pass --a --b --c --x --q or a config point";

enum Failure {
    Usage(String),
    Numerical(Error),
    GroupCheck(Value),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() || matches!(e, Error::SearchExhausted { .. }) {
            Failure::Numerical(e)
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

/// Resolved settings shared by the commands.
struct Context {
    cfg: RunConfig,
    prec: Precision,
}

impl Context {
    fn new(common: &CommonArgs) -> Result<Self, Failure> {
        let cfg = match &common.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let prec = resolve_precision(common.precision, &cfg, std::env::var(PRECISION_ENV).ok())?;
        Ok(Context { cfg, prec })
    }

    fn tol(&self, common: &CommonArgs) -> Result<Option<QReal>, Failure> {
        match common.tol.as_ref().or(self.cfg.tol.as_ref()) {
            Some(t) => Ok(Some(self.prec.parse(t)?)),
            None => Ok(None),
        }
    }

    fn control(&self, common: &CommonArgs, series_tol: bool) -> Result<SeriesControl, Failure> {
        let mut ctrl = SeriesControl::new(self.prec);
        if series_tol {
            if let Some(t) = self.tol(common)? {
                ctrl = ctrl.with_tol(t)?;
            }
        }
        if let Some(mt) = common.max_terms.or(self.cfg.max_terms) {
            ctrl = ctrl.with_max_terms(mt)?;
        }
        Ok(ctrl)
    }

    fn route(&self, common: &CommonArgs, default: Route) -> Route {
        common.route.or(self.cfg.route).unwrap_or(default)
    }

    fn point(&self, args: &PointArgs) -> Result<Option<BasePoint>, Failure> {
        Ok(resolve_point(&args.flags(), &self.cfg, self.prec)?)
    }

    fn required_point(&self, args: &PointArgs) -> Result<BasePoint, Failure> {
        self.point(args)?.ok_or_else(|| Failure::Usage(POINT_REQUIRED.into()))
    }

    fn shifts(&self, flag: &Option<ShiftList>) -> Vec<ShiftVector> {
        resolve_shifts(flag.as_ref().map(|s| s.0.as_slice()), &self.cfg)
    }

    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.cfg.seed).unwrap_or(1)
    }

    fn num(&self, v: &QReal) -> Value {
        Value::String(v.to_decimal(self.prec.digits()))
    }
}

fn point_json(p: &BasePoint) -> Value {
    serde_json::to_value(verify::PointRecord::of(p)).expect("plain strings")
}

fn cmd_eval_phi(point: &PointArgs, common: &CommonArgs) -> Result<Value, Failure> {
    let cx = Context::new(common)?;
    // any real parameters are allowed here, not only the positive verification domain
    let raw = resolve_point_strings(&point.flags(), &cx.cfg)?
        .ok_or_else(|| Failure::Usage(POINT_REQUIRED.into()))?;
    let [a, b, c, x, q] = raw.map(|v| cx.prec.parse(&v));
    let (a, b, c, x, q) = (a?, b?, c?, x?, q?);
    let ctrl = cx.control(common, true)?;
    let sum = phi21_sum(&a, &b, &c, &x, &q, &ctrl)?;
    Ok(json!({
        "v": 1,
        "precision": cx.prec.digits(),
        "point": { "a": cx.num(&a), "b": cx.num(&b), "c": cx.num(&c), "x": cx.num(&x), "q": cx.num(&q) },
        "value": cx.num(&sum.value),
        "terms_used": sum.terms_used,
    }))
}

fn cmd_eval_qr(point: &PointArgs, shift: &ShiftArgs, common: &CommonArgs) -> Result<Value, Failure> {
    let cx = Context::new(common)?;
    let p = cx.required_point(point)?;
    let ctrl = cx.control(common, true)?;
    let s = ShiftVector::new(shift.k, shift.l, shift.m, shift.n);
    let route = cx.route(common, Route::Series);
    let (q, r, residual, terms) = match route {
        Route::Series => {
            let res = relation_residual(&s, &p, &ctrl)?;
            (res.q, res.r, Some(res.residual), Some(res.terms_used))
        }
        Route::Contiguous => {
            let c = contiguous::coefficients(&s, &p)?;
            // the residual needs convergent series; outside that domain it is omitted
            match residual_of(&s, &p, &c.q, &c.r, &ctrl) {
                Ok((res, terms)) => (c.q, c.r, Some(res), Some(terms)),
                Err(_) => (c.q, c.r, None, None),
            }
        }
    };
    Ok(json!({
        "v": 1,
        "precision": cx.prec.digits(),
        "route": route,
        "shift": s,
        "point": point_json(&p),
        "Q": cx.num(&q),
        "R": cx.num(&r),
        "residual": residual.map(|v| cx.num(&v)),
        "terms_used": terms,
    }))
}

fn generator_ids(flag: &Option<String>) -> Result<Vec<GeneratorId>, Failure> {
    match flag {
        Some(s) => Ok(parse_generator_list(s)?),
        None => Ok(GeneratorId::BASE.to_vec()),
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn cmd_group(action: GroupAction, generators: &Option<String>) -> Result<Output, Failure> {
    match action {
        GroupAction::Relations => {
            let report = check_relations();
            let all = report.iter().all(|r| r.holds);
            let v = json!({ "v": 1, "all_hold": all, "relations": report });
            if all {
                Ok(Output::Json(v))
            } else {
                Err(Failure::GroupCheck(v))
            }
        }
        GroupAction::Enum | GroupAction::Cayley => {
            let ids = generator_ids(generators)?;
            let (gens, names) = group::resolve(&ids);
            let g = enumerate_group(&gens, &names).map_err(|e| match e {
                Error::Size { .. } => Failure::GroupCheck(json!({ "v": 1, "error": { "kind": "size", "message": e.to_string() } })),
                other => other.into(),
            })?;
            if let GroupAction::Cayley = action {
                return Ok(Output::Text(cayley_dot(&g)));
            }
            let elements: Vec<Value> = g
                .elements
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    json!({
                        "index": i,
                        "word": g.word_label(&e.word),
                        "element_order": g.element_order(&e.transform),
                        "canonical": e.transform.canonical(),
                    })
                })
                .collect();
            Ok(Output::Json(json!({ "v": 1, "generators": names, "order": g.order(), "elements": elements })))
        }
    }
}

fn summary(r: &VerificationReport) -> String {
    format!(
        "verify {} {}: {} identities, {} failures, max relative error {}",
        r.suite,
        r.which,
        r.identities,
        r.failures,
        r.max_error.as_deref().unwrap_or("n/a")
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: SuiteArg,
    which: Which,
    seed: Option<u64>,
    shifts: &Option<ShiftList>,
    point: &PointArgs,
    common: &CommonArgs,
) -> Result<Value, Failure> {
    let cx = Context::new(common)?;
    let route = cx.route(common, Route::Contiguous);
    let mut opts = VerifyOptions::new(cx.prec);
    opts.route = route;
    opts.shifts = cx.shifts(shifts);
    opts.ctrl = cx.control(common, false)?;
    if let Some(t) = cx.tol(common)? {
        opts.base_tol = t;
    }
    let p = match cx.point(point)? {
        Some(p) => p,
        None => {
            let kind = match route {
                Route::Series => AdmissibleKind::Series,
                Route::Contiguous => AdmissibleKind::Orbit,
            };
            let cons = Constraints { kind, shifts: opts.shifts.clone(), ..Constraints::default() };
            verify::find_admissible(cx.seed(seed), &cons, cx.prec)?.point
        }
    };
    let report = match suite {
        SuiteArg::Base => verify::verify_base(&p, which, &opts),
        SuiteArg::All => verify::verify_all(&p, which, &opts),
        SuiteArg::Bridge => verify::verify_bridge(&p, &opts),
    };
    eprintln!("{}", summary(&report));
    let v = serde_json::to_value(&report).expect("report serializes");
    if report.passed {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn cmd_admissible(seed: Option<u64>, kind: KindArg, margin: f64, shifts: &Option<ShiftList>, common: &CommonArgs) -> Result<Value, Failure> {
    let cx = Context::new(common)?;
    let kind = match kind {
        KindArg::Series => AdmissibleKind::Series,
        KindArg::Orbit => AdmissibleKind::Orbit,
    };
    let seed = cx.seed(seed);
    let cons = Constraints { kind, margin, shifts: cx.shifts(shifts), ..Constraints::default() };
    let hit = verify::find_admissible(seed, &cons, cx.prec)?;
    Ok(json!({
        "v": 1,
        "seed": seed,
        "kind": hit.kind,
        "point": point_json(&hit.point),
        "margin": cx.num(&hit.orbit_margin),
        "attempts": hit.attempts,
    }))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::EvalPhi { point, common } => cmd_eval_phi(point, common).map(Output::Json),
        Command::EvalQr { point, shift, common } => cmd_eval_qr(point, shift, common).map(Output::Json),
        Command::Group { action, generators } => cmd_group(*action, generators),
        Command::Verify { suite, which, seed, shifts, point, common } => {
            cmd_verify(*suite, *which, *seed, shifts, point, common).map(Output::Json)
        }
        Command::Admissible { action: AdmissibleAction::Search, seed, kind, margin, shifts, common } => {
            cmd_admissible(*seed, *kind, *margin, shifts, common).map(Output::Json)
        }
    }
}

/// Write to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &Value) {
    emit(&(serde_json::to_string_pretty(v).expect("json") + "\n"));
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Pole(_) => "pole",
        Error::Convergence(_) => "convergence",
        Error::Domain(_) => "domain",
        Error::SearchExhausted { .. } => "search_exhausted",
        Error::Size { .. } => "size",
        Error::Parse(_) => "parse",
        Error::Config(_) => "config",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Output::Json(v)) => {
            print_json(&v);
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            emit(&t);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(e)) => {
            print_json(&json!({ "v": 1, "error": { "kind": error_kind(&e), "message": e.to_string() } }));
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::GroupCheck(v)) => {
            print_json(&v);
            ExitCode::from(3)
        }
        Err(Failure::Verification(v)) => {
            print_json(&v);
            ExitCode::from(4)
        }
    }
}
