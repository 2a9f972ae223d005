use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use negacycl::counting::{self, CountBreakdown, ExtremeClass};
use negacycl::factorization::{self, FactorizationReport, Mode, Sign};
use negacycl::negacyclic::{self, LcdCensus};
use negacycl::numtheory::{self, PrimePower};
use negacycl::polyring::Poly;
use negacycl::selftest::{self, SweepConfig};
use negacycl::Error;
use serde_json::json;

/// Censuses at or below this size list their generators.
const LIST_CAP: u128 = 1 << 12;

#[derive(Parser)]
#[command(name = "negacycl", version, about = "Self-reciprocal factors of x^n ± 1 and LCD negacyclic codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^n - λ and tag each factor as self-paired or paired.
    Factor(Common),
    /// Closed-form, recursive and brute-force counts of self-paired factors.
    Count(Common),
    /// Extreme-case verdict for x^n + 1, n odd.
    Classify(Common),
    /// Census of LCD negacyclic codes of length n.
    Codes(Common),
    /// Run the verification sweep.
    Selftest(SweepArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long)]
    n: u64,
    /// `+1` for x^n - 1, `-1` for x^n + 1.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    sign: Sign,
    #[arg(long, value_enum, default_value_t = ModeArg::Euclidean)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 27)]
    q_max: u64,
    #[arg(long, default_value_t = 200)]
    n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Euclidean,
    Hermitian,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Euclidean => Mode::Euclidean,
            ModeArg::Hermitian => Mode::Hermitian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("NEGACYCL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let outcome = match &cli.command {
        Command::Factor(c) => cmd_factor(c),
        Command::Count(c) => cmd_count(c),
        Command::Classify(c) => cmd_classify(c),
        Command::Codes(c) => cmd_codes(c),
        Command::Selftest(s) => cmd_selftest(s),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn field(c: &Common) -> Result<PrimePower, Failure> {
    let q = PrimePower::new(c.p, c.e)?;
    if !q.is_odd() {
        return Err(Error::EvenOrder(q.q).into());
    }
    Ok(q)
}

fn field_label(q: &PrimePower, mode: Mode) -> String {
    match mode {
        Mode::Euclidean => format!("F_{}", q.q),
        Mode::Hermitian => format!("F_{}", q.q * q.q),
    }
}

fn xn(n: u64, sign: Sign) -> String {
    match sign {
        Sign::PlusOne => format!("x^{n} - 1"),
        Sign::MinusOne => format!("x^{n} + 1"),
    }
}

fn render_report(report: &FactorizationReport) -> String {
    let mut out = format!(
        "{} over {} ({} mode): r={} s={} t={} mu={} m={} n'={}\n",
        xn(report.n, report.sign),
        field_label(&report.q, report.mode),
        report.mode.as_str(),
        report.r,
        report.s,
        report.t,
        report.mu,
        report.m,
        report.n_prime,
    );
    for (i, rec) in report.records.iter().enumerate() {
        let tag = match rec.tag {
            factorization::Tag::SelfPaired => "self".to_string(),
            factorization::Tag::PairedWith(j) => format!("paired with #{j}"),
        };
        let power = if rec.multiplicity > 1 {
            format!("^{}", rec.multiplicity)
        } else {
            String::new()
        };
        out += &format!("#{i}  ({}){power}  coset {}  {tag}\n", rec.poly, rec.coset_rep);
    }
    out
}

fn cmd_factor(c: &Common) -> Outcome {
    let q = field(c)?;
    let report = factorization::factor_xn_over(q.q, c.n, c.sign, c.mode.into())?;
    factorization::verify_report(&report).map_err(|v| Failure::Verification(v.to_string()))?;
    match c.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", render_report(&report)),
    }
    Ok(())
}

fn closed_breakdown(q: u64, n: u64, sign: Sign, mode: Mode) -> negacycl::Result<CountBreakdown> {
    let m = numtheory::exact_divide(2, n)?;
    let n_prime = n >> m;
    match (sign, mode) {
        (Sign::PlusOne, Mode::Euclidean) => counting::count_srim_cyclic(q, n),
        (Sign::PlusOne, Mode::Hermitian) => counting::count_scrim_cyclic(q, n),
        (Sign::MinusOne, Mode::Euclidean) => counting::count_srim_negacyclic(q, m, n_prime),
        (Sign::MinusOne, Mode::Hermitian) => counting::count_scrim_negacyclic(q, m, n_prime),
    }
}

fn recursive_count(q: u64, m: u32, n_prime: u64, sign: Sign, mode: Mode) -> negacycl::Result<u64> {
    match (sign, mode) {
        (Sign::PlusOne, Mode::Euclidean) => counting::count_srim_cyclic_recursive(q, m, n_prime),
        (Sign::PlusOne, Mode::Hermitian) => counting::count_scrim_cyclic_recursive(q, m, n_prime),
        (Sign::MinusOne, Mode::Euclidean) => counting::count_srim_negacyclic_recursive(q, m, n_prime),
        (Sign::MinusOne, Mode::Hermitian) => counting::count_scrim_negacyclic_recursive(q, m, n_prime),
    }
}

/// The uncorrected recursions exist only for the Euclidean counts.
fn as_printed_count(q: u64, m: u32, n_prime: u64, sign: Sign, mode: Mode) -> negacycl::Result<Option<u64>> {
    Ok(match (sign, mode) {
        (Sign::PlusOne, Mode::Euclidean) => Some(counting::count_srim_cyclic_recursive_as_printed(q, m, n_prime)?),
        (Sign::MinusOne, Mode::Euclidean) => {
            Some(counting::count_srim_negacyclic_recursive_as_printed(q, m, n_prime)?)
        }
        _ => None,
    })
}

fn cmd_count(c: &Common) -> Outcome {
    let q = field(c)?;
    let mode: Mode = c.mode.into();
    let closed = closed_breakdown(q.q, c.n, c.sign, mode)?;
    let recursive = recursive_count(q.q, closed.m, closed.n_prime, c.sign, mode)?;
    let oracle = factorization::factor_xn_over(q.q, c.n, c.sign, mode)?.s as u64;
    let as_printed = as_printed_count(q.q, closed.m, closed.n_prime, c.sign, mode)?;
    let differs = as_printed.filter(|&v| v != recursive);
    match c.format {
        Format::Json => {
            let mut doc = json!({
                "q": q.q,
                "n": c.n,
                "sign": c.sign.as_str(),
                "mode": mode.as_str(),
                "closed": closed.total,
                "recursive": recursive,
                "oracle": oracle,
                "breakdown": closed,
            });
            if c.verbose {
                doc["as_printed"] = json!(as_printed);
            }
            println!("{doc}");
        }
        Format::Text => {
            let kind = match mode {
                Mode::Euclidean => "SRIM",
                Mode::Hermitian => "SCRIM",
            };
            println!(
                "{kind} factors of {} over {}: closed={} recursive={recursive} oracle={oracle}",
                xn(c.n, c.sign),
                field_label(&q, mode),
                closed.total,
            );
            if c.verbose {
                println!("m={} n'={} nu={}", closed.m, closed.n_prime, closed.nu);
                for t in &closed.terms {
                    println!(
                        "  d={:<6} member={:<5} phi={:<6} ord={:<6} +{}",
                        t.d, t.member, t.phi, t.ord, t.contribution
                    );
                }
                match (as_printed, differs) {
                    (Some(v), Some(_)) => println!("as-printed={v} (differs from the true count)"),
                    (Some(v), None) => println!("as-printed={v}"),
                    (None, _) => {}
                }
            }
        }
    }
    if closed.total != recursive || closed.total != oracle {
        return Err(Failure::Verification(format!(
            "closed {} / recursive {recursive} / oracle {oracle} disagree",
            closed.total
        )));
    }
    Ok(())
}

fn class_name(c: ExtremeClass) -> &'static str {
    match c {
        ExtremeClass::AllSelf => "all-self",
        ExtremeClass::OnlyXPlusOne => "only-x+1",
        ExtremeClass::Mixed => "mixed",
    }
}

fn cmd_classify(c: &Common) -> Outcome {
    let q = field(c)?;
    if c.n % 2 == 0 {
        return Err(Failure::Usage("classify needs an odd length".into()));
    }
    let mode: Mode = c.mode.into();
    let verdict = match mode {
        Mode::Euclidean => counting::classify_extreme_srim(q.q, c.n)?,
        Mode::Hermitian => counting::classify_extreme_scrim(q.q, c.n)?,
    };
    let report = factorization::factor_xn_over(q.q, c.n, Sign::MinusOne, mode)?;
    let observed = if report.s == report.r {
        ExtremeClass::AllSelf
    } else if report.s == 1 {
        ExtremeClass::OnlyXPlusOne
    } else {
        ExtremeClass::Mixed
    };
    match c.format {
        Format::Json => println!(
            "{}",
            json!({
                "q": q.q,
                "n": c.n,
                "mode": mode.as_str(),
                "verdict": class_name(verdict),
                "r": report.r,
                "s": report.s,
            })
        ),
        Format::Text => println!(
            "x^{} + 1 over {}: {} (r={} s={})",
            c.n,
            field_label(&q, mode),
            class_name(verdict),
            report.r,
            report.s
        ),
    }
    // A single factor (n = 1) is both all-self and only x + 1.
    let consistent = verdict == observed || (report.r == 1 && verdict == ExtremeClass::OnlyXPlusOne);
    if !consistent {
        return Err(Failure::Verification(format!(
            "predicted {}, factorization shows {}",
            class_name(verdict),
            class_name(observed)
        )));
    }
    Ok(())
}

fn cmd_codes(c: &Common) -> Outcome {
    let q = field(c)?;
    let mode: Mode = c.mode.into();
    let predicted = negacyclic::count_lcd(q.q, c.n, mode)?;
    let census: LcdCensus = if predicted.count <= LIST_CAP {
        let base = negacycl::finitefield::make_field(q.p, q.e)?;
        let full = negacyclic::enumerate_lcd(&base, c.n, mode)?;
        if full.count != predicted.count {
            return Err(Failure::Verification(format!(
                "enumerated {} LCD codes, formula gives {}",
                full.count, predicted.count
            )));
        }
        full
    } else {
        predicted
    };
    match c.format {
        Format::Json => println!("{}", census.to_json()),
        Format::Text => {
            println!(
                "LCD negacyclic codes of length {} over {} ({} mode): count={} (r={} s={} t={} mu={})",
                c.n,
                field_label(&q, mode),
                mode.as_str(),
                census.count,
                census.r,
                census.s,
                census.t,
                census.mu
            );
            if let Some(gens) = &census.generators {
                let report = factorization::factor_xn_over(q.q, c.n, Sign::MinusOne, mode)?;
                let field: Arc<_> = report.field.clone();
                for g in gens {
                    let poly = Poly::parse(&field, g)?;
                    let exps = negacyclic::exponent_profile(&poly, &report)?;
                    let exps: Vec<String> = exps.iter().map(u64::to_string).collect();
                    println!("  {g}  exponents {{{}}}", exps.join(","));
                }
            }
        }
    }
    Ok(())
}

fn cmd_selftest(s: &SweepArgs) -> Outcome {
    if s.q_max < 3 || s.n_max < 1 {
        return Err(Failure::Usage("sweep bounds must be q-max >= 3 and n-max >= 1".into()));
    }
    let cfg = SweepConfig { q_max: s.q_max, n_max: s.n_max };
    let out = selftest::run_selftest(&cfg);
    match s.format {
        Format::Json => println!("{}", serde_json::to_string(&out.suites).expect("suites serialize")),
        Format::Text => {
            for r in &out.suites {
                let status = if r.passed() { "ok" } else { "FAIL" };
                println!(
                    "[{status}] suite {}: {}  {}/{} checks passed",
                    r.id,
                    r.name,
                    r.checks - r.failures,
                    r.checks
                );
                if s.verbose {
                    if let Some(f) = &r.first_failure {
                        println!("       first failure: {f}");
                    }
                }
            }
        }
    }
    match out.suites.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(Failure::Verification(format!(
            "suite {} ({}): {}",
            r.id,
            r.name,
            r.first_failure.as_deref().unwrap_or("no checks ran")
        ))),
    }
}
