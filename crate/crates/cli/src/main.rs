use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kappa_core::acceptance;
use kappa_core::arith::cohen_h;
use kappa_core::eisen::{b_mu, kappa_mu};
use kappa_core::jacobi::{family_member, VectorValuedFormJson};
use kappa_core::lfun::dirichlet_l_deriv;
use kappa_core::qseries::{build_delta, build_e4, build_e6, build_j};
use kappa_core::ratio::{fmt_float, fmt_rational, parse_rational};
use kappa_core::{kappa_psi, Error, Evaluator, KappaReport, PrecisionConfig, VectorValuedForm};
use rug::{Float, Rational};
use serde_json::{json, Value};

/// `writeln!` into the output buffer; writing to a `String` cannot fail.
macro_rules! out {
    ($o:expr, $($arg:tt)*) => {{
        let _ = writeln!($o, $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "kappa",
    version,
    about = "Borcherds forms and log-norm integrals on the Siegel threefold"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Working precision in decimal digits (at least 15)
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u32).range(15..))]
    digits: u32,
    /// q-series precision bound (at least 2)
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(i64).range(2..))]
    prec: i64,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Cohen numbers H(r, N) for 0 <= N <= max-N
    Cohen {
        #[arg(long)]
        r: u32,
        #[arg(long = "max-N", alias = "max-n")]
        max_n: u64,
    },
    /// q-expansion of a classical series or of j^t f
    Series {
        #[arg(long, value_enum)]
        name: SeriesName,
        #[arg(long, default_value_t = 0)]
        t: u32,
    },
    /// L(s, chi_d) and its derivative
    Lvalue {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        deriv: bool,
    },
    /// kappa_mu(m), optionally with b_mu(m, v)
    KappaMu {
        #[arg(long)]
        mu: u8,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        v: Option<String>,
    },
    /// Principal part, divisor, weight and kappa of Psi(f)
    Borcherds {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        t: Option<u32>,
        /// vector-valued form JSON as written by `series --name vv --json`
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Check,
}

#[derive(Copy, Clone, ValueEnum)]
enum SeriesName {
    Delta,
    E4,
    E6,
    J,
    Vv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.run.json;
    let mut o = String::new();
    let code = match dispatch(&cli, &mut o) {
        Ok(code) => code,
        Err(e) => {
            if json {
                o.push_str(&format!(
                    "{}\n",
                    json!({ "error": e.kind(), "detail": e.to_string() })
                ));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    };
    // a closed pipe downstream is not an error worth reporting
    let _ = io::stdout().lock().write_all(o.as_bytes());
    code
}

fn dispatch(cli: &Cli, o: &mut String) -> kappa_core::Result<ExitCode> {
    let run = &cli.run;
    match &cli.cmd {
        Command::Cohen { r, max_n } => cmd_cohen(o, run, *r, *max_n),
        Command::Series { name, t } => cmd_series(o, run, *name, *t),
        Command::Lvalue { d, s, deriv } => cmd_lvalue(o, run, *d, s, *deriv),
        Command::KappaMu { mu, m, v } => cmd_kappa_mu(o, run, *mu, m, v.as_deref()),
        Command::Borcherds { t, input } => cmd_borcherds(o, run, *t, input.as_ref()),
        Command::Check => cmd_check(o, run),
    }
}

/// Digits shown for high-precision results, keeping guard digits hidden.
fn shown(run: &RunConfig) -> usize {
    (run.digits as usize).saturating_sub(20).max(10)
}

fn evaluator(run: &RunConfig) -> kappa_core::Result<Evaluator> {
    Ok(Evaluator::new(PrecisionConfig::new(run.digits)?))
}

fn print_json(o: &mut String, v: &impl serde::Serialize) {
    o.push_str(&serde_json::to_string_pretty(v).expect("serializable"));
    o.push('\n');
}

fn cmd_cohen(o: &mut String, run: &RunConfig, r: u32, max_n: u64) -> kappa_core::Result<ExitCode> {
    if r == 0 {
        return Err(Error::Domain("r must be at least 1".into()));
    }
    let zeta = cohen_h(r, 0);
    let rows: Vec<(u64, Rational, Rational)> = (0..=max_n)
        .map(|n| {
            let h = cohen_h(r, n);
            let scaled = -Rational::from(&h / &zeta);
            (n, h, scaled)
        })
        .collect();
    if run.json {
        let arr: Vec<Value> = rows
            .iter()
            .map(|(n, h, s)| json!({ "N": n, "H": fmt_rational(h), "scaled": fmt_rational(s) }))
            .collect();
        print_json(o, &arr);
    } else {
        out!(o, "{:>5}  {:>16}  {:>12}", "N", "H(r,N)", "-H/H(r,0)");
        for (n, h, s) in rows {
            out!(o, "{n:>5}  {:>16}  {:>12}", h.to_string(), s.to_string());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_series(
    o: &mut String,
    run: &RunConfig,
    name: SeriesName,
    t: u32,
) -> kappa_core::Result<ExitCode> {
    let prec = run.prec;
    let s = match name {
        SeriesName::Vv => {
            let f = family_member(t, prec)?;
            if run.json {
                print_json(o, &f.to_json());
            } else {
                out!(o, "weight {}", f.weight());
                out!(o, "f0 = {}", f.f0());
                out!(o, "f1 = {}", f.f1());
            }
            return Ok(ExitCode::SUCCESS);
        }
        SeriesName::Delta => build_delta(prec)?,
        SeriesName::E4 => build_e4(prec)?,
        SeriesName::E6 => build_e6(prec)?,
        SeriesName::J => build_j(prec)?,
    };
    if t != 0 {
        return Err(Error::Domain("--t only applies to --name vv".into()));
    }
    if run.json {
        print_json(o, &s.to_json());
    } else {
        out!(o, "{s}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lvalue(
    o: &mut String,
    run: &RunConfig,
    d: i64,
    s: &str,
    deriv: bool,
) -> kappa_core::Result<ExitCode> {
    let cfg = PrecisionConfig::new(run.digits)?;
    let s = parse_rational(s)?;
    let r = dirichlet_l_deriv(&s, d, &cfg)?;
    let digits = shown(run);
    let logderiv = if r.logderiv.is_nan() {
        Value::Null
    } else {
        Value::String(fmt_float(&r.logderiv, digits))
    };
    if run.json {
        let mut obj = json!({
            "d": d,
            "s": fmt_rational(&s),
            "value": fmt_float(&r.value, digits),
            "err": fmt_float(&r.err_estimate, 3),
        });
        if deriv {
            obj["deriv"] = Value::String(fmt_float(&r.deriv, digits));
            obj["logderiv"] = logderiv;
        }
        print_json(o, &obj);
    } else {
        out!(o, "L({s}, chi_{d}) = {}", fmt_float(&r.value, digits));
        if deriv {
            out!(o, "L'({s}, chi_{d}) = {}", fmt_float(&r.deriv, digits));
            match logderiv {
                Value::String(x) => out!(o, "L'/L = {x}"),
                _ => out!(o, "L'/L undefined (L vanishes)"),
            }
        }
        out!(o, "err ~ {}", fmt_float(&r.err_estimate, 3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_kappa_mu(
    o: &mut String,
    run: &RunConfig,
    mu: u8,
    m: &str,
    v: Option<&str>,
) -> kappa_core::Result<ExitCode> {
    if mu > 1 {
        return Err(Error::Domain(format!("mu must be 0 or 1, got {mu}")));
    }
    let ev = evaluator(run)?;
    let m = parse_rational(m)?;
    let term = kappa_mu(mu, &m, &ev)?;
    let digits = shown(run);
    let b = match v {
        Some(v) => {
            let v = Float::with_val(ev.bits(), parse_rational(v)?);
            Some((b_mu(mu, &m, &v, None, &ev)?, v))
        }
        None => None,
    };
    if run.json {
        let mut obj = serde_json::to_value(term.to_json(digits)).expect("serializable");
        if let Some((b, v)) = &b {
            obj["v"] = Value::String(fmt_float(v, digits));
            obj["b_mu"] = Value::String(fmt_float(b, digits));
        }
        print_json(o, &obj);
    } else {
        out!(o, "kappa_{mu}({m}) = {}", fmt_float(&term.numeric, digits));
        out!(o, "  = {}", term.symbolic);
        if let Some(bd) = &term.breakdown {
            out!(
                o,
                "  4m = {}^2 * {}, prefactor 120 H(2,4m) = {}",
                bd.n,
                bd.d,
                bd.prefactor
            );
            for p in &bd.primes {
                out!(
                    o,
                    "  p = {}: k = {}, chi = {}, b'/b = {} log {}",
                    p.p,
                    p.k,
                    p.chi_p,
                    p.b_logderiv,
                    p.p
                );
            }
        }
        if let Some((b, v)) = &b {
            out!(
                o,
                "b_{mu}({m}, {}) = {}",
                fmt_float(v, 10),
                fmt_float(b, digits)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_form(path: &PathBuf) -> kappa_core::Result<VectorValuedForm> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidForm(format!("{}: {e}", path.display())))?;
    let j: VectorValuedFormJson = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    VectorValuedForm::from_json(&j)
}

fn cmd_borcherds(
    o: &mut String,
    run: &RunConfig,
    t: Option<u32>,
    input: Option<&PathBuf>,
) -> kappa_core::Result<ExitCode> {
    let f = match (t, input) {
        (_, Some(path)) => load_form(path)?,
        (Some(t), None) => family_member(t, run.prec)?,
        (None, None) => unreachable!("clap requires --t or --input"),
    };
    let ev = evaluator(run)?;
    let report = kappa_psi(&f, &ev)?;
    let digits = shown(run);
    if run.json {
        print_json(o, &report.to_json(digits));
    } else {
        print_report(o, &report, digits);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(o: &mut String, r: &KappaReport, digits: usize) {
    let pp: Vec<String> = r
        .principal_part
        .iter()
        .map(|(m, mu, c)| {
            if *m == 0 {
                format!("c_{mu}(0) = {c}")
            } else {
                format!("c_{mu}(-{m}) = {c}")
            }
        })
        .collect();
    out!(o, "principal part: {}", pp.join(", "));
    out!(
        o,
        "weight: Psi(f)^2 has weight {}, Psi(f) has weight {}",
        r.weight_squared,
        r.weight_half
    );
    out!(o, "divisor of Psi(f)^2: {}", r.divisor);
    out!(
        o,
        "degree check: {} = {} ; sum c deg Z = {} = -vol(X) c_0(0) = {} [{}]",
        r.degree.lhs,
        r.degree.rhs,
        r.degree.degree_lhs,
        r.degree.degree_rhs,
        if r.degree.pass { "pass" } else { "FAIL" }
    );
    out!(o, "kappa = {}", fmt_float(&r.kappa, digits));
    out!(o, "      = {}", r.symbolic);
    out!(o, "breakdown:");
    for c in &r.contributions {
        out!(
            o,
            "  {:>8} x kappa_{}({}) = {}",
            c.mult.to_string(),
            c.mu,
            c.m,
            fmt_float(&c.term.numeric, digits)
        );
    }
    out!(o, "  constant term: {}", r.constant_contribution);
    out!(o, "grouped:");
    for g in &r.grouped {
        out!(o, "  {} [{}]  ({})", g.weight, g.form, g.label);
    }
    if let Some(chk) = &r.closed_form_check {
        out!(
            o,
            "closed form ({}): {} ; |diff| = {} ; symbolic match {} [{}]",
            chk.name,
            fmt_float(&chk.value, digits),
            fmt_float(&chk.abs_diff, 3),
            chk.symbolic_match,
            if chk.pass { "pass" } else { "FAIL" }
        );
        if let Some(d) = &chk.discrepancy {
            out!(o, "discrepancy: {}", d.description);
            out!(
                o,
                "  derived minus printed: {} = {} ; total with printed value {}",
                d.difference,
                fmt_float(&d.difference_numeric, digits),
                fmt_float(&d.printed_total, digits)
            );
        }
    }
}

fn cmd_check(o: &mut String, run: &RunConfig) -> kappa_core::Result<ExitCode> {
    let ev = evaluator(run)?;
    let outcomes = acceptance::run_all(&ev);
    let all = outcomes.iter().all(|o| o.pass);
    if run.json {
        let arr: Vec<Value> = outcomes
            .iter()
            .map(|o| json!({ "id": o.id, "name": o.name, "pass": o.pass, "detail": o.detail, "millis": o.millis }))
            .collect();
        print_json(o, &json!({ "pass": all, "criteria": arr }));
    } else {
        for oc in &outcomes {
            out!(o, "{oc}");
        }
        let n = outcomes.iter().filter(|o| o.pass).count();
        out!(o, "{n}/{} criteria pass", outcomes.len());
    }
    Ok(if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
