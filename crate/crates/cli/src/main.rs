use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use taulink::bivariate::{series_q, series_qb, SymBivariate};
use taulink::exact::{b_sequence, c_sequence, d_minus, Rational};
use taulink::ops::{Alphabet, GradedPoly, TruncationSpec};
use taulink::report::Report;
use taulink::series::{
    series_eta1, series_f, series_h, series_psi, series_stirling, series_theta, series_theta_of_f, series_v,
    series_w, virasoro_a, LaurentSeries,
};
use taulink::tau::{build_fh, e_sequence, fk_series, solve_fk, solve_l_from_btilde};
use taulink::verify::{run_suite, SuiteConfig, SUITES};
use taulink::Error;

#[derive(Parser, Debug)]
#[command(name = "taulink", version, about = "Exact coefficient tables, series and verification suites")]
struct Cli {
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    u_max: u32,
    /// Default may be overridden by TAULINK_WEIGHT_MAX.
    #[arg(long, global = true, env = "TAULINK_WEIGHT_MAX", default_value_t = 9, value_parser = clap::value_parser!(i64).range(1..))]
    weight_max: i64,
    #[arg(long, global = true, default_value_t = 12, value_parser = positive)]
    order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 0, value_parser = clap::value_parser!(i64).range(0..))]
    margin_extra: i64,
    /// Also write stdout to this file.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Record wall-clock seconds per suite (output is then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a coefficient table.
    Coeffs {
        #[arg(value_enum)]
        name: CoeffName,
        #[arg(value_parser = positive)]
        count: usize,
    },
    /// Print a named series; ORDER defaults to --order.
    Series {
        #[arg(value_enum)]
        name: SeriesName,
        #[arg(value_parser = positive)]
        order: Option<usize>,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
    /// Kontsevich-Witten correlators and F_K up to a weight bound.
    Fk {
        #[arg(value_parser = clap::value_parser!(i64).range(1..))]
        weight_bound: i64,
    },
    /// F_H in t and in q on the configured window.
    Fh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoeffName {
    A,
    E,
    B,
    #[value(name = "C")]
    C,
    L,
    D,
    #[value(name = "Q")]
    Q,
    #[value(name = "QB")]
    Qb,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesName {
    F,
    H,
    W,
    V,
    Psi,
    Eta1,
    Theta,
    ThetaOfF,
    Stirling,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Window(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn indexed_table(format: Format, label: &str, rows: Vec<(i64, Rational)>) -> String {
    match format {
        Format::Json => {
            let rows: Vec<[String; 2]> = rows.into_iter().map(|(i, c)| [i.to_string(), c.to_string()]).collect();
            serde_json::to_string(&rows).expect("serializable")
        }
        Format::Text => rows.iter().map(|(i, c)| format!("{label}_{i} = {c}")).collect::<Vec<_>>().join("\n"),
    }
}

fn bivariate_table(format: Format, label: &str, s: &SymBivariate) -> String {
    match format {
        Format::Json => to_json(s),
        Format::Text => s.entries().map(|(i, j, c)| format!("{label}_{i},{j} = {c}")).collect::<Vec<_>>().join("\n"),
    }
}

fn numbered(first: i64, values: Vec<Rational>) -> Vec<(i64, Rational)> {
    values.into_iter().enumerate().map(|(k, c)| (first + k as i64, c)).collect()
}

fn cmd_coeffs(format: Format, name: CoeffName, count: usize) -> Result<Output, Failure> {
    let text = match name {
        CoeffName::A => indexed_table(format, "a", numbered(1, virasoro_a(count)?.coeffs().to_vec())),
        CoeffName::E => indexed_table(format, "e", numbered(1, e_sequence(count)?)),
        CoeffName::B => {
            let b = b_sequence(count);
            indexed_table(format, "b", b.iter().filter(|(i, _)| *i >= 1).map(|(i, c)| (i, c.clone())).collect())
        }
        CoeffName::C => {
            let c = c_sequence(count - 1)?;
            indexed_table(format, "C", c.iter().map(|(i, c)| (i, c.clone())).collect())
        }
        CoeffName::L => indexed_table(format, "l", numbered(1, solve_l_from_btilde(count))),
        CoeffName::D => {
            indexed_table(format, "d", (2..count + 2).map(|n| (1 - n as i64, d_minus(n))).collect())
        }
        CoeffName::Q => bivariate_table(format, "Q", &series_q(count.max(2))?),
        CoeffName::Qb => bivariate_table(format, "QB", &series_qb(count)?),
    };
    Ok(Output::ok(text))
}

fn named_series(name: SeriesName, order: usize) -> Result<LaurentSeries, Error> {
    match name {
        SeriesName::F => series_f(order),
        SeriesName::H => series_h(order),
        SeriesName::W => Ok(series_w(order)),
        SeriesName::V => Ok(series_v(order)),
        SeriesName::Psi => Ok(series_psi(order)),
        SeriesName::Eta1 => series_eta1(order),
        SeriesName::Theta => series_theta(order),
        SeriesName::ThetaOfF => series_theta_of_f(order),
        SeriesName::Stirling => series_stirling(order),
    }
}

fn cmd_series(format: Format, name: SeriesName, order: usize) -> Result<Output, Failure> {
    let s = named_series(name, order)?;
    Ok(Output::ok(match format {
        Format::Json => to_json(&s),
        Format::Text => s.to_string(),
    }))
}

fn report_line(r: &Report) -> String {
    let status = if r.passed { "PASS" } else { "FAIL" };
    let mut line = format!("{status} {} checked={} mismatches={}", r.suite, r.checked, r.mismatches.len());
    if let Some(s) = r.seconds {
        line.push_str(&format!(" seconds={s:.3}"));
    }
    line
}

fn report_text(r: &Report) -> String {
    let mut lines = vec![report_line(r)];
    for m in r.mismatches.iter().take(20) {
        lines.push(format!("  {} {}: {} != {}", m.check, m.monomial, m.lhs, m.rhs));
    }
    if r.mismatches.len() > 20 {
        lines.push(format!("  ... {} more", r.mismatches.len() - 20));
    }
    lines.join("\n")
}

fn cmd_verify(cli: &Cli, suite: &str) -> Result<Output, Failure> {
    let cfg = SuiteConfig {
        u_max: cli.u_max,
        weight_max: cli.weight_max,
        order: cli.order,
        seed: cli.seed,
        margin_extra: cli.margin_extra,
    };
    if suite == "all" {
        let mut reports = Vec::new();
        for name in SUITES {
            reports.push(run_suite(name, &cfg, cli.timings)?);
        }
        let passed = reports.iter().all(|r| r.passed);
        let text = match cli.format {
            Format::Json => to_json(&json!({ "suites": reports, "passed": passed })),
            Format::Text => {
                let mut lines: Vec<String> = reports.iter().map(report_text).collect();
                lines.push(format!("{} of {} suites passed", reports.iter().filter(|r| r.passed).count(), reports.len()));
                lines.join("\n")
            }
        };
        return Ok(Output { text, passed });
    }
    if !SUITES.contains(&suite) {
        return Err(Failure::Usage(format!("unknown suite '{suite}'; expected one of {} or all", SUITES.join(", "))));
    }
    let report = run_suite(suite, &cfg, cli.timings)?;
    let text = match cli.format {
        Format::Json => to_json(&report),
        Format::Text => report_text(&report),
    };
    Ok(Output { text, passed: report.passed })
}

fn poly_text(p: &GradedPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .map(|(m, c)| if m.is_one() { c.to_string() } else { format!("{c}\t{}", m.display(p.alphabet())) })
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_fk(format: Format, weight_bound: i64) -> Result<Output, Failure> {
    let table = solve_fk(weight_bound)?;
    let index_max = ((weight_bound - 1) / 2) as u32;
    let trunc = TruncationSpec::new(0, weight_bound, index_max)?;
    let fk = fk_series(&table, Alphabet::T, trunc)?;
    Ok(Output::ok(match format {
        Format::Json => to_json(&json!({ "correlators": table, "free_energy": fk.log_part })),
        Format::Text => {
            let mut lines: Vec<String> = table
                .entries()
                .map(|(ds, c)| {
                    let taus: Vec<String> = ds.iter().map(|d| format!("tau_{d}")).collect();
                    format!("<{}> = {c}", taus.join(" "))
                })
                .collect();
            lines.push(String::new());
            lines.push("F_K(t):".into());
            lines.push(poly_text(&fk.log_part));
            lines.join("\n")
        }
    }))
}

fn cmd_fh(cli: &Cli) -> Result<Output, Failure> {
    let trunc = TruncationSpec::for_window(cli.u_max, cli.weight_max, cli.margin_extra);
    let table = solve_fk(trunc.weight_max)?;
    let (fh_t, fh_q) = build_fh(&table, trunc)?;
    let t = fh_t.log_part.window(cli.u_max, cli.weight_max);
    let q = fh_q.log_part.window(cli.u_max, cli.weight_max);
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&json!({
            "window": { "u_max": cli.u_max, "weight_max": cli.weight_max },
            "fh_t": t,
            "fh_q": q,
        })),
        Format::Text => format!("F_H(u,t):\n{}\n\nF_H(u,q):\n{}", poly_text(&t), poly_text(&q)),
    }))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Coeffs { name, count } => cmd_coeffs(cli.format, *name, *count),
        Command::Series { name, order } => cmd_series(cli.format, *name, order.unwrap_or(cli.order)),
        Command::Verify { suite } => cmd_verify(cli, suite),
        Command::Fk { weight_bound } => cmd_fk(cli.format, *weight_bound),
        Command::Fh => cmd_fh(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut text = out.text;
    text.push('\n');
    print!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = File::create(path).and_then(|mut f| f.write_all(text.as_bytes())) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
