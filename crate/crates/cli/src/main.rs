//! `sturmian`: return times and local return rates of Sturmian subshifts.

mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sturmian_core::coding::{gamma_encode_at, DigitWord, Extremal};
use sturmian_core::jumps::{jumps_by_definition, jumps_by_formula, rate_estimates, ReturnProfile};
use sturmian_core::lang::{generate_prefix, tau_word_oracle};
use sturmian_core::measure::{empirical_rates, transition_row, Context, EmpiricalRates};
use sturmian_core::rates::rate_constants;
use sturmian_core::rotation::{
    cylinder_interval, default_cap, distinct_lengths, partition, tau_bruteforce, tau_formula, CircleInterval,
};
use sturmian_core::verify::{run_suite, Fault, VerifyConfig};
use sturmian_core::{coding, ContinuedFraction, Error, Schedule, Word};

use output::{dec, form, form_dec, int, ratio, surd, SIG};

#[derive(Parser, Debug)]
#[command(name = "sturmian", version, about = "Exact return times and local return rates of Sturmian subshifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Angle {
    /// Partial quotients a_1,a_2,... (the preamble when --period is given).
    #[arg(long, value_name = "DIGITS", conflicts_with = "schedule")]
    cf: Option<String>,
    /// Digits repeated forever after the preamble.
    #[arg(long, value_name = "DIGITS", requires = "cf")]
    period: Option<String>,
    /// Surrogate unbounded expansion: `linear` (a_k = k) or `pow2` (a_k = 2^k).
    #[arg(long)]
    schedule: Option<String>,
}

impl Angle {
    fn build(&self) -> Result<ContinuedFraction, Error> {
        match (&self.cf, &self.schedule) {
            (Some(pre), None) => ContinuedFraction::parse_spec(pre, self.period.as_deref()),
            (None, Some(s)) => Ok(ContinuedFraction::schedule(Schedule::from_name(s)?)),
            _ => Err(Error::InvalidArgument("give exactly one of --cf or --schedule".into())),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[command(flatten)]
    angle: Angle,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convergents, the extremal rates r0 and r1, and their bounds.
    Rates {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        /// Tolerance for flagging estimates that have not settled.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Cells of the partition by the first n + 1 cut points.
    Partition {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: u64,
    },
    /// Return time of a cylinder or of an arc between two cut points.
    Tau {
        #[command(flatten)]
        common: Common,
        /// Binary word u, for the cylinder I_u.
        #[arg(long, conflicts_with = "interval")]
        word: Option<String>,
        /// Cut point indices `i,j` for the arc [x̂_i, x̂_j).
        #[arg(long)]
        interval: Option<String>,
    },
    /// Jump times r_k of a point given by digits.
    Jumps {
        #[command(flatten)]
        common: Common,
        /// One of the extremal points b, c, d.
        #[arg(long, conflicts_with = "digits")]
        point: Option<String>,
        /// Admissible digits x_1,x_2,...
        #[arg(long)]
        digits: Option<String>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Also scan the itinerary of the point and compare.
        #[arg(long)]
        definition: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Rate estimates of points drawn from the invariant measure.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Distance from r0 and r1 counted as concentrated.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Run every cross-check; exits 1 on the first failing suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Largest word length for the return time and language checks.
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) | Error::CapExceeded { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Report {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Rates { common, .. }
        | Command::Partition { common, .. }
        | Command::Tau { common, .. }
        | Command::Jumps { common, .. }
        | Command::Sample { common, .. }
        | Command::Verify { common, .. } => common.clone(),
    };
    let result = common
        .angle
        .build()
        .map_err(Failure::from)
        .and_then(|cf| run(&cli.command, &cf, common.format));
    match result {
        Ok(report) => {
            let written = match &common.out {
                Some(path) => std::fs::write(path, &report.text).map_err(|e| e.to_string()),
                None => {
                    print!("{}", report.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
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

fn run(cmd: &Command, cf: &ContinuedFraction, format: Format) -> Result<Report, Failure> {
    match cmd {
        Command::Rates { depth, tol, .. } => cmd_rates(cf, *depth, *tol, format),
        Command::Partition { n, .. } => cmd_partition(cf, *n, format),
        Command::Tau { word, interval, .. } => cmd_tau(cf, word.as_deref(), interval.as_deref(), format),
        Command::Jumps {
            point,
            digits,
            depth,
            definition,
            tol,
            ..
        } => cmd_jumps(cf, point.as_deref(), digits.as_deref(), *depth, *definition, *tol, format),
        Command::Sample {
            depth,
            samples,
            seed,
            tol,
            ..
        } => cmd_sample(cf, *depth, *samples, *seed, *tol, format),
        Command::Verify {
            n,
            depth,
            points,
            seed,
            inject_fault,
            ..
        } => {
            let fault = match inject_fault.as_deref() {
                None => None,
                Some(name) => Some(
                    Fault::from_name(name).ok_or_else(|| Failure::Usage(format!("unknown fault {name:?}")))?,
                ),
            };
            let cfg = VerifyConfig {
                n_max: *n,
                depth: *depth,
                points: *points,
                seed: *seed,
                fault,
            };
            cmd_verify(cf, &cfg, format)
        }
    }
}

fn json_report(command: &str, cf: &ContinuedFraction, mut body: Value) -> String {
    let obj = body.as_object_mut().expect("report body is an object");
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(1));
    out.insert("command".into(), json!(command));
    out.insert("angle".into(), serde_json::to_value(cf).expect("angle serializes"));
    out.append(obj);
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("json");
    s.push('\n');
    s
}

fn check_depth(depth: usize, min: usize) -> Result<(), Failure> {
    if depth < min {
        return Err(Failure::Usage(format!("--depth must be at least {min}")));
    }
    Ok(())
}

fn cmd_rates(cf: &ContinuedFraction, depth: usize, tol: f64, format: Format) -> Result<Report, Failure> {
    check_depth(depth, 2)?;
    let rc = rate_constants(cf, depth)?;
    let mut rows = Vec::new();
    for k in 0..=depth as i64 + 1 {
        let a = if k >= 1 { cf.digit(k as usize)?.to_string() } else { String::new() };
        rows.push(vec![k.to_string(), a, cf.q(k)?.to_string()]);
    }
    let unsettled = |est: &num_rational::BigRational, last: &num_rational::BigRational| {
        sturmian_core::jumps::to_f64(&(est - last)).abs() > tol
    };
    let r0_unsettled = unsettled(&rc.r0_estimate, &rc.r0_last);
    let r1_unsettled = unsettled(&rc.r1_estimate, &rc.r1_last);
    let ok = rc.all_bounds_hold();
    let text = match format {
        Format::Json => {
            let bounds: Vec<Value> = rc.bounds.iter().map(|b| json!({"name": b.name, "holds": b.holds})).collect();
            let q: Vec<Value> = (0..=depth as i64 + 1).map(|k| cf.q(k).map(|q| int(&q))).collect::<Result<_, _>>()?;
            json_report(
                "rates",
                cf,
                json!({
                    "depth": depth,
                    "M": rc.m,
                    "M_exact": rc.m_exact,
                    "q": q,
                    "r0": {
                        "estimate": dec(&rc.r0_estimate),
                        "estimate_exact": ratio(&rc.r0_estimate),
                        "last": dec(&rc.r0_last),
                        "unsettled": r0_unsettled,
                        "limit": rc.r0_limit.as_ref().map(surd),
                    },
                    "r1": {
                        "estimate": dec(&rc.r1_estimate),
                        "estimate_exact": ratio(&rc.r1_estimate),
                        "last": dec(&rc.r1_last),
                        "unsettled": r1_unsettled,
                        "limit": rc.r1_limit.as_ref().map(surd),
                    },
                    "window": [depth / 2, depth],
                    "bounds": bounds,
                    "identity_r1_eq_inv_r0_minus_1": rc.identity,
                }),
            )
        }
        Format::Csv => output::csv(&["k", "a_k", "q_k"], &rows),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "angle {cf}");
            let _ = writeln!(s, "M = {}{}", rc.m, if rc.m_exact { "" } else { " (largest digit seen)" });
            s.push('\n');
            s.push_str(&output::table(&["k", "a_k", "q_k"], &rows));
            s.push('\n');
            let window = format!("k in [{}, {}]", depth / 2, depth);
            let _ = writeln!(s, "r0 estimate  {}  ({window}){}", dec(&rc.r0_estimate), if r0_unsettled { "  unsettled" } else { "" });
            let _ = writeln!(s, "r1 estimate  {}  ({window}){}", dec(&rc.r1_estimate), if r1_unsettled { "  unsettled" } else { "" });
            if let (Some(r0), Some(r1)) = (&rc.r0_limit, &rc.r1_limit) {
                let _ = writeln!(s, "r0 limit     {}  = {r0}", r0.to_decimal(SIG));
                let _ = writeln!(s, "r1 limit     {}  = {r1}", r1.to_decimal(SIG));
            }
            s.push('\n');
            for b in &rc.bounds {
                let _ = writeln!(s, "{:<16} {}", b.name, if b.holds { "holds" } else { "FAILS" });
            }
            if let Some(id) = rc.identity {
                let _ = writeln!(s, "{:<16} {}", "r1 = 1/r0 - 1", if id { "holds" } else { "FAILS" });
            }
            s
        }
    };
    Ok(Report { text, ok })
}

/// Digits of a J-label, concatenated when every digit is a single character.
fn label(u: &DigitWord) -> String {
    if u.digits().iter().all(|&x| x < 10) {
        u.digits().iter().map(u64::to_string).collect()
    } else {
        u.to_string()
    }
}

fn cmd_partition(cf: &ContinuedFraction, n: u64, format: Format) -> Result<Report, Failure> {
    let cells = partition(n, cf)?;
    // Cells carry J-labels when n + 1 is a convergent denominator.
    let mut depth = None;
    for k in 0.. {
        let q = cf.q_u64(k)?;
        if q == n + 1 {
            depth = Some(k as usize);
        }
        if q > n + 1 {
            break;
        }
    }
    let labels: Vec<Option<DigitWord>> = cells
        .iter()
        .map(|c| depth.map(|k| gamma_encode_at(&c.word, k, cf)).transpose())
        .collect::<Result<_, _>>()?;
    let lengths = distinct_lengths(&cells, cf)?;
    let cut = |iv: &CircleInterval, first: bool| {
        iv.cuts().map(|(i, j)| if first { i } else { j }).unwrap_or_default()
    };
    let mut rows = Vec::new();
    for (c, l) in cells.iter().zip(&labels) {
        rows.push(vec![
            c.word.to_string(),
            l.as_ref().map(label).unwrap_or_default(),
            cut(&c.interval, true).to_string(),
            cut(&c.interval, false).to_string(),
            c.interval.start().to_string(),
            c.interval.end().to_string(),
            c.interval.length().to_string(),
            form_dec(c.interval.length(), cf)?,
        ]);
    }
    let header = ["word", "j_label", "left_cut", "right_cut", "left", "right", "length", "length_decimal"];
    let text = match format {
        Format::Csv => output::csv(&header, &rows),
        Format::Json => {
            let cells_json: Vec<Value> = cells
                .iter()
                .zip(&labels)
                .map(|(c, l)| {
                    Ok(json!({
                        "word": c.word.to_string(),
                        "j_label": l.as_ref().map(|u| u.digits().to_vec()),
                        "cuts": c.interval.cuts().map(|(i, j)| [i, j]),
                        "left": form(c.interval.start()),
                        "right": form(c.interval.end()),
                        "length": form(c.interval.length()),
                        "length_decimal": form_dec(c.interval.length(), cf)?,
                    }))
                })
                .collect::<Result<_, Error>>()?;
            let ls: Vec<Value> = lengths.iter().map(form).collect();
            json_report("partition", cf, json!({ "n": n, "cells": cells_json, "distinct_lengths": ls }))
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "angle {cf}, n = {n}, {} cells", cells.len());
            s.push_str(&output::table(&header, &rows));
            let ls: Vec<String> = lengths.iter().map(|l| l.to_string()).collect();
            let _ = writeln!(s, "{} distinct lengths: {}", lengths.len(), ls.join(", "));
            s
        }
    };
    Ok(Report { text, ok: true })
}

fn parse_pair(s: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("expected two cut indices `i,j`, got {s:?}"));
    let (i, j) = s.split_once(',').ok_or_else(bad)?;
    Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
}

fn cmd_tau(cf: &ContinuedFraction, word: Option<&str>, interval: Option<&str>, format: Format) -> Result<Report, Failure> {
    let (iv, w) = match (word, interval) {
        (Some(w), None) => {
            let w: Word = w.parse()?;
            let iv = cylinder_interval(&w, cf)?.ok_or_else(|| Error::NotInLanguage { word: w.to_string() })?;
            (iv, Some(w))
        }
        (None, Some(p)) => {
            let (i, j) = parse_pair(p)?;
            (CircleInterval::from_cuts(i, j, cf)?, None)
        }
        _ => return Err(Failure::Usage("give --word or --interval".into())),
    };
    let len = iv.length();
    let formula = tau_formula(len, cf)?;
    let brute = tau_bruteforce(len, cf, default_cap(len, cf)?)?;
    let oracle = w.as_ref().map(|w| tau_word_oracle(w, cf)).transpose()?;
    let ok = formula == BigInt::from(brute) && oracle.is_none_or(|t| t == brute);
    let text = match format {
        Format::Json => json_report(
            "tau",
            cf,
            json!({
                "word": w.as_ref().map(Word::to_string),
                "interval": { "left": form(iv.start()), "right": form(iv.end()), "cuts": iv.cuts().map(|(i, j)| [i, j]) },
                "length": form(len),
                "length_decimal": form_dec(len, cf)?,
                "tau_formula": int(&formula),
                "tau_orbit_search": brute,
                "tau_occurrence_gap": oracle,
                "agree": ok,
            }),
        ),
        Format::Csv => output::csv(
            &["length", "length_decimal", "tau_formula", "tau_orbit_search", "tau_occurrence_gap"],
            &[vec![
                len.to_string(),
                form_dec(len, cf)?,
                formula.to_string(),
                brute.to_string(),
                oracle.map(|t| t.to_string()).unwrap_or_default(),
            ]],
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "interval         {iv}");
            let _ = writeln!(s, "length           {len} = {}", form_dec(len, cf)?);
            let _ = writeln!(s, "formula          {formula}");
            let _ = writeln!(s, "orbit search     {brute}");
            if let Some(t) = oracle {
                let _ = writeln!(s, "occurrence gap   {t}");
            }
            let _ = writeln!(s, "{}", if ok { "agree" } else { "DISAGREE" });
            s
        }
    };
    Ok(Report { text, ok })
}

fn profile_rows(p: &ReturnProfile, digits: &DigitWord) -> Vec<Vec<String>> {
    p.rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                digits.x(r.k + 1).to_string(),
                r.q_k.to_string(),
                r.r_k.to_string(),
                dec(&r.lower()),
                dec(&r.upper()),
            ]
        })
        .collect()
}

fn cmd_jumps(
    cf: &ContinuedFraction,
    point: Option<&str>,
    digits: Option<&str>,
    depth: usize,
    definition: bool,
    tol: f64,
    format: Format,
) -> Result<Report, Failure> {
    check_depth(depth, 2)?;
    let x = match (point, digits) {
        (Some(name), None) => Extremal::from_name(name)
            .ok_or_else(|| Failure::Usage(format!("unknown point {name:?}, expected b, c or d")))?
            .digits(depth + 1, cf)?,
        (None, Some(d)) => d.parse::<DigitWord>()?,
        _ => return Err(Failure::Usage("give --point or --digits".into())),
    };
    let profile = jumps_by_formula(&x, depth, cf)?;
    let est = rate_estimates(&profile, tol)?;
    let mut ok = profile.bound_violation().is_none();
    let def_agrees = if definition {
        let start = coding::point_from_digits(&x.prefix(depth + 1), cf)?;
        let need = (cf.q(depth as i64 + 1)? + cf.q(depth as i64)?)
            .try_into()
            .map_err(|_| Error::Overflow("prefix length"))?;
        let prefix = generate_prefix(cf, &start, need)?;
        let agrees = jumps_by_definition(&prefix.bits, depth, cf)? == profile;
        ok &= agrees;
        Some(agrees)
    } else {
        None
    };
    let header = ["k", "x_k+1", "q_k", "r_k", "q_k/r_k", "q_k+1/r_k"];
    let rows = profile_rows(&profile, &x);
    let text = match format {
        Format::Csv => output::csv(&header, &rows),
        Format::Json => {
            let rows: Vec<Value> = profile
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "q_k": int(&r.q_k),
                        "q_k1": int(&r.q_k1),
                        "r_k": int(&r.r_k),
                        "qk_over_rk": ratio(&r.lower()),
                        "qk1_over_rk": ratio(&r.upper()),
                    })
                })
                .collect();
            json_report(
                "jumps",
                cf,
                json!({
                    "digits": x.prefix(depth + 1).digits(),
                    "depth": depth,
                    "rows": rows,
                    "summary": {
                        "window": [est.window.0, est.window.1],
                        "lower": dec(&est.lower),
                        "upper": dec(&est.upper),
                        "lower_last": dec(&est.lower_last),
                        "upper_last": dec(&est.upper_last),
                        "lower_unsettled": est.lower_unsettled,
                        "upper_unsettled": est.upper_unsettled,
                        "bounds_hold": profile.bound_violation().is_none(),
                        "definition_agrees": def_agrees,
                    },
                }),
            )
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "angle {cf}, digits {}", x.prefix(depth + 1));
            s.push_str(&output::table(&header, &rows));
            let _ = writeln!(s, "lower rate estimate  {}  (last {})", dec(&est.lower), dec(&est.lower_last));
            let _ = writeln!(s, "upper rate estimate  {}  (last {})", dec(&est.upper), dec(&est.upper_last));
            if let Some(a) = def_agrees {
                let _ = writeln!(s, "definition scan      {}", if a { "agrees" } else { "DISAGREES" });
            }
            s
        }
    };
    Ok(Report { text, ok })
}

fn transition_tables(cf: &ContinuedFraction, upto: usize) -> Result<Vec<Value>, Error> {
    let mut out = Vec::new();
    for k in 0..=upto {
        let contexts: &[Context] = if k == 0 { &[Context::Initial] } else { &[Context::NonMaximal, Context::Maximal] };
        for &c in contexts {
            let row = transition_row(k, c, cf)?;
            let den = row.denominator.to_f64(cf)?;
            let entries: Vec<Value> = row
                .digits()
                .take(64)
                .map(|j| {
                    let num = row.numerator(j);
                    Ok(json!({
                        "j": j,
                        "numerator": form(&num),
                        "probability": format!("{:.15}", num.to_f64(cf)? / den),
                    }))
                })
                .collect::<Result<_, Error>>()?;
            out.push(json!({
                "k": k,
                "context": format!("{c:?}"),
                "denominator": form(&row.denominator),
                "entries": entries,
                "sums_to_one": row.sums_to_one(),
            }));
        }
    }
    Ok(out)
}

fn cmd_sample(cf: &ContinuedFraction, depth: usize, samples: usize, seed: u64, tol: f64, format: Format) -> Result<Report, Failure> {
    check_depth(depth, 2)?;
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let run: EmpiricalRates = empirical_rates(cf, depth, samples, seed)?;
    let rc = rate_constants(cf, depth)?;
    let targets = rc.r0_limit.as_ref().zip(rc.r1_limit.as_ref()).map(|(a, b)| (a.to_f64(), b.to_f64()));
    let fractions = targets.map(|(r0, r1)| (run.lower_within(r0, tol), run.upper_within(r1, tol)));
    let header = ["index", "lower", "upper"];
    let rows: Vec<Vec<String>> = run
        .samples
        .iter()
        .map(|s| vec![s.index.to_string(), dec(&s.estimates.lower), dec(&s.estimates.upper)])
        .collect();
    let text = match format {
        Format::Csv => output::csv(&header, &rows),
        Format::Json => {
            let per: Vec<Value> = run
                .samples
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index,
                        "digits": s.digits.digits(),
                        "lower": dec(&s.estimates.lower),
                        "upper": dec(&s.estimates.upper),
                    })
                })
                .collect();
            let lower_hist = EmpiricalRates::histogram(run.samples.iter().map(|s| s.lower()), 0.0, 1.0, 20);
            let upper_hist = EmpiricalRates::histogram(
                run.samples.iter().map(|s| s.upper()),
                1.0,
                rc.m as f64 + 2.0,
                20,
            );
            json_report(
                "sample",
                cf,
                json!({
                    "depth": depth,
                    "samples": samples,
                    "seed": seed,
                    "median_lower": dec(&run.median_lower()),
                    "median_upper": dec(&run.median_upper()),
                    "r0": rc.r0_limit.as_ref().map(surd),
                    "r1": rc.r1_limit.as_ref().map(surd),
                    "tolerance": tol,
                    "fraction_lower_near_r0": fractions.map(|f| f.0),
                    "fraction_upper_near_r1": fractions.map(|f| f.1),
                    "histogram_lower": { "range": [0.0, 1.0], "counts": lower_hist },
                    "histogram_upper": { "range": [1.0, rc.m as f64 + 2.0], "counts": upper_hist },
                    "transition_tables": transition_tables(cf, 6)?,
                    "per_sample": per,
                }),
            )
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "angle {cf}, depth {depth}, {samples} samples, seed {seed}");
            let _ = writeln!(s, "median lower estimate  {}", dec(&run.median_lower()));
            let _ = writeln!(s, "median upper estimate  {}", dec(&run.median_upper()));
            if let (Some((r0, r1)), Some((f0, f1))) = (targets, fractions) {
                let _ = writeln!(s, "within {tol} of r0 = {r0:.10}: {:.1}%", f0 * 100.0);
                let _ = writeln!(s, "within {tol} of r1 = {r1:.10}: {:.1}%", f1 * 100.0);
            }
            s
        }
    };
    Ok(Report { text, ok: true })
}

fn cmd_verify(cf: &ContinuedFraction, cfg: &VerifyConfig, format: Format) -> Result<Report, Failure> {
    let report = run_suite(cf, cfg)?;
    let ok = report.passed();
    let text = match format {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "cases": c.cases, "passed": c.passed(), "counterexample": c.counterexample}))
                .collect();
            json_report(
                "verify",
                cf,
                json!({
                    "n": cfg.n_max,
                    "depth": cfg.depth,
                    "points": cfg.points,
                    "seed": cfg.seed,
                    "passed": ok,
                    "checks": checks,
                }),
            )
        }
        Format::Csv => output::csv(
            &["check", "cases", "passed", "counterexample"],
            &report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        c.cases.to_string(),
                        c.passed().to_string(),
                        c.counterexample.clone().unwrap_or_default(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "angle {cf}, n <= {}, depth {}", cfg.n_max, cfg.depth);
            for c in &report.checks {
                let _ = writeln!(s, "{}  {} ({} cases)", if c.passed() { "pass" } else { "FAIL" }, c.name, c.cases);
                if let Some(ce) = &c.counterexample {
                    let _ = writeln!(s, "      counterexample: {ce}");
                }
            }
            s
        }
    };
    Ok(Report { text, ok })
}
