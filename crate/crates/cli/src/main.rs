//! Command-line front end: word generation, classification, series
//! evaluation, orbit scans, endpoint computation and verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error,
//! 3 inconclusive verification (unless --allow-inconclusive).

mod config;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sturm_core::error::Error;
use sturm_core::exact::{dec_string, QuadraticReal, Rat, RealEnclosure};
use sturm_core::orbits::{
    digit_extract, endpoints, orbit, orbit_stats, xi_value, BaseSign, OrbitRecord, XiSpec,
};
use sturm_core::series::{endpoint_gap, eval_bits};
use sturm_core::speclang::{parse_quadratic, parse_rational, parse_word_spec};
use sturm_core::sturmian::{
    c_representative, characteristic, classify_prefix, mechanical, CVariant, ClassVerdict,
    ClassifyTarget, MechanicalSpec,
};
use sturm_core::verify::{
    dubickas_constants, dubickas_intervals, monotone_suite, oracle_enumerate, suite_extremal,
    suite_negative, suite_positive, ContainmentSuiteParams, Status, VerdictReport,
};
use sturm_core::words::{FiniteWord, Rounding, WordStream};

use config::Config;

#[derive(Parser)]
#[command(name = "sturm", version, about = "exact Sturmian words and alternating-base orbits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Neg,
    Pos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Sturmian,
    S,
    D,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a prefix of a word built from a spec string.
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
    },
    /// Test a finite 0/1 word against a class at prefix level.
    Classify {
        #[arg(long)]
        word: String,
        #[arg(long, value_enum)]
        class: ClassArg,
    },
    /// Evaluate the power series of a word at a rational ratio.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        ratio: String,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Fractional-part orbit of xi * (+-b)^n with certified enclosures.
    Orbit {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        g: i64,
        #[arg(long, default_value_t = 2)]
        base: i64,
        #[arg(long, value_enum, default_value = "neg")]
        sign: SignArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bits: Option<u32>,
        /// Lift reference point; defaults to the midpoint of the complement.
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        /// Also extract this many expansion digits from the orbit.
        #[arg(long)]
        digits: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Interval endpoints for a spec, with the exact gap.
    Endpoints {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        g: i64,
        #[arg(long, default_value_t = 2)]
        base: i64,
        #[arg(long, value_enum, default_value = "neg")]
        sign: SignArg,
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Comma-separated key=value pairs: r, b, g, theta, w, eps, pairs, len, depth, delta.
        #[arg(long, default_value = "")]
        params: String,
        /// Full word spec (overrides the w shorthand; specs contain commas).
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        allow_inconclusive: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Exhaustive small-word oracle checks.
    Oracle {
        #[arg(long)]
        length: u32,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        ratio: String,
        #[arg(long)]
        allow_inconclusive: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// The four excluded-interval constants for a base.
    Constants {
        #[arg(long, default_value_t = 2)]
        base: i64,
        #[arg(long)]
        bits: Option<u32>,
    },
}

fn main() {
    let cli = Cli::parse();
    let cfg = match Config::load() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    };
    match run(cli, &cfg) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse { .. } => 2,
                Error::Inconclusive(_) => 3,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

fn enclosure_fields(e: &RealEnclosure) -> (String, String, String) {
    let (dec, digits) = e.decimal_certified(17);
    (e.lo().to_string(), e.hi().to_string(), format!("{dec} ({digits} certified digits)"))
}

fn print_enclosure(label: &str, e: &RealEnclosure) {
    let (lo, hi, dec) = enclosure_fields(e);
    println!("{label}: {dec}");
    println!("{label}.lo = {lo}");
    println!("{label}.hi = {hi}");
}

fn pick_format(cfg: &Config, flag: Option<Format>) -> Format {
    flag.unwrap_or(match cfg.format.as_str() {
        "jsonl" => Format::Jsonl,
        "csv" => Format::Csv,
        _ => Format::Pretty,
    })
}

fn run(cli: Cli, cfg: &Config) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Gen { spec, n } => {
            let w = parse_word_spec(&spec)?;
            println!("{}", w.prefix(n));
            Ok(0)
        }
        Cmd::Classify { word, class } => {
            let p = FiniteWord::from_digits(&word)
                .filter(|w| w.is_binary())
                .ok_or_else(|| Error::Parse {
                    offset: 0,
                    message: "classify expects a word over 0/1".to_string(),
                })?;
            let target = match class {
                ClassArg::Sturmian => ClassifyTarget::Sturmian,
                ClassArg::S => ClassifyTarget::S,
                ClassArg::D => ClassifyTarget::D,
            };
            match classify_prefix(&p, target) {
                ClassVerdict::Inconsistent(witness) => {
                    println!("inconsistent (witness: {witness})");
                }
                ClassVerdict::ConsistentUpToLength(n) => println!("consistent up to length {n}"),
                ClassVerdict::ByConstruction => println!("member by construction"),
            }
            Ok(0)
        }
        Cmd::Eval { ratio, spec, bits } => {
            let r = parse_rational(&ratio)?;
            let w = parse_word_spec(&spec)?;
            let e = eval_bits(&w, 0, &r, bits.unwrap_or(cfg.bits))?;
            print_enclosure("value", &e);
            Ok(0)
        }
        Cmd::Orbit { spec, g, base, sign, n, bits, eta, digits, format } => {
            let word = parse_word_spec(&spec)?;
            let sign = match sign {
                SignArg::Neg => BaseSign::Negative,
                SignArg::Pos => BaseSign::Positive,
            };
            let xi = XiSpec::new(g, base, word, sign)?;
            let n = n.unwrap_or(cfg.horizon);
            let bits = bits.unwrap_or(cfg.bits);
            let records = orbit(&xi, n, bits);
            let fmt = pick_format(cfg, format);
            print_orbit(&records, fmt);
            let (lo, hi) = endpoints(&xi, bits)?;
            let stats = orbit_stats(&records, &lo, &hi);
            if fmt == Format::Pretty {
                println!("xi = {}", xi_value(&xi, bits).decimal_certified(17).0);
                print_enclosure("endpoint.lower", &lo);
                print_enclosure("endpoint.upper", &hi);
                println!(
                    "summary: {} records, {} certified inside, {} outside, {} near-endpoint, {} wrap-ambiguous",
                    stats.total,
                    stats.inside,
                    stats.outside.len(),
                    stats.undecided.len(),
                    stats.wrap_ambiguous.len()
                );
                println!("width >= {}", dec_string(&stats.width_lower_bound, 12));
            }
            if let Some(count) = digits {
                let eta = eta.map(|e| parse_rational(&e)).transpose()?;
                let ds = digit_extract(&xi, eta, count, bits)?;
                println!("digits: {}", FiniteWord::new(ds));
            }
            Ok(0)
        }
        Cmd::Endpoints { spec, g, base, sign, bits } => {
            let word = parse_word_spec(&spec)?;
            let sign = match sign {
                SignArg::Neg => BaseSign::Negative,
                SignArg::Pos => BaseSign::Positive,
            };
            let xi = XiSpec::new(g, base, word, sign)?;
            let bits = bits.unwrap_or(cfg.bits);
            let (lo, hi) = endpoints(&xi, bits)?;
            print_enclosure("lower", &lo);
            print_enclosure("upper", &hi);
            let r = Rat::new(1.into(), base.into());
            let gap = match sign {
                BaseSign::Negative => endpoint_gap(&r),
                BaseSign::Positive => r,
            };
            println!("gap = {gap} (exact)");
            Ok(0)
        }
        Cmd::Verify { suite, params, spec, n, bits, seed, allow_inconclusive, format } => {
            let kv = parse_params(&params)?;
            let n = n.unwrap_or(cfg.horizon);
            let bits = bits.unwrap_or(cfg.bits);
            let seed = seed.unwrap_or(cfg.seed);
            let report = run_suite(&suite, &kv, spec.as_deref(), n, bits, seed)?;
            print_report(&report, pick_format(cfg, format));
            exit_for(&report, allow_inconclusive)
        }
        Cmd::Oracle { length, ratio, allow_inconclusive, format } => {
            let r = parse_rational(&ratio)?;
            let report = oracle_enumerate(length, &r)?;
            print_report(&report, pick_format(cfg, format));
            exit_for(&report, allow_inconclusive)
        }
        Cmd::Constants { base, bits } => {
            let c = dubickas_constants(base, bits.unwrap_or(cfg.bits));
            print_enclosure("P", &c.p);
            print_enclosure("A", &c.a);
            print_enclosure("A'", &c.a_prime);
            print_enclosure("B", &c.b);
            Ok(0)
        }
    }
}

fn exit_for(report: &VerdictReport, allow_inconclusive: bool) -> Result<i32, Error> {
    if report.failed() > 0 {
        Ok(1)
    } else if report.inconclusive_count() > 0 && !allow_inconclusive {
        Ok(3)
    } else {
        Ok(0)
    }
}

fn print_orbit(records: &[OrbitRecord], fmt: Format) {
    match fmt {
        Format::Pretty => {
            for r in records.iter() {
                let (dec, _) = r.frac.decimal_certified(15);
                let flag = if r.wrap_ambiguous { " wrap-ambiguous" } else { "" };
                println!("n={:<6} frac~{}{}", r.n, dec, flag);
            }
        }
        Format::Jsonl => {
            for r in records {
                let line = json!({
                    "n": r.n,
                    "frac_lo": r.frac.lo().to_string(),
                    "frac_hi": r.frac.hi().to_string(),
                    "frac_dec": r.frac.decimal_certified(15).0,
                    "wrap": r.wrap.to_string(),
                    "wrap_ambiguous": r.wrap_ambiguous,
                });
                println!("{line}");
            }
        }
        Format::Csv => {
            // column order is versioned: keep stable
            println!("n,frac_lo,frac_hi,frac_dec,wrap,wrap_ambiguous");
            for r in records {
                println!(
                    "{},{},{},{},{},{}",
                    r.n,
                    r.frac.lo(),
                    r.frac.hi(),
                    r.frac.decimal_certified(15).0,
                    r.wrap,
                    r.wrap_ambiguous
                );
            }
        }
    }
}

fn print_report(report: &VerdictReport, fmt: Format) {
    match fmt {
        Format::Pretty => print!("{report}"),
        Format::Jsonl => {
            for c in &report.checks {
                let line = json!({
                    "suite": report.suite,
                    "id": c.id,
                    "status": match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Inconclusive => "inconclusive",
                    },
                    "detail": c.detail,
                    "witness": c.witness,
                });
                println!("{line}");
            }
        }
        Format::Csv => {
            println!("suite,id,status,detail");
            for c in &report.checks {
                println!(
                    "{},{},{},\"{}\"",
                    report.suite,
                    c.id,
                    c.status,
                    c.detail.replace('"', "'")
                );
            }
        }
    }
}

fn parse_params(params: &str) -> Result<Vec<(String, String)>, Error> {
    let mut out = Vec::new();
    for part in params.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((k, v)) = part.split_once('=') else {
            return Err(Error::Parse {
                offset: 0,
                message: format!("bad --params entry '{part}', expected key=value"),
            });
        };
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn lookup<'a>(kv: &'a [(String, String)], key: &str) -> Option<&'a str> {
    kv.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Resolve the w= shorthand against a slope: Dc, 011Dc, 100Dc, c, 0c, 1c.
fn resolve_word(short: &str, theta: &QuadraticReal) -> Result<WordStream, Error> {
    match short {
        "Dc" => Ok(characteristic(theta)?.double()),
        "011Dc" => c_representative(CVariant::E011, theta),
        "100Dc" => c_representative(CVariant::E100, theta),
        "c" => characteristic(theta),
        "0c" => mechanical(&MechanicalSpec {
            theta: theta.clone(),
            rho: theta.neg(),
            variant: Rounding::Floor,
        }),
        "1c" => mechanical(&MechanicalSpec {
            theta: theta.clone(),
            rho: theta.neg(),
            variant: Rounding::Ceil,
        }),
        other => Err(Error::Parse {
            offset: 0,
            message: format!("unknown word shorthand '{other}' (use --spec for full specs)"),
        }),
    }
}

fn run_suite(
    suite: &str,
    kv: &[(String, String)],
    spec: Option<&str>,
    n: usize,
    bits: u32,
    seed: u64,
) -> Result<VerdictReport, Error> {
    let theta = match lookup(kv, "theta") {
        Some(t) => parse_quadratic(t)?,
        None => sturm_core::exact::golden_slope(),
    };
    let word = |default: &str| -> Result<WordStream, Error> {
        match spec {
            Some(s) => parse_word_spec(s),
            None => resolve_word(lookup(kv, "w").unwrap_or(default), &theta),
        }
    };
    let ratio = || -> Result<Rat, Error> {
        if let Some(r) = lookup(kv, "r") {
            parse_rational(r)
        } else if let Some(b) = lookup(kv, "b") {
            let b: i64 = b
                .parse()
                .map_err(|_| Error::Parse { offset: 0, message: format!("bad base '{b}'") })?;
            Ok(Rat::new(1.into(), b.into()))
        } else {
            Ok(Rat::new(1.into(), 2.into()))
        }
    };
    match suite {
        "negative" => {
            let mut p = ContainmentSuiteParams::new(n, bits);
            if let Some(d) = lookup(kv, "delta") {
                p.width_delta = Some(parse_rational(d)?);
                p.width_checkpoints = vec![n / 100, n / 10, n];
            }
            let (report, _) = suite_negative(&ratio()?, &word("Dc")?, &p)?;
            Ok(report)
        }
        "positive" => {
            let mut p = ContainmentSuiteParams::new(n, bits);
            if let Some(d) = lookup(kv, "delta") {
                p.width_delta = Some(parse_rational(d)?);
                p.width_checkpoints = vec![n / 100, n / 10, n];
            }
            let (report, _) = suite_positive(&ratio()?, &word("c")?, &p)?;
            Ok(report)
        }
        "extremal" => {
            let depth = lookup(kv, "depth").map(|d| d.parse().unwrap_or(10)).unwrap_or(10);
            let (report, _) = suite_extremal(&word("Dc")?, n, depth)?;
            Ok(report)
        }
        "monotone" => {
            let pairs = lookup(kv, "pairs").map(|p| p.parse().unwrap_or(1000)).unwrap_or(1000);
            let len = lookup(kv, "len").map(|p| p.parse().unwrap_or(64)).unwrap_or(64);
            monotone_suite(&ratio()?, pairs, seed, len)
        }
        "dubickas" => {
            let b: i64 = lookup(kv, "b").map(|b| b.parse().unwrap_or(2)).unwrap_or(2);
            let g: i64 = lookup(kv, "g").map(|g| g.parse().unwrap_or(0)).unwrap_or(0);
            let eps = match lookup(kv, "eps") {
                Some(e) => parse_rational(e)?,
                None => Rat::new(1.into(), 1000.into()),
            };
            let w = word("Dc")?;
            let xi = XiSpec::new(g, b, w, BaseSign::Negative)?;
            dubickas_intervals(&xi, bits, &eps)
        }
        other => Err(Error::Parse {
            offset: 0,
            message: format!(
                "unknown suite '{other}' (negative, positive, extremal, monotone, dubickas)"
            ),
        }),
    }
}
