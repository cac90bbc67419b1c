//! Command-line front end. Every command emits one JSON object per line
//! (or a plain table with `--pretty`).
//!
//! Exit codes: 0 success, 1 a verified implication failed, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::arith::PrimeInt;
use crate::cyclotomic::{
    cyclotomic_decomposition, find_prime_ideal, kummer_splitting, power_residue_character, supported_q,
    CyclotomicInt,
};
use crate::error::Error;
use crate::localnorm::{symbol_algebra_norm_trace, SymbolAlgebraQuery};
use crate::padic::{hilbert_symbol, lifting_threshold, qp_solvable_oracle, Place, PointSearch};
use crate::quaternion::{
    congruence_criterion, criterion, is_split_quaternion_q, represent, supported_n, verify_equivalence,
    QuaternionAlgebra,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding the `env_logger` filter.
pub const LOG_ENV: &str = "BRAUER_SPLIT_LOG";

#[derive(Debug, Parser)]
#[command(name = "brauer-split", version, about = "Splitting of quaternion and symbol algebras")]
pub struct Cli {
    /// Human-readable output instead of JSON lines.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert symbol (a, b)_v at v = inf or a prime.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        place: String,
        /// Cross-check with exhaustive search modulo p^k.
        #[arg(long)]
        oracle: bool,
    },
    /// Decide whether H_Q(a, b) splits.
    QuatSplit {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
        /// Search for a point on a x^2 + b y^2 = z^2 up to this height.
        #[arg(long, value_name = "H")]
        witness: Option<String>,
    },
    /// Smallest representation q = x^2 + n y^2.
    Represent { n: String, q: String },
    /// Sweep odd primes q <= B comparing splitting, congruences and representability.
    Verify {
        /// A supported n, or "all".
        n: String,
        #[arg(long, value_name = "B", default_value = "1000")]
        bound: String,
        #[arg(long, value_name = "N", default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Decomposition type of p in Q(xi_q).
    Cyclo { p: String, q: String },
    /// q-th power residue character of alpha at the canonical prime above p.
    PowerChar {
        /// An integer, or comma-separated coordinates in 1, xi, xi^2, ...
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        p: String,
        q: String,
    },
    /// How the prime above p behaves in Q(xi_q, alpha^(1/q)).
    Kummer {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        p: String,
        q: String,
    },
    /// Norm trace for the symbol algebra (alpha, p1^(q l)) over K_p1.
    Norm {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        p: String,
        q: String,
        l: String,
    },
}

/// One line of command output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl ReportRecord {
    fn new(command: &str) -> Self {
        ReportRecord {
            command: command.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            witness: None,
        }
    }

    fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    fn output(mut self, key: &str, value: impl Serialize) -> Self {
        self.outputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("{}\n", self.command);
        let mut section = |title: &str, map: &Map<String, Value>| {
            if map.is_empty() {
                return;
            }
            s.push_str(&format!("  {title}\n"));
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in map {
                s.push_str(&format!("    {k:<width$}  {}\n", plain(v)));
            }
        };
        section("inputs", &self.inputs);
        section("outputs", &self.outputs);
        if let Some(w) = &self.witness {
            s.push_str(&format!("  witness\n    {}\n", plain(w)));
        }
        s
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult<T> = std::result::Result<T, UsageError>;

fn parse_int(name: &str, s: &str, min: i128, max: i128) -> CmdResult<i128> {
    let v: i128 = s
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("{name}: '{s}' is not a decimal integer in range")))?;
    if v < min || v > max {
        return Err(UsageError(format!("{name}: {v} is outside [{min}, {max}]")));
    }
    Ok(v)
}

fn parse_i64(name: &str, s: &str) -> CmdResult<i64> {
    parse_int(name, s, i64::MIN as i128 + 1, i64::MAX as i128).map(|v| v as i64)
}

fn parse_u64(name: &str, s: &str, min: u64) -> CmdResult<u64> {
    parse_int(name, s, min as i128, u64::MAX as i128).map(|v| v as u64)
}

fn parse_prime(name: &str, s: &str) -> CmdResult<PrimeInt> {
    let v = parse_u64(name, s, 2)?;
    PrimeInt::new(v).map_err(|e| UsageError(format!("{name}: {e}")))
}

fn parse_alpha(s: &str, q: PrimeInt) -> CmdResult<CyclotomicInt> {
    let coeffs = s
        .split(',')
        .map(|c| parse_i64("alpha", c))
        .collect::<CmdResult<Vec<i64>>>()?;
    Ok(CyclotomicInt::from_coeffs(q, &coeffs)?)
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            let text = e.render().to_string();
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_OK
            } else {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            };
        }
    };
    match execute(&cli.command) {
        Ok((records, code)) => {
            for r in &records {
                let text = if cli.pretty { r.to_table() } else { r.to_json_line() + "\n" };
                if out.write_all(text.as_bytes()).is_err() {
                    return EXIT_USAGE;
                }
            }
            if let Command::Verify { out: Some(path), .. } = &cli.command {
                if let Err(e) = write_records(path, &records) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn write_records(path: &PathBuf, records: &[ReportRecord]) -> io::Result<()> {
    let mut f = io::BufWriter::new(File::create(path)?);
    for r in records {
        writeln!(f, "{}", r.to_json_line())?;
    }
    f.flush()
}

fn execute(cmd: &Command) -> CmdResult<(Vec<ReportRecord>, i32)> {
    let single = |r: ReportRecord| Ok((vec![r], EXIT_OK));
    match cmd {
        Command::Hilbert { alpha, beta, place, oracle } => single(cmd_hilbert(alpha, beta, place, *oracle)?),
        Command::QuatSplit { alpha, beta, witness } => {
            single(cmd_quat_split(alpha, beta, witness.as_deref())?)
        }
        Command::Represent { n, q } => single(cmd_represent(n, q)?),
        Command::Verify { n, bound, jobs, .. } => cmd_verify(n, bound, *jobs),
        Command::Cyclo { p, q } => single(cmd_cyclo(p, q)?),
        Command::PowerChar { alpha, p, q } => single(cmd_power_char(alpha, p, q)?),
        Command::Kummer { alpha, p, q } => single(cmd_kummer(alpha, p, q)?),
        Command::Norm { alpha, p, q, l } => single(cmd_norm(alpha, p, q, l)?),
    }
}

fn cmd_hilbert(alpha: &str, beta: &str, place: &str, oracle: bool) -> CmdResult<ReportRecord> {
    let a = parse_i64("alpha", alpha)?;
    let b = parse_i64("beta", beta)?;
    let v: Place = place.parse()?;
    let value = hilbert_symbol(a, b, v)?;
    let mut rec = ReportRecord::new("hilbert")
        .input("alpha", a)
        .input("beta", b)
        .input("place", v)
        .output("value", value);
    if oracle {
        let solvable = match v {
            Place::Infinite => a > 0 || b > 0,
            Place::Finite(p) => {
                let k = lifting_threshold(a, b, p)?;
                rec = rec.output("oracle_precision", k);
                qp_solvable_oracle(a, b, p, k)?
            }
        };
        rec = rec.output("oracle", solvable).output("agree", solvable == value.is_plus());
    }
    Ok(rec)
}

fn cmd_quat_split(alpha: &str, beta: &str, witness: Option<&str>) -> CmdResult<ReportRecord> {
    let a = parse_i64("alpha", alpha)?;
    let b = parse_i64("beta", beta)?;
    let algebra = QuaternionAlgebra::new(a, b)?;
    let symbols = algebra.local_symbols();
    let mut rec = ReportRecord::new("quat-split")
        .input("alpha", a)
        .input("beta", b)
        .output("split", is_split_quaternion_q(&algebra))
        .output("symbols", &symbols)
        .output("ramified", symbols.ramified());
    if let Some(h) = witness {
        let h = parse_u64("witness", h, 1)?;
        rec = rec.input("witness_bound", h);
        rec.witness = Some(match algebra.witness(h)? {
            PointSearch::Found(pt) => json!({ "status": "found", "x": pt.x, "y": pt.y, "z": pt.z }),
            PointSearch::Inconclusive { bound } => {
                json!({ "status": "inconclusive within bound", "bound": bound })
            }
        });
    }
    Ok(rec)
}

fn cmd_represent(n: &str, q: &str) -> CmdResult<ReportRecord> {
    let n = parse_u64("n", n, 1)?;
    let q = parse_prime("q", q)?;
    let rep = represent(n, q)?;
    let congruence = if criterion(n).is_ok() && q.is_odd() {
        Some(congruence_criterion(n, q.get())?)
    } else {
        None
    };
    let mut rec = ReportRecord::new("represent")
        .input("n", n)
        .input("q", q)
        .output("representable", rep.is_some())
        .output("congruence", congruence);
    if let Some(r) = rep {
        rec = rec.output("x", r.x).output("y", r.y);
    }
    Ok(rec)
}

fn cmd_verify(n: &str, bound: &str, jobs: usize) -> CmdResult<(Vec<ReportRecord>, i32)> {
    let ns: Vec<u64> = if n == "all" {
        supported_n().collect()
    } else {
        let n = parse_u64("n", n, 1)?;
        criterion(n)?;
        vec![n]
    };
    let bound = parse_u64("bound", bound, 3)?;
    let jobs = jobs.max(1);
    let mut records = Vec::with_capacity(ns.len());
    let mut code = EXIT_OK;
    for n in ns {
        let report = verify_equivalence(n, bound, jobs)?;
        if !report.mandated_ok() {
            code = EXIT_VERIFY_FAILED;
        }
        let mut rec = ReportRecord::new("verify").input("n", n).input("bound", bound);
        if let Value::Object(fields) = to_value(&report) {
            for (k, v) in fields {
                if k != "n" && k != "bound" {
                    rec.outputs.insert(k, v);
                }
            }
        }
        records.push(rec.output("mandated_ok", report.mandated_ok()));
    }
    Ok((records, code))
}

fn cmd_cyclo(p: &str, q: &str) -> CmdResult<ReportRecord> {
    let p = parse_prime("p", p)?;
    let q = parse_prime("q", q)?;
    let d = cyclotomic_decomposition(p, q)?;
    Ok(ReportRecord::new("cyclo")
        .input("p", p)
        .input("q", q)
        .output("e", d.e)
        .output("f", d.f)
        .output("g", d.g))
}

fn cmd_power_char(alpha: &str, p: &str, q: &str) -> CmdResult<ReportRecord> {
    let p = parse_prime("p", p)?;
    let q = supported_q(parse_u64("q", q, 3)?)?;
    let a = parse_alpha(alpha, q)?;
    let ideal = find_prime_ideal(p, q)?;
    let chi = power_residue_character(&a, &ideal)?;
    Ok(ReportRecord::new("power-char")
        .input("alpha", a.coeffs())
        .input("p", p)
        .input("q", q)
        .output("ideal", ideal.g.to_string())
        .output("residue_degree", ideal.residue_degree())
        .output("character", chi))
}

fn cmd_kummer(alpha: &str, p: &str, q: &str) -> CmdResult<ReportRecord> {
    let p = parse_prime("p", p)?;
    let q = supported_q(parse_u64("q", q, 3)?)?;
    let a = parse_alpha(alpha, q)?;
    let class = kummer_splitting(&a, p, q)?;
    Ok(ReportRecord::new("kummer")
        .input("alpha", a.coeffs())
        .input("p", p)
        .input("q", q)
        .output("splitting", class))
}

fn cmd_norm(alpha: &str, p: &str, q: &str, l: &str) -> CmdResult<ReportRecord> {
    let p = parse_prime("p", p)?;
    let q = supported_q(parse_u64("q", q, 3)?)?;
    let a = parse_alpha(alpha, q)?;
    let l = parse_u64("l", l, 1)?;
    let query = SymbolAlgebraQuery::new(a, p, q, l)?;
    let trace = symbol_algebra_norm_trace(&query)?;
    let mut rec = ReportRecord::new("norm")
        .input("alpha", query.alpha.coeffs())
        .input("p", p)
        .input("q", q)
        .input("l", l);
    if let Value::Object(fields) = to_value(&trace) {
        rec.outputs = fields;
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("brauer-split").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn record(args: &[&str]) -> ReportRecord {
        let (code, out, err) = run_str(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(out.trim()).unwrap()
    }

    #[test]
    fn parses_negative_and_out_of_range() {
        assert_eq!(parse_i64("a", "-3").unwrap(), -3);
        assert!(parse_i64("a", "99999999999999999999999").is_err());
        assert!(parse_u64("b", "2", 3).is_err());
        assert!(parse_prime("p", "15").is_err());
    }

    #[test]
    fn record_round_trip() {
        let rec = record(&["quat-split", "-3", "3", "--witness", "10"]);
        let again: ReportRecord = serde_json::from_str(&rec.to_json_line()).unwrap();
        assert_eq!(again, rec);
        assert_eq!(rec.witness.unwrap()["x"], 1);
    }

    #[test]
    fn pretty_output_is_table() {
        let (code, out, _) = run_str(&["--pretty", "hilbert", "1", "1", "inf"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("hilbert\n"));
        assert!(out.contains("value"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["hilbert", "0", "1", "inf"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["hilbert", "1", "1", "9"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "4"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["cyclo", "3", "3"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["kummer", "2", "7", "23"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }
}
