//! The `interlock` command line.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage
//! or input errors. Output is compact JSON by default; numbers that may
//! outgrow machine integers are decimal strings. Timings are left out unless
//! `--timing` is given, so identical requests print identical bytes.

pub mod cache;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{theorem1_bounds, theorem3_bounds, verify_suite, BoundReport, Suite};
use crate::codec::{self, CodeWord, Scheme};
use crate::families::{
    block_invariant_family, encapsulating_construction, greedy_family, triple_block_family, FamilyReport,
};
use crate::oracle::{self, ExactResult, Quantity};
use crate::perm::Permutation;
use crate::relations::{find_witness, Containment, RelationKind};
use crate::structure::{functional_graph, monotone_runs, spans_laminar};
use cache::{Cache, CacheKey};

#[derive(Debug, Parser)]
#[command(name = "interlock", version, about = "Interlocking difference relations on permutations")]
pub struct Cli {
    /// Worker threads for counters and clique search.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Include wall-clock timings in JSON output.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelationArg {
    Disjoint,
    Encapsulating,
    Parallel,
    Reversing,
}

impl From<RelationArg> for RelationKind {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::Disjoint => RelationKind::Disjoint,
            RelationArg::Encapsulating => RelationKind::Encapsulating,
            RelationArg::Parallel => RelationKind::Parallel,
            RelationArg::Reversing => RelationKind::Reversing,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ContainmentArg {
    Strict,
    Weak,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    GreedyDisjoint,
    GreedyParallel,
    GreedyEncapsulating,
    GreedyReversing,
    TripleBlock,
    BlockInvariant,
    Theorem2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Quinary,
    Parallel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma1,
    Lemma2,
    Thm1,
    Thm2,
    Thm3,
    Relations,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a relation between two permutations and print the witness.
    Check {
        #[arg(long, value_enum)]
        relation: RelationArg,
        #[arg(long)]
        sigma: Permutation,
        #[arg(long)]
        tau: Permutation,
        /// Endpoint strictness for the encapsulating relation.
        #[arg(long, value_enum, default_value_t = ContainmentArg::Strict)]
        containment: ContainmentArg,
    },
    /// Exact G(n) or H(n) by enumeration.
    Count {
        #[arg(long, value_parser = parse_quantity)]
        quantity: Quantity,
        #[arg(long)]
        n: usize,
    },
    /// Exact M(n), N(n), P(n) or F(n) by clique search.
    Exact {
        #[arg(long, value_parser = parse_quantity)]
        quantity: Quantity,
        #[arg(long)]
        n: usize,
        /// Wall-clock budget, e.g. `600s` or `10m`.
        #[arg(long, value_parser = parse_budget)]
        budget: Option<Duration>,
    },
    /// Build a family and print (or write) it as JSON.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a permutation or decode a code word.
    Codec {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, conflicts_with = "decode", required_unless_present = "decode")]
        encode: Option<Permutation>,
        #[arg(long)]
        decode: Option<String>,
    },
    /// Dump the functional digraph: edges, cycles, runs and spans.
    Structure {
        #[arg(long)]
        perm: Permutation,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, value_parser = parse_budget, default_value = "1200s")]
        budget: Duration,
    },
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    s.parse().map_err(|e: oracle::OracleError| e.to_string())
}

/// `600s`, `10m`, `1h` or a bare number of seconds.
pub fn parse_budget(s: &str) -> Result<Duration, String> {
    let s = s.trim();
    let (num, scale) = match s.char_indices().last() {
        Some((i, 's')) => (&s[..i], 1),
        Some((i, 'm')) => (&s[..i], 60),
        Some((i, 'h')) => (&s[..i], 3600),
        _ => (s, 1),
    };
    num.parse::<u64>()
        .map(|v| Duration::from_secs(v * scale))
        .map_err(|_| format!("invalid budget {s:?}; expected e.g. 600s"))
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(msg: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: msg.to_string(),
    }
}

/// Parses `argv` and runs the command, writing documents to `out` and
/// diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let threads = cli.threads.unwrap_or_else(rayon::current_num_threads);
    let result = oracle::with_workers(threads, || execute(&cli));
    match result {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            code
        }
        Err(f) => {
            eprintln!("interlock: {}", f.message);
            f.code
        }
    }
}

fn json_line(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let cache = if cli.no_cache { None } else { Cache::from_env() };
    let csv_only_for = |what: &str| {
        if cli.format == Format::Csv {
            Err(usage(format!("--format csv is not available for {what}")))
        } else {
            Ok(())
        }
    };
    match &cli.command {
        Command::Check {
            relation,
            sigma,
            tau,
            containment,
        } => {
            csv_only_for("check")?;
            let containment = match containment {
                ContainmentArg::Strict => Containment::Strict,
                ContainmentArg::Weak => Containment::Weak,
            };
            let w = find_witness((*relation).into(), containment, sigma, tau).map_err(usage)?;
            Ok((json_line(&json!({"related": w.is_some(), "witness": w})), 0))
        }
        Command::Count { quantity, n } => {
            if !quantity.is_count() {
                return Err(usage(format!("count takes G or H, not {quantity}")));
            }
            let r = cached_result(cache.as_ref(), "count", *quantity, *n, None)?;
            Ok((render_result(cli, &r), 0))
        }
        Command::Exact { quantity, n, budget } => {
            if quantity.is_count() {
                return Err(usage(format!("exact takes M, N, P or F, not {quantity}")));
            }
            let r = cached_result(cache.as_ref(), "exact", *quantity, *n, *budget)?;
            Ok((render_result(cli, &r), 0))
        }
        Command::Construct { family, n, k, out } => {
            csv_only_for("construct")?;
            let need_k = || k.ok_or_else(|| usage("--k is required for this family"));
            let name = family.to_possible_value().expect("named variant").get_name().to_string();
            let key = CacheKey::new("construct", *n, json!({"family": name, "k": k}));
            let hit = cache.as_ref().and_then(|c| c.lookup(&key));
            let report: Value = match hit {
                Some(v) => v,
                None => {
                    let built: FamilyReport = match family {
                        FamilyArg::GreedyDisjoint => greedy_family(RelationKind::Disjoint, *n),
                        FamilyArg::GreedyParallel => greedy_family(RelationKind::Parallel, *n),
                        FamilyArg::GreedyEncapsulating => greedy_family(RelationKind::Encapsulating, *n),
                        FamilyArg::GreedyReversing => greedy_family(RelationKind::Reversing, *n),
                        FamilyArg::TripleBlock => triple_block_family(*n),
                        FamilyArg::BlockInvariant => block_invariant_family(*n, need_k()?),
                        FamilyArg::Theorem2 => encapsulating_construction(*n, need_k()?),
                    }
                    .map_err(usage)?;
                    let v = serde_json::to_value(&built).expect("serializable");
                    if let Some(c) = &cache {
                        if let Err(e) = c.append(key, v.clone()) {
                            log::warn!("could not write cache {}: {e}", c.path().display());
                        }
                    }
                    v
                }
            };
            let doc = json_line(&report);
            match out {
                Some(path) => {
                    std::fs::write(path, &doc).map_err(|e| Failure {
                        code: 1,
                        message: format!("{}: {e}", path.display()),
                    })?;
                    let summary = json!({
                        "out": path.display().to_string(),
                        "relation": report["relation"],
                        "n": report["n"],
                        "size": report["size"],
                    });
                    Ok((json_line(&summary), 0))
                }
                None => Ok((doc, 0)),
            }
        }
        Command::Codec { scheme, encode, decode } => {
            csv_only_for("codec")?;
            let scheme = match scheme {
                SchemeArg::Quinary => Scheme::Quinary,
                SchemeArg::Parallel => Scheme::Parallel,
            };
            if let Some(p) = encode {
                let code = codec::encode(scheme, p).map_err(usage)?;
                Ok((json_line(&json!({"code": code.as_str()})), 0))
            } else {
                let text = decode.as_deref().unwrap_or_default();
                let word = CodeWord::new(scheme, text).map_err(usage)?;
                let p = codec::decode(&word).map_err(usage)?;
                Ok((json_line(&json!({"perm": p})), 0))
            }
        }
        Command::Structure { perm } => {
            csv_only_for("structure")?;
            let cs = perm.cycle_decomposition();
            let runs: Vec<Value> = cs
                .cycles
                .iter()
                .map(|c| {
                    let r = monotone_runs(perm, c).expect("cycle of perm");
                    json!({"cycle": c, "runs": r.runs, "is_simple": r.is_simple})
                })
                .collect();
            let doc = json!({
                "perm": perm,
                "edges": functional_graph(perm).edges,
                "fixed_points": cs.fixed_points,
                "cycles": runs,
                "spans": cs.spans,
                "spans_laminar": spans_laminar(perm),
                "interleaved_pair": crate::structure::interleaved_pair(perm),
            });
            Ok((json_line(&doc), 0))
        }
        Command::Verify { suite, max_n, budget } => {
            let suite = match suite {
                SuiteArg::Lemma1 => Suite::Lemma1,
                SuiteArg::Lemma2 => Suite::Lemma2,
                SuiteArg::Thm1 => Suite::Thm1,
                SuiteArg::Thm2 => Suite::Thm2,
                SuiteArg::Thm3 => Suite::Thm3,
                SuiteArg::Relations => Suite::Relations,
                SuiteArg::All => Suite::All,
            };
            let report = verify_suite(suite, *max_n, *budget);
            let code = if report.passed() { 0 } else { 1 };
            Ok((render_report(cli, report), code))
        }
    }
}

fn cached_result(
    cache: Option<&Cache>,
    command: &str,
    quantity: Quantity,
    n: usize,
    budget: Option<Duration>,
) -> Result<ExactResult, Failure> {
    let key = CacheKey::new(command, n, json!({"quantity": quantity}));
    if let Some(hit) = cache.and_then(|c| c.lookup(&key)) {
        match serde_json::from_value::<ExactResult>(hit) {
            Ok(r) => return Ok(r),
            Err(e) => log::warn!("ignoring unreadable cached result ({e})"),
        }
    }
    let r = oracle::compute(quantity, n, budget).map_err(usage)?;
    if r.status == oracle::Status::Exact {
        if let Some(c) = cache {
            let value = serde_json::to_value(&r).expect("serializable");
            if let Err(e) = c.append(key, value) {
                log::warn!("could not write cache {}: {e}", c.path().display());
            }
        }
    }
    Ok(r)
}

fn bounds_for(r: &ExactResult) -> (String, String) {
    use crate::arith::{factorial, pow};
    let n = r.n;
    match r.quantity {
        Quantity::G => (String::new(), pow(5, n).to_string()),
        Quantity::H => (String::new(), pow(6, n).to_string()),
        Quantity::M => {
            let (lo, hi) = theorem1_bounds(n);
            (lo.to_string(), hi.to_string())
        }
        Quantity::P => {
            let (lo, hi) = theorem3_bounds(n);
            (lo.to_string(), hi.to_string())
        }
        Quantity::N | Quantity::F => ("1".into(), factorial(n).to_string()),
    }
}

fn render_result(cli: &Cli, r: &ExactResult) -> String {
    if cli.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let (lo, hi) = bounds_for(r);
        let status = serde_json::to_value(r.status).unwrap();
        w.write_record(["quantity", "n", "value", "lower_bound", "upper_bound", "status", "elapsed_ms"])
            .unwrap();
        w.write_record([
            r.quantity.to_string(),
            r.n.to_string(),
            r.value.to_string(),
            lo,
            hi,
            status.as_str().unwrap().to_string(),
            r.elapsed.as_millis().to_string(),
        ])
        .unwrap();
        return String::from_utf8(w.into_inner().unwrap()).unwrap();
    }
    let mut doc = json!({
        "quantity": r.quantity,
        "n": r.n,
        "value": r.value.to_string(),
    });
    if !r.quantity.is_count() {
        doc["status"] = serde_json::to_value(r.status).unwrap();
        doc["family"] = serde_json::to_value(&r.witness_family).unwrap();
    }
    if cli.timing {
        doc["elapsed_ms"] = json!(r.elapsed.as_millis() as u64);
    }
    json_line(&doc)
}

fn render_report(cli: &Cli, report: BoundReport) -> String {
    let report = if cli.timing { report } else { report.without_timings() };
    if cli.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "description", "left", "comparator", "right", "verdict", "elapsed_ms"])
            .unwrap();
        for c in &report.checks {
            let verdict = serde_json::to_value(c.verdict).unwrap();
            w.write_record([
                c.id.as_str(),
                c.description.as_str(),
                c.left.as_str(),
                c.comparator.as_str(),
                c.right.as_str(),
                verdict.as_str().unwrap(),
                &c.elapsed_ms.map(|e| e.to_string()).unwrap_or_default(),
            ])
            .unwrap();
        }
        return String::from_utf8(w.into_inner().unwrap()).unwrap();
    }
    json_line(&report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_parse() {
        assert_eq!(parse_budget("600s"), Ok(Duration::from_secs(600)));
        assert_eq!(parse_budget("10m"), Ok(Duration::from_secs(600)));
        assert_eq!(parse_budget("5"), Ok(Duration::from_secs(5)));
        assert!(parse_budget("fast").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        assert_eq!(run(["interlock", "frobnicate"], &mut out), 2);
        assert_eq!(
            run(["interlock", "check", "--relation", "disjoint", "--sigma", "1,1", "--tau", "1,2"], &mut out),
            2
        );
        assert_eq!(
            run(["interlock", "--no-cache", "count", "--quantity", "M", "--n", "3"], &mut out),
            2
        );
        assert!(out.is_empty());
    }
}
