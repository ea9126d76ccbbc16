//! Command-line front end for the `semibrace` crate.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad parameters or usage,
//! 3 I/O error, 4 malformed JSON input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use semibrace::brace::{idempotents, skew_part};
use semibrace::cache::{CensusCache, CACHE_ENV};
use semibrace::classify::{verify_classification_using, Target};
use semibrace::construct::{family_ids, family_instance};
use semibrace::enumerate::{
    enumerate_generic_unpruned, enumerate_generic_with, enumerate_structural_with, Census, EFilter, Enumerator,
    GENERIC_BOUND,
};
use semibrace::iso::isomorphic_with;
use semibrace::nilpotency::{left_series, right_series};
use semibrace::ybe::{check_braid_with, check_properties, solution_from};
use semibrace::{Error, Exec, SemiBrace};

#[derive(Parser, Debug)]
#[command(name = "semibrace", version, about = "Finite left cancellative left semi-braces")]
struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Also write the JSON artifact of the command into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Census cache directory; the SEMIBRACE_CACHE variable takes precedence.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a semi-brace given as JSON.
    Verify { input: PathBuf },
    /// Build every family of a classification list.
    Families(Params),
    /// Enumerate semi-braces of order n up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Keep only |E| ≥ K.
        #[arg(long, conflicts_with = "esylow")]
        emin: Option<usize>,
        /// Keep only semi-braces whose E is a Sylow subgroup.
        #[arg(long)]
        esylow: bool,
        #[arg(long, value_enum)]
        enumerator: Option<EnumeratorArg>,
    },
    /// Check a classification list against the enumerators.
    Classify(Params),
    /// Right and left series and nil orders of a semi-brace.
    Nilpotency { input: PathBuf },
    /// The induced Yang-Baxter solution.
    Solution {
        input: PathBuf,
        #[arg(long)]
        check_braid: bool,
        #[arg(long)]
        properties: bool,
    },
    /// Search for an isomorphism between two semi-braces.
    Iso { a: PathBuf, b: PathBuf },
}

#[derive(Args, Debug)]
struct Params {
    /// pq-noncongruent, pq-congruent, 2p2-E2-cyclic, 2p2-E2-noncyclic, 2p2-Ep2, or 2p2 for all three.
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnumeratorArg {
    Generic,
    Unpruned,
    Structural,
}

/// A command result: JSON artifact, text report, and whether every check held.
struct Report {
    name: &'static str,
    json: Value,
    text: String,
    ok: bool,
}

fn read_brace(path: &Path) -> Result<SemiBrace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SemiBrace::from_json(&text)?)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn census(n: usize, filter: EFilter, enumerator: Enumerator, exec: Exec, cache: Option<&CensusCache>) -> Result<Census> {
    let compute = || match enumerator {
        Enumerator::Generic => enumerate_generic_with(n, filter, GENERIC_BOUND, exec),
        Enumerator::GenericUnpruned => enumerate_generic_unpruned(n, filter, exec),
        Enumerator::Structural => enumerate_structural_with(n, filter, exec),
    };
    Ok(match cache {
        Some(c) => c.get_or_compute(n, filter, enumerator, compute)?.0,
        None => compute()?,
    })
}

fn run(cli: &Cli) -> Result<Report> {
    let exec = if cli.jobs == Some(1) { Exec::Sequential } else { Exec::Parallel };
    let cache = CensusCache::from_env_or(cli.cache.clone());
    Ok(match &cli.command {
        Command::Verify { input } => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            match SemiBrace::from_json(&text) {
                Ok(b) => {
                    let (e, g) = (idempotents(&b)?.len(), skew_part(&b)?.len());
                    Report {
                        name: "verify",
                        json: json!({"valid": true, "n": b.n(), "e_size": e, "g_size": g}),
                        text: format!("valid (n={}, |E|={e}, |G|={g})", b.n()),
                        ok: true,
                    }
                }
                Err(Error::Axiom(d)) => Report {
                    name: "verify",
                    json: json!({"valid": false, "diagnostic": to_value(&d)}),
                    text: format!("invalid: {d}"),
                    ok: false,
                },
                Err(e) => return Err(e.into()),
            }
        }
        Command::Families(params) => {
            let target: Target = params.theorem.parse()?;
            let mut items = Vec::new();
            let mut lines = Vec::new();
            let mut ok = true;
            for t in target.theorems() {
                for id in family_ids(t, params.p, params.q)? {
                    let inst = family_instance(&id)?;
                    let matches = inst.matches_statement()?;
                    ok &= matches;
                    lines.push(format!(
                        "{id}: n={}, |E|={}, |G|={}{}",
                        inst.brace.n(),
                        inst.expected_e.len(),
                        inst.expected_g.len(),
                        if matches { "" } else { " (E or G differs from the statement)" }
                    ));
                    items.push(json!({"id": to_value(&id), "semibrace": to_value(&inst.brace)}));
                }
            }
            Report { name: "families", json: Value::Array(items), text: lines.join("\n"), ok }
        }
        Command::Enumerate { n, emin, esylow, enumerator } => {
            let filter = match (emin, esylow) {
                (_, true) => EFilter::Sylow,
                (Some(k), false) => EFilter::AtLeast(*k),
                (None, false) => EFilter::Any,
            };
            let enumerator = match enumerator {
                Some(EnumeratorArg::Generic) => Enumerator::Generic,
                Some(EnumeratorArg::Unpruned) => Enumerator::GenericUnpruned,
                Some(EnumeratorArg::Structural) => Enumerator::Structural,
                None if *n <= GENERIC_BOUND => Enumerator::Generic,
                None => Enumerator::Structural,
            };
            let c = census(*n, filter, enumerator, exec, cache.as_ref())?;
            let mut text = format!("n={n} filter={filter} enumerator={enumerator}: {} classes", c.len());
            for (i, e) in c.entries.iter().enumerate() {
                let f = &e.fingerprint;
                text.push_str(&format!(
                    "\n  [{i}] |E|={} E ideal={} Ker(λ|E)=G={} ({})",
                    f.e_size, f.e_ideal, f.kernel_is_g, e.provenance
                ));
            }
            Report { name: "enumerate", json: c.to_json(), text, ok: true }
        }
        Command::Classify(params) => {
            let target: Target = params.theorem.parse()?;
            let provider = |n: usize, f: EFilter, e: Enumerator| {
                census(n, f, e, exec, cache.as_ref()).map_err(|err| match err.downcast::<Error>() {
                    Ok(e) => e,
                    Err(other) => Error::Invariant(other.to_string()),
                })
            };
            let r = verify_classification_using(target, params.p, params.q, exec, &provider)?;
            let mut text = r.summary();
            for f in &r.families {
                text.push_str(&format!(
                    "\n  {}: valid={} statement={} |E|={}",
                    f.id, f.valid, f.statement_matches, f.e_size
                ));
            }
            for c in [&r.structural, &r.generic].into_iter().flatten() {
                text.push_str(&format!("\n  {} census: {} entries, match={}", c.enumerator, c.census_size, c.matched));
            }
            Report { name: "classify", ok: r.ok, json: to_value(&r), text }
        }
        Command::Nilpotency { input } => {
            let b = read_brace(input)?;
            let (right, left) = (right_series(&b), left_series(&b));
            let text = format!(
                "right: {} (chain length {}), right_nilpotent={}, right_nil={}\nleft: {} (chain length {}), left_nilpotent={}, left_nil={}",
                right.verdict,
                right.chain.len(),
                right.is_nilpotent(),
                right.is_nil(),
                left.verdict,
                left.chain.len(),
                left.is_nilpotent(),
                left.is_nil()
            );
            let json = json!({
                "right_nilpotent": right.is_nilpotent(),
                "right_nil": right.is_nil(),
                "left_nilpotent": left.is_nilpotent(),
                "left_nil": left.is_nil(),
                "right": to_value(&right),
                "left": to_value(&left),
            });
            Report { name: "nilpotency", json, text, ok: true }
        }
        Command::Solution { input, check_braid, properties } => {
            let b = read_brace(input)?;
            let r = solution_from(&b);
            let mut json = json!({"solution": to_value(&r)});
            let mut lines = vec![format!("solution on {} points", r.n())];
            let mut ok = true;
            if *check_braid {
                let rep = check_braid_with(&r, exec);
                ok &= rep.holds;
                lines.push(match rep.witness {
                    None => "braid relation: holds".to_string(),
                    Some(w) => format!("braid relation: fails at {w:?}"),
                });
                json["braid"] = to_value(&rep);
            }
            if *properties {
                let p = check_properties(&r);
                lines.push(format!(
                    "left_nondegenerate={} nondegenerate={} bijective={} involutive={}",
                    p.left_nondegenerate, p.nondegenerate, p.bijective, p.involutive
                ));
                json["properties"] = to_value(&p);
            }
            Report { name: "solution", json, text: lines.join("\n"), ok }
        }
        Command::Iso { a, b } => {
            let (x, y) = (read_brace(a)?, read_brace(b)?);
            let w = isomorphic_with(&x, &y, exec);
            let text = match &w {
                Some(f) => format!("isomorphic via {f}"),
                None => "not isomorphic".to_string(),
            };
            Report {
                name: "iso",
                json: json!({"isomorphic": w.is_some(), "witness": w.as_ref().map(|f| f.images().to_vec())}),
                text,
                ok: w.is_some(),
            }
        }
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Parameter(_) | Error::NotApplicable(_) | Error::Unsupported(_) => 2,
                Error::Io(_) => 3,
                Error::Json(_) | Error::MalformedTable(_) => 4,
                Error::Axiom(_) | Error::NotAGroup(_) | Error::Invariant(_) => 1,
            };
        }
        if cause.is::<std::io::Error>() {
            return 3;
        }
        if cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    1
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let pretty = serde_json::to_string_pretty(&report.json)?;
    match cli.format {
        Format::Json => println!("{pretty}"),
        Format::Text => println!("{}", report.text),
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(format!("{}.json", report.name));
        fs::write(&path, pretty + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(k) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    if std::env::var_os(CACHE_ENV).is_some() && cli.cache.is_some() {
        eprintln!("note: {CACHE_ENV} overrides --cache");
    }
    let result = run(&cli).and_then(|r| emit(&cli, &r).map(|_| r.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
