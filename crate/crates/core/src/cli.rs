//! The `richpow` command line. Kept in the library so tests can drive it
//! without spawning processes.
//!
//! Exit codes: 0 when the property holds or the task finished, 1 when a
//! counterexample was found, 2 on parse or precondition failures.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::eertree::{is_rich, stream_richness, RichnessReport};
use crate::error::{Error, Result};
use crate::fixed_point::fixed_point_prefix;
use crate::manifest::RunManifest;
use crate::morphism::Morphism;
use crate::power::{relabel, scan_word, PowerKind, ScanOptions, ScanReport};
use crate::search::{run_search, SearchControl, SearchSpec};
use crate::templates::{decide_additive_power_free, DecisionCertificate, DecisionOverrides, Verdict, Witness};
use crate::verify::{verify_paper, Status, VerifyOptions};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Parser)]
#[command(name = "richpow", version, about = "Additive and abelian powers in rich words and morphic fixed points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a prefix of the fixed point of a morphism.
    Generate {
        /// Rules such as "0->00001 1->01101".
        morphism: String,
        #[arg(long)]
        seed: Letter,
        #[arg(long)]
        length: usize,
        /// Write to this file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Scan a fixed-point prefix (or a word) for k-powers.
    Scan {
        morphism: Option<String>,
        #[arg(long, requires = "morphism")]
        seed: Option<Letter>,
        #[arg(long, requires = "morphism")]
        length: Option<usize>,
        /// Scan this literal word instead of a fixed point.
        #[arg(long, conflicts_with = "morphism")]
        word: Option<String>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "additive")]
        kind: PowerKind,
        #[arg(long)]
        max_period: Option<usize>,
        #[arg(long, default_value_t = 64)]
        max_occurrences: usize,
        /// Replacement letters for the alphabet, in order: "0,1,3" maps 0->0, 1->1, 2->3.
        #[arg(long)]
        relabel: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check palindromic richness of a fixed-point prefix or a word.
    Rich {
        morphism: Option<String>,
        #[arg(long, requires = "morphism")]
        seed: Option<Letter>,
        #[arg(long, requires = "morphism")]
        length: Option<usize>,
        #[arg(long, conflicts_with = "morphism")]
        word: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide additive k-power-freeness of a fixed point.
    Decide {
        morphism: String,
        #[arg(long)]
        seed: Letter,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        initial_prefix_length: Option<usize>,
        #[arg(long)]
        initial_max_period: Option<usize>,
        #[arg(long)]
        final_prefix_length: Option<usize>,
        #[arg(long)]
        final_max_instance_length: Option<usize>,
        #[arg(long)]
        ancestor_cap: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Find the longest word avoiding k-powers, optionally rich.
    Search {
        #[arg(long)]
        alphabet: Alphabet,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "abelian")]
        kind: PowerKind,
        #[arg(long)]
        rich: bool,
        /// Explore every letter permutation instead of canonical words only.
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        depth_cap: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Depth at which the tree is cut into independent tasks.
        #[arg(long)]
        split_depth: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Seconds between periodic checkpoint writes.
        #[arg(long, requires = "checkpoint")]
        checkpoint_interval: Option<u64>,
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Suspend after about this many nodes (needs --checkpoint to continue later).
        #[arg(long)]
        node_budget: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reproduce the published results.
    VerifyPaper {
        /// Skip the long binary search.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Human-readable output instead of JSON.
    #[arg(long)]
    text: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "richpow: {e}");
            2
        }
    }
}

fn parse_morphism(text: &str, manifest: &mut RunManifest) -> Result<Morphism> {
    manifest.input("morphism", text.as_bytes());
    let f: Morphism = text.parse()?;
    manifest.param("morphism", &f);
    Ok(f)
}

fn emit<T: Serialize>(out: &mut dyn Write, report: &T, mut manifest: RunManifest, text: Option<String>) -> Result<()> {
    manifest.finish();
    match text {
        Some(t) => writeln!(out, "{t}")?,
        None => {
            let mut v = serde_json::to_value(report).map_err(|e| Error::State(e.to_string()))?;
            if let Value::Object(map) = &mut v {
                map.insert("manifest".into(), serde_json::to_value(&manifest).map_err(|e| Error::State(e.to_string()))?);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(|e| Error::State(e.to_string()))?)?;
        }
    }
    Ok(())
}

/// Input of `scan` and `rich`: a fixed-point prefix with the morphism
/// domain, or a literal word with its own letters.
fn subject(
    morphism: Option<String>,
    seed: Option<Letter>,
    length: Option<usize>,
    word: Option<String>,
    manifest: &mut RunManifest,
) -> Result<(Word, Vec<Letter>)> {
    match (morphism, word) {
        (Some(m), None) => {
            let f = parse_morphism(&m, manifest)?;
            let seed = seed.ok_or_else(|| Error::InvalidParameter("--seed is required with a morphism".into()))?;
            let n = length.ok_or_else(|| Error::InvalidParameter("--length is required with a morphism".into()))?;
            manifest.param("seed", seed).param("length", n);
            Ok((fixed_point_prefix(&f, seed, n)?, f.domain().letters().to_vec()))
        }
        (None, Some(w)) => {
            manifest.input("word", w.as_bytes());
            let w: Word = w.parse()?;
            let letters = w.alphabet().map(|a| a.letters().to_vec()).unwrap_or_default();
            Ok((w, letters))
        }
        _ => Err(Error::InvalidParameter("give either a morphism or --word".into())),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate { morphism, seed, length, output } => {
            let f: Morphism = morphism.parse()?;
            let w = fixed_point_prefix(&f, seed, length)?;
            match output {
                Some(path) => std::fs::write(path, format!("{w}\n"))?,
                None => writeln!(out, "{w}")?,
            }
            Ok(0)
        }
        Command::Scan { morphism, seed, length, word, k, kind, max_period, max_occurrences, relabel: map, jobs, out: o } => {
            let mut manifest = RunManifest::start("scan");
            let (mut w, domain) = subject(morphism, seed, length, word, &mut manifest)?;
            if let Some(targets) = &map {
                let targets: Vec<Letter> = targets.parse::<Word>()?.into_letters();
                if targets.len() < domain.len() {
                    return Err(Error::InvalidParameter(format!(
                        "--relabel needs {} letters, got {}",
                        domain.len(),
                        targets.len()
                    )));
                }
                let mapping: BTreeMap<Letter, Letter> = domain.into_iter().zip(targets).collect();
                w = relabel(&w, &mapping)?;
                manifest.param("relabel", map.as_deref().unwrap_or_default());
            }
            manifest.param("k", k).param("kind", kind);
            let opts = ScanOptions { max_period, max_occurrences, jobs };
            let report = scan_word(&w, k, kind, opts)?;
            let code = if report.is_free() { 0 } else { 1 };
            emit(out, &report, manifest, o.text.then(|| scan_text(&report)))?;
            Ok(code)
        }
        Command::Rich { morphism, seed, length, word, out: o } => {
            let mut manifest = RunManifest::start("rich");
            let report = match (&morphism, seed, length) {
                (Some(m), Some(a), Some(n)) => {
                    let f = parse_morphism(m, &mut manifest)?;
                    manifest.param("seed", a).param("length", n);
                    stream_richness(&f, a, n)?
                }
                _ => is_rich(&subject(morphism, seed, length, word, &mut manifest)?.0),
            };
            let code = if report.rich { 0 } else { 1 };
            emit(out, &report, manifest, o.text.then(|| rich_text(&report)))?;
            Ok(code)
        }
        Command::Decide {
            morphism,
            seed,
            k,
            initial_prefix_length,
            initial_max_period,
            final_prefix_length,
            final_max_instance_length,
            ancestor_cap,
            out: o,
        } => {
            let mut manifest = RunManifest::start("decide");
            let f = parse_morphism(&morphism, &mut manifest)?;
            manifest.param("seed", seed).param("k", k);
            let overrides = DecisionOverrides {
                initial_prefix_length,
                initial_max_period,
                final_prefix_length,
                final_max_instance_length,
                ancestor_cap,
            };
            let cert = decide_additive_power_free(&f, seed, k, overrides)?;
            let code = match cert.verdict {
                Verdict::Free => 0,
                Verdict::PowerFound => 1,
                Verdict::Inconclusive => 2,
            };
            emit(out, &cert, manifest, o.text.then(|| decide_text(&cert)))?;
            Ok(code)
        }
        Command::Search {
            alphabet,
            k,
            kind,
            rich,
            no_symmetry,
            depth_cap,
            jobs,
            split_depth,
            checkpoint,
            checkpoint_interval,
            resume,
            node_budget,
            out: o,
        } => {
            let mut manifest = RunManifest::start("search");
            let mut spec = SearchSpec::new(alphabet, k, kind, rich)
                .with_symmetry_reduction(!no_symmetry)
                .with_depth_cap(depth_cap);
            spec.checkpoint_interval = checkpoint_interval;
            manifest.param("jobs", jobs);
            if let Some(p) = &resume {
                manifest.input("resume", &std::fs::read(p)?);
            }
            let control = SearchControl {
                jobs,
                split_depth: split_depth.unwrap_or(if jobs > 1 { 12 } else { 0 }),
                checkpoint,
                resume,
                node_budget,
            };
            manifest.param("split_depth", control.split_depth);
            let outcome = run_search(&spec, &control)?;
            #[derive(Serialize)]
            struct Report<'a> {
                #[serde(flatten)]
                result: &'a crate::search::SearchResult,
                suspended: bool,
            }
            let text = o.text.then(|| {
                let r = &outcome.result;
                let state = if outcome.suspended {
                    "suspended"
                } else if r.exhausted {
                    "exhausted"
                } else {
                    "depth cap reached"
                };
                format!("max_length {} ({state}), {} nodes\nwitness {}", r.max_length, r.nodes_visited, r.witness)
            });
            emit(out, &Report { result: &outcome.result, suspended: outcome.suspended }, manifest, text)?;
            Ok(0)
        }
        Command::VerifyPaper { quick, jobs, only, out: o } => {
            let mut manifest = RunManifest::start("verify-paper");
            manifest.param("quick", quick).param("jobs", jobs);
            let opts = VerifyOptions { quick, jobs, only, ..Default::default() };
            let reports = verify_paper(&opts, |r| {
                if o.text {
                    let _ = writeln!(out, "{}", r.line());
                }
            });
            let failed: Vec<u8> = reports.iter().filter(|r| r.status == Status::Fail).map(|r| r.id).collect();
            if o.text {
                if !failed.is_empty() {
                    writeln!(out, "failed criteria: {failed:?}")?;
                }
            } else {
                #[derive(Serialize)]
                struct Summary<'a> {
                    criteria: &'a [crate::verify::CriterionReport],
                    failed: &'a [u8],
                }
                emit(out, &Summary { criteria: &reports, failed: &failed }, manifest, None)?;
            }
            Ok(if failed.is_empty() { 0 } else { 1 })
        }
    }
}

fn scan_text(r: &ScanReport) -> String {
    let mut s = format!(
        "{} {}-powers in a word of length {} (periods <= {}): ",
        r.kind, r.k, r.scanned_length, r.max_period
    );
    if r.occurrences.is_empty() {
        s.push_str("none");
    } else {
        s.push_str(&format!("{} found{}", r.occurrences.len(), if r.exhaustive { "" } else { " (capped)" }));
        for o in &r.occurrences {
            s.push_str(&format!("\n  start {} period {}", o.start, o.period));
        }
    }
    s
}

fn rich_text(r: &RichnessReport) -> String {
    match r.first_failure {
        None => format!("rich: all {} prefixes add a palindrome ({} palindromes)", r.length, r.palindrome_count),
        Some(n) => format!(
            "not rich: the prefix of length {n} adds no palindrome ({} palindromes in length {})",
            r.palindrome_count, r.length
        ),
    }
}

fn decide_text(c: &DecisionCertificate) -> String {
    let b = &c.bounds;
    let mut s = format!(
        "{}: additive {}-powers in the fixed point of {} from {}\n\
         ancestors {} after {} iterations\n\
         initial check: prefix {} periods <= {} (certified {} / {})\n\
         final check: prefix {} instances <= {}",
        c.verdict,
        c.k,
        c.morphism,
        c.seed,
        c.ancestor_count,
        c.closure_iterations,
        b.used.initial_prefix_length,
        b.used.initial_max_period,
        b.certified_initial_prefix_length,
        b.certified_initial_max_period,
        b.used.final_prefix_length,
        b.used.final_max_instance_length,
    );
    if let (Some(l), Some(t)) = (b.certified_final_prefix_length, b.certified_final_max_instance_length) {
        s.push_str(&format!(" (certified {l} / {t})"));
    }
    match &c.witness {
        Some(Witness::Power { occurrence, .. }) => {
            s.push_str(&format!("\nwitness: start {} period {}", occurrence.start, occurrence.period))
        }
        Some(Witness::Ancestor { hit, start, period, .. }) => s.push_str(&format!(
            "\nwitness: ancestor {} at {}, descending to start {start} period {period}",
            hit.template, hit.instance.start
        )),
        None => {}
    }
    s
}
