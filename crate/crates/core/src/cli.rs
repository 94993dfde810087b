//! Command-line front end. [`run`] parses arguments, writes to the given
//! streams and returns the exit status: 0 on success, 1 when a check finds
//! violations, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::equivalence::{random_indexed, round_trip_report, to_fibred, to_indexed, NuSet, RandomSpec};
use crate::indexed::{check_all_coherences, validate_indexed, Enumerator, IndexedNuSet};
use crate::parametricity::{
    flatten, iterate_types, normalize, parse_term, parse_type, print_type, translate, TelescopeReport, TypeExpr,
};
use crate::presheaf::TruncatedPresheaf;
use crate::shapes::{geometric_cells, geometric_inventory, standard_shape, to_dot, word_label};
use crate::stream::extend_singleton;
use crate::word::{compose, hom_count, hom_enumerate, Arity, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nuset", version, about = "Compute with ν-sets: words, shapes, indexed sets and parametricity")]
pub struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the words of Hom(p, n).
    Hom {
        #[arg(long, default_value_t = 2)]
        nu: usize,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Compose two words: G after F. Quote words containing `*`.
    Compose {
        #[arg(long, default_value_t = 2)]
        nu: usize,
        g: String,
        f: String,
    },
    /// Cells of the standard shape of n.
    ///
    /// For --nu 1, -n is the representing object, whose simplex has geometric
    /// dimension n-1. Pass --geometric to give the geometric dimension instead.
    Shape {
        #[arg(long, default_value_t = 2)]
        nu: usize,
        #[arg(short)]
        n: usize,
        /// Read -n as a geometric dimension (only differs for --nu 1).
        #[arg(long)]
        geometric: bool,
        /// Graphviz output.
        #[arg(long, conflicts_with = "emit")]
        dot: bool,
        /// Print the shape as a presheaf file.
        #[arg(long)]
        emit: bool,
    },
    /// Check a presheaf file's functor laws or an indexed file's totality and
    /// coherence.
    Validate { file: PathBuf },
    /// Convert between the presheaf and indexed file formats.
    Convert {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every coherence check on a set (either format).
    CohCheck { file: PathBuf },
    /// Parametricity translation of a type read from FILE (or stdin), or the
    /// iterated translation with --steps.
    Param {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        nu: usize,
        /// Type of X_steps in the iterated translation.
        #[arg(long, conflicts_with = "file")]
        steps: Option<usize>,
        /// Apply the translation to this term.
        #[arg(long)]
        at: Option<String>,
    },
    /// Extend an indexed set with singleton fibres up to truncation LEVELS.
    Extend {
        file: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Round-trip a set through the other presentation.
    Roundtrip {
        #[arg(required_unless_present = "seed")]
        file: Option<PathBuf>,
        /// Use a random indexed set instead of a file.
        #[arg(long, conflicts_with = "file")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2)]
        nu: usize,
        #[arg(long, default_value_t = 2)]
        trunc: usize,
    },
}

/// A failure that is not a check result.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Outcome = Result<bool, Usage>;

struct Io<'a> {
    out: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<(), Usage> {
        writeln!(self.out, "{}", s.as_ref())?;
        Ok(())
    }

    fn value(&mut self, v: &Value) -> Result<(), Usage> {
        let text = serde_json::to_string_pretty(v)?;
        self.line(text)
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, json: cli.json };
    match dispatch(cli.command, &mut io) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VIOLATIONS,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn arity(nu: usize) -> Result<Arity, Usage> {
    Ok(Arity::new(nu)?)
}

fn read_input(path: &Path) -> Result<String, Usage> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

enum Loaded {
    Fibred(TruncatedPresheaf),
    Indexed(IndexedNuSet),
}

/// Indexed files have `families`, presheaf files `carriers` and `faces`.
fn load(path: &Path) -> Result<Loaded, Usage> {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let located = |e: crate::error::FormatError| Usage(format!("{}: {e}", path.display()));
    if value.get("families").is_some() {
        Ok(Loaded::Indexed(IndexedNuSet::from_json_str(&text).map_err(located)?))
    } else {
        Ok(Loaded::Fibred(TruncatedPresheaf::from_json_str(&text).map_err(located)?))
    }
}

fn load_indexed(path: &Path) -> Result<IndexedNuSet, Usage> {
    match load(path)? {
        Loaded::Indexed(s) => Ok(s),
        Loaded::Fibred(p) => Ok(to_indexed(&p)?),
    }
}

fn write_output(io: &mut Io<'_>, output: Option<&Path>, text: &str) -> Result<(), Usage> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display()))),
        None => {
            write!(io.out, "{text}")?;
            Ok(())
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Outcome {
    match command {
        Command::Hom { nu, p, n, count } => hom(io, arity(nu)?, p, n, count),
        Command::Compose { nu, g, f } => {
            let nu = arity(nu)?;
            let r = compose(&Word::parse(nu, &g)?, &Word::parse(nu, &f)?)?;
            if io.json {
                io.value(&json!({ "nu": nu.get(), "g": g, "f": f, "result": word_label(&r) }))?;
            } else {
                io.line(word_label(&r))?;
            }
            Ok(true)
        }
        Command::Shape { nu, n, geometric, dot, emit } => shape(io, arity(nu)?, n, geometric, dot, emit),
        Command::Validate { file } => validate(io, &file),
        Command::Convert { file, output } => {
            let text = match load(&file)? {
                Loaded::Fibred(p) => {
                    let laws = p.check_functor_laws();
                    if !laws.is_empty() {
                        report_laws(io, &laws)?;
                        return Ok(false);
                    }
                    to_indexed(&p)?.to_json_string()
                }
                Loaded::Indexed(s) => to_fibred(&s)?.to_json_string(),
            };
            write_output(io, output.as_deref(), &text)?;
            Ok(true)
        }
        Command::CohCheck { file } => coh_check(io, &file),
        Command::Param { file, nu, steps, at } => param(io, arity(nu)?, file.as_deref(), steps, at.as_deref()),
        Command::Extend { file, levels, output } => {
            let stream = extend_singleton(load_indexed(&file)?)?;
            let set = stream.take(levels)?;
            write_output(io, output.as_deref(), &set.to_json_string())?;
            Ok(true)
        }
        Command::Roundtrip { file, seed, nu, trunc } => roundtrip(io, file.as_deref(), seed, arity(nu)?, trunc),
    }
}

fn hom(io: &mut Io<'_>, nu: Arity, p: usize, n: usize, count: bool) -> Outcome {
    if count {
        let c = hom_count(nu, p, n);
        if io.json {
            io.value(&json!({ "nu": nu.get(), "p": p, "n": n, "count": c.to_string() }))?;
        } else {
            io.line(c.to_string())?;
        }
        return Ok(true);
    }
    let words: Vec<String> = hom_enumerate(nu, p, n).iter().map(word_label).collect();
    if io.json {
        io.value(&json!({ "nu": nu.get(), "p": p, "n": n, "count": words.len(), "words": words }))?;
    } else {
        for w in words {
            io.line(w)?;
        }
    }
    Ok(true)
}

fn shape(io: &mut Io<'_>, nu: Arity, n: usize, geometric: bool, dot: bool, emit: bool) -> Outcome {
    let object = if geometric && nu == Arity::SIMPLICIAL { n + 1 } else { n };
    let p = standard_shape(nu, object);
    if dot {
        write!(io.out, "{}", to_dot(&p))?;
    } else if emit {
        write!(io.out, "{}", p.to_json_string())?;
    } else {
        let inventory = geometric_inventory(&p);
        let cells = geometric_cells(&p);
        if io.json {
            io.value(&json!({
                "nu": nu.get(),
                "object": object,
                "geometric_dimension": inventory.len().saturating_sub(1),
                "inventory": inventory,
                "cells": cells,
            }))?;
        } else {
            for (k, labels) in cells.iter().enumerate() {
                io.line(format!("{k} ({}): {}", labels.len(), labels.join(" ")))?;
            }
        }
    }
    Ok(true)
}

fn report_laws(io: &mut Io<'_>, laws: &crate::presheaf::LawReport) -> Result<(), Usage> {
    if io.json {
        io.value(&json!({ "kind": "presheaf", "valid": laws.is_empty(), "violations": laws.violations }))
    } else if laws.is_empty() {
        io.line("ok: functor laws hold")
    } else {
        for v in &laws.violations {
            io.line(v.to_string())?;
        }
        io.line(format!("{} violation(s)", laws.violations.len()))
    }
}

fn validate(io: &mut Io<'_>, file: &Path) -> Outcome {
    match load(file)? {
        Loaded::Fibred(p) => {
            let laws = p.check_functor_laws();
            report_laws(io, &laws)?;
            Ok(laws.is_empty())
        }
        Loaded::Indexed(s) => {
            let report = validate_indexed(&s);
            if io.json {
                io.value(&json!({
                    "kind": "indexed",
                    "valid": report.is_valid(),
                    "coherence_checked": report.coherence_checked,
                    "violations": report.violations,
                }))?;
            } else if report.is_valid() {
                io.line(format!("ok: total and coherent ({} coherence checks)", report.coherence_checked))?;
            } else {
                for v in &report.violations {
                    io.line(v.to_string())?;
                }
                io.line(format!("{} violation(s)", report.violations.len()))?;
            }
            Ok(report.is_valid())
        }
    }
}

fn coh_check(io: &mut Io<'_>, file: &Path) -> Outcome {
    let set = load_indexed(file)?;
    let n = set.truncation();
    let en = Enumerator::new(&set);
    let (frames, paintings) = check_all_coherences(&en, n + 1, n)?;
    let ok = frames.is_empty() && paintings.is_empty();
    if io.json {
        io.value(&json!({ "ok": ok, "frames": frames, "paintings": paintings }))?;
    } else {
        for v in frames.violations.iter().chain(&paintings.violations) {
            io.line(v.to_string())?;
        }
        io.line(format!(
            "frames: {} checked, {} violation(s); paintings: {} checked, {} violation(s)",
            frames.checked,
            frames.violations.len(),
            paintings.checked,
            paintings.violations.len()
        ))?;
    }
    Ok(ok)
}

fn param(io: &mut Io<'_>, nu: Arity, file: Option<&Path>, steps: Option<usize>, at: Option<&str>) -> Outcome {
    if let Some(steps) = steps {
        let report = TelescopeReport::new(&iterate_types(nu, steps))?;
        if io.json {
            io.value(&serde_json::to_value(&report)?)?;
        } else {
            io.line(&report.display)?;
            io.line(format!("stats: {}", stats_text(&report)))?;
        }
        return Ok(true);
    }
    let text = read_input(file.unwrap_or(Path::new("-")))?;
    let ty = parse_type(&text)?;
    let fam = translate(&ty, nu)?;
    let result = match at {
        Some(t) => normalize(&TypeExpr::apply(fam, parse_term(t)?)),
        None => normalize(&fam),
    };
    let telescope = flatten(&result).ok().map(|_| TelescopeReport::new(&result)).transpose()?;
    if io.json {
        io.value(&json!({
            "input": print_type(&ty),
            "translation": print_type(&result),
            "telescope": telescope,
        }))?;
    } else {
        io.line(print_type(&result))?;
        if let Some(r) = telescope {
            io.line(&r.display)?;
            io.line(format!("stats: {}", stats_text(&r)))?;
        }
    }
    Ok(true)
}

fn stats_text(r: &TelescopeReport) -> String {
    let parts: Vec<String> = r.stats.iter().map(|(p, c)| format!("X_{p}:{c}")).collect();
    parts.join(" ")
}

fn roundtrip(io: &mut Io<'_>, file: Option<&Path>, seed: Option<u64>, nu: Arity, trunc: usize) -> Outcome {
    let reports = match (file, seed) {
        (_, Some(seed)) => {
            let set = random_indexed(nu, trunc, &RandomSpec::default(), seed);
            let fibred = to_fibred(&set)?;
            vec![round_trip_report(NuSet::Indexed(&set)), round_trip_report(NuSet::Fibred(&fibred))]
        }
        (Some(path), None) => match load(path)? {
            Loaded::Fibred(p) => vec![round_trip_report(NuSet::Fibred(&p))],
            Loaded::Indexed(s) => vec![round_trip_report(NuSet::Indexed(&s))],
        },
        (None, None) => return Err(Usage("a file or --seed is required".into())),
    };
    let ok = reports.iter().all(|r| r.ok);
    if io.json {
        io.value(&json!({ "ok": ok, "reports": reports }))?;
    } else {
        for r in &reports {
            write!(io.out, "{}", r.to_text())?;
        }
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("nuset").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn hom_lists_four_lines() {
        let (code, out, _) = call(&["hom", "--nu", "2", "-p", "1", "-n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().collect::<Vec<_>>(), ["*L", "*R", "L*", "R*"]);
    }

    #[test]
    fn compose_edge_endpoint() {
        let (code, out, _) = call(&["compose", "--nu", "1", "**0", "*0"]);
        assert_eq!((code, out.trim()), (0, "*00"));
    }

    #[test]
    fn shape_dot_has_four_nodes() {
        let (code, out, _) = call(&["shape", "--nu", "2", "-n", "2", "--dot"]);
        assert_eq!(code, 0);
        let nodes = out.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("->")).count();
        assert_eq!(nodes, 4);
    }

    #[test]
    fn geometric_flag_shifts_simplices() {
        let (_, a, _) = call(&["--json", "shape", "--nu", "1", "-n", "2", "--geometric"]);
        let (_, b, _) = call(&["--json", "shape", "--nu", "1", "-n", "3"]);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["inventory"], json!([3, 3, 1]));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["hom", "--nu", "2"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["compose", "--nu", "2", "*L", "**"]).0, 2);
        assert_eq!(call(&["validate", "/nonexistent/file.json"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn param_steps() {
        let (code, out, _) = call(&["--json", "param", "--nu", "2", "--steps", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["stats"], json!({"0": 4, "1": 4}));
    }

    #[test]
    fn random_roundtrip() {
        let (code, out, _) = call(&["--json", "roundtrip", "--seed", "3", "--nu", "2", "--trunc", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["ok"], json!(true));
    }
}
