use std::fs;
use std::path::Path as FsPath;

use hdakit_core::base_cats::{eval_f, invert_f, BaseMap, CanonicalMorphism, CanonicalObject, Label};
use hdakit_core::bisim::{check_bisim, enumerate_executions, Verdict};
use hdakit_core::ipomset::{iso, iso_strict, Ipomset};
use hdakit_core::paths::{format_path, parse_path, paths_from};
use hdakit_core::precubical::{validate_precubical, Hda};
use hdakit_core::semantics::{ev, split_trace, st_trace};
use serde_json::json;
use thiserror::Error;

use crate::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
}

pub struct Outcome {
    pub text: String,
    /// False for invalid complexes and negative or inconclusive verdicts.
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, success: true }
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })
}

fn load_hda(path: &FsPath) -> Result<Hda, CliError> {
    Hda::from_json(&read(path)?)
        .map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })
}

fn load_ipomset(path: &FsPath) -> Result<Ipomset, CliError> {
    Ipomset::from_json(&read(path)?)
        .map_err(|e| CliError::Read { path: path.display().to_string(), message: e.to_string() })
}

fn input<E: ToString>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

pub fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Write { path: path.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate { file } => validate(load_hda(file)?, cli.json),
        Command::Symmetrize { file, max_dim } => {
            let h = load_hda(file)?;
            Ok(Outcome::ok(h.symmetrized(*max_dim).map_err(input)?.to_json()))
        }
        Command::Paths { file, bound, from } => {
            let h = load_hda(file)?;
            let paths = match from {
                None => enumerate_executions(&h, *bound),
                Some(id) => {
                    let start = h.complex.get(id).map_err(input)?;
                    (0..=*bound).flat_map(|n| paths_from(&h.complex, start, n)).collect()
                }
            };
            let lines: Vec<String> = paths.iter().map(|p| format_path(&h.complex, p)).collect();
            Ok(Outcome::ok(if cli.json { pretty(&json!(lines)) } else { lines.join("\n") }))
        }
        Command::Label { file, path } => {
            let h = load_hda(file)?;
            let p = parse_path(&h.complex, path).map_err(input)?;
            let label = ev(&h.complex, &p).map_err(input)?;
            let json = pretty(&label.to_json());
            Ok(Outcome::ok(if cli.json { json } else { format!("{}\n{json}", label.render_ascii()) }))
        }
        Command::StTrace { file, path } => {
            let h = load_hda(file)?;
            let p = parse_path(&h.complex, path).map_err(input)?;
            let st = st_trace(&h.complex, &p).map_err(input)?;
            let split = split_trace(&h.complex, &p).map_err(input)?;
            Ok(Outcome::ok(if cli.json {
                pretty(&json!({ "st_trace": st.to_string(), "split_trace": split.to_string() }))
            } else {
                format!("st-trace: {st}\nsplit-trace: {split}")
            }))
        }
        Command::Iso { left, right, strict } => {
            let (p, q) = (load_ipomset(left)?, load_ipomset(right)?);
            let found = if *strict { iso_strict(&p, &q) } else { iso(&p, &q) };
            let text = match (&found, cli.json) {
                (Some(f), true) => pretty(&json!({
                    "isomorphic": true,
                    "strict": strict,
                    "events": f.events.iter().enumerate()
                        .map(|(e, &g)| (p.events()[e].id.clone(), json!(q.events()[g].id)))
                        .collect::<serde_json::Map<_, _>>(),
                })),
                (None, true) => pretty(&json!({ "isomorphic": false, "strict": strict })),
                (Some(f), false) => {
                    let pairs: Vec<String> = f
                        .events
                        .iter()
                        .enumerate()
                        .map(|(e, &g)| format!("{} ↦ {}", p.events()[e].id, q.events()[g].id))
                        .collect();
                    format!("isomorphic: {}", pairs.join(", "))
                }
                (None, false) => "not isomorphic".to_string(),
            };
            Ok(Outcome { text, success: found.is_some() })
        }
        Command::Bisim { left, right, kind, mode, bound } => {
            let (x, y) = (load_hda(left)?, load_hda(right)?);
            let report = check_bisim(&x, &y, (*kind).into(), (*mode).into(), *bound);
            let text = if cli.json {
                pretty(&report.to_json())
            } else {
                let mut s = match &report.verdict {
                    Verdict::Bisimilar(w) => format!("Bisimilar (witness of {} pairs)", w.len()),
                    Verdict::NotBisimilar => "NotBisimilar".to_string(),
                    Verdict::BoundedInconclusive(b) => format!("BoundedInconclusive (bound {b})"),
                };
                if let (false, Some((a, b))) = (report.verdict.is_bisimilar(), &report.counterexample_pair) {
                    s.push_str(&format!("\ncounterexample: {a}  |  {b}"));
                }
                s
            };
            Ok(Outcome { text, success: report.verdict.is_bisimilar() })
        }
        Command::ExportDot { file } => Ok(Outcome::ok(crate::dot::export_dot(&load_hda(file)?))),
        Command::Morphism { target, text } => morphism(target, text, cli.json),
    }
}

fn validate(h: Hda, as_json: bool) -> Result<Outcome, CliError> {
    let violations = validate_precubical(&h.complex);
    let counts = h.complex.counts_by_dim();
    let text = match (violations.is_empty(), as_json) {
        (true, true) => pretty(&json!({ "valid": true, "cells_by_dim": counts })),
        (false, true) => pretty(&json!({
            "valid": false,
            "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })),
        (true, false) => {
            let parts: Vec<String> = counts
                .iter()
                .enumerate()
                .map(|(d, n)| if d == 0 { format!("{n} cells dim0") } else { format!("{n} dim{d}") })
                .collect();
            format!("valid; {}", parts.join(", "))
        }
        (false, false) => {
            let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
            format!("invalid; {} violations\n{}", violations.len(), lines.join("\n"))
        }
    };
    Ok(Outcome { text, success: violations.is_empty() })
}

fn morphism(target: &str, text: &str, as_json: bool) -> Result<Outcome, CliError> {
    let labels: Vec<Label> = if target.contains(',') {
        target.split(',').map(|s| Label::from(s.trim())).collect()
    } else {
        target.chars().map(|c| Label::new(c.to_string())).collect()
    };
    let target = CanonicalObject::new(labels);
    let (canonical, map) = if text.trim_start().starts_with("f=") {
        let m = BaseMap::parse(text, &target).map_err(input)?;
        (invert_f(&m).map_err(input)?, m)
    } else {
        let c = CanonicalMorphism::parse(text, &target).map_err(input)?;
        let m = eval_f(&c).map_err(input)?;
        (c, m)
    };
    Ok(Outcome::ok(if as_json {
        pretty(&json!({ "canonical": canonical.to_string(), "map": map.to_string() }))
    } else {
        format!("canonical: {canonical}\nmap: {map}")
    }))
}
