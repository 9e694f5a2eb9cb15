//! `christol compile | list-roots`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::automaton::Dfao;
use crate::error::{Error, Result};
use crate::gf::{parse_field_spec, FieldCtx, FieldSpec, Fq};
use crate::pipeline::{compile, select_root, Compiled, Options, RootChoice};
use crate::polynomial::{parse_element, parse_poly};
use crate::prep::{degree_height, root_prefixes, MinimalData};

#[derive(Parser, Debug)]
#[command(name = "christol", version, about = "Minimal automata for algebraic power series over F_q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the minimal automata for one root and print a JSON report.
    Compile(JobArgs),
    /// Print the resultant order r and the root prefixes of length r + 1.
    ListRoots(JobArgs),
}

#[derive(Args, Debug, Default)]
pub struct JobArgs {
    /// Field as `p=2,e=1` with optional `modulus=c0,c1,...,ce` (constant term first).
    #[arg(long)]
    pub field: Option<String>,
    /// Polynomial in x, y (and g for extension fields), e.g. "y^2+x*y+x^3".
    #[arg(long)]
    pub poly: Option<String>,
    /// Root prefix a0,a1,...,ar.
    #[arg(long, conflicts_with = "root_index")]
    pub root_prefix: Option<String>,
    /// Index into the list printed by list-roots.
    #[arg(long)]
    pub root_index: Option<usize>,
    /// Coefficients given to the brute-force kernel check.
    #[arg(long)]
    pub precision: Option<usize>,
    /// Minimum agreement length for the kernel check.
    #[arg(long)]
    pub lmin: Option<usize>,
    /// Check the automata against the series for n below this; 0 skips checking.
    #[arg(long)]
    pub verify: Option<usize>,
    /// Also build the forward-reading automaton.
    #[arg(long)]
    pub forward: bool,
    /// Abort when an automaton construction reaches more states than this.
    #[arg(long)]
    pub state_cap: Option<usize>,
    /// Write the minimal reverse automaton (and forward, as NAME.forward.dot) in DOT.
    #[arg(long)]
    pub emit_dot: Option<PathBuf>,
    /// Write the minimal reverse automaton (and forward, as NAME.forward.json) in JSON.
    #[arg(long)]
    pub emit_json: Option<PathBuf>,
    /// Read all of the above from a JSON job file; flags given explicitly take precedence.
    #[arg(long)]
    pub job: Option<PathBuf>,
}

/// Job file layout.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub field: Option<FieldSpec>,
    pub poly: Option<String>,
    pub root_prefix: Option<Vec<ElemText>>,
    pub root_index: Option<usize>,
    pub precision: Option<usize>,
    pub lmin: Option<usize>,
    pub verify: Option<usize>,
    pub forward: Option<bool>,
    pub state_cap: Option<usize>,
    pub emit_dot: Option<PathBuf>,
    pub emit_json: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum ElemText {
    Int(i64),
    Text(String),
}

/// A fully resolved job.
#[derive(Debug)]
pub struct Job {
    pub field: FieldCtx,
    pub md: MinimalData,
    pub root: RootChoice,
    pub opts: Options,
    pub emit_dot: Option<PathBuf>,
    pub emit_json: Option<PathBuf>,
}

fn parse_prefix(field: &FieldCtx, text: &str) -> Result<Vec<Fq>> {
    text.split(',').map(|t| parse_element(field, t.trim())).collect()
}

impl Job {
    pub fn resolve(args: &JobArgs) -> Result<Job> {
        let file = match &args.job {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Error::parse(0, format!("{}: {e}", path.display())))?;
                serde_json::from_str::<JobFile>(&text)
                    .map_err(|e| Error::parse(e.column(), format!("job file: {e}")))?
            }
            None => JobFile::default(),
        };
        let spec = match (&args.field, &file.field) {
            (Some(t), _) => parse_field_spec(t)?,
            (None, Some(s)) => s.clone(),
            (None, None) => return Err(Error::parse(0, "missing --field")),
        };
        let field = spec.build()?;
        let poly_text = args.poly.as_ref().or(file.poly.as_ref()).ok_or_else(|| Error::parse(0, "missing --poly"))?;
        let md = degree_height(&parse_poly(&field, poly_text)?)?;
        let root = if let Some(t) = &args.root_prefix {
            RootChoice::Prefix(parse_prefix(&field, t)?)
        } else if let Some(k) = args.root_index {
            RootChoice::Index(k)
        } else if let Some(list) = &file.root_prefix {
            let elems = list
                .iter()
                .map(|v| match v {
                    ElemText::Int(n) => Ok(field.from_int(*n)),
                    ElemText::Text(s) => parse_element(&field, s),
                })
                .collect::<Result<Vec<_>>>()?;
            RootChoice::Prefix(elems)
        } else if let Some(k) = file.root_index {
            RootChoice::Index(k)
        } else {
            RootChoice::Unique
        };
        let defaults = Options::default();
        let opts = Options {
            precision: args.precision.or(file.precision).unwrap_or(defaults.precision),
            lmin: args.lmin.or(file.lmin).unwrap_or(defaults.lmin),
            verify: args.verify.or(file.verify).unwrap_or(defaults.verify),
            forward: args.forward || file.forward.unwrap_or(false),
            state_cap: args.state_cap.or(file.state_cap).unwrap_or(defaults.state_cap),
        };
        Ok(Job {
            field,
            md,
            root,
            opts,
            emit_dot: args.emit_dot.clone().or(file.emit_dot),
            emit_json: args.emit_json.clone().or(file.emit_json),
        })
    }
}

pub fn format_prefix(field: &FieldCtx, prefix: &[Fq]) -> String {
    let parts: Vec<String> = prefix.iter().map(|&c| field.format(c)).collect();
    format!("({})", parts.join(","))
}

pub fn root_listing(md: &MinimalData) -> Result<String> {
    let (r, roots) = root_prefixes(md)?;
    let mut s = format!("r={r}\n");
    for (k, p) in roots.iter().enumerate() {
        let _ = writeln!(s, "{k}:{}", format_prefix(md.field(), p));
    }
    Ok(s)
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotSeparable | Error::DegreeZero => 3,
        Error::RootSelection(_)
        | Error::InvalidPrefix(_)
        | Error::AmbiguousContinuation { .. }
        | Error::NoContinuation { .. } => 4,
        Error::SmoothnessCheckFailed | Error::StateExplosion(_) | Error::InvariantBreach(_) => 5,
        _ => 2,
    }
}

fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::parse(0, format!("{}: {e}", path.display())))
}

fn emit(job: &Job, c: &Compiled) -> Result<()> {
    type Render = fn(&Dfao) -> String;
    let targets: [(&Option<PathBuf>, Render); 2] = [(&job.emit_dot, Dfao::to_dot), (&job.emit_json, Dfao::to_json)];
    for (path, render) in targets {
        let Some(path) = path else { continue };
        write_file(path, &render(&c.reverse))?;
        if let Some(fw) = &c.forward {
            write_file(&sibling(path, "forward"), &render(fw))?;
        }
    }
    Ok(())
}

fn summary(c: &Compiled) -> String {
    let r = &c.report;
    let mut s = format!(
        "q={} d={} h={} r={} s={} smooth={}: {} raw states, minimal reverse {}",
        r.q, r.d, r.h, r.r, r.s, r.smooth, r.states_raw, r.comp_reverse
    );
    if let Some(f) = r.comp_forward {
        let _ = write!(s, ", minimal forward {f}");
    }
    let _ = write!(s, ", span dimension {}", r.span_dim);
    if let Some(v) = &r.verification {
        let _ = write!(
            s,
            "; checked n < {}: {}, oracle {} classes{}",
            v.horizon,
            if v.agree { "agree" } else { "MISMATCH" },
            v.oracle_count,
            if v.oracle_exact { "" } else { " (inexact)" }
        );
    }
    s
}

/// Runs one command; returns the process exit status. Report JSON goes to stdout,
/// diagnostics to stderr.
pub fn run(cli: Cli) -> i32 {
    let (args, listing) = match &cli.command {
        Command::Compile(a) => (a, false),
        Command::ListRoots(a) => (a, true),
    };
    let job = match Job::resolve(args) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if listing {
        return match root_listing(&job.md) {
            Ok(s) => {
                print!("{s}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        };
    }
    let result = select_root(&job.md, &job.root)
        .and_then(|prefix| compile(&job.md, &prefix, &job.opts))
        .and_then(|c| emit(&job, &c).map(|_| c));
    match result {
        Ok(c) => {
            println!("{}", c.report.to_json());
            eprintln!("{}", summary(&c));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == 4 {
                if let Ok(s) = root_listing(&job.md) {
                    eprint!("{s}");
                }
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NotSeparable), 3);
        assert_eq!(exit_code(&Error::RootSelection(String::new())), 4);
        assert_eq!(exit_code(&Error::StateExplosion(1)), 5);
        assert_eq!(exit_code(&Error::parse(0, "x")), 2);
    }

    #[test]
    fn sibling_names() {
        assert_eq!(sibling(Path::new("/tmp/a.dot"), "forward"), PathBuf::from("/tmp/a.forward.dot"));
        assert_eq!(sibling(Path::new("out"), "forward"), PathBuf::from("out.forward"));
    }
}
