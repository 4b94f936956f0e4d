//! Command-line front end. Every command prints canonical text; exit status
//! is 0 on success, 1 when a verification fails and 2 on input errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::expr::{parse_bundle, parse_element, parse_table, render_bundle, render_table};
use crate::graded_ring::{Bundle, GradedElement};
use crate::higher::{bar_eval, bar_symbol, pair, HigherBracket, Multivector};
use crate::kw::{kw_bracket, kw_eval, kw_symbol, kw_wedge, theta_from_table, BracketTable, MultiBracket, SymbolValue};
use crate::poisson::{pbracket, BundleSpec};
use crate::verify::{
    builtin_example, builtin_examples, check_closure, check_courant, check_filippov, check_pre_courant_table, Bound,
    VerificationReport,
};

/// Bundle used when `--bundle` is not given.
pub fn default_bundle() -> BundleSpec {
    BundleSpec::identity(3, 4)
}

#[derive(Debug, Clone, Parser)]
#[command(name = "kwalg", version, about = "Exact computations with graded Poisson brackets and multi-Courant brackets")]
pub struct SessionConfig {
    /// Bundle file (`d`, `r`, `g`); defaults to the identity metric with d = 3, r = 4.
    #[arg(long, global = true)]
    pub bundle: Option<PathBuf>,
    /// Largest total x-degree of the argument tuples in checks and tables.
    #[arg(long, global = true, default_value_t = 2)]
    pub degree_bound: u32,
    /// One stable line per result.
    #[arg(long, global = true)]
    pub machine: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Courant,
    Closure,
    Filippov,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// The Poisson bracket {A, B}.
    Pbracket { a: String, b: String },
    /// The bracket of the brackets generated by A and B.
    Kw {
        a: String,
        b: String,
        /// Also print the evaluation table up to the degree bound.
        #[arg(long)]
        table: bool,
    },
    /// The wedge product of the brackets generated by A and B.
    Wedge { a: String, b: String },
    /// The pairing of two multivectors.
    Pair { p: String, q: String },
    /// The bracket generated by THETA of degree n: n-1 sections, or n
    /// multivectors for the extension of the paired form.
    Eval { theta: String, args: Vec<String> },
    /// The symbol of the bracket generated by THETA.
    Symbol { theta: String, args: Vec<String> },
    /// Check the axioms of a generator, a table file or a built-in example.
    Verify { kind: VerifyKind, target: String },
    /// Print a built-in generator, or list them.
    Example {
        name: Option<String>,
        /// Print the example's bundle file instead.
        #[arg(long)]
        spec: bool,
    },
    /// The evaluation table of THETA up to the degree bound.
    Table { theta: String },
    /// The generator of a table file.
    Reconstruct { path: String },
}

enum Outcome {
    Text(String),
    Report(VerificationReport),
}

/// Standard input, read once; `-` takes the next non-empty line as an
/// expression or the rest as a file.
struct Stdin<'a> {
    source: Option<&'a mut dyn Read>,
    lines: std::collections::VecDeque<String>,
}

impl Stdin<'_> {
    fn load(&mut self) -> Result<()> {
        if let Some(src) = self.source.take() {
            let mut text = String::new();
            src.read_to_string(&mut text)?;
            self.lines = text.lines().map(str::to_string).collect();
        }
        Ok(())
    }

    fn line(&mut self) -> Result<String> {
        self.load()?;
        while let Some(l) = self.lines.pop_front() {
            if !l.trim().is_empty() {
                return Ok(l);
            }
        }
        Err(Error::Io("standard input has no expression left".into()))
    }

    fn rest(&mut self) -> Result<String> {
        self.load()?;
        Ok(self.lines.drain(..).collect::<Vec<_>>().join("\n"))
    }
}

struct Session<'a> {
    bundle: Bundle,
    bound: u32,
    stdin: Stdin<'a>,
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn is_table(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("arity"))
}

enum Target {
    Theta(GradedElement),
    Table(BracketTable),
}

impl Session<'_> {
    fn expr(&mut self, s: &str) -> Result<GradedElement> {
        if s == "-" {
            let line = self.stdin.line()?;
            parse_element(&line, &self.bundle)
        } else {
            parse_element(s, &self.bundle)
        }
    }

    fn bracket(&mut self, s: &str) -> Result<MultiBracket> {
        MultiBracket::from_theta(self.expr(s)?)
    }

    fn file(&mut self, path: &str) -> Result<String> {
        if path == "-" {
            self.stdin.rest()
        } else {
            read_file(path)
        }
    }

    fn target(&mut self, s: &str) -> Result<Target> {
        if let Some(e) = builtin_example(s) {
            return Ok(Target::Theta(e.theta));
        }
        let text = if s == "-" || std::path::Path::new(s).is_file() {
            self.file(s)?
        } else {
            return Ok(Target::Theta(self.expr(s)?));
        };
        if is_table(&text) {
            Ok(Target::Table(parse_table(&text, &self.bundle)?))
        } else {
            Ok(Target::Theta(parse_element(text.trim(), &self.bundle)?))
        }
    }

    fn args(&mut self, args: &[String]) -> Result<Vec<GradedElement>> {
        args.iter().map(|a| self.expr(a)).collect()
    }

    fn verify(&mut self, kind: VerifyKind, target: &str) -> Result<VerificationReport> {
        let bound = Bound::Degree(self.bound);
        let mut report = VerificationReport::default();
        let theta = match self.target(target)? {
            Target::Theta(t) => t,
            Target::Table(table) => {
                report.merge(check_pre_courant_table(&table, self.bound)?);
                theta_from_table(&table)?.into_theta()
            }
        };
        match kind {
            VerifyKind::Courant => report.merge(check_courant(&theta, bound)?),
            VerifyKind::Closure => report.merge(check_closure(&MultiBracket::from_theta(theta)?, bound)?),
            VerifyKind::Filippov => report.merge(check_filippov(&MultiBracket::from_theta(theta)?, bound)?),
        }
        Ok(report)
    }

    fn execute(&mut self, command: &Command) -> Result<Outcome> {
        let text = match command {
            Command::Pbracket { a, b } => {
                let (a, b) = (self.expr(a)?, self.expr(b)?);
                pbracket(&a, &b)?.to_string()
            }
            Command::Kw { a, b, table } => {
                let (a, b) = (self.bracket(a)?, self.bracket(b)?);
                let c = kw_bracket(&a, &b)?;
                if *table {
                    format!("{}\n{}", c.theta(), render_table(&BracketTable::from_evaluator(&c, self.bound)?).trim_end())
                } else {
                    c.theta().to_string()
                }
            }
            Command::Wedge { a, b } => {
                let (a, b) = (self.bracket(a)?, self.bracket(b)?);
                kw_wedge(&a, &b)?.theta().to_string()
            }
            Command::Pair { p, q } => {
                let p = Multivector::new(self.expr(p)?)?;
                let q = Multivector::new(self.expr(q)?)?;
                pair(&p, &q)?.value().to_string()
            }
            Command::Eval { theta, args } => {
                let c = self.bracket(theta)?;
                let args = self.args(args)?;
                if args.iter().all(GradedElement::is_section) {
                    kw_eval(&c, &args)?.to_string()
                } else {
                    let mv = args.into_iter().map(Multivector::new).collect::<Result<Vec<_>>>()?;
                    bar_eval(&HigherBracket::new(c), &mv)?.value().to_string()
                }
            }
            Command::Symbol { theta, args } => {
                let c = self.bracket(theta)?;
                let args = self.args(args)?;
                let rendered: Vec<String> = args.iter().map(ToString::to_string).collect();
                let sigma: SymbolValue = if args.iter().all(GradedElement::is_section) {
                    kw_symbol(&c, &args)?
                } else {
                    let mv = args.into_iter().map(Multivector::new).collect::<Result<Vec<_>>>()?;
                    bar_symbol(&HigherBracket::new(c), &mv)?
                };
                let lines: Vec<String> = sigma
                    .images()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| format!("sigma({}; x{}) = {v}", rendered.join(", "), i + 1))
                    .collect();
                lines.join("\n")
            }
            Command::Verify { kind, target } => return Ok(Outcome::Report(self.verify(*kind, target)?)),
            Command::Example { name: None, .. } => {
                let lines: Vec<String> = builtin_examples()
                    .iter()
                    .map(|e| format!("{}  {}", e.name, if e.expected_closed { "closed" } else { "not closed" }))
                    .collect();
                lines.join("\n")
            }
            Command::Example { name: Some(name), spec } => {
                let e = builtin_example(name).ok_or_else(|| Error::Domain(format!("unknown example `{name}`")))?;
                if *spec {
                    render_bundle(&e.spec).trim_end().to_string()
                } else {
                    e.theta.to_string()
                }
            }
            Command::Table { theta } => {
                let c = self.bracket(theta)?;
                render_table(&BracketTable::from_evaluator(&c, self.bound)?).trim_end().to_string()
            }
            Command::Reconstruct { path } => {
                let text = self.file(path)?;
                theta_from_table(&parse_table(&text, &self.bundle)?)?.theta().to_string()
            }
        };
        Ok(Outcome::Text(text))
    }
}

fn load_bundle(config: &SessionConfig) -> Result<Bundle> {
    Ok(match &config.bundle {
        Some(path) => parse_bundle(&read_file(&path.to_string_lossy())?)?.into_bundle(),
        None => default_bundle().into_bundle(),
    })
}

/// Runs one command; returns the exit status.
pub fn execute(config: &SessionConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = load_bundle(config).and_then(|bundle| {
        let mut session = Session {
            bundle,
            bound: config.degree_bound,
            stdin: Stdin {
                source: Some(stdin),
                lines: Default::default(),
            },
        };
        session.execute(&config.command)
    });
    let written = match result {
        Ok(Outcome::Text(text)) => writeln!(out, "{text}").map(|_| 0),
        Ok(Outcome::Report(report)) => {
            let status = if report.passed() { 0 } else { 1 };
            if config.machine {
                write!(out, "{}", report.render_machine())
            } else {
                writeln!(out, "{report}")
            }
            .map(|_| status)
        }
        Err(e) if config.machine => writeln!(out, "ERROR {e}").map(|_| 2),
        Err(e) => writeln!(err, "error: {e}").map(|_| 2),
    };
    written.unwrap_or(2)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match SessionConfig::try_parse_from(args) {
        Ok(config) => execute(&config, stdin, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            code
        }
    }
}
