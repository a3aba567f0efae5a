//! Command-line front end.
//!
//! Exit codes: 0 when the result is decided (including Fail verdicts),
//! 2 when it is undecidable, 1 on errors.

pub mod report;

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::analyzers::{cardinality, density_at, measure, stable_radius};
use crate::decompose::{decompose, verify_decomposition};
use crate::error::{Error, Result};
use crate::funcdsl::PiecewiseFn;
use crate::limits::{check, classify, LimitType};
use crate::oracle::{density_profile, mc_measure, SampleConfig};
use crate::rational::{parse as parse_rational, render, Rational};
use crate::setalg::{trace::trace_of, NormalForm, SetExpr};
use crate::syntax::{parse_fn, parse_set};

pub use report::Report;

#[derive(Parser, Debug)]
#[command(name = "limitlab", version, about = "Exact checks of T1–T6 limits of piecewise polynomial functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "json")]
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Existence and value of every limit type at a point.
    Classify(Inputs),
    /// Check one value against one limit type.
    Limit(Inputs),
    /// Lebesgue measure of a set.
    Measure(Inputs),
    /// Density of a set at a point.
    Density(Inputs),
    /// Cardinality class of a punctured window trace.
    Cardinality(Inputs),
    /// Split f = g + h with g classically convergent and h negligible.
    Decompose(Inputs),
    /// Monte Carlo measure estimate, or a density profile with --depths.
    Estimate(Inputs),
    /// Classify each function and confirm chain consistency and decompositions.
    Verify(Inputs),
}

#[derive(Args, Debug, Default)]
pub struct Inputs {
    /// Function: a file path or inline text. Repeatable for `verify`.
    #[arg(long = "fn")]
    pub func: Vec<String>,
    /// Set: a file path or inline text.
    #[arg(long)]
    pub set: Option<String>,
    /// Point a.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Limit type t1..t6.
    #[arg(long = "type")]
    pub kind: Option<String>,
    /// Candidate limit value L.
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<String>,
    /// Window radius; defaults to the radius below which the trace is stable.
    #[arg(long)]
    pub radius: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Halvings for a density profile.
    #[arg(long)]
    pub depths: Option<u32>,
}

fn source(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn rational_arg(name: &str, v: &Option<String>) -> Result<Rational> {
    let s = v.as_deref().ok_or_else(|| Error::Invalid(format!("--{name} is required")))?;
    parse_rational(s).ok_or_else(|| Error::Invalid(format!("--{name}: `{s}` is not a rational")))
}

impl Inputs {
    fn function(&self) -> Result<PiecewiseFn> {
        match self.func.as_slice() {
            [one] => parse_fn(&source(one)?),
            [] => Err(Error::Invalid("--fn is required".into())),
            _ => Err(Error::Invalid("exactly one --fn is expected".into())),
        }
    }

    fn set_expr(&self) -> Result<SetExpr> {
        let s = self.set.as_deref().ok_or_else(|| Error::Invalid("--set is required".into()))?;
        parse_set(&source(s)?)
    }

    fn at(&self) -> Result<Rational> {
        rational_arg("at", &self.at)
    }

    fn value(&self) -> Result<Rational> {
        rational_arg("value", &self.value)
    }

    fn limit_type(&self) -> Result<LimitType> {
        self.kind.as_deref().ok_or_else(|| Error::Invalid("--type is required".into()))?.parse()
    }
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Classify(i) => Ok(report::classify(&classify(&i.function()?, &i.at()?)?)),
        Command::Limit(i) => {
            let (a, l, t) = (i.at()?, i.value()?, i.limit_type()?);
            Ok(report::limit(&t.to_string(), &a, &l, &check(&i.function()?, &a, &l, t)?))
        }
        Command::Measure(i) => Ok(report::measure(&measure(&i.set_expr()?)?)),
        Command::Density(i) => {
            let a = i.at()?;
            Ok(report::density(&a, &density_at(&i.set_expr()?, &a)?))
        }
        Command::Cardinality(i) => {
            let a = i.at()?;
            let nf = NormalForm::of(&i.set_expr()?)?;
            let radius = match &i.radius {
                Some(_) => rational_arg("radius", &i.radius)?,
                None => stable_radius(&nf, &a)?,
            };
            Ok(report::cardinality(&a, &radius, &cardinality(&trace_of(&nf, &a, &radius)?)))
        }
        Command::Decompose(i) => {
            let (f, a, l, t) = (i.function()?, i.at()?, i.value()?, i.limit_type()?);
            let d = decompose(&f, &a, &l, t)?;
            let ok = verify_decomposition(&d, &f, &a, &l, t);
            Ok(report::decomposition(&d, ok))
        }
        Command::Estimate(i) => estimate(i),
        Command::Verify(i) => verify(i),
    }
}

fn estimate(i: &Inputs) -> Result<Report> {
    let e = i.set_expr()?;
    let center = i.at.as_ref().map(|_| i.at()).transpose()?;
    if let Some(depths) = i.depths {
        let a = center.ok_or_else(|| Error::Invalid("--depths needs --at".into()))?;
        let cfg = SampleConfig::new(i.seed, i.samples, a.clone(), crate::rational::one());
        return Ok(report::profile(&a, &density_profile(&e, &a, depths, &cfg)?));
    }
    let center = center.unwrap_or_else(crate::rational::zero);
    let radius = match &i.radius {
        Some(_) => rational_arg("radius", &i.radius)?,
        None => crate::rational::one(),
    };
    let cfg = SampleConfig::new(i.seed, i.samples, center.clone(), radius.clone());
    let est = mc_measure(&e, &cfg)?;
    let exact = crate::setalg::window_trace(&e, &center, &radius)
        .and_then(|t| crate::analyzers::trace_measure(&t))
        .ok();
    Ok(report::estimate(&est, i.seed, &cfg.window, exact.as_ref()))
}

/// Per function: classification, chain consistency, and a verified
/// decomposition for every T5/T6 value found.
fn verify(i: &Inputs) -> Result<Report> {
    if i.func.is_empty() {
        return Err(Error::Invalid("--fn is required".into()));
    }
    let a = i.at()?;
    let cases: Vec<Result<(String, serde_json::Value, bool, bool)>> = i
        .func
        .par_iter()
        .map(|src| {
            let f = parse_fn(&source(src)?)?;
            let rep = classify(&f, &a)?;
            let mut decomps = Vec::new();
            let mut ok = rep.chain_consistent;
            for t in [LimitType::T5, LimitType::T6] {
                let o = rep.get(t);
                for l in o.value.iter().chain(&o.others) {
                    let d = decompose(&f, &a, l, t)?;
                    let v = verify_decomposition(&d, &f, &a, l, t);
                    ok &= v;
                    decomps.push(json!({"type": t.to_string(), "value": render(l), "verified": v}));
                }
            }
            let undecided = rep.per_type.iter().any(|(_, o)| o.exists == crate::limits::Existence::Undecidable);
            let doc = json!({
                "function": f.to_string(),
                "chain_consistent": rep.chain_consistent,
                "decompositions": decomps,
                "ok": ok,
            });
            Ok((f.to_string(), doc, ok, undecided))
        })
        .collect();
    let mut docs = Vec::new();
    let mut text = String::new();
    let (mut all_ok, mut any_undecided) = (true, false);
    for c in cases {
        let (name, doc, ok, undecided) = c?;
        text += &format!("{} {name}\n", if ok { "ok  " } else { "FAIL" });
        all_ok &= ok;
        any_undecided |= undecided;
        docs.push(doc);
    }
    let exit = if !all_ok {
        report::EXIT_ERROR
    } else if any_undecided {
        report::EXIT_UNDECIDABLE
    } else {
        report::EXIT_DECIDED
    };
    Ok(Report { doc: json!({"command": "verify", "point": render(&a), "cases": docs, "ok": all_ok}), text, exit })
}

/// Parses arguments, runs the command and returns the rendered output with
/// its exit code.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { report::EXIT_ERROR } else { 0 };
            return (e.to_string(), code);
        }
    };
    let rep = execute(&cli.command).unwrap_or_else(|e| report::error(&e));
    let out = match cli.format {
        Format::Text => rep.text,
        Format::Structured => format!("{}\n", serde_json::to_string_pretty(&rep.doc).expect("json values serialize")),
    };
    (out, rep.exit)
}
