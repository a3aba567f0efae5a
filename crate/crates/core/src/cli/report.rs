//! Command results as JSON documents plus a plain-text rendering.

use serde_json::{json, Map, Value};

use crate::analyzers::{CardinalityClass, DensityVerdict, MeasureValue};
use crate::decompose::Decomposition;
use crate::error::Error;
use crate::limits::{LimitReport, Status, Verdict};
use crate::oracle::{Estimate, Profile};
use crate::rational::{render, Rational};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDABLE: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub doc: Value,
    pub text: String,
    pub exit: i32,
}

fn r(x: &Rational) -> Value {
    Value::String(render(x))
}

fn opt(x: &Option<Rational>) -> Value {
    x.as_ref().map(r).unwrap_or(Value::Null)
}

fn status_name(s: &Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Undecidable(_) => "undecidable",
    }
}

pub fn verdict_doc(v: &Verdict) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), json!(status_name(&v.status)));
    if let Status::Undecidable(reason) = &v.status {
        m.insert("reason".into(), json!(reason));
    }
    if let Some(w) = &v.witness {
        let sched: Vec<Value> = w.iter().map(|(e, d)| json!({"epsilon": r(e), "delta": r(d)})).collect();
        m.insert("witness".into(), Value::Array(sched));
    }
    if let Some(e) = &v.evidence {
        m.insert("evidence".into(), json!(e));
    }
    Value::Object(m)
}

fn verdict_text(v: &Verdict) -> String {
    let mut s = status_name(&v.status).to_string();
    match (&v.status, &v.witness, &v.evidence) {
        (Status::Undecidable(reason), _, _) => s += &format!(" ({reason})"),
        (_, Some(w), _) => {
            let parts: Vec<String> = w.iter().map(|(e, d)| format!("ε={} δ={}", render(e), render(d))).collect();
            s += &format!(" [{}]", parts.join(", "));
        }
        (_, _, Some(e)) => s += &format!(" ({e})"),
        _ => {}
    }
    s
}

pub fn classify(rep: &LimitReport) -> Report {
    let mut types = Map::new();
    let mut text = format!("point {}\n", render(&rep.point));
    let mut undecided = false;
    for (t, o) in &rep.per_type {
        undecided |= o.exists == crate::limits::Existence::Undecidable;
        let verdicts: Vec<Value> = o
            .verdicts
            .iter()
            .map(|(l, v)| {
                let mut d = verdict_doc(v);
                d["value"] = r(l);
                d
            })
            .collect();
        types.insert(
            t.to_string(),
            json!({
                "exists": o.exists.to_string(),
                "value": opt(&o.value),
                "others": o.others.iter().map(r).collect::<Vec<_>>(),
                "verdicts": verdicts,
            }),
        );
        let value = o.value.as_ref().map(|v| format!(" = {}", render(v))).unwrap_or_default();
        let others = if o.others.is_empty() {
            String::new()
        } else {
            format!(" (also {})", o.others.iter().map(render).collect::<Vec<_>>().join(", "))
        };
        text += &format!("{t}: {}{value}{others}\n", o.exists);
    }
    text += &format!("chain consistent: {}\n", rep.chain_consistent);
    Report {
        doc: json!({
            "command": "classify",
            "point": r(&rep.point),
            "types": Value::Object(types),
            "chain_consistent": rep.chain_consistent,
        }),
        text,
        exit: if undecided { EXIT_UNDECIDABLE } else { EXIT_DECIDED },
    }
}

pub fn limit(t: &str, a: &Rational, l: &Rational, v: &Verdict) -> Report {
    let mut doc = verdict_doc(v);
    doc["command"] = json!("limit");
    doc["type"] = json!(t);
    doc["point"] = r(a);
    doc["value"] = r(l);
    let exit = if matches!(v.status, Status::Undecidable(_)) { EXIT_UNDECIDABLE } else { EXIT_DECIDED };
    Report { doc, text: format!("{t} limit {} at {}: {}\n", render(l), render(a), verdict_text(v)), exit }
}

pub fn measure(m: &MeasureValue) -> Report {
    Report {
        doc: json!({
            "command": "measure",
            "value": r(&m.value),
            "exact": m.is_exact(),
            "bound_gap": r(&m.bound_gap),
            "lower": r(&m.lower()),
            "upper": r(&m.upper()),
        }),
        text: format!("measure {m}\n"),
        exit: EXIT_DECIDED,
    }
}

pub fn density(a: &Rational, d: &DensityVerdict) -> Report {
    let (kind, extra) = match d {
        DensityVerdict::Zero => ("zero", json!(null)),
        DensityVerdict::Positive(b) => ("positive", json!({"lower_bound": r(b)})),
        DensityVerdict::Value(v) => ("value", json!({"value": r(v)})),
        DensityVerdict::Undecided(s) => ("undecided", json!({"reason": s})),
    };
    let mut doc = json!({"command": "density", "point": r(a), "verdict": kind});
    if let Value::Object(m) = extra {
        for (k, v) in m {
            doc[k] = v;
        }
    }
    let exit = if matches!(d, DensityVerdict::Undecided(_)) { EXIT_UNDECIDABLE } else { EXIT_DECIDED };
    Report { doc, text: format!("density at {}: {d}\n", render(a)), exit }
}

pub fn cardinality(a: &Rational, radius: &Rational, c: &CardinalityClass) -> Report {
    let count = match c {
        CardinalityClass::Empty => json!(0),
        CardinalityClass::Finite(n) => json!(n),
        _ => Value::Null,
    };
    Report {
        doc: json!({
            "command": "cardinality",
            "point": r(a),
            "radius": r(radius),
            "class": c.to_string(),
            "count": count,
        }),
        text: format!("window of radius {} at {}: {c}\n", render(radius), render(a)),
        exit: EXIT_DECIDED,
    }
}

pub fn decomposition(d: &Decomposition, verified: bool) -> Report {
    Report {
        doc: json!({
            "command": "decompose",
            "g": d.g.to_string(),
            "h": d.h.to_string(),
            "delta0": r(&d.delta0),
            "exceptional_union": d.exceptional_union.to_string(),
            "verified": verified,
        }),
        text: format!(
            "g = {}\nh = {}\ndelta0 = {}\nexceptional union = {}\nverified: {verified}\n",
            d.g,
            d.h,
            render(&d.delta0),
            d.exceptional_union
        ),
        exit: if verified { EXIT_DECIDED } else { EXIT_ERROR },
    }
}

pub fn estimate(e: &Estimate, seed: u64, window: &(Rational, Rational), exact: Option<&MeasureValue>) -> Report {
    let mut doc = json!({
        "command": "estimate",
        "estimate": e.value,
        "std_error": e.std_error,
        "three_sigma": e.three_sigma(),
        "hits": e.hits,
        "samples": e.samples,
        "seed": seed,
        "window": {"center": r(&window.0), "radius": r(&window.1)},
    });
    let mut text = format!("estimate {:.6} ± {:.6} (3σ, {} samples, seed {seed})\n", e.value, e.three_sigma(), e.samples);
    if let Some(m) = exact {
        doc["exact"] = r(&m.value);
        doc["within_three_sigma"] = json!(e.within_three_sigma(crate::rational::to_f64(&m.value)));
        text += &format!("exact {m}\n");
    }
    Report { doc, text, exit: EXIT_DECIDED }
}

pub fn profile(a: &Rational, p: &Profile) -> Report {
    let pts: Vec<Value> = p
        .points
        .iter()
        .map(|q| json!({"delta": r(&q.delta), "ratio": q.ratio, "exact": opt(&q.exact)}))
        .collect();
    let mut text = format!("density profile at {}\n", render(a));
    for q in &p.points {
        text += &format!("  δ = {:<12} ratio {:.6}{}\n", render(&q.delta), q.ratio, if q.exact.is_some() { " (exact)" } else { "" });
    }
    text += &format!("nonincreasing: {}\n", p.nonincreasing);
    Report {
        doc: json!({"command": "estimate", "point": r(a), "profile": pts, "nonincreasing": p.nonincreasing}),
        text,
        exit: EXIT_DECIDED,
    }
}

pub fn error(e: &Error) -> Report {
    let kind = match e {
        Error::UnsupportedIntersection(_) => "unsupported_intersection",
        Error::OutsideDomain(_) => "outside_domain",
        Error::DivisionByPossiblyZero(_) => "division_by_possibly_zero",
        Error::NonPolynomialQuotient(_) => "non_polynomial_quotient",
        Error::DomainMismatch => "domain_mismatch",
        Error::PrerequisiteNotMet(_) => "prerequisite_not_met",
        Error::UndecidableDensity(_) => "undecidable_density",
        Error::Undecidable(_) => "undecidable",
        Error::Syntax { .. } => "syntax",
        Error::Range(_) => "range",
        Error::UnknownAtom { .. } => "unknown_atom",
        Error::Invalid(_) => "invalid",
        Error::Io(_) => "io",
    };
    let mut doc = json!({"error": {"kind": kind, "message": e.to_string()}});
    if let Error::Syntax { line, column, .. } | Error::UnknownAtom { line, column, .. } = e {
        doc["error"]["line"] = json!(line);
        doc["error"]["column"] = json!(column);
    }
    let exit = match e {
        Error::Undecidable(_) | Error::UndecidableDensity(_) => EXIT_UNDECIDABLE,
        _ => EXIT_ERROR,
    };
    Report { doc, text: format!("error: {e}\n"), exit }
}
