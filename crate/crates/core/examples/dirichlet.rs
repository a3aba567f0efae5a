//! Classifies the Dirichlet function at 0 and 1/3: only the countable,
//! null and density notions see a limit.
use limitlab::limits::classify;
use limitlab::rational::{int, rat};
use limitlab::syntax::parse_fn;

fn main() -> limitlab::Result<()> {
    let d = parse_fn("piecewise { 1 on Q(R); else 0 }")?;
    for a in [int(0), rat(1, 3)] {
        let rep = classify(&d, &a)?;
        println!("at {a}:");
        for (t, o) in &rep.per_type {
            let v = o.value.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            println!("  {t}: {} {v}", o.exists);
        }
    }
    Ok(())
}
