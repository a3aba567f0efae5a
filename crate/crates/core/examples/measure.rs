//! Exact measures and window traces of composite sets.
use limitlab::analyzers::{measure, cardinality};
use limitlab::rational::{int, rat};
use limitlab::setalg::{normalize, window_trace};
use limitlab::syntax::parse_set;

fn main() -> limitlab::Result<()> {
    for s in ["[0,1] | [2,3]", "[0,2] \\ (1,3)", "(0,1) \\ Q(R)", "[0,1] \\ cantor(0,1)", "family(1/n - 1/2/n^2, 1/n)"] {
        let e = parse_set(s)?;
        println!("{s:<28} measure {:<12} normal form {}", measure(&e)?.to_string(), normalize(&e)?);
    }
    let e = parse_set("seq(1/n) | [1/2, 1]")?;
    let t = window_trace(&e, &int(0), &rat(1, 4))?;
    println!("seq(1/n) | [1/2, 1] near 0: {} ({})", t.to_expr(), cardinality(&t));
    Ok(())
}
