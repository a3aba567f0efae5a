//! The Cantor set is uncountable but null, so its characteristic function
//! has a T6 limit at 0 and no T5 limit.
use limitlab::analyzers::{cardinality, germ_trace, measure};
use limitlab::limits::{check, LimitType};
use limitlab::rational::{int, rat};
use limitlab::setalg::NormalForm;
use limitlab::syntax::{parse_fn, parse_set};

fn main() -> limitlab::Result<()> {
    let c = parse_set("cantor(0, 1)")?;
    println!("1/4 in C: {}, 1/2 in C: {}", c.contains(&rat(1, 4)), c.contains(&rat(1, 2)));
    println!("measure: {}", measure(&c)?);
    let germ = germ_trace(&NormalForm::of(&c)?, &int(0))?;
    println!("near 0: {}", cardinality(&germ));
    let chi = parse_fn("piecewise { 1 on cantor(0, 1); else 0 }")?;
    for t in [LimitType::T5, LimitType::T6] {
        println!("{t} limit 0: {:?}", check(&chi, &int(0), &int(0), t)?.status);
    }
    Ok(())
}
