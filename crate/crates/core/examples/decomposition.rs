//! Splits the Dirichlet function into a classically convergent part and a
//! part supported on a countable set, then checks the split.
use limitlab::decompose::{decompose, verify_decomposition};
use limitlab::limits::LimitType;
use limitlab::rational::int;
use limitlab::syntax::parse_fn;

fn main() -> limitlab::Result<()> {
    let cases = [
        ("piecewise { 1 on Q(R); else 0 }", LimitType::T5),
        ("piecewise { 1 on cantor(0, 1); else x }", LimitType::T6),
        ("piecewise { x + 2 on seq(1/n); else x^2 }", LimitType::T5),
    ];
    for (src, t) in cases {
        let f = parse_fn(src)?;
        let d = decompose(&f, &int(0), &int(0), t)?;
        println!("{src}");
        println!("  g = {}\n  h = {}\n  δ0 = {}", d.g, d.h, d.delta0);
        println!("  verified: {}", verify_decomposition(&d, &f, &int(0), &int(0), t));
    }
    Ok(())
}
