//! Ω = ⋃ [1/n − 1/2ⁿ, 1/n) has positive measure near 0 but density zero
//! there, separating T6 from T2.
use limitlab::analyzers::{density_at, measure};
use limitlab::limits::{check, LimitType};
use limitlab::rational::int;
use limitlab::syntax::{parse_fn, parse_set};

fn main() -> limitlab::Result<()> {
    let omega = parse_set("family(1/n - (1/2)^n, 1/n)")?;
    println!("|Ω| = {}", measure(&omega)?);
    println!("density at 0: {}", density_at(&omega, &int(0))?);
    let chi = parse_fn("piecewise { 1 on family(1/n - (1/2)^n, 1/n); else 0 }")?;
    for t in [LimitType::T6, LimitType::T2] {
        println!("{t} limit 0: {:?}", check(&chi, &int(0), &int(0), t)?.status);
    }
    Ok(())
}
