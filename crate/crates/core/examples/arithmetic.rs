//! Limits survive sums, products, scaling and division by constants.
use limitlab::funcdsl::Op;
use limitlab::limits::{check, LimitType};
use limitlab::rational::{int, rat};
use limitlab::syntax::parse_fn;

fn main() -> limitlab::Result<()> {
    let f = parse_fn("piecewise { 5 on Q(R); else x + 1 }")?;
    let g = parse_fn("piecewise { 7 on seq(1/n); else 3 }")?;
    let a = int(0);
    let ops = [
        ("sum", Op::Add, int(4)),
        ("product", Op::Mul, int(3)),
        ("half", Op::Scale(rat(1, 2)), rat(1, 2)),
        ("quotient", Op::Div, rat(1, 3)),
    ];
    for (name, op, want) in ops {
        let h = f.arith(&g, &op)?;
        let v = check(&h, &a, &want, LimitType::T5)?;
        println!("{name}: T5 limit {want} -> {:?}", v.status);
    }
    Ok(())
}
