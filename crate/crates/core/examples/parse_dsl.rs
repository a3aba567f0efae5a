//! Parsing, printing and error positions of the text DSL.
use limitlab::syntax::{parse_fn, parse_set};

fn main() {
    for s in ["Q((0,1)) | cantor(0,1)", "[0,1] | (2,3) \\ points(5/2) & Q(R)", "family(1/n - (1/2)^n, 1/n, 2, (])"] {
        let e = parse_set(s).expect("valid set");
        println!("{s}\n  -> {e}");
    }
    let f = parse_fn("piecewise { x^2 - 1/2*x on [0, 1]; 1 on Q(R); else 0 } domain [-1, 1]").expect("valid function");
    println!("{f}");
    for bad in ["[0,", "cantor(0 1)", "blob(2)", "seq((2)^n)"] {
        println!("{bad:<14} {}", parse_set(bad).unwrap_err());
    }
}
