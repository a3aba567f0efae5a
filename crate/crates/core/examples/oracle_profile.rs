//! Monte Carlo cross-check of the exact measure and the density profile of Ω.
use limitlab::analyzers::measure;
use limitlab::oracle::{density_profile, mc_measure, SampleConfig};
use limitlab::rational::{half, int, to_f64};
use limitlab::syntax::parse_set;

fn main() -> limitlab::Result<()> {
    let omega = parse_set("family(1/n - (1/2)^n, 1/n)")?;
    let exact = measure(&omega)?;
    let est = mc_measure(&omega, &SampleConfig::new(42, 100_000, half(), half()))?;
    println!("exact {exact} ≈ {:.5}; estimate {:.5} ± {:.5}", to_f64(&exact.value), est.value, est.three_sigma());
    let cfg = SampleConfig::new(42, 10_000, int(0), int(1));
    for p in density_profile(&omega, &int(0), 12, &cfg)?.points {
        println!("δ = {:<6} ratio {:.6}", p.delta.to_string(), p.ratio);
    }
    Ok(())
}
