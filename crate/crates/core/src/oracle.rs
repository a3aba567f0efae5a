//! Sampling estimators used to cross-check the exact engine.
//!
//! Samples are exact rationals on a dyadic grid of `2^40` points across the
//! window. Sample `i` is drawn from the ChaCha stream of the seed at word
//! offset `2i`, so results do not depend on how the work is split across
//! threads. A grid misses or hits thin sets (rationals, Cantor sets,
//! sequences) systematically, so estimates for those are meaningless.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analyzers::{max_refine, measure_bounds};
use crate::error::{Error, Result};
use crate::rational::{from_u64, pow, to_f64, half, Rational};
use crate::setalg::trace::trace_of;
use crate::setalg::{NormalForm, SetExpr};

pub const GRID_BITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: u64,
    /// Center and radius of the sampled window.
    pub window: (Rational, Rational),
}

impl SampleConfig {
    pub fn new(seed: u64, samples: u64, center: Rational, radius: Rational) -> Self {
        Self { seed, samples, window: (center, radius) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

impl Estimate {
    pub fn three_sigma(&self) -> f64 {
        3.0 * self.std_error
    }

    pub fn within_three_sigma(&self, exact: f64) -> bool {
        (self.value - exact).abs() <= self.three_sigma()
    }
}

fn grid_index(seed: u64, i: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * i as u128);
    rng.next_u64() >> (64 - GRID_BITS)
}

/// Estimated measure of `expr` inside the closed window, `± 3σ` available
/// through [`Estimate::three_sigma`].
pub fn mc_measure(expr: &SetExpr, cfg: &SampleConfig) -> Result<Estimate> {
    let nf = NormalForm::of(expr)?;
    mc_measure_nf(&nf, cfg)
}

pub fn mc_measure_nf(nf: &NormalForm, cfg: &SampleConfig) -> Result<Estimate> {
    let (a, r) = &cfg.window;
    if r <= &Rational::zero() || cfg.samples == 0 {
        return Err(Error::Range("sampling needs a positive radius and at least one sample".into()));
    }
    let lo = a - r;
    let step = (r + r) / Rational::from_integer(BigInt::from(1u64) << GRID_BITS);
    let hits = (0..cfg.samples)
        .into_par_iter()
        .filter(|&i| {
            let x = &lo + &step * from_u64(grid_index(cfg.seed, i));
            nf.contains(&x)
        })
        .count() as u64;
    let n = cfg.samples as f64;
    let width = 2.0 * to_f64(r);
    let p = hits as f64 / n;
    Ok(Estimate {
        value: p * width,
        std_error: width * (p * (1.0 - p) / n).sqrt(),
        hits,
        samples: cfg.samples,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePoint {
    pub delta: Rational,
    pub ratio: f64,
    /// The exact ratio when the window measure was computed exactly.
    pub exact: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub points: Vec<ProfilePoint>,
    pub nonincreasing: bool,
}

/// `|E ∩ (a−δ, a+δ)| / 2δ` for `δ = 2^-k`, `k = 0..=depths`.
pub fn density_profile(expr: &SetExpr, a: &Rational, depths: u32, cfg: &SampleConfig) -> Result<Profile> {
    if depths > 40 {
        return Err(Error::Range("density profiles go at most 40 halvings deep".into()));
    }
    let nf = NormalForm::of(expr)?;
    let mut points = Vec::new();
    for k in 0..=depths {
        let delta = pow(&half(), k as u64);
        let trace = trace_of(&nf, a, &delta)?;
        let exact = match measure_bounds(&trace.normal_form(), max_refine()) {
            Ok(b) if b.is_exact() => Some(b.lo / (&delta + &delta)),
            _ => None,
        };
        let ratio = match &exact {
            Some(v) => to_f64(v),
            None => {
                let c = SampleConfig { window: (a.clone(), delta.clone()), ..cfg.clone() };
                mc_measure_nf(&trace.normal_form(), &c)?.value / (2.0 * to_f64(&delta))
            }
        };
        points.push(ProfilePoint { delta, ratio, exact });
    }
    let nonincreasing = points.windows(2).all(|w| w[1].ratio <= w[0].ratio);
    Ok(Profile { points, nonincreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::syntax::parse_set;

    #[test]
    fn deterministic_and_close() {
        let e = parse_set("[0, 1/3] | [1/2, 1]").unwrap();
        let cfg = SampleConfig::new(7, 20_000, half(), half());
        let a = mc_measure(&e, &cfg).unwrap();
        let b = mc_measure(&e, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.within_three_sigma(5.0 / 6.0), "{a:?}");
    }

    #[test]
    fn profiles() {
        let cfg = SampleConfig::new(1, 1000, int(0), int(1));
        let iv = parse_set("[0, 1]").unwrap();
        let p = density_profile(&iv, &int(0), 10, &cfg).unwrap();
        assert!(p.points.iter().all(|q| q.exact == Some(rat(1, 2))));
        let c = parse_set("cantor(0, 1)").unwrap();
        let p = density_profile(&c, &int(0), 8, &cfg).unwrap();
        assert!(p.points.iter().all(|q| q.ratio == 0.0));
        let om = parse_set("family(1/n - (1/2)^n, 1/n)").unwrap();
        let p = density_profile(&om, &int(0), 12, &cfg).unwrap();
        assert!(p.points.last().unwrap().ratio < 0.05);
    }
}
