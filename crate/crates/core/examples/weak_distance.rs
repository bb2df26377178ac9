//! The weak distance between cylinder measures, and its behavior under
//! multiplicative perturbations of the cylinder values.
//!
//! Run with `cargo run --example weak_distance`.

use std::collections::BTreeMap;

use sofic_gibbs::gibbs::{Cell, MeasureProvenance};
use sofic_gibbs::prelude::*;

/// Product measure of `p1 = P(1)` on words of length `depth`, with each
/// value multiplied by `exp(±eps)` according to a fixed pattern.
fn perturbed(p1: f64, depth: usize, eps: f64) -> Result<CylinderMeasure> {
    let mut top = BTreeMap::new();
    for (i, w) in Word::all(2, depth).into_iter().enumerate() {
        let ones = w.iter().filter(|&&s| s == 1).count() as i32;
        let value = p1.powi(ones) * (1.0 - p1).powi(depth as i32 - ones);
        let sign = if i % 3 == 0 { 1.0 } else { -1.0 };
        top.insert(
            w,
            Cell {
                value: value * (sign * eps).exp(),
                log_radius: 0.0,
            },
        );
    }
    let prov = MeasureProvenance {
        m: 0,
        n: None,
        p: None,
        method: "example".into(),
    };
    CylinderMeasure::from_top(Alphabet::binary(), depth, top, prov)
}

fn main() -> Result<()> {
    let a = perturbed(0.5, 11, 0.0)?;
    let b = perturbed(1.0 / 3.0, 11, 0.0)?;
    let d = weak_distance(&a, &b, 10)?;
    println!("D(B(1/2), B(1/3)) in [{:.10}, {:.10}]", d.lo, d.hi);
    for eps in [0.1, 0.01] {
        for k in [4, 8] {
            let mu = perturbed(0.4, k + 1, 0.0)?;
            let nu = perturbed(0.4, k + 1, eps)?;
            let d = weak_distance(&mu, &nu, k)?;
            println!(
                "  eps = {eps}, k = {k}: D <= {:.6} and (e^eps - 1) + 2^-k = {:.6}",
                d.hi,
                eps.exp_m1() + 0.5f64.powi(k as i32)
            );
        }
    }
    Ok(())
}
