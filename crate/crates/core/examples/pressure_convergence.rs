//! Convergence of pressure, entropy and Gibbs measures along the
//! approximations `X_m` of the even shift.
//!
//! Run with `cargo run --release --example pressure_convergence`.

use sofic_gibbs::gibbs::{convergence_study, StudyOptions};
use sofic_gibbs::io::load_potential;
use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let even = SoficPresentation::even_shift();
    let holder = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/holder.json");
    let potentials = [
        ("zero", Potential::zero(even.alphabet().clone())),
        ("holder", load_potential(holder.as_ref(), even.alphabet())?.0),
    ];
    let ms: Vec<usize> = (1..=8).collect();
    let opts = StudyOptions::default();
    for (name, phi) in &potentials {
        let study = convergence_study(&even, phi, &ms, &opts, &budget)?;
        println!("\npotential {name}");
        println!("   m   n   P(X_m)            gap          D_hi        |h_m - h_m+1|");
        for r in &study.rows {
            println!(
                "  {:2}  {:2}   {:.12}  {:.3e}  {:.3e}  {:.3e}",
                r.m, r.n, r.pressure.value, r.pressure_gap.value, r.distance.hi, r.entropy_gap.value
            );
        }
        if let Some(f) = study.pressure_fit {
            println!(
                "  fitted rate of the pressure gaps {:.4} (R² {:.4}); a-priori theta_FT {:?}",
                f.rate, f.r_squared, study.theta_ft
            );
        }
        if let Some(l) = study.limit {
            println!("  P(phi, X) in [{:.10}, {:.10}]", l.lo, l.hi);
        }
    }
    println!("\nlog of the golden ratio: {:.10}", ((1.0 + 5f64.sqrt()) / 2.0).ln());
    Ok(())
}
