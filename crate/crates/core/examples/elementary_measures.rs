//! Elementary periodic-orbit measures: direct enumeration against the
//! transfer-matrix trace formula, and their approach to the Gibbs measure.
//!
//! Run with `cargo run --example elementary_measures`.

use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let golden = SoficPresentation::golden_mean();
    let phi = Potential::bernoulli(golden.alphabet().clone(), &[0.6, 0.4])?;
    let (m, n) = (1, 1);
    let x = build_sft(&golden, m, &budget)?;

    let p = 6;
    let points = enumerate_periodic(&x, p, &budget)?;
    println!("{} periodic points of period {}", points.len(), p + 1);
    let direct = elementary_measure(&x, p, &phi, &budget)?;
    for a in x.admissible_words(n, &budget)? {
        let trace = elementary_via_trace(&x, n, p, &phi, &a, &budget)?;
        let e = direct.value(&a);
        println!(
            "  E[{}]: enumeration {e:.12}, trace formula {:.12} in [{:.12}, {:.12}]",
            golden.alphabet().render(&a),
            trace.value,
            trace.lo,
            trace.hi
        );
    }

    // The elementary measures approach the Gibbs measure as p grows.
    let model = GibbsModel::build(&golden, &phi, m, Some(n), &budget)?;
    let mu = model.measure(11, &budget)?;
    for p in [10, 14, 18, 22] {
        let e = elementary_measure(&x, p, &phi, &budget)?.truncated(11)?;
        let d = weak_distance(&e, &mu, 10)?;
        println!("  p = {p:2}: D(E_p, mu) in [{:.3e}, {:.3e}]", d.lo, d.hi);
    }
    Ok(())
}
