//! The Parry measure of the golden mean shift from certified Perron data,
//! with its Gibbs-ratio certificate.
//!
//! Run with `cargo run --example parry_measure`.

use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let golden = SoficPresentation::golden_mean();
    let phi = Potential::zero(golden.alphabet().clone());
    let model = GibbsModel::build(&golden, &phi, 1, None, &budget)?;
    let mu = model.measure(8, &budget)?;
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let closed = [
        ("0", g * g / (g * g + 1.0)),
        ("1", 1.0 / (g * g + 1.0)),
        ("00", g / (g * g + 1.0)),
        ("01", 1.0 / (g * g + 1.0)),
    ];
    println!("m = {}, n = {}, method {}", model.m(), model.n(), mu.provenance().method);
    for (w, exact) in closed {
        let a = golden.alphabet().parse_word(w)?;
        let e = mu.estimate(&a).expect("covered");
        println!(
            "  mu[{w}] = {:.15} in [{:.15}, {:.15}], closed form {exact:.15}",
            e.value, e.lo, e.hi
        );
    }
    for len in 1..=mu.depth() {
        let t = mu.total(len).expect("covered");
        println!(
            "  depth {len}: total {:.15}, stationarity defect {:.1e}",
            t.value,
            mu.stationarity_defect(len).unwrap_or(0.0)
        );
    }
    let p = model.pressure();
    let cert = gibbs_ratio_certificate(&mu, &phi, &p, 7)?;
    println!(
        "Gibbs ratio mu[a] / exp(S phi - |a| P) over |a| <= 8: [{:.12}, {:.12}] (log-radius {:.1e})",
        cert.min, cert.max, cert.log_radius
    );
    Ok(())
}
