//! Entropy by the variational identity, block entropies, and relative
//! entropy between Bernoulli measures.
//!
//! Run with `cargo run --example entropy`.

use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let golden = SoficPresentation::golden_mean();
    let zero = Potential::zero(golden.alphabet().clone());
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    for m in 1..=3 {
        let model = GibbsModel::build(&golden, &zero, m, None, &budget)?;
        let h = model.entropy(12, &budget)?;
        println!(
            "golden m={m}: h = {:.12} in [{:.12}, {:.12}], H_12 - H_11 = {:.12}, H_12/12 = {:.6} (log g = {:.12})",
            h.variational.value,
            h.variational.lo,
            h.variational.hi,
            h.conditional,
            h.block_average,
            g.ln()
        );
    }

    let full = SoficPresentation::full_shift(2)?;
    let psi = Potential::bernoulli(full.alphabet().clone(), &[1.0 / 3.0, 2.0 / 3.0])?;
    let half = Potential::bernoulli(full.alphabet().clone(), &[0.5, 0.5])?;
    let reference = GibbsModel::build(&full, &psi, 0, Some(0), &budget)?;
    let nu_model = GibbsModel::build(&full, &half, 0, Some(0), &budget)?;
    let nu = nu_model.measure(4, &budget)?;
    let h_nu = nu_model.entropy(4, &budget)?.variational;
    let d = relative_entropy(&nu, h_nu, &psi, reference.transfer(), reference.perron())?;
    println!(
        "h(B(1/2) | B(1/3, 2/3)) = {:.12} in [{:.12}, {:.12}], closed form {:.12}",
        d.value,
        d.lo,
        d.hi,
        0.5 * (9.0f64 / 8.0).ln()
    );
    Ok(())
}
