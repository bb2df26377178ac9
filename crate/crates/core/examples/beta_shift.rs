//! A strictly sofic beta shift: pressure and entropy of its approximations.
//!
//! Run with `cargo run --example beta_shift`.

use sofic_gibbs::io::load_subshift;
use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/beta_shift.json");
    let (beta, _) = load_subshift(file.as_ref())?;
    let ell = specification_length(&beta, &budget)?;
    println!(
        "beta shift: {} vertices, specification length {ell}, magic word {}",
        beta.num_vertices(),
        beta.alphabet().render(&find_magic_word(&beta, &budget)?)
    );
    let phi = Potential::zero(beta.alphabet().clone());
    for m in 1..=8 {
        let model = GibbsModel::build(&beta, &phi, m, None, &budget)?;
        let p = model.pressure();
        println!(
            "  m = {m}: {} words, h_top(X_m) = {:.12} ± {:.1e}",
            model.transfer().dim(),
            p.value,
            p.radius
        );
    }
    Ok(())
}
