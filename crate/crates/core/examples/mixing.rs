//! Mixing ratios of the golden Parry measure against the spectral closed
//! form `|ratio - 1| = g^{-2(s-1)}` for a = b = "1" (s >= 1), which comes
//! from the second eigenvalue `-1/g` of the golden mean matrix.
//!
//! Run with `cargo run --example mixing`.

use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let golden = SoficPresentation::golden_mean();
    let phi = Potential::zero(golden.alphabet().clone());
    let model = GibbsModel::build(&golden, &phi, 1, None, &budget)?;
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let one = [1u8];
    for s in 1..=12 {
        let r = model.mixing_ratio(&one, &one, s)?;
        println!(
            "  s = {s:2}: |ratio - 1| = {:.12e} in [{:.12e}, {:.12e}], closed form {:.12e}",
            r.value,
            r.lo,
            r.hi,
            g.powi(-2 * (s as i32 - 1))
        );
    }
    // Overlapping cylinders need the direct summation.
    let overlap = mixing_ratio_direct(
        model.transfer(),
        &phi,
        model.perron(),
        &[1, 0],
        &[0, 1],
        1,
        &budget,
    )?;
    println!("  a = 10, b = 01, s = 1 (overlap): |ratio - 1| = {:.12}", overlap.value);
    Ok(())
}
