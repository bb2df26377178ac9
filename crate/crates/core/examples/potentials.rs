//! Locally constant potentials: tables, variations, finite-range
//! approximations and Birkhoff sums.
//!
//! Run with `cargo run --example potentials`.

use sofic_gibbs::io::load_potential;
use sofic_gibbs::potential::Sequence;
use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let alphabet = Alphabet::binary();
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/holder.json");
    let (phi, _) = load_potential(file.as_ref(), &alphabet)?;
    let d = phi.derived_constants();
    println!("potential {} of range {}", phi.id(), phi.range());
    println!(
        "  sup norm {:.6}, declared Lambda {:.6}, exact Lambda {:.6}, C {}, theta {:?}",
        d.norm, d.lambda, d.exact_lambda, d.c, d.theta
    );
    for j in 0..=phi.range() {
        println!("  var_{j} = {:.6}", phi.exact_variation(j));
    }

    // phi^n only sees n + 1 coordinates; it is exact once n + 1 >= range.
    let x = alphabet.parse_word("1011001")?;
    for n in 0..phi.range() + 1 {
        println!(
            "  phi^{n}({}) = {:.6}",
            alphabet.render(&x[..n + 1]),
            finite_range(&phi, n, &x[..n + 1])?
        );
    }

    // Birkhoff sums along the periodic point (10)^inf.
    let period = alphabet.parse_word("10")?;
    for k in [0, 1, 5, 9] {
        let s = birkhoff_sum(&phi, Sequence::Periodic(&period), k)?;
        println!("  S_{k} phi((10)^inf) = {s:.6}");
    }

    // A Bernoulli potential has pressure zero on the full shift.
    let bern = Potential::bernoulli(alphabet, &[1.0 / 3.0, 2.0 / 3.0])?;
    println!("\nBernoulli(1/3, 2/3): table {:?}", bern.table());
    Ok(())
}
