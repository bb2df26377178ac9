//! Sofic presentations, magic words, specification length and the
//! finite-type approximations `X_m`.
//!
//! Run with `cargo run --example presentations`.

use sofic_gibbs::io::load_subshift;
use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/even_shift.json");
    let (even_file, input) = load_subshift(file.as_ref())?;
    println!("loaded {file} (sha256 {})", input.sha256);

    let cases = [
        ("full shift", SoficPresentation::full_shift(2)?),
        ("golden mean", SoficPresentation::golden_mean()),
        ("even shift", even_file),
        ("beta shift 1 1 (0 1)^inf", SoficPresentation::beta_shift(&[1, 1, 0, 1], 2)?),
    ];
    for (name, p) in &cases {
        let magic = find_magic_word(p, &budget)?;
        let ell = specification_length(p, &budget)?;
        println!(
            "\n{name}: {} vertices, {} edges, magic word {:?}, specification length {ell}",
            p.num_vertices(),
            p.num_edges(),
            p.alphabet().render(&magic),
        );
        print!("  #L_n for n = 0..8:");
        for n in 0..9 {
            print!(" {}", admissible_words(p, n).len());
        }
        println!();
        for m in 1..=4 {
            let x = build_sft(p, m, &budget)?;
            let in_x = admissible_words(p, m + 1).len();
            let in_xm = x.words_of_length(m + 2, &budget)?.len();
            println!(
                "  X_{m}: {} words of length {}; {in_xm} of length {} versus {in_x} in X",
                x.len(),
                m + 1,
                m + 2,
            );
        }
    }
    Ok(())
}
