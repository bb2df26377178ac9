//! Transfer matrices and certified Perron data through projective
//! contraction.
//!
//! Run with `cargo run --example perron`.

use sofic_gibbs::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let golden = SoficPresentation::golden_mean();
    let phi = Potential::zero(golden.alphabet().clone());
    let x = build_sft(&golden, 1, &budget)?;
    let tm = build_transfer(&x, 1, &phi, &budget)?;
    println!("M_(1,1) on {} words:", tm.dim());
    let mut coo = Vec::new();
    tm.dump_coo(golden.alphabet(), &mut coo)?;
    print!("{}", String::from_utf8_lossy(&coo));

    let dense = tm.matrix().to_dense();
    let (gamma, tau) = gamma_tau(&dense);
    println!("Birkhoff data of M itself: Gamma = {gamma}, tau = {tau} (not positive)");

    let pd = perron(tm.matrix(), 3, &PerronOptions::default())?;
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    println!(
        "rho = {:.15} (golden ratio {g:.15}), log-radius {:.2e}, tau(M^{}) = {:.4}, {} iterations",
        pd.rho, pd.log_rho_radius, pd.l, pd.tau, pd.iterations
    );
    println!("v = {:?}\nw = {:?}", pd.v, pd.w);

    // Contraction of the projective distance under one application of M^L.
    let a = vec![1.0, 2.0, 3.0];
    let b = vec![3.0, 1.0, 2.0];
    let mut fa = a.clone();
    let mut fb = b.clone();
    for _ in 0..pd.l {
        fa = tm.mul_vec(&fa);
        fb = tm.mul_vec(&fb);
    }
    println!(
        "d(a, b) = {:.6}, d(M^L a, M^L b) = {:.6} <= tau d(a, b) = {:.6}",
        projective_distance(&a, &b)?,
        projective_distance(&fa, &fb)?,
        pd.tau * projective_distance(&a, &b)?
    );

    // Certified estimate of M^k x from the Perron data.
    let (est, radius) = power_estimate(tm.matrix(), &pd, &[1.0, 0.0, 0.0], 30)?;
    println!("M^30 e_0 ~ {est:?} within log-radius {radius:.2e}");
    Ok(())
}
