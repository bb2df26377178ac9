//! Randomized invariants.

use proptest::prelude::*;
use sofic_gibbs::prelude::*;
use sofic_gibbs::transfer::SparseMatrix;

fn presentation(kind: u8) -> SoficPresentation {
    match kind {
        0 => SoficPresentation::golden_mean(),
        1 => SoficPresentation::even_shift(),
        2 => SoficPresentation::full_shift(2).unwrap(),
        _ => SoficPresentation::beta_shift(&[1, 1, 0, 1], 2).unwrap(),
    }
}

fn window_potential(alphabet: &Alphabet, weights: Vec<f64>) -> Potential {
    let range = weights.len();
    // var_j = Σ_{k>=j} |w_k| <= 2^{-j} Σ_k |w_k| 2^k.
    let c = weights
        .iter()
        .enumerate()
        .map(|(k, w)| w.abs() * 2f64.powi(k as i32))
        .sum::<f64>()
        + 1.0;
    Potential::from_fn(
        alphabet.clone(),
        range,
        Variation::Exponential { c, theta: 0.5 },
        move |w| {
            w.iter()
                .zip(&weights)
                .map(|(&s, wt)| s as f64 * wt)
                .sum()
        },
    )
    .unwrap()
}

fn positive_matrix(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, d), d)
        .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(f64::exp).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gibbs_measures_are_normalized_and_stationary(
        kind in 0u8..4,
        m in 1usize..4,
        weights in prop::collection::vec(-1.0f64..1.0, 1..4),
    ) {
        let b = Budget::default();
        let p = presentation(kind);
        let phi = window_potential(p.alphabet(), weights);
        let model = GibbsModel::build(&p, &phi, m, None, &b).unwrap();
        let mu = model.measure(6, &b).unwrap();
        for len in 1..=6 {
            let total = mu.total(len).unwrap();
            prop_assert!((total.value - 1.0).abs() <= 1e-11, "len {}: {}", len, total.value);
        }
        for len in 1..=5 {
            prop_assert!(mu.stationarity_defect(len).unwrap() <= 1e-11);
        }
    }

    #[test]
    fn pressure_decreases_with_the_order(
        kind in 0u8..4,
        weights in prop::collection::vec(-1.0f64..1.0, 1..4),
    ) {
        let b = Budget::default();
        let p = presentation(kind);
        let phi = window_potential(p.alphabet(), weights);
        let mut previous = f64::INFINITY;
        for m in 1..=5 {
            let pr = GibbsModel::build(&p, &phi, m, None, &b).unwrap().pressure();
            prop_assert!(pr.value <= previous + 2.0 * pr.radius + 1e-12);
            previous = pr.value;
        }
    }

    #[test]
    fn ratio_certificate_is_stable_in_depth(
        kind in 0u8..4,
        m in 1usize..4,
        weights in prop::collection::vec(-1.0f64..1.0, 1..3),
    ) {
        let b = Budget::default();
        let p = presentation(kind);
        let phi = window_potential(p.alphabet(), weights);
        let model = GibbsModel::build(&p, &phi, m, None, &b).unwrap();
        let mu = model.measure(10, &b).unwrap();
        let short = gibbs_ratio_certificate(&mu, &phi, &model.pressure(), 5).unwrap();
        let long = gibbs_ratio_certificate(&mu, &phi, &model.pressure(), 9).unwrap();
        // Deeper levels only widen the extremes, and stay bounded away from
        // zero and infinity.
        prop_assert!(long.min <= short.min * (1.0 + 1e-12));
        prop_assert!(long.max >= short.max * (1.0 - 1e-12));
        prop_assert!(long.min > 0.0 && long.max.is_finite());
        prop_assert!(long.max / long.min <= 1e6);
    }

    #[test]
    fn positive_matrices_contract_the_projective_metric(
        rows in (2usize..6).prop_flat_map(positive_matrix),
        seeds in prop::collection::vec(-2.0f64..2.0, 12),
    ) {
        let d = rows.len();
        let x: Vec<f64> = seeds[..d].iter().map(|v| v.exp()).collect();
        let y: Vec<f64> = seeds[6..6 + d].iter().map(|v| v.exp()).collect();
        let m = SparseMatrix::from_dense(&rows).unwrap();
        let (_, tau) = gamma_tau(&m.to_dense());
        prop_assert!(tau < 1.0);
        let before = projective_distance(&x, &y).unwrap();
        let after = projective_distance(&m.mul_vec(&x), &m.mul_vec(&y)).unwrap();
        prop_assert!(after <= tau * before + 1e-12 * (1.0 + before));
    }

    #[test]
    fn weak_distance_is_a_symmetric_bracketed_metric(
        a in 1usize..4,
        b in 1usize..4,
        weights in prop::collection::vec(-1.0f64..1.0, 1..3),
    ) {
        let budget = Budget::default();
        let p = SoficPresentation::even_shift();
        let phi = window_potential(p.alphabet(), weights);
        let mu = GibbsModel::build(&p, &phi, a, None, &budget).unwrap().measure(7, &budget).unwrap();
        let nu = GibbsModel::build(&p, &phi, b, None, &budget).unwrap().measure(7, &budget).unwrap();
        let d1 = weak_distance(&mu, &nu, 6).unwrap();
        let d2 = weak_distance(&nu, &mu, 6).unwrap();
        prop_assert!((d1.value - d2.value).abs() <= 1e-15);
        prop_assert!(d1.is_well_formed() && d1.lo >= 0.0 && d1.hi <= 2.0);
        let self_d = weak_distance(&mu, &mu, 6).unwrap();
        prop_assert_eq!(self_d.value, 0.0);
    }
}
