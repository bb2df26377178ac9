//! A-priori constants of the convergence theorems.
//!
//! These constants are assembled from the presentation and the potential
//! and are reported next to the measured rates. They are deliberately
//! loose and are never used to decide correctness.

use serde::Serialize;

use crate::potential::Potential;
use crate::symbolic::{magic_boundary_constants, MagicConstants, SoficPresentation};
use crate::{Budget, Result};

/// Smallest value accepted for `θ_𝓔`. Every bound stated with some `θ_𝓔`
/// remains valid for any larger value below one, and the polynomial
/// prefactors degenerate as `θ_𝓔 → 0`.
const THETA_E_FLOOR: f64 = 0.5;

/// Upper end of the searches for thresholds `m_0`, `m̃` and `s_0`.
const SEARCH_CAP: u64 = 1 << 52;

/// Smallest `s` with `f(k) <= 1` for all `k >= s`, assuming `log f` is
/// concave on the integers (so `{f > 1}` is an interval). `None` when no
/// such `s` is found below [`SEARCH_CAP`].
fn threshold(f: impl Fn(f64) -> f64) -> Option<u64> {
    // Find a point on the decreasing branch with f <= 1.
    let mut hi = 1u64;
    loop {
        let x = hi as f64;
        if f(x) <= 1.0 && f(x + 1.0) <= f(x) {
            break;
        }
        hi = hi.checked_mul(2).filter(|&h| h <= SEARCH_CAP)?;
    }
    // Locate the maximum on [0, hi] by ternary search over integers.
    let (mut a, mut b) = (0u64, hi);
    while b - a > 2 {
        let m1 = a + (b - a) / 3;
        let m2 = b - (b - a) / 3;
        if f(m1 as f64) < f(m2 as f64) {
            a = m1 + 1;
        } else {
            b = m2;
        }
    }
    let peak = (a..=b)
        .max_by(|&x, &y| f(x as f64).total_cmp(&f(y as f64)))
        .expect("nonempty range");
    if f(peak as f64) <= 1.0 {
        return Some(0);
    }
    // f(peak) > 1 >= f(hi); find the first k in (peak, hi] with f(k) <= 1.
    let (mut lo, mut up) = (peak, hi);
    while up - lo > 1 {
        let mid = lo + (up - lo) / 2;
        if f(mid as f64) > 1.0 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    Some(up)
}

/// Constants of the lemmas and theorems behind the approximation scheme.
///
/// Fields that need exponential variation (`θ`) are `None` for potentials
/// with polynomial variation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofConstants {
    pub alphabet_size: usize,
    pub ell: usize,
    pub norm: f64,
    pub lambda: f64,
    pub c: f64,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub magic: MagicConstants,
    /// `K₀ = (e^C #A)^ℓ e^{Λθ}`, bounding `1 / (1 - τ)`.
    pub k0: f64,
    /// `K₁ = 2((ℓ+1)(log #A + C) + Λθ + ‖φ‖)`.
    pub k1: f64,
    pub c_e: Option<f64>,
    pub theta_e: Option<f64>,
    pub c_p: Option<f64>,
    pub theta_p: Option<f64>,
    pub m_p: Option<u64>,
    pub m_star: Option<u64>,
    pub theta_ft: Option<f64>,
    pub gamma_ft: Option<f64>,
    pub theta_mu: Option<f64>,
    pub s0: Option<u64>,
    pub c_h: Option<f64>,
    pub theta_h: Option<f64>,
}

impl ProofConstants {
    pub fn compute(p: &SoficPresentation, phi: &Potential, budget: &Budget) -> Result<Self> {
        let magic = magic_boundary_constants(p, phi, budget)?;
        let d = phi.derived_constants();
        let size = p.alphabet().len();
        let ell = magic.ell;
        let a = size as f64;
        // Λθ for exponential variation; Λ itself otherwise.
        let lt = d.lambda * d.theta.unwrap_or(1.0);
        let k0 = (d.c.exp() * a).powi(ell as i32) * lt.exp();
        let k1 = 2.0 * ((ell as f64 + 1.0) * (a.ln() + d.c) + lt + d.norm);
        let mut out = Self {
            alphabet_size: size,
            ell,
            norm: d.norm,
            lambda: d.lambda,
            c: d.c,
            theta: d.theta,
            alpha: d.alpha,
            magic,
            k0,
            k1,
            c_e: None,
            theta_e: None,
            c_p: None,
            theta_p: None,
            m_p: None,
            m_star: None,
            theta_ft: None,
            gamma_ft: None,
            theta_mu: None,
            s0: None,
            c_h: None,
            theta_h: None,
        };
        let Some(theta) = d.theta else {
            return Ok(out);
        };
        let l = ell as f64;
        let (c_x, theta_x) = (out.magic.c_x, out.magic.theta_x);
        let c_e = 2.0 * (d.c + k0 * k1);
        let theta_e = (1.0 - 1.0 / k0).max(theta).max(THETA_E_FLOOR);
        let theta_p = theta.max(theta_x).max(theta_e);
        let c_p = 2.0 * c_x + c_e * theta_e * theta_e + d.lambda * theta * theta;
        let m0 = threshold(|m| 2.0 * c_x * ((m + 2.0) * (m + l + 2.0) + 1.0) * theta_x.powf(m));
        let m_tilde =
            threshold(|k| 4.0 * ((k + l + 1.0).powi(2) + 1.0) * c_x * theta_x.powf(k));
        let m_x = out.magic.m_x as u64;
        out.c_e = Some(c_e);
        out.theta_e = Some(theta_e);
        out.theta_p = Some(theta_p);
        out.c_p = Some(c_p);
        out.m_p = m0.map(|m| m.max(m_x));
        out.m_star = m_tilde.map(|m| m.max(m_x));
        out.theta_ft = Some(theta_e.max(theta_x).max(0.5));
        out.gamma_ft = out.m_star.map(|ms| {
            let ms = ms as f64;
            4.0 * l * (a.ln() + d.norm)
                + 4.0 * d.lambda
                + 4.0 * c_x * out.q_x(ms).unwrap_or(f64::INFINITY) * theta_x.powf(ms - 1.0)
                + 2.0 * c_e * out.q_e(ms).unwrap_or(f64::INFINITY) * theta.powf(ms)
        });
        out.theta_mu = Some(theta_e.sqrt());
        out.s0 = threshold(|k| {
            let r = k.sqrt();
            5.0 * ((2.0 * r + l + 1.0).powi(2) + 1.0)
                * c_e
                * theta_e.powf(r / 2.0 - (l + 5.0) / 4.0)
        });
        out.c_h = Some(c_p / (1.0 - theta_p) + d.c);
        out.theta_h = Some(theta_p.max(theta));
        Ok(out)
    }

    /// Upper bound `1 - 1/K₀` on the Birkhoff coefficient of the transfer
    /// matrices.
    pub fn tau_bound(&self) -> f64 {
        1.0 - 1.0 / self.k0
    }

    fn q_shape(x: f64, ell: f64, lt: f64) -> f64 {
        let y = x + ell + 2.0;
        -(y * y + 1.0) / lt + 2.0 * y / (lt * lt) - 2.0 / (lt * lt * lt)
    }

    /// `Q_𝓔(x)`.
    pub fn q_e(&self, x: f64) -> Option<f64> {
        self.theta_e
            .map(|t| Self::q_shape(x, self.ell as f64, t.ln()))
    }

    /// `Q_X(x)`.
    pub fn q_x(&self, x: f64) -> Option<f64> {
        Some(Self::q_shape(x, self.ell as f64, self.magic.theta_x.ln()))
    }

    /// `Q(x)`.
    pub fn q(&self, x: f64) -> Option<f64> {
        self.theta_e.map(|t| {
            let lt = t.ln();
            -2.0 * x * (x * x + 3.0) / lt + 6.0 * (x * x + 1.0) / lt.powi(2) - 12.0 * x / lt.powi(3)
                + 12.0 / lt.powi(4)
        })
    }

    /// `Q_FT(m)`.
    pub fn q_ft(&self, m: f64) -> Option<f64> {
        let (c_e, t_e) = (self.c_e?, self.theta_e?);
        let l = self.ell as f64;
        let (c_x, t_x) = (self.magic.c_x, self.magic.theta_x);
        Some(
            4.0 * c_e * (t_e.powf(-(l / 2.0 + 1.0)) * self.q(m)? + self.q_e(m)? / t_e)
                + 8.0 * c_x * self.q_x(m)? / t_x
                + (m + 3.0) * 2f64.powf(l / 2.0 + 3.0)
                + 2.0,
        )
    }

    /// A-priori bound `Q_FT(m) θ_FT^m` on the weak distance between the
    /// Gibbs measures of `X_m` and of `X`.
    pub fn ft_bound(&self, m: usize) -> Option<f64> {
        Some(self.q_ft(m as f64)? * self.theta_ft?.powi(m as i32))
    }

    /// `Q_μ(x)`.
    pub fn q_mu(&self, x: f64) -> Option<f64> {
        let (c_e, t_e, g) = (self.c_e?, self.theta_e?, self.gamma_ft?);
        let l = self.ell as f64;
        Some(
            10.0 * c_e * (4.0 * g).exp() * t_e.powf(-(l + 5.0) / 4.0)
                * ((2.0 * x + l + 1.0).powi(2) + 1.0),
        )
    }

    /// A-priori mixing bound `Q_μ(√s) θ_μ^{√s}`.
    pub fn mixing_bound(&self, s: usize) -> Option<f64> {
        let r = (s as f64).sqrt();
        Some(self.q_mu(r)? * self.theta_mu?.powf(r))
    }

    /// Gap beyond which the a-priori mixing bound applies to words of
    /// lengths `n + 1` and `n' + 1`.
    pub fn s_star(&self, n: usize, n_prime: usize) -> Option<f64> {
        let big = n.max(n_prime) as f64;
        Some((big * big / 4.0).max(self.s0? as f64))
    }

    /// A-priori bound `C_P θ_P^m` on `P(φ, X_m) - P(φ, X_{m+1})`.
    pub fn pressure_bound(&self, m: usize) -> Option<f64> {
        Some(self.c_p? * self.theta_p?.powi(m as i32))
    }

    /// A-priori bound `C_h θ_h^m` on `|h(μ_φ) - h(μ_φ^m)|`.
    pub fn entropy_bound(&self, m: usize) -> Option<f64> {
        Some(self.c_h? * self.theta_h?.powi(m as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;
    use crate::Variation;

    #[test]
    fn threshold_search() {
        assert_eq!(threshold(|x| 0.5f64.powf(x) * 8.0), Some(3));
        assert_eq!(threshold(|_| 0.5), Some(0));
        assert_eq!(threshold(|x| (x + 1.0) * 0.9f64.powf(x) * 10.0), Some(62));
    }

    #[test]
    fn full_shift_constants() {
        let p = SoficPresentation::full_shift(2).unwrap();
        let phi = Potential::zero(Alphabet::binary());
        let k = ProofConstants::compute(&p, &phi, &Budget::default()).unwrap();
        assert_eq!(k.ell, 0);
        assert_eq!(k.k0, 1.0);
        assert!((k.k1 - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(k.theta_ft, Some(0.75));
        assert!(k.m_p.is_some() && k.s0.is_some());
    }

    #[test]
    fn polynomial_variation_limits_constants() {
        let a = Alphabet::binary();
        let phi = Potential::from_table(
            a.clone(),
            1,
            vec![0.0, 0.5],
            Variation::Polynomial { c: 1.0, alpha: 5.0 },
        )
        .unwrap();
        let k = ProofConstants::compute(&SoficPresentation::golden_mean(), &phi, &Budget::default())
            .unwrap();
        assert!(k.k0 > 1.0 && k.c_e.is_none() && k.q_ft(3.0).is_none());
    }
}
