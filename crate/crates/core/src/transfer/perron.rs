use serde::Serialize;

use super::matrix::{DenseMatrix, SparseMatrix};
use super::projective::{gamma_tau, projective_distance};
use crate::{Budget, Error, Result};

/// Number of consecutive checkpoints without improvement of the certified
/// bound after which the iteration is declared stuck.
const STALL_CHECKS: usize = 200;

/// Settings of the certified power iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronOptions {
    /// Target for the certified projective distance to the eigenvectors.
    pub tol: f64,
    /// Iteration cap per eigenvector.
    pub max_iter: usize,
    /// Largest dimension for which the dense power `M^L` is formed.
    pub dense_limit: usize,
    /// Upper bound on the Birkhoff coefficient of `M^L` used when the matrix
    /// is too large for a dense power.
    pub tau_fallback: Option<f64>,
}

impl Default for PerronOptions {
    fn default() -> Self {
        Self::from_budget(&Budget::default(), 1e-12)
    }
}

impl PerronOptions {
    pub fn from_budget(budget: &Budget, tol: f64) -> Self {
        Self {
            tol,
            max_iter: budget.max_iterations,
            dense_limit: budget.dense_limit,
            tau_fallback: None,
        }
    }

    pub fn with_tau_fallback(mut self, tau: f64) -> Self {
        self.tau_fallback = Some(tau);
        self
    }
}

/// Perron eigendata of a primitive nonnegative matrix with certified radii.
///
/// Radii are multiplicative: every entry `v_i` lies within
/// `exp(±v_radius)` of the exact normalized eigenvector, and likewise for
/// `w` and `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronData {
    pub rho: f64,
    pub log_rho: f64,
    /// Right eigenvector with `Σ v = 1`.
    pub v: Vec<f64>,
    /// Left eigenvector with `w · v = 1`.
    pub w: Vec<f64>,
    /// Birkhoff coefficient of `M^l` (or its declared upper bound).
    pub tau: f64,
    pub gamma: f64,
    /// Power whose contraction coefficient is `tau`.
    pub l: usize,
    pub v_radius: f64,
    pub w_radius: f64,
    pub log_rho_radius: f64,
    /// Largest of the three radii.
    pub err: f64,
    pub iterations: usize,
}

/// Rounding error of one normalized matrix-vector product, measured in the
/// projective metric.
fn step_rounding(m: &SparseMatrix) -> f64 {
    let widest = (0..m.dim()).map(|i| m.row(i).count()).max().unwrap_or(0);
    2.0 * (widest as f64 + 2.0) * f64::EPSILON
}

fn normalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
}

/// Collatz-Wielandt bracket `[min_i (Mx)_i / x_i, max_i (Mx)_i / x_i]`.
fn collatz_wielandt(x: &[f64], mx: &[f64]) -> (f64, f64) {
    x.iter().zip(mx).fold((f64::INFINITY, 0.0f64), |(lo, hi), (&a, &b)| {
        let r = b / a;
        (lo.min(r), hi.max(r))
    })
}

/// Contraction data `(Γ, τ, L)` for the powers of `m`, starting at `l`.
fn contraction(m: &SparseMatrix, l: usize, opts: &PerronOptions) -> Result<(f64, f64, usize)> {
    let n = m.dim();
    let l = l.max(1);
    if n > opts.dense_limit {
        return match opts.tau_fallback {
            Some(t) if (0.0..1.0).contains(&t) => Ok((0.0, t, l)),
            _ => Err(Error::BudgetExceeded {
                what: "dense matrix power",
                size: n,
                budget: opts.dense_limit,
            }),
        };
    }
    let wielandt = n * n - 2 * n + 2;
    let (mut power, _) = DenseMatrix::scaled_power(m, l);
    let mut exponent = l;
    while !power.is_positive() {
        if exponent >= wielandt.max(l) {
            return Err(Error::NotPrimitive {
                checked_up_to: exponent,
            });
        }
        power = power.mul_sparse(m);
        power.normalize();
        exponent += 1;
    }
    let (gamma, tau) = gamma_tau(&power);
    Ok((gamma, tau, exponent))
}

struct Eigen {
    x: Vec<f64>,
    radius: f64,
    cw: (f64, f64),
    iterations: usize,
}

/// Power iteration of `x ↦ Mx / |Mx|₁` with the contraction bound of
/// `M^l`, where `apply` computes `Mx`.
fn iterate(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    dim: usize,
    tau: f64,
    l: usize,
    rounding: f64,
    opts: &PerronOptions,
) -> Result<Eigen> {
    let step = |x: &[f64]| {
        let mut y = apply(x);
        normalize(&mut y);
        y
    };
    let x0 = vec![1.0 / dim as f64; dim];
    let mut x = x0.clone();
    // d_M(x0) = min(l d(x0, F x0), d(x0, F^l x0)).
    let mut trail = Vec::with_capacity(l + 1);
    trail.push(x.clone());
    for _ in 0..l {
        x = step(&x);
        trail.push(x.clone());
    }
    let d_one = projective_distance(&trail[0], &trail[1])?;
    let d_l = projective_distance(&trail[0], &trail[l])?;
    let d_m = (l as f64 * d_one).min(d_l);
    let floor = l as f64 * rounding / (1.0 - tau);

    let mut k = l;
    let mut checkpoint = trail[0].clone();
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    loop {
        // Here x = F^k x0 and checkpoint = F^{k-l} x0.
        let a_priori = tau.powi((k / l) as i32) * d_m / (1.0 - tau);
        let a_posteriori = tau * projective_distance(&checkpoint, &x)? / (1.0 - tau);
        let bound = a_priori.min(a_posteriori);
        if bound <= opts.tol || tau == 0.0 {
            let mx = apply(&x);
            return Ok(Eigen {
                cw: collatz_wielandt(&x, &mx),
                x,
                radius: bound + floor,
                iterations: k,
            });
        }
        if bound < best * (1.0 - 1e-9) {
            best = bound;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if k >= opts.max_iter || stalled >= STALL_CHECKS {
            return Err(Error::NoConvergence {
                iterations: k,
                bound,
            });
        }
        checkpoint = x.clone();
        for _ in 0..l {
            x = step(&x);
        }
        k += l;
    }
}

/// Certified Perron data of the primitive matrix `m`.
///
/// `l` is the first power tried for the contraction coefficient; it is
/// raised until `M^l` is positive. The right eigenvector `v` comes from
/// iterating `M`, the left eigenvector `w` from iterating `Mᵀ` (the two
/// share the same coefficient), and `ρ` is bracketed by Collatz-Wielandt
/// ratios at the final iterate.
pub fn perron(m: &SparseMatrix, l: usize, opts: &PerronOptions) -> Result<PerronData> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::Config("empty matrix".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if n == 1 {
        let rho = m.get(0, 0);
        if rho <= 0.0 {
            return Err(Error::NotPrimitive { checked_up_to: 1 });
        }
        return Ok(PerronData {
            rho,
            log_rho: rho.ln(),
            v: vec![1.0],
            w: vec![1.0],
            tau: 0.0,
            gamma: 1.0,
            l: 1,
            v_radius: 0.0,
            w_radius: 0.0,
            log_rho_radius: 0.0,
            err: 0.0,
            iterations: 0,
        });
    }
    let (gamma, tau, l) = contraction(m, l, opts)?;
    let rounding = step_rounding(m);
    let mt = m.transpose();
    let (right, left) = rayon::join(
        || iterate(|x| m.mul_vec(x), n, tau, l, rounding, opts),
        || iterate(|x| mt.mul_vec(x), n, tau, l, step_rounding(&mt), opts),
    );
    let (right, left) = (right?, left?);

    let v = right.x;
    let dot: f64 = left.x.iter().zip(&v).map(|(a, b)| a * b).sum();
    let w: Vec<f64> = left.x.iter().map(|a| a / dot).collect();

    // Both brackets contain ρ; intersect them.
    let lo = right.cw.0.max(left.cw.0);
    let hi = right.cw.1.min(left.cw.1).max(lo);
    let log_rho = 0.5 * (lo.ln() + hi.ln());
    let log_rho_radius = 0.5 * (hi.ln() - lo.ln()) + rounding;
    let v_radius = right.radius;
    let w_radius = left.radius + right.radius + rounding;
    Ok(PerronData {
        rho: log_rho.exp(),
        log_rho,
        v,
        w,
        tau,
        gamma,
        l,
        v_radius,
        w_radius,
        log_rho_radius,
        err: v_radius.max(w_radius).max(log_rho_radius),
        iterations: right.iterations.max(left.iterations),
    })
}

/// Estimate of `M^k x` as `ρ^k (w · x) v` without forming `k` products.
///
/// Returns the estimate and a log radius: each entry of the exact `M^k x`
/// lies within `exp(±radius)` of the estimate. When `x` has zero entries the
/// first products are taken explicitly until the iterate is positive.
pub fn power_estimate(
    m: &SparseMatrix,
    pd: &PerronData,
    x: &[f64],
    k: usize,
) -> Result<(Vec<f64>, f64)> {
    let n = m.dim();
    if x.len() != n || pd.v.len() != n {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: n,
        });
    }
    if let Some(i) = x.iter().position(|&a| !(a >= 0.0 && a.is_finite())) {
        return Err(Error::NonPositiveEntry { index: i });
    }
    let rounding = step_rounding(m);
    let mut y = x.to_vec();
    let mut done = 0;
    while done < k && y.iter().any(|&a| a <= 0.0) {
        y = m.mul_vec(&y);
        done += 1;
    }
    if done == k {
        return Ok((y, k as f64 * rounding));
    }
    let rest = k - done;
    let l = pd.l.max(1);
    let fy = {
        let mut z = m.mul_vec(&y);
        normalize(&mut z);
        z
    };
    let mut fl = fy.clone();
    for _ in 1..l {
        fl = m.mul_vec(&fl);
        normalize(&mut fl);
    }
    let d_m = (l as f64 * projective_distance(&y, &fy)?).min(projective_distance(&y, &fl)?);
    let delta = if pd.tau == 0.0 && rest >= l {
        0.0
    } else {
        pd.tau.powi((rest / l) as i32) * d_m / (1.0 - pd.tau)
    };
    let wx: f64 = pd.w.iter().zip(&y).map(|(a, b)| a * b).sum();
    let log_scale = rest as f64 * pd.log_rho + wx.ln();
    let est = pd.v.iter().map(|vi| (log_scale + vi.ln()).exp()).collect();
    let radius = delta
        + pd.v_radius
        + pd.w_radius
        + rest as f64 * pd.log_rho_radius
        + (done as f64 + l as f64) * rounding;
    Ok((est, radius))
}
