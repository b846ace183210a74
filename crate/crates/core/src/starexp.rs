//! Star exponentials and their semiclassical expansion.
//!
//! `Exp(-fσ) = Σ_n σ^n (-1)^n f^{⋆n} / n!` is computed term by term as a
//! [`SigmaSeries`].  Multiplying by the classical `e^{+fσ}` and collecting
//! powers of ħ yields the correction polynomials `𝒢_n(q, p, σ)`:
//!
//! `Exp(-fσ) = e^{-fσ} (1 + ħ^2 𝒢_2 + ħ^4 𝒢_4 + ...)`.
//!
//! Every σ-coefficient produced here is exact; truncating at σ-order N gives
//! the true coefficients 0..N of the full series.

use crate::error::{Error, Result};
use crate::phasepoly::{factorial, PhasePoly, Rat, StarContext};
use crate::sigma::SigmaSeries;

/// Guard on the σ-order of star-exponential expansions; factorials and star
/// powers beyond this are both slow and numerically pointless.
pub const MAX_SIGMA_ORDER: u32 = 40;

fn check_order(order: u32) -> Result<()> {
    if order > MAX_SIGMA_ORDER {
        return Err(Error::SeriesLimit(format!(
            "sigma order {order} exceeds the supported maximum {MAX_SIGMA_ORDER}"
        )));
    }
    Ok(())
}

/// σ-series of the star exponential `Exp(-fσ)` through `σ^order`.
///
/// The result always has exactly `order + 1` coefficient slots.
pub fn star_exp_series(f: &PhasePoly, order: u32, ctx: &StarContext) -> Result<SigmaSeries> {
    check_order(order)?;
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    coeffs.push(PhasePoly::one());
    let mut power = PhasePoly::one();
    for n in 1..=order {
        power = crate::phasepoly::star(&power, f, ctx)?;
        let sign = if n % 2 == 0 { Rat::from_integer(1.into()) } else { Rat::from_integer((-1).into()) };
        coeffs.push(power.scale_rat(&(sign / factorial(n))));
    }
    Ok(SigmaSeries::new(coeffs))
}

/// σ-series of the pointwise exponential `e^{+fσ}` through `σ^order`.
pub fn classical_exp_series(f: &PhasePoly, order: u32) -> Result<SigmaSeries> {
    check_order(order)?;
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    coeffs.push(PhasePoly::one());
    let mut power = PhasePoly::one();
    for n in 1..=order {
        power = power.mul(f)?;
        coeffs.push(power.scale_rat(&factorial(n).recip()));
    }
    Ok(SigmaSeries::new(coeffs))
}

/// The ħ-correction `𝒢_n` of `Exp(-fσ)` as a σ-series through `σ^sigma_order`.
///
/// For `f = α p^2 + v(q)` the polynomial `𝒢_n` has σ-degree at most `3n/2`,
/// so `sigma_order = 3n/2` captures it completely.
pub fn gcal(f: &PhasePoly, hbar_order: u32, sigma_order: u32) -> Result<SigmaSeries> {
    let ctx = StarContext::truncated(hbar_order);
    let star_side = star_exp_series(f, sigma_order, &ctx)?;
    let classical = classical_exp_series(f, sigma_order)?;
    let product = classical.mul_truncated(&star_side, sigma_order as usize)?;
    Ok(product.hbar_coefficient(hbar_order))
}

/// Truncated evaluation of the combinatorial double sums
///
/// `F_2(f) = Σ_{n≥2} (1/n!) Σ_{k=0}^{n-2} (n-1-k) f^{n-2}`
/// `G_2(f) = Σ_{n≥2} (1/n!) Σ_{k=0}^{n-2} (n-1-k)(n-2-k) f^{n-3}`
///
/// keeping terms through `n = n_max`.  The inner sums collapse to
/// `n(n-1)/2` and `n(n-1)(n-2)/3`, so the limits are `e^f/2` and `e^f/3`;
/// evaluating the sums literally keeps this function usable as an oracle for
/// that closed form.
pub fn f2_g2_truncated(f_value: f64, n_max: u32) -> (f64, f64) {
    let mut f2 = 0.0;
    let mut g2 = 0.0;
    // running f^{n-2}/n!
    let mut fpow_over_fact = 0.5; // n = 2 term: f^0 / 2!
    for n in 2..=n_max as u64 {
        let mut inner1 = 0.0;
        let mut inner2 = 0.0;
        for k in 0..=(n - 2) {
            let a = (n - 1 - k) as f64;
            let b = (n as f64) - 2.0 - k as f64;
            inner1 += a;
            inner2 += a * b;
        }
        f2 += fpow_over_fact * inner1;
        if n >= 3 {
            // f^{n-3}/n! = (f^{n-2}/n!) / f, guarded below for f = 0
            let fshift = if f_value == 0.0 {
                if n == 3 {
                    1.0 / 6.0
                } else {
                    0.0
                }
            } else {
                fpow_over_fact / f_value
            };
            g2 += fshift * inner2;
        } else {
            // n = 2: inner2 vanishes term by term
            debug_assert_eq!(inner2, 0.0);
        }
        fpow_over_fact *= f_value / (n as f64 + 1.0);
    }
    (f2, g2)
}

/// `ℰ_2(f) = -(1/8) ω_2(f,f) F_2(f) - (1/8) ω̃_2(f,f) G_2(f)` evaluated at a
/// phase-space point, with `F_2 = e^f/2` and `G_2 = e^f/3`.
pub fn eps2_general(f: &PhasePoly, q: f64, p: f64) -> Result<f64> {
    let w2 = crate::phasepoly::omega_k(f, f, 2)?;
    let w2t = crate::phasepoly::omega2_tilde(f)?;
    let fv = f.eval_f64(q, p, 0.0).re;
    let w2v = w2.eval_f64(q, p, 0.0).re;
    let w2tv = w2t.eval_f64(q, p, 0.0).re;
    let ef = fv.exp();
    Ok(-0.125 * w2v * (ef / 2.0) - 0.125 * w2tv * (ef / 3.0))
}

/// Heat-kernel version of the leading correction: `e^{-fσ} 𝒢_2(q, p, σ)` for
/// `f = α p^2 + v(q)`, evaluated with the analytic derivatives of `v`.
/// Multiplies the ħ^2 slot of `Exp(-fσ)`; the ħ value itself is not needed.
pub fn eps2_potential(
    alpha: f64,
    v: &crate::potential::PotentialSpec,
    sigma: f64,
    q: f64,
    p: f64,
) -> Result<f64> {
    let vders = v.vders9(q)?;
    let g = crate::jet::gcal_jet(2)?;
    let g2 = g[2].eval_f64(sigma, p, alpha, &vders);
    debug_assert!(g2.im.abs() < 1e-12);
    let f = alpha * p * p + vders[0];
    Ok((-f * sigma).exp() * g2.re)
}
